"""Free text -> intent + symbolic constraints.

The pipeline is deliberately shallow: lexicon longest-match for entities,
a token grammar for numeric thresholds, cue words for polarity, and data
files (flags, entailments, nutrient defaults) for everything domain-shaped.
Unknown words yield no constraint rather than a guess.
"""
from __future__ import annotations

import csv
import re
from dataclasses import dataclass

from ..config import EngineConfig
from ..errors import EmptyMessage, NoParsableContent
from ..gateway.service import GatewayService
from ..kg.model import GraphSnapshot, Unit, canonical_quantity
from .lexicon import Lexicon, tokenize
from .model import (
    Bound,
    Conflict,
    Constraint,
    ConstraintKind,
    ConstraintSet,
    Intent,
    IntentCategory,
    Origin,
    UNRESOLVED_PREFIX,
    bounds_contradict,
    conflict_pair_id,
)

COMPARATOR_PHRASES = {
    ("under",): "<", ("below",): "<", ("less", "than"): "<", ("fewer", "than"): "<",
    ("at", "most"): "<=", ("no", "more", "than"): "<=", ("within",): "<=",
    ("over",): ">", ("above",): ">", ("more", "than"): ">", ("exceeding",): ">",
    ("at", "least"): ">=",
}

NUMBER_WORDS = {w: i + 1 for i, w in enumerate(
    ("one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten",
     "eleven", "twelve", "thirteen", "fourteen", "fifteen", "sixteen", "seventeen",
     "eighteen", "nineteen", "twenty"))}

UNIT_WORDS = {
    "kcal": Unit.KCAL, "calorie": Unit.KCAL, "calories": Unit.KCAL,
    "g": Unit.G, "gram": Unit.G, "grams": Unit.G,
    "mg": Unit.MG, "milligram": Unit.MG, "milligrams": Unit.MG,
}

NEGATE_CUES = {"no", "not", "without", "avoid", "avoiding", "dislike", "dislikes",
               "hate", "hates", "exclude", "excluding", "remove", "removing",
               "skip", "allergic", "never"}
REDUCE_CUES = {"reduce", "reducing", "less", "lower", "low", "limit", "limiting",
               "cut", "cutting", "decrease", "light"}
INCREASE_CUES = {"more", "increase", "increasing", "boost", "extra", "high", "rich"}
INCLUDE_CUES = {"include", "including", "add", "adding", "with", "want", "like",
                "love", "prefer", "keep", "use", "using", "incorporate"}

HARVEST_STOPWORDS = {
    "a", "an", "the", "some", "any", "please", "me", "my", "i", "to", "for", "of",
    "in", "on", "it", "them", "this", "that", "and", "or", "but", "intake", "food",
    "foods", "meal", "meals", "dish", "dishes", "recipe", "recipes", "diet",
    "lunch", "dinner", "breakfast", "snack", "something", "anything", "option",
    "options", "alternatives", "alternative", "ideas", "idea",
}

_SENTENCE_BREAK = re.compile(r"[.;!?,]")


@dataclass(frozen=True)
class Mention:
    """One extract_keywords hit: an entity or a (possibly bounded) attribute."""
    text: str
    start: int
    end: int
    kind: str                   # "entity" | "attribute"
    node_id: str | None = None
    attr: str | None = None
    threshold: Bound | None = None


@dataclass(frozen=True)
class Resolution:
    status: str                 # "resolved" | "proposal" | "unresolved"
    node_id: str | None = None
    proposal_surface: str | None = None


class Entailments:
    """flag key -> categorical classes the flag forbids (data, not code)."""

    def __init__(self, rows=()):
        self._map: dict[str, frozenset[str]] = {}
        grouped: dict[str, set[str]] = {}
        for flag, cls in rows:
            grouped.setdefault(flag, set()).add(cls)
        self._map = {flag: frozenset(classes) for flag, classes in grouped.items()}

    @classmethod
    def from_file(cls, path) -> "Entailments":
        rows = []
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            next(reader, None)
            for row in reader:
                if len(row) >= 2 and row[0].strip():
                    rows.append((row[0].strip(), row[1].strip()))
        return cls(rows)

    def excluded_classes(self, flag_key: str) -> frozenset[str]:
        return self._map.get(flag_key, frozenset())


class QueryParser:
    """Parses one message at a time against a pinned snapshot + lexicon."""

    def __init__(self, config: EngineConfig, snapshot: GraphSnapshot, lexicon: Lexicon,
                 entailments: Entailments, gateway: GatewayService):
        self.config = config
        self.snapshot = snapshot
        self.lexicon = lexicon
        self.entailments = entailments
        self.gateway = gateway

    # --- intent ---------------------------------------------------------------

    def classify_intent(self, message: str, history=()) -> Intent:
        if not message or not message.strip():
            raise EmptyMessage()
        has_rec = any(turn.get("produced_recommendation") for turn in history)
        result = self.gateway.classify_intent(message, has_rec)
        return Intent(IntentCategory(result["category"]), result["confidence"],
                      result["rationale"])

    # --- keyword extraction ------------------------------------------------------

    def extract_keywords(self, message: str) -> list[Mention]:
        entity_mentions = self.lexicon.find_mentions(message)
        tokens = tokenize(message)
        covered = set()
        for m in entity_mentions:
            for idx, tok in enumerate(tokens):
                if tok.start >= m.start and tok.end <= m.end:
                    covered.add(idx)

        bounds, consumed, attr_positions = self._scan_thresholds(tokens, covered)

        mentions = [Mention(m.text, m.start, m.end, "entity", node_id=m.node_id)
                    for m in entity_mentions]
        for idx, attr in attr_positions.items():
            tok = tokens[idx]
            mentions.append(Mention(tok.text, tok.start, tok.end, "attribute",
                                    attr=attr, threshold=bounds.get(idx)))
        mentions.sort(key=lambda m: m.start)
        return mentions

    def _scan_thresholds(self, tokens, covered):
        """Token grammar: CMP NUM [UNIT] [of] [ATTR] with an ATTR lookback.

        Mass nutrients need an explicit unit word; only calories may omit it
        (kcal implied). Unit/attribute mismatches are dropped, not coerced.
        """
        attr_surfaces = self.config.attribute_surfaces
        attr_positions: dict[int, str] = {}
        for idx, tok in enumerate(tokens):
            if idx in covered:
                continue
            attr = attr_surfaces.get(tok.text)
            if attr is not None:
                attr_positions[idx] = attr

        bounds: dict[int, Bound] = {}
        consumed: set[int] = set()
        i = 0
        while i < len(tokens):
            phrase_hit = None
            for phrase, comparator in COMPARATOR_PHRASES.items():
                n = len(phrase)
                if tuple(t.text for t in tokens[i:i + n]) == phrase:
                    if phrase_hit is None or n > len(phrase_hit[0]):
                        phrase_hit = (phrase, comparator)
            if phrase_hit is None:
                i += 1
                continue
            phrase, comparator = phrase_hit
            j = i + len(phrase)
            if j >= len(tokens):
                break
            raw = tokens[j].text
            if raw.isdigit():
                value = float(raw)
            elif raw in NUMBER_WORDS:
                value = float(NUMBER_WORDS[raw])
            else:
                try:
                    value = float(raw)
                except ValueError:
                    i += 1
                    continue
            k = j + 1
            unit = None
            unit_idx = None
            if k < len(tokens) and tokens[k].text in UNIT_WORDS:
                unit = UNIT_WORDS[tokens[k].text]
                unit_idx = k
                k += 1
            if k < len(tokens) and tokens[k].text == "of":
                k += 1
            attr = None
            attr_idx = None
            if k < len(tokens) and attr_positions.get(k):
                attr = attr_positions[k]
                attr_idx = k
            if attr is None and unit is Unit.KCAL:
                attr = "calories"
                attr_idx = unit_idx
            if attr is None:
                # lookback: "sodium under 500 mg"
                for back in range(i - 1, max(-1, i - 4), -1):
                    if back in attr_positions:
                        attr = attr_positions[back]
                        attr_idx = back
                        break
            if attr is None:
                i = j + 1
                continue
            if unit is None:
                if attr == "calories":
                    unit = Unit.KCAL
                else:
                    i = j + 1
                    continue  # mass nutrients need an explicit unit
            value, unit = canonical_quantity(value, unit)
            if unit is not self.config.attribute_units.get(attr, unit):
                i = j + 1
                continue
            bounds[attr_idx] = Bound(comparator, value, unit)
            if attr_idx not in attr_positions:
                attr_positions[attr_idx] = attr
            consumed.update(range(i, k))
            consumed.add(attr_idx)
            i = k
        return bounds, consumed, attr_positions

    # --- entity resolution ----------------------------------------------------

    def resolve_entity(self, mention: str) -> Resolution:
        """Exact label > static synonym > deterministic proposal > unresolved."""
        node_id = self.lexicon.lookup(mention)
        if node_id is not None:
            return Resolution("resolved", node_id=node_id)
        proposal = self.gateway.propose_synonym(mention, self.lexicon.known_surfaces())
        if proposal is not None:
            proposed_node = self.lexicon.lookup(proposal)
            if proposed_node is not None and proposal != mention.lower().strip():
                return Resolution("proposal", node_id=proposed_node,
                                  proposal_surface=proposal)
        return Resolution("unresolved")

    # --- constraint parsing -----------------------------------------------------

    def parse_constraints(self, message: str, intent: Intent, turn: int = 0) -> ConstraintSet:
        if intent.category not in (IntentCategory.RECIPE_SEARCH,
                                   IntentCategory.CONSTRAINT_OVERRIDE):
            raise ValueError("parse_constraints expects a constraint-bearing intent")
        tokens = tokenize(message)
        entity_mentions = self.lexicon.find_mentions(message)
        covered: set[int] = set()
        token_of_char: dict[int, int] = {}
        for idx, tok in enumerate(tokens):
            token_of_char[tok.start] = idx
        mention_by_token: dict[int, object] = {}
        for m in entity_mentions:
            for idx, tok in enumerate(tokens):
                if tok.start >= m.start and tok.end <= m.end:
                    covered.add(idx)
                    mention_by_token.setdefault(idx, m)

        bounds, consumed, attr_positions = self._scan_thresholds(tokens, covered)

        flag_hits = self._scan_phrases(tokens, covered | consumed, self.config.flag_surfaces)
        method_hits = self._scan_phrases(tokens, covered | consumed, self.config.method_surfaces)
        phrase_tokens = {idx for span in list(flag_hits) + list(method_hits)
                         for idx in range(span[0], span[1])}
        subjective_hits = {idx: tokens[idx].text for idx in range(len(tokens))
                           if idx not in covered and idx not in phrase_tokens
                           and tokens[idx].text in self.config.subjective_terms}

        breaks = {m.start() for m in _SENTENCE_BREAK.finditer(message)}

        def context_alive(cue_end_char: int, target_start_char: int) -> bool:
            return not any(cue_end_char <= b < target_start_char for b in breaks)

        constraints: list[Constraint] = []
        pending: list[tuple[str, tuple[str, ...]]] = []
        seen_slots: set[tuple[str, str]] = set()

        def add(kind, key, value, needs_confirmation=False):
            c = Constraint(kind, key, value, Origin.TEXT, turn,
                           ref=f"t{turn}.{len(constraints)}",
                           needs_confirmation=needs_confirmation)
            if c.slot() in seen_slots and kind is not ConstraintKind.BOUND:
                return
            seen_slots.add(c.slot())
            constraints.append(c)

        # polarity contexts: negation binds the nearest following mention
        # (plus and/or chains); directions persist to the sentence break.
        context: tuple[str, int] | None = None   # (kind, cue end char)
        last_polarity: tuple[str, int] | None = None  # (polarity, mention token end)
        handled_entities: set[int] = set()

        idx = 0
        while idx < len(tokens):
            tok = tokens[idx]
            if idx in consumed and idx not in attr_positions:
                idx += 1
                continue
            word = tok.text
            if idx not in covered:
                if word in NEGATE_CUES:
                    context = ("negate", tok.end)
                    idx += 1
                    continue
                if word in REDUCE_CUES:
                    context = ("reduce", tok.end)
                    idx += 1
                    continue
                if word in INCREASE_CUES:
                    context = ("increase", tok.end)
                    idx += 1
                    continue
                if word in INCLUDE_CUES:
                    context = ("include", tok.end)
                    idx += 1
                    continue

            if idx in mention_by_token and idx not in handled_entities:
                m = mention_by_token[idx]
                polarity = "include"
                if context is not None and context_alive(context[1], m.start):
                    polarity = {"negate": "exclude", "reduce": "exclude",
                                "increase": "include", "include": "include"}[context[0]]
                    if context[0] == "negate":
                        context = None  # nearest-mention scope
                elif last_polarity is not None and self._chains(tokens, last_polarity[1], m.start, message):
                    polarity = last_polarity[0]
                kind = (ConstraintKind.EXCLUDE_ENTITY if polarity == "exclude"
                        else ConstraintKind.INCLUDE_ENTITY)
                add(kind, m.node_id, m.node_id)
                last_polarity = (polarity, m.end)
                for t_idx, tok2 in enumerate(tokens):
                    if tok2.start >= m.start and tok2.end <= m.end:
                        handled_entities.add(t_idx)
                idx += 1
                continue

            if idx in attr_positions:
                attr = attr_positions[idx]
                bound = bounds.get(idx)
                if bound is not None:
                    add(ConstraintKind.BOUND, attr, bound)
                else:
                    direction = None
                    if context is not None and context_alive(context[1], tok.start):
                        direction = {"negate": "reduce", "reduce": "reduce",
                                     "increase": "increase", "include": "increase"}[context[0]]
                    if direction is not None:
                        default = self.config.default_bound(attr, direction)
                        if default is not None:
                            add(ConstraintKind.BOUND, attr,
                                Bound(default.comparator, default.value, default.unit))
                idx += 1
                continue

            idx += 1

        for span, flag_key in flag_hits.items():
            add(ConstraintKind.FLAG, flag_key, True)
        for span, method_key in method_hits.items():
            add(ConstraintKind.METHOD_FLAG, method_key, True)
        for idx, term in subjective_hits.items():
            add(ConstraintKind.SUBJECTIVE, term, term)
            pending.append((term, self.config.subjective_terms[term]))

        self._harvest_unknowns(tokens, covered, consumed, attr_positions, phrase_tokens,
                               subjective_hits, message, breaks, constraints, pending,
                               seen_slots, turn)

        if not constraints and not pending and not entity_mentions and not attr_positions:
            raise NoParsableContent(message)

        cs = ConstraintSet(constraints=constraints, pending_clarifications=pending)
        return self.detect_conflicts(cs)

    @staticmethod
    def _chains(tokens, prev_end_char: int, start_char: int, message: str) -> bool:
        """True when only and/or (or a comma) separates two mentions."""
        between = message[prev_end_char:start_char]
        words = re.findall(r"[a-z']+", between.lower())
        if any(w not in ("and", "or") for w in words):
            return False
        return "." not in between and ";" not in between

    def _scan_phrases(self, tokens, blocked, table: dict[str, str]) -> dict[tuple[int, int], str]:
        """Greedy n-gram scan for configured surfaces (flags, method phrases)."""
        if not table:
            return {}
        max_n = max(len(s.split()) for s in table)
        hits: dict[tuple[int, int], str] = {}
        i = 0
        while i < len(tokens):
            if i in blocked:
                i += 1
                continue
            matched = False
            for n in range(min(max_n, len(tokens) - i), 0, -1):
                if any((i + d) in blocked for d in range(n)):
                    continue
                surface = " ".join(t.text for t in tokens[i:i + n])
                if surface in table:
                    hits[(i, i + n)] = table[surface]
                    i += n
                    matched = True
                    break
            if not matched:
                i += 1
        return hits

    def _harvest_unknowns(self, tokens, covered, consumed, attr_positions, phrase_tokens,
                          subjective_hits, message, breaks, constraints, pending,
                          seen_slots, turn):
        """Unknown words right after an include/negate cue become clarification
        candidates (with a deterministic substitute proposal when one exists)."""
        cue_positions = []
        for idx, tok in enumerate(tokens):
            if idx in covered or idx in consumed:
                continue
            if tok.text in NEGATE_CUES or tok.text in INCLUDE_CUES:
                cue_positions.append((idx, tok.text in NEGATE_CUES))
        known_bad = (HARVEST_STOPWORDS | NEGATE_CUES | REDUCE_CUES | INCREASE_CUES
                     | INCLUDE_CUES | set(UNIT_WORDS) | set(NUMBER_WORDS))
        for cue_idx, is_negate in cue_positions:
            for idx in range(cue_idx + 1, min(cue_idx + 3, len(tokens))):
                if (idx in covered or idx in consumed or idx in attr_positions
                        or idx in phrase_tokens or idx in subjective_hits):
                    continue
                word = tokens[idx].text
                if word in known_bad or word.isdigit() or len(word) < 3:
                    continue
                resolution = self.resolve_entity(word)
                if resolution.status == "resolved":
                    continue  # already surfaced as a mention
                kind = (ConstraintKind.EXCLUDE_ENTITY if is_negate
                        else ConstraintKind.INCLUDE_ENTITY)
                key = f"{UNRESOLVED_PREFIX}{word}"
                c = Constraint(kind, key, word, Origin.TEXT, turn,
                               ref=f"t{turn}.{len(constraints)}", needs_confirmation=True)
                if c.slot() in seen_slots:
                    continue
                seen_slots.add(c.slot())
                constraints.append(c)
                candidates = ((resolution.proposal_surface,)
                              if resolution.status == "proposal" else ())
                pending.append((word, candidates))
                break  # one candidate per cue

    # --- conflicts -----------------------------------------------------------

    def detect_conflicts(self, cs: ConstraintSet) -> ConstraintSet:
        existing = {c.pair_id for c in cs.conflicts}
        active = cs.active()
        for i, a in enumerate(active):
            for b in active[i + 1:]:
                found = self.pair_conflict(a, b)
                if found is None:
                    continue
                pair_id = conflict_pair_id(a.ref, b.ref)
                if pair_id in existing:
                    continue
                existing.add(pair_id)
                cs.conflicts.append(Conflict(pair_id, a.ref, b.ref, found))
        return cs

    def pair_conflict(self, a: Constraint, b: Constraint) -> str | None:
        kinds = {a.kind, b.kind}
        if kinds == {ConstraintKind.INCLUDE_ENTITY, ConstraintKind.EXCLUDE_ENTITY}:
            if a.key == b.key and not a.is_unresolved:
                return "include_exclude"
            return None
        if a.kind is ConstraintKind.BOUND and b.kind is ConstraintKind.BOUND:
            if a.key == b.key and bounds_contradict(a.value, b.value):
                return "contradictory_bounds"
            return None
        flag, include = None, None
        if a.kind is ConstraintKind.FLAG and b.kind is ConstraintKind.INCLUDE_ENTITY:
            flag, include = a, b
        elif b.kind is ConstraintKind.FLAG and a.kind is ConstraintKind.INCLUDE_ENTITY:
            flag, include = b, a
        if flag is not None and include is not None and not include.is_unresolved:
            if flag.value is True and self.snapshot.has_node(include.key):
                node = self.snapshot.node(include.key)
                if self.entailments.excluded_classes(flag.key) & node.class_values():
                    return "flag_entailment"
        return None
