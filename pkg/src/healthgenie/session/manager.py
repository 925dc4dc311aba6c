"""Per-user conversational state, event-sourced.

The append-only action log is the single source of truth: the preference
profile is a pure fold over the non-undone actions, so undo is "mark and
refold" and replaying a log byte-for-byte reproduces the session. Staged
graph actions contribute nothing until an apply transitions them.
"""
from __future__ import annotations

import json
import time
from collections import deque
from dataclasses import dataclass, field

from ..config import EngineConfig
from ..errors import (
    AlreadyUndone,
    ApplyBlocked,
    DuplicateStage,
    EmptyMessage,
    InvalidUndoTarget,
    NoCandidates,
    NoStagedActions,
    UnknownAction,
    UnknownConflict,
    UnknownNode,
    UnknownProposal,
)
from ..gateway.service import GatewayService
from ..kg.model import GraphSnapshot
from ..matcher.engine import DEMOTE_PREFIX, Matcher, Recommendation
from ..query.model import (
    Conflict,
    Constraint,
    ConstraintKind,
    ConstraintSet,
    Intent,
    IntentCategory,
    Origin,
    UNRESOLVED_PREFIX,
    conflict_pair_id,
)
from ..query.parse import QueryParser
from .model import (
    ActionKind,
    InteractionAction,
    LearnedProposal,
    PreferenceProfile,
    STATUS_APPLIED,
    STATUS_STAGED,
    STATUS_UNDONE,
)

CONSTRAINT_INTENTS = (IntentCategory.RECIPE_SEARCH, IntentCategory.CONSTRAINT_OVERRIDE)

NO_RESULTS_REPLY = ("None of the recipes satisfy every active constraint. "
                    "Dropping one of the listed constraints would bring candidates back.")
REPROMPT_REPLY = ("I could not find any dietary constraint or known food in that. "
                  "Could you rephrase, naming the foods or limits you care about?")
NO_CONTEXT_REPLY = ("There is no recommendation yet. Ask for one, for example: "
                    "'Find me a vegan lunch under 400 kcal'.")
FALLBACK_CLARIFY_REPLY = ("Tell me what you would like to eat, or name a dietary "
                          "goal, and I will search the knowledge graph.")


@dataclass
class TurnResult:
    turn_id: int
    intent: Intent
    reply_text: str
    recommendation: Recommendation | None = None
    pending_clarifications: list = field(default_factory=list)
    conflicts: list = field(default_factory=list)
    learned_proposals: list = field(default_factory=list)
    no_candidates: dict | None = None

    def to_dict(self) -> dict:
        return {
            "turn_id": self.turn_id,
            "intent": self.intent.to_dict(),
            "reply_text": self.reply_text,
            "recommendation": self.recommendation.to_dict() if self.recommendation else None,
            "pending_clarifications": [
                {"term": t, "candidates": list(c)} for t, c in self.pending_clarifications
            ],
            "conflicts": [c.to_dict() for c in self.conflicts],
            "learned_proposals": [p.to_dict() for p in self.learned_proposals],
            "no_candidates": self.no_candidates,
        }


class Session:
    """One logical owner per session; turns are strictly serialized by the caller."""

    def __init__(self, session_id: str, snapshot: GraphSnapshot, parser: QueryParser,
                 matcher: Matcher, gateway: GatewayService, config: EngineConfig,
                 log_path=None, clock=time.time):
        self.id = session_id
        self.snapshot = snapshot
        self.parser = parser
        self.matcher = matcher
        self.gateway = gateway
        self.config = config
        self.log_path = log_path
        self._clock = clock
        self._forced_ids: deque[int] = deque()
        self._forced_timestamps: deque[float] = deque()

        self.actions: list[InteractionAction] = []
        self._next_id = 1
        self.profile = PreferenceProfile(history=self.actions)
        self.proposals: dict[str, LearnedProposal] = {}
        self.last_recommendation: Recommendation | None = None
        self.query_version = 0
        self._has_rec = False

        self._intent_cache: dict[tuple[str, bool], Intent] = {}
        self._parse_cache: dict = {}

    # --- log primitives ---------------------------------------------------------

    def _append(self, kind: ActionKind, target, status: str) -> InteractionAction:
        action_id = self._forced_ids.popleft() if self._forced_ids else self._next_id
        self._next_id = max(self._next_id, action_id) + 1
        timestamp = (self._forced_timestamps.popleft() if self._forced_timestamps
                     else self._clock())
        action = InteractionAction(id=action_id, kind=kind, target=target,
                                   timestamp=timestamp, status=status)
        self.actions.append(action)
        if self.log_path:
            with open(self.log_path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(action.to_record(), sort_keys=True) + "\n")
        return action

    def _find(self, action_id: int) -> InteractionAction:
        for action in self.actions:
            if action.id == action_id:
                return action
        raise UnknownAction(action_id)

    # --- cached parsing ------------------------------------------------------------

    def _classify_cached(self, message: str, has_rec: bool) -> Intent:
        key = (message, has_rec)
        if key not in self._intent_cache:
            history = [{"produced_recommendation": has_rec}]
            self._intent_cache[key] = self.parser.classify_intent(message, history)
        return self._intent_cache[key]

    def _parse_cached(self, message: str, intent: Intent, turn: int):
        """(constraints, pendings) or None when the message parses to nothing."""
        key = (message, intent.category, turn)
        if key not in self._parse_cache:
            try:
                parsed = self.parser.parse_constraints(message, intent, turn=turn)
                self._parse_cache[key] = (tuple(parsed.constraints),
                                          tuple(parsed.pending_clarifications))
            except Exception:
                self._parse_cache[key] = None
        return self._parse_cache[key]

    # --- the fold -------------------------------------------------------------------

    def _merge_constraint(self, cs: ConstraintSet, new: Constraint) -> None:
        """Latest wins within a slot; a flag entailment opens an unresolved
        conflict that must be acknowledged before the next apply."""
        for existing in cs.active():
            if existing.ref == new.ref:
                continue
            if existing.slot() == new.slot():
                cs.superseded[existing.ref] = new.ref
                for cf in cs.conflicts:
                    if cf.unresolved and existing.ref in (cf.a_ref, cf.b_ref):
                        cf.status, cf.winner = "resolved_latest", new.ref
            else:
                reason = self.parser.pair_conflict(existing, new)
                if reason is not None:
                    pair = conflict_pair_id(existing.ref, new.ref)
                    if all(c.pair_id != pair for c in cs.conflicts):
                        cs.conflicts.append(Conflict(pair, existing.ref, new.ref, reason))
        cs.constraints.append(new)

    def _graph_constraint(self, action: InteractionAction) -> Constraint:
        kind = (ConstraintKind.INCLUDE_ENTITY if action.kind is ActionKind.INCLUDE_NODE
                else ConstraintKind.EXCLUDE_ENTITY)
        return Constraint(kind, action.target, action.target, Origin.GRAPH_ACTION,
                          turn=action.id, ref=f"g{action.id}")

    def _learned_constraint(self, counter_key: str, turn: int, ref: str) -> Constraint:
        if self.snapshot.has_node(counter_key):
            return Constraint(ConstraintKind.EXCLUDE_ENTITY, counter_key, counter_key,
                              Origin.LEARNED, turn=turn, ref=ref)
        return Constraint(ConstraintKind.FLAG, f"{DEMOTE_PREFIX}{counter_key}", True,
                          Origin.LEARNED, turn=turn, ref=ref)

    def _fold_answer(self, cs: ConstraintSet, learned: list, answered: set,
                     action: InteractionAction) -> None:
        target = str(action.target)
        if target.startswith("conflict:"):
            _, pair_id, winner = target.split(":", 2)
            for cf in cs.conflicts:
                if cf.pair_id == pair_id and cf.unresolved and winner in (cf.a_ref, cf.b_ref):
                    cf.status, cf.winner = "resolved_user", winner
                    loser = cf.b_ref if winner == cf.a_ref else cf.a_ref
                    cs.superseded[loser] = winner
        elif target.startswith("learned:"):
            proposal_id = target.split(":", 1)[1]
            counter_key = proposal_id.split(":", 1)[1] if ":" in proposal_id else proposal_id
            constraint = self._learned_constraint(counter_key, action.id, f"l{action.id}")
            self._merge_constraint(cs, constraint)
            learned.append(constraint)
        elif target.startswith("term:"):
            _, term, choice = target.split(":", 2)
            answered.add(term)
            for c in list(cs.active()):
                if c.key == f"{UNRESOLVED_PREFIX}{term}":
                    node_id = self.parser.lexicon.lookup(choice)
                    if node_id is not None:
                        resolved = Constraint(c.kind, node_id, node_id, Origin.TEXT,
                                              turn=action.id, ref=f"t{action.id}.r")
                        cs.superseded[c.ref] = resolved.ref
                        self._merge_constraint(cs, resolved)
                    else:
                        cs.superseded[c.ref] = f"answer:{action.id}"
                elif c.kind is ConstraintKind.SUBJECTIVE and c.key == term:
                    cs.superseded[c.ref] = f"answer:{action.id}"
                    intent = Intent(IntentCategory.CONSTRAINT_OVERRIDE, 1.0,
                                    "clarification answer")
                    parsed = self._parse_cached(choice, intent, action.id)
                    if parsed:
                        for new in parsed[0]:
                            self._merge_constraint(cs, new)

    def _refold(self) -> None:
        cs, learned, counters, has_rec = self._fold()
        self.profile = PreferenceProfile(active_constraints=cs, history=self.actions,
                                         rejection_counters=counters, learned=learned)
        self._has_rec = has_rec
        self._derive_proposals()

    def _fold(self):
        """Pure derivation of the constraint state from the effective actions."""
        cs = ConstraintSet()
        learned: list[Constraint] = []
        answered: set[str] = set()
        has_rec = False
        for action in self.actions:
            if action.status == STATUS_UNDONE:
                continue
            if action.kind is ActionKind.TEXT_QUERY:
                intent = self._classify_cached(action.target, has_rec)
                if intent.category in CONSTRAINT_INTENTS:
                    parsed = self._parse_cached(action.target, intent, action.id)
                    if parsed is not None:
                        constraints, pendings = parsed
                        for c in constraints:
                            self._merge_constraint(cs, c)
                        for term, cands in pendings:
                            if (term not in answered
                                    and all(t != term for t, _ in cs.pending_clarifications)):
                                cs.pending_clarifications.append((term, cands))
                    has_rec = True
            elif action.kind in (ActionKind.INCLUDE_NODE, ActionKind.EXCLUDE_NODE):
                if action.status == STATUS_APPLIED:
                    self._merge_constraint(cs, self._graph_constraint(action))
            elif action.kind is ActionKind.APPLY:
                has_rec = True
            elif action.kind is ActionKind.CLARIFICATION_ANSWER:
                self._fold_answer(cs, learned, answered, action)
        cs.pending_clarifications = [(t, c) for t, c in cs.pending_clarifications
                                     if t not in answered]

        counters: dict[str, int] = {}
        for c in cs.active():
            if (c.kind is ConstraintKind.EXCLUDE_ENTITY and not c.is_unresolved
                    and not c.needs_confirmation and self.snapshot.has_node(c.key)):
                counters[c.key] = counters.get(c.key, 0) + 1
                for cls in sorted(self.snapshot.node(c.key).class_values()):
                    counters[cls] = counters.get(cls, 0) + 1
        return cs, learned, counters, has_rec

    def _derive_proposals(self) -> None:
        threshold = self.config.repetition_threshold
        active_learned_keys = set()
        for c in self.profile.active_constraints.active():
            if c.origin is Origin.LEARNED:
                key = c.key[len(DEMOTE_PREFIX):] if c.key.startswith(DEMOTE_PREFIX) else c.key
                active_learned_keys.add(key)
        proposals: dict[str, LearnedProposal] = {}
        for key in sorted(self.profile.rejection_counters):
            count = self.profile.rejection_counters[key]
            if count < threshold or key in active_learned_keys:
                continue
            if self.snapshot.has_node(key):
                continue  # the entity itself is already excluded; nothing to learn
            proposal_id = f"lp:{key}"
            proposals[proposal_id] = LearnedProposal(
                id=proposal_id, counter_key=key, count=count,
                constraint=self._learned_constraint(key, 0, f"lp:{key}"))
        self.proposals = proposals

    # --- recommendation plumbing ---------------------------------------------------

    def _active_excluded_nodes(self) -> set[str]:
        return {c.key for c in self.profile.active_constraints.filter_effective()
                if c.kind is ConstraintKind.EXCLUDE_ENTITY}

    def _regenerate(self, fresh: bool, removed_entities=(),
                    empty_on_no_candidates: bool = False) -> Recommendation:
        cs = self.profile.active_constraints
        version = self.query_version + 1
        detail = self.config.recommend.default_detail
        try:
            if fresh or self.last_recommendation is None:
                rec = self.matcher.recommend(cs, self.snapshot, detail, version)
            else:
                rec = self.matcher.adapt(self.last_recommendation, cs, self.snapshot,
                                         detail, version,
                                         removed_entities=removed_entities)
        except NoCandidates as exc:
            if not empty_on_no_candidates:
                raise
            # the state change stands; the view empties out with everything fading
            rec = self.matcher.empty_recommendation(exc.diagnostics,
                                                    self.last_recommendation,
                                                    detail, version)
        self.query_version = version
        self.last_recommendation = rec
        return rec

    # --- operations -------------------------------------------------------------------

    def route_turn(self, message: str) -> TurnResult:
        if not message or not message.strip():
            raise EmptyMessage()
        intent = self._classify_cached(message, self._has_rec)
        action = self._append(ActionKind.TEXT_QUERY, message, STATUS_APPLIED)

        result = TurnResult(turn_id=action.id, intent=intent, reply_text="")
        if intent.category in CONSTRAINT_INTENTS:
            prev_excluded = self._active_excluded_nodes()
            self._refold()
            parsed = self._parse_cached(message, intent, action.id)
            if parsed is None:
                result.reply_text = REPROMPT_REPLY
            else:
                removed = self._active_excluded_nodes() - prev_excluded
                try:
                    rec = self._regenerate(
                        fresh=(intent.category is IntentCategory.RECIPE_SEARCH),
                        removed_entities=sorted(removed))
                    result.recommendation = rec
                    result.reply_text = self.gateway.generate_summary(rec.summary_payload)
                except NoCandidates as exc:
                    result.no_candidates = exc.diagnostics
                    result.reply_text = NO_RESULTS_REPLY
        elif intent.category is IntentCategory.INFORMATION_REQUEST:
            if self.last_recommendation is not None:
                result.reply_text = self.gateway.generate_summary(
                    self.last_recommendation.summary_payload)
            else:
                result.reply_text = NO_CONTEXT_REPLY
        else:
            pending = self.profile.active_constraints.pending_clarifications
            if pending:
                term, candidates = pending[0]
                result.reply_text = self.gateway.clarify(term, list(candidates))
            else:
                result.reply_text = FALLBACK_CLARIFY_REPLY

        result.pending_clarifications = list(
            self.profile.active_constraints.pending_clarifications)
        result.conflicts = self.profile.active_constraints.unresolved_conflicts()
        result.learned_proposals = sorted(self.proposals.values(), key=lambda p: p.id)
        return result

    def stage_action(self, kind: str, node_id: str) -> InteractionAction:
        action_kind = ActionKind(kind if kind.endswith("_node") else f"{kind}_node")
        if action_kind not in (ActionKind.INCLUDE_NODE, ActionKind.EXCLUDE_NODE):
            raise ValueError(f"not a stageable kind: {kind!r}")
        if not self.snapshot.has_node(node_id):
            raise UnknownNode(node_id)
        for action in self.actions:
            if (action.status == STATUS_STAGED and action.kind is action_kind
                    and action.target == node_id):
                raise DuplicateStage(node_id, action_kind.value)
        return self._append(action_kind, node_id, STATUS_STAGED)

    def staged_actions(self) -> list[InteractionAction]:
        return [a for a in self.actions if a.status == STATUS_STAGED]

    def staged_conflicts(self) -> list[Conflict]:
        """Preview: conflict state as it would stand right after apply.

        Runs the real fold with staged actions tentatively applied, so
        resolutions already on the log count. Same-slot polarity flips
        (include then exclude of one node) are surfaced as resolved_latest
        pairs rather than silently folded.
        """
        staged = self.staged_actions()
        for action in staged:
            action.status = STATUS_APPLIED
        try:
            cs, _, _, _ = self._fold()
        finally:
            for action in staged:
                action.status = STATUS_STAGED
        out = list(cs.unresolved_conflicts())
        by_ref = {c.ref: c for c in cs.constraints}
        for loser_ref, winner_ref in cs.superseded.items():
            loser, winner = by_ref.get(loser_ref), by_ref.get(winner_ref)
            if loser is None or winner is None:
                continue
            if ({loser.kind, winner.kind} == {ConstraintKind.INCLUDE_ENTITY,
                                              ConstraintKind.EXCLUDE_ENTITY}
                    and loser.key == winner.key):
                out.append(Conflict(conflict_pair_id(loser_ref, winner_ref),
                                    loser_ref, winner_ref, "include_exclude",
                                    status="resolved_latest", winner=winner_ref))
        return out

    def apply(self, allow_empty: bool = False) -> tuple[PreferenceProfile, Recommendation]:
        staged = self.staged_actions()
        if not staged and not allow_empty:
            raise NoStagedActions()
        prev_excluded = self._active_excluded_nodes()
        for action in staged:
            action.status = STATUS_APPLIED
        self._refold()
        blocked = self.profile.active_constraints.unresolved_conflicts()
        if blocked:
            for action in staged:
                action.status = STATUS_STAGED
            self._refold()
            raise ApplyBlocked([c.pair_id for c in blocked])
        self._append(ActionKind.APPLY, None, STATUS_APPLIED)
        self._refold()
        removed = self._active_excluded_nodes() - prev_excluded
        rec = self._regenerate(fresh=False, removed_entities=sorted(removed),
                               empty_on_no_candidates=True)
        return self.profile, rec

    def undo(self, action_id: int) -> tuple[PreferenceProfile, Recommendation]:
        action = self._find(action_id)
        if action.status == STATUS_UNDONE:
            raise AlreadyUndone(action_id)
        if action.kind in (ActionKind.APPLY, ActionKind.UNDO):
            raise InvalidUndoTarget(action_id, "apply/undo records are bookkeeping")
        if action.status == STATUS_STAGED:
            raise InvalidUndoTarget(action_id, "only applied actions can be undone")
        action.status = STATUS_UNDONE
        self._append(ActionKind.UNDO, action_id, STATUS_APPLIED)
        self._refold()
        rec = self._regenerate(fresh=self.last_recommendation is None,
                               empty_on_no_candidates=True)
        return self.profile, rec

    def resolve_conflict(self, pair_id: str, winner_ref: str) -> PreferenceProfile:
        candidates = {c.pair_id: c for c in self.profile.active_constraints.unresolved_conflicts()}
        for c in self.staged_conflicts():
            if c.unresolved:
                candidates.setdefault(c.pair_id, c)
        conflict = candidates.get(pair_id)
        if conflict is None or winner_ref not in (conflict.a_ref, conflict.b_ref):
            raise UnknownConflict(pair_id)
        self._append(ActionKind.CLARIFICATION_ANSWER,
                     f"conflict:{pair_id}:{winner_ref}", STATUS_APPLIED)
        self._refold()
        return self.profile

    def confirm_learned(self, proposal_id: str) -> PreferenceProfile:
        if proposal_id not in self.proposals:
            raise UnknownProposal(proposal_id)
        self._append(ActionKind.CLARIFICATION_ANSWER, f"learned:{proposal_id}",
                     STATUS_APPLIED)
        self._refold()
        return self.profile

    def answer_clarification(self, term: str, choice: str) -> PreferenceProfile:
        self._append(ActionKind.CLARIFICATION_ANSWER, f"term:{term}:{choice}",
                     STATUS_APPLIED)
        self._refold()
        return self.profile

    def learn_repetition(self) -> list[LearnedProposal]:
        return sorted(self.proposals.values(), key=lambda p: p.id)

    # --- persistence ------------------------------------------------------------------

    def records(self) -> list[dict]:
        return [a.to_record() for a in self.actions]

    @classmethod
    def replay(cls, records, session_id: str, snapshot: GraphSnapshot, parser: QueryParser,
               matcher: Matcher, gateway: GatewayService, config: EngineConfig,
               log_path=None) -> "Session":
        """Re-execute a recorded log; deterministic given the same snapshot.

        Ids and timestamps come from the records, so the rebuilt session is
        structurally identical to the one that wrote the log.
        """
        session = cls(session_id, snapshot, parser, matcher, gateway, config,
                      log_path=log_path)
        session._forced_ids = deque(r["action_id"] for r in records)
        session._forced_timestamps = deque(r["timestamp"] for r in records)
        for record in records:
            kind = ActionKind(record["kind"])
            if kind is ActionKind.TEXT_QUERY:
                session.route_turn(record["target"])
            elif kind in (ActionKind.INCLUDE_NODE, ActionKind.EXCLUDE_NODE):
                session.stage_action(kind.value, record["target"])
            elif kind is ActionKind.APPLY:
                session.apply(allow_empty=True)
            elif kind is ActionKind.UNDO:
                session.undo(record["target"])
            elif kind is ActionKind.CLARIFICATION_ANSWER:
                session._append(ActionKind.CLARIFICATION_ANSWER, record["target"],
                                STATUS_APPLIED)
                session._refold()
        return session

    @staticmethod
    def read_log(path) -> list[dict]:
        records = []
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    records.append(json.loads(line))
        return records
