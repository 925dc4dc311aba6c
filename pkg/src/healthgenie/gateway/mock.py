"""Offline stand-in provider: every task is a pure function of its envelope.

The rule tables here are the documented ground truth for the intent fixture
set; tests assert determinism against them, not accuracy.
"""
from __future__ import annotations

import re

from .base import PromptEnvelope, Task, validate_response
from .grounding import format_number

# Keyword tables for intent rules, in precedence order:
#  1. override keyword + an earlier recommendation -> constraint_override
#  2. question opener or trailing "?"              -> information_request
#  3. recipe keyword or meal noun                  -> recipe_search
#  4. fallback                                     -> general_clarification
OVERRIDE_KEYWORDS = ("remove", "instead", "without", "exclude", "dislike",
                     "avoid", "include", "add ", "skip", "swap", "no more")
RECIPE_KEYWORDS = ("recommend", "find", "suggest", "show", "search",
                   "looking for", "give me", "i want", "i need",
                   "lunch", "dinner", "breakfast", "snack", "meal",
                   "recipe", "dish")
QUESTION_OPENERS = ("what", "how", "why", "which", "who", "when", "where",
                    "tell me", "explain", "is ", "are ", "does ", "do ")

EXTRACTION_PATTERNS = (
    (re.compile(r"^(?P<s>.+?) alleviates (?P<o>.+?) odor\.?$", re.I), "neutralizeOdor", False),
    (re.compile(r"^(?P<s>.+?) (?:is|are) recommended for (?P<o>.+?)\.?$", re.I), "recommendsFor", False),
    (re.compile(r"^(?P<s>.+?) (?:is|are) a good substitute for (?P<o>.+?)\.?$", re.I), "substitutableBy", True),
    (re.compile(r"^(?P<s>.+?) derives? from (?P<o>.+?)\.?$", re.I), "derivesFrom", False),
    (re.compile(r"^(?P<s>.+?) contains? (?P<o>.+?)\.?$", re.I), "contains", False),
)

EMPTY_RESULT_MESSAGE = ("No recipe satisfies every active constraint yet. "
                        "Consider relaxing one of them.")

GENERIC_STARTERS = (
    "Find me a vegan lunch under 400 kcal",
    "Recommend a low-sodium dinner",
    "What are the nutritional values of spinach?",
)


class MockProvider:
    """Deterministic rule-driven provider; the default and the test path."""

    def complete(self, envelope: PromptEnvelope) -> dict:
        handler = {
            Task.INTENT_CLASSIFICATION: self._classify,
            Task.SUMMARY: self._summarize,
            Task.QUERY_GENERATION: self._suggest,
            Task.RELATION_EXTRACTION: self._extract,
            Task.SYNONYM_PROPOSAL: self._synonym,
            Task.CLARIFICATION: self._clarify,
        }[envelope.task]
        return validate_response(envelope, handler(envelope.structured_inputs))

    # --- intent ------------------------------------------------------------

    @staticmethod
    def _classify(inputs: dict) -> dict:
        message = inputs["message"].lower().strip()
        has_rec = bool(inputs.get("has_recommendation"))
        padded = f" {message}"
        for kw in OVERRIDE_KEYWORDS:
            if kw in padded and has_rec:
                return {"category": "constraint_override", "confidence": 0.9,
                        "rationale": f"matched override keyword {kw.strip()!r} after a recommendation"}
        if message.endswith("?") or any(message.startswith(q) for q in QUESTION_OPENERS):
            return {"category": "information_request", "confidence": 0.75,
                    "rationale": "question form"}
        for kw in RECIPE_KEYWORDS:
            if kw in padded:
                return {"category": "recipe_search", "confidence": 0.9,
                        "rationale": f"matched recipe keyword {kw!r}"}
        return {"category": "general_clarification", "confidence": 0.4,
                "rationale": "no keyword matched"}

    # --- summary -------------------------------------------------------------

    @staticmethod
    def _summarize(inputs: dict) -> dict:
        dishes = inputs.get("dishes", [])
        if not dishes:
            return {"text": EMPTY_RESULT_MESSAGE}
        paragraphs = []
        for dish in dishes:
            bits = [dish["name"]]
            attr_bits = []
            for attr, spec in sorted(dish.get("attrs", {}).items()):
                if attr == "calories":
                    attr_bits.append(f"{format_number(spec['value'])} kcal")
                    continue
                unit = spec["unit"] if spec["unit"] != "none" else ""
                attr_bits.append(f"{format_number(spec['value'])} {unit} {attr}".strip())
            if attr_bits:
                bits.append("has " + ", ".join(attr_bits))
            for attr, tag in sorted(dish.get("qualitative", {}).items()):
                bits.append(f"is {tag} in {attr}")
            for cls in dish.get("free_of", []):
                bits.append(f"excludes {cls}")
            if dish.get("satisfied"):
                bits.append("meets " + "; ".join(dish["satisfied"]))
            for note in dish.get("substitutions", []):
                bits.append(note)
            paragraphs.append(bits[0] + " " + ", ".join(bits[1:]) + "." if len(bits) > 1
                              else bits[0] + ".")
        return {"text": "\n".join(paragraphs)}

    # --- query generation ----------------------------------------------------

    @staticmethod
    def _suggest(inputs: dict) -> dict:
        top_dish = inputs.get("top_dish")
        if not inputs.get("has_history") or not top_dish:
            return {"suggestions": list(GENERIC_STARTERS)}
        return {"suggestions": [
            f"Show lower-sodium alternatives to {top_dish}",
            f"What are the nutritional values of {top_dish}?",
            "Recommend something with more fiber",
        ]}

    # --- relation extraction ---------------------------------------------------

    @staticmethod
    def _extract(inputs: dict) -> dict:
        proposals = []
        for line in inputs.get("text", "").splitlines():
            line = line.strip()
            if not line:
                continue
            for pattern, relation, flipped in EXTRACTION_PATTERNS:
                m = pattern.match(line)
                if not m:
                    continue
                s, o = m.group("s").strip().lower(), m.group("o").strip().lower()
                if flipped:
                    s, o = o, s
                proposals.append({"subject": s, "relation": relation, "object": o})
                break
        return {"proposals": proposals}

    # --- synonym proposal ------------------------------------------------------

    @staticmethod
    def _synonym(inputs: dict) -> dict:
        mention = inputs["mention"].lower().strip()
        best, best_len = None, 0
        for surface in sorted(inputs.get("known_surfaces", [])):
            prefix = 0
            for a, b in zip(mention, surface):
                if a != b:
                    break
                prefix += 1
            if prefix > best_len:
                best, best_len = surface, prefix
        # conservative: long shared prefix covering most of the mention
        if best is not None and best_len >= 5 and best_len >= 0.6 * len(mention):
            return {"proposal": best}
        return {"proposal": None}

    # --- clarification ----------------------------------------------------------

    @staticmethod
    def _clarify(inputs: dict) -> dict:
        term = inputs.get("term", "")
        candidates = list(inputs.get("candidates", []))
        if not candidates:
            return {"text": f"Could you say more about what you mean by {term!r}?"}
        listed = ", ".join(candidates[:-1]) + f", or {candidates[-1]}" if len(candidates) > 1 else candidates[0]
        return {"text": f"Should we treat {term!r} as {listed}?"}
