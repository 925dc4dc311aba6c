"""Symbolic query artifacts: intents, constraints, conflicts.

A user's demands live as an ordered list of ``Constraint`` records;
conflict resolution never deletes anything, it marks losers superseded so
undo can reinstate them.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

from ..kg.model import Unit


class IntentCategory(str, enum.Enum):
    RECIPE_SEARCH = "recipe_search"
    CONSTRAINT_OVERRIDE = "constraint_override"
    INFORMATION_REQUEST = "information_request"
    GENERAL_CLARIFICATION = "general_clarification"


@dataclass(frozen=True)
class Intent:
    category: IntentCategory
    confidence: float
    rationale: str

    def __post_init__(self):
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError("confidence must be in [0,1]")

    def to_dict(self) -> dict:
        return {"category": self.category.value, "confidence": self.confidence,
                "rationale": self.rationale}


class ConstraintKind(str, enum.Enum):
    FLAG = "flag"
    BOUND = "bound"
    INCLUDE_ENTITY = "include_entity"
    EXCLUDE_ENTITY = "exclude_entity"
    METHOD_FLAG = "method_flag"
    SUBJECTIVE = "subjective"


class Origin(str, enum.Enum):
    TEXT = "text"
    GRAPH_ACTION = "graph_action"
    LEARNED = "learned"


COMPARATORS = ("<", "<=", ">", ">=")


@dataclass(frozen=True)
class Bound:
    comparator: str
    value: float
    unit: Unit

    def __post_init__(self):
        if self.comparator not in COMPARATORS:
            raise ValueError(f"unknown comparator {self.comparator!r}")
        if not math.isfinite(self.value):
            raise ValueError("bound value must be finite")

    def admits(self, x: float) -> bool:
        return {"<": x < self.value, "<=": x <= self.value,
                ">": x > self.value, ">=": x >= self.value}[self.comparator]

    def interval(self) -> tuple[float, float]:
        """(lo, hi) of admitted values, open/closed-ness ignored for overlap tests."""
        if self.comparator in ("<", "<="):
            return (float("-inf"), self.value)
        return (self.value, float("inf"))

    def describe(self, key: str) -> str:
        unit = "" if self.unit is Unit.NONE else f" {self.unit.value}"
        return f"{key} {self.comparator} {self.value:g}{unit}"

    def to_dict(self) -> dict:
        return {"comparator": self.comparator, "value": self.value, "unit": self.unit.value}


UNRESOLVED_PREFIX = "unresolved:"


@dataclass(frozen=True)
class Constraint:
    kind: ConstraintKind
    key: str                       # attribute name, flag key, or node id
    value: object                  # bool | Bound | node id | raw term
    origin: Origin = Origin.TEXT
    turn: int = 0
    ref: str = ""
    needs_confirmation: bool = False   # LLM-proposed substitutes, learned proposals

    @property
    def is_unresolved(self) -> bool:
        return self.key.startswith(UNRESOLVED_PREFIX)

    def slot(self) -> tuple[str, str]:
        """Latest-wins identity: include/exclude of one node share a slot."""
        if self.kind in (ConstraintKind.INCLUDE_ENTITY, ConstraintKind.EXCLUDE_ENTITY):
            return ("entity", self.key)
        return (self.kind.value, self.key)

    def describe(self) -> str:
        if self.kind is ConstraintKind.BOUND:
            return self.value.describe(self.key)
        if self.kind in (ConstraintKind.FLAG, ConstraintKind.METHOD_FLAG):
            return f"{self.key}={str(self.value).lower()}"
        if self.kind is ConstraintKind.INCLUDE_ENTITY:
            return f"include {self.key}"
        if self.kind is ConstraintKind.EXCLUDE_ENTITY:
            return f"exclude {self.key}"
        return f"{self.kind.value} {self.key}"

    def to_dict(self) -> dict:
        value = self.value.to_dict() if isinstance(self.value, Bound) else self.value
        return {"kind": self.kind.value, "key": self.key, "value": value,
                "origin": self.origin.value, "turn": self.turn, "ref": self.ref,
                "needs_confirmation": self.needs_confirmation}


def bounds_contradict(a: Bound, b: Bound) -> bool:
    """True when no value can satisfy both bounds."""
    lo = max(a.interval()[0], b.interval()[0])
    hi = min(a.interval()[1], b.interval()[1])
    if lo > hi:
        return True
    if lo == hi:
        return not (a.admits(lo) and b.admits(lo))
    return False


@dataclass
class Conflict:
    pair_id: str
    a_ref: str
    b_ref: str
    reason: str                    # flag_entailment | contradictory_bounds | include_exclude
    status: str = "unresolved"     # unresolved | resolved_latest | resolved_user
    winner: str | None = None

    @property
    def unresolved(self) -> bool:
        return self.status == "unresolved"

    def to_dict(self) -> dict:
        return {"pair_id": self.pair_id, "a_ref": self.a_ref, "b_ref": self.b_ref,
                "reason": self.reason, "status": self.status, "winner": self.winner}


def conflict_pair_id(a_ref: str, b_ref: str) -> str:
    first, second = sorted((a_ref, b_ref))
    return f"{first}|{second}"


@dataclass
class ConstraintSet:
    """Ordered constraints plus clarification queue and conflict ledger."""

    constraints: list[Constraint] = field(default_factory=list)
    pending_clarifications: list[tuple[str, tuple[str, ...]]] = field(default_factory=list)
    conflicts: list[Conflict] = field(default_factory=list)
    superseded: dict[str, str] = field(default_factory=dict)  # loser ref -> winner ref

    def by_ref(self, ref: str) -> Constraint:
        for c in self.constraints:
            if c.ref == ref:
                return c
        raise KeyError(ref)

    def active(self) -> list[Constraint]:
        return [c for c in self.constraints if c.ref not in self.superseded]

    def _conflicted_refs(self) -> set[str]:
        refs: set[str] = set()
        for conflict in self.conflicts:
            if conflict.unresolved:
                refs.update((conflict.a_ref, conflict.b_ref))
        return refs

    def filter_effective(self) -> list[Constraint]:
        """Constraints the matcher may act on.

        Excludes subjective terms, unresolved mentions, unconfirmed
        proposals, superseded losers, and both parties of any conflict
        still awaiting resolution.
        """
        blocked = self._conflicted_refs()
        out = []
        for c in self.active():
            if c.kind is ConstraintKind.SUBJECTIVE:
                continue
            if c.is_unresolved or c.needs_confirmation:
                continue
            if c.ref in blocked:
                continue
            out.append(c)
        return out

    def unresolved_conflicts(self) -> list[Conflict]:
        return [c for c in self.conflicts if c.unresolved]

    def to_dict(self) -> dict:
        return {
            "constraints": [c.to_dict() for c in self.constraints],
            "pending_clarifications": [
                {"term": t, "candidates": list(c)} for t, c in self.pending_clarifications
            ],
            "conflicts": [c.to_dict() for c in self.conflicts],
            "superseded": dict(sorted(self.superseded.items())),
        }

    def clone(self) -> "ConstraintSet":
        return ConstraintSet(
            constraints=list(self.constraints),
            pending_clarifications=list(self.pending_clarifications),
            conflicts=[replace(c) for c in self.conflicts],
            superseded=dict(self.superseded),
        )
