"""Interaction records and the merged preference profile."""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field

from ..query.model import Constraint, ConstraintSet


class ActionKind(str, enum.Enum):
    INCLUDE_NODE = "include_node"
    EXCLUDE_NODE = "exclude_node"
    APPLY = "apply"
    UNDO = "undo"
    TEXT_QUERY = "text_query"
    CLARIFICATION_ANSWER = "clarification_answer"


STATUS_STAGED = "staged"
STATUS_APPLIED = "applied"
STATUS_UNDONE = "undone"


@dataclass
class InteractionAction:
    id: int
    kind: ActionKind
    target: object            # node id | text | action id | encoded answer | None
    timestamp: float
    status: str = STATUS_APPLIED

    def to_record(self) -> dict:
        return {"action_id": self.id, "kind": self.kind.value, "target": self.target,
                "timestamp": self.timestamp, "status": self.status}

    @classmethod
    def from_record(cls, record: dict) -> "InteractionAction":
        return cls(id=record["action_id"], kind=ActionKind(record["kind"]),
                   target=record["target"], timestamp=record["timestamp"],
                   status=record["status"])


@dataclass(frozen=True)
class LearnedProposal:
    """A repetition-derived suggestion; inert until the user confirms it."""
    id: str
    counter_key: str
    count: int
    constraint: Constraint

    def to_dict(self) -> dict:
        return {"id": self.id, "counter_key": self.counter_key, "count": self.count,
                "constraint": self.constraint.to_dict()}


@dataclass
class PreferenceProfile:
    active_constraints: ConstraintSet = field(default_factory=ConstraintSet)
    history: list[InteractionAction] = field(default_factory=list)
    rejection_counters: dict[str, int] = field(default_factory=dict)
    learned: list[Constraint] = field(default_factory=list)

    def comparable_state(self) -> dict:
        """Everything that drives behavior; no history ids or timestamps."""
        return {
            "constraints": [c.to_dict() for c in self.active_constraints.constraints],
            "superseded": dict(sorted(self.active_constraints.superseded.items())),
            "conflicts": [c.to_dict() for c in self.active_constraints.conflicts],
            "pending": [{"term": t, "candidates": list(cands)}
                        for t, cands in self.active_constraints.pending_clarifications],
            "counters": dict(sorted(self.rejection_counters.items())),
            "learned": [c.to_dict() for c in self.learned],
        }

    def to_dict(self) -> dict:
        state = self.comparable_state()
        state["history"] = [a.to_record() for a in self.history]
        return state

    def canonical_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)
