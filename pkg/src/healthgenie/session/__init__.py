from .manager import Session, TurnResult
from .model import (
    ActionKind,
    InteractionAction,
    LearnedProposal,
    PreferenceProfile,
    STATUS_APPLIED,
    STATUS_STAGED,
    STATUS_UNDONE,
)

__all__ = [
    "ActionKind",
    "InteractionAction",
    "LearnedProposal",
    "PreferenceProfile",
    "STATUS_APPLIED",
    "STATUS_STAGED",
    "STATUS_UNDONE",
    "Session",
    "TurnResult",
]
