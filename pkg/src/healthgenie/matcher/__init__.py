from .engine import (
    CLOSURE_RELATIONS,
    DEMOTE_PREFIX,
    MatchResult,
    Matcher,
    REASON_MISSING,
    REASON_VIOLATED,
    Recommendation,
)

__all__ = [
    "CLOSURE_RELATIONS",
    "DEMOTE_PREFIX",
    "MatchResult",
    "Matcher",
    "REASON_MISSING",
    "REASON_VIOLATED",
    "Recommendation",
]
