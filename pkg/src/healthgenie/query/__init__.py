from .lexicon import EntityMention, Lexicon, tokenize
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
from .parse import Entailments, Mention, QueryParser, Resolution

__all__ = [
    "Bound",
    "Conflict",
    "Constraint",
    "ConstraintKind",
    "ConstraintSet",
    "Entailments",
    "EntityMention",
    "Intent",
    "IntentCategory",
    "Lexicon",
    "Mention",
    "Origin",
    "QueryParser",
    "Resolution",
    "UNRESOLVED_PREFIX",
    "bounds_contradict",
    "conflict_pair_id",
    "tokenize",
]
