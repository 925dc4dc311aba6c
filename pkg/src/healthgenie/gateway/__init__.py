from .base import (
    INTENT_CATEGORIES,
    HttpProvider,
    PromptEnvelope,
    ProviderConfig,
    RESPONSE_SCHEMAS,
    Task,
    validate_response,
)
from .grounding import format_number, numerals_in_payload, numerals_in_text, ungrounded_numerals
from .mock import EMPTY_RESULT_MESSAGE, GENERIC_STARTERS, MockProvider
from .service import GatewayService

__all__ = [
    "EMPTY_RESULT_MESSAGE",
    "GENERIC_STARTERS",
    "GatewayService",
    "HttpProvider",
    "INTENT_CATEGORIES",
    "MockProvider",
    "PromptEnvelope",
    "ProviderConfig",
    "RESPONSE_SCHEMAS",
    "Task",
    "format_number",
    "numerals_in_payload",
    "numerals_in_text",
    "ungrounded_numerals",
    "validate_response",
]
