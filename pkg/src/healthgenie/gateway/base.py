"""Provider-neutral completion interface.

Every generation duty travels as a ``PromptEnvelope``: structured inputs, a
prompt rendered deterministically from them, and a JSON schema the response
must satisfy. Responses failing validation are re-asked up to
``max_retries`` and then rejected outright, never partially consumed.
"""
from __future__ import annotations

import enum
import json
import os
from dataclasses import dataclass

import httpx
import jsonschema

from ..errors import CredentialMissing, ProviderTimeout, SchemaViolation


class Task(str, enum.Enum):
    INTENT_CLASSIFICATION = "intent_classification"
    SUMMARY = "summary"
    QUERY_GENERATION = "query_generation"
    RELATION_EXTRACTION = "relation_extraction"
    SYNONYM_PROPOSAL = "synonym_proposal"
    CLARIFICATION = "clarification"


INTENT_CATEGORIES = ("recipe_search", "constraint_override", "information_request",
                     "general_clarification")

RESPONSE_SCHEMAS: dict[Task, dict] = {
    Task.INTENT_CLASSIFICATION: {
        "type": "object",
        "properties": {
            "category": {"type": "string", "enum": list(INTENT_CATEGORIES)},
            "confidence": {"type": "number", "minimum": 0, "maximum": 1},
            "rationale": {"type": "string"},
        },
        "required": ["category", "confidence", "rationale"],
    },
    Task.SUMMARY: {
        "type": "object",
        "properties": {"text": {"type": "string"}},
        "required": ["text"],
    },
    Task.QUERY_GENERATION: {
        "type": "object",
        "properties": {
            "suggestions": {"type": "array", "items": {"type": "string"},
                            "minItems": 3, "maxItems": 3},
        },
        "required": ["suggestions"],
    },
    Task.RELATION_EXTRACTION: {
        "type": "object",
        "properties": {
            "proposals": {
                "type": "array",
                "items": {
                    "type": "object",
                    "properties": {
                        "subject": {"type": "string"},
                        "relation": {"type": "string"},
                        "object": {"type": "string"},
                    },
                    "required": ["subject", "relation", "object"],
                },
            },
        },
        "required": ["proposals"],
    },
    Task.SYNONYM_PROPOSAL: {
        "type": "object",
        "properties": {"proposal": {"type": ["string", "null"]}},
        "required": ["proposal"],
    },
    Task.CLARIFICATION: {
        "type": "object",
        "properties": {"text": {"type": "string"}},
        "required": ["text"],
    },
}

PROMPT_TEMPLATES: dict[Task, str] = {
    Task.INTENT_CLASSIFICATION: (
        "Classify the user's goal as one of recipe_search, constraint_override,\n"
        "information_request, or general_clarification.\n"
        "Conversation so far produced a recommendation: {has_recommendation}\n"
        "Message: {message}"
    ),
    Task.SUMMARY: (
        "Write a short factual summary of the recommended dishes. Use only the\n"
        "facts below; do not invent numbers.\n{facts}"
    ),
    Task.QUERY_GENERATION: (
        "Propose three follow-up queries grounded in the current session.\n{context}"
    ),
    Task.RELATION_EXTRACTION: (
        "Extract (subject, relation, object) statements about foods from:\n{text}"
    ),
    Task.SYNONYM_PROPOSAL: (
        "The term {mention!r} is not in the food vocabulary. Propose the closest\n"
        "known surface form, or null."
    ),
    Task.CLARIFICATION: (
        "Ask the user to disambiguate {term!r} among: {candidates}"
    ),
}


@dataclass(frozen=True)
class PromptEnvelope:
    task: Task
    structured_inputs: dict
    rendered_prompt: str
    response_schema: dict

    @classmethod
    def build(cls, task: Task, structured_inputs: dict) -> "PromptEnvelope":
        template = PROMPT_TEMPLATES[task]
        safe = {k: v for k, v in structured_inputs.items()}
        # templates may reference a subset of the inputs; stringify the rest
        rendered = template.format(**{
            "has_recommendation": safe.get("has_recommendation", False),
            "message": safe.get("message", ""),
            "facts": json.dumps(safe.get("dishes", safe), sort_keys=True),
            "context": json.dumps(safe, sort_keys=True),
            "text": safe.get("text", ""),
            "mention": safe.get("mention", ""),
            "term": safe.get("term", ""),
            "candidates": ", ".join(safe.get("candidates", [])),
        })
        return cls(task=task, structured_inputs=structured_inputs,
                   rendered_prompt=rendered, response_schema=RESPONSE_SCHEMAS[task])


@dataclass
class ProviderConfig:
    provider: str = "mock"  # mock | provider_a | provider_b | provider_c | provider_d
    endpoint: str = ""
    credential_env: str = ""
    timeout_ms: int = 10000
    max_retries: int = 2

    KNOWN = ("mock", "provider_a", "provider_b", "provider_c", "provider_d")

    def __post_init__(self):
        if self.provider not in self.KNOWN:
            raise ValueError(f"unknown provider {self.provider!r}")
        if self.timeout_ms <= 0:
            raise ValueError("timeout_ms must be positive")
        if self.provider != "mock" and (not self.endpoint or not self.credential_env):
            raise ValueError("non-mock providers need endpoint and credential_env")

    @classmethod
    def from_env(cls, default: str = "mock") -> "ProviderConfig":
        provider = os.environ.get("GENIE_PROVIDER", default)
        if provider == "mock":
            return cls()
        return cls(provider=provider,
                   endpoint=os.environ.get("GENIE_ENDPOINT", ""),
                   credential_env=os.environ.get("GENIE_CREDENTIAL_ENV", "GENIE_API_KEY"))


def validate_response(envelope: PromptEnvelope, response: dict) -> dict:
    try:
        jsonschema.validate(response, envelope.response_schema)
    except jsonschema.ValidationError as exc:
        raise SchemaViolation(f"{envelope.task.value}: {exc.message}") from None
    return response


class HttpProvider:
    """Minimal JSON-over-HTTP client for the documented provider contract.

    Request: POST {endpoint} with {"task", "prompt", "inputs", "schema"}.
    Response: the schema-conforming JSON object, bare.
    """

    def __init__(self, config: ProviderConfig, transport: httpx.BaseTransport | None = None):
        self.config = config
        self._client = httpx.Client(transport=transport,
                                    timeout=config.timeout_ms / 1000.0)

    def complete(self, envelope: PromptEnvelope) -> dict:
        if not os.environ.get(self.config.credential_env):
            raise CredentialMissing(self.config.credential_env)
        last_error: SchemaViolation | None = None
        for attempt in range(self.config.max_retries + 1):
            try:
                response = self._client.post(
                    self.config.endpoint,
                    json={
                        "task": envelope.task.value,
                        "prompt": envelope.rendered_prompt,
                        "inputs": envelope.structured_inputs,
                        "schema": envelope.response_schema,
                        "attempt": attempt,
                    },
                    headers={"authorization": f"Bearer {os.environ[self.config.credential_env]}"},
                )
                response.raise_for_status()
                return validate_response(envelope, response.json())
            except httpx.TimeoutException as exc:
                raise ProviderTimeout(str(exc)) from None
            except (SchemaViolation, json.JSONDecodeError, ValueError, httpx.HTTPStatusError) as exc:
                last_error = exc if isinstance(exc, SchemaViolation) else SchemaViolation(str(exc))
        raise last_error
