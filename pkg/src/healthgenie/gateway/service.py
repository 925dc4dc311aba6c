"""High-level generation duties over the provider abstraction."""
from __future__ import annotations

from ..errors import SchemaViolation
from ..kg.model import Provenance, RelationEdge
from .base import HttpProvider, PromptEnvelope, ProviderConfig, Task
from .grounding import ungrounded_numerals
from .mock import MockProvider


class GatewayService:
    """Routes envelopes to the configured provider and post-validates output.

    The mock provider is the default; live providers go through the same
    envelopes and the same schema + grounding checks.
    """

    def __init__(self, config: ProviderConfig | None = None, transport=None):
        self.config = config or ProviderConfig()
        if self.config.provider == "mock":
            self._provider = MockProvider()
        else:
            self._provider = HttpProvider(self.config, transport=transport)

    def complete(self, envelope: PromptEnvelope) -> dict:
        return self._provider.complete(envelope)

    # --- duties -------------------------------------------------------------

    def classify_intent(self, message: str, has_recommendation: bool) -> dict:
        envelope = PromptEnvelope.build(Task.INTENT_CLASSIFICATION, {
            "message": message, "has_recommendation": has_recommendation,
        })
        return self.complete(envelope)

    def generate_summary(self, payload: dict) -> str:
        """Per-dish explanation; rejects any numeral not present in the payload."""
        envelope = PromptEnvelope.build(Task.SUMMARY, payload)
        text = self.complete(envelope)["text"]
        rogue = ungrounded_numerals(text, payload)
        if rogue:
            raise SchemaViolation(
                f"summary contains numbers absent from payload: {sorted(rogue)}")
        return text

    def generate_queries(self, top_dish: str | None, active_constraints: list[str],
                         has_history: bool) -> list[str]:
        envelope = PromptEnvelope.build(Task.QUERY_GENERATION, {
            "top_dish": top_dish,
            "constraints": active_constraints,
            "has_history": has_history,
        })
        return self.complete(envelope)["suggestions"]

    def extract_relations(self, free_text: str, resolve_surface) -> list[RelationEdge]:
        """Relation proposals from free text, resolved against the lexicon.

        ``resolve_surface(text) -> node id | None``; statements with an
        unresolvable side are dropped. Proposals never touch the KG here;
        integration requires an explicit accept step.
        """
        envelope = PromptEnvelope.build(Task.RELATION_EXTRACTION, {"text": free_text})
        proposals = self.complete(envelope)["proposals"]
        edges = []
        for item in proposals:
            subject = resolve_surface(item["subject"])
            obj = resolve_surface(item["object"])
            if subject is None or obj is None:
                continue
            edges.append(RelationEdge(subject, item["relation"], obj,
                                      provenance=Provenance.INFERRED))
        return edges

    def propose_synonym(self, mention: str, known_surfaces: list[str]) -> str | None:
        envelope = PromptEnvelope.build(Task.SYNONYM_PROPOSAL, {
            "mention": mention, "known_surfaces": known_surfaces,
        })
        return self.complete(envelope)["proposal"]

    def clarify(self, term: str, candidates: list[str]) -> str:
        envelope = PromptEnvelope.build(Task.CLARIFICATION, {
            "term": term, "candidates": candidates,
        })
        return self.complete(envelope)["text"]
