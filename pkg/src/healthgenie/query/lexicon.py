"""KG lexicon: surface forms, synonyms, and greedy longest-match extraction."""
from __future__ import annotations

import csv
import re
from dataclasses import dataclass

from ..kg.model import GraphSnapshot

_TOKEN = re.compile(r"[a-z0-9']+")


@dataclass(frozen=True)
class Token:
    text: str
    start: int
    end: int


def tokenize(message: str) -> list[Token]:
    lowered = message.lower()
    return [Token(m.group(0), m.start(), m.end()) for m in _TOKEN.finditer(lowered)]


def _deplural(word: str) -> list[str]:
    """Cheap morphological fallback: plural stripping only."""
    variants = [word]
    if word.endswith("ies") and len(word) > 4:
        variants.append(word[:-3] + "y")
    if word.endswith("es") and len(word) > 3:
        variants.append(word[:-2])
    if word.endswith("s") and len(word) > 3:
        variants.append(word[:-1])
    return variants


@dataclass(frozen=True)
class EntityMention:
    surface: str          # lexicon surface that matched
    text: str             # as written by the user
    start: int
    end: int
    node_id: str


class Lexicon:
    """Surfaces from node labels plus a lexicon.csv and a synonyms.csv.

    Matching is greedy longest-first, so a surface that is a strict
    substring of a longer matched surface is never emitted on its own.
    """

    def __init__(self, snapshot: GraphSnapshot, lexicon_rows=(), synonym_rows=()):
        self._surface_to_node: dict[str, str] = {}
        self._weights: dict[str, float] = {}
        for node in snapshot.node_index.values():
            self._add_surface(node.label.lower(), node.id, 1.0)
        for surface, node_id, weight in lexicon_rows:
            self._add_surface(surface.lower(), node_id, weight)
        self._synonyms: dict[str, str] = {
            " ".join(t.text for t in tokenize(alias)):
                " ".join(t.text for t in tokenize(canonical))
            for alias, canonical in synonym_rows}
        self._max_ngram = max((len(s.split()) for s in self._surface_to_node), default=1)
        self._max_ngram = max(self._max_ngram,
                              max((len(s.split()) for s in self._synonyms), default=1))

    def _add_surface(self, surface: str, node_id: str, weight: float) -> None:
        # normalize through the extraction tokenizer so "Omega-3" == "omega 3"
        surface = " ".join(t.text for t in tokenize(surface))
        if not surface:
            return
        if weight >= self._weights.get(surface, -1.0):
            self._surface_to_node[surface] = node_id
            self._weights[surface] = weight

    @classmethod
    def from_files(cls, snapshot: GraphSnapshot, lexicon_path=None, synonyms_path=None):
        lexicon_rows = []
        if lexicon_path:
            with open(lexicon_path, newline="", encoding="utf-8") as fh:
                reader = csv.reader(fh)
                next(reader, None)
                for row in reader:
                    if len(row) >= 2 and row[0].strip():
                        weight = float(row[2]) if len(row) > 2 and row[2].strip() else 1.0
                        lexicon_rows.append((row[0].strip(), row[1].strip(), weight))
        synonym_rows = []
        if synonyms_path:
            with open(synonyms_path, newline="", encoding="utf-8") as fh:
                reader = csv.reader(fh)
                next(reader, None)
                for row in reader:
                    if len(row) >= 2 and row[0].strip():
                        synonym_rows.append((row[0].strip(), row[1].strip()))
        return cls(snapshot, lexicon_rows, synonym_rows)

    # --- lookup --------------------------------------------------------------

    def known_surfaces(self) -> list[str]:
        return sorted(self._surface_to_node)

    def lookup(self, surface: str) -> str | None:
        """surface -> node id; tries plural stripping, then the synonym table."""
        surface = " ".join(t.text for t in tokenize(surface))
        direct = self._lookup_with_plurals(surface)
        if direct is not None:
            return direct
        alias = self._synonyms.get(surface)
        if alias is None:
            # plural-stripped alias ("scallions" -> "scallion" handled above,
            # "crushed tomatoes" -> alias table carries the plural directly)
            for variant in _deplural(surface):
                if variant in self._synonyms:
                    alias = self._synonyms[variant]
                    break
        if alias is not None:
            return self._lookup_with_plurals(alias)
        return None

    def _lookup_with_plurals(self, surface: str) -> str | None:
        if surface in self._surface_to_node:
            return self._surface_to_node[surface]
        words = surface.split()
        for variant in _deplural(words[-1]):
            candidate = " ".join(words[:-1] + [variant])
            if candidate in self._surface_to_node:
                return self._surface_to_node[candidate]
        return None

    # --- extraction ------------------------------------------------------------

    def find_mentions(self, message: str) -> list[EntityMention]:
        tokens = tokenize(message)
        mentions: list[EntityMention] = []
        i = 0
        while i < len(tokens):
            matched = None
            for n in range(min(self._max_ngram, len(tokens) - i), 0, -1):
                window = tokens[i:i + n]
                surface = " ".join(t.text for t in window)
                node_id = self.lookup(surface)
                if node_id is not None:
                    matched = (surface, window, node_id, n)
                    break
            if matched is None:
                i += 1
                continue
            surface, window, node_id, n = matched
            mentions.append(EntityMention(
                surface=surface,
                text=message[window[0].start:window[-1].end],
                start=window[0].start, end=window[-1].end, node_id=node_id))
            i += n
        return mentions
