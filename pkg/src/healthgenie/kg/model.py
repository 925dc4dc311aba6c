"""Typed nodes, labeled edges, and immutable graph snapshots.

The graph is stored twice: a triple index keyed by (subject, relation,
object) for set semantics and export, and an adjacency map for traversal.
Snapshots are never mutated after publication; every write path copies.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field


class Unit(str, enum.Enum):
    KCAL = "kcal"
    G = "g"
    MG = "mg"
    NONE = "none"


class NodeKind(str, enum.Enum):
    RECIPE = "recipe"
    INGREDIENT = "ingredient"
    NUTRIENT = "nutrient"
    CONDITION = "condition"
    CUISINE = "cuisine"
    METHOD = "method"
    BENEFIT = "benefit"


class Provenance(str, enum.Enum):
    CURATED = "curated"
    INFERRED = "inferred"
    USER = "user"


# Mass nutrients are held in grams after ingest; calories stay in kcal.
def canonical_quantity(value: float, unit: Unit) -> tuple[float, Unit]:
    if unit is Unit.MG:
        return value / 1000.0, Unit.G
    return value, unit


@dataclass(slots=True)
class EntityNode:
    """Treated as immutable once inside a snapshot; not ``frozen`` because the
    100k-node ingest path constructs these in bulk and frozen-dataclass init
    costs roughly double."""

    id: str
    label: str
    kind: NodeKind
    numeric_attrs: dict[str, tuple[float, Unit]] = field(default_factory=dict)
    categorical_attrs: dict[str, str] = field(default_factory=dict)

    def validate(self) -> None:
        if not self.label:
            raise ValueError(f"node {self.id!r} has an empty label")
        for name, (value, unit) in self.numeric_attrs.items():
            if not math.isfinite(value) or value < 0:
                raise ValueError(f"node {self.id!r} attr {name!r}: non-finite or negative value")
            if name == "calories" and unit is not Unit.KCAL:
                raise ValueError(f"node {self.id!r}: calories must be kcal, got {unit.value}")
            if name != "calories" and unit is Unit.KCAL:
                raise ValueError(f"node {self.id!r} attr {name!r}: kcal reserved for calories")

    def class_values(self) -> frozenset[str]:
        """All categorical labels carried by this node, key-agnostic."""
        return frozenset(self.categorical_attrs.values())

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "label": self.label,
            "kind": self.kind.value,
            "numeric_attrs": {
                k: {"value": v, "unit": u.value} for k, (v, u) in sorted(self.numeric_attrs.items())
            },
            "categorical_attrs": dict(sorted(self.categorical_attrs.items())),
        }


@dataclass(slots=True)
class RelationEdge:
    """Immutable by convention, same trade-off as EntityNode."""

    subject: str
    relation: str
    object: str
    provenance: Provenance = Provenance.CURATED
    version: int = 1

    @property
    def triple(self) -> tuple[str, str, str]:
        return (self.subject, self.relation, self.object)

    def to_dict(self) -> dict:
        return {
            "subject": self.subject,
            "relation": self.relation,
            "object": self.object,
            "provenance": self.provenance.value,
            "version": self.version,
        }


# Adjacency entry: (relation, neighbor_id, direction) with direction "out"|"in".
# A bare tuple, not a dataclass: the 100k-node corpus allocates ~600k of these
# on ingest and tuple literals keep that under the latency budget. Lexicographic
# tuple order doubles as the deterministic neighbor order.
Neighbor = tuple


def neighbor(relation: str, node_id: str, direction: str) -> tuple:
    return (relation, node_id, direction)


@dataclass(frozen=True, slots=True)
class GraphSnapshot:
    version: int
    node_index: dict[str, EntityNode]
    adjacency: dict[str, tuple[Neighbor, ...]]
    edge_index: dict[tuple[str, str, str], RelationEdge]

    @property
    def triple_count(self) -> int:
        return len(self.edge_index)

    def node(self, node_id: str) -> EntityNode:
        return self.node_index[node_id]

    def has_node(self, node_id: str) -> bool:
        return node_id in self.node_index


@dataclass
class SubgraphView:
    """Node/edge set shown to the user at one detail level.

    ``nodes`` preserves BFS admission order so rendering is stable.  ``diff``
    is only populated when the view was produced by an adaptive
    recomputation (kept / added / removed-fading).
    """

    nodes: dict[str, EntityNode]
    edges: tuple[RelationEdge, ...]
    detail_level: int = 1
    diff: dict[str, str] = field(default_factory=dict)
    highlights: tuple[str, ...] = ()

    def node_ids(self) -> list[str]:
        return list(self.nodes)

    def to_dict(self) -> dict:
        return {
            "nodes": [n.to_dict() for n in self.nodes.values()],
            "edges": [e.to_dict() for e in self.edges],
            "detail_level": self.detail_level,
            "diff": dict(sorted(self.diff.items())),
            "highlights": list(self.highlights),
        }

    def to_dot(self) -> str:
        """Graphviz rendering for debugging; the UI never consumes this."""
        lines = ["digraph subgraph_view {", "  rankdir=LR;"]
        for node in self.nodes.values():
            attrs = [f'label="{node.label}"', f'tooltip="{node.kind.value}"']
            if node.id in self.highlights:
                attrs.append("penwidth=2")
            mark = self.diff.get(node.id)
            if mark == "removed-fading":
                attrs.append('style=dashed color=gray')
            elif mark == "added":
                attrs.append("color=darkgreen")
            lines.append(f'  "{node.id}" [{" ".join(attrs)}];')
        for edge in self.edges:
            lines.append(f'  "{edge.subject}" -> "{edge.object}" [label="{edge.relation}"];')
        lines.append("}")
        return "\n".join(lines)


@dataclass(frozen=True, slots=True)
class RelationSpec:
    name: str
    description: str = ""
    inverse_name: str = ""


SEED_RELATIONS = (
    RelationSpec("contains", "recipe or compound holds an ingredient/nutrient", "containedIn"),
    RelationSpec("belongsToCuisine", "recipe is part of a culinary tradition", "cuisineOf"),
    RelationSpec("recommendsFor", "dish suits a health condition", "recommendedVia"),
    RelationSpec("substitutableBy", "object can stand in for subject", "substituteFor"),
    RelationSpec("containsIngredient", "compound ingredient holds a base ingredient", "ingredientOf"),
    RelationSpec("derivesFrom", "food product made from a source food", "sourceOf"),
    RelationSpec("neutralizeOdor", "subject suppresses the object's odor", "odorNeutralizedBy"),
)


class RelationRegistry:
    """Vocabulary of relation names; data-driven and extensible."""

    def __init__(self, specs=SEED_RELATIONS):
        self._specs: dict[str, RelationSpec] = {}
        for spec in specs:
            self._specs[spec.name] = spec

    def __contains__(self, name: str) -> bool:
        return name in self._specs

    def __iter__(self):
        return iter(self._specs.values())

    def __len__(self) -> int:
        return len(self._specs)

    def register(self, spec: RelationSpec) -> None:
        self._specs.setdefault(spec.name, spec)

    def spec(self, name: str) -> RelationSpec:
        return self._specs[name]
