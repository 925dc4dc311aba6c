from .model import (
    EntityNode,
    GraphSnapshot,
    Neighbor,
    NodeKind,
    Provenance,
    RelationEdge,
    RelationRegistry,
    RelationSpec,
    SEED_RELATIONS,
    SubgraphView,
    Unit,
    canonical_quantity,
)
from .store import (
    ATTRS_HEADER,
    GraphStore,
    IngestReport,
    RELATIONS_HEADER,
    TRIPLES_HEADER,
    extract_subgraph_from,
    load_relation_registry,
)

__all__ = [
    "ATTRS_HEADER",
    "EntityNode",
    "GraphSnapshot",
    "GraphStore",
    "IngestReport",
    "Neighbor",
    "NodeKind",
    "Provenance",
    "RELATIONS_HEADER",
    "RelationEdge",
    "RelationRegistry",
    "RelationSpec",
    "SEED_RELATIONS",
    "SubgraphView",
    "TRIPLES_HEADER",
    "Unit",
    "canonical_quantity",
    "extract_subgraph_from",
    "load_relation_registry",
]
