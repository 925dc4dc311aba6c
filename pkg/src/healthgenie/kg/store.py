"""Versioned in-memory knowledge graph over flat CSV corpora.

One writer, many readers: every write publishes a fresh immutable
``GraphSnapshot`` under a lock; readers keep whatever snapshot they hold.
The last ``retention`` snapshots stay resident; anything older is replayed
from the base snapshot plus the audit log.
"""
from __future__ import annotations

import csv
import gc
import io
import json
import threading
import time
from collections import OrderedDict
from dataclasses import dataclass, field

from ..errors import (
    DanglingReference,
    GraphError,
    MalformedRow,
    UnknownNode,
    UnknownRelation,
    VersionConflict,
)
from .model import (
    EntityNode,
    GraphSnapshot,
    NodeKind,
    Provenance,
    RelationEdge,
    RelationRegistry,
    RelationSpec,
    SubgraphView,
    Unit,
    canonical_quantity,
)

# hot-loop caches: enum lookups add up over 300k rows
_PROVENANCE = {p.value: p for p in Provenance}
_NODE_KIND = {k.value: k for k in NodeKind}
_UNIT = {u.value: u for u in Unit}

TRIPLES_HEADER = ["subject", "relation", "object", "provenance"]
ATTRS_HEADER = ["node_id", "attr", "value", "unit", "kind_hint", "label"]
RELATIONS_HEADER = ["relation", "description", "inverse_name"]


@dataclass
class IngestReport:
    nodes: int = 0
    edges: int = 0
    duplicates: int = 0
    rejected: list = field(default_factory=list)   # (source, line, reason)
    warnings: list = field(default_factory=list)
    auto_registered: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "nodes": self.nodes,
            "edges": self.edges,
            "duplicates": self.duplicates,
            "rejected": [{"source": s, "line": l, "reason": r} for s, l, r in self.rejected],
            "warnings": list(self.warnings),
            "auto_registered": list(self.auto_registered),
        }


def load_relation_registry(stream) -> RelationRegistry:
    """Read a relations.csv manifest (header: relation,description,inverse_name)."""
    registry = RelationRegistry()
    reader = csv.reader(stream)
    header = next(reader, None)
    if header is None:
        return registry
    for row in reader:
        if not row or not row[0].strip():
            continue
        name = row[0].strip()
        description = row[1].strip() if len(row) > 1 else ""
        inverse = row[2].strip() if len(row) > 2 else ""
        registry.register(RelationSpec(name, description, inverse))
    return registry


# adjacency entries are (relation, neighbor_id, direction) tuples; their
# natural lexicographic order is the documented deterministic order


class GraphStore:
    """Owns snapshot history, the relation registry, and the audit log."""

    def __init__(self, registry: RelationRegistry | None = None, retention: int = 16,
                 audit_path=None, clock=time.time):
        self.registry = registry or RelationRegistry()
        self.retention = max(1, retention)
        self._versions: OrderedDict[int, GraphSnapshot] = OrderedDict()
        self._base: GraphSnapshot | None = None
        self._audit: list[dict] = []
        self._audit_path = audit_path
        self._clock = clock
        self._write_lock = threading.Lock()
        self.ingest_report = IngestReport()

    # --- ingestion ---------------------------------------------------------

    def load_triples(self, triple_source, attr_source, strict: bool = False) -> GraphSnapshot:
        """Build version 1 from a triples CSV and an attrs CSV.

        Lenient by default: malformed or dangling rows are skipped and listed
        in ``self.ingest_report``; ``strict=True`` raises on the first bad row.
        Unknown relations are auto-registered when lenient.
        """
        with self._write_lock:
            if self._versions:
                raise GraphError("store already loaded; create a new store to re-ingest")
            report = IngestReport()
            # bulk load allocates ~1M cycle-free objects at the 100k-node
            # scale; pausing the cycle collector keeps ingest inside budget
            gc_was_enabled = gc.isenabled()
            gc.disable()
            try:
                nodes = self._read_attrs(attr_source, strict, report)
                edges = self._read_triples(triple_source, nodes, strict, report)
                adjacency = self._build_adjacency(nodes, edges)
            finally:
                if gc_was_enabled:
                    gc.enable()
            snapshot = GraphSnapshot(version=1, node_index=nodes, adjacency=adjacency,
                                     edge_index=edges)
            self._check_recipe_contains(snapshot, strict, report)
            report.nodes = len(nodes)
            report.edges = len(edges)
            self.ingest_report = report
            self._base = snapshot
            self._publish(snapshot)
            self._append_audit({"version": 1, "op": "load", "triple": None,
                                "counts": {"nodes": report.nodes, "edges": report.edges},
                                "timestamp": self._clock()})
            return snapshot

    def _read_attrs(self, source, strict, report) -> dict[str, EntityNode]:
        reader = csv.reader(self._as_text(source))
        header = next(reader, None)
        kinds: dict[str, NodeKind] = {}
        labels: dict[str, str] = {}
        numeric: dict[str, dict] = {}
        categorical: dict[str, dict] = {}

        def reject(line, reason):
            if strict:
                raise MalformedRow(line, reason)
            report.rejected.append(("attrs", line, reason))

        for line, row in enumerate(reader, start=2):
            if len(row) != 6:
                if not row or not any(cell.strip() for cell in row):
                    continue
                if len(row) < 6:
                    reject(line, f"expected 6 fields, got {len(row)}")
                    continue
                row = row[:6]
            node_id, attr, value, unit_s, kind_hint, label = row
            node_id = node_id.strip()
            attr = attr.strip()
            if not node_id:
                reject(line, "empty node_id")
                continue
            if node_id not in kinds:
                kind_hint = kind_hint.strip()
                kind = _NODE_KIND.get(kind_hint)
                if kind is None:
                    reject(line, f"unknown kind {kind_hint!r}" if kind_hint
                           else f"first row for {node_id!r} must carry kind_hint")
                    continue
                kinds[node_id] = kind
                labels[node_id] = label.strip() or node_id
                numeric[node_id] = {}
                categorical[node_id] = {}
            if not attr:
                continue  # declaration-only row
            value = value.strip()
            unit_s = unit_s.strip() or "none"
            unit = _UNIT.get(unit_s)
            if unit is None:
                reject(line, f"unknown unit {unit_s!r}")
                continue
            if unit is not Unit.NONE:
                try:
                    qty = float(value)
                except ValueError:
                    reject(line, f"non-numeric value {value!r} for unit {unit.value}")
                    continue
                if attr == "calories" and unit is not Unit.KCAL:
                    reject(line, "calories must be expressed in kcal")
                    continue
                if attr != "calories" and unit is Unit.KCAL:
                    reject(line, f"kcal is reserved for calories, not {attr!r}")
                    continue
                if qty < 0 or qty != qty or qty in (float("inf"), float("-inf")):
                    reject(line, f"value for {attr!r} must be finite and >= 0")
                    continue
                numeric[node_id][attr] = canonical_quantity(qty, unit)
            else:
                try:
                    qty = float(value)
                    numeric[node_id][attr] = (qty, Unit.NONE)
                except ValueError:
                    categorical[node_id][attr] = value

        nodes: dict[str, EntityNode] = {}
        for node_id, kind in kinds.items():
            node = EntityNode(id=node_id, label=labels[node_id], kind=kind,
                              numeric_attrs=numeric[node_id],
                              categorical_attrs=categorical[node_id])
            try:
                node.validate()
            except ValueError as exc:
                reject(0, str(exc))
                continue
            nodes[node_id] = node
        return nodes

    def _read_triples(self, source, nodes, strict, report) -> dict[tuple, RelationEdge]:
        reader = csv.reader(self._as_text(source))
        next(reader, None)
        edges: dict[tuple, RelationEdge] = {}
        known_relations = set()

        def reject(line, reason, exc=None):
            if strict:
                raise exc or MalformedRow(line, reason)
            report.rejected.append(("triples", line, reason))

        for line, row in enumerate(reader, start=2):
            if len(row) != 4:
                if not row or not any(cell.strip() for cell in row):
                    continue
                if len(row) < 3:
                    reject(line, f"expected at least 3 fields, got {len(row)}")
                    continue
                row = [row[0], row[1], row[2], row[3] if len(row) > 3 else ""]
            subject = row[0].strip()
            relation = row[1].strip()
            obj = row[2].strip()
            prov_s = row[3].strip() or "curated"
            if not subject or not relation or not obj:
                reject(line, "empty subject, relation, or object")
                continue
            provenance = _PROVENANCE.get(prov_s)
            if provenance is None:
                reject(line, f"unknown provenance {prov_s!r}")
                continue
            if relation not in known_relations:
                if relation not in self.registry:
                    if strict:
                        raise UnknownRelation(relation)
                    self.registry.register(RelationSpec(relation, "auto-registered at ingest"))
                    report.auto_registered.append(relation)
                known_relations.add(relation)
            if subject not in nodes or obj not in nodes:
                reject(line, f"dangling reference: ({subject}, {relation}, {obj})",
                       DanglingReference(RelationEdge(subject, relation, obj, provenance)))
                continue
            triple = (subject, relation, obj)
            if triple in edges:
                report.duplicates += 1
                continue
            edges[triple] = RelationEdge(subject, relation, obj, provenance, version=1)
        return edges

    @staticmethod
    def _build_adjacency(nodes, edges) -> dict[str, tuple]:
        lists: dict[str, list] = {node_id: [] for node_id in nodes}
        for (s, r, o) in edges:
            lists[s].append((r, o, "out"))
            lists[o].append((r, s, "in"))
        return {node_id: tuple(sorted(entries)) for node_id, entries in lists.items()}

    @staticmethod
    def _check_recipe_contains(snapshot, strict, report):
        for node in snapshot.node_index.values():
            if node.kind is not NodeKind.RECIPE:
                continue
            has_contains = any(n[2] == "out" and n[0] == "contains"
                               for n in snapshot.adjacency.get(node.id, ()))
            if not has_contains:
                msg = f"recipe {node.id!r} has no outgoing 'contains' edge"
                if strict:
                    raise GraphError(msg)
                report.warnings.append(msg)

    @staticmethod
    def _as_text(source):
        if isinstance(source, (str, bytes)):
            return io.StringIO(source if isinstance(source, str) else source.decode("utf-8"))
        return source

    # --- writes ------------------------------------------------------------

    def upsert_edge(self, edge: RelationEdge, expected_version: int | None = None) -> GraphSnapshot:
        """Publish a new snapshot containing ``edge``; no-op if already present."""
        return self.upsert(edges=(edge,), expected_version=expected_version)

    def upsert(self, nodes=(), edges=(), expected_version: int | None = None) -> GraphSnapshot:
        """Batch write: new nodes first, then edges (may reference the new nodes)."""
        with self._write_lock:
            current = self._latest()
            if expected_version is not None and expected_version != current.version:
                raise VersionConflict(expected_version, current.version)

            new_nodes = {}
            for node in nodes:
                node.validate()
                if node.id not in current.node_index:
                    new_nodes[node.id] = node
            node_index = current.node_index
            if new_nodes:
                node_index = {**current.node_index, **new_nodes}

            new_edges = []
            for edge in edges:
                if edge.relation not in self.registry:
                    raise UnknownRelation(edge.relation)
                if edge.subject not in node_index or edge.object not in node_index:
                    raise DanglingReference(edge)
                existing = current.edge_index.get(edge.triple)
                if existing is not None and existing.provenance is edge.provenance:
                    continue  # idempotent
                new_edges.append(edge)

            if not new_nodes and not new_edges:
                return current

            version = current.version + 1
            edge_index = dict(current.edge_index)
            adjacency = dict(current.adjacency)
            for node_id in new_nodes:
                adjacency[node_id] = ()
            for edge in new_edges:
                stamped = RelationEdge(edge.subject, edge.relation, edge.object,
                                       edge.provenance, version=version)
                fresh = edge.triple not in edge_index
                edge_index[edge.triple] = stamped
                if fresh:
                    for node_id, entry in ((edge.subject, (edge.relation, edge.object, "out")),
                                           (edge.object, (edge.relation, edge.subject, "in"))):
                        entries = list(adjacency.get(node_id, ()))
                        entries.append(entry)
                        adjacency[node_id] = tuple(sorted(entries))

            snapshot = GraphSnapshot(version=version, node_index=node_index,
                                     adjacency=adjacency, edge_index=edge_index)
            self._publish(snapshot)
            ts = self._clock()
            for node in new_nodes.values():
                self._append_audit({"version": version, "op": "add_node", "triple": None,
                                    "node": node.to_dict(), "timestamp": ts})
            for edge in new_edges:
                self._append_audit({"version": version, "op": "upsert_edge",
                                    "triple": list(edge.triple),
                                    "provenance": edge.provenance.value, "timestamp": ts})
            return snapshot

    def _publish(self, snapshot: GraphSnapshot) -> None:
        self._versions[snapshot.version] = snapshot
        while len(self._versions) > self.retention:
            self._versions.popitem(last=False)

    def _append_audit(self, record: dict) -> None:
        self._audit.append(record)
        if self._audit_path:
            with open(self._audit_path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(record, sort_keys=True) + "\n")

    @property
    def audit_log(self) -> list[dict]:
        return list(self._audit)

    # --- reads -------------------------------------------------------------

    def _latest(self) -> GraphSnapshot:
        if not self._versions:
            raise GraphError("store is empty; call load_triples first")
        return next(reversed(self._versions.values()))

    @property
    def version(self) -> int:
        return self._latest().version

    def snapshot(self, version: int | None = None) -> GraphSnapshot:
        if version is None:
            return self._latest()
        if version in self._versions:
            return self._versions[version]
        return self._reconstruct(version)

    def _reconstruct(self, version: int) -> GraphSnapshot:
        """Rebuild an evicted snapshot by replaying the audit log over the base.

        Records are grouped per published version so each replayed batch bumps
        exactly once and the rebuilt numbering matches the original history.
        """
        if self._base is None or version < self._base.version or version > self.version:
            raise GraphError(f"version {version} is not reconstructable")
        shadow = GraphStore(registry=self.registry, retention=1, clock=self._clock)
        shadow._base = self._base
        shadow._publish(self._base)
        batches: dict[int, tuple[list, list]] = {}
        for record in self._audit:
            v = record["version"]
            if v <= self._base.version or v > version:
                continue
            nodes, edges = batches.setdefault(v, ([], []))
            if record["op"] == "add_node":
                payload = record["node"]
                nodes.append(EntityNode(
                    id=payload["id"], label=payload["label"], kind=NodeKind(payload["kind"]),
                    numeric_attrs={k: (v2["value"], Unit(v2["unit"]))
                                   for k, v2 in payload["numeric_attrs"].items()},
                    categorical_attrs=dict(payload["categorical_attrs"])))
            elif record["op"] == "upsert_edge":
                s, r, o = record["triple"]
                edges.append(RelationEdge(s, r, o, Provenance(record["provenance"])))
        for v in sorted(batches):
            nodes, edges = batches[v]
            shadow.upsert(nodes=nodes, edges=edges)
        return shadow._latest()

    def neighbors(self, node_id: str, relation: str | None = None,
                  direction: str = "both", version: int | None = None) -> list[tuple[str, str]]:
        """Duplicate-free (relation, neighbor-id) pairs in registry order."""
        snap = self.snapshot(version)
        if node_id not in snap.node_index:
            raise UnknownNode(node_id)
        seen = set()
        out: list[tuple[str, str]] = []
        for rel, neighbor_id, dir_ in snap.adjacency.get(node_id, ()):
            if direction != "both" and dir_ != direction:
                continue
            if relation is not None and rel != relation:
                continue
            key = (rel, neighbor_id)
            if key in seen:
                continue
            seen.add(key)
            out.append(key)
        return out

    def extract_subgraph(self, seeds, hop_budget: int, node_budget: int,
                         version: int | None = None) -> SubgraphView:
        """Multi-source BFS capped by hop and node budgets, seeds first.

        Frontier nodes are admitted in sorted (relation, neighbor-id) order so
        repeated extractions over the same snapshot are identical, and the
        admitted set at a smaller node budget is a prefix of a larger one.
        """
        snap = self.snapshot(version)
        return extract_subgraph_from(snap, seeds, hop_budget, node_budget)

    # --- export ------------------------------------------------------------

    def export_triples(self, version: int | None = None) -> str:
        snap = self.snapshot(version)
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(TRIPLES_HEADER)
        for triple in sorted(snap.edge_index):
            edge = snap.edge_index[triple]
            writer.writerow([edge.subject, edge.relation, edge.object, edge.provenance.value])
        return buf.getvalue()

    def export_attrs(self, version: int | None = None) -> str:
        snap = self.snapshot(version)
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(ATTRS_HEADER)
        for node_id in sorted(snap.node_index):
            node = snap.node_index[node_id]
            wrote_any = False
            for attr in sorted(node.numeric_attrs):
                value, unit = node.numeric_attrs[attr]
                writer.writerow([node.id, attr, f"{value:g}", unit.value, node.kind.value, node.label])
                wrote_any = True
            for attr in sorted(node.categorical_attrs):
                writer.writerow([node.id, attr, node.categorical_attrs[attr], "none",
                                 node.kind.value, node.label])
                wrote_any = True
            if not wrote_any:
                writer.writerow([node.id, "", "", "", node.kind.value, node.label])
        return buf.getvalue()


def extract_subgraph_from(snap: GraphSnapshot, seeds, hop_budget: int,
                          node_budget: int) -> SubgraphView:
    if hop_budget < 1 or node_budget < 1:
        raise ValueError("hop_budget and node_budget must be >= 1")
    seed_list = list(dict.fromkeys(seeds))
    if not seed_list:
        raise ValueError("seeds must be non-empty")
    for seed in seed_list:
        if seed not in snap.node_index:
            raise UnknownNode(seed)

    admitted: dict[str, EntityNode] = {s: snap.node_index[s] for s in seed_list}
    frontier = seed_list
    for _ in range(hop_budget):
        if len(admitted) >= node_budget:
            break
        next_frontier: list[str] = []
        for node_id in frontier:
            for _, neighbor_id, _ in snap.adjacency.get(node_id, ()):
                if neighbor_id in admitted:
                    continue
                admitted[neighbor_id] = snap.node_index[neighbor_id]
                next_frontier.append(neighbor_id)
                if len(admitted) >= node_budget:
                    break
            if len(admitted) >= node_budget:
                break
        if not next_frontier:
            break
        frontier = next_frontier

    edges = []
    for node_id in admitted:
        for rel, neighbor_id, dir_ in snap.adjacency.get(node_id, ()):
            if dir_ == "out" and neighbor_id in admitted:
                edges.append(snap.edge_index[(node_id, rel, neighbor_id)])
    edges.sort(key=lambda e: e.triple)
    return SubgraphView(nodes=admitted, edges=tuple(edges))
