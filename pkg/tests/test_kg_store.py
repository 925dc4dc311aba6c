import io
import json

import pytest
from hypothesis import given, settings, strategies as st

from healthgenie.errors import (
    DanglingReference,
    GraphError,
    MalformedRow,
    UnknownNode,
    UnknownRelation,
    VersionConflict,
)
from healthgenie.kg import (
    GraphStore,
    NodeKind,
    Provenance,
    RelationEdge,
    Unit,
)

TRIPLES_HEADER = "subject,relation,object,provenance\n"
ATTRS_HEADER = "node_id,attr,value,unit,kind_hint,label\n"


def make_store(triples: str, attrs: str, strict: bool = False, registry=None) -> GraphStore:
    store = GraphStore(registry=registry, clock=lambda: 0.0)
    store.load_triples(io.StringIO(TRIPLES_HEADER + triples),
                       io.StringIO(ATTRS_HEADER + attrs), strict=strict)
    return store


# --- loading -----------------------------------------------------------------

def test_load_paper_example_attrs():
    store = make_store(
        "GrilledTofuWrap,contains,Tofu,curated\n",
        "GrilledTofuWrap,calories,320,kcal,recipe,Grilled Tofu Wrap\n"
        "Tofu,,,,ingredient,Tofu\n")
    snap = store.snapshot()
    assert snap.node("GrilledTofuWrap").numeric_attrs["calories"] == (320.0, Unit.KCAL)
    assert ("GrilledTofuWrap", "contains", "Tofu") in snap.edge_index


def test_load_empty_streams():
    store = make_store("", "")
    snap = store.snapshot()
    assert snap.version == 1
    assert len(snap.node_index) == 0
    assert snap.triple_count == 0


def test_fixture_counts_match_csv_oracle(ctx, fixture_rows):
    node_ids = {row[0] for row in fixture_rows["attrs"]}
    triples = {(s, r, o) for s, r, o, _ in fixture_rows["triples"]}
    snap = ctx.snapshot
    assert len(snap.node_index) == len(node_ids)
    assert snap.triple_count == len(triples)
    assert set(snap.edge_index) == triples


def test_mg_normalized_to_grams(ctx):
    value, unit = ctx.snapshot.node("GrilledTofuWrap").numeric_attrs["sodium"]
    assert unit is Unit.G
    assert value == pytest.approx(0.4)


def test_malformed_row_lenient_reports():
    store = make_store(
        "A,contains,B,curated\n",
        "A,calories,oops,kcal,recipe,A\n"
        "A,,,,recipe,A\nB,,,,ingredient,B\n")
    assert any("non-numeric" in reason for _, _, reason in store.ingest_report.rejected)
    assert store.snapshot().has_node("A")


def test_malformed_row_strict_raises():
    with pytest.raises(MalformedRow):
        make_store("", "A,calories,oops,kcal,recipe,A\n", strict=True)


def test_dangling_reference_lenient_rejected():
    store = make_store("A,contains,Ghost,curated\n", "A,,,,recipe,A\n")
    assert store.snapshot().triple_count == 0
    assert any("dangling" in reason for _, _, reason in store.ingest_report.rejected)


def test_dangling_reference_strict_raises():
    with pytest.raises(DanglingReference):
        make_store("A,contains,Ghost,curated\n", "A,,,,recipe,A\n", strict=True)


def test_unknown_relation_strict_vs_lenient():
    attrs = "A,,,,ingredient,A\nB,,,,ingredient,B\n"
    with pytest.raises(UnknownRelation):
        make_store("A,weirdRel,B,curated\n", attrs, strict=True)
    store = make_store("A,weirdRel,B,curated\n", attrs)
    assert "weirdRel" in store.ingest_report.auto_registered
    assert store.snapshot().triple_count == 1


def test_recipe_without_contains_warned_lenient_raises_strict():
    attrs = "R,calories,100,kcal,recipe,R\n"
    store = make_store("", attrs)
    assert any("no outgoing 'contains'" in w for w in store.ingest_report.warnings)
    with pytest.raises(GraphError):
        make_store("", attrs, strict=True)


def test_second_load_rejected(ctx):
    with pytest.raises(GraphError):
        ctx.store.load_triples(io.StringIO(TRIPLES_HEADER), io.StringIO(ATTRS_HEADER))


# --- upsert -----------------------------------------------------------------

def test_upsert_new_edge_versions(fresh_ctx):
    store = fresh_ctx.store
    v1 = store.snapshot()
    edge = RelationEdge("Lemon", "neutralizeOdor", "Fish", Provenance.INFERRED)
    v2 = store.upsert_edge(edge)
    assert v2.version == v1.version + 1
    assert ("Lemon", "neutralizeOdor", "Fish") in v2.edge_index
    assert ("Lemon", "neutralizeOdor", "Fish") not in v1.edge_index
    # prior snapshot still served
    assert store.snapshot(v1.version).triple_count == v1.triple_count


def test_upsert_identical_is_noop(fresh_ctx):
    store = fresh_ctx.store
    edge = RelationEdge("Lemon", "neutralizeOdor", "Fish", Provenance.INFERRED)
    v2 = store.upsert_edge(edge)
    v3 = store.upsert_edge(edge)
    assert v3.version == v2.version
    assert v3.triple_count == v2.triple_count


def test_upsert_dangling_and_unknown_relation(fresh_ctx):
    store = fresh_ctx.store
    with pytest.raises(DanglingReference):
        store.upsert_edge(RelationEdge("Lemon", "contains", "NotANode"))
    with pytest.raises(UnknownRelation):
        store.upsert_edge(RelationEdge("Lemon", "zapsOdor", "Fish"))


def test_version_conflict(fresh_ctx):
    store = fresh_ctx.store
    stale = store.version
    store.upsert_edge(RelationEdge("Lemon", "neutralizeOdor", "Fish"))
    with pytest.raises(VersionConflict):
        store.upsert_edge(RelationEdge("Ginger", "neutralizeOdor", "Fish"),
                          expected_version=stale)


def test_hundred_upserts_match_set_union_oracle(fresh_ctx):
    store = fresh_ctx.store
    nodes = sorted(store.snapshot().node_index)
    oracle = set(store.snapshot().edge_index)
    for i in range(100):
        s = nodes[(7 * i) % len(nodes)]
        o = nodes[(11 * i + 3) % len(nodes)]
        oracle.add((s, "substitutableBy", o))
        store.upsert_edge(RelationEdge(s, "substitutableBy", o))
    snap = store.snapshot()
    assert snap.triple_count == len(oracle)
    assert set(snap.edge_index) == oracle


def test_audit_log_appended(fresh_ctx, tmp_path):
    path = tmp_path / "audit.jsonl"
    store = GraphStore(registry=fresh_ctx.store.registry, audit_path=path, clock=lambda: 1.0)
    store.load_triples(io.StringIO(TRIPLES_HEADER + "A,contains,B,curated\n"),
                       io.StringIO(ATTRS_HEADER + "A,,,,recipe,A\nB,,,,ingredient,B\n"))
    store.upsert_edge(RelationEdge("B", "substitutableBy", "A"))
    records = [json.loads(line) for line in path.read_text().splitlines()]
    assert [r["op"] for r in records] == ["load", "upsert_edge"]
    assert records[1]["triple"] == ["B", "substitutableBy", "A"]
    assert all({"version", "op", "triple", "timestamp"} <= set(r) for r in records)


def test_snapshot_retention_and_reconstruction(fresh_ctx):
    store = fresh_ctx.store
    nodes = sorted(store.snapshot().node_index)
    tracked = {}
    for i in range(24):  # versions 2..25, retention is 16
        store.upsert_edge(RelationEdge(nodes[i], "substitutableBy", nodes[i + 1]))
        tracked[store.version] = set(store.snapshot().edge_index)
    old_version = 3
    rebuilt = store.snapshot(old_version)
    assert rebuilt.version == old_version
    assert set(rebuilt.edge_index) == tracked[old_version]


def test_snapshot_immutability_under_writes(fresh_ctx):
    store = fresh_ctx.store
    snap = store.snapshot()
    before = json.dumps(sorted(snap.edge_index), sort_keys=True)
    neighbors_before = store.neighbors("GrilledTofuWrap", version=snap.version)
    store.upsert_edge(RelationEdge("GrilledTofuWrap", "contains", "Basil"))
    assert json.dumps(sorted(snap.edge_index), sort_keys=True) == before
    assert store.neighbors("GrilledTofuWrap", version=snap.version) == neighbors_before
    assert ("GrilledTofuWrap", "contains", "Basil") in store.snapshot().edge_index


# --- neighbors -----------------------------------------------------------------

def test_neighbors_contains_out(ctx):
    pairs = ctx.store.neighbors("GrilledTofuWrap", relation="contains", direction="out")
    assert ("contains", "Tofu") in pairs


def test_neighbors_isolated_node(ctx):
    assert ctx.store.neighbors("Saffron") == []


def test_neighbors_unknown_node(ctx):
    with pytest.raises(UnknownNode):
        ctx.store.neighbors("NotANode")


def test_neighbors_match_full_edge_scan_oracle(ctx):
    snap = ctx.snapshot
    for node_id in snap.node_index:
        expected = sorted({(r, o) for (s, r, o) in snap.edge_index if s == node_id})
        assert ctx.store.neighbors(node_id, direction="out") == expected
        expected_in = sorted({(r, s) for (s, r, o) in snap.edge_index if o == node_id})
        assert ctx.store.neighbors(node_id, direction="in") == expected_in


def test_neighbors_deterministic_order(ctx):
    a = ctx.store.neighbors("GrilledTofuWrap")
    b = ctx.store.neighbors("GrilledTofuWrap")
    assert a == b == sorted(a)


# --- subgraph extraction ---------------------------------------------------------

def closure_oracle(snap, seeds, hops):
    """Iterative neighbor-scan closure, ignoring node budgets."""
    nodes = set(seeds)
    frontier = set(seeds)
    for _ in range(hops):
        nxt = set()
        for (s, r, o) in snap.edge_index:
            if s in frontier and o not in nodes:
                nxt.add(o)
            if o in frontier and s not in nodes:
                nxt.add(s)
        nodes |= nxt
        frontier = nxt
    return nodes


def test_subgraph_hop1_direct_neighbors(ctx):
    view = ctx.store.extract_subgraph(["GrilledTofuWrap"], hop_budget=1, node_budget=500)
    expected = closure_oracle(ctx.snapshot, {"GrilledTofuWrap"}, 1)
    assert set(view.nodes) == expected
    assert "Tofu" in view.nodes


def test_subgraph_node_budget_equals_seeds(ctx):
    seeds = ["GrilledTofuWrap", "CapreseSalad"]
    view = ctx.store.extract_subgraph(seeds, hop_budget=3, node_budget=len(seeds))
    assert set(view.nodes) == set(seeds)


def test_subgraph_budgets_must_be_positive(ctx):
    with pytest.raises(ValueError):
        ctx.store.extract_subgraph(["Tofu"], hop_budget=0, node_budget=5)
    with pytest.raises(ValueError):
        ctx.store.extract_subgraph(["Tofu"], hop_budget=1, node_budget=0)
    with pytest.raises(UnknownNode):
        ctx.store.extract_subgraph(["NotANode"], hop_budget=1, node_budget=5)


def test_subgraph_hop2_matches_closure_oracle(ctx):
    view = ctx.store.extract_subgraph(["SteamedVeggieBowl"], hop_budget=2, node_budget=10_000)
    assert set(view.nodes) == closure_oracle(ctx.snapshot, {"SteamedVeggieBowl"}, 2)


def test_subgraph_edges_have_both_endpoints(ctx):
    view = ctx.store.extract_subgraph(["GrilledTofuWrap", "BeefStirFry"],
                                      hop_budget=2, node_budget=25)
    for edge in view.edges:
        assert edge.subject in view.nodes and edge.object in view.nodes


def test_subgraph_every_node_connected_within_budget(ctx):
    seeds = ["GardenMinestrone"]
    view = ctx.store.extract_subgraph(seeds, hop_budget=2, node_budget=18)
    # BFS from seeds restricted to the returned edge set
    adjacency = {}
    for e in view.edges:
        adjacency.setdefault(e.subject, set()).add(e.object)
        adjacency.setdefault(e.object, set()).add(e.subject)
    reached = set(seeds)
    frontier = set(seeds)
    for _ in range(2):
        frontier = {n for f in frontier for n in adjacency.get(f, ()) if n not in reached}
        reached |= frontier
    assert reached == set(view.nodes)


# --- export round-trip ------------------------------------------------------------

def test_export_round_trip(ctx, fixture_rows):
    exported = ctx.store.export_triples()
    rows = {tuple(line.split(",")) for line in exported.strip().splitlines()[1:]}
    original = {(s, r, o, p) for s, r, o, p in fixture_rows["triples"]}
    assert rows == original


def test_attrs_export_reloads_identically(ctx):
    triples = ctx.store.export_triples()
    attrs = ctx.store.export_attrs()
    store2 = GraphStore(registry=ctx.store.registry, clock=lambda: 0.0)
    snap2 = store2.load_triples(io.StringIO(triples), io.StringIO(attrs))
    snap1 = ctx.snapshot
    assert set(snap2.edge_index) == set(snap1.edge_index)
    for node_id, node in snap1.node_index.items():
        other = snap2.node(node_id)
        assert other.kind is node.kind
        assert other.label == node.label
        assert other.numeric_attrs == node.numeric_attrs
        assert other.categorical_attrs == node.categorical_attrs


# --- properties -----------------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(st.data())
def test_upsert_idempotence_property(ctx, data):
    nodes = sorted(ctx.snapshot.node_index)
    s = data.draw(st.sampled_from(nodes))
    o = data.draw(st.sampled_from(nodes))
    relation = data.draw(st.sampled_from(["contains", "substitutableBy", "recommendsFor"]))
    store = GraphStore(registry=ctx.store.registry, clock=lambda: 0.0)
    store.load_triples(io.StringIO(ctx.store.export_triples()),
                       io.StringIO(ctx.store.export_attrs()))
    once = store.upsert_edge(RelationEdge(s, relation, o))
    twice = store.upsert_edge(RelationEdge(s, relation, o))
    assert set(once.edge_index) == set(twice.edge_index)
    assert twice.version == once.version


def test_node_kinds_cover_fixture(ctx):
    kinds = {n.kind for n in ctx.snapshot.node_index.values()}
    assert {NodeKind.RECIPE, NodeKind.INGREDIENT, NodeKind.NUTRIENT,
            NodeKind.CONDITION, NodeKind.CUISINE, NodeKind.METHOD,
            NodeKind.BENEFIT} <= kinds


def test_quoted_fields_with_commas():
    store = make_store(
        '"Soup, Hearty",contains,Carrot,curated\n',
        '"Soup, Hearty",,,,recipe,"Soup, Hearty"\nCarrot,,,,ingredient,Carrot\n')
    snap = store.snapshot()
    assert snap.node("Soup, Hearty").label == "Soup, Hearty"
    assert ("Soup, Hearty", "contains", "Carrot") in snap.edge_index
    # and the round-trip re-quotes them
    exported = store.export_triples()
    assert '"Soup, Hearty",contains,Carrot,curated' in exported


def test_concurrent_writers_serialize_without_lost_updates(fresh_ctx):
    import threading

    store = fresh_ctx.store
    nodes = sorted(store.snapshot().node_index)[:40]
    errors = []

    def writer(offset):
        try:
            for i in range(10):
                a = nodes[(offset + i) % len(nodes)]
                b = nodes[(offset + i + 1) % len(nodes)]
                store.upsert_edge(RelationEdge(a, "substitutableBy", b))
        except Exception as exc:  # pragma: no cover
            errors.append(exc)

    threads = [threading.Thread(target=writer, args=(k * 7,)) for k in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert not errors
    snap = store.snapshot()
    for k in range(8):
        for i in range(10):
            a = nodes[(k * 7 + i) % len(nodes)]
            b = nodes[(k * 7 + i + 1) % len(nodes)]
            assert (a, "substitutableBy", b) in snap.edge_index
