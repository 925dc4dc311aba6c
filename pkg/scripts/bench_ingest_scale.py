#!/usr/bin/env python3
"""Ingestion scale benchmark: 100k nodes / 300k triples, then a hop-2 query.

Generates a synthetic corpus in memory (deterministic, no RNG), ingests it
through the normal CSV path, and times ingest + one hop-2 subgraph
extraction. The production target is < 5 s on a desktop machine.
"""
from __future__ import annotations

import io
import time

N_RECIPES = 20_000
N_INGREDIENTS = 79_990
N_CUISINES = 6
N_CONDITIONS = 4
INGREDIENTS_PER_RECIPE = 10


def build_corpus() -> tuple[str, str]:
    """(triples_csv, attrs_csv) for ~100k nodes and ~300k triples."""
    attrs = ["node_id,attr,value,unit,kind_hint,label"]
    triples = ["subject,relation,object,provenance"]

    cuisines = [f"C{i:02d}" for i in range(N_CUISINES)]
    conditions = [f"H{i:02d}" for i in range(N_CONDITIONS)]
    for c in cuisines:
        attrs.append(f"{c},,,,cuisine,Cuisine {c}")
    for h in conditions:
        attrs.append(f"{h},,,,condition,Condition {h}")

    for i in range(N_INGREDIENTS):
        attrs.append(f"I{i:06d},,,,ingredient,Ingredient {i}")

    for r in range(N_RECIPES):
        rid = f"R{r:06d}"
        attrs.append(f"{rid},calories,{200 + (r % 500)},kcal,recipe,Recipe {r}")
        attrs.append(f"{rid},protein,{5 + (r % 30)},g,recipe,Recipe {r}")
        base = (r * 37) % N_INGREDIENTS
        for k in range(INGREDIENTS_PER_RECIPE):
            ing = (base + k * 101) % N_INGREDIENTS
            triples.append(f"{rid},contains,I{ing:06d},curated")
        triples.append(f"{rid},belongsToCuisine,{cuisines[r % N_CUISINES]},curated")
        triples.append(f"{rid},recommendsFor,{conditions[r % N_CONDITIONS]},curated")

    # derivation chains between ingredients to round out 300k triples
    remaining = 300_000 - (len(triples) - 1)
    for i in range(max(0, remaining)):
        a = (i * 13) % N_INGREDIENTS
        b = (a + 1 + (i % 977)) % N_INGREDIENTS
        if a != b:
            triples.append(f"I{a:06d},derivesFrom,I{b:06d},curated")

    return "\n".join(triples) + "\n", "\n".join(attrs) + "\n"


def run_benchmark(hop_budget: int = 2, node_budget: int = 500) -> dict:
    from healthgenie.kg import GraphStore

    triples_csv, attrs_csv = build_corpus()
    store = GraphStore()
    t0 = time.perf_counter()
    snapshot = store.load_triples(io.StringIO(triples_csv), io.StringIO(attrs_csv))
    t_ingest = time.perf_counter() - t0

    t1 = time.perf_counter()
    view = store.extract_subgraph(["R000000"], hop_budget=hop_budget,
                                  node_budget=node_budget)
    t_query = time.perf_counter() - t1

    return {
        "nodes": len(snapshot.node_index),
        "triples": snapshot.triple_count,
        "ingest_seconds": t_ingest,
        "hop2_seconds": t_query,
        "total_seconds": t_ingest + t_query,
        "subgraph_nodes": len(view.nodes),
        "rejected": len(store.ingest_report.rejected),
    }


if __name__ == "__main__":
    stats = run_benchmark()
    for key, value in stats.items():
        print(f"{key}: {value:.3f}" if isinstance(value, float) else f"{key}: {value}")
