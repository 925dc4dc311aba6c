#!/usr/bin/env python3
"""Walk the full circular loop over the HTTP API, printing each step.

Covers: free-text query -> ranked recommendation + subgraph -> node
exclusion/inclusion -> apply with diff -> follow-up question -> undo.
"""
from __future__ import annotations

from fastapi.testclient import TestClient

from healthgenie.api import create_app
from healthgenie.bootstrap import build_context


def show(title: str, body: str) -> None:
    print(f"\n=== {title} ===")
    print(body)


def main() -> None:
    context = build_context()
    client = TestClient(create_app(context))
    token = client.post("/sessions").json()["token"]
    print(f"session token: {token}")

    chat = client.post(f"/sessions/{token}/chat", json={
        "message": "I plan to reduce protein and salt intake, "
                   "please recommend some related recipes."}).json()
    recipes = [r["recipe"] for r in chat["recommendation"]["results"]]
    show("opening query", chat["reply_text"])
    show("ranked recipes", ", ".join(recipes))
    show("graph", f"{len(chat['subgraph']['nodes'])} nodes, "
                  f"{len(chat['subgraph']['edges'])} edges at detail "
                  f"{chat['subgraph']['detail_level']}")

    client.post(f"/sessions/{token}/interactions",
                json={"kind": "exclude", "node_id": "BlackPepper"})
    client.post(f"/sessions/{token}/interactions",
                json={"kind": "include", "node_id": "CrushedTomato"})
    staged = client.get(f"/sessions/{token}/history").json()["actions"]
    show("staged actions", "\n".join(
        f"  #{a['action_id']} {a['kind']} {a['target']} [{a['status']}]"
        for a in staged if a["status"] == "staged"))

    applied = client.post(f"/sessions/{token}/apply", json={}).json()
    show("after apply", ", ".join(r["recipe"]
                                  for r in applied["recommendation"]["results"]))
    fading = [n for n, mark in applied["subgraph_with_diff"]["diff"].items()
              if mark == "removed-fading"]
    show("fading out", ", ".join(sorted(fading)) or "(nothing)")

    followup = client.post(f"/sessions/{token}/chat", json={
        "message": "What are the nutritional values of these recipes?"}).json()
    show("follow-up", followup["reply_text"])

    suggestions = client.get(f"/sessions/{token}/suggested-queries").json()
    show("suggested queries", "\n".join(f"  - {s}" for s in suggestions["suggestions"]))

    history = client.get(f"/sessions/{token}/history").json()["actions"]
    exclude_id = next(a["action_id"] for a in history if a["kind"] == "exclude_node")
    undone = client.post(f"/sessions/{token}/undo", json={"action_id": exclude_id}).json()
    show("after undoing the exclusion",
         ", ".join(r["recipe"] for r in undone["recommendation"]["results"]))


if __name__ == "__main__":
    main()
