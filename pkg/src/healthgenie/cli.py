"""Operator tooling: ingest, one-shot queries, enrichment review, replay, serve.

Exit codes: 0 success, 1 data error, 2 config error. Every command honors
``--format json`` for scripting; the human format is presentation only.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bootstrap import CorpusPaths, EngineContext, build_context
from .config import load_config
from .errors import ConfigError, GenieError, GraphError, NoCandidates
from .gateway.base import ProviderConfig
from .kg.model import Provenance, RelationEdge

EXIT_OK = 0
EXIT_DATA = 1
EXIT_CONFIG = 2


def _emit(payload: dict, as_json: bool, human_lines) -> None:
    if as_json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for line in human_lines:
            print(line)


def _corpus_paths(args, config) -> CorpusPaths:
    paths = CorpusPaths.from_config(config)
    if getattr(args, "triples", None):
        paths.triples = Path(args.triples)
    if getattr(args, "attrs", None):
        paths.attrs = Path(args.attrs)
    if getattr(args, "relations", None):
        paths.relations = Path(args.relations)
    return paths


def _build(args) -> EngineContext:
    config = load_config(getattr(args, "config", None))
    return build_context(config=config, paths=_corpus_paths(args, config),
                         provider=ProviderConfig.from_env(default=config.server.provider),
                         strict=bool(getattr(args, "strict", False)))


def cmd_ingest(args) -> int:
    try:
        context = _build(args)
    except GraphError as exc:
        print(f"ingest failed: {exc}", file=sys.stderr)
        return EXIT_DATA
    report = context.store.ingest_report
    payload = {"report": report.to_dict(), "snapshot_version": context.snapshot.version}
    lines = [
        f"nodes: {report.nodes}",
        f"edges: {report.edges}",
        f"duplicates: {report.duplicates}",
        f"rejected rows: {len(report.rejected)}",
    ]
    lines += [f"  [{src}:{line}] {reason}" for src, line, reason in report.rejected]
    lines += [f"warning: {w}" for w in report.warnings]
    if report.auto_registered:
        lines.append(f"auto-registered relations: {', '.join(report.auto_registered)}")
    _emit(payload, args.format == "json", lines)
    return EXIT_OK


def cmd_query(args) -> int:
    context = _build(args)
    session = (context.replay_session(_read_records(args.profile))
               if args.profile else context.new_session(deterministic_token=True))
    result = session.route_turn(args.text)
    payload = result.to_dict()
    lines = [f"intent: {result.intent.category.value}"]
    if result.recommendation is not None:
        for item in result.recommendation.results:
            node = context.snapshot.node(item.recipe)
            lines.append(f"  {item.recipe} ({node.label}) score={item.score:.4f} {item.status}")
    if result.no_candidates:
        lines.append("no candidates; leave-one-out diagnostics:")
        for ref, info in sorted(result.no_candidates.items()):
            lines.append(f"  drop {info['description']} -> {info['candidates_if_dropped']} candidates")
    if result.pending_clarifications:
        for term, cands in result.pending_clarifications:
            lines.append(f"clarify {term!r}: {', '.join(cands) if cands else 'no candidates'}")
    lines.append(f"reply: {result.reply_text}")
    if args.dot:
        if result.recommendation is None:
            print("no subgraph to export", file=sys.stderr)
        else:
            Path(args.dot).write_text(result.recommendation.subgraph.to_dot(),
                                      encoding="utf-8")
            lines.append(f"dot written to {args.dot}")
    _emit(payload, args.format == "json", lines)
    return EXIT_OK


def _read_records(path) -> list[dict]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                records.append(json.loads(line))
    return records


def cmd_enrich(args) -> int:
    context = _build(args)
    if args.accept:
        proposals = json.loads(Path(args.accept).read_text(encoding="utf-8"))
        edges = [RelationEdge(p["subject"], p["relation"], p["object"],
                              Provenance.INFERRED) for p in proposals]
        snapshot = context.store.upsert(edges=edges) if edges else context.snapshot
        out = Path(args.out) if args.out else None
        exported = context.store.export_triples()
        if out:
            out.write_text(exported, encoding="utf-8")
        payload = {"accepted": len(edges), "snapshot_version": snapshot.version,
                   "out": str(out) if out else None}
        lines = [f"accepted {len(edges)} proposals; snapshot now v{snapshot.version}"]
        if out:
            lines.append(f"updated triples written to {out}")
        _emit(payload, args.format == "json", lines)
        return EXIT_OK

    notes = Path(args.notes).read_text(encoding="utf-8")
    proposals = context.gateway.extract_relations(notes, context.lexicon.lookup)
    rows = [{"subject": e.subject, "relation": e.relation, "object": e.object,
             "provenance": e.provenance.value} for e in proposals]
    out = Path(args.out) if args.out else Path("proposals.json")
    out.write_text(json.dumps(rows, indent=2, sort_keys=True), encoding="utf-8")
    payload = {"proposals": rows, "out": str(out)}
    lines = [f"{len(rows)} proposals written to {out} (pending review)"]
    lines += [f"  ({r['subject']}, {r['relation']}, {r['object']})" for r in rows]
    _emit(payload, args.format == "json", lines)
    return EXIT_OK


def cmd_replay(args) -> int:
    context = _build(args)
    session = context.replay_session(_read_records(args.session))
    rec = session.last_recommendation
    payload = {
        "profile": session.profile.to_dict(),
        "recommendation": rec.to_dict() if rec else None,
        "query_version": session.query_version,
    }
    lines = [f"actions replayed: {len(session.actions)}",
             f"query_version: {session.query_version}"]
    if rec:
        lines += [f"  {r.recipe} score={r.score:.4f} {r.status}" for r in rec.results]
    _emit(payload, args.format == "json", lines)
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .api.app import create_app

    context = _build(args)
    app = create_app(context)
    server = context.config.server
    uvicorn.run(app, host=server.bind, port=server.port, log_level="info")
    return EXIT_OK


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="genie")
    parser.add_argument("--config", help="TOML config overlay", default=None)
    parser.add_argument("--format", choices=("text", "json"), default="text")
    # the shared flags also parse after the subcommand; SUPPRESS keeps a
    # subparser from clobbering a value given before it
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--config", default=argparse.SUPPRESS)
    shared.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", parents=[shared], help="load and validate a corpus")
    p.add_argument("--triples", required=True)
    p.add_argument("--attrs", required=True)
    p.add_argument("--relations")
    p.add_argument("--strict", action="store_true")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("query", parents=[shared], help="one-shot query for debugging")
    p.add_argument("text")
    p.add_argument("--profile", help="session log to replay first")
    p.add_argument("--triples")
    p.add_argument("--attrs")
    p.add_argument("--relations")
    p.add_argument("--dot", help="write the result subgraph as Graphviz DOT")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("enrich", parents=[shared], help="propose / accept inferred relations")
    p.add_argument("--notes", help="free-text nutritional notes")
    p.add_argument("--accept", help="accept a reviewed proposal file")
    p.add_argument("--out", help="output path (proposal file or updated triples)")
    p.add_argument("--triples")
    p.add_argument("--attrs")
    p.add_argument("--relations")
    p.set_defaults(func=cmd_enrich)

    p = sub.add_parser("replay", parents=[shared], help="replay a session log")
    p.add_argument("--session", required=True)
    p.add_argument("--triples")
    p.add_argument("--attrs")
    p.add_argument("--relations")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("serve", parents=[shared], help="run the HTTP service")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_arg_parser()
    args = parser.parse_args(argv)
    if args.command == "enrich" and not (args.notes or args.accept):
        parser.error("enrich needs --notes or --accept")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FileNotFoundError as exc:
        print(f"missing file: {exc.filename}", file=sys.stderr)
        return EXIT_DATA
    except NoCandidates as exc:
        print(f"{exc}", file=sys.stderr)
        return EXIT_OK
    except GraphError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except GenieError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    raise SystemExit(main())
