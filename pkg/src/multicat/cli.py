"""Command-line entry point: multicat query|repl|serve|check.

Exit codes: 0 success, 1 query diagnostic or law violation, 2 load or
configuration error. Renderings go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import TextIO

from .category import check_category_laws
from .errors import MulticatError
from .graph import GraphSemantics, canonical_term, to_dot
from .lang.ast import OutputModel
from .render import Table
from .service import build_registry, create_app, evaluate_query
from .store import InstanceStore, check_functor_laws, load_dataset, load_examples, load_registry

_DEFAULT_FORMAT = {
    OutputModel.RELATIONAL.value: "table",
    OutputModel.XML.value: "xml",
    OutputModel.GRAPH.value: "json",
    OutputModel.ALGEBRAIC_GRAPH.value: "term",
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except MulticatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="multicat",
                                     description="multi-model query engine")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    q = sub.add_parser("query", help="run one query against a dataset")
    q.add_argument("--data", default="datasets", help="dataset root directory")
    q.add_argument("-d", "--dataset", required=True, help="dataset id (directory name)")
    src = q.add_mutually_exclusive_group(required=True)
    src.add_argument("-q", "--query", help="query text")
    src.add_argument("-f", "--file", help="file holding the query text")
    q.add_argument("--format", choices=["table", "csv", "xml", "json", "dot", "term"],
                   help="output format (default: follows the TO clause)")
    q.set_defaults(run=run_query)

    r = sub.add_parser("repl", help="interactive query session")
    r.add_argument("--data", default="datasets")
    r.add_argument("-d", "--dataset", required=True)
    r.set_defaults(run=run_repl)

    s = sub.add_parser("serve", help="start the HTTP service")
    s.add_argument("--data", default="datasets")
    s.add_argument("--host", default="127.0.0.1")
    s.add_argument("--port", type=int, default=8080)
    s.add_argument("--cors", default=None, help="allowed origin for the web console")
    s.set_defaults(run=run_serve)

    c = sub.add_parser("check", help="run category and functor law checks")
    c.add_argument("--data", default="datasets")
    c.set_defaults(run=run_check)

    return parser


def _load(args) -> InstanceStore:
    package = Path(args.data) / args.dataset
    if not package.is_dir():
        raise MulticatError(f"no dataset directory {package}")
    return load_dataset(package)


def run_query(args) -> int:
    store = _load(args)
    if args.query is not None:
        text = args.query
    else:
        path = Path(args.file)
        if not path.exists():
            raise MulticatError(f"no query file {path}")
        text = path.read_text(encoding="utf-8")
    response = evaluate_query(store, text)
    if response["status"] == "error":
        d = response["diagnostics"]
        print(f"{d['kind']} error at {d['line']}:{d['column']}: {d['message']}",
              file=sys.stderr)
        return 1
    fmt = args.format or _DEFAULT_FORMAT[response["model"]]
    sys.stdout.write(format_rendering(response["rendered"], fmt))
    return 0


def format_rendering(rendered: dict, fmt: str) -> str:
    def need(key: str):
        payload = rendered.get(key)
        if payload is None:
            raise MulticatError(f"result is not renderable as {key}")
        return payload

    if fmt == "csv":
        return need("relational")["csv"]
    if fmt == "table":
        payload = need("relational")
        return _align_table(Table(tuple(payload["columns"]),
                                  tuple(tuple(r) for r in payload["rows"])))
    if fmt == "xml":
        return need("xml") + "\n"
    if fmt == "term":
        return need("term") + "\n"
    if fmt == "json":
        return json.dumps(rendered, indent=2) + "\n"
    if fmt == "dot":
        view = need("graph")
        sem = GraphSemantics(frozenset(v["id"] for v in view["vertices"]),
                             frozenset((s, d) for s, d in view["edges"]))
        return to_dot(canonical_term(sem)) + "\n"
    raise MulticatError(f"unknown format {fmt!r}")


def _align_table(table: Table) -> str:
    if not table.columns:
        return "(no columns)\n"
    widths = [len(c) for c in table.columns]
    for row in table.rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    def line(cells):
        return "  ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip()
    out = [line(table.columns), line("-" * w for w in widths)]
    out.extend(line(row) for row in table.rows)
    return "\n".join(out) + "\n"


def run_check(args) -> int:
    root = Path(args.data)
    registry = load_registry(root)
    if not registry:
        print("no datasets")
        return 0
    failed = False
    for dataset_id, store in registry.items():
        cat = check_category_laws(store.schema)
        fun = check_functor_laws(store)
        if cat.ok and fun.ok:
            print(f"{dataset_id}: OK")
        else:
            failed = True
            print(f"{dataset_id}: FAIL")
            for report in (cat, fun):
                if not report.ok:
                    print("  " + report.summary().replace("\n", "\n  "))
    return 1 if failed else 0


def run_serve(args) -> int:
    import uvicorn

    registry = build_registry(args.data)
    app = create_app(registry, cors=args.cors)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def run_repl(args, stdin: TextIO | None = None, stdout: TextIO | None = None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    store = _load(args)

    def emit(text: str):
        stdout.write(text if text.endswith("\n") else text + "\n")

    emit(f"dataset {args.dataset!r} loaded; finish a query with a blank line, "
         ":examples lists samples, :schema shows the schema, :quit leaves")
    pending: list[str] = []
    while True:
        stdout.write("mc> " if not pending else "...> ")
        stdout.flush()
        line = stdin.readline()
        if not line:  # EOF
            return 0
        line = line.rstrip("\n")
        if not pending and line.startswith(":"):
            if line == ":quit":
                return 0
            if line == ":schema":
                for m in store.schema.non_identity_morphisms():
                    emit(f"{m.id}: {m.domain} -> "
                         f"{'[' + m.codomain + ']' if m.cardinality == 'many' else m.codomain}")
            elif line == ":examples":
                for ex in load_examples(store.package_dir):
                    emit(f"- {ex['title']}")
                    emit("  " + ex["query"].replace("\n", "\n  "))
            else:
                emit(f"unknown command {line!r}")
            continue
        if line.strip():
            pending.append(line)
            continue
        if not pending:
            continue
        text = "\n".join(pending)
        pending = []
        response = evaluate_query(store, text)
        if response["status"] == "error":
            d = response["diagnostics"]
            emit(f"{d['kind']} error at {d['line']}:{d['column']}: {d['message']}")
            continue
        fmt = _DEFAULT_FORMAT[response["model"]]
        emit(format_rendering(response["rendered"], fmt))
        emit(f"stages: {len(response['plan']['stages'])}")


if __name__ == "__main__":
    sys.exit(main())
