"""HTTP facade over a registry of loaded datasets.

Read-only, single-tenant, stateless between requests: the registry is
loaded once at startup and every store in it is immutable, so identical
requests get identical responses. Query diagnostics travel in the
response body with status "error"; HTTP error codes are reserved for
transport problems (unknown dataset, malformed body).
"""

from __future__ import annotations

import json

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .engine import compile_query, execute, plan_to_json
from .errors import (EvalRuntimeError, MulticatError, QuerySyntaxError, QueryTypeError,
                     UnknownCollection, UnknownMorphism)
from .lang import parse, source_types, typecheck
from .render import render_all
from .store import InstanceStore, check_functor_laws, load_examples, load_registry


def create_app(registry: dict[str, InstanceStore], cors: str | None = None) -> FastAPI:
    app = FastAPI(title="multicat", docs_url=None, redoc_url=None)

    if cors:
        from fastapi.middleware.cors import CORSMiddleware
        app.add_middleware(CORSMiddleware, allow_origins=[cors],
                           allow_methods=["*"], allow_headers=["*"])

    def dataset_or_404(dataset_id: str) -> InstanceStore | JSONResponse:
        store = registry.get(dataset_id)
        if store is None:
            return JSONResponse({"error": f"unknown dataset {dataset_id!r}"},
                                status_code=404)
        return store

    @app.get("/datasets")
    def list_datasets():
        return [
            {
                "id": dataset_id,
                "name": store.name,
                "collectionCount": len(store.collections),
                "models": list(store.models),
            }
            for dataset_id, store in sorted(registry.items())
        ]

    @app.get("/datasets/{dataset_id}/schema")
    def schema_graph(dataset_id: str):
        store = dataset_or_404(dataset_id)
        if isinstance(store, JSONResponse):
            return store
        schema = store.schema
        return {
            "objects": [{"id": o.id, "kind": o.kind} for o in schema.objects.values()],
            "morphisms": [
                {"id": m.id, "domain": m.domain, "codomain": m.codomain,
                 "cardinality": m.cardinality}
                for m in schema.non_identity_morphisms()
            ],
        }

    @app.get("/datasets/{dataset_id}/examples")
    def examples(dataset_id: str):
        store = dataset_or_404(dataset_id)
        if isinstance(store, JSONResponse):
            return store
        return load_examples(store.package_dir) if store.package_dir else []

    @app.post("/datasets/{dataset_id}/query")
    async def run_query(dataset_id: str, request: Request):
        store = dataset_or_404(dataset_id)
        if isinstance(store, JSONResponse):
            return store
        try:
            body = json.loads(await request.body())
        except (json.JSONDecodeError, UnicodeDecodeError):
            return JSONResponse({"error": "body must be JSON"}, status_code=400)
        if not isinstance(body, dict) or not isinstance(body.get("query"), str):
            return JSONResponse({"error": "body needs a string 'query' field"},
                                status_code=400)
        return evaluate_query(store, body["query"])

    return app


def evaluate_query(store: InstanceStore, text: str) -> dict:
    """Full pipeline for one query; diagnostics become data, not exceptions."""
    try:
        ast = parse(text)
        typed = typecheck(ast, store.schema, source_types(store))
        plan = compile_query(typed)
        value = execute(plan, store)
    except QuerySyntaxError as exc:
        return _error("syntax", exc.msg, exc.line, exc.column)
    except (QueryTypeError, UnknownMorphism, UnknownCollection) as exc:
        loc = getattr(exc, "loc", None) or (1, 1)
        return _error("type", str(exc), loc[0], loc[1])
    except EvalRuntimeError as exc:
        return _error("runtime", str(exc), 1, 1)
    except MulticatError as exc:
        return _error("internal", str(exc), 1, 1)

    rendered = render_all(value, store, typed.result_elem_type, typed.output_model)
    return {
        "status": "ok",
        "model": typed.output_model.value,
        "rendered": rendered,
        "plan": plan_to_json(plan),
        "diagnostics": None,
    }


def _error(kind: str, message: str, line: int, column: int) -> dict:
    return {
        "status": "error",
        "model": None,
        "rendered": None,
        "plan": None,
        "diagnostics": {"kind": kind, "message": message,
                        "line": line, "column": column},
    }


def build_registry(data_root: str) -> dict[str, InstanceStore]:
    """Load all dataset packages and insist every store satisfies the functor laws."""
    registry = load_registry(data_root)
    for dataset_id, store in registry.items():
        report = check_functor_laws(store)
        if not report.ok:
            raise MulticatError(
                f"dataset {dataset_id!r} violates the functor laws:\n{report.summary()}")
    return registry
