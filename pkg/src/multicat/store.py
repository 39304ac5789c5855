"""Immutable multi-model instance store.

A dataset package is a directory with a manifest, a schema, and one data
file per collection in that collection's native model: CSV for relational,
one XML document per hierarchy, a JSON vertex/edge file for graphs, and
key,value CSV files backing cross-model morphisms. ``load_dataset``
materializes everything in memory: a typed collection per entity object
and a lookup table per morphism. Identity tables and registered composite
tables are materialized too (composites by chaining, unless the manifest
backs them with a file), so the functor laws can be checked extensionally.

Stores are immutable after loading and safe to share across threads.
"""

from __future__ import annotations

import csv
import json
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from pathlib import Path

from .category import LawReport, Morphism, SchemaCategory, Violation, identity_id, load_schema
from .errors import (DanglingReference, DataParseError, MissingFile, SchemaViolation,
                     UnknownCollection, UnknownEntity, UnknownMorphism)
from .graph import GraphTerm, from_vertices_and_edges
from .values import EntityV, ListV, PrimV, Value

MODELS = ("relational", "xml", "graph", "keyvalue")


@dataclass(frozen=True)
class Collection:
    name: str
    element_object: str
    model: str
    ids: tuple[str, ...]  # deterministic element order (see collection_elements)
    graph: GraphTerm | None = None  # model == "graph" only


@dataclass(frozen=True)
class MorphismEvaluator:
    morphism: str
    table: dict[str, Value]  # entity id -> value; ListV when cardinality is many


@dataclass(frozen=True)
class InstanceStore:
    schema: SchemaCategory
    collections: dict[str, Collection]  # keyed by object id (entity objects only)
    evaluators: dict[str, MorphismEvaluator]
    name: str = ""
    collection_names: dict[str, str] = field(default_factory=dict)  # name -> object id
    models: tuple[str, ...] = ()
    package_dir: Path | None = None

    def collection_by_name(self, name: str) -> Collection:
        obj = self.collection_names.get(name)
        if obj is None:
            raise UnknownCollection(name)
        return self.collections[obj]


def collection_elements(store: InstanceStore, name: str) -> list[str]:
    """Entity ids of a collection in its deterministic order.

    Relational collections keep file order, XML document order, graph
    collections ascend by vertex id, key-value tables by key.
    """
    return list(store.collection_by_name(name).ids)


def apply_morphism(store: InstanceStore, morphism_id: str, entity_id: str) -> Value:
    """Evaluate one morphism on one entity by table lookup.

    Registered composites without a materialized table fall back to
    chained lookups through any defining pair.
    """
    morphism = store.schema.morphisms.get(morphism_id)
    if morphism is None:
        raise UnknownMorphism(morphism_id)
    ev = store.evaluators.get(morphism_id)
    if ev is not None:
        if entity_id not in ev.table:
            raise UnknownEntity(f"{entity_id!r} is not in the domain of {morphism_id}")
        return ev.table[entity_id]
    for (g_id, f_id), r_id in store.schema.composites.items():
        if r_id != morphism_id or store.schema.is_identity(g_id) or store.schema.is_identity(f_id):
            continue
        inner = apply_morphism(store, f_id, entity_id)
        return _chain(store, g_id, inner)
    raise SchemaViolation(f"morphism {morphism_id!r} has no evaluator and no defining composite")


def _chain(store: InstanceStore, outer_id: str, inner_value: Value) -> Value:
    if isinstance(inner_value, EntityV):
        return apply_morphism(store, outer_id, inner_value.id)
    if isinstance(inner_value, ListV):
        return ListV(tuple(apply_morphism(store, outer_id, v.id) for v in inner_value))
    raise SchemaViolation(f"cannot chain {outer_id} after a non-entity value")


def check_functor_laws(store: InstanceStore) -> LawReport:
    """Extensional identity and composition checks over every entity.

    The identity evaluator of each collection must be the identity table;
    every registered composite's table must agree with chaining its parts.
    Missing entries count as totality violations.
    """
    out: list[Violation] = []
    schema = store.schema

    for obj_id, coll in store.collections.items():
        ident = identity_id(obj_id)
        ev = store.evaluators.get(ident)
        if ev is None:
            out.append(Violation("functor-identity", (ident,),
                                 f"no identity evaluator for collection {coll.name}"))
            continue
        for e in coll.ids:
            got = ev.table.get(e)
            if got != EntityV(e):
                out.append(Violation("functor-identity", (ident, e),
                                     f"identity evaluator of {obj_id} maps {e} to {got!r}"))

    for mid, ev in store.evaluators.items():
        morphism = schema.morphisms.get(mid)
        if morphism is None:
            continue
        coll = store.collections.get(morphism.domain)
        if coll is None:
            continue
        for e in coll.ids:
            if e not in ev.table:
                out.append(Violation("functor-totality", (mid, e),
                                     f"evaluator {mid} has no value for {e}"))

    for (g_id, f_id), r_id in schema.composites.items():
        if schema.is_identity(g_id) or schema.is_identity(f_id):
            continue
        f = schema.morphisms.get(f_id)
        if f is None or f.domain not in store.collections:
            continue
        evals = store.evaluators
        if not all(m in evals for m in (g_id, f_id, r_id)):
            continue  # unmaterialized composites are chained, trivially consistent
        for e in store.collections[f.domain].ids:
            inner = evals[f_id].table.get(e)
            registered = evals[r_id].table.get(e)
            if inner is None or registered is None:
                continue  # totality violation already recorded
            try:
                chained = _chain_tables(evals[g_id].table, inner)
            except KeyError as missing:
                out.append(Violation("functor-composition", (r_id, e),
                                     f"{g_id} after {f_id} undefined at {e}: no entry for "
                                     f"{missing.args[0]!r}"))
                continue
            if chained != registered:
                out.append(Violation(
                    "functor-composition", (r_id, e),
                    f"evaluator {r_id} maps {e} to {registered!r} but "
                    f"{g_id} after {f_id} gives {chained!r}"))

    return LawReport(tuple(out))


def _chain_tables(outer: dict[str, Value], inner_value: Value) -> Value:
    if isinstance(inner_value, EntityV):
        return outer[inner_value.id]
    if isinstance(inner_value, ListV):
        return ListV(tuple(outer[v.id] for v in inner_value))
    raise SchemaViolation("cannot chain after a non-entity value")


# ---------------------------------------------------------------------------
# Loading


def load_dataset(package_dir: str | Path) -> InstanceStore:
    """Load a dataset package directory into an InstanceStore."""
    package_dir = Path(package_dir)
    manifest = _read_json(package_dir, "manifest.json")
    schema = load_schema(_existing(package_dir, "schema.json"))
    loader = _Loader(package_dir, schema, manifest)
    return loader.load()


def load_registry(root: str | Path) -> dict[str, InstanceStore]:
    """Load every dataset package under root, keyed by directory name."""
    root = Path(root)
    out: dict[str, InstanceStore] = {}
    if not root.is_dir():
        raise MissingFile(f"dataset root {root} is not a directory")
    for entry in sorted(root.iterdir()):
        if entry.is_dir() and (entry / "manifest.json").exists():
            out[entry.name] = load_dataset(entry)
    return out


def load_examples(package_dir: Path) -> list[dict[str, str]]:
    """Example queries shipped with a dataset package (examples.json), if any."""
    path = package_dir / "examples.json"
    if not path.exists():
        return []
    doc = json.loads(path.read_text(encoding="utf-8"))
    return [{"title": e["title"], "query": e["query"]} for e in doc]


def _existing(package_dir: Path, name: str) -> Path:
    path = package_dir / name
    if not path.exists():
        raise MissingFile(name)
    return path


def _read_json(package_dir: Path, name: str) -> dict:
    path = _existing(package_dir, name)
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise DataParseError(str(exc.msg), file=name, line=exc.lineno) from exc


def _xml_tag(object_id: str) -> str:
    return object_id[0].lower() + object_id[1:]


class _Loader:
    """Single-use loader turning one package directory into a store."""

    def __init__(self, package_dir: Path, schema: SchemaCategory, manifest: dict):
        self.dir = package_dir
        self.schema = schema
        self.manifest = manifest
        self.collections: dict[str, Collection] = {}
        self.names: dict[str, str] = {}
        self.csv_rows: dict[str, list[dict[str, str]]] = {}  # object id -> rows
        self.vertex_props: dict[str, dict[str, dict]] = {}  # object id -> id -> props
        self.xml_elems: dict[str, list[ET.Element]] = {}  # object id -> elements
        self.evaluators: dict[str, dict[str, Value]] = {}
        self.kv_backed = False
        self._xml_cache: dict[str, ET.Element] = {}

    def load(self) -> InstanceStore:
        for entry in self.manifest.get("collections", []):
            self._load_collection(entry)
        for entry in self.manifest.get("evaluators", []):
            self._build_evaluator(entry)
        self._check_declared_morphisms()
        self._add_identities()
        self._check_totality()  # before deriving: composites chain through total tables
        self._derive_composites()
        models = tuple(m for m in MODELS
                       if any(c.model == m for c in self.collections.values())
                       or (m == "keyvalue" and self.kv_backed))
        return InstanceStore(
            schema=self.schema,
            collections=self.collections,
            evaluators={m: MorphismEvaluator(m, t) for m, t in self.evaluators.items()},
            name=self.manifest.get("name", self.dir.name),
            collection_names=self.names,
            models=models,
            package_dir=self.dir,
        )

    # -- collections

    def _load_collection(self, entry: dict):
        name, obj_id, model = entry["name"], entry["object"], entry["model"]
        obj = self.schema.objects.get(obj_id)
        if obj is None or obj.kind != "entity":
            raise SchemaViolation(f"collection {name!r}: {obj_id!r} is not an entity object")
        if obj_id in self.collections:
            raise SchemaViolation(f"object {obj_id!r} has more than one collection")
        if model == "relational":
            coll = self._load_relational(name, obj_id, entry["file"])
        elif model == "xml":
            coll = self._load_xml(name, obj_id, entry["file"])
        elif model == "graph":
            coll = self._load_graph(name, obj_id, entry["file"])
        else:
            raise SchemaViolation(f"collection {name!r}: model {model!r} is not loadable "
                                  "(key-value data only backs morphisms)")
        self.collections[obj_id] = coll
        self.names[name] = obj_id

    def _load_relational(self, name: str, obj_id: str, filename: str) -> Collection:
        rows = _read_csv(self.dir, filename)
        if not rows:
            raise DataParseError("missing header row", file=filename, line=1)
        header, data = rows[0], rows[1:]
        ids, dicts, seen = [], [], set()
        for lineno, row in enumerate(data, start=2):
            if len(row) != len(header):
                raise DataParseError(f"expected {len(header)} fields, got {len(row)}",
                                     file=filename, line=lineno)
            record = dict(zip(header, row))
            eid = row[0]
            if eid in seen:
                raise SchemaViolation(f"{filename}: duplicate entity id {eid!r}")
            seen.add(eid)
            ids.append(eid)
            dicts.append(record)
        self.csv_rows[obj_id] = dicts
        return Collection(name, obj_id, "relational", tuple(ids))

    def _load_xml(self, name: str, obj_id: str, filename: str) -> Collection:
        root = self._parse_xml(filename)
        tag = _xml_tag(obj_id)
        elems = [e for e in root.iter(tag)]
        ids, seen = [], set()
        for e in elems:
            eid = e.get("id")
            if eid is None:
                raise SchemaViolation(f"{filename}: <{tag}> element without an id attribute")
            if eid in seen:
                raise SchemaViolation(f"{filename}: duplicate entity id {eid!r}")
            seen.add(eid)
            ids.append(eid)
        self.xml_elems[obj_id] = elems
        return Collection(name, obj_id, "xml", tuple(ids))

    def _parse_xml(self, filename: str) -> ET.Element:
        path = _existing(self.dir, filename)
        if filename not in self._xml_cache:
            try:
                self._xml_cache[filename] = ET.parse(path).getroot()
            except ET.ParseError as exc:
                raise DataParseError(exc.msg.split(":")[0], file=filename,
                                     line=exc.position[0]) from exc
        return self._xml_cache[filename]

    def _load_graph(self, name: str, obj_id: str, filename: str) -> Collection:
        doc = _read_json(self.dir, filename)
        verts = doc.get("vertices", [])
        ids, props, seen = [], {}, set()
        for v in verts:
            vid = v.get("id")
            if vid is None:
                raise SchemaViolation(f"{filename}: vertex without an id")
            if vid in seen:
                raise SchemaViolation(f"{filename}: duplicate vertex id {vid!r}")
            seen.add(vid)
            ids.append(vid)
            props[vid] = {k: val for k, val in v.items() if k != "id"}
        edges = []
        for e in doc.get("edges", []):
            src, dst = e
            for v in (src, dst):
                if v not in seen:
                    raise DanglingReference(f"{filename}: edge endpoint {v!r} is not a vertex")
            edges.append((src, dst))
        self.vertex_props[obj_id] = props
        term = from_vertices_and_edges(ids, edges)
        return Collection(name, obj_id, "graph", tuple(sorted(ids)), graph=term)

    # -- evaluators

    def _build_evaluator(self, entry: dict):
        mid, source = entry["morphism"], entry["source"]
        morphism = self.schema.morphisms.get(mid)
        if morphism is None:
            raise SchemaViolation(f"evaluator for unknown morphism {mid!r}")
        if source == "column":
            table = self._from_column(morphism, entry)
        elif source == "vertexprop":
            table = self._from_vertexprop(morphism, entry)
        elif source == "xmlpath":
            table = self._from_xml(morphism, entry)
        elif source == "kvfile":
            table = self._from_kvfile(morphism, entry)
            self.kv_backed = True
        else:
            raise SchemaViolation(f"evaluator {mid!r}: unknown source {source!r}")
        self.evaluators[mid] = table

    def _domain_collection(self, morphism: Morphism) -> Collection:
        coll = self.collections.get(morphism.domain)
        if coll is None:
            raise SchemaViolation(
                f"evaluator {morphism.id!r}: domain {morphism.domain!r} has no collection")
        return coll

    def _from_column(self, morphism: Morphism, entry: dict) -> dict[str, Value]:
        coll = self._domain_collection(morphism)
        rows = self.csv_rows.get(morphism.domain)
        if rows is None:
            raise SchemaViolation(f"evaluator {morphism.id!r}: column source needs a "
                                  f"relational collection for {morphism.domain}")
        table = {}
        for eid, record in zip(coll.ids, rows):
            if morphism.id not in record:
                raise SchemaViolation(
                    f"collection {coll.name}: no column named {morphism.id!r}")
            table[eid] = self._to_value(morphism, record[morphism.id],
                                        where=f"{coll.name}:{eid}")
        return table

    def _from_vertexprop(self, morphism: Morphism, entry: dict) -> dict[str, Value]:
        coll = self._domain_collection(morphism)
        props = self.vertex_props.get(morphism.domain)
        if props is None:
            raise SchemaViolation(f"evaluator {morphism.id!r}: vertexprop source needs a "
                                  f"graph collection for {morphism.domain}")
        table = {}
        for eid in coll.ids:
            if morphism.id not in props[eid]:
                raise SchemaViolation(
                    f"vertex {eid}: missing property {morphism.id!r}")
            table[eid] = self._to_value(morphism, props[eid][morphism.id],
                                        where=f"{coll.name}:{eid}")
        return table

    def _from_xml(self, morphism: Morphism, entry: dict) -> dict[str, Value]:
        self._domain_collection(morphism)
        elems = self.xml_elems.get(morphism.domain)
        if elems is None:
            raise SchemaViolation(f"evaluator {morphism.id!r}: xmlpath source needs an "
                                  f"xml collection for {morphism.domain}")
        codomain = self.schema.objects[morphism.codomain]
        table: dict[str, Value] = {}
        for elem in elems:
            eid = elem.get("id")
            if codomain.kind == "entity":
                child_tag = _xml_tag(morphism.codomain)
                kids = [c.get("id") for c in elem if c.tag == child_tag]
                if morphism.cardinality == "many":
                    table[eid] = ListV(tuple(EntityV(k) for k in kids))
                elif len(kids) == 1:
                    table[eid] = EntityV(kids[0])
                else:
                    raise SchemaViolation(
                        f"element {eid}: expected exactly one <{child_tag}>, got {len(kids)}")
            else:
                attr = elem.get(morphism.id)
                if attr is None:
                    children = [c for c in elem if c.tag == morphism.id]
                    if not children:
                        raise SchemaViolation(
                            f"element {eid}: missing {morphism.id!r}")
                    attr = (children[0].text or "").strip()
                table[eid] = self._to_value(morphism, attr, where=eid)
        return table

    def _from_kvfile(self, morphism: Morphism, entry: dict) -> dict[str, Value]:
        filename = entry.get("file")
        if filename is None:
            raise SchemaViolation(f"evaluator {morphism.id!r}: kvfile source needs a file")
        rows = _read_csv(self.dir, filename)
        if not rows or rows[0] != ["key", "value"]:
            raise DataParseError("expected a key,value header row", file=filename, line=1)
        coll = self._domain_collection(morphism)
        known = set(coll.ids)
        table = {}
        for lineno, row in enumerate(rows[1:], start=2):
            if len(row) != 2:
                raise DataParseError(f"expected 2 fields, got {len(row)}",
                                     file=filename, line=lineno)
            key, value = row
            if key not in known:
                raise DanglingReference(
                    f"{filename}: key {key!r} is not an entity of {coll.name}")
            table[key] = self._to_value(morphism, value, where=f"{filename}:{lineno}")
        return table

    def _to_value(self, morphism: Morphism, raw, where: str) -> Value:
        codomain = self.schema.objects[morphism.codomain]
        if codomain.kind == "entity":
            target = self.collections.get(morphism.codomain)
            if target is None or raw not in target.ids:
                raise DanglingReference(
                    f"{where}: {morphism.id} points at unknown {morphism.codomain} {raw!r}")
            return EntityV(raw)
        return PrimV(_parse_primitive(codomain.primitive_type, raw, where, morphism.id))

    # -- derived evaluators and validation

    def _check_declared_morphisms(self):
        composite_results = {r for (g, f), r in self.schema.composites.items()
                             if not self.schema.is_identity(g) and not self.schema.is_identity(f)}
        for m in self.schema.non_identity_morphisms():
            if m.domain in self.collections and m.id not in self.evaluators \
                    and m.id not in composite_results:
                raise SchemaViolation(f"morphism {m.id!r} has no evaluator in the manifest")

    def _add_identities(self):
        for obj_id, coll in self.collections.items():
            self.evaluators[identity_id(obj_id)] = {e: EntityV(e) for e in coll.ids}

    def _derive_composites(self):
        pending = [((g, f), r) for (g, f), r in self.schema.composites.items()
                   if r not in self.evaluators
                   and not self.schema.is_identity(g) and not self.schema.is_identity(f)]
        progress = True
        while pending and progress:
            progress = False
            remaining = []
            for (g, f), r in pending:
                if r in self.evaluators:
                    continue
                if g in self.evaluators and f in self.evaluators:
                    outer, inner = self.evaluators[g], self.evaluators[f]
                    self.evaluators[r] = {
                        e: _chain_tables(outer, v) for e, v in inner.items()}
                    progress = True
                else:
                    remaining.append(((g, f), r))
            pending = remaining
        for (g, f), r in pending:
            if r not in self.evaluators:
                raise SchemaViolation(
                    f"composite {r!r} cannot be derived: missing {g!r} or {f!r}")

    def _check_totality(self):
        for mid, table in self.evaluators.items():
            morphism = self.schema.morphisms[mid]
            coll = self.collections.get(morphism.domain)
            if coll is None:
                continue
            for e in coll.ids:
                if e not in table:
                    raise SchemaViolation(
                        f"evaluator {mid!r} is not total: no value for {e!r}")


def _read_csv(package_dir: Path, filename: str) -> list[list[str]]:
    path = _existing(package_dir, filename)
    try:
        with path.open(newline="", encoding="utf-8") as fh:
            return [row for row in csv.reader(fh)]
    except csv.Error as exc:
        raise DataParseError(str(exc), file=filename) from exc


def _parse_primitive(prim_type: str, raw, where: str, morphism_id: str):
    try:
        if prim_type == "string":
            return str(raw)
        if prim_type == "int":
            if isinstance(raw, bool):
                raise ValueError
            if isinstance(raw, int):
                return raw
            return int(str(raw).strip())
        if prim_type == "double":
            if isinstance(raw, bool):
                raise ValueError
            if isinstance(raw, (int, float)):
                return float(raw)
            return float(str(raw).strip())
        if prim_type == "bool":
            if isinstance(raw, bool):
                return raw
            text = str(raw).strip()
            if text in ("true", "false"):
                return text == "true"
            raise ValueError
    except ValueError:
        raise SchemaViolation(
            f"{where}: {morphism_id} expects {prim_type}, got {raw!r}") from None
    raise SchemaViolation(f"unknown primitive type {prim_type!r}")
