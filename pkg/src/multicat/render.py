"""Result rendering into the four output models.

One query result (always a list value) can be viewed as a relational
table, an XML document, a drawn graph, or an algebraic-graph term; the
entity content is identical across all of them. Entities expand to an id
column plus their attribute morphisms in schema declaration order; tuple
components become col1..colN with entity components expanded in place.

Graph views of entities whose collection is graph-modeled keep the edges
both endpoints of which survived the filter (an induced subgraph); other
shapes, including tuples of primitives, render as discrete vertices.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from .errors import Unrenderable
from .graph import GraphSemantics, canonical_term, induced_subgraph, semantics, term_text
from .lang.typecheck import Entity, Prim, QueryType, TupleT, shallow_resolve
from .store import InstanceStore, apply_morphism
from .values import EntityV, ListV, PrimV, TupleV, Value


@dataclass(frozen=True)
class Table:
    columns: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]

    def to_json(self) -> dict:
        return {"columns": list(self.columns), "rows": [list(r) for r in self.rows]}


@dataclass(frozen=True)
class GraphView:
    vertices: tuple[dict, ...]  # {"id": ..., attr props...}
    edges: tuple[tuple[str, str], ...]

    def to_json(self) -> dict:
        return {"vertices": [dict(v) for v in self.vertices],
                "edges": [list(e) for e in self.edges]}


def id_column(object_id: str) -> str:
    return object_id[0].lower() + object_id[1:] + "Id"


def _cell(v: Value) -> str:
    match v:
        case PrimV(bool() as b):
            return "true" if b else "false"
        case PrimV(float() as f):
            return repr(f)
        case PrimV(x):
            return str(x)
        case EntityV(eid):
            return eid
    raise Unrenderable("relational", f"cannot put {type(v).__name__} in a cell")


def _infer_elem_type(v: ListV, store: InstanceStore) -> QueryType | None:
    if not len(v):
        return None
    return _value_type(v.items[0], store)


def _value_type(v: Value, store: InstanceStore) -> QueryType:
    match v:
        case PrimV(bool()):
            return Prim("bool")
        case PrimV(int()):
            return Prim("int")
        case PrimV(float()):
            return Prim("double")
        case PrimV(str()):
            return Prim("string")
        case EntityV(eid):
            for obj, coll in store.collections.items():
                if eid in coll.ids:
                    return Entity(obj)
            raise Unrenderable("relational", f"unknown entity {eid!r}")
        case TupleV(items):
            return TupleT(tuple(_value_type(i, store) for i in items))
        case ListV():
            raise Unrenderable("relational", "nested lists have no tabular form")
    raise Unrenderable("relational", f"cannot render {type(v).__name__}")


def _require_list(v: Value, model: str) -> ListV:
    if not isinstance(v, ListV):
        raise Unrenderable(model, "only list results are renderable")
    return v


def _columns_for(elem_type: QueryType, store: InstanceStore) -> list[str]:
    t = shallow_resolve(elem_type)
    if isinstance(t, Entity):
        attrs = store.schema.attribute_morphisms(t.object)
        return [id_column(t.object)] + [m.id for m in attrs]
    if isinstance(t, Prim):
        return ["col1"]
    if isinstance(t, TupleT):
        out: list[str] = []
        for i, item in enumerate(t.items, start=1):
            item = shallow_resolve(item)
            if isinstance(item, Entity):
                out.extend(_columns_for(item, store))
            elif isinstance(item, Prim):
                out.append(f"col{i}")
            else:
                raise Unrenderable("relational",
                                   f"tuple component {i} has no tabular form")
        return out
    raise Unrenderable("relational", f"{t} has no tabular form")


def _entity_cells(e: EntityV, obj: str, store: InstanceStore) -> list[str]:
    cells = [e.id]
    for m in store.schema.attribute_morphisms(obj):
        cells.append(_cell(apply_morphism(store, m.id, e.id)))
    return cells


def _row_for(v: Value, elem_type: QueryType, store: InstanceStore) -> list[str]:
    t = shallow_resolve(elem_type)
    if isinstance(t, Entity):
        if not isinstance(v, EntityV):
            raise Unrenderable("relational", "value does not match its type")
        return _entity_cells(v, t.object, store)
    if isinstance(t, Prim):
        return [_cell(v)]
    if isinstance(t, TupleT) and isinstance(v, TupleV):
        out: list[str] = []
        for item_v, item_t in zip(v.items, t.items):
            out.extend(_row_for(item_v, item_t, store))
        return out
    raise Unrenderable("relational", f"{t} has no tabular form")


def render_relational(v: Value, store: InstanceStore,
                      elem_type: QueryType | None = None) -> Table:
    """Tabular view. elem_type keys the column scheme; it is inferred from
    the first element when omitted (an untyped empty list has no columns)."""
    lst = _require_list(v, "relational")
    if elem_type is None:
        elem_type = _infer_elem_type(lst, store)
    if elem_type is None:
        return Table((), ())
    columns = tuple(_columns_for(elem_type, store))
    rows = tuple(tuple(_row_for(x, elem_type, store)) for x in lst)
    return Table(columns, rows)


def table_to_csv(table: Table) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow(row)
    return buf.getvalue()


# -- XML


def _xml_escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def render_xml(v: Value, store: InstanceStore,
               elem_type: QueryType | None = None) -> str:
    """<result> of <item> elements, children in schema declaration order,
    2-space indentation, no XML declaration."""
    lst = _require_list(v, "xml")
    if elem_type is None:
        elem_type = _infer_elem_type(lst, store)
    if not len(lst):
        return "<result/>"
    lines = ["<result>"]
    for x in lst:
        lines.append("  <item>")
        lines.extend(_xml_fields(x, elem_type, store, indent="    "))
        lines.append("  </item>")
    lines.append("</result>")
    return "\n".join(lines)


def _xml_fields(v: Value, elem_type: QueryType, store: InstanceStore,
                indent: str) -> list[str]:
    t = shallow_resolve(elem_type)
    if isinstance(t, Entity) and isinstance(v, EntityV):
        names = [id_column(t.object)] + \
            [m.id for m in store.schema.attribute_morphisms(t.object)]
        cells = _entity_cells(v, t.object, store)
        return [f"{indent}<{n}>{_xml_escape(c)}</{n}>" for n, c in zip(names, cells)]
    if isinstance(t, Prim):
        return [f"{indent}<col1>{_xml_escape(_cell(v))}</col1>"]
    if isinstance(t, TupleT) and isinstance(v, TupleV):
        out: list[str] = []
        for i, (item_v, item_t) in enumerate(zip(v.items, t.items), start=1):
            item_t = shallow_resolve(item_t)
            if isinstance(item_t, Entity):
                out.append(f"{indent}<col{i}>")
                out.extend(_xml_fields(item_v, item_t, store, indent + "  "))
                out.append(f"{indent}</col{i}>")
            else:
                out.append(f"{indent}<col{i}>{_xml_escape(_cell(item_v))}</col{i}>")
        return out
    raise Unrenderable("xml", f"{t} has no tree form")


# -- graph


def render_graph(v: Value, store: InstanceStore, source: str | None = None,
                 elem_type: QueryType | None = None) -> GraphView:
    """Graph view of a result list.

    Entity elements from a graph-model collection keep their surviving
    edges; entities from other models form a discrete graph. Tuples with
    an entity first component become that entity's vertex with col2..colN
    extra props; all-primitive rows become synthetic vertices n1, n2, ...
    """
    lst = _require_list(v, "graph")
    if elem_type is None:
        elem_type = _infer_elem_type(lst, store)
    if elem_type is None or not len(lst):
        return GraphView((), ())
    t = shallow_resolve(elem_type)

    if isinstance(t, Entity):
        return _entity_graph(list(lst), t.object, (), store)
    if isinstance(t, TupleT):
        first = shallow_resolve(t.items[0])
        if isinstance(first, Entity):
            entities, extras = [], []
            for row in lst:
                if not isinstance(row, TupleV):
                    raise Unrenderable("graph", "value does not match its type")
                entities.append(row.items[0])
                extras.append({f"col{i}": _json_value(x)
                               for i, x in enumerate(row.items[1:], start=2)})
            return _entity_graph(entities, first.object, tuple(extras), store)
        vertices = tuple(
            {"id": f"n{i}", **{f"col{j}": _json_value(x)
                               for j, x in enumerate(row.items, start=1)}}
            for i, row in enumerate(lst, start=1))
        return GraphView(vertices, ())
    if isinstance(t, Prim):
        vertices = tuple({"id": f"n{i}", "col1": _json_value(x)}
                         for i, x in enumerate(lst, start=1))
        return GraphView(vertices, ())
    raise Unrenderable("graph", f"{t} has no graph form")


def _json_value(v: Value):
    if isinstance(v, PrimV):
        return v.value
    if isinstance(v, EntityV):
        return v.id
    raise Unrenderable("graph", f"cannot attach {type(v).__name__} as a property")


def _entity_graph(entities: list[Value], obj: str, extras: tuple[dict, ...],
                  store: InstanceStore) -> GraphView:
    ids: list[str] = []
    extra_by_id: dict[str, dict] = {}
    for i, e in enumerate(entities):
        if not isinstance(e, EntityV):
            raise Unrenderable("graph", "value does not match its type")
        if e.id not in extra_by_id:
            ids.append(e.id)
        extra_by_id[e.id] = extras[i] if extras else {}
    coll = store.collections[obj]
    attrs = store.schema.attribute_morphisms(obj)
    vertices = tuple(
        {"id": eid,
         **{m.id: _json_value(apply_morphism(store, m.id, eid)) for m in attrs},
         **extra_by_id[eid]}
        for eid in ids)
    edges: tuple[tuple[str, str], ...] = ()
    if coll.model == "graph" and coll.graph is not None:
        sem = semantics(induced_subgraph(coll.graph, set(ids)))
        edges = tuple(sorted(sem.edges))
    return GraphView(vertices, edges)


def render_graph_term(v: Value, store: InstanceStore, source: str | None = None,
                      elem_type: QueryType | None = None) -> str:
    """Canonical algebraic term text of the graph view."""
    view = render_graph(v, store, source, elem_type)
    sem = GraphSemantics(frozenset(vx["id"] for vx in view.vertices),
                         frozenset(view.edges))
    return term_text(canonical_term(sem))


# -- everything at once, for the service and CLI


def render_all(v: Value, store: InstanceStore, elem_type: QueryType | None,
               model) -> dict:
    """All four renderings where renderable, plus the TO model's name."""
    out: dict = {"model": model.value, "relational": None, "xml": None,
                 "graph": None, "term": None}
    try:
        table = render_relational(v, store, elem_type)
        out["relational"] = {**table.to_json(), "csv": table_to_csv(table)}
    except Unrenderable:
        pass
    try:
        out["xml"] = render_xml(v, store, elem_type)
    except Unrenderable:
        pass
    try:
        out["graph"] = render_graph(v, store, elem_type=elem_type).to_json()
    except Unrenderable:
        pass
    try:
        out["term"] = render_graph_term(v, store, elem_type=elem_type)
    except Unrenderable:
        pass
    return out
