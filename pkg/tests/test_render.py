import csv
import io
import xml.etree.ElementTree as ET
from collections import Counter

import pytest

from multicat.engine import compile_query, execute
from multicat.errors import Unrenderable
from multicat.graph import parse_term, semantics
from multicat.lang import parse, source_types, typecheck
from multicat.lang.typecheck import Entity, ListT, Prim, TupleT
from multicat.render import (id_column, render_graph, render_graph_term,
                             render_relational, render_xml, table_to_csv)
from multicat.values import EntityV, ListV, PrimV, TupleV

EX1_VALUE = ListV((EntityV("c1"), EntityV("c4")))
EX2_VALUE = ListV((TupleV((PrimV("Mary"), PrimV("Finland"))),
                   TupleV((PrimV("Alice"), PrimV("USA")))))
EX2_TYPE = TupleT((Prim("string"), Prim("string")))


def run(store, text):
    typed = typecheck(parse(text), store.schema, source_types(store))
    return execute(compile_query(typed), store), typed


def test_relational_example_1(ecommerce):
    table = render_relational(EX1_VALUE, ecommerce, Entity("Customer"))
    assert table.columns == ("customerId", "customerName", "creditLimit")
    assert table.rows == (("c1", "Mary", "5000"), ("c4", "Alice", "8000"))


def test_relational_example_2(ecommerce):
    table = render_relational(EX2_VALUE, ecommerce, EX2_TYPE)
    assert table.columns == ("col1", "col2")
    assert table.rows == (("Mary", "Finland"), ("Alice", "USA"))


def test_relational_empty_with_type(ecommerce):
    table = render_relational(ListV(()), ecommerce, Entity("Customer"))
    assert table.columns == ("customerId", "customerName", "creditLimit")
    assert table.rows == ()


def test_relational_entity_in_tuple_expands_in_place(ecommerce):
    value = ListV((TupleV((EntityV("c1"), PrimV(7))),))
    table = render_relational(value, ecommerce,
                              TupleT((Entity("Customer"), Prim("int"))))
    assert table.columns == ("customerId", "customerName", "creditLimit", "col2")
    assert table.rows == (("c1", "Mary", "5000", "7"),)


def test_relational_rejects_nested_lists(ecommerce):
    with pytest.raises(Unrenderable):
        render_relational(ListV((ListV(()),)), ecommerce, ListT(Prim("int")))


def test_csv_round_trip(ecommerce):
    table = render_relational(EX1_VALUE, ecommerce, Entity("Customer"))
    text = table_to_csv(table)
    rows = list(csv.reader(io.StringIO(text)))
    assert rows == [list(table.columns)] + [list(r) for r in table.rows]


def test_xml_example_1_golden(ecommerce):
    doc = render_xml(EX1_VALUE, ecommerce, Entity("Customer"))
    assert doc == (
        "<result>\n"
        "  <item>\n"
        "    <customerId>c1</customerId>\n"
        "    <customerName>Mary</customerName>\n"
        "    <creditLimit>5000</creditLimit>\n"
        "  </item>\n"
        "  <item>\n"
        "    <customerId>c4</customerId>\n"
        "    <customerName>Alice</customerName>\n"
        "    <creditLimit>8000</creditLimit>\n"
        "  </item>\n"
        "</result>")
    ET.fromstring(doc)  # well-formed


def test_xml_empty(ecommerce):
    assert render_xml(ListV(()), ecommerce, Entity("Customer")) == "<result/>"


def test_xml_tuple_items(ecommerce):
    doc = render_xml(EX2_VALUE, ecommerce, EX2_TYPE)
    root = ET.fromstring(doc)
    first = root.find("item")
    assert [c.tag for c in first] == ["col1", "col2"]
    assert [c.text for c in first] == ["Mary", "Finland"]


def test_xml_escaping(ecommerce):
    value = ListV((TupleV((PrimV("a<b&c"),)),))
    doc = render_xml(value, ecommerce, TupleT((Prim("string"),)))
    assert "a&lt;b&amp;c" in doc
    assert ET.fromstring(doc).find("item/col1").text == "a<b&c"


def test_graph_example_1(ecommerce):
    view = render_graph(EX1_VALUE, ecommerce, elem_type=Entity("Customer"))
    assert [v["id"] for v in view.vertices] == ["c1", "c4"]
    assert view.vertices[0]["customerName"] == "Mary"
    assert view.vertices[0]["creditLimit"] == 5000
    assert view.edges == (("c1", "c4"), ("c4", "c1"))


def test_graph_empty(ecommerce):
    view = render_graph(ListV(()), ecommerce, elem_type=Entity("Customer"))
    assert view.vertices == () and view.edges == ()


def test_graph_non_graph_entities_are_discrete(ecommerce):
    value = ListV((EntityV("l1"), EntityV("l2")))
    view = render_graph(value, ecommerce, elem_type=Entity("Location"))
    assert [v["id"] for v in view.vertices] == ["l1", "l2"]
    assert view.edges == ()


def test_graph_primitive_tuples_become_synthetic_vertices(ecommerce):
    view = render_graph(EX2_VALUE, ecommerce, elem_type=EX2_TYPE)
    assert view.vertices == (
        {"id": "n1", "col1": "Mary", "col2": "Finland"},
        {"id": "n2", "col1": "Alice", "col2": "USA"})
    assert view.edges == ()


def test_graph_entity_first_tuple_keeps_edges_and_extras(ecommerce):
    value = ListV((TupleV((EntityV("c1"), PrimV("Finland"))),
                   TupleV((EntityV("c4"), PrimV("USA")))))
    view = render_graph(value, ecommerce,
                        elem_type=TupleT((Entity("Customer"), Prim("string"))))
    assert view.vertices[0]["id"] == "c1"
    assert view.vertices[0]["col2"] == "Finland"
    assert view.edges == (("c1", "c4"), ("c4", "c1"))


def test_term_example_1(ecommerce):
    text = render_graph_term(EX1_VALUE, ecommerce, elem_type=Entity("Customer"))
    assert text == ("overlay(overlay(vertex c1, vertex c4), "
                    "overlay(connect(vertex c1, vertex c4), "
                    "connect(vertex c4, vertex c1)))")


def test_term_trivia(ecommerce):
    assert render_graph_term(ListV(()), ecommerce,
                             elem_type=Entity("Customer")) == "empty"
    assert render_graph_term(ListV((EntityV("c1"),)), ecommerce,
                             elem_type=Entity("Customer")) == "vertex c1"


def test_term_agrees_with_graph_view(ecommerce):
    view = render_graph(EX1_VALUE, ecommerce, elem_type=Entity("Customer"))
    text = render_graph_term(EX1_VALUE, ecommerce, elem_type=Entity("Customer"))
    sem = semantics(parse_term(text))
    assert sem.vertices == {v["id"] for v in view.vertices}
    assert sem.edges == set(view.edges)


def test_model_independence_over_corpus(ecommerce, company, corpus):
    stores = {"ecommerce": ecommerce, "company": company}
    checked = 0
    for name, _, text in corpus:
        store = stores[name]
        value, typed = run(store, text)
        elem = typed.result_elem_type
        if not isinstance(elem, Entity):
            continue
        table = render_relational(value, store, elem)
        xml_doc = render_xml(value, store, elem)
        view = render_graph(value, store, elem_type=elem)
        table_ids = Counter(r[0] for r in table.rows)
        id_tag = id_column(elem.object)
        root = ET.fromstring(xml_doc)
        xml_ids = Counter(item.find(id_tag).text for item in root)
        graph_ids = Counter(v["id"] for v in view.vertices)
        assert table_ids == xml_ids
        if table.rows:
            assert graph_ids == table_ids
        checked += 1
    assert checked >= 10
