import random
import shutil

import pytest

from multicat.errors import (DanglingReference, DataParseError, MissingFile,
                             SchemaViolation, UnknownCollection, UnknownEntity,
                             UnknownMorphism)
from multicat.store import (apply_morphism, check_functor_laws, collection_elements,
                            load_dataset, load_registry)
from multicat.values import EntityV, ListV, PrimV

from .conftest import DATASETS
from .generators import corrupt_store


def test_fixture_store_shape(ecommerce):
    assert sorted(ecommerce.collection_names) == \
        ["customers", "locations", "orders", "products"]
    assert ecommerce.models == ("relational", "xml", "graph", "keyvalue")
    assert ecommerce.collections["Customer"].model == "graph"
    assert ecommerce.collections["Order"].model == "xml"


def test_collection_elements_orders(ecommerce):
    assert collection_elements(ecommerce, "customers") == ["c1", "c2", "c3", "c4"]
    assert collection_elements(ecommerce, "orders") == ["o1", "o2", "o3"]
    assert collection_elements(ecommerce, "products") == ["p1", "p2", "p3", "p4"]
    assert collection_elements(ecommerce, "locations") == ["l1", "l2"]
    with pytest.raises(UnknownCollection):
        collection_elements(ecommerce, "nope")


def test_apply_morphism(ecommerce):
    assert apply_morphism(ecommerce, "id_Customer", "c1") == EntityV("c1")
    assert apply_morphism(ecommerce, "located", "c1") == EntityV("l1")
    assert apply_morphism(ecommerce, "orderProducts", "o1") == \
        ListV((EntityV("p1"), EntityV("p2")))
    assert apply_morphism(ecommerce, "creditLimit", "c2") == PrimV(3000)
    assert apply_morphism(ecommerce, "countryName", "l1") == PrimV("Finland")
    with pytest.raises(UnknownMorphism):
        apply_morphism(ecommerce, "bogus", "c1")
    with pytest.raises(UnknownEntity):
        apply_morphism(ecommerce, "located", "o1")


def test_composite_equals_chain(ecommerce, company):
    for o in collection_elements(ecommerce, "orders"):
        customer = apply_morphism(ecommerce, "orderedBy", o)
        via_chain = apply_morphism(ecommerce, "located", customer.id)
        assert apply_morphism(ecommerce, "orderLocation", o) == via_chain
    for pr in collection_elements(company, "projects"):
        dept = apply_morphism(company, "projectDept", pr)
        via_chain = apply_morphism(company, "locatedIn", dept.id)
        assert apply_morphism(company, "projectCity", pr) == via_chain


def test_functor_laws_hold(ecommerce, company):
    assert check_functor_laws(ecommerce).ok
    assert check_functor_laws(company).ok


def test_totality(ecommerce):
    for name in ecommerce.collection_names:
        obj = ecommerce.collection_names[name]
        morphisms = [m for m in ecommerce.schema.non_identity_morphisms()
                     if m.domain == obj]
        for e in collection_elements(ecommerce, name):
            for m in morphisms:
                apply_morphism(ecommerce, m.id, e)  # must not raise


def test_load_is_deterministic(ecommerce):
    again = load_dataset(DATASETS / "ecommerce")
    for name in ecommerce.collection_names:
        assert collection_elements(ecommerce, name) == \
            collection_elements(again, name)
        obj = ecommerce.collection_names[name]
        for m in ecommerce.schema.non_identity_morphisms():
            if m.domain != obj:
                continue
            for e in collection_elements(ecommerce, name):
                assert apply_morphism(ecommerce, m.id, e) == \
                    apply_morphism(again, m.id, e)


def test_corruptions_are_flagged(ecommerce, company):
    rng = random.Random(11)
    for store in (ecommerce, company):
        for _ in range(10):
            broken, label = corrupt_store(rng, store)
            report = check_functor_laws(broken)
            assert not report.ok, f"undetected corruption {label}"


def test_identity_corruption_names_the_law(ecommerce):
    rng = random.Random(3)
    while True:
        broken, label = corrupt_store(rng, ecommerce)
        if label.startswith("identity"):
            break
    report = check_functor_laws(broken)
    assert any(v.law == "functor-identity" for v in report.violations)


def test_composite_corruption_names_morphism_and_entity(ecommerce):
    rng = random.Random(5)
    while True:
        broken, label = corrupt_store(rng, ecommerce)
        if label.startswith("composite"):
            break
    report = check_functor_laws(broken)
    bad = [v for v in report.violations if v.law == "functor-composition"]
    assert bad and bad[0].subject[0] == "orderLocation"
    assert bad[0].subject[1] in ("o1", "o2", "o3")


def test_load_registry():
    registry = load_registry(DATASETS)
    assert sorted(registry) == ["company", "ecommerce"]


# -- broken packages


@pytest.fixture()
def broken_pkg(tmp_path):
    def make(tamper):
        pkg = tmp_path / "pkg"
        if pkg.exists():
            shutil.rmtree(pkg)
        shutil.copytree(DATASETS / "ecommerce", pkg)
        tamper(pkg)
        return pkg
    return make


def test_missing_file(broken_pkg):
    pkg = broken_pkg(lambda p: (p / "locations.csv").unlink())
    with pytest.raises(MissingFile) as exc:
        load_dataset(pkg)
    assert "locations.csv" in str(exc.value)


def test_dangling_kv_key(broken_pkg):
    def tamper(p):
        path = p / "orderedby.csv"
        path.write_text(path.read_text() + "o9,c1\r\n")
    with pytest.raises(DanglingReference) as exc:
        load_dataset(broken_pkg(tamper))
    assert "o9" in str(exc.value)


def test_dangling_kv_value(broken_pkg):
    def tamper(p):
        path = p / "located.csv"
        path.write_text("key,value\r\nc1,l9\r\nc2,l1\r\nc3,l2\r\nc4,l2\r\n")
    with pytest.raises(DanglingReference) as exc:
        load_dataset(broken_pkg(tamper))
    assert "l9" in str(exc.value)


def test_csv_parse_error_carries_file_and_line(broken_pkg):
    def tamper(p):
        (p / "locations.csv").write_text(
            "locationId,countryName\r\nl1,Finland\r\nl2\r\n")
    with pytest.raises(DataParseError) as exc:
        load_dataset(broken_pkg(tamper))
    assert exc.value.file == "locations.csv"
    assert exc.value.line == 3


def test_xml_parse_error(broken_pkg):
    def tamper(p):
        (p / "orders.xml").write_text("<orders><order id='o1'>")
    with pytest.raises(DataParseError) as exc:
        load_dataset(broken_pkg(tamper))
    assert exc.value.file == "orders.xml"


def test_schema_violation_on_bad_primitive(broken_pkg):
    def tamper(p):
        text = (p / "customers.json").read_text().replace("5000", '"lots"')
        (p / "customers.json").write_text(text)
    with pytest.raises(SchemaViolation) as exc:
        load_dataset(broken_pkg(tamper))
    assert "creditLimit" in str(exc.value)


def test_kv_needs_header(broken_pkg):
    def tamper(p):
        (p / "located.csv").write_text("c1,l1\r\nc2,l1\r\nc3,l2\r\nc4,l2\r\n")
    with pytest.raises(DataParseError):
        load_dataset(broken_pkg(tamper))


def test_evaluator_not_total(broken_pkg):
    def tamper(p):
        (p / "located.csv").write_text("key,value\r\nc1,l1\r\nc2,l1\r\nc3,l2\r\n")
    with pytest.raises(SchemaViolation) as exc:
        load_dataset(broken_pkg(tamper))
    assert "c4" in str(exc.value)


def test_graph_edge_to_unknown_vertex(broken_pkg):
    def tamper(p):
        text = (p / "customers.json").read_text().replace('["c4", "c1"]',
                                                          '["c9", "c1"]')
        (p / "customers.json").write_text(text)
    with pytest.raises(DanglingReference):
        load_dataset(broken_pkg(tamper))
