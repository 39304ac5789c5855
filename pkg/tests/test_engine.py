import random

import pytest

from multicat.engine import (compile_query, eval_expr, execute, plan_to_json,
                             reference_interpret)
from multicat.errors import EvalRuntimeError
from multicat.lang import parse, source_types, typecheck
from multicat.lang.lexer import tokenize
from multicat.lang.parser import _Parser
from multicat.values import EntityV, ListV, PrimV, TupleV, values_equal

from .conftest import EXAMPLE_1, EXAMPLE_2
from .generators import QueryGen


def run(store, text):
    typed = typecheck(parse(text), store.schema, source_types(store))
    return execute(compile_query(typed), store), typed


def parse_expr(text):
    return _Parser(tokenize(text)).expr()


def test_compile_example_1(ecommerce):
    _, typed = run(ecommerce, EXAMPLE_1)
    plan = compile_query(typed)
    assert len(plan.stages) == 1
    assert plan.stages[0].source == "customers"
    assert plan.stages[0].binds is None


def test_compile_example_2(ecommerce):
    _, typed = run(ecommerce, EXAMPLE_2)
    plan = compile_query(typed)
    assert [s.source for s in plan.stages] == ["orders", "customers"]
    assert [s.binds for s in plan.stages] == ["t", None]


def test_compile_let_chain_order(ecommerce):
    text = ("LET a BE\nQUERY (\\x -> cons x) FROM orders TO xml\nIN\n"
            "LET b BE\nQUERY (\\x -> cons x) FROM locations TO xml\nIN\n"
            "QUERY (\\x -> if elem x a then cons x else nil) FROM orders TO xml")
    _, typed = run(ecommerce, text)
    plan = compile_query(typed)
    assert [(s.source, s.binds) for s in plan.stages] == \
        [("orders", "a"), ("locations", "b"), ("orders", None)]


def test_execute_example_1(ecommerce):
    value, _ = run(ecommerce, EXAMPLE_1)
    assert value == ListV((EntityV("c1"), EntityV("c4")))


def test_execute_example_2(ecommerce):
    value, _ = run(ecommerce, EXAMPLE_2)
    assert value == ListV((
        TupleV((PrimV("Mary"), PrimV("Finland"))),
        TupleV((PrimV("Alice"), PrimV("USA")))))


def test_false_filter_yields_empty(ecommerce):
    value, _ = run(ecommerce, "QUERY (\\x -> if creditLimit x < 0 then cons x "
                              "else nil)\nFROM customers TO relational")
    assert value == ListV(())


def test_eval_expr_examples(ecommerce):
    env = {"x": EntityV("o1"), "c": EntityV("c2")}
    e = parse_expr('elem "Book" (map productName (orderProducts x))')
    assert eval_expr(e, env, ecommerce) == PrimV(True)
    e = parse_expr("any (\\y -> orderedBy y == c) orders")
    assert eval_expr(e, env, ecommerce) == PrimV(False)
    e = parse_expr('fst (("a", 1))')
    assert eval_expr(e, env, ecommerce) == PrimV("a")


def test_division(ecommerce):
    env = {}
    assert eval_expr(parse_expr("7 / 2"), env, ecommerce) == PrimV(3)
    assert eval_expr(parse_expr("7.0 / 2.0"), env, ecommerce) == PrimV(3.5)
    with pytest.raises(EvalRuntimeError):
        eval_expr(parse_expr("1 / 0"), env, ecommerce)


def test_strict_boolean_operators(ecommerce):
    with pytest.raises(EvalRuntimeError):
        eval_expr(parse_expr("False && (1 / 0 == 1)"), {}, ecommerce)


def test_filter_law_matches_direct_filtering(ecommerce):
    from multicat.store import apply_morphism, collection_elements
    value, _ = run(ecommerce, "QUERY (\\x xs -> if creditLimit x > 2500 then "
                              "cons x xs else xs)\nFROM customers TO relational")
    direct = [EntityV(e) for e in collection_elements(ecommerce, "customers")
              if apply_morphism(ecommerce, "creditLimit", e).value > 2500]
    assert list(value) == direct


def test_order_preservation_subsequence(ecommerce):
    value, _ = run(ecommerce, "QUERY (\\x -> if price x > 5 then cons x else nil)"
                              "\nFROM products TO xml")
    ids = [v.id for v in value]
    source = ["p1", "p2", "p3", "p4"]
    positions = [source.index(i) for i in ids]
    assert positions == sorted(positions)


def test_let_equals_inlining(ecommerce):
    with_let = ("LET t BE\nQUERY (\\o xs -> if elem \"Book\" (map productName "
                "(orderProducts o)) then cons o xs else xs)\nFROM orders TO xml\nIN\n"
                "QUERY (\\x -> if any (\\y -> orderedBy y == x) t then cons x else nil)"
                "\nFROM customers TO graph")
    inlined_result, _ = run(
        ecommerce,
        "QUERY (\\x -> if any (\\y -> orderedBy y == x && elem \"Book\" "
        "(map productName (orderProducts y))) orders then cons x else nil)"
        "\nFROM customers TO graph")
    let_result, _ = run(ecommerce, with_let)
    assert values_equal(let_result, inlined_result)


def test_determinism(ecommerce):
    for _ in range(2):
        a, typed = run(ecommerce, EXAMPLE_2)
        b = execute(compile_query(typed), ecommerce)
        assert values_equal(a, b)


def test_reference_interpreter_agrees_on_examples(ecommerce):
    for text in (EXAMPLE_1, EXAMPLE_2):
        value, typed = run(ecommerce, text)
        assert values_equal(value, reference_interpret(typed, ecommerce))


def test_oracle_equivalence_random_queries(ecommerce, company):
    rng = random.Random(20240)
    gens = [QueryGen(rng, ecommerce), QueryGen(rng, company)]
    stores = [ecommerce, company]
    for i in range(40):
        gen, store = gens[i % 2], stores[i % 2]
        text = gen.query()
        value, typed = run(store, text)
        assert values_equal(value, reference_interpret(typed, store)), text


def test_plan_json_shape(ecommerce):
    _, typed = run(ecommerce, EXAMPLE_2)
    doc = plan_to_json(compile_query(typed))
    assert [s["binds"] for s in doc["stages"]] == ["t", None]
    assert doc["stages"][0]["source"] == "orders"
    assert doc["stages"][0]["combiner"].startswith("\\x xs ->")
    assert doc["stages"][1]["combinerAst"]["node"] == "if"
