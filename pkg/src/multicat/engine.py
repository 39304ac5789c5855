"""Fold compilation and execution.

A typed query compiles to a FoldPlan: one stage per QUERY block, LET
chains flattened in dependency order. Each stage is a right fold over its
source's elements (the combiner sees the last element first), so a
combiner that conses preserves source order in its output. Graph-model
sources fold over vertices in ascending id order.

Evaluation is strict everywhere, including && and ||. Division is the
only runtime failure: both integer division (which floors) and double
division raise on a zero divisor.

``reference_interpret`` is a deliberately separate implementation used as
the correctness oracle: explicit list recursion instead of compiled
stages, and its own copies of the builtin operations. Keep it independent
of ``execute``; tests compare the two.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EvalRuntimeError, QueryTypeError
from .lang.ast import (App, BinOp, Cons, Expr, If, Lam, LitBool, LitDouble, LitInt,
                       LitString, Nil, Tuple, Var, expr_to_json)
from .lang.pretty import pretty_lambda
from .lang.typecheck import TypedLet, TypedNode, TypedQuery
from .store import InstanceStore, apply_morphism, collection_elements
from .values import EMPTY_LIST, EntityV, ListV, PrimV, TupleV, Value, values_equal


@dataclass(frozen=True)
class Stage:
    source: str  # collection name or an earlier stage's binding
    param: str
    acc: str
    body: Expr  # two-parameter combiner body
    binds: str | None  # LET variable this stage's result is bound to
    source_is_binding: bool


@dataclass(frozen=True)
class FoldPlan:
    stages: tuple[Stage, ...]

    @property
    def seed(self) -> Value:
        return EMPTY_LIST


def compile_query(tq: TypedQuery) -> FoldPlan:
    """Linearize the LET tree into stages; a stage only sees earlier binds."""
    stages: list[Stage] = []

    def walk(node: TypedNode, binds: str | None):
        if isinstance(node, TypedLet):
            walk(node.bound, node.var)
            walk(node.body, binds)
            return
        stages.append(Stage(
            source=node.source, param=node.param, acc=node.acc,
            body=node.body, binds=binds, source_is_binding=node.source_is_binding))

    walk(tq.root, None)
    return FoldPlan(tuple(stages))


def plan_to_json(plan: FoldPlan) -> dict:
    return {"stages": [
        {
            "source": s.source,
            "binds": s.binds,
            "combiner": pretty_lambda(Lam((s.param, s.acc), s.body)),
            "combinerAst": expr_to_json(s.body),
        }
        for s in plan.stages
    ]}


def execute(plan: FoldPlan, store: InstanceStore) -> Value:
    """Run the stages in order; the last stage's fold result is the answer."""
    env: dict[str, Value] = {}
    result: Value = EMPTY_LIST
    for stage in plan.stages:
        if stage.source in env:
            elements = list(env[stage.source])  # earlier stage's list
        else:
            elements = [EntityV(e) for e in collection_elements(store, stage.source)]
        acc: Value = EMPTY_LIST
        for item in reversed(elements):
            frame = dict(env)
            frame[stage.param] = item
            frame[stage.acc] = acc
            acc = eval_expr(stage.body, frame, store)
        if stage.binds is not None:
            env[stage.binds] = acc
        result = acc
    return result


def eval_expr(e: Expr, env: dict[str, Value], store: InstanceStore) -> Value:
    """Big-step evaluation of one expression under an environment."""
    match e:
        case Var(name):
            if name in env:
                return env[name]
            return _collection_value(store, name)
        case LitInt(v):
            return PrimV(v)
        case LitDouble(v):
            return PrimV(v)
        case LitString(v):
            return PrimV(v)
        case LitBool(v):
            return PrimV(v)
        case Nil():
            return EMPTY_LIST
        case Cons(item, rest):
            tail = eval_expr(rest, env, store)
            assert isinstance(tail, ListV)
            return ListV.cons(eval_expr(item, env, store), tail)
        case Tuple(items):
            return TupleV(tuple(eval_expr(i, env, store) for i in items))
        case If(c, t, o):
            cond = eval_expr(c, env, store)
            return eval_expr(t if _truth(cond) else o, env, store)
        case BinOp(op, l, r):
            return _binop(op, eval_expr(l, env, store), eval_expr(r, env, store))
        case App(head, args):
            return _apply(head, args, env, store)
    raise QueryTypeError(f"cannot evaluate {e!r}")


def _collection_value(store: InstanceStore, name: str) -> Value:
    return ListV(tuple(EntityV(e) for e in collection_elements(store, name)))


def _truth(v: Value) -> bool:
    assert isinstance(v, PrimV) and isinstance(v.value, bool)
    return v.value


def _binop(op: str, l: Value, r: Value) -> Value:
    if op == "==":
        return PrimV(values_equal(l, r))
    if op == "/=":
        return PrimV(not values_equal(l, r))
    if op == "&&":
        return PrimV(_truth(l) and _truth(r))
    if op == "||":
        return PrimV(_truth(l) or _truth(r))
    assert isinstance(l, PrimV) and isinstance(r, PrimV)
    a, b = l.value, r.value
    if op in (">", "<", ">=", "<="):
        match op:
            case ">": return PrimV(a > b)
            case "<": return PrimV(a < b)
            case ">=": return PrimV(a >= b)
            case "<=": return PrimV(a <= b)
    if op == "/":
        if b == 0:
            raise EvalRuntimeError("division by zero")
        return PrimV(a // b if isinstance(a, int) else a / b)
    match op:
        case "+": return PrimV(a + b)
        case "-": return PrimV(a - b)
        case "*": return PrimV(a * b)
    raise QueryTypeError(f"unknown operator {op!r}")


def _apply(head: str, args: tuple[Expr, ...], env: dict[str, Value],
           store: InstanceStore) -> Value:
    match head:
        case "not":
            return PrimV(not _truth(eval_expr(args[0], env, store)))
        case "length":
            lst = eval_expr(args[0], env, store)
            assert isinstance(lst, ListV)
            return PrimV(len(lst))
        case "fst" | "snd":
            tup = eval_expr(args[0], env, store)
            assert isinstance(tup, TupleV)
            return tup.items[0 if head == "fst" else 1]
        case "elem":
            item = eval_expr(args[0], env, store)
            lst = eval_expr(args[1], env, store)
            assert isinstance(lst, ListV)
            return PrimV(any(values_equal(item, x) for x in lst))
        case "map":
            lst = eval_expr(args[1], env, store)
            assert isinstance(lst, ListV)
            return ListV(tuple(_call(args[0], x, env, store) for x in lst))
        case "any" | "all":
            lst = eval_expr(args[1], env, store)
            assert isinstance(lst, ListV)
            results = (_truth(_call(args[0], x, env, store)) for x in lst)
            return PrimV(any(results) if head == "any" else all(results))
    # a morphism application; a second argument is a codomain annotation, not evaluated
    arg = eval_expr(args[0], env, store)
    assert isinstance(arg, EntityV)
    return apply_morphism(store, head, arg.id)


def _call(f: Expr, arg: Value, env: dict[str, Value], store: InstanceStore) -> Value:
    """Call a function-position expression: an inner lambda or a morphism name."""
    if isinstance(f, Lam):
        frame = dict(env)
        frame[f.params[0]] = arg
        return eval_expr(f.body, frame, store)
    assert isinstance(f, Var) and isinstance(arg, EntityV)
    return apply_morphism(store, f.name, arg.id)


# ---------------------------------------------------------------------------
# Independent reference interpreter (the oracle). Nothing below may call
# eval_expr, execute, or compile_query.


def reference_interpret(tq: TypedQuery, store: InstanceStore) -> Value:
    """Direct recursive evaluation of the typed query, for cross-checking."""

    def run(node: TypedNode, env: dict[str, Value]) -> Value:
        if isinstance(node, TypedLet):
            bound = run(node.bound, env)
            return run(node.body, {**env, node.var: bound})
        if node.source in env:
            items = list(env[node.source])
        else:
            items = [EntityV(e) for e in collection_elements(store, node.source)]

        def fold(rest: list[Value]) -> Value:
            if not rest:
                return ListV(())
            tail = fold(rest[1:])
            scope = {**env, node.param: rest[0], node.acc: tail}
            return _ref_eval(node.body, scope, store)

        return fold(items)

    return run(tq.root, {})


def _ref_eval(e: Expr, env: dict[str, Value], store: InstanceStore) -> Value:
    if isinstance(e, Var):
        if e.name in env:
            return env[e.name]
        ids = collection_elements(store, e.name)
        return ListV(tuple(EntityV(i) for i in ids))
    if isinstance(e, (LitInt, LitDouble, LitString, LitBool)):
        return PrimV(e.value)
    if isinstance(e, Nil):
        return ListV(())
    if isinstance(e, Cons):
        head = _ref_eval(e.item, env, store)
        tail = _ref_eval(e.rest, env, store)
        return ListV((head,) + tuple(tail.items))
    if isinstance(e, Tuple):
        out = []
        for item in e.items:
            out.append(_ref_eval(item, env, store))
        return TupleV(tuple(out))
    if isinstance(e, If):
        cond = _ref_eval(e.cond, env, store)
        if cond.value is True:
            return _ref_eval(e.then, env, store)
        return _ref_eval(e.orelse, env, store)
    if isinstance(e, BinOp):
        return _ref_binop(e.op, _ref_eval(e.left, env, store),
                          _ref_eval(e.right, env, store))
    if isinstance(e, App):
        return _ref_apply(e, env, store)
    raise QueryTypeError(f"reference interpreter cannot evaluate {e!r}")


def _ref_eq(a: Value, b: Value) -> bool:
    if isinstance(a, PrimV) and isinstance(b, PrimV):
        return type(a.value) is type(b.value) and a.value == b.value
    if isinstance(a, EntityV) and isinstance(b, EntityV):
        return a.id == b.id
    if isinstance(a, TupleV) and isinstance(b, TupleV):
        if len(a.items) != len(b.items):
            return False
        for x, y in zip(a.items, b.items):
            if not _ref_eq(x, y):
                return False
        return True
    if isinstance(a, ListV) and isinstance(b, ListV):
        xs, ys = list(a.items), list(b.items)
        if len(xs) != len(ys):
            return False
        for x, y in zip(xs, ys):
            if not _ref_eq(x, y):
                return False
        return True
    return False


def _ref_binop(op: str, l: Value, r: Value) -> Value:
    if op == "==":
        return PrimV(_ref_eq(l, r))
    if op == "/=":
        return PrimV(not _ref_eq(l, r))
    if op == "&&":
        return PrimV(l.value and r.value)
    if op == "||":
        return PrimV(l.value or r.value)
    a, b = l.value, r.value
    if op == ">":
        return PrimV(a > b)
    if op == "<":
        return PrimV(a < b)
    if op == ">=":
        return PrimV(a >= b)
    if op == "<=":
        return PrimV(a <= b)
    if op == "+":
        return PrimV(a + b)
    if op == "-":
        return PrimV(a - b)
    if op == "*":
        return PrimV(a * b)
    if op == "/":
        if b == 0:
            raise EvalRuntimeError("division by zero")
        if isinstance(a, int):
            return PrimV(a // b)
        return PrimV(a / b)
    raise QueryTypeError(f"unknown operator {op!r}")


def _ref_call(f: Expr, arg: Value, env: dict[str, Value],
              store: InstanceStore) -> Value:
    if isinstance(f, Lam):
        return _ref_eval(f.body, {**env, f.params[0]: arg}, store)
    return apply_morphism(store, f.name, arg.id)


def _ref_apply(e: App, env: dict[str, Value], store: InstanceStore) -> Value:
    head, args = e.head, e.args
    if head == "not":
        return PrimV(not _ref_eval(args[0], env, store).value)
    if head == "length":
        count = 0
        for _ in _ref_eval(args[0], env, store).items:
            count += 1
        return PrimV(count)
    if head == "fst":
        return _ref_eval(args[0], env, store).items[0]
    if head == "snd":
        return _ref_eval(args[0], env, store).items[1]
    if head == "elem":
        needle = _ref_eval(args[0], env, store)
        for x in _ref_eval(args[1], env, store).items:
            if _ref_eq(needle, x):
                return PrimV(True)
        return PrimV(False)
    if head == "map":
        out = []
        for x in _ref_eval(args[1], env, store).items:
            out.append(_ref_call(args[0], x, env, store))
        return ListV(tuple(out))
    if head == "any":
        for x in _ref_eval(args[1], env, store).items:
            if _ref_call(args[0], x, env, store).value is True:
                return PrimV(True)
        return PrimV(False)
    if head == "all":
        for x in _ref_eval(args[1], env, store).items:
            if _ref_call(args[0], x, env, store).value is not True:
                return PrimV(False)
        return PrimV(True)
    arg = _ref_eval(args[0], env, store)
    return apply_morphism(store, head, arg.id)
