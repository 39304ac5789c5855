"""Query AST.

A query is either a LET binding chaining two queries or a single QUERY
block: a lambda folded over a source collection, rendered in the output
model its TO clause picks. Expressions are a fixed, closed sum; inner
lambdas (Lam) appear only as arguments to the higher-order builtins
(map, any, all) and as the block combiner itself.

Source positions ride along on every node but never take part in
structural equality, so parse(pretty(ast)) == ast holds.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Union

Loc = Optional[tuple[int, int]]  # (line, column), 1-based


def _loc_field() -> Loc:
    return field(default=None, compare=False, repr=False)  # type: ignore[return-value]


class OutputModel(enum.Enum):
    GRAPH = "graph"
    ALGEBRAIC_GRAPH = "algebraic graph"
    RELATIONAL = "relational"
    XML = "xml"


@dataclass(frozen=True)
class Var:
    name: str
    loc: Loc = _loc_field()


@dataclass(frozen=True)
class LitInt:
    value: int
    loc: Loc = _loc_field()


@dataclass(frozen=True)
class LitDouble:
    value: float
    loc: Loc = _loc_field()


@dataclass(frozen=True)
class LitString:
    value: str
    loc: Loc = _loc_field()


@dataclass(frozen=True)
class LitBool:
    value: bool
    loc: Loc = _loc_field()


@dataclass(frozen=True)
class If:
    cond: "Expr"
    then: "Expr"
    orelse: "Expr"
    loc: Loc = _loc_field()


@dataclass(frozen=True)
class App:
    head: str
    args: tuple["Expr", ...]
    loc: Loc = _loc_field()


@dataclass(frozen=True)
class Tuple:
    items: tuple["Expr", ...]
    loc: Loc = _loc_field()


@dataclass(frozen=True)
class BinOp:
    op: str  # + - * / > < >= <= == /= && ||
    left: "Expr"
    right: "Expr"
    loc: Loc = _loc_field()


@dataclass(frozen=True)
class Cons:
    item: "Expr"
    rest: Optional["Expr"]  # None in the single-parameter surface form
    loc: Loc = _loc_field()


@dataclass(frozen=True)
class Nil:
    loc: Loc = _loc_field()


@dataclass(frozen=True)
class Lam:
    params: tuple[str, ...]  # length 1 or 2, distinct
    body: "Expr"
    loc: Loc = _loc_field()


Expr = Union[Var, LitInt, LitDouble, LitString, LitBool, If, App, Tuple,
             BinOp, Cons, Nil, Lam]


@dataclass(frozen=True)
class Block:
    lam: Lam
    source: str
    output_model: OutputModel
    loc: Loc = _loc_field()


@dataclass(frozen=True)
class Let:
    var: str
    bound: "QueryAst"
    body: "QueryAst"
    loc: Loc = _loc_field()


QueryAst = Union[Let, Block]


def expr_to_json(e: Expr) -> dict:
    """Plain-dict tree of an expression, for the plan visualizer."""
    match e:
        case Var(name):
            return {"node": "var", "name": name}
        case LitInt(v) | LitDouble(v) | LitString(v) | LitBool(v):
            return {"node": "lit", "value": v}
        case If(c, t, o):
            return {"node": "if", "cond": expr_to_json(c), "then": expr_to_json(t),
                    "else": expr_to_json(o)}
        case App(head, args):
            return {"node": "app", "head": head, "args": [expr_to_json(a) for a in args]}
        case Tuple(items):
            return {"node": "tuple", "items": [expr_to_json(i) for i in items]}
        case BinOp(op, l, r):
            return {"node": "binop", "op": op, "left": expr_to_json(l),
                    "right": expr_to_json(r)}
        case Cons(item, rest):
            out = {"node": "cons", "item": expr_to_json(item)}
            if rest is not None:
                out["rest"] = expr_to_json(rest)
            return out
        case Nil():
            return {"node": "nil"}
        case Lam(params, body):
            return {"node": "lambda", "params": list(params), "body": expr_to_json(body)}
    raise TypeError(f"not an expression: {e!r}")
