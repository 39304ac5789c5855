"""Canonical text for query ASTs; parse(pretty(q)) == q for every valid q.

Parentheses are minimal: a subexpression is wrapped only when its
precedence is below what its position requires. Comparisons never chain,
so a comparison nested in a comparison is always wrapped.
"""

from __future__ import annotations

from .ast import (App, BinOp, Block, Cons, Expr, If, Lam, Let, LitBool, LitDouble,
                  LitInt, LitString, Nil, QueryAst, Tuple, Var)

_IF, _OR, _AND, _CMP, _ADD, _MUL, _APP, _ATOM = range(8)

_BINOP_PREC = {"||": _OR, "&&": _AND,
               ">": _CMP, "<": _CMP, ">=": _CMP, "<=": _CMP, "==": _CMP, "/=": _CMP,
               "+": _ADD, "-": _ADD, "*": _MUL, "/": _MUL}


def pretty(q: QueryAst) -> str:
    match q:
        case Let(var, bound, body):
            return f"LET {var} BE\n{pretty(bound)}\nIN\n{pretty(body)}"
        case Block(lam, source, model):
            return (f"QUERY ({pretty_lambda(lam)})\n"
                    f"FROM {source}\n"
                    f"TO {model.value}")
    raise TypeError(f"not a query: {q!r}")


def pretty_lambda(lam: Lam) -> str:
    return f"\\{' '.join(lam.params)} -> {pretty_expr(lam.body)}"


def pretty_expr(e: Expr, context: int = _IF) -> str:
    text, prec = _render(e)
    if prec < context:
        return f"({text})"
    return text


def _render(e: Expr) -> tuple[str, int]:
    match e:
        case Var(name):
            return name, _ATOM
        case LitInt(v):
            return str(v), _ATOM
        case LitDouble(v):
            return repr(v), _ATOM
        case LitBool(v):
            return ("True" if v else "False"), _ATOM
        case LitString(v):
            escaped = v.replace("\\", "\\\\").replace('"', '\\"')
            return f'"{escaped}"', _ATOM
        case Nil():
            return "nil", _ATOM
        case Tuple(items):
            inner = ", ".join(pretty_expr(i) for i in items)
            return f"({inner})", _ATOM
        case Lam() as lam:
            return f"({pretty_lambda(lam)})", _ATOM
        case If(c, t, o):
            return (f"if {pretty_expr(c)} then {pretty_expr(t)} "
                    f"else {pretty_expr(o)}"), _IF
        case App(head, args):
            parts = [head] + [pretty_expr(a, _ATOM) for a in args]
            return " ".join(parts), _APP
        case Cons(item, rest):
            parts = ["cons", pretty_expr(item, _ATOM)]
            if rest is not None:
                parts.append(pretty_expr(rest, _ATOM))
            return " ".join(parts), _APP
        case BinOp(op, left, right):
            prec = _BINOP_PREC[op]
            if prec == _CMP:
                lhs = pretty_expr(left, _CMP + 1)
                rhs = pretty_expr(right, _CMP + 1)
            else:
                lhs = pretty_expr(left, prec)
                rhs = pretty_expr(right, prec + 1)
            return f"{lhs} {op} {rhs}", prec
    raise TypeError(f"not an expression: {e!r}")
