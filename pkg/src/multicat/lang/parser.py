"""Recursive-descent parser for QUERY/FROM/TO blocks chained with LET-BE-IN.

Grammar sketch (application binds tightest, comparisons do not chain):

    query   = "LET" ident "BE" query "IN" query | block
    block   = "QUERY" lambda "FROM" ident "TO" model { "/" model }
    model   = "graph" | "algebraic" "graph" | "relational" | "xml"
    lambda  = "(" "\\" ident [ident] "->" expr ")"
    expr    = "if" expr "then" expr "else" expr | orExpr
    orExpr  = andExpr { "||" andExpr }
    andExpr = cmpExpr { "&&" cmpExpr }
    cmpExpr = addExpr [ (">"|"<"|">="|"<="|"=="|"/=") addExpr ]
    addExpr = mulExpr { ("+"|"-") mulExpr }
    mulExpr = appExpr { ("*"|"/") appExpr }
    appExpr = atom { atom }
    atom    = ident | literal | "cons" | "nil" | lambda
            | "(" expr { "," expr } ")"

A TO clause may list several models separated by "/"; the first one is
the query's output model (the service returns every rendering anyway).
Application heads must be plain identifiers; "cons" takes one or two
atom arguments, "nil" none.
"""

from __future__ import annotations

from ..errors import QuerySyntaxError
from .ast import (App, BinOp, Block, Cons, Expr, If, Lam, Let, LitBool, LitDouble,
                  LitInt, LitString, Nil, OutputModel, QueryAst, Tuple, Var)
from .lexer import Token, tokenize

_MODEL_NAMES = {"graph": OutputModel.GRAPH, "relational": OutputModel.RELATIONAL,
                "xml": OutputModel.XML}


def parse(text: str) -> QueryAst:
    return _Parser(tokenize(text)).parse_query_eof()


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    @property
    def cur(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.cur
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def expect(self, kind: str) -> Token:
        if self.cur.kind != kind:
            self.fail(f"expected {kind!r}", {kind})
        return self.advance()

    def fail(self, msg: str, expected: set[str] = frozenset()):
        tok = self.cur
        shown = tok.text if tok.kind != "eof" else "end of input"
        raise QuerySyntaxError(f"{msg}, found {shown!r}", tok.line, tok.column,
                               frozenset(expected))

    # -- query structure

    def parse_query_eof(self) -> QueryAst:
        q = self.query()
        if self.cur.kind != "eof":
            self.fail("expected end of query", {"eof"})
        return q

    def query(self) -> QueryAst:
        if self.cur.kind == "LET":
            loc = self.advance().loc
            var = self.expect("ident").text
            self.expect("BE")
            bound = self.query()
            self.expect("IN")
            body = self.query()
            return Let(var, bound, body, loc=loc)
        return self.block()

    def block(self) -> Block:
        loc = self.expect("QUERY").loc
        lam = self.lambda_expr()
        self.expect("FROM")
        source = self.expect("ident").text
        self.expect("TO")
        model = self.model()
        while self.cur.kind == "/":
            self.advance()
            self.model()  # alternates beyond the first only pick the default view
        return Block(lam, source, model, loc=loc)

    def model(self) -> OutputModel:
        tok = self.expect("ident")
        if tok.text == "algebraic":
            nxt = self.expect("ident")
            if nxt.text != "graph":
                self.fail("expected 'graph' after 'algebraic'", {"graph"})
            return OutputModel.ALGEBRAIC_GRAPH
        if tok.text not in _MODEL_NAMES:
            raise QuerySyntaxError(
                f"unknown output model {tok.text!r}", tok.line, tok.column,
                frozenset(_MODEL_NAMES) | {"algebraic graph"})
        return _MODEL_NAMES[tok.text]

    def lambda_expr(self) -> Lam:
        self.expect("(")
        return self.lambda_tail()

    def lambda_tail(self) -> Lam:
        """Parses from the backslash on; the '(' was already consumed."""
        loc = self.expect("\\").loc
        params = [self.expect("ident").text]
        if self.cur.kind == "ident":
            params.append(self.advance().text)
        if len(set(params)) != len(params):
            raise QuerySyntaxError("lambda parameters must be distinct",
                                   loc[0], loc[1])
        self.expect("->")
        body = self.expr()
        self.expect(")")
        return Lam(tuple(params), body, loc=loc)

    # -- expressions

    def expr(self) -> Expr:
        if self.cur.kind == "if":
            loc = self.advance().loc
            cond = self.expr()
            self.expect("then")
            then = self.expr()
            self.expect("else")
            orelse = self.expr()
            return If(cond, then, orelse, loc=loc)
        return self.or_expr()

    def or_expr(self) -> Expr:
        left = self.and_expr()
        while self.cur.kind == "||":
            loc = self.advance().loc
            left = BinOp("||", left, self.and_expr(), loc=loc)
        return left

    def and_expr(self) -> Expr:
        left = self.cmp_expr()
        while self.cur.kind == "&&":
            loc = self.advance().loc
            left = BinOp("&&", left, self.cmp_expr(), loc=loc)
        return left

    def cmp_expr(self) -> Expr:
        left = self.add_expr()
        if self.cur.kind in (">", "<", ">=", "<=", "==", "/="):
            op = self.advance()
            return BinOp(op.kind, left, self.add_expr(), loc=op.loc)
        return left

    def add_expr(self) -> Expr:
        left = self.mul_expr()
        while self.cur.kind in ("+", "-"):
            op = self.advance()
            left = BinOp(op.kind, left, self.mul_expr(), loc=op.loc)
        return left

    def mul_expr(self) -> Expr:
        left = self.app_expr()
        while self.cur.kind in ("*", "/"):
            op = self.advance()
            left = BinOp(op.kind, left, self.app_expr(), loc=op.loc)
        return left

    _ATOM_STARTS = ("ident", "int", "double", "string", "True", "False",
                    "cons", "nil", "(")

    def app_expr(self) -> Expr:
        if self.cur.kind == "cons":
            return self.cons_expr()
        head = self.atom()
        args = []
        while self.cur.kind in self._ATOM_STARTS:
            if self.cur.kind == "cons":
                self.fail("'cons' cannot be an argument; parenthesize it")
            args.append(self.atom())
        if not args:
            return head
        if not isinstance(head, Var):
            self.fail("only named functions can be applied")
        return App(head.name, tuple(args), loc=head.loc)

    def cons_expr(self) -> Expr:
        loc = self.advance().loc
        item = self.atom()
        rest = None
        if self.cur.kind in self._ATOM_STARTS and self.cur.kind != "cons":
            rest = self.atom()
        return Cons(item, rest, loc=loc)

    def atom(self) -> Expr:
        tok = self.cur
        match tok.kind:
            case "ident":
                self.advance()
                return Var(tok.text, loc=tok.loc)
            case "int":
                self.advance()
                return LitInt(int(tok.text), loc=tok.loc)
            case "double":
                self.advance()
                return LitDouble(float(tok.text), loc=tok.loc)
            case "string":
                self.advance()
                return LitString(tok.text, loc=tok.loc)
            case "True" | "False":
                self.advance()
                return LitBool(tok.kind == "True", loc=tok.loc)
            case "nil":
                self.advance()
                return Nil(loc=tok.loc)
            case "(":
                self.advance()
                if self.cur.kind == "\\":
                    return self.lambda_tail()
                first = self.expr()
                if self.cur.kind == ",":
                    items = [first]
                    while self.cur.kind == ",":
                        self.advance()
                        items.append(self.expr())
                    self.expect(")")
                    return Tuple(tuple(items), loc=tok.loc)
                self.expect(")")
                return first
        self.fail("expected an expression", set(self._ATOM_STARTS))
        raise AssertionError  # unreachable
