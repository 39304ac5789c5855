"""Query language: lexer, parser, pretty-printer, typechecker."""

from .ast import (App, BinOp, Block, Cons, Expr, If, Lam, Let, LitBool, LitDouble,
                  LitInt, LitString, Nil, OutputModel, QueryAst, Tuple, Var, expr_to_json)
from .parser import parse
from .pretty import pretty, pretty_expr, pretty_lambda
from .typecheck import (BUILTINS, Entity, FunT, GraphT, ListT, Prim, QueryType, TupleT,
                        TypedBlock, TypedLet, TypedQuery, source_types, typecheck)

__all__ = [
    "App", "BinOp", "Block", "Cons", "Expr", "If", "Lam", "Let", "LitBool",
    "LitDouble", "LitInt", "LitString", "Nil", "OutputModel", "QueryAst",
    "Tuple", "Var", "expr_to_json", "parse", "pretty", "pretty_expr",
    "pretty_lambda", "BUILTINS", "Entity", "FunT", "GraphT", "ListT", "Prim",
    "QueryType", "TupleT", "TypedBlock", "TypedLet", "TypedQuery",
    "source_types", "typecheck",
]
