"""Typechecker: validates a parsed query against a schema and normalizes it.

Checking also normalizes: every block combiner comes out in two-parameter
form (element, accumulator). The single-parameter surface form desugars by
rewriting its cons/nil spine: ``cons e`` prepends to the accumulator and
``nil`` keeps it unchanged, so a block like Example-style
``if p then cons x else nil`` is an order-preserving filter rather than a
query that discards earlier results.

The accumulator's element type is inferred with a single mutable hole per
binding, unified as the body is checked; a combiner that never conses
defaults to the source element type. Graph-model sources are list-like
wherever a list is expected (their vertex list in ascending id order).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..category import SchemaCategory
from ..errors import QueryTypeError, UnknownCollection, UnknownMorphism
from .ast import (App, BinOp, Block, Cons, Expr, If, Lam, Let, LitBool, LitDouble,
                  LitInt, LitString, Nil, OutputModel, QueryAst, Tuple, Var)
from .pretty import pretty_expr

BUILTINS = ("elem", "map", "any", "all", "not", "fst", "snd", "length")

_NUMERIC = ("int", "double")
_ORDERED = ("int", "double", "string")


# -- type universe


@dataclass(frozen=True)
class Prim:
    name: str  # string | int | double | bool

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Entity:
    object: str

    def __str__(self):
        return self.object


@dataclass(frozen=True)
class TupleT:
    items: tuple["QueryType", ...]

    def __str__(self):
        return "(" + ", ".join(str(i) for i in self.items) + ")"


@dataclass(frozen=True)
class ListT:
    elem: "QueryType"

    def __str__(self):
        return f"[{self.elem}]"


@dataclass(frozen=True)
class GraphT:
    elem: "QueryType"

    def __str__(self):
        return f"graph[{self.elem}]"


@dataclass(frozen=True)
class FunT:
    arg: "QueryType"
    res: "QueryType"

    def __str__(self):
        return f"{self.arg} -> {self.res}"


@dataclass(eq=False)
class Hole:
    """Inference variable; identity-compared, resolved in place."""
    resolved: "QueryType | None" = None

    def __str__(self):
        return str(self.resolved) if self.resolved is not None else "?"


QueryType = Prim | Entity | TupleT | ListT | GraphT | FunT | Hole

BOOL = Prim("bool")
INT = Prim("int")


def shallow_resolve(t: QueryType) -> QueryType:
    while isinstance(t, Hole) and t.resolved is not None:
        t = t.resolved
    return t


def ground(t: QueryType, default: QueryType) -> QueryType:
    """Replace any unresolved holes with a default, recursively."""
    t = shallow_resolve(t)
    match t:
        case Hole():
            return default
        case ListT(e):
            return ListT(ground(e, default))
        case GraphT(e):
            return GraphT(ground(e, default))
        case TupleT(items):
            return TupleT(tuple(ground(i, default) for i in items))
        case FunT(a, r):
            return FunT(ground(a, default), ground(r, default))
    return t


# -- typed result


@dataclass(frozen=True)
class TypedBlock:
    source: str
    source_is_binding: bool  # True when source is a LET variable
    param: str
    acc: str
    body: Expr  # normalized two-parameter combiner body
    elem_type: QueryType
    result_type: QueryType  # always ListT(...)
    output_model: OutputModel


@dataclass(frozen=True)
class TypedLet:
    var: str
    bound: "TypedNode"
    body: "TypedNode"
    result_type: QueryType


TypedNode = TypedBlock | TypedLet


@dataclass(frozen=True)
class TypedQuery:
    root: TypedNode
    result_type: QueryType
    ast: QueryAst
    expr_types: dict[int, QueryType] = field(default_factory=dict, compare=False)

    def type_of(self, node: Expr) -> QueryType | None:
        t = self.expr_types.get(id(node))
        return shallow_resolve(t) if t is not None else None

    @property
    def output_model(self) -> OutputModel:
        node = self.root
        while isinstance(node, TypedLet):
            node = node.body
        return node.output_model

    @property
    def result_elem_type(self) -> QueryType:
        rt = shallow_resolve(self.result_type)
        assert isinstance(rt, ListT)
        return shallow_resolve(rt.elem)


def source_types(store) -> dict[str, QueryType]:
    """Query types of a store's collections: graph models get GraphT, the rest ListT."""
    out: dict[str, QueryType] = {}
    for name, obj in store.collection_names.items():
        elem = Entity(obj)
        model = store.collections[obj].model
        out[name] = GraphT(elem) if model == "graph" else ListT(elem)
    return out


def typecheck(ast: QueryAst, schema: SchemaCategory,
              sources: dict[str, QueryType]) -> TypedQuery:
    checker = _Checker(schema, sources)
    root, rtype = checker.check_query(ast, {})
    return TypedQuery(root=root, result_type=rtype, ast=ast,
                      expr_types=checker.types)


# -- internals


def _edit_distance(a: str, b: str) -> int:
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def _closest(name: str, candidates) -> str | None:
    best, best_d = None, 3
    for c in candidates:
        d = _edit_distance(name, c)
        if d < best_d:
            best, best_d = c, d
    return best


class _Checker:
    def __init__(self, schema: SchemaCategory, sources: dict[str, QueryType]):
        self.schema = schema
        self.sources = sources
        self.types: dict[int, QueryType] = {}

    # -- query level

    def check_query(self, q: QueryAst, lets: dict[str, QueryType]):
        if isinstance(q, Let):
            bound, bound_t = self.check_query(q.bound, lets)
            body, body_t = self.check_query(q.body, {**lets, q.var: bound_t})
            return TypedLet(q.var, bound, body, body_t), body_t
        return self.check_block(q, lets)

    def check_block(self, block: Block, lets: dict[str, QueryType]):
        src_t = lets.get(block.source, self.sources.get(block.source))
        if src_t is None:
            raise UnknownCollection(block.source, loc=block.loc)
        elem_t = self._element_of(src_t, block.loc)
        avoid = set(lets) | set(self.sources)
        param, acc, body = self._normalize(block.lam, avoid)
        acc_t = ListT(Hole())
        env = {**lets, param: elem_t, acc: acc_t}
        body_t = self.check_expr(body, env)
        self._unify(acc_t, body_t, body)
        result = ground(acc_t, elem_t)
        return TypedBlock(
            source=block.source,
            source_is_binding=block.source in lets,
            param=param, acc=acc, body=body,
            elem_type=elem_t,
            result_type=result,
            output_model=block.output_model,
        ), result

    def _element_of(self, t: QueryType, loc) -> QueryType:
        t = shallow_resolve(t)
        if isinstance(t, (ListT, GraphT)):
            return shallow_resolve(t.elem)
        raise QueryTypeError(f"FROM source must be a collection, got {t}",
                             expected="[_]", found=str(t), loc=loc)

    def _normalize(self, lam: Lam, avoid: set[str]) -> tuple[str, str, Expr]:
        if len(lam.params) == 2:
            return lam.params[0], lam.params[1], lam.body

        x = lam.params[0]
        acc = next(name for name in ("xs", "acc", "acc0", "acc1")
                   if name != x and name not in avoid)

        def rewrite(e: Expr) -> Expr:
            match e:
                case Cons(item, None):
                    return Cons(item, Var(acc, loc=e.loc), loc=e.loc)
                case Nil():
                    return Var(acc, loc=e.loc)
                case If(c, t, o):
                    return If(c, rewrite(t), rewrite(o), loc=e.loc)
            raise QueryTypeError(
                "a one-parameter query lambda must end in cons or nil "
                f"(got: {pretty_expr(e)})", loc=getattr(e, "loc", None))

        return x, acc, rewrite(lam.body)

    # -- expression level

    def check_expr(self, e: Expr, env: dict[str, QueryType]) -> QueryType:
        t = self._infer(e, env)
        self.types[id(e)] = t
        return t

    def _infer(self, e: Expr, env: dict[str, QueryType]) -> QueryType:
        match e:
            case LitInt():
                return INT
            case LitDouble():
                return Prim("double")
            case LitString():
                return Prim("string")
            case LitBool():
                return BOOL
            case Var(name):
                return self._var_type(name, env, e.loc)
            case Nil():
                return ListT(Hole())
            case Cons(item, rest):
                if rest is None:
                    raise QueryTypeError(
                        "cons without a tail is only allowed as a one-parameter "
                        "lambda body", loc=e.loc)
                item_t = self.check_expr(item, env)
                rest_t = self._as_list(self.check_expr(rest, env), rest)
                self._unify(rest_t.elem, item_t, item)
                return rest_t
            case Tuple(items):
                return TupleT(tuple(self.check_expr(i, env) for i in items))
            case If(c, t, o):
                self._expect(BOOL, self.check_expr(c, env), c)
                then_t = self.check_expr(t, env)
                else_t = self.check_expr(o, env)
                self._unify(then_t, else_t, o)
                return then_t
            case BinOp():
                return self._binop(e, env)
            case App():
                return self._app(e, env)
            case Lam():
                raise QueryTypeError(
                    "a lambda can only be an argument of map, any, or all", loc=e.loc)
        raise QueryTypeError(f"cannot type {e!r}")

    def _var_type(self, name: str, env: dict[str, QueryType], loc) -> QueryType:
        if name in env:
            return env[name]
        if name in self.sources:
            return self.sources[name]
        if name in self.schema.morphisms:
            raise QueryTypeError(
                f"morphism {name!r} is a function; apply it or pass it to "
                "map/any/all", loc=loc)
        hint = _closest(name, [*env, *self.sources, *self.schema.morphisms, *BUILTINS])
        raise UnknownMorphism(name, hint=hint, loc=loc)

    def _binop(self, e: BinOp, env: dict[str, QueryType]) -> QueryType:
        lt = shallow_resolve(self.check_expr(e.left, env))
        rt = shallow_resolve(self.check_expr(e.right, env))
        op = e.op
        if op in ("&&", "||"):
            self._expect(BOOL, lt, e.left)
            self._expect(BOOL, rt, e.right)
            return BOOL
        if op in ("+", "-", "*", "/"):
            if not (isinstance(lt, Prim) and lt.name in _NUMERIC):
                raise QueryTypeError(f"operator {op} needs numbers, got {lt}",
                                     expected="int|double", found=str(lt), loc=e.loc)
            self._unify(lt, rt, e.right)
            return lt
        if op in (">", "<", ">=", "<="):
            if not (isinstance(lt, Prim) and lt.name in _ORDERED):
                raise QueryTypeError(f"operator {op} needs an ordered type, got {lt}",
                                     expected="int|double|string", found=str(lt),
                                     loc=e.loc)
            self._unify(lt, rt, e.right)
            return BOOL
        # == and /=
        if not self._comparable(lt):
            raise QueryTypeError(f"equality is not defined at {lt}",
                                 expected="primitive|entity|tuple", found=str(lt),
                                 loc=e.loc)
        self._unify(lt, rt, e.right)
        return BOOL

    def _comparable(self, t: QueryType) -> bool:
        t = shallow_resolve(t)
        if isinstance(t, (Prim, Entity, Hole)):
            return True
        if isinstance(t, TupleT):
            return all(self._comparable(i) for i in t.items)
        return False

    def _app(self, e: App, env: dict[str, QueryType]) -> QueryType:
        head = e.head
        if head in env or head in self.sources:
            raise QueryTypeError(f"{head!r} is not a function", loc=e.loc)
        if head in BUILTINS:
            return self._builtin(e, env)
        morphism = self.schema.morphisms.get(head)
        if morphism is None:
            hint = _closest(head, [*self.schema.morphisms, *BUILTINS])
            raise UnknownMorphism(head, hint=hint, loc=e.loc)
        if len(e.args) not in (1, 2):
            raise QueryTypeError(f"morphism {head} takes one argument", loc=e.loc)
        arg_t = self.check_expr(e.args[0], env)
        self._unify(Entity(morphism.domain), arg_t, e.args[0])
        if len(e.args) == 2:
            self._check_annotation(e.args[1], morphism.codomain)
        return self._morphism_result(head)

    def _check_annotation(self, arg: Expr, codomain: str):
        # Trailing collection name, e.g. `located x locations`: validated, not evaluated.
        if not isinstance(arg, Var) or arg.name not in self.sources:
            raise QueryTypeError(
                "a second morphism argument must name the codomain collection",
                loc=getattr(arg, "loc", None))
        elem = self._element_of(self.sources[arg.name], arg.loc)
        if not (isinstance(elem, Entity) and elem.object == codomain):
            raise QueryTypeError(
                f"collection {arg.name!r} does not hold {codomain} entities",
                expected=codomain, found=str(elem), loc=arg.loc)

    def _morphism_result(self, morphism_id: str) -> QueryType:
        m = self.schema.morphisms[morphism_id]
        cod = self.schema.objects[m.codomain]
        res: QueryType = Prim(cod.primitive_type) if cod.kind == "primitive" \
            else Entity(cod.id)
        return ListT(res) if m.cardinality == "many" else res

    def _builtin(self, e: App, env: dict[str, QueryType]) -> QueryType:
        name, args = e.head, e.args

        def arity(n: int):
            if len(args) != n:
                raise QueryTypeError(f"{name} takes {n} argument(s), got {len(args)}",
                                     loc=e.loc)

        if name == "not":
            arity(1)
            self._expect(BOOL, self.check_expr(args[0], env), args[0])
            return BOOL
        if name == "length":
            arity(1)
            self._as_list(self.check_expr(args[0], env), args[0])
            return INT
        if name in ("fst", "snd"):
            arity(1)
            t = shallow_resolve(self.check_expr(args[0], env))
            idx = 0 if name == "fst" else 1
            if not isinstance(t, TupleT) or len(t.items) <= idx:
                raise QueryTypeError(f"{name} needs a tuple with at least {idx + 1} "
                                     f"components, got {t}",
                                     expected="tuple", found=str(t), loc=e.loc)
            return t.items[idx]
        if name == "elem":
            arity(2)
            item_t = self.check_expr(args[0], env)
            list_t = self._as_list(self.check_expr(args[1], env), args[1])
            self._unify(list_t.elem, item_t, args[0])
            return BOOL
        if name in ("map", "any", "all"):
            arity(2)
            list_t = self._as_list(self.check_expr(args[1], env), args[1])
            fun_t = self._function_arg(args[0], shallow_resolve(list_t.elem), env)
            if name == "map":
                return ListT(fun_t.res)
            self._expect(BOOL, fun_t.res, args[0])
            return BOOL
        raise QueryTypeError(f"unknown builtin {name!r}", loc=e.loc)

    def _function_arg(self, f: Expr, elem_t: QueryType,
                      env: dict[str, QueryType]) -> FunT:
        """Type a map/any/all function argument: a unary lambda or a morphism name."""
        if isinstance(f, Lam):
            if len(f.params) != 1:
                raise QueryTypeError("an inner lambda takes exactly one parameter",
                                     loc=f.loc)
            body_t = self.check_expr(f.body, {**env, f.params[0]: elem_t})
            t = FunT(elem_t, body_t)
            self.types[id(f)] = t
            return t
        if isinstance(f, Var) and f.name in self.schema.morphisms:
            m = self.schema.morphisms[f.name]
            self._unify(Entity(m.domain), elem_t, f)
            t = FunT(Entity(m.domain), self._morphism_result(f.name))
            self.types[id(f)] = t
            return t
        found = self.check_expr(f, env)
        raise QueryTypeError("expected a morphism name or a lambda",
                             expected="function", found=str(found),
                             loc=getattr(f, "loc", None))

    # -- unification

    def _as_list(self, t: QueryType, at: Expr) -> ListT:
        t = shallow_resolve(t)
        if isinstance(t, ListT):
            return t
        if isinstance(t, GraphT):
            return ListT(t.elem)  # a graph collection is its vertex list here
        if isinstance(t, Hole):
            out = ListT(Hole())
            t.resolved = out
            return out
        raise QueryTypeError(f"expected a list, got {t}", expected="[_]",
                             found=str(t), loc=getattr(at, "loc", None))

    def _expect(self, expected: QueryType, found: QueryType, at: Expr):
        self._unify(expected, found, at)

    def _unify(self, a: QueryType, b: QueryType, at: Expr):
        a, b = shallow_resolve(a), shallow_resolve(b)
        if a is b:
            return
        if isinstance(a, Hole):
            a.resolved = b
            return
        if isinstance(b, Hole):
            b.resolved = a
            return
        if isinstance(a, GraphT) and isinstance(b, ListT):
            a = ListT(a.elem)
        elif isinstance(a, ListT) and isinstance(b, GraphT):
            b = ListT(b.elem)
        if type(a) is not type(b):
            self._mismatch(a, b, at)
        match a, b:
            case (Prim(x), Prim(y)) | (Entity(x), Entity(y)):
                if x != y:
                    self._mismatch(a, b, at)
            case (ListT(x), ListT(y)) | (GraphT(x), GraphT(y)):
                self._unify(x, y, at)
            case (TupleT(xs), TupleT(ys)):
                if len(xs) != len(ys):
                    self._mismatch(a, b, at)
                for x, y in zip(xs, ys):
                    self._unify(x, y, at)
            case (FunT(a1, r1), FunT(a2, r2)):
                self._unify(a1, a2, at)
                self._unify(r1, r2, at)

    def _mismatch(self, expected: QueryType, found: QueryType, at: Expr):
        raise QueryTypeError(f"type mismatch: expected {expected}, found {found}",
                             expected=str(expected), found=str(found),
                             loc=getattr(at, "loc", None))
