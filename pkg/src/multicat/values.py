"""Runtime value universe.

Every expression evaluates to one of: primitive, entity reference, tuple,
list, or graph. Lists are persistent cons lists so the fold combinator
``cons x xs`` is O(1) and a 100k-element filter stays linear; the spine is
materialized into a tuple lazily (and cached) the first time the list is
iterated or compared.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

from .graph import GraphTerm, graph_eq


@dataclass(frozen=True)
class PrimV:
    value: Union[int, float, str, bool]

    def __eq__(self, other):
        # bool is an int subclass in Python; keep the types apart.
        return (isinstance(other, PrimV)
                and type(self.value) is type(other.value)
                and self.value == other.value)

    def __hash__(self):
        return hash((type(self.value).__name__, self.value))


@dataclass(frozen=True)
class EntityV:
    id: str


@dataclass(frozen=True)
class TupleV:
    items: tuple["Value", ...]


class ListV:
    """Immutable list value: either a materialized tuple or a cons cell."""

    __slots__ = ("_items", "_head", "_tail")

    def __init__(self, items: tuple = ()):
        self._items: tuple | None = tuple(items)
        self._head = None
        self._tail = None

    @staticmethod
    def cons(head: "Value", tail: "ListV") -> "ListV":
        out = ListV.__new__(ListV)
        out._items = None
        out._head = head
        out._tail = tail
        return out

    @property
    def items(self) -> tuple:
        if self._items is None:
            spine = []
            node = self
            while node._items is None:
                spine.append(node._head)
                node = node._tail
            spine.extend(node._items)
            self._items = tuple(spine)
        return self._items

    def __iter__(self) -> Iterator["Value"]:
        return iter(self.items)

    def __len__(self) -> int:
        return len(self.items)

    def __eq__(self, other):
        return isinstance(other, ListV) and self.items == other.items

    def __hash__(self):
        return hash(self.items)

    def __repr__(self):
        return f"ListV({list(self.items)!r})"


@dataclass(frozen=True)
class GraphV:
    term: GraphTerm


Value = Union[PrimV, EntityV, TupleV, ListV, GraphV]

EMPTY_LIST = ListV(())


def values_equal(a: Value, b: Value) -> bool:
    """Structural equality, except graphs compare by their semantics."""
    if isinstance(a, GraphV) and isinstance(b, GraphV):
        return graph_eq(a.term, b.term)
    if isinstance(a, ListV) and isinstance(b, ListV):
        return len(a) == len(b) and all(values_equal(x, y) for x, y in zip(a, b))
    if isinstance(a, TupleV) and isinstance(b, TupleV):
        return len(a.items) == len(b.items) and \
            all(values_equal(x, y) for x, y in zip(a.items, b.items))
    return a == b
