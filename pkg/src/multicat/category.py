"""Finite schema categories.

A schema is a finite category: objects are data types (entities and
primitives), morphisms are typed functions between them (attributes,
relationships), and composition is stored extensionally in a table so the
category laws can be checked by enumeration.

Identity morphisms are implicit in schema files; ``build_category`` adds
one per object, plus the composition-table entries the identity laws
require. Closure is only demanded of morphisms flagged ``composable``
(entity-to-entity by default), which keeps the table finite and small:
attribute-style composites into primitives need not be materialized.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import MissingComposite, SchemaViolation, TypeMismatch

PRIMITIVE_TYPES = ("string", "int", "double", "bool")


def identity_id(object_id: str) -> str:
    return f"id_{object_id}"


@dataclass(frozen=True)
class SchemaObject:
    id: str
    kind: str  # "primitive" | "entity"
    primitive_type: str | None = None  # present iff kind == "primitive"

    def __post_init__(self):
        if self.kind not in ("primitive", "entity"):
            raise SchemaViolation(f"object {self.id!r}: bad kind {self.kind!r}")
        if (self.kind == "primitive") != (self.primitive_type is not None):
            raise SchemaViolation(
                f"object {self.id!r}: primitiveType must be present exactly for primitives")
        if self.primitive_type is not None and self.primitive_type not in PRIMITIVE_TYPES:
            raise SchemaViolation(
                f"object {self.id!r}: unknown primitive type {self.primitive_type!r}")


@dataclass(frozen=True)
class Morphism:
    id: str
    domain: str
    codomain: str
    cardinality: str = "one"  # "many" lifts the codomain to a list in the instance
    composable: bool = True

    def __post_init__(self):
        if self.cardinality not in ("one", "many"):
            raise SchemaViolation(f"morphism {self.id!r}: bad cardinality {self.cardinality!r}")


@dataclass(frozen=True)
class Violation:
    law: str  # "identity" | "closure" | "composite" | "associativity" | functor laws
    subject: tuple[str, ...]
    message: str


@dataclass(frozen=True)
class LawReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        if self.ok:
            return "OK"
        return "\n".join(f"[{v.law}] {v.message}" for v in self.violations)


@dataclass(frozen=True)
class SchemaCategory:
    """Objects, morphisms and an extensional composition table.

    ``composites`` maps (outer id, inner id) -> composite id and is defined
    exactly for the composable pairs (plus all identity pairs). Treat
    instances as immutable; all query machinery shares them freely.
    """

    objects: dict[str, SchemaObject]
    morphisms: dict[str, Morphism]
    composites: dict[tuple[str, str], str]
    declaration_order: tuple[str, ...] = field(default=(), compare=False)

    def object(self, object_id: str) -> SchemaObject:
        return self.objects[object_id]

    def morphism(self, morphism_id: str) -> Morphism:
        return self.morphisms[morphism_id]

    def is_identity(self, morphism_id: str) -> bool:
        m = self.morphisms.get(morphism_id)
        return m is not None and m.domain == m.codomain and morphism_id == identity_id(m.domain)

    def entity_objects(self) -> list[SchemaObject]:
        return [o for o in self.objects.values() if o.kind == "entity"]

    def attribute_morphisms(self, object_id: str) -> list[Morphism]:
        """Morphisms from object_id into a primitive, in declaration order."""
        out = []
        for mid in self.declaration_order:
            m = self.morphisms[mid]
            if m.domain == object_id and self.objects[m.codomain].kind == "primitive":
                out.append(m)
        return out

    def non_identity_morphisms(self) -> list[Morphism]:
        return [m for m in self.morphisms.values() if not self.is_identity(m.id)]


def _combined_cardinality(g: Morphism, f: Morphism) -> str:
    return "many" if "many" in (g.cardinality, f.cardinality) else "one"


def build_category(objects: list[SchemaObject], morphisms: list[Morphism],
                   composites: dict[tuple[str, str], str]) -> SchemaCategory:
    """Assemble a category from schema-file parts, adding identities.

    Validates referential integrity and rejects many-after-many composites
    (their instance semantics would need flattening, which nothing defines).
    Does not check the category laws; that is checkCategoryLaws' job.
    """
    obj_map: dict[str, SchemaObject] = {}
    for o in objects:
        if o.id in obj_map:
            raise SchemaViolation(f"duplicate object id {o.id!r}")
        obj_map[o.id] = o

    mor_map: dict[str, Morphism] = {}
    order: list[str] = []
    for m in morphisms:
        if m.id in mor_map:
            raise SchemaViolation(f"duplicate morphism id {m.id!r}")
        if m.domain not in obj_map or m.codomain not in obj_map:
            raise SchemaViolation(f"morphism {m.id!r}: unresolved domain or codomain")
        if m.id.startswith("id_"):
            raise SchemaViolation(f"morphism {m.id!r}: the id_ prefix is reserved for identities")
        mor_map[m.id] = m
        order.append(m.id)

    for o in obj_map.values():
        ident = identity_id(o.id)
        mor_map[ident] = Morphism(id=ident, domain=o.id, codomain=o.id,
                                  cardinality="one", composable=True)

    table: dict[tuple[str, str], str] = {}
    for (g_id, f_id), r_id in composites.items():
        for name in (g_id, f_id, r_id):
            if name not in mor_map:
                raise SchemaViolation(f"composite entry references unknown morphism {name!r}")
        g, f = mor_map[g_id], mor_map[f_id]
        if g.cardinality == "many" and f.cardinality == "many":
            raise SchemaViolation(
                f"composite {g_id} after {f_id}: many-after-many is not supported")
        table[(g_id, f_id)] = r_id

    # Identity-law entries: f . id_dom = f and id_cod . f = f for every morphism.
    for m in mor_map.values():
        table[(m.id, identity_id(m.domain))] = m.id
        table[(identity_id(m.codomain), m.id)] = m.id

    return SchemaCategory(objects=obj_map, morphisms=mor_map, composites=table,
                          declaration_order=tuple(order))


def load_schema(path: str | Path) -> SchemaCategory:
    """Read a schema.json file (identities implicit) into a SchemaCategory."""
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    objects = [
        SchemaObject(id=o["id"], kind=o["kind"], primitive_type=o.get("primitiveType"))
        for o in doc.get("objects", [])
    ]
    obj_map = {o.id: o for o in objects}
    morphisms = []
    for m in doc.get("morphisms", []):
        dom, cod = obj_map.get(m["domain"]), obj_map.get(m["codomain"])
        if dom is None or cod is None:
            raise SchemaViolation(f"morphism {m.get('id')!r}: unresolved domain or codomain")
        default_composable = dom.kind == "entity" and cod.kind == "entity"
        morphisms.append(Morphism(
            id=m["id"], domain=m["domain"], codomain=m["codomain"],
            cardinality=m.get("cardinality", "one"),
            composable=m.get("composable", default_composable),
        ))
    composites = {
        (c["outer"], c["inner"]): c["result"] for c in doc.get("composites", [])
    }
    return build_category(objects, morphisms, composites)


def compose(g: Morphism, f: Morphism, cat: SchemaCategory) -> Morphism:
    """g after f, looked up in the composition table."""
    if f.codomain != g.domain:
        raise TypeMismatch(
            f"cannot compose {g.id}: {g.domain}->{g.codomain} "
            f"after {f.id}: {f.domain}->{f.codomain}")
    result = cat.composites.get((g.id, f.id))
    if result is None:
        raise MissingComposite(f"no composite registered for {g.id} after {f.id}")
    return cat.morphisms[result]


def compose_path(path: list[str], cat: SchemaCategory) -> Morphism:
    """Compose a path of morphism ids in diagrammatic order (step i feeds step i+1)."""
    if not path:
        raise TypeMismatch("empty path")
    acc = cat.morphism(path[0])
    for i, mid in enumerate(path[1:]):
        step = cat.morphism(mid)
        try:
            acc = compose(step, acc, cat)
        except TypeMismatch:
            raise TypeMismatch(
                f"path breaks at pair {i}: {acc.id} ends at {acc.codomain} "
                f"but {step.id} starts at {step.domain}", pair_index=i)
    return acc


def check_category_laws(cat: SchemaCategory) -> LawReport:
    """Enumerate every law instance; violations are data, not errors.

    Checks, in order: identity presence and the identity laws, composition
    table well-formedness, closure over composable pairs, associativity of
    all composable triples. An empty report means cat is a category.
    """
    out: list[Violation] = []

    for o in cat.objects.values():
        ident = cat.morphisms.get(identity_id(o.id))
        if ident is None or ident.domain != o.id or ident.codomain != o.id:
            out.append(Violation("identity", (o.id,),
                                 f"object {o.id} has no identity morphism"))

    for m in cat.morphisms.values():
        for key, label in (((m.id, identity_id(m.domain)), "right"),
                           ((identity_id(m.codomain), m.id), "left")):
            if identity_id(m.domain if label == "right" else m.codomain) not in cat.morphisms:
                continue  # already reported above
            if cat.composites.get(key) != m.id:
                out.append(Violation("identity", (m.id,),
                                     f"{label} identity law fails for {m.id}"))

    for (g_id, f_id), r_id in cat.composites.items():
        missing = [x for x in (g_id, f_id, r_id) if x not in cat.morphisms]
        if missing:
            out.append(Violation("composite", (g_id, f_id, r_id),
                                 f"composite entry references unknown morphism(s) {missing}"))
            continue
        g, f, r = cat.morphisms[g_id], cat.morphisms[f_id], cat.morphisms[r_id]
        if f.codomain != g.domain:
            out.append(Violation("composite", (g_id, f_id),
                                 f"table entry ({g_id}, {f_id}) is not a composable pair"))
        elif r.domain != f.domain or r.codomain != g.codomain:
            out.append(Violation("composite", (g_id, f_id, r_id),
                                 f"composite {r_id} of ({g_id}, {f_id}) should be "
                                 f"{f.domain}->{g.codomain}, is {r.domain}->{r.codomain}"))
        elif not cat.is_identity(g_id) and not cat.is_identity(f_id) \
                and r.cardinality != _combined_cardinality(g, f):
            out.append(Violation("composite", (g_id, f_id, r_id),
                                 f"composite {r_id} has cardinality {r.cardinality}, "
                                 f"expected {_combined_cardinality(g, f)}"))

    closable = [m for m in cat.non_identity_morphisms() if m.composable]
    for f in closable:
        for g in closable:
            if f.codomain != g.domain:
                continue
            if g.cardinality == "many" and f.cardinality == "many":
                continue  # excluded at build; nothing to close over
            if (g.id, f.id) not in cat.composites:
                out.append(Violation("closure", (g.id, f.id),
                                     f"composable pair ({g.id}, {f.id}) missing from the table"))

    for f in closable:
        for g in closable:
            if f.codomain != g.domain:
                continue
            for h in closable:
                if g.codomain != h.domain:
                    continue
                gf = cat.composites.get((g.id, f.id))
                hg = cat.composites.get((h.id, g.id))
                if gf is None or hg is None:
                    continue  # closure violation already recorded
                left = cat.composites.get((h.id, gf))
                right = cat.composites.get((hg, f.id))
                if left is not None and right is not None and left != right:
                    out.append(Violation(
                        "associativity", (h.id, g.id, f.id),
                        f"{h.id} . ({g.id} . {f.id}) = {left} but "
                        f"({h.id} . {g.id}) . {f.id} = {right}"))

    return LawReport(tuple(out))
