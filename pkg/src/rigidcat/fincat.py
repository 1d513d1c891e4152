"""Finite categories as validated composition tables.

Composition is diagrammatic throughout: ``compose(f, g)`` means "f then g"
and is defined exactly when ``cod(f) == dom(g)``.  A category is immutable
once validated; every operation in this module is a pure function of its
inputs, so unrestricted concurrent reads are safe.

Morphisms are referenced by dense integer ids.  Identity morphisms occupy
ids ``0 .. n_objects-1`` (one per object, named ``id_<object>``) followed by
the declared morphisms in input order; the interchange format never lists
identities explicitly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Optional, Sequence


class InvalidPresentation(Exception):
    """A raw presentation cannot be assembled into a category."""


class DuplicateName(InvalidPresentation):
    pass


class BadEndpoints(InvalidPresentation):
    pass


class MissingComposite(InvalidPresentation):
    pass


class AssociativityViolation(InvalidPresentation):
    def __init__(self, f: str, g: str, h: str) -> None:
        super().__init__(f"associativity fails on the triple ({f}, {g}, {h})")
        self.witness = (f, g, h)


@dataclass(frozen=True)
class Morphism:
    name: str
    dom: int
    cod: int


@dataclass(frozen=True)
class FinCategory:
    """Objects, morphisms, and a total composition table on composable pairs.

    ``comp[f][g]`` is the id of "f then g", or -1 when cod(f) != dom(g).
    ``identity[x]`` is the identity morphism id of object ``x``.
    """

    name: str
    objects: tuple[str, ...]
    morphisms: tuple[Morphism, ...]
    identity: tuple[int, ...]
    comp: tuple[tuple[int, ...], ...]

    def __repr__(self) -> str:
        return (f"FinCategory({self.name!r}, {len(self.objects)} objects, "
                f"{len(self.morphisms)} morphisms)")

    # -- lookups ---------------------------------------------------------

    @cached_property
    def object_index(self) -> Mapping[str, int]:
        return {name: i for i, name in enumerate(self.objects)}

    @cached_property
    def morphism_index(self) -> Mapping[str, int]:
        return {m.name: i for i, m in enumerate(self.morphisms)}

    def dom(self, f: int) -> int:
        return self.morphisms[f].dom

    def cod(self, f: int) -> int:
        return self.morphisms[f].cod

    def is_identity(self, f: int) -> bool:
        m = self.morphisms[f]
        return m.dom == m.cod and self.identity[m.dom] == f

    def compose(self, f: int, g: int) -> int:
        """Return "f then g"; the pair must be composable."""
        h = self.comp[f][g]
        if h < 0:
            raise ValueError(
                f"morphisms {self.morphisms[f].name!r} and "
                f"{self.morphisms[g].name!r} are not composable")
        return h

    @cached_property
    def _homs(self) -> Mapping[tuple[int, int], tuple[int, ...]]:
        homs: dict[tuple[int, int], list[int]] = {}
        for i, m in enumerate(self.morphisms):
            homs.setdefault((m.dom, m.cod), []).append(i)
        return {k: tuple(v) for k, v in homs.items()}

    def hom(self, a: int, b: int) -> tuple[int, ...]:
        return self._homs.get((a, b), ())

    @cached_property
    def _hom_into(self) -> tuple[tuple[int, ...], ...]:
        into: list[list[int]] = [[] for _ in self.objects]
        for i, m in enumerate(self.morphisms):
            into[m.cod].append(i)
        return tuple(tuple(v) for v in into)

    def hom_into(self, x: int) -> tuple[int, ...]:
        """All morphisms with codomain ``x``, in morphism-id order."""
        return self._hom_into[x]

    # -- split morphisms and images --------------------------------------

    @cached_property
    def split_epis(self) -> frozenset[int]:
        """Morphisms r admitting a section s with s . r = id_cod(r)."""
        out = set()
        for r, m in enumerate(self.morphisms):
            want = self.identity[m.cod]
            if any(self.comp[s][r] == want for s in self.hom(m.cod, m.dom)):
                out.add(r)
        return frozenset(out)

    @cached_property
    def split_monos(self) -> frozenset[int]:
        """Morphisms m admitting a retraction t with m . t = id_dom(m)."""
        out = set()
        for f, m in enumerate(self.morphisms):
            want = self.identity[m.dom]
            if any(self.comp[f][t] == want for t in self.hom(m.cod, m.dom)):
                out.add(f)
        return frozenset(out)

    def is_split_epi(self, r: int) -> bool:
        return r in self.split_epis

    def is_split_mono(self, m: int) -> bool:
        return m in self.split_monos

    def is_iso(self, f: int) -> bool:
        m = self.morphisms[f]
        return any(self.comp[f][g] == self.identity[m.dom]
                   and self.comp[g][f] == self.identity[m.cod]
                   for g in self.hom(m.cod, m.dom))

    def factor_through(self, f: int, g: int) -> Optional[int]:
        """Some h with h . g = f, if one exists; f and g share a codomain."""
        mf, mg = self.morphisms[f], self.morphisms[g]
        if mf.cod != mg.cod:
            raise ValueError("factor_through requires a common codomain")
        for h in self.hom(mf.dom, mg.dom):
            if self.comp[h][g] == f:
                return h
        return None

    def image_leq(self, f: int, g: int) -> bool:
        """im(f) <= im(g) in the subobject poset of the common codomain."""
        return self.factor_through(f, g) is not None

    def image_eq(self, f: int, g: int) -> bool:
        return self.image_leq(f, g) and self.image_leq(g, f)

    @cached_property
    def idempotents(self) -> tuple[int, ...]:
        return tuple(e for e, m in enumerate(self.morphisms)
                     if m.dom == m.cod and self.comp[e][e] == e)

    def objects_isomorphic(self, x: int, y: int) -> bool:
        if x == y:
            return True
        return any(self.comp[f][g] == self.identity[x]
                   and self.comp[g][f] == self.identity[y]
                   for f in self.hom(x, y) for g in self.hom(y, x))

    @cached_property
    def iso_class(self) -> tuple[int, ...]:
        """Per object, the smallest object id isomorphic to it."""
        reps = list(range(len(self.objects)))
        for y in range(len(self.objects)):
            for x in range(y):
                if reps[x] == x and self.objects_isomorphic(x, y):
                    reps[y] = x
                    break
        return tuple(reps)


def _identity_name(obj: str) -> str:
    return f"id_{obj}"


def validate_category(raw: Mapping) -> FinCategory:
    """Assemble and check a category from a raw presentation.

    ``raw`` follows the interchange layout: name, objects, non-identity
    morphisms, and one composition row per composable pair of non-identity
    morphisms.  Identities are synthesized and their compositions filled in.
    """
    name = raw.get("name", "category")
    objects = tuple(raw.get("objects", ()))
    if len(set(objects)) != len(objects):
        raise DuplicateName("duplicate object name")

    n = len(objects)
    obj_ix = {o: i for i, o in enumerate(objects)}
    morphisms: list[Morphism] = [Morphism(_identity_name(o), i, i)
                                 for i, o in enumerate(objects)]
    seen = {m.name for m in morphisms}
    for entry in raw.get("morphisms", ()):
        mname, dom, cod = entry["name"], entry["dom"], entry["cod"]
        if mname in seen:
            raise DuplicateName(f"duplicate morphism name {mname!r}")
        if dom not in obj_ix or cod not in obj_ix:
            raise BadEndpoints(f"morphism {mname!r} has unknown endpoint")
        seen.add(mname)
        morphisms.append(Morphism(mname, obj_ix[dom], obj_ix[cod]))

    m = len(morphisms)
    mor_ix = {mo.name: i for i, mo in enumerate(morphisms)}
    comp = [[-1] * m for _ in range(m)]
    for f, mo in enumerate(morphisms):
        comp[mo.dom][f] = f        # id_dom(f) then f = f
        comp[f][mo.cod] = f        # f then id_cod(f) = f
    declared_pairs: set[tuple[int, int]] = set()
    for row in raw.get("composition", ()):
        first, then, equals = row["first"], row["then"], row["equals"]
        for nm in (first, then):
            if nm not in mor_ix or mor_ix[nm] < n:
                raise BadEndpoints(f"composition row names {nm!r}, which is "
                                   "not a declared non-identity morphism")
        if equals not in mor_ix:
            raise BadEndpoints(f"composite {equals!r} is not a known morphism")
        f, g, h = mor_ix[first], mor_ix[then], mor_ix[equals]
        if morphisms[f].cod != morphisms[g].dom:
            raise BadEndpoints(f"({first!r}, {then!r}) is not a composable pair")
        if morphisms[h].dom != morphisms[f].dom or morphisms[h].cod != morphisms[g].cod:
            raise BadEndpoints(
                f"composite of ({first!r}, {then!r}) must go "
                f"{objects[morphisms[f].dom]!r} -> {objects[morphisms[g].cod]!r}")
        if (f, g) in declared_pairs:
            raise DuplicateName(f"pair ({first!r}, {then!r}) declared twice")
        declared_pairs.add((f, g))
        comp[f][g] = h

    for f in range(m):
        for g in range(m):
            if morphisms[f].cod == morphisms[g].dom and comp[f][g] == -1:
                raise MissingComposite(
                    f"no composite declared for ({morphisms[f].name!r}, "
                    f"{morphisms[g].name!r})")

    for f in range(m):
        for g in range(m):
            if morphisms[f].cod != morphisms[g].dom:
                continue
            fg = comp[f][g]
            for h in range(m):
                if morphisms[g].cod != morphisms[h].dom:
                    continue
                if comp[fg][h] != comp[f][comp[g][h]]:
                    raise AssociativityViolation(
                        morphisms[f].name, morphisms[g].name, morphisms[h].name)

    return FinCategory(name=name, objects=objects, morphisms=tuple(morphisms),
                       identity=tuple(range(n)),
                       comp=tuple(tuple(r) for r in comp))


def category_to_dict(C: FinCategory) -> dict:
    """Serialize to the interchange layout; deterministic, identities implicit."""
    n = len(C.objects)
    rows = []
    for f in range(n, len(C.morphisms)):
        for g in range(n, len(C.morphisms)):
            if C.morphisms[f].cod == C.morphisms[g].dom:
                rows.append({"first": C.morphisms[f].name,
                             "then": C.morphisms[g].name,
                             "equals": C.morphisms[C.comp[f][g]].name})
    return {
        "name": C.name,
        "objects": list(C.objects),
        "morphisms": [{"name": m.name, "dom": C.objects[m.dom],
                       "cod": C.objects[m.cod]}
                      for m in C.morphisms[n:]],
        "composition": rows,
    }


def category_to_json(C: FinCategory) -> str:
    return json.dumps(category_to_dict(C), indent=2, ensure_ascii=False) + "\n"


def category_from_json(text: str) -> FinCategory:
    return validate_category(json.loads(text))


# -- slices and endomorphism monoids --------------------------------------

@dataclass(frozen=True)
class SlicePosetReflection:
    """Morphisms into the base object, partitioned by mutual factorization.

    ``classes`` are sorted tuples of morphism ids; ``leq`` holds the
    non-strict order on class indices ([f] <= [g] iff f factors through g).
    ``top`` is the class of split epimorphisms (the class of the identity).
    ``height`` is the number of classes in a longest chain; a finite poset
    is Artinian, so ``artinian`` is always True and reported for honesty.
    """

    base: int
    classes: tuple[tuple[int, ...], ...]
    leq: frozenset[tuple[int, int]]
    top: int
    height: int
    artinian: bool

    def class_of(self, f: int) -> int:
        for i, cls in enumerate(self.classes):
            if f in cls:
                return i
        raise ValueError("morphism does not target the base object")


def slice_poset_reflection(C: FinCategory, x: int) -> SlicePosetReflection:
    """Quotient the factorization preorder on hom-into(x) to a poset."""
    ms = C.hom_into(x)
    leq_m = {(f, g) for f in ms for g in ms if C.image_leq(f, g)}
    classes: list[list[int]] = []
    assigned: dict[int, int] = {}
    for f in ms:
        if f in assigned:
            continue
        cls = [g for g in ms if (f, g) in leq_m and (g, f) in leq_m]
        for g in cls:
            assigned[g] = len(classes)
        classes.append(cls)
    class_tuples = tuple(tuple(sorted(c)) for c in classes)
    leq = frozenset((i, j) for i, ci in enumerate(class_tuples)
                    for j, cj in enumerate(class_tuples)
                    if (ci[0], cj[0]) in leq_m)
    top = assigned[C.identity[x]]

    heights = [0] * len(class_tuples)
    # longest chain ending at each class, by repeated relaxation
    for _ in range(len(class_tuples)):
        for (i, j) in leq:
            if i != j and heights[j] < heights[i] + 1:
                heights[j] = heights[i] + 1
    height = max(heights, default=-1) + 1
    return SlicePosetReflection(base=x, classes=class_tuples, leq=leq,
                                top=top, height=height, artinian=True)


SLICE_SEP = "/"


def slice_morphism_name(h_name: str, g_name: str) -> str:
    """Name of the slice arrow (h . g) -> g with underlying morphism h."""
    return f"{h_name}{SLICE_SEP}{g_name}"


def slice_category(C: FinCategory, x: int) -> FinCategory:
    """The slice over x: objects are morphisms into x, arrows are
    factorizations.  The arrow named ``h/g`` goes from h . g to g."""
    ms = C.hom_into(x)
    obj_names = [C.morphisms[f].name for f in ms]
    morphisms = []
    rows = []
    arrows: dict[tuple[int, int], str] = {}
    for g in ms:
        for h in C.hom_into(C.dom(g)):
            if C.is_identity(h):
                continue  # identity arrows of the slice are implicit
            f = C.comp[h][g]
            nm = slice_morphism_name(C.morphisms[h].name, C.morphisms[g].name)
            arrows[(h, g)] = nm
            morphisms.append({"name": nm, "dom": C.morphisms[f].name,
                              "cod": C.morphisms[g].name})
    for (h1, g1), nm1 in arrows.items():
        for (h2, g2), nm2 in arrows.items():
            if g1 != C.comp[h2][g2]:
                continue  # cod of first arrow must be dom of second
            h = C.comp[h1][h2]
            if C.is_identity(h):
                equals = _identity_name(C.morphisms[g2].name)
            else:
                equals = arrows[(h, g2)]
            rows.append({"first": nm1, "then": nm2, "equals": equals})
    return validate_category({
        "name": f"{C.name}/{C.objects[x]}",
        "objects": obj_names,
        "morphisms": morphisms,
        "composition": rows,
    })


@dataclass(frozen=True)
class MonoidTable:
    """Multiplication table of an endomorphism monoid.

    ``table[i][j]`` is the index of "element i then element j";
    ``elements`` are morphism names and ``identity`` the unit's index.
    """

    elements: tuple[str, ...]
    identity: int
    table: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.elements)

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    def power(self, f: int, k: int) -> int:
        acc = self.identity
        for _ in range(k):
            acc = self.table[acc][f]
        return acc


def endomorphism_monoid(C: FinCategory, x: int) -> MonoidTable:
    ends = C.hom(x, x)
    pos = {f: i for i, f in enumerate(ends)}
    return MonoidTable(
        elements=tuple(C.morphisms[f].name for f in ends),
        identity=pos[C.identity[x]],
        table=tuple(tuple(pos[C.comp[f][g]] for g in ends) for f in ends),
    )
