"""Idempotent splitting, Cauchy-completeness, and the Karoubi envelope.

The splitting orientation is fixed as ``e = r . s`` with ``s . r`` an
identity, so ``r`` is a split epimorphism and ``s`` a split monomorphism.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from .errors import NotCauchyComplete, NotIdempotent, TooManyObjects
from .fincat import FinCategory, category_to_dict, validate_category

SUBSET_GUARD = 20  # cauchy_complete_full_subcategories refuses beyond this


@dataclass(frozen=True)
class IdempotentSplitting:
    """e = r . s through the object ``through``, with s . r = id_through."""

    e: int
    through: int
    r: int
    s: int


@dataclass(frozen=True)
class CauchyVerdict:
    complete: bool
    witness: Optional[int]  # a non-split idempotent, when incomplete


def split_idempotent(C: FinCategory, e: int) -> Optional[IdempotentSplitting]:
    """Exhaustively search for a splitting of the idempotent e."""
    m = C.morphisms[e]
    if m.dom != m.cod or C.comp[e][e] != e:
        raise NotIdempotent(f"{m.name!r} is not idempotent")
    x = m.dom
    for y in range(len(C.objects)):
        for r in C.hom(x, y):
            for s in C.hom(y, x):
                if C.comp[r][s] == e and C.comp[s][r] == C.identity[y]:
                    return IdempotentSplitting(e=e, through=y, r=r, s=s)
    return None


def is_cauchy_complete(C: FinCategory) -> CauchyVerdict:
    for e in C.idempotents:
        if split_idempotent(C, e) is None:
            return CauchyVerdict(complete=False, witness=e)
    return CauchyVerdict(complete=True, witness=None)


def envelope_morphism_name(f: str, e: str, e2: str) -> str:
    return f"{f}@{e}→{e2}"


@dataclass(frozen=True)
class KaroubiEnvelope:
    """The idempotent completion, with the embedding X -> id_X.

    ``embedding`` maps base object names to envelope object names.
    ``equivalent_to_base`` records whether every envelope object is
    isomorphic to an embedded one (checked, not assumed).
    """

    base: FinCategory
    envelope: FinCategory
    embedding: Mapping[str, str]
    equivalent_to_base: bool


def karoubi_envelope(C: FinCategory) -> KaroubiEnvelope:
    """Objects are idempotents e; hom(e, e') = {f | e.f = f and f.e' = f}."""
    idems = C.idempotents
    obj_names = [C.morphisms[e].name for e in idems]
    hom: dict[tuple[int, int], list[int]] = {}
    for e in idems:
        for e2 in idems:
            hom[(e, e2)] = [f for f in C.hom(C.dom(e), C.dom(e2))
                            if C.comp[e][f] == f and C.comp[f][e2] == f]
    names: dict[tuple[int, int, int], str] = {}
    morphisms = []
    for (e, e2), fs in hom.items():
        for f in fs:
            if f == e and e == e2:
                continue  # the identity on the envelope object e is e itself
            nm = envelope_morphism_name(C.morphisms[f].name,
                                        C.morphisms[e].name,
                                        C.morphisms[e2].name)
            names[(f, e, e2)] = nm
            morphisms.append({"name": nm, "dom": C.morphisms[e].name,
                              "cod": C.morphisms[e2].name})
    rows = []
    for (f, e, e2), nm1 in names.items():
        for (g, e3, e4), nm2 in names.items():
            if e3 != e2:
                continue
            fg = C.comp[f][g]
            if fg == e and e == e4:
                equals = f"id_{C.morphisms[e].name}"
            else:
                equals = names[(fg, e, e4)]
            rows.append({"first": nm1, "then": nm2, "equals": equals})
    envelope = validate_category({
        "name": f"Karoubi({C.name})",
        "objects": obj_names,
        "morphisms": morphisms,
        "composition": rows,
    })
    embedding = {C.objects[x]: C.morphisms[C.identity[x]].name
                 for x in range(len(C.objects))}
    base_cauchy = is_cauchy_complete(C).complete
    equivalent = False
    if base_cauchy:
        embedded = {envelope.object_index[n] for n in embedding.values()}
        equivalent = all(
            any(envelope.objects_isomorphic(y, x) for x in embedded)
            for y in range(len(envelope.objects)))
    return KaroubiEnvelope(base=C, envelope=envelope, embedding=embedding,
                           equivalent_to_base=equivalent)


def envelope_export(env: KaroubiEnvelope) -> dict:
    """Interchange dict of the envelope plus the embedding sidecar."""
    out = category_to_dict(env.envelope)
    out["embedding"] = dict(env.embedding)
    return out


def cauchy_complete_full_subcategories(
        C: FinCategory, guard: int = SUBSET_GUARD) -> list[tuple[str, ...]]:
    """All object subsets closed under splitting of idempotents (up to iso).

    Requires C itself to be Cauchy-complete; includes the empty set and the
    full object set.  Brute force over all subsets, guarded at ``guard``
    objects.
    """
    verdict = is_cauchy_complete(C)
    if not verdict.complete:
        raise NotCauchyComplete(C.morphisms[verdict.witness].name)
    n = len(C.objects)
    if n > guard:
        raise TooManyObjects(f"{n} objects exceeds the guard of {guard}")

    retract_classes: list[frozenset[int]] = []
    for x in range(n):
        targets = set()
        for e in C.idempotents:
            if C.dom(e) == x:
                sp = split_idempotent(C, e)
                targets.add(C.iso_class[sp.through])
        retract_classes.append(frozenset(targets))

    out = []
    for mask in range(1 << n):
        members = [x for x in range(n) if mask >> x & 1]
        classes = {C.iso_class[x] for x in members}
        if all(retract_classes[x] <= classes for x in members):
            out.append(tuple(C.objects[x] for x in members))
    out.sort(key=lambda s: (len(s), s))
    return out
