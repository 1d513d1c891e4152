"""Deterministic constructors for the pinned fixture categories and a
seeded random corpus for cross-decider property testing.

Random categories come only from algebraically-guaranteed-valid sources
(monoids, posets, Karoubi envelopes, slices); random composition tables
almost never validate, so they are not attempted.
"""

from __future__ import annotations

import random
from dataclasses import replace
from itertools import combinations, combinations_with_replacement
from typing import Iterable, Sequence

from .fincat import FinCategory, slice_category, validate_category
from .karoubi import karoubi_envelope

SIMPLEX_BOUND = 4
DEFAULT_CORPUS_SEED = 1729


class NotPartialOrder(Exception):
    pass


class NotAssociative(Exception):
    pass


class NoIdentity(Exception):
    pass


class BoundExceeded(Exception):
    pass


def from_poset(elements: Sequence[str],
               leq_pairs: Iterable[tuple[str, str]],
               name: str = "poset") -> FinCategory:
    """One morphism x -> y per x <= y; reflexive pairs are implied."""
    elements = list(elements)
    index = {e: i for i, e in enumerate(elements)}
    leq = {(e, e) for e in elements}
    for a, b in leq_pairs:
        if a not in index or b not in index:
            raise NotPartialOrder(f"pair ({a!r}, {b!r}) names unknown elements")
        leq.add((a, b))
    for a, b in leq:
        if a != b and (b, a) in leq:
            raise NotPartialOrder(f"antisymmetry fails on ({a!r}, {b!r})")
    for a, b in leq:
        for c in elements:
            if (b, c) in leq and (a, c) not in leq:
                raise NotPartialOrder(f"transitivity fails on ({a!r}, {b!r}, {c!r})")

    arrow = lambda a, b: f"{a}<{b}"
    morphisms = [{"name": arrow(a, b), "dom": a, "cod": b}
                 for a in elements for b in elements
                 if a != b and (a, b) in leq]
    rows = []
    for a, b in sorted((p for p in leq if p[0] != p[1]),
                       key=lambda p: (index[p[0]], index[p[1]])):
        for c in elements:
            if b != c and (b, c) in leq:
                rows.append({"first": arrow(a, b), "then": arrow(b, c),
                             "equals": arrow(a, c)})
    return validate_category({"name": name, "objects": elements,
                              "morphisms": morphisms, "composition": rows})


def from_monoid(elements: Sequence[str], table: Sequence[Sequence[int]],
                name: str = "monoid", object_name: str = "*") -> FinCategory:
    """One-object category with End(*) given by ``table`` (row then column)."""
    k = len(elements)
    if any(len(row) != k for row in table) or len(table) != k:
        raise NotAssociative("table is not square")
    identity = next((e for e in range(k)
                     if all(table[e][x] == x == table[x][e] for x in range(k))),
                    None)
    if identity is None:
        raise NoIdentity("no two-sided identity element")
    for a in range(k):
        for b in range(k):
            for c in range(k):
                if table[table[a][b]][c] != table[a][table[b][c]]:
                    raise NotAssociative(
                        f"associativity fails on ({elements[a]}, "
                        f"{elements[b]}, {elements[c]})")
    id_name = f"id_{object_name}"
    mname = lambda i: id_name if i == identity else elements[i]
    morphisms = [{"name": elements[i], "dom": object_name, "cod": object_name}
                 for i in range(k) if i != identity]
    rows = [{"first": elements[a], "then": elements[b],
             "equals": mname(table[a][b])}
            for a in range(k) if a != identity
            for b in range(k) if b != identity]
    return validate_category({"name": name, "objects": [object_name],
                              "morphisms": morphisms, "composition": rows})


def _monotone_maps(a: int, b: int, injective: bool) -> list[tuple[int, ...]]:
    source = range(b + 1)
    if injective:
        return [t for t in combinations(source, a + 1)]
    return [t for t in combinations_with_replacement(source, a + 1)]


def simplex_morphism_name(vals: tuple[int, ...], a: int, b: int) -> str:
    return f"{''.join(map(str, vals))}:{a}->{b}"


def truncated_simplex(n: int, semi: bool = False,
                      bound: int = SIMPLEX_BOUND) -> FinCategory:
    """Objects [0]..[n]; morphisms are the (injective, when semi) monotone
    maps between the corresponding chains, named by their value tuples."""
    if n > bound:
        raise BoundExceeded(f"n = {n} exceeds the bound {bound}")
    objects = [f"[{a}]" for a in range(n + 1)]
    maps: dict[tuple[int, int], list[tuple[int, ...]]] = {}
    for a in range(n + 1):
        for b in range(n + 1):
            maps[(a, b)] = _monotone_maps(a, b, semi)

    def nm(vals: tuple[int, ...], a: int, b: int) -> str:
        if a == b and vals == tuple(range(a + 1)):
            return f"id_[{a}]"
        return simplex_morphism_name(vals, a, b)

    morphisms = [{"name": nm(v, a, b), "dom": f"[{a}]", "cod": f"[{b}]"}
                 for (a, b), vs in maps.items() for v in vs
                 if not (a == b and v == tuple(range(a + 1)))]
    rows = []
    for (a, b), vs in maps.items():
        for v in vs:
            if a == b and v == tuple(range(a + 1)):
                continue
            for (b2, c), ws in maps.items():
                if b2 != b:
                    continue
                for w in ws:
                    if b == c and w == tuple(range(b + 1)):
                        continue
                    composite = tuple(w[i] for i in v)
                    rows.append({"first": nm(v, a, b), "then": nm(w, b, c),
                                 "equals": nm(composite, a, c)})
    label = f"{'SemiDelta' if semi else 'Delta'}{n}"
    return validate_category({"name": label, "objects": objects,
                              "morphisms": morphisms, "composition": rows})


# -- pinned fixtures --------------------------------------------------------

def _one() -> FinCategory:
    return from_poset(["*"], [], name="One")


def _p2() -> FinCategory:
    return from_poset(["a", "b"], [("a", "b")], name="P2")


def _chain3() -> FinCategory:
    return from_poset(["a", "b", "c"], [("a", "b"), ("b", "c"), ("a", "c")],
                      name="Chain3")


def _m2() -> FinCategory:
    return from_monoid(["1", "e"], [[0, 1], [1, 1]], name="M2")


def _karoubi_m2() -> FinCategory:
    return karoubi_envelope(_m2()).envelope


FIXTURE_BUILDERS = {
    "one": _one,
    "p2": _p2,
    "chain3": _chain3,
    "m2": _m2,
    "karoubi_m2": _karoubi_m2,
    "delta1": lambda: truncated_simplex(1),
    "delta2": lambda: truncated_simplex(2),
    "semidelta2": lambda: truncated_simplex(2, semi=True),
}

FIXTURE_FILES = {
    "one": "One.json",
    "p2": "P2.json",
    "chain3": "Chain3.json",
    "m2": "M2.json",
    "karoubi_m2": "KaroubiM2.json",
    "delta1": "delta1.json",
    "delta2": "delta2.json",
    "semidelta2": "semidelta2.json",
}


def fixture(name: str) -> FinCategory:
    try:
        return FIXTURE_BUILDERS[name]()
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; "
                       f"choose from {sorted(FIXTURE_BUILDERS)}") from None


def all_fixtures() -> dict[str, FinCategory]:
    return {k: b() for k, b in FIXTURE_BUILDERS.items()}


# -- random corpus ----------------------------------------------------------

def _cyclic_monoid(k: int, p: int) -> tuple[list[str], list[list[int]]]:
    """The monoid {1, f, ..., f^(k+p-1)} with f^(k+p) = f^k."""
    size = k + p

    def norm(i: int) -> int:
        return i if i < size else k + (i - k) % p

    elements = [f"f{i}" for i in range(size)]
    table = [[norm(i + j) for j in range(size)] for i in range(size)]
    return elements, table


def _random_transformation_monoid(rng: random.Random, cap: int):
    """Close random endomaps of a small set under 'apply then'; retry on
    blowup, falling back to a cyclic monoid."""
    for _ in range(8):
        points = rng.randrange(2, 4)
        gens = [tuple(rng.randrange(points) for _ in range(points))
                for _ in range(rng.randrange(1, 3))]
        ident = tuple(range(points))
        elems = {ident}
        frontier = [ident]
        ok = True
        while frontier and ok:
            cur = frontier.pop()
            for g in gens:
                new = tuple(g[cur[i]] for i in range(points))  # cur then g
                if new not in elems:
                    if len(elems) >= cap:
                        ok = False
                        break
                    elems.add(new)
                    frontier.append(new)
        if not ok:
            continue
        order = sorted(elems)
        index = {t: i for i, t in enumerate(order)}
        names = ["t" + "".join(map(str, t)) for t in order]
        table = [[index[tuple(u[t[i]] for i in range(points))]
                  for u in order] for t in order]
        return names, table
    return _cyclic_monoid(rng.randrange(1, 3), rng.randrange(1, 4))


def _random_monoid_category(rng: random.Random, i: int, cap: int) -> FinCategory:
    kind = rng.choice(["cyclic", "truncated_add", "mod_mult", "transformation"])
    if kind == "cyclic":
        elements, table = _cyclic_monoid(rng.randrange(1, 4), rng.randrange(1, 4))
    elif kind == "truncated_add":
        t = rng.randrange(1, 6)
        elements = [f"n{j}" for j in range(t + 1)]
        table = [[min(a + b, t) for b in range(t + 1)] for a in range(t + 1)]
    elif kind == "mod_mult":
        m = rng.randrange(2, 7)
        elements = [f"z{j}" for j in range(m)]
        table = [[a * b % m for b in range(m)] for a in range(m)]
    else:
        elements, table = _random_transformation_monoid(rng, cap)
    return from_monoid(elements, table, name=f"corpus{i}_{kind}")


def _random_poset_category(rng: random.Random, i: int, max_elems: int) -> FinCategory:
    k = rng.randrange(1, max_elems + 1)
    elements = [f"v{j}" for j in range(k)]
    leq = {(a, b) for a in range(k) for b in range(a + 1, k)
           if rng.random() < 0.4}
    closed = set(leq)
    for _ in range(k):
        closed |= {(a, c) for (a, b) in closed for (b2, c) in closed if b == b2}
    pairs = [(elements[a], elements[b]) for (a, b) in sorted(closed)]
    return from_poset(elements, pairs, name=f"corpus{i}_poset")


def random_corpus(seed: int, count: int, max_poset: int = 5,
                  max_monoid: int = 8) -> list[FinCategory]:
    """Deterministic-from-seed mix of monoids, posets, Karoubi envelopes,
    and slices; every element passes validate_category by construction."""
    rng = random.Random(seed)
    out: list[FinCategory] = []
    for i in range(count):
        kind = rng.choice(["monoid", "poset", "envelope", "slice_monoid",
                           "slice_poset"])
        if kind == "monoid":
            cat = _random_monoid_category(rng, i, max_monoid)
        elif kind == "poset":
            cat = _random_poset_category(rng, i, max_poset)
        elif kind == "envelope":
            base = _random_monoid_category(rng, i, max_monoid)
            cat = replace(karoubi_envelope(base).envelope,
                          name=f"corpus{i}_envelope")
        elif kind == "slice_monoid":
            base = _random_monoid_category(rng, i, max_monoid)
            cat = slice_category(base, 0)
        else:
            base = _random_poset_category(rng, i, max_poset)
            x = rng.randrange(len(base.objects))
            cat = slice_category(base, x)
        out.append(cat)
    return out
