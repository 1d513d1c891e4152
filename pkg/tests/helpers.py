"""Independent brute-force oracles used to freeze expected values.

Everything here recomputes results from first principles with plain set
logic, deliberately sharing no code path with the package internals it
cross-checks.
"""

from __future__ import annotations

from itertools import product

from rigidcat.fincat import FinCategory


def mid(C: FinCategory, name: str) -> int:
    return C.morphism_index[name]


def oid(C: FinCategory, name: str) -> int:
    return C.object_index[name]


def mnames(C: FinCategory, ids) -> set[str]:
    return {C.morphisms[f].name for f in ids}


def naive_sieves(C: FinCategory, x: int) -> list[frozenset[int]]:
    """All precomposition-closed subsets of hom-into(x), by subset filter."""
    ms = C.hom_into(x)
    out = []
    for bits in range(1 << len(ms)):
        S = {ms[i] for i in range(len(ms)) if bits >> i & 1}
        if all(C.comp[h][f] in S for f in S for h in C.hom_into(C.dom(f))):
            out.append(frozenset(S))
    return out


def naive_pull(C: FinCategory, S: frozenset[int], h: int) -> frozenset[int]:
    return frozenset(g for g in C.hom_into(C.dom(h)) if C.comp[g][h] in S)


def naive_is_topology(C: FinCategory, J: dict[int, set[frozenset[int]]]) -> bool:
    n = len(C.objects)
    for x in range(n):
        if frozenset(C.hom_into(x)) not in J[x]:
            return False
    for x in range(n):
        for S in J[x]:
            for h in C.hom_into(x):
                if naive_pull(C, S, h) not in J[C.dom(h)]:
                    return False
    for x in range(n):
        for R in naive_sieves(C, x):
            if R in J[x]:
                continue
            for S in J[x]:
                if all(naive_pull(C, R, h) in J[C.dom(h)] for h in S):
                    return False
    return True


def naive_topologies(C: FinCategory) -> list[dict[int, set[frozenset[int]]]]:
    """Every Grothendieck topology, by filtering the full product of sieve
    families through the axioms.  Feasible only on the small fixtures."""
    n = len(C.objects)
    sieve_lists = [naive_sieves(C, x) for x in range(n)]
    out = []
    families_per_object = []
    for sieves in sieve_lists:
        families = []
        for bits in range(1 << len(sieves)):
            families.append({sieves[i] for i in range(len(sieves))
                             if bits >> i & 1})
        families_per_object.append(families)
    for combo in product(*families_per_object):
        J = {x: set(combo[x]) for x in range(n)}
        if naive_is_topology(C, J):
            out.append(J)
    return out


def naive_split_search(C: FinCategory, e: int):
    """Independent splitting search for an idempotent."""
    x = C.dom(e)
    for y in range(len(C.objects)):
        for r in C.hom(x, y):
            for s in C.hom(y, x):
                if C.comp[r][s] == e and C.comp[s][r] == C.identity[y]:
                    return y, r, s
    return None


def naive_isomorphic(C: FinCategory, x: int, y: int) -> bool:
    return x == y or any(
        C.comp[f][g] == C.identity[x] and C.comp[g][f] == C.identity[y]
        for f in C.hom(x, y) for g in C.hom(y, x))


def naive_retract_closed_subsets(C: FinCategory) -> set[tuple[str, ...]]:
    """Object subsets closed under splitting of idempotents, up to iso."""
    n = len(C.objects)
    out = set()
    for bits in range(1 << n):
        members = [x for x in range(n) if bits >> x & 1]
        ok = True
        for x in members:
            for e in range(len(C.morphisms)):
                if C.dom(e) != x or C.cod(e) != x or C.comp[e][e] != e:
                    continue
                sp = naive_split_search(C, e)
                assert sp is not None, "oracle requires a Cauchy-complete input"
                if not any(naive_isomorphic(C, sp[0], z) for z in members):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.add(tuple(sorted(C.objects[x] for x in members)))
    return out


def topology_as_sets(C: FinCategory, J) -> dict[int, set[frozenset[int]]]:
    """Convert a package Topology (bitmasks) to plain member-id sets."""
    out: dict[int, set[frozenset[int]]] = {}
    for x in range(len(C.objects)):
        ms = C.hom_into(x)
        out[x] = {frozenset(ms[i] for i in range(len(ms)) if mask >> i & 1)
                  for mask in J.covers[x]}
    return out
