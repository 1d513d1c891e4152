"""Sieves, Grothendieck topologies, exhaustive topology enumeration, the
double-negation topology, irreducibles, and the rigidity census.

A sieve on X is stored as a bitmask over hom-into(X) in morphism-id order.
A topology is, per object, a sorted tuple of sieve masks.  All enumeration
is deterministic; exhaustive searches run against a hard work budget and
abort with BudgetExceeded rather than return a partial answer.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Optional

from .errors import BudgetExceeded
from .fincat import FinCategory
from .karoubi import CauchyVerdict, cauchy_complete_full_subcategories, is_cauchy_complete

DEFAULT_BUDGET = 1 << 20


class WrongCodomain(Exception):
    """A sieve generator does not target the sieve's base object."""


class Budget:
    """Counts units of enumeration work; raises when the limit is passed."""

    def __init__(self, limit: int = DEFAULT_BUDGET) -> None:
        self.limit = limit
        self.spent = 0

    def spend(self, n: int = 1) -> None:
        self.spent += n
        if self.spent > self.limit:
            raise BudgetExceeded(
                f"enumeration budget of {self.limit} exceeded")


@dataclass(frozen=True)
class Sieve:
    """A precomposition-closed set of morphisms into ``base``."""

    base: int
    members: int  # bitmask over hom-into(base)


@dataclass(frozen=True)
class Topology:
    """Per object, the sorted tuple of covering sieve masks."""

    covers: tuple[tuple[int, ...], ...]

    def sieves_on(self, x: int) -> tuple[int, ...]:
        return self.covers[x]


class SieveSpace:
    """Bitmask machinery for the sieves of one category."""

    def __init__(self, C: FinCategory) -> None:
        self.C = C
        n = len(C.objects)
        self.hom_into = [C.hom_into(x) for x in range(n)]
        self.local = [{f: i for i, f in enumerate(hs)} for hs in self.hom_into]
        self.maximal = [(1 << len(hs)) - 1 for hs in self.hom_into]
        # principal[x][i]: the sieve generated by hom_into(x)[i]
        self.principal: list[list[int]] = []
        for x in range(n):
            row = []
            for f in self.hom_into[x]:
                mask = 0
                for h in C.hom_into(C.dom(f)):
                    mask |= 1 << self.local[x][C.comp[h][f]]
                row.append(mask)
            self.principal.append(row)
        # pull_bits[h][j]: local index in cod(h) of (j-th morphism into dom(h)) . h
        self.pull_bits: dict[int, tuple[int, ...]] = {}
        self._pull_cache: dict[tuple[int, int], int] = {}
        self._sieves: dict[int, tuple[int, ...]] = {}

    def gen(self, x: int, fs: Iterable[int]) -> int:
        mask = 0
        for f in fs:
            mask |= self.principal[x][self.local[x][f]]
        return mask

    def members(self, x: int, mask: int) -> list[int]:
        return [f for i, f in enumerate(self.hom_into[x]) if mask >> i & 1]

    def is_closed(self, x: int, mask: int) -> bool:
        return self.gen(x, self.members(x, mask)) == mask

    def pull(self, x: int, mask: int, h: int) -> int:
        """The sieve {g | g . h in mask} on dom(h), for h into x."""
        key = (h, mask)
        cached = self._pull_cache.get(key)
        if cached is not None:
            return cached
        bits = self.pull_bits.get(h)
        if bits is None:
            C = self.C
            bits = tuple(self.local[x][C.comp[g][h]]
                         for g in self.hom_into[C.dom(h)])
            self.pull_bits[h] = bits
        out = 0
        for j, b in enumerate(bits):
            if mask >> b & 1:
                out |= 1 << j
        self._pull_cache[key] = out
        return out

    def all_sieves(self, x: int, budget: Optional[Budget] = None) -> tuple[int, ...]:
        """Every sieve on x: all unions of principal sieves, plus empty."""
        cached = self._sieves.get(x)
        if cached is not None:
            return cached
        budget = budget or Budget()
        sieves = {0}
        for p in sorted(set(self.principal[x])):
            budget.spend(len(sieves))
            sieves |= {s | p for s in sieves}
        out = tuple(sorted(sieves))
        self._sieves[x] = out
        return out


@lru_cache(maxsize=None)
def _space(C: FinCategory) -> SieveSpace:
    return SieveSpace(C)


def sieve_space(C: FinCategory) -> SieveSpace:
    return _space(C)


def sieve_generated_by(C: FinCategory, x: int, gens: Iterable[int]) -> Sieve:
    """The smallest sieve on x containing ``gens``."""
    space = _space(C)
    gens = tuple(gens)
    for f in gens:
        if C.cod(f) != x:
            raise WrongCodomain(
                f"{C.morphisms[f].name!r} does not target {C.objects[x]!r}")
    return Sieve(base=x, members=space.gen(x, gens))


def pullback_sieve(C: FinCategory, S: Sieve, h: int) -> Sieve:
    """The sieve h*(S) = {g | g . h in S} on dom(h)."""
    if C.cod(h) != S.base:
        raise WrongCodomain(
            f"{C.morphisms[h].name!r} does not target the sieve's base")
    space = _space(C)
    return Sieve(base=C.dom(h), members=space.pull(S.base, S.members, h))


def sieve_member_names(C: FinCategory, S: Sieve) -> list[str]:
    space = _space(C)
    return sorted(C.morphisms[f].name for f in space.members(S.base, S.members))


@dataclass(frozen=True)
class TopologyVerdict:
    ok: bool
    axiom: Optional[str] = None     # "maximality" | "stability" | "transitivity"
    obj: Optional[int] = None
    sieve: Optional[int] = None     # offending covering sieve mask
    other: Optional[int] = None     # second sieve (the locally-covered one)
    morphism: Optional[int] = None  # offending pullback morphism


def is_topology(C: FinCategory, J: Topology,
                budget: Optional[Budget] = None) -> TopologyVerdict:
    """Check maximality, stability, and transitivity, with a witness on failure."""
    space = _space(C)
    n = len(C.objects)
    for x in range(n):
        for mask in J.covers[x]:
            if not space.is_closed(x, mask):
                raise ValueError("candidate family lists a non-sieve")
    families = [frozenset(J.covers[x]) for x in range(n)]
    for x in range(n):
        if space.maximal[x] not in families[x]:
            return TopologyVerdict(False, "maximality", x, space.maximal[x])
    for x in range(n):
        for S in J.covers[x]:
            for h in space.hom_into[x]:
                if space.pull(x, S, h) not in families[C.dom(h)]:
                    return TopologyVerdict(False, "stability", x, S, None, h)
    for x in range(n):
        for R in space.all_sieves(x, budget):
            if R in families[x]:
                continue
            for S in J.covers[x]:
                if all(space.pull(x, R, h) in families[C.dom(h)]
                       for h in space.members(x, S)):
                    return TopologyVerdict(False, "transitivity", x, S, R)
    return TopologyVerdict(True)


def generated_topology(C: FinCategory, coverage: Iterable[Sieve],
                       budget: Optional[Budget] = None) -> Topology:
    """Least topology whose covers include ``coverage``: the fixpoint of
    maximality, upward closure, stability, and transitivity."""
    space = _space(C)
    n = len(C.objects)
    budget = budget or Budget()
    fams: list[set[int]] = [{space.maximal[x]} for x in range(n)]
    for S in coverage:
        if not space.is_closed(S.base, S.members):
            raise ValueError("coverage lists a non-sieve")
        fams[S.base].add(S.members)
    all_sieves = [space.all_sieves(x, budget) for x in range(n)]
    changed = True
    while changed:
        changed = False
        for x in range(n):
            for S in sorted(fams[x]):
                budget.spend()
                for T in all_sieves[x]:  # upward closure
                    if T & S == S and T not in fams[x]:
                        fams[x].add(T)
                        changed = True
                for h in space.hom_into[x]:  # stability
                    p = space.pull(x, S, h)
                    if p not in fams[C.dom(h)]:
                        fams[C.dom(h)].add(p)
                        changed = True
            for R in all_sieves[x]:  # transitivity
                if R in fams[x]:
                    continue
                for S in sorted(fams[x]):
                    budget.spend()
                    if all(space.pull(x, R, h) in fams[C.dom(h)]
                           for h in space.members(x, S)):
                        fams[x].add(R)
                        changed = True
                        break
    return Topology(covers=tuple(tuple(sorted(f)) for f in fams))


def trivial_topology(C: FinCategory) -> Topology:
    space = _space(C)
    return Topology(covers=tuple((space.maximal[x],)
                                 for x in range(len(C.objects))))


def _upset_families(space: SieveSpace, x: int, budget: Budget) -> list[frozenset[int]]:
    """All upward-closed sieve families on x that contain the maximal sieve
    and are stable under pullback along endomorphisms of x."""
    masks = sorted(space.all_sieves(x, budget), key=lambda s: (-bin(s).count("1"), s))
    supersets = {s: [t for t in masks if t != s and t & s == s] for s in masks}
    maxmask = space.maximal[x]
    endos = [h for h in space.hom_into[x] if space.C.dom(h) == x]
    out: list[frozenset[int]] = []

    def rec(i: int, included: frozenset[int]) -> None:
        budget.spend()
        if i == len(masks):
            out.append(included)
            return
        s = masks[i]
        if s != maxmask:
            rec(i + 1, included)
        if all(t in included for t in supersets[s]):
            rec(i + 1, included | {s})

    rec(0, frozenset())
    return [fam for fam in out
            if all(space.pull(x, S, h) in fam for S in fam for h in endos)]


def enumerate_topologies(C: FinCategory,
                         budget_limit: int = DEFAULT_BUDGET) -> list[Topology]:
    """The complete, duplicate-free list of Grothendieck topologies on C.

    Backtracks over per-object upward-closed families (largest sieves first),
    pruning with the stability axiom across assigned objects and checking
    transitivity at the leaves.  Never returns a partial census: if the work
    budget is hit, BudgetExceeded propagates.
    """
    space = _space(C)
    n = len(C.objects)
    budget = Budget(budget_limit)
    all_sieves = [space.all_sieves(x, budget) for x in range(n)]
    candidates = [_upset_families(space, x, budget) for x in range(n)]
    results: list[Topology] = []
    assign: list[frozenset[int]] = [frozenset()] * n

    def cross_stable(x: int) -> bool:
        C_ = space.C
        for j in range(x):
            for h in C_.hom(j, x):  # h into x with domain j
                if any(space.pull(x, S, h) not in assign[j] for S in assign[x]):
                    return False
            for h in C_.hom(x, j):
                if any(space.pull(j, S, h) not in assign[x] for S in assign[j]):
                    return False
        return True

    def transitive() -> bool:
        for x in range(n):
            fam = assign[x]
            for R in all_sieves[x]:
                if R in fam:
                    continue
                for S in fam:
                    budget.spend()
                    if all(space.pull(x, R, h) in assign[space.C.dom(h)]
                           for h in space.members(x, S)):
                        return False
        return True

    def bt(x: int) -> None:
        budget.spend()
        if x == n:
            if transitive():
                results.append(Topology(covers=tuple(
                    tuple(sorted(f)) for f in assign)))
            return
        for fam in candidates[x]:
            assign[x] = fam
            if cross_stable(x):
                bt(x + 1)

    bt(0)
    results.sort(key=lambda J: J.covers)
    return results


def double_negation_topology(C: FinCategory) -> Topology:
    """Covers are the dense sieves: those meeting every non-empty sieve."""
    space = _space(C)
    covers = []
    for x in range(len(C.objects)):
        principals = set(space.principal[x])
        dense = [S for S in space.all_sieves(x)
                 if all(S & p for p in principals)]
        covers.append(tuple(sorted(dense)))
    return Topology(covers=tuple(covers))


def irreducible_objects(C: FinCategory, J: Topology) -> tuple[int, ...]:
    """Objects whose only covering sieve is the maximal one."""
    space = _space(C)
    return tuple(x for x in range(len(C.objects))
                 if J.covers[x] == (space.maximal[x],))


@dataclass(frozen=True)
class RigidVerdict:
    rigid: bool
    irreducibles: tuple[int, ...]
    covers: tuple[int, ...]  # per object: the sieve generated from irreducibles
    failing: Optional[int]


def is_rigid(C: FinCategory, J: Topology) -> RigidVerdict:
    """Rigid iff for every X the sieve generated by all morphisms out of
    J-irreducible objects covers X.  Checking only this largest generated
    sieve suffices: covers are upward closed, and any covering sieve
    generated by irreducible-domain morphisms is contained in it."""
    space = _space(C)
    irr = irreducible_objects(C, J)
    irrset = set(irr)
    covers = []
    failing = None
    for x in range(len(C.objects)):
        gens = [f for f in space.hom_into[x] if C.dom(f) in irrset]
        mask = space.gen(x, gens)
        covers.append(mask)
        if failing is None and mask not in set(J.covers[x]):
            failing = x
    return RigidVerdict(rigid=failing is None, irreducibles=irr,
                        covers=tuple(covers), failing=failing)


@dataclass(frozen=True)
class CensusEntry:
    topology: Topology
    verdict: RigidVerdict


@dataclass(frozen=True)
class CensusReport:
    """Outcome of the topology census against the subcategory correspondence."""

    cauchy: CauchyVerdict
    entries: tuple[CensusEntry, ...]
    all_rigid: bool
    injective: bool
    image: tuple[tuple[str, ...], ...]
    subcategories: Optional[tuple[tuple[str, ...], ...]]
    image_matches: Optional[bool]
    bijection_holds: bool


def rigidity_census(C: FinCategory, budget_limit: int = DEFAULT_BUDGET,
                    subset_guard: int = 20) -> CensusReport:
    """Enumerate every topology, test rigidity, and compare the irreducible
    sets against the Cauchy-complete full subcategories.

    The subcategory comparison needs a Cauchy-complete C; on an incomplete
    input the census still runs and reports the failure instead of refusing,
    with the comparison marked absent.
    """
    cauchy = is_cauchy_complete(C)
    entries = tuple(CensusEntry(J, is_rigid(C, J))
                    for J in enumerate_topologies(C, budget_limit))
    irr_sets = [tuple(sorted(C.objects[x] for x in e.verdict.irreducibles))
                for e in entries]
    all_rigid = all(e.verdict.rigid for e in entries)
    injective = len(set(irr_sets)) == len(irr_sets)
    image = tuple(sorted(set(irr_sets), key=lambda s: (len(s), s)))
    subcategories: Optional[tuple[tuple[str, ...], ...]] = None
    image_matches: Optional[bool] = None
    if cauchy.complete:
        subcategories = tuple(
            tuple(sorted(s))
            for s in cauchy_complete_full_subcategories(C, guard=subset_guard))
        image_matches = set(image) == set(subcategories)
    return CensusReport(
        cauchy=cauchy, entries=entries, all_rigid=all_rigid,
        injective=injective, image=image, subcategories=subcategories,
        image_matches=image_matches,
        bijection_holds=all_rigid and injective and image_matches is True)
