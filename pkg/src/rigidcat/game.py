"""The game of split epimorphisms, its attractor solution, the local
conditions for universal rigidity, the cleaning procedure, the degree
criterion, and the constructive irreducible cover.

Game convention (recorded, not paper-mandated): play alternates strictly,
Reducer moving first from any start position; Cleaner's trivial factorization
f = id . f is a legal pass.  Passing can only delay a Reducer win (infinite
play favours Reducer), so the convention is harmless for the verdict.
Positions are (morphism into X, turn); Reducer precomposes by a non-split-epi,
Cleaner rewrites f = r . f' with r a split epi, and Cleaner wins exactly the
attractor of the Reducer-stuck positions.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Mapping, Optional

from .errors import NotCauchyComplete
from .fincat import (FinCategory, MonoidTable, SlicePosetReflection,
                     endomorphism_monoid, slice_poset_reflection)
from .karoubi import CauchyVerdict, is_cauchy_complete, split_idempotent
from .sieves import (Sieve, Topology, irreducible_objects, is_topology,
                     sieve_generated_by, sieve_space)

REDUCER = "R"
CLEANER = "C"


@dataclass(frozen=True)
class GameArena:
    """Positions and moves of the game over one codomain.

    ``morphisms`` is hom-into(codomain); moves are stored per local morphism
    index.  ``reducer[i]`` lists positions reachable by precomposing with a
    non-split-epi; ``cleaner[i]`` lists f' with f = r . f' for some split epi
    r (always non-empty: the pass f = id . f is legal).
    """

    codomain: int
    morphisms: tuple[int, ...]
    reducer: tuple[tuple[int, ...], ...]
    cleaner: tuple[tuple[int, ...], ...]

    def positions(self) -> tuple[tuple[int, str], ...]:
        out = []
        for i in range(len(self.morphisms)):
            out.append((i, REDUCER))
            out.append((i, CLEANER))
        return tuple(out)


def build_arena(C: FinCategory, x: int) -> GameArena:
    ms = C.hom_into(x)
    local = {f: i for i, f in enumerate(ms)}
    reducer = []
    cleaner = []
    for f in ms:
        red = {local[C.comp[r][f]]
               for r in C.hom_into(C.dom(f)) if not C.is_split_epi(r)}
        cln = {local[f2] for f2 in ms
               if any(C.comp[r][f2] == f
                      for r in C.hom(C.dom(f), C.dom(f2)) if C.is_split_epi(r))}
        reducer.append(tuple(sorted(red)))
        cleaner.append(tuple(sorted(cln)))
    return GameArena(codomain=x, morphisms=ms,
                     reducer=tuple(reducer), cleaner=tuple(cleaner))


@dataclass(frozen=True)
class GameSolution:
    """Cleaner's winning region with a positional strategy and ranks.

    The region is the least fixpoint (attractor) of the Reducer-stuck target
    set; from any region position, play following ``strategy`` reaches a
    stuck position within ``rank`` steps.
    """

    arena: GameArena
    region: frozenset[tuple[int, str]]
    rank: Mapping[tuple[int, str], int]
    strategy: Mapping[int, int]  # Cleaner position -> chosen move


def solve_game(arena: GameArena) -> GameSolution:
    """Backward-induction attractor for the Reducer-stuck target set."""
    k = len(arena.morphisms)
    rank: dict[tuple[int, str], int] = {}
    strategy: dict[int, int] = {}
    for i in range(k):
        if not arena.reducer[i]:
            rank[(i, REDUCER)] = 0
    changed = True
    while changed:
        changed = False
        for i in range(k):
            pos = (i, CLEANER)
            if pos not in rank:
                reachable = [(rank[(j, REDUCER)], j) for j in arena.cleaner[i]
                             if (j, REDUCER) in rank]
                if reachable:
                    r, j = min(reachable)
                    rank[pos] = r + 1
                    strategy[i] = j
                    changed = True
            pos = (i, REDUCER)
            if pos not in rank and arena.reducer[i]:
                if all((j, CLEANER) in rank for j in arena.reducer[i]):
                    rank[pos] = 1 + max(rank[(j, CLEANER)]
                                        for j in arena.reducer[i])
                    changed = True
    return GameSolution(arena=arena, region=frozenset(rank), rank=rank,
                        strategy=strategy)


def play_random(sol: GameSolution, start: tuple[int, str],
                rng: random.Random) -> int:
    """One play from a region position: Reducer random, Cleaner by strategy.
    Returns the number of moves until Reducer is stuck."""
    arena = sol.arena
    i, turn = start
    steps = 0
    while True:
        if turn == REDUCER:
            if not arena.reducer[i]:
                return steps
            i, turn = rng.choice(arena.reducer[i]), CLEANER
        else:
            i, turn = sol.strategy[i], REDUCER
        steps += 1
        if steps > len(arena.morphisms) * 2 + 2:
            raise RuntimeError("play left the recorded rank bound")


@dataclass(frozen=True)
class GameOutcome:
    """Global verdict over all codomains and all start positions."""

    wins: bool
    solutions: tuple[GameSolution, ...]
    failing_object: Optional[int]
    failing_morphism: Optional[int]  # global morphism id
    cycle: Optional[tuple[tuple[int, str], ...]]  # positions outside region
    identity_wins: tuple[bool, ...]  # verdicts for the id_X start positions


def _reducer_cycle(arena: GameArena, region: frozenset,
                   start_local: int) -> tuple[tuple[int, str], ...]:
    """Walk a Reducer strategy staying outside the region until a position
    repeats; the repeated segment certifies an infinite play."""
    path: list[tuple[int, str]] = []
    seen: dict[tuple[int, str], int] = {}
    pos = (start_local, REDUCER)
    while pos not in seen:
        seen[pos] = len(path)
        path.append(pos)
        i, turn = pos
        if turn == REDUCER:
            nxt = [j for j in arena.reducer[i] if (j, CLEANER) not in region]
            pos = (nxt[0], CLEANER)
        else:
            nxt = [j for j in arena.cleaner[i] if (j, REDUCER) not in region]
            pos = (nxt[0], REDUCER)
    return tuple(path[seen[pos]:])


def cleaner_wins_everywhere(C: FinCategory) -> GameOutcome:
    """True iff every Reducer-turn position of every arena lies in Cleaner's
    winning region; on failure, exhibits a cycle Reducer can force."""
    solutions = []
    identity_wins = []
    failing: Optional[tuple[int, int]] = None
    cycle = None
    for x in range(len(C.objects)):
        sol = solve_game(build_arena(C, x))
        solutions.append(sol)
        local = {f: i for i, f in enumerate(sol.arena.morphisms)}
        identity_wins.append((local[C.identity[x]], REDUCER) in sol.region)
        if failing is None:
            for i, f in enumerate(sol.arena.morphisms):
                if (i, REDUCER) not in sol.region:
                    failing = (x, f)
                    cycle = _reducer_cycle(sol.arena, sol.region, i)
                    break
    return GameOutcome(
        wins=failing is None, solutions=tuple(solutions),
        failing_object=None if failing is None else failing[0],
        failing_morphism=None if failing is None else failing[1],
        cycle=cycle, identity_wins=tuple(identity_wins))


# -- local conditions ------------------------------------------------------

def idempotent_power(M: MonoidTable, f: int) -> int:
    """The unique idempotent among the powers f, f^2, ... (cycle detection)."""
    seen = set()
    cur = f
    while cur not in seen:
        if M.table[cur][cur] == cur:
            return cur
        seen.add(cur)
        cur = M.table[cur][f]
    raise RuntimeError("no idempotent power found; table is not a monoid")


@dataclass(frozen=True)
class LeftIdempotentWitness:
    kind: str  # "left_inverse" | "idempotent"
    element: int  # the left inverse g, or the idempotent e
    power: Optional[int] = None  # the n with e . f^n = f^n


@dataclass(frozen=True)
class EnoughIdempotentsVerdict:
    ok: bool
    witnesses: tuple[LeftIdempotentWitness, ...]  # one per monoid element


def enough_idempotents_left(M: MonoidTable) -> EnoughIdempotentsVerdict:
    """Every element either has a left inverse g (g . f = 1) or admits a
    non-identity idempotent e with e . f^n = f^n; finite monoids always pass
    via the idempotent power, and the witnesses are returned for reporting."""
    witnesses = []
    for f in range(len(M)):
        g = next((g for g in range(len(M)) if M.table[g][f] == M.identity), None)
        if g is not None:
            witnesses.append(LeftIdempotentWitness("left_inverse", g))
            continue
        e = idempotent_power(M, f)
        n = 1
        fn = f
        while M.table[e][fn] != fn:
            fn = M.table[fn][f]
            n += 1
        witnesses.append(LeftIdempotentWitness("idempotent", e, n))
    return EnoughIdempotentsVerdict(ok=True, witnesses=tuple(witnesses))


@dataclass(frozen=True)
class LocalVerdict:
    """Conjunction of the three local conditions, with per-condition reports."""

    ok: bool
    cauchy: CauchyVerdict
    reflections: tuple[SlicePosetReflection, ...]
    endo: tuple[EnoughIdempotentsVerdict, ...]
    failing_condition: Optional[int]  # 1 = Cauchy, 2 = Artinian, 3 = idempotents
    witness: Optional[str]


def universally_rigid_local(C: FinCategory) -> LocalVerdict:
    """Cauchy-completeness + Artinian slice reflections + enough idempotents
    on the left for every endomorphism monoid.  The last two are automatic
    on finite input but are still computed, with heights and witnesses."""
    cauchy = is_cauchy_complete(C)
    reflections = tuple(slice_poset_reflection(C, x)
                        for x in range(len(C.objects)))
    endo = tuple(enough_idempotents_left(endomorphism_monoid(C, x))
                 for x in range(len(C.objects)))
    failing = None
    witness = None
    if not cauchy.complete:
        failing = 1
        witness = C.morphisms[cauchy.witness].name
    elif not all(r.artinian for r in reflections):
        failing = 2
    elif not all(v.ok for v in endo):
        failing = 3
    return LocalVerdict(ok=failing is None, cauchy=cauchy,
                        reflections=reflections, endo=endo,
                        failing_condition=failing, witness=witness)


# -- cleaning and the constructive cover -----------------------------------

def clean_morphism(C: FinCategory, f: int) -> int:
    """Rewrite f (preserving its image) until the only idempotent e on its
    domain with e . f = f is the identity.  Each step splits such an e = r . s
    and replaces f by s . f; termination is guaranteed because the image of
    the accumulated section strictly descends in a finite slice poset."""
    for _ in range(len(C.morphisms) + 1):
        y = C.dom(f)
        e = next((e for e in C.idempotents
                  if C.dom(e) == y and e != C.identity[y]
                  and C.comp[e][f] == f), None)
        if e is None:
            return f
        sp = split_idempotent(C, e)
        if sp is None:
            raise NotCauchyComplete(C.morphisms[e].name)
        f = C.comp[sp.s][f]
    raise RuntimeError("cleaning failed to terminate")


def irreducible_cover(C: FinCategory, J: Topology, x: int) -> Sieve:
    """A J-covering sieve on x generated by morphisms out of J-irreducible
    objects, built by the constructive recursion: clean the position, stop at
    irreducible domains, otherwise refine through a non-maximal cover of the
    domain and recurse on the strictly smaller composite images."""
    if not universally_rigid_local(C).ok:
        raise ValueError("irreducible_cover requires the local conditions")
    if not is_topology(C, J).ok:
        raise ValueError("irreducible_cover requires a Grothendieck topology")
    space = sieve_space(C)
    irr = set(irreducible_objects(C, J))
    memo: dict[int, tuple[int, ...]] = {}

    def gens_for(f: int) -> tuple[int, ...]:
        if f in memo:
            return memo[f]
        g = clean_morphism(C, f)
        y = C.dom(g)
        if y in irr:
            out: tuple[int, ...] = (g,)
        else:
            nonmax = next(S for S in J.covers[y] if S != space.maximal[y])
            acc: list[int] = []
            for r in space.members(y, nonmax):
                acc.extend(gens_for(C.comp[r][g]))
            out = tuple(dict.fromkeys(acc))
        memo[f] = out
        return out

    gens = gens_for(C.identity[x])
    return sieve_generated_by(C, x, gens)


@dataclass(frozen=True)
class DegreeVerdict:
    ok: bool
    failing: Optional[int]  # a morphism with no admissible factorization


def check_degree_criterion(C: FinCategory,
                           degrees: Mapping[int, int]) -> DegreeVerdict:
    """Every morphism must factor as a split epi followed by an isomorphism
    or a strictly degree-raising morphism."""
    for f in range(len(C.morphisms)):
        a, b = C.dom(f), C.cod(f)
        found = False
        for w in range(len(C.objects)):
            for r in C.hom(a, w):
                if not C.is_split_epi(r):
                    continue
                for g in C.hom(w, b):
                    if C.comp[r][g] != f:
                        continue
                    if C.is_iso(g) or degrees[w] < degrees[b]:
                        found = True
                        break
                if found:
                    break
            if found:
                break
        if not found:
            return DegreeVerdict(ok=False, failing=f)
    return DegreeVerdict(ok=True, failing=None)


def strategy_export(C: FinCategory, sol: GameSolution) -> dict:
    """JSON-ready positional strategy for one arena."""
    arena = sol.arena
    positions = []
    for i, f in enumerate(arena.morphisms):
        for turn in (REDUCER, CLEANER):
            in_region = (i, turn) in sol.region
            move = None
            if turn == CLEANER and in_region:
                move = C.morphisms[arena.morphisms[sol.strategy[i]]].name
            positions.append({
                "morphism": C.morphisms[f].name,
                "turn": turn,
                "winner": "Cleaner" if in_region else "Reducer",
                "rank": sol.rank.get((i, turn)),
                "move": move,
            })
    return {"codomain": C.objects[arena.codomain], "positions": positions}
