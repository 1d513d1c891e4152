"""JSON-ready views of verdicts, plus report assembly.

Reports are deterministic given the input and flags; the timing section is
the only varying part and is suppressed by ``--no-timings`` for golden tests.
Every negative verdict carries a witness checkable by re-running one
operation.
"""

from __future__ import annotations

import hashlib
from typing import Optional

from . import __version__
from .fincat import FinCategory
from .game import GameOutcome, GameSolution, LocalVerdict, strategy_export
from .karoubi import CauchyVerdict
from .sieves import CensusReport, Sieve, sieve_member_names, sieve_space

SCHEMA_VERSION = 1


def input_digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def base_report(input_name: Optional[str], digest: Optional[str]) -> dict:
    report: dict = {"schema": SCHEMA_VERSION, "tool": f"rigidcat {__version__}"}
    if input_name is not None:
        report["input"] = {"path": input_name, "sha256": digest}
    report["sections"] = {}
    return report


def sieve_names(C: FinCategory, x: int, mask: int) -> list[str]:
    return sieve_member_names(C, Sieve(base=x, members=mask))


def validation_section(C: FinCategory) -> dict:
    return {"ok": True, "name": C.name, "objects": len(C.objects),
            "morphisms": len(C.morphisms)}


def cauchy_section(C: FinCategory, v: CauchyVerdict) -> dict:
    return {"complete": v.complete,
            "witness": None if v.witness is None else C.morphisms[v.witness].name}


def local_section(C: FinCategory, v: LocalVerdict) -> dict:
    heights = {C.objects[r.base]: r.height for r in v.reflections}
    endo = {}
    for x, ev in enumerate(v.endo):
        endo[C.objects[x]] = {"ok": ev.ok}
    return {"ok": v.ok,
            "cauchy": cauchy_section(C, v.cauchy),
            "artinian": all(r.artinian for r in v.reflections),
            "slice_heights": heights,
            "enough_idempotents": endo,
            "failing_condition": v.failing_condition,
            "witness": v.witness}


def game_section(C: FinCategory, outcome: GameOutcome,
                 include_arenas: bool = False) -> dict:
    section = {
        "cleaner_wins_everywhere": outcome.wins,
        "failing_object": (None if outcome.failing_object is None
                           else C.objects[outcome.failing_object]),
        "failing_morphism": (None if outcome.failing_morphism is None
                             else C.morphisms[outcome.failing_morphism].name),
        "reducer_cycle": None,
        "identity_start": {C.objects[x]: w
                           for x, w in enumerate(outcome.identity_wins)},
    }
    if outcome.cycle is not None:
        sol = outcome.solutions[outcome.failing_object]
        section["reducer_cycle"] = [
            [C.morphisms[sol.arena.morphisms[i]].name, turn]
            for i, turn in outcome.cycle]
    if include_arenas:
        section["arenas"] = [strategy_export(C, sol)
                             for sol in outcome.solutions]
    return section


def arena_section(C: FinCategory, sol: GameSolution) -> dict:
    return strategy_export(C, sol)


def census_section(C: FinCategory, report: CensusReport) -> dict:
    topologies = []
    for entry in report.entries:
        covers = {C.objects[x]: [sieve_names(C, x, mask)
                                 for mask in entry.topology.covers[x]]
                  for x in range(len(C.objects))}
        topologies.append({
            "covers": covers,
            "rigid": entry.verdict.rigid,
            "irreducibles": sorted(C.objects[x]
                                   for x in entry.verdict.irreducibles),
        })
    return {
        "count": len(report.entries),
        "cauchy": cauchy_section(C, report.cauchy),
        "all_rigid": report.all_rigid,
        "injective": report.injective,
        "image": [list(s) for s in report.image],
        "subcategories": (None if report.subcategories is None
                          else [list(s) for s in report.subcategories]),
        "image_matches": report.image_matches,
        "bijection_holds": report.bijection_holds,
        "topologies": topologies,
    }
