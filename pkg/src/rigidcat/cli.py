"""Command-line surface: reproducible analyses with machine-readable reports.

Report JSON goes to stdout, the human summary to stderr.  Exit codes:
0 all verdicts positive/agreeing, 1 a negative verdict (with witness),
2 input or budget error, 3 internal decider disagreement (a bug, not a
finding).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Optional

from .builders import (DEFAULT_CORPUS_SEED, FIXTURE_BUILDERS, fixture,
                       random_corpus)
from .errors import BudgetExceeded, TooManyObjects
from .fincat import (FinCategory, InvalidPresentation, category_to_dict,
                     validate_category)
from .game import (check_degree_criterion, cleaner_wins_everywhere,
                   universally_rigid_local)
from .karoubi import SUBSET_GUARD, envelope_export, karoubi_envelope
from .report import (base_report, cauchy_section, census_section,
                     game_section, input_digest, local_section,
                     validation_section)
from .sieves import (DEFAULT_BUDGET, double_negation_topology,
                     irreducible_objects, rigidity_census)


def _read_input(path: str) -> tuple[str, bytes]:
    if path == "-":
        return "<stdin>", sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return path, fh.read()


def _load_category(path: str) -> tuple[FinCategory, str, str]:
    name, data = _read_input(path)
    raw = json.loads(data)
    return validate_category(raw), name, input_digest(data)


def _emit(report: dict, timings: dict[str, float], no_timings: bool) -> None:
    if not no_timings:
        report["timings"] = {k: round(v, 6) for k, v in timings.items()}
    json.dump(report, sys.stdout, indent=2, ensure_ascii=False)
    sys.stdout.write("\n")


def _say(msg: str) -> None:
    print(msg, file=sys.stderr)


def cmd_validate(args) -> int:
    name, data = _read_input(args.file)
    digest = input_digest(data)
    try:
        raw = json.loads(data)
    except json.JSONDecodeError as exc:
        _say(f"error: not valid JSON: {exc}")
        return 2
    report = base_report(name, digest)
    t0 = time.monotonic()
    try:
        C = validate_category(raw)
    except InvalidPresentation as exc:
        report["sections"]["validation"] = {
            "ok": False, "error": type(exc).__name__, "detail": str(exc)}
        _emit(report, {"validation": time.monotonic() - t0}, args.no_timings)
        _say(f"invalid presentation: {exc}")
        return 1
    report["sections"]["validation"] = validation_section(C)
    _emit(report, {"validation": time.monotonic() - t0}, args.no_timings)
    _say(f"{C.name}: valid ({len(C.objects)} objects, "
         f"{len(C.morphisms)} morphisms)")
    return 0


def cmd_complete(args) -> int:
    C, _, _ = _load_category(args.file)
    out = envelope_export(karoubi_envelope(C))
    json.dump(out, sys.stdout, indent=2, ensure_ascii=False)
    sys.stdout.write("\n")
    _say(f"Karoubi envelope of {C.name}: {len(out['objects'])} objects")
    return 0


def cmd_census(args) -> int:
    C, name, digest = _load_category(args.file)
    report = base_report(name, digest)
    t0 = time.monotonic()
    census = rigidity_census(C, budget_limit=args.budget,
                             subset_guard=args.max_objects)
    elapsed = time.monotonic() - t0
    report["sections"]["census"] = census_section(C, census)
    _emit(report, {"census": elapsed}, args.no_timings)
    ok = census.all_rigid and census.bijection_holds
    _say(f"{C.name}: {len(census.entries)} topologies, "
         f"all_rigid={census.all_rigid}, bijection={census.bijection_holds}")
    return 0 if ok else 1


def cmd_game(args) -> int:
    C, name, digest = _load_category(args.file)
    report = base_report(name, digest)
    t0 = time.monotonic()
    outcome = cleaner_wins_everywhere(C)
    elapsed = time.monotonic() - t0
    if args.object is not None:
        if args.object not in C.object_index:
            _say(f"error: unknown object {args.object!r}")
            return 2
        x = C.object_index[args.object]
        sol = outcome.solutions[x]
        wins = all((i, "R") in sol.region
                   for i in range(len(sol.arena.morphisms)))
        report["sections"]["game"] = game_section(C, outcome,
                                                  include_arenas=True)
        report["sections"]["game"]["arenas"] = [
            report["sections"]["game"]["arenas"][x]]
        verdict = wins
    else:
        report["sections"]["game"] = game_section(C, outcome,
                                                  include_arenas=True)
        verdict = outcome.wins
    if args.strategy:
        with open(args.strategy, "w", encoding="utf-8") as fh:
            json.dump(report["sections"]["game"]["arenas"], fh, indent=2,
                      ensure_ascii=False)
            fh.write("\n")
    _emit(report, {"game": elapsed}, args.no_timings)
    _say(f"{C.name}: Cleaner wins everywhere = {verdict}")
    return 0 if verdict else 1


def cmd_rigidity(args) -> int:
    C, name, digest = _load_category(args.file)
    report = base_report(name, digest)
    timings = {}
    t0 = time.monotonic()
    local = universally_rigid_local(C)
    timings["local"] = time.monotonic() - t0
    t0 = time.monotonic()
    outcome = cleaner_wins_everywhere(C)
    timings["game"] = time.monotonic() - t0
    t0 = time.monotonic()
    census = rigidity_census(C, budget_limit=args.budget,
                             subset_guard=args.max_objects)
    timings["census"] = time.monotonic() - t0

    report["sections"]["local"] = local_section(C, local)
    report["sections"]["game"] = game_section(C, outcome)
    report["sections"]["census"] = census_section(C, census)
    verdicts = (local.ok, outcome.wins, census.all_rigid)
    agree = len(set(verdicts)) == 1
    report["sections"]["agreement"] = {
        "agree": agree, "local": local.ok, "game": outcome.wins,
        "census_all_rigid": census.all_rigid}
    report["universally_rigid"] = agree and local.ok
    _emit(report, timings, args.no_timings)
    if not agree:
        _say(f"{C.name}: INTERNAL ERROR - deciders disagree {verdicts}")
        return 3
    _say(f"{C.name}: universally rigid = {local.ok} (three deciders agree)")
    return 0 if local.ok else 1


def cmd_degree(args) -> int:
    C, name, digest = _load_category(args.file)
    text = args.degrees
    if not text.lstrip().startswith("{"):
        with open(text, "r", encoding="utf-8") as fh:
            text = fh.read()
    mapping = json.loads(text)
    missing = [o for o in C.objects if o not in mapping]
    if missing:
        _say(f"error: --degrees missing objects {missing}")
        return 2
    degrees = {C.object_index[o]: int(v) for o, v in mapping.items()
               if o in C.object_index}
    report = base_report(name, digest)
    t0 = time.monotonic()
    verdict = check_degree_criterion(C, degrees)
    elapsed = time.monotonic() - t0
    report["sections"]["degree"] = {
        "ok": verdict.ok,
        "failing_morphism": (None if verdict.failing is None
                             else C.morphisms[verdict.failing].name)}
    _emit(report, {"degree": elapsed}, args.no_timings)
    _say(f"{C.name}: degree criterion = {verdict.ok}")
    return 0 if verdict.ok else 1


def cmd_fixture(args) -> int:
    if args.name not in FIXTURE_BUILDERS:
        _say(f"error: unknown fixture {args.name!r}; "
             f"choose from {sorted(FIXTURE_BUILDERS)}")
        return 2
    C = fixture(args.name)
    json.dump(category_to_dict(C), sys.stdout, indent=2, ensure_ascii=False)
    sys.stdout.write("\n")
    _say(f"emitted fixture {C.name}")
    return 0


def cmd_corpus(args) -> int:
    report = base_report(None, None)
    t0 = time.monotonic()
    corpus = random_corpus(args.seed, args.count)
    elements = []
    disagreement = False
    negative = False
    for C in corpus:
        entry = {"name": C.name, "objects": len(C.objects),
                 "morphisms": len(C.morphisms)}
        if args.check:
            local = universally_rigid_local(C)
            outcome = cleaner_wins_everywhere(C)
            entry["local"] = local.ok
            entry["game"] = outcome.wins
            entry["agree"] = local.ok == outcome.wins
            dn = double_negation_topology(C)
            irr = set(irreducible_objects(C, dn))
            lemma4 = all(
                (x in irr) == all(C.is_split_epi(f) for f in C.hom_into(x))
                for x in range(len(C.objects)))
            entry["lemma4"] = lemma4
            if not entry["agree"] or not lemma4:
                disagreement = True
            if not local.ok:
                negative = True
        elements.append(entry)
    elapsed = time.monotonic() - t0
    report["sections"]["corpus"] = {
        "seed": args.seed, "count": args.count, "checked": args.check,
        "elements": elements}
    if args.check:
        report["sections"]["corpus"]["all_agree"] = not disagreement
    _emit(report, {"corpus": elapsed}, args.no_timings)
    if args.check and disagreement:
        _say("INTERNAL ERROR: decider disagreement in corpus")
        return 3
    _say(f"corpus of {args.count} (seed {args.seed}): "
         + ("checks agree" if args.check else "generated"))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rigidcat",
        description="Decide universal rigidity of finite categories three "
                    "independent ways and audit the topology census.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_budget=False):
        p.add_argument("--no-timings", action="store_true",
                       help="omit the timing section (for byte-stable output)")
        if with_budget:
            p.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                           help=f"enumeration work budget (default {DEFAULT_BUDGET})")
            p.add_argument("--max-objects", type=int, default=SUBSET_GUARD,
                           help=f"subset-enumeration guard (default {SUBSET_GUARD})")

    p = sub.add_parser("validate", help="check a category presentation")
    p.add_argument("file", help="interchange JSON ('-' for stdin)")
    add_common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("complete", help="emit the Karoubi envelope")
    p.add_argument("file")
    add_common(p)
    p.set_defaults(func=cmd_complete)

    p = sub.add_parser("census", help="enumerate topologies and test rigidity")
    p.add_argument("file")
    add_common(p, with_budget=True)
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("game", help="solve the split-epimorphism game")
    p.add_argument("file")
    p.add_argument("--object", help="restrict the verdict to one codomain")
    p.add_argument("--strategy", help="write the strategy export to this file")
    add_common(p)
    p.set_defaults(func=cmd_game)

    p = sub.add_parser("rigidity",
                       help="run all three deciders and assert agreement")
    p.add_argument("file")
    add_common(p, with_budget=True)
    p.set_defaults(func=cmd_rigidity)

    p = sub.add_parser("degree", help="check the degree-function criterion")
    p.add_argument("file")
    p.add_argument("--degrees", required=True,
                   help="JSON object mapping object names to degrees, "
                        "or a path to such a file")
    add_common(p)
    p.set_defaults(func=cmd_degree)

    p = sub.add_parser("fixture", help="emit a built-in fixture")
    p.add_argument("name")
    p.set_defaults(func=cmd_fixture)

    p = sub.add_parser("corpus", help="generate/check the random corpus")
    p.add_argument("--seed", type=int, default=DEFAULT_CORPUS_SEED)
    p.add_argument("--count", type=int, default=50)
    p.add_argument("--check", action="store_true",
                   help="run the cross-decider property suite")
    add_common(p)
    p.set_defaults(func=cmd_corpus)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        _say(f"error: {exc}")
        return 2
    except json.JSONDecodeError as exc:
        _say(f"error: not valid JSON: {exc}")
        return 2
    except InvalidPresentation as exc:
        _say(f"error: invalid presentation: {exc}")
        return 2
    except (BudgetExceeded, TooManyObjects) as exc:
        _say(f"error: {exc}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
