"""The ``qfano`` command line tool.

Exit codes: 0 success, 2 usage error, 3 missing or unreadable input,
4 internal consistency failure (a check the tool makes about itself).
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
from importlib import resources
from typing import Sequence

from .arith import format_rational
from .enumeration import (
    Candidate,
    FILTER_FLAGS,
    FILTER_SETS,
    INDEX_SET,
    enumerate_candidates,
    facts,
    filter_diff,
)
from .links import LinkCaseError, audit, describe_case, feasible_indices, load_case_file, solve
from .store import Database, StoreError, dumps_database, load_database, save_database
from .surveys import SURVEYS, survey_rows
from .wps import WpsModel, degree_a3, fano_index, match_candidate

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_MISSING_INPUT = 3
EXIT_INTERNAL = 4


# ---------------------------------------------------------------------------
# rendering


def _align(rows: list[list[str]]) -> str:
    if not rows:
        return ""
    widths = [0] * max(len(r) for r in rows)
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    lines = []
    for row in rows:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
    return "\n".join(lines)


def render_candidate_table(candidates: Sequence[Candidate]) -> str:
    rows = [["id", "q", "-K^3", "A^3", "basket", "genus", "dims |A|..|-K|"]]
    for c in candidates:
        rows.append(
            [
                c.id,
                str(c.q),
                format_rational(c.minus_k3),
                format_rational(c.a3),
                str(c.basket),
                str(c.genus),
                " ".join(str(d) for d in c.dims),
            ]
        )
    return _align(rows)


def render_candidate_csv(candidates: Sequence[Candidate]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["id", "q", "minus_k3", "a3", "sigma", "basket", "genus", "dims"])
    for c in candidates:
        writer.writerow(
            [
                c.id,
                c.q,
                format_rational(c.minus_k3),
                format_rational(c.a3),
                format_rational(c.sigma),
                " ".join(f"{p.r}:{p.a}" for p in c.basket.points),
                c.genus,
                " ".join(str(d) for d in c.dims),
            ]
        )
    return buffer.getvalue().rstrip("\n")


def render_survey_table(key: str, candidates: Sequence[Candidate]) -> str:
    survey = SURVEYS[key]
    rows = survey_rows(survey, candidates)
    header = ["basket", "A^3"] + [f"|{k}A|" for k in range(1, survey.q + 1)]
    table = [header] + [row.cells() for row in rows]
    lines = [
        f"index {survey.q} survey ({survey.description}): {len(rows)} rows",
        _align(table),
    ]
    if any(row.multiplicity > 1 for row in rows):
        lines.append("rows marked xN collapse N orientation decorations with equal data")
    return "\n".join(lines)


def render_counts(db: Database) -> str:
    counts = db.counts()
    per_q = ", ".join(f"q={q}: {counts[q]}" for q in sorted(counts))
    return f"{len(db.candidates)} candidates ({per_q})"


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text + "\n")
    else:
        print(text)


def _render_db(db: Database, fmt: str) -> str:
    if fmt == "json":
        return dumps_database(db).rstrip("\n")
    if fmt == "csv":
        return render_candidate_csv(db.candidates)
    return render_candidate_table(db.candidates)


# ---------------------------------------------------------------------------
# database acquisition


def _build_database(filter_set: str, qs: Sequence[int], jobs: int) -> Database:
    config = FILTER_SETS[filter_set]
    candidates: list[Candidate] = []
    for q in sorted(qs):
        candidates.extend(enumerate_candidates(q, config, jobs=jobs))
    return Database(config=config, candidates=tuple(candidates), filter_set=filter_set)


def _load_or_build(args) -> Database:
    if getattr(args, "db", None):
        return load_database(args.db)
    return _build_database("default", INDEX_SET, getattr(args, "jobs", 1))


# ---------------------------------------------------------------------------
# commands


def cmd_enumerate(args) -> int:
    qs = INDEX_SET if args.all else (args.q,)
    db = _build_database(args.filter_set, qs, args.jobs)
    if args.db:
        save_database(db, args.db)
        print(f"{render_counts(db)} -> {args.db}")
        if args.format is None and args.out is None:
            return EXIT_OK
    else:
        print(render_counts(db))
    _emit(_render_db(db, args.format or "table"), args.out)
    return EXIT_OK


def cmd_table(args) -> int:
    db = _load_or_build(args)
    _emit(render_survey_table(args.case, db.candidates), args.out)
    return EXIT_OK


def cmd_wps_check(args) -> int:
    try:
        weights = tuple(int(w) for w in args.weights.split(","))
        model = WpsModel(weights=weights, degree=args.degree)
    except ValueError as exc:
        print(f"qfano wps check: {exc}", file=sys.stderr)
        return EXIT_USAGE
    q = fano_index(model)
    a3 = degree_a3(model)
    print(f"model: {model}")
    print(f"fano index q = {q}, A^3 = {format_rational(a3)}, "
          f"-K^3 = {format_rational(q**3 * a3)}")
    db = _load_or_build(args)
    pool = [c for c in db.candidates if c.q == q and c.a3 == a3]
    if not pool:
        print("candidate match: none (no enumerated candidate has this index and degree)")
        return EXIT_OK
    matched = 0
    for c in pool:
        report = match_candidate(model, c)
        if report.is_match:
            matched += 1
            print(f"candidate match: {c.id} "
                  f"(h^0 agrees with chi for k = 0..{report.checked_up_to})")
        else:
            print(f"candidate {c.id}: h^0 diverges from chi first at "
                  f"k = {report.first_mismatch}")
    if matched == 0:
        print("candidate match: none (index and degree agree, plurigenera do not)")
    return EXIT_OK


def _resolve_case_path(name: str) -> str:
    if os.path.exists(name):
        return name
    packaged = resources.files("qfano").joinpath("cases", os.path.basename(name))
    if packaged.is_file():
        return str(packaged)
    raise FileNotFoundError(name)


def cmd_link_solve(args) -> int:
    case = load_case_file(_resolve_case_path(args.case))
    db = _load_or_build(args)
    solutions = solve(case, db.candidates)
    print(describe_case(case))
    print(f"solutions: {len(solutions)}")
    for sol in solutions:
        assigned = " ".join(f"{name}={value}" for name, value in sol.assignment)
        print(f"  qhat={sol.qhat} alpha={format_rational(sol.alpha)} {assigned}")
        if not audit(case, sol, db.candidates):
            print("audit failed for the solution above", file=sys.stderr)
            return EXIT_INTERNAL
    feasible = feasible_indices(solutions)
    if feasible:
        print("feasible qhat values: {" + ", ".join(str(q) for q in feasible) + "}")
    else:
        print("feasible qhat values: none -- case eliminated")
    return EXIT_OK


def cmd_facts(args) -> int:
    db = _load_or_build(args)
    all_hold = True
    for fact in facts(db.candidates):
        status = "PASS" if fact.holds else "FAIL"
        all_hold = all_hold and fact.holds
        print(f"{status} {fact.name}: {fact.statement} [{fact.value}]")
    return EXIT_OK if all_hold else EXIT_INTERNAL


def cmd_export(args) -> int:
    db = load_database(args.db)
    _emit(_render_db(db, args.format), args.out)
    return EXIT_OK


def cmd_diff(args) -> int:
    config = FILTER_SETS[args.filter_set]
    flags = (args.flag,) if args.flag else FILTER_FLAGS
    for flag in flags:
        removed, added = filter_diff(args.q, flag, config, jobs=args.jobs)
        current = getattr(config, flag)
        print(f"{flag}: {current} -> {not current}: "
              f"removes {len(removed)}, adds {len(added)}")
        for c in removed[:20]:
            print(f"  - {c.id}")
        if len(removed) > 20:
            print(f"  - ... {len(removed) - 20} more")
        for c in added[:20]:
            print(f"  + {c.id}")
        if len(added) > 20:
            print(f"  + ... {len(added) - 20} more")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qfano",
        description="Enumerate and probe numerical Fano threefold candidates of index >= 3.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="run the candidate enumeration")
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--all", action="store_true", help="every admissible index")
    which.add_argument("--q", type=int, choices=INDEX_SET, metavar="Q",
                       help=f"one index from {INDEX_SET}")
    p.add_argument("--filter-set", choices=sorted(FILTER_SETS), default="default")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--db", metavar="PATH", help="write the database here")
    p.add_argument("--format", choices=("table", "json", "csv"), default=None)
    p.add_argument("--out", metavar="PATH", help="write formatted output here")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("table", help="render one survey table")
    p.add_argument("--case", choices=sorted(SURVEYS), required=True)
    p.add_argument("--db", metavar="PATH", help="candidate database (else re-enumerate)")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("wps", help="weighted projective space oracles")
    wps_sub = p.add_subparsers(dest="wps_command", required=True)
    pc = wps_sub.add_parser("check", help="match a (hypersurface in a) weighted "
                                          "projective space against the database")
    pc.add_argument("--weights", required=True, metavar="W1,W2,...")
    pc.add_argument("--degree", type=int, default=None,
                    help="hypersurface degree (omit for the whole space)")
    pc.add_argument("--db", metavar="PATH")
    pc.add_argument("--jobs", type=int, default=1)
    pc.set_defaults(func=cmd_wps_check)

    p = sub.add_parser("link", help="two-ray link numerology")
    link_sub = p.add_subparsers(dest="link_command", required=True)
    ps = link_sub.add_parser("solve", help="enumerate feasible link targets for a case file")
    ps.add_argument("case", metavar="CASEFILE",
                    help="path to a case file, or the name of a packaged one")
    ps.add_argument("--db", metavar="PATH")
    ps.add_argument("--jobs", type=int, default=1)
    ps.set_defaults(func=cmd_link_solve)

    p = sub.add_parser("facts", help="check the classification-shaped facts")
    p.add_argument("--db", metavar="PATH")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_facts)

    p = sub.add_parser("export", help="re-render a stored database")
    p.add_argument("--db", metavar="PATH", required=True)
    p.add_argument("--format", choices=("table", "json", "csv"), default="csv")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("diff", help="show what each filter switch adds or removes")
    p.add_argument("--q", type=int, choices=INDEX_SET, metavar="Q", required=True)
    p.add_argument("--flag", choices=FILTER_FLAGS, default=None)
    p.add_argument("--filter-set", choices=sorted(FILTER_SETS), default="default")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_diff)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        missing = getattr(exc, "filename", None) or exc
        print(f"qfano: input not found: {missing}", file=sys.stderr)
        return EXIT_MISSING_INPUT
    except (StoreError, LinkCaseError) as exc:
        print(f"qfano: bad input: {exc}", file=sys.stderr)
        return EXIT_MISSING_INPUT
    except AssertionError as exc:
        print(f"qfano: internal consistency check failed: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
