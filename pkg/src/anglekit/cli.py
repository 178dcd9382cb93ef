"""Command-line interface.

Exit codes: 0 success, 1 verify rows failed, 2 ambiguous float census,
3 invalid input, 4 generation failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

from .census import DEFAULT_TOL, PartiteSpec, angle_table, to_floats
from .formulas import formulas_table
from .generators import KINDS, GenerationError, GenSpec, gen_partite_assignment, generate
from .io import FormatError, PointSet, make_pointset, read_pointset, write_pointset
from .repeats import AmbiguousCensusError, explore, q_scan, subset_exact, subset_randomized
from .verify import SUITES, rows_to_csv, run_suites

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_AMBIGUOUS = 2
EXIT_INVALID = 3
EXIT_GENERATION = 4

ALIASES = {"hypercube": "hypercubeProjection", "projected": "projectedPolygon"}
# which backends can read which file model
COMPATIBLE = {"exact": ("exact", "numeric"), "arc": ("arc", "numeric"), "float": ("numeric",)}
AUTO = {"exact": "exact", "arc": "arc", "float": "numeric"}


class UsageError(Exception):
    pass


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=True) + "\n"


def _plain(obj: dict) -> str:
    return "".join(f"{k}: {v}\n" for k, v in obj.items())


def _sizes(text: str | None) -> list[int] | None:
    if not text:
        return None
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"bad --sizes {text!r}; expected e.g. 4,2,2") from None


def _points(ps: PointSet, backend: str) -> tuple[list, str]:
    if backend == "auto":
        backend = AUTO[ps.model]
    if backend not in COMPATIBLE[ps.model]:
        raise UsageError(f"backend {backend!r} cannot read a {ps.model!r} point set")
    pts = to_floats(ps.points) if backend == "numeric" and ps.model != "float" else ps.points
    return pts, backend


def _partite(ps: PointSet) -> PartiteSpec:
    if not ps.labels:
        raise UsageError("--partite needs a point set with labels")
    k = len(set(ps.labels.values()))
    return PartiteSpec(ps.labels, "bipartite" if k == 2 else "kPartite")


def cmd_generate(a) -> int:
    kind = ALIASES.get(a.kind, a.kind)
    alpha = Fraction(a.alpha)
    spec = GenSpec(kind, n=a.n or 0, d=a.d, k=a.k, seed=a.seed, adversarial=a.adversarial,
                   plane_bound=a.plane_bound, resample_budget=a.resample_budget,
                   alpha=(alpha.numerator, alpha.denominator))
    g = generate(spec)
    labels = {}
    if a.sizes:
        labels = gen_partite_assignment(spec, _sizes(a.sizes)).class_of
    _emit(write_pointset(make_pointset(g.points, labels, spec, g.certificate)), a.out)
    return EXIT_OK


def cmd_census(a) -> int:
    ps = read_pointset(a.file)
    pts, backend = _points(ps, a.backend)
    table = angle_table(pts, backend, tol=a.tol, partite=_partite(ps) if a.partite else None)
    rep = table.report()
    d = rep.to_dict()
    if a.json:
        _emit(_dump(d), None)
    else:
        d.pop("pinned")
        _emit(_plain(d), None)
    if rep.ambiguous:
        print(f"ambiguous: clusters closer than {100 * a.tol:g}", file=sys.stderr)
        return EXIT_AMBIGUOUS
    return EXIT_OK


def cmd_qscan(a) -> int:
    ps = read_pointset(a.file)
    pts, backend = _points(ps, a.backend)
    rep = q_scan(pts, backend, a.tol)
    _emit(_dump(rep.to_dict()) if a.json else _plain(rep.to_dict()), None)
    return EXIT_OK


def cmd_subset(a) -> int:
    ps = read_pointset(a.file)
    pts, backend = _points(ps, a.backend)
    if a.method == "exact":
        res = subset_exact(pts, cap=a.cap, backend=backend, tol=a.tol)
    else:
        res = subset_randomized(pts, C=a.C, trials=a.trials, seed=a.seed, backend=backend, tol=a.tol)
    _emit(_dump(res.to_dict()) if a.json else _plain(res.to_dict()), None)
    return EXIT_OK


def cmd_explore(a) -> int:
    kind = ALIASES.get(a.kind, a.kind)
    spec = GenSpec(kind, n=a.n)
    pts, count = explore(spec, a.free, a.steps, a.seed, a.on_curve, a.tol)
    if a.out:
        write_pointset(make_pointset(pts, spec=spec), a.out)
    _emit(_dump({"best_count": count, "n": len(pts)}) if a.json else f"best_count: {count}\n", None)
    return EXIT_OK


def cmd_formulas(a) -> int:
    rows = formulas_table(a.n, a.d, _sizes(a.sizes))
    if a.json:
        _emit(_dump(rows), a.out)
        return EXIT_OK
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=["quantity", "n", "d", "lower", "upper"], lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    _emit(buf.getvalue(), a.out)
    return EXIT_OK


def cmd_verify(a) -> int:
    rows = run_suites(a.suite or ["all"])
    text = rows_to_csv(rows)
    if a.csv:
        Path(a.csv).write_text(text)
    if a.json:
        Path(a.json).write_text(_dump([r.to_dict() for r in rows]))
    if not (a.csv or a.json):
        sys.stdout.write(text)
    bad = [r for r in rows if r.status != "pass"]
    print(f"{len(rows) - len(bad)}/{len(rows)} rows pass", file=sys.stderr)
    return EXIT_OK if not bad else EXIT_FAILED


def _tol(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tol", type=float, default=DEFAULT_TOL, help="float clustering tolerance")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="anglekit", description="Distinct angles in point configurations.")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="build a configuration and write a point-set file")
    g.add_argument("--kind", required=True, choices=sorted(KINDS + tuple(ALIASES)))
    g.add_argument("--n", type=int, default=0)
    g.add_argument("--d", type=int, default=2)
    g.add_argument("--k", type=int, default=0)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--adversarial", action="store_true")
    g.add_argument("--alpha", default="1/8", help="fan spacing as a fraction of pi")
    g.add_argument("--plane-bound", type=int, default=997)
    g.add_argument("--resample-budget", type=int, default=100)
    g.add_argument("--sizes", help="comma-separated partite class sizes; adds labels")
    g.add_argument("--out")
    g.set_defaults(func=cmd_generate)

    c = sub.add_parser("census", help="count distinct angles")
    c.add_argument("file")
    c.add_argument("--backend", default="auto", choices=["auto", "exact", "arc", "numeric"])
    _tol(c)
    c.add_argument("--partite", action="store_true", help="count only partite angles (uses labels)")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_census)

    q = sub.add_parser("qscan", help="count repeated-angle configurations")
    q.add_argument("file")
    q.add_argument("--backend", default="auto", choices=["auto", "exact", "arc", "numeric"])
    _tol(q)
    q.add_argument("--json", action="store_true")
    q.set_defaults(func=cmd_qscan)

    s = sub.add_parser("subset", help="search for a repeat-free subset")
    s.add_argument("file")
    s.add_argument("--method", default="exact", choices=["exact", "randomized"])
    s.add_argument("--backend", default="auto", choices=["auto", "exact", "arc", "numeric"])
    s.add_argument("--cap", type=int, default=18)
    s.add_argument("--C", type=float, default=1.0)
    s.add_argument("--trials", type=int, default=1)
    s.add_argument("--seed", type=int, default=0)
    _tol(s)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_subset)

    e = sub.add_parser("explore", help="hill-climb extra points to reduce the count")
    e.add_argument("--kind", default="ngon", choices=["ngon", "projectedPolygon", "projected"])
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--free", type=int, default=1)
    e.add_argument("--steps", type=int, default=200)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--on-curve", action="store_true")
    _tol(e)
    e.add_argument("--out")
    e.add_argument("--json", action="store_true")
    e.set_defaults(func=cmd_explore)

    f = sub.add_parser("formulas", help="tabulate catalog bounds")
    f.add_argument("--n", type=int, required=True)
    f.add_argument("--d", type=int)
    f.add_argument("--sizes")
    f.add_argument("--json", action="store_true")
    f.add_argument("--out")
    f.set_defaults(func=cmd_formulas)

    v = sub.add_parser("verify", help="run the reproduction suites")
    v.add_argument("--suite", action="append", choices=("all",) + SUITES)
    v.add_argument("--csv", help="write rows as CSV to this path")
    v.add_argument("--json", help="write rows as JSON to this path")
    v.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_INVALID
    try:
        return args.func(args)
    except GenerationError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_GENERATION
    except AmbiguousCensusError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_AMBIGUOUS
    except (UsageError, FormatError, ValueError, TypeError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
