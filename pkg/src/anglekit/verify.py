"""Fixed-seed reproduction suites; each check yields one VerifyRow."""
from __future__ import annotations

import csv
import io
from dataclasses import asdict, dataclass
from fractions import Fraction
from math import ceil, comb
from typing import Callable, Iterator

import numpy as np

from .census import census, census_partite, pinned_summary, to_floats
from .exact import PointR, general_position
from .formulas import a_k, bounds_eval, brute_force_class_count, icbrt, t_k, tri_class_count
from .generators import (
    GenSpec,
    gen_fan,
    gen_hypercube_projection,
    gen_lenz,
    gen_ngon,
    gen_ngon_center,
    gen_partite_assignment,
    gen_perturbed_circle,
    gen_perturbed_line,
    gen_projected_polygon,
    gen_simplex,
)
from .repeats import q_scan, q_scan_naive, subset_exact, subset_randomized

HEADER = ("suite", "case", "n", "d", "k", "expected", "measured", "status")
SUITES = ("polygons", "projection", "hypercube", "lenz", "perturb", "partite", "subset", "formulas")

# Float tolerance for the hypercube agreement rows. Random planes realize
# genuinely distinct cosines only ~3e-10 apart, while float noise is ~1e-15.
HYPERCUBE_TOL = 1e-13


@dataclass
class VerifyRow:
    suite: str
    case: str
    n: int
    d: int
    k: int
    expected: str
    measured: str
    status: str

    def to_dict(self) -> dict:
        return asdict(self)


def _fmt(x) -> str:
    return str(x) if not isinstance(x, bool) else str(x).lower()


def check(suite: str, case: str, rel: str, expected, measured, n: int = 0, d: int = 2, k: int = 0,
          ambiguous: bool = False) -> VerifyRow:
    """Row comparing ``measured`` to ``expected`` under ``rel`` (=, <=, >=)."""
    ok = {
        "=": lambda a, b: a == b,
        "<=": lambda a, b: a <= b,
        ">=": lambda a, b: a >= b,
    }[rel](measured, expected)
    status = "ambiguous" if ambiguous else ("pass" if ok else "fail")
    return VerifyRow(suite, case, n, d, k, f"{rel} {_fmt(expected)}", _fmt(measured), status)


def _lower(quantity: str, n: int, **kw) -> Fraction:
    return bounds_eval(quantity, n, **kw)[0]


def suite_polygons() -> Iterator[VerifyRow]:
    for n in range(3, 65):
        r = census(gen_ngon(n))
        yield check("polygons", "ngon", "=", n - 2, r.distinct_count, n)
        if n >= 4:
            yield check("polygons", "ngon lower bound", ">=", _lower("A", n), r.distinct_count, n)
            yield check("polygons", "ngon maxPinned", "=", n - 2, pinned_summary(r)[0], n)
            f = census(to_floats(gen_ngon(n)), "numeric")
            yield check("polygons", "ngon arc=numeric", "=", r.distinct_count, f.distinct_count, n,
                        ambiguous=f.ambiguous)
    for n in range(4, 34):
        r = census(gen_ngon_center(n), "numeric")
        want = n - 2 if n % 2 == 0 else (n - 2) + ceil(n / 2)
        yield check("polygons", "ngon+center", "=", want, r.distinct_count, n, ambiguous=r.ambiguous)
        yield check("polygons", "ngon+center lower bound", ">=", _lower("A", n + 1),
                    r.distinct_count, n + 1)


def suite_projection() -> Iterator[VerifyRow]:
    for n in range(4, 65):
        r = census(gen_projected_polygon(n), "numeric")
        yield check("projection", "projected polygon", "=", n - 2, r.distinct_count, n,
                    ambiguous=r.ambiguous)
        yield check("projection", "projected polygon lower bound", ">=", _lower("A_no4c", n),
                    r.distinct_count, n)
        if n <= 32:
            yield check("projection", "projected polygon sumPinned", "=", 3 * n - 6,
                        pinned_summary(r)[1], n, ambiguous=r.ambiguous)
            yield check("projection", "projected polygon sumPinned catalog upper", "<=",
                        bounds_eval("A_hatSigma", n)[1], pinned_summary(r)[1], n, ambiguous=r.ambiguous)
    # fan family: n-1 rays at spacing pi/(2(n-1)) from one apex
    for n in range(4, 17):
        r = census(gen_fan(n, 1, 2 * (n - 1)), "numeric")
        yield check("projection", "fan lower bound", ">=", _lower("A", n), r.distinct_count, n,
                    ambiguous=r.ambiguous)


def suite_hypercube(seeds=(0, 1, 2)) -> Iterator[VerifyRow]:
    for d in (3, 4, 5):
        bound = 3 * tri_class_count(d)
        for seed in seeds:
            pts, cert = gen_hypercube_projection(d, seed=seed)
            n = len(pts)
            case = f"seed={seed}"
            gp = general_position(pts)
            yield check("hypercube", f"general position {case}", "=", True, gp.ok, n, d)
            yield check("hypercube", f"injective {case}", "=", n, len({p.coords for p in pts}), n, d)
            r = census(pts, "exact")
            yield check("hypercube", f"census {case}", "<=", bound, r.distinct_count, n, d)
            yield check("hypercube", f"lower bound {case}", ">=", _lower("A_gen", n), r.distinct_count, n, d)
            f = census(to_floats(pts), "numeric", tol=HYPERCUBE_TOL)
            yield check("hypercube", f"exact=numeric {case}", "=", r.distinct_count, f.distinct_count,
                        n, d, ambiguous=f.ambiguous)


def suite_lenz() -> Iterator[VerifyRow]:
    for n in range(3, 17):
        r4 = census(gen_lenz(4, n), "numeric")
        bound = 2 * n - 4 if n % 4 == 0 else 2 * n - 3
        yield check("lenz", "d=4", "<=", bound, r4.distinct_count, 2 * n, 4, ambiguous=r4.ambiguous)
        yield check("lenz", "d=4 catalog upper", "<=", bounds_eval("A_d", 2 * n, 4)[1],
                    r4.distinct_count, 2 * n, 4, ambiguous=r4.ambiguous)
        yield check("lenz", "d=4 lower bound", ">=", _lower("A_d", 2 * n, d=4), r4.distinct_count, 2 * n, 4)
        r6 = census(gen_lenz(6, n), "numeric")
        yield check("lenz", "d=6 third polygon adds", "<=", 1, r6.distinct_count - r4.distinct_count,
                    3 * n, 6, ambiguous=r4.ambiguous or r6.ambiguous)
    for d in range(2, 9):
        pts = gen_simplex(d, d + 1)
        r = census(pts, "exact")
        yield check("lenz", "simplex", "=", 1, r.distinct_count, d + 1, d)
        f = census(to_floats(pts), "numeric")
        yield check("lenz", "simplex exact=numeric", "=", r.distinct_count, f.distinct_count, d + 1, d,
                    ambiguous=f.ambiguous)


PERTURB_GRID = [(n, k) for n in (12, 24, 48) for k in (1, 2, 4)]
PERTURB_SEED = 1


def suite_perturb(seed: int = PERTURB_SEED) -> Iterator[VerifyRow]:
    for n, k in PERTURB_GRID:
        up_c = 2 * n * k - k * k + n - 2 * k - 2
        up_l = (n - k - 2) + (k * k - k) // 2 + (n - k - 1) * k + 2 * (n - 1)
        for adv in (False, True):
            mode = "adversarial" if adv else "random"
            c = census(gen_perturbed_circle(n, k, seed, adv))
            yield check("perturb", f"circle {mode} lower bound", ">=", _lower("A", n),
                        c.distinct_count, n, 2, k)
            yield check("perturb", f"circle {mode} seed={seed}", "<=", up_c, c.distinct_count, n, 2, k)
            if adv:
                yield check("perturb", f"circle {mode} seed={seed}", ">=", (n - k - 2) * k,
                            c.distinct_count, n, 2, k)
            l = census(gen_perturbed_line(n, k, seed, adv), "numeric")
            yield check("perturb", f"line {mode} lower bound", ">=", _lower("A", n),
                        l.distinct_count, n, 2, k)
            yield check("perturb", f"line {mode} seed={seed}", "<=", up_l, l.distinct_count, n, 2, k,
                        ambiguous=l.ambiguous)
            if adv:
                yield check("perturb", f"line {mode} seed={seed}", ">=", k * (n - k) + comb(k, 2),
                            l.distinct_count, n, 2, k, ambiguous=l.ambiguous)


BIPARTITE_CASES = [(1, 5), (3, 5), (4, 4), (5, 9)]
KPARTITE_CASES = [(4, 2, 2), (6, 3, 3)]


def suite_partite() -> Iterator[VerifyRow]:
    for m, n2 in BIPARTITE_CASES:
        spec = GenSpec("projectedPolygon", m + n2)
        labels = gen_partite_assignment(spec, (n2, m))
        r = census_partite(gen_projected_polygon(m + n2), labels, "numeric")
        yield check("partite", f"bipartite sizes=({m},{n2})", "=", m, r.distinct_count, m + n2,
                    ambiguous=r.ambiguous)
    for sizes in KPARTITE_CASES:
        n = sum(sizes)
        labels = gen_partite_assignment(GenSpec("projectedPolygon", n), sizes)
        r = census_partite(gen_projected_polygon(n), labels, "numeric")
        s = n - sizes[0]
        yield check("partite", f"kPartite sizes={sizes}", "=", 2 * s - 2, r.distinct_count, n,
                    k=len(sizes), ambiguous=r.ambiguous)
        yield check("partite", f"kPartite sizes={sizes} catalog upper", "<=",
                    bounds_eval("kPartite", sizes=sizes)[1], r.distinct_count, n, k=len(sizes),
                    ambiguous=r.ambiguous)
    for sizes in [(4, 3, 2), (5, 5, 3), (3, 3, 3, 3)]:
        n = sum(sizes)
        labels = gen_partite_assignment(GenSpec("ngon", n), sizes)
        r = census_partite(gen_ngon(n), labels)
        yield check("partite", f"kPartite ngon sizes={sizes}", "<=",
                    bounds_eval("kPartite", sizes=sizes, no3l=True)[1], r.distinct_count, n, k=len(sizes))


def random_general_set(n: int, seed: int, bound: int = 6, den: int = 2) -> list[PointR]:
    """Random rational planar set grown point by point while staying in general position."""
    rng = np.random.default_rng(seed)
    pts: list[PointR] = []
    while len(pts) < n:
        x = Fraction(int(rng.integers(-bound * den, bound * den + 1)), den)
        y = Fraction(int(rng.integers(-bound * den, bound * den + 1)), den)
        cand = pts + [PointR(len(pts), (x, y))]
        if any(p.coords == (x, y) for p in pts):
            continue
        if len(cand) < 3 or general_position(cand).ok:
            pts = cand
    return pts


QSCAN_SETS = 100


def suite_subset(qscan_sets: int = QSCAN_SETS) -> Iterator[VerifyRow]:
    for i in range(qscan_sets):
        n = 6 + i % 5
        pts = random_general_set(n, i)
        rep = q_scan(pts)
        got = (rep.q3, rep.q4_cases, rep.q5_cases, rep.q6)
        want = q_scan_naive(pts)
        yield check("subset", f"qscan=oracle seed={i}", "=", _fmt_q(want), _fmt_q(got), n)
    for n in range(6, 15):
        res = subset_exact(gen_ngon(n))
        yield check("subset", "exact ngon", "<=", icbrt(2 * (n - 2)), res.size, n)
        yield check("subset", "exact ngon verified", "=", True, res.verified, n)
    for d, trials in ((5, 50), (6, 50)):
        pts, _ = gen_hypercube_projection(d, seed=0)
        res = subset_randomized(pts, C=1.0, trials=trials, seed=0)
        yield check("subset", f"randomized hypercube seed=0 trials={trials} size={res.size}", "=", True,
                    res.verified, len(pts), d)


def _fmt_q(q) -> str:
    q3, c4, c5, q6 = q
    return f"q3={q3} q4={list(c4)} q5={list(c5)} q6={q6}"


def suite_formulas() -> Iterator[VerifyRow]:
    for d in (2, 3, 4):
        w = brute_force_class_count(d)
        yield check("formulas", "class count", "=", w.formula_value, w.brute_force_value, 2**d, d)
    for d, want in ((2, 2), (3, 22), (4, 180)):
        yield check("formulas", "tri_class_count", "=", want, tri_class_count(d), 2**d, d)
    for k, want in ((1, 0), (2, 4), (3, 32)):
        yield check("formulas", "a_k", "=", want, a_k(k), k=k)
    for d, k, want in ((2, 2, 4), (2, 1, 0), (3, 3, 32)):
        yield check("formulas", "t_k", "=", want, t_k(d, k), d=d, k=k)
    yield check("formulas", "A bounds", "=", "(5/3, 8)", _pair(bounds_eval("A", 10)), 10)
    yield check("formulas", "A_d upper", "=", 8, bounds_eval("A_d", 20, 8)[1], 20, 8)
    yield check("formulas", "kPartite upper", "=", 6, bounds_eval("kPartite", sizes=(4, 2, 2))[1], 8, k=3)


def _pair(b) -> str:
    return f"({b[0]}, {b[1]})"


SUITE_FUNCS: dict[str, Callable[[], Iterator[VerifyRow]]] = {
    "polygons": suite_polygons,
    "projection": suite_projection,
    "hypercube": suite_hypercube,
    "lenz": suite_lenz,
    "perturb": suite_perturb,
    "partite": suite_partite,
    "subset": suite_subset,
    "formulas": suite_formulas,
}


def run_suites(names=("all",)) -> list[VerifyRow]:
    if "all" in names:
        names = SUITES
    rows = []
    for name in names:
        if name not in SUITE_FUNCS:
            raise ValueError(f"unknown suite {name!r}")
        rows.extend(SUITE_FUNCS[name]())
    return rows


def rows_to_csv(rows: list[VerifyRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HEADER)
    for r in rows:
        w.writerow([getattr(r, h) for h in HEADER])
    return buf.getvalue()
