"""Repeated-angle configurations and repeat-free subsets."""
from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .census import AngleTable, PointF, angle_table, census_numeric
from .generators import GenSpec, gen_ngon_center, gen_projected_polygon


class AmbiguousCensusError(ValueError):
    """A float census could not separate its angle clusters reliably."""


@dataclass
class QReport:
    q3: int
    q4: int
    q4_cases: list[int]
    q5: int
    q5_cases: list[int]
    q6: int
    # unordered pairs of equal-key angle instances, keyed by shared-point count
    pairs_by_overlap: dict[int, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pairs_by_overlap"] = {str(k): v for k, v in sorted(self.pairs_by_overlap.items())}
        return d


@dataclass
class SubsetResult:
    subset: list[int]
    size: int
    method: str
    verified: bool
    trials: int = 0
    seed: int | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def _table(ps, backend, tol) -> AngleTable:
    table = angle_table(ps, backend, tol=tol)
    if table.ambiguous:
        raise AmbiguousCensusError(
            f"float census is ambiguous (min gap {table.min_inter_cluster_gap:.3g} < 100 * tol)"
        )
    return table


class _Keys:
    """Symmetric lookup ``K(a, vertex, b)``; degenerate angles never compare equal."""

    def __init__(self, table: AngleTable):
        self.keys = table.keys

    def __call__(self, a, q, b):
        return self.keys.get((q, a, b) if a < b else (q, b, a))

    def eq(self, x, y) -> bool:
        return x is not None and x == y


def _q4_tuples(a, b):
    qa, a1, a2 = a
    qb, b1, b2 = b
    ea, eb = {a1, a2}, {b1, b2}
    if qa == qb:
        (e,) = ea & eb
        x, y = (ea - {e}).pop(), (eb - {e}).pop()
        return [(e, qa, x, y), (e, qa, y, x)]
    if ea == eb:
        return [(a1, qa, a2, qb), (a2, qa, a1, qb), (a1, qb, a2, qa), (a2, qb, a1, qa)]
    if qa in eb and qb in ea:
        p = (ea - {qb}).pop()
        s = (eb - {qa}).pop()
        return [(p, qa, qb, s), (s, qb, qa, p)]
    if qb in ea:
        a, b = b, a
        qa, qb, ea, eb = qb, qa, eb, ea
    # qa is an endpoint of b and the two angles share one more endpoint
    (s,) = ea & eb
    p = (ea - {s}).pop()
    return [(p, qa, qb, s)]


def _q5_tuples(a, b):
    qa, a1, a2 = a
    qb, b1, b2 = b
    ea, eb = {a1, a2}, {b1, b2}
    if qa == qb:
        out = []
        for (p, r), (s, t) in itertools.product(((a1, a2), (a2, a1)), ((b1, b2), (b2, b1))):
            out += [(p, qa, r, s, t), (s, qa, t, p, r)]
        return out
    if qb in ea:
        a, b = b, a
        qa, qb, ea, eb = qb, qa, eb, ea
        a1, a2 = a[1], a[2]
    if qa in eb:
        t = (eb - {qa}).pop()
        return [(a1, qa, a2, qb, t), (a2, qa, a1, qb, t)]
    (r,) = ea & eb
    p = (ea - {r}).pop()
    t = (eb - {r}).pop()
    return [(p, qa, r, qb, t), (t, qb, r, qa, p)]


def q4_case(K: _Keys, p, q, r, s) -> int:
    """First matching case (1-4) of a Q4 tuple, 0 if none."""
    k = K(p, q, r)
    if K.eq(k, K(p, q, s)):
        return 1
    if K.eq(k, K(r, s, p)):
        return 2
    if K.eq(k, K(q, r, s)):
        return 3
    if K.eq(K(p, q, s), K(q, r, s)):
        return 4
    return 0


def q5_case(K: _Keys, p, q, r, s, t) -> int:
    k = K(p, q, r)
    if K.eq(k, K(s, q, t)):
        return 1
    if K.eq(k, K(q, s, t)):
        return 2
    if K.eq(k, K(r, s, t)):
        return 3
    return 0


def q_scan(ps: Sequence, backend: str | None = None, tol: float = 1e-9) -> QReport:
    """Count ordered Q3..Q6 tuples by bucketing angle instances on their key.

    Each pair of equal-key instances is classified by how many points the two
    angles share (3, 2, 1, 0) and by the roles of the shared points, and emits
    the ordered tuples it witnesses. Tuples are deduplicated, then assigned to
    the first case whose condition they satisfy.
    """
    table = _table(ps, backend, tol)
    K = _Keys(table)
    buckets = defaultdict(list)
    for inst, key in table.keys.items():
        buckets[key].append(inst)

    q3 = q6 = 0
    q4: set = set()
    q5: set = set()
    pairs = {0: 0, 1: 0, 2: 0, 3: 0}
    for insts in buckets.values():
        for a, b in itertools.combinations(insts, 2):
            shared = len(set(a) & set(b))
            pairs[shared] += 1
            if shared == 3:
                q3 += 2
            elif shared == 2:
                q4.update(_q4_tuples(a, b))
            elif shared == 1:
                q5.update(_q5_tuples(a, b))
            else:
                q6 += 8

    q4_cases = [0] * 4
    for t in q4:
        q4_cases[q4_case(K, *t) - 1] += 1
    q5_cases = [0] * 3
    for t in q5:
        q5_cases[q5_case(K, *t) - 1] += 1
    return QReport(q3, len(q4), q4_cases, len(q5), q5_cases, q6, pairs)


def q_scan_naive(ps: Sequence, backend: str | None = None, tol: float = 1e-9):
    """Reference counts by enumerating every ordered tuple directly.

    Returns ``(q3, q4_cases, q5_cases, q6)``. Cost is O(n^6); meant as an
    oracle for small sets only.
    """
    K = _Keys(_table(ps, backend, tol))
    eq = K.eq
    ids = sorted(p.id for p in ps)
    q3 = sum(1 for p, q, r in itertools.permutations(ids, 3) if eq(K(p, q, r), K(q, r, p)))
    c4 = [0] * 4
    for t in itertools.permutations(ids, 4):
        c = q4_case(K, *t)
        if c:
            c4[c - 1] += 1
    c5 = [0] * 3
    for t in itertools.permutations(ids, 5):
        c = q5_case(K, *t)
        if c:
            c5[c - 1] += 1
    q6 = 0
    for p, q, r, s, t, u in itertools.permutations(ids, 6):
        if eq(K(p, q, r), K(s, t, u)):
            q6 += 1
    return q3, c4, c5, q6


def subset_angle_keys(table: AngleTable, subset: Sequence[int]) -> list:
    keys = []
    for q in subset:
        others = sorted(x for x in subset if x != q)
        for p, r in itertools.combinations(others, 2):
            k = table.keys.get((q, p, r))
            if k is not None:
                keys.append(k)
    return keys


def is_repeat_free(ps: Sequence, subset: Sequence[int], backend: str | None = None,
                   tol: float = 1e-9) -> bool:
    """Recompute the census of the subset alone and check every key occurs once."""
    if len(subset) < 3:
        return True
    chosen = set(subset)
    sub = [p for p in ps if p.id in chosen]
    table = angle_table(sub, backend, tol=tol)
    if table.ambiguous:
        return False
    keys = list(table.keys.values())
    return len(keys) == len(set(keys))


def subset_exact(ps: Sequence, cap: int = 18, backend: str | None = None,
                 tol: float = 1e-9) -> SubsetResult:
    """Maximum repeat-free subset by depth-first search with size pruning.

    Points are tried in id order, include-branch first, so the first maximum
    found is the lexicographically smallest one.
    """
    if len(ps) > cap:
        raise ValueError(f"{len(ps)} points exceeds the exact-search cap of {cap}")
    table = _table(ps, backend, tol)
    K = _Keys(table)
    ids = sorted(p.id for p in ps)
    n = len(ids)
    best: list[int] = []
    chosen: list[int] = []
    used: set = set()

    def new_keys(x):
        fresh = []
        for a, b in itertools.combinations(chosen, 2):
            for k in (K(a, x, b), K(x, a, b), K(x, b, a)):
                if k is None:
                    continue
                if k in used:
                    return None
                fresh.append(k)
        if len(set(fresh)) != len(fresh):
            return None
        return fresh

    def dfs(i):
        nonlocal best
        if len(chosen) > len(best):
            best = list(chosen)
        if i == n or len(chosen) + (n - i) <= len(best):
            return
        x = ids[i]
        fresh = new_keys(x)
        if fresh is not None:
            chosen.append(x)
            used.update(fresh)
            dfs(i + 1)
            used.difference_update(fresh)
            chosen.pop()
        dfs(i + 1)

    dfs(0)
    return SubsetResult(best, len(best), "exact", is_repeat_free(ps, best, backend, tol))


def _conflicts(table: AngleTable, sample: set[int]) -> list[frozenset]:
    buckets = defaultdict(list)
    members = sorted(sample)
    for q in members:
        others = [x for x in members if x != q]
        for p, r in itertools.combinations(others, 2):
            key = table.keys.get((q, p, r))
            if key is not None:
                buckets[key].append((q, p, r))
    out = []
    for insts in buckets.values():
        for a, b in itertools.combinations(insts, 2):
            out.append(frozenset(a) | frozenset(b))
    return out


def greedy_repair(table: AngleTable, sample: set[int]) -> set[int]:
    """Delete the point in the most conflicts until no angle repeats."""
    sample = set(sample)
    conflicts = _conflicts(table, sample)
    while conflicts:
        degree = defaultdict(int)
        for c in conflicts:
            for x in c:
                degree[x] += 1
        worst = min(degree, key=lambda x: (-degree[x], x))
        sample.discard(worst)
        conflicts = [c for c in conflicts if worst not in c]
    return sample


def subset_randomized(ps: Sequence, C: float = 1.0, trials: int = 1, seed: int = 0,
                      backend: str | None = None, tol: float = 1e-9) -> SubsetResult:
    """Random sampling at rate min(1, C n^(-4/5)) followed by greedy conflict deletion.

    Trial ``i`` draws from its own stream seeded by ``(seed, i)``; the largest
    verified subset over all trials is returned (earliest trial on ties).
    """
    table = _table(ps, backend, tol)
    ids = sorted(p.id for p in ps)
    n = len(ids)
    prob = min(1.0, C * n ** (-4 / 5)) if C > 0 else 0.0
    best: list[int] = []
    best_ok = True
    for trial in range(trials):
        rng = np.random.default_rng([seed, trial])
        mask = rng.random(n) < prob
        sample = {x for x, m in zip(ids, mask) if m}
        kept = sorted(greedy_repair(table, sample))
        ok = is_repeat_free(ps, kept, backend, tol)
        if ok and len(kept) > len(best):
            best, best_ok = kept, ok
    return SubsetResult(best, len(best), "randomized", best_ok, trials, seed)


def _special_positions(kind: str, base: list[PointF]) -> list[tuple[float, float]]:
    if kind == "ngon":
        n = len(base)
        return [(0.0, 0.0)] + [
            (math.cos(math.pi * (2 * i + 1) / n), math.sin(math.pi * (2 * i + 1) / n)) for i in range(n)
        ]
    apex = base[0].coords
    y = base[1].coords[1]
    xs = [p.coords[0] for p in base[1:]]
    mids = [((a + b) / 2, y) for a, b in zip(xs, xs[1:])]
    return [(apex[0], 2 * y - apex[1])] + mids


def explore(base: GenSpec, free_count: int, steps: int, seed: int = 0, on_curve: bool = False,
            tol: float = 1e-9) -> tuple[list[PointF], int]:
    """Hill-climb the positions of ``free_count`` extra points to minimise the census.

    Proposals are Gaussian moves (projected back onto the circle or line when
    ``on_curve``) mixed with jumps to structured positions such as the circle
    centre or the apex mirrored in the line. A move is kept when the audited
    count does not increase. This is an experiment driver only.
    """
    if base.kind not in ("ngon", "projectedPolygon"):
        raise ValueError("explore supports ngon and projectedPolygon bases")
    if free_count < 1:
        raise ValueError("free_count must be >= 1")
    if base.kind == "ngon":
        core = gen_ngon_center(base.n)[:-1]
    else:
        core = gen_projected_polygon(base.n)
    rng = np.random.default_rng(seed)
    specials = _special_positions(base.kind, core)
    taken = [p.coords for p in core]

    def snap(xy):
        if not on_curve:
            return xy
        if base.kind == "ngon":
            r = math.hypot(*xy) or 1.0
            return (xy[0] / r, xy[1] / r)
        return (xy[0], core[1].coords[1])

    def fresh(xy, others):
        return all(math.dist(xy, o) > 1e-9 for o in others)

    def random_point():
        if base.kind == "ngon":
            a = rng.uniform(0, 2 * math.pi)
            r = 1.0 if on_curve else rng.uniform(0, 1.5)
            return (r * math.cos(a), r * math.sin(a))
        xs = [p[0] for p in taken[1:]]
        lo, hi = min(xs), max(xs)
        x = rng.uniform(lo, hi)
        y = core[1].coords[1] if on_curve else rng.uniform(-1.0, 2.0)
        return (x, y)

    free = []
    while len(free) < free_count:
        xy = snap(random_point())
        if fresh(xy, taken + free):
            free.append(xy)

    def score(pos):
        pts = core + [PointF(len(core) + i, xy) for i, xy in enumerate(pos)]
        r = census_numeric(pts, tol)
        return (r.distinct_count if not r.ambiguous else math.inf), pts

    cur, cur_pts = score(free)
    best, best_pts = cur, cur_pts
    scale = 0.25
    for step in range(steps):
        i = int(rng.integers(free_count))
        if rng.random() < 0.3:
            xy = specials[int(rng.integers(len(specials)))]
        else:
            xy = (free[i][0] + rng.normal(0, scale), free[i][1] + rng.normal(0, scale))
        xy = snap(xy)
        others = taken + free[:i] + free[i + 1:]
        if not fresh(xy, others):
            continue
        trial = free[:i] + [xy] + free[i + 1:]
        val, pts = score(trial)
        if val <= cur:
            free, cur = trial, val
            if val < best:
                best, best_pts = val, pts
        scale = max(1e-3, scale * 0.995)
    if math.isinf(best):
        best = census_numeric(best_pts, tol).distinct_count
    return best_pts, int(best)
