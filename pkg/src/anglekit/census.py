"""Distinct-angle census over exact, arc-on-circle and float backends."""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

import numpy as np

from .exact import AngleKeyExact, PointR, integer_coords

DEFAULT_TOL = 1e-9
AUDIT_FACTOR = 100


@dataclass(frozen=True)
class ArcPoint:
    """A point on a fixed circle at ``t`` turns, ``0 <= t < 1``."""

    id: int
    t: Fraction

    def __post_init__(self):
        if isinstance(self.t, float):
            raise TypeError("arc positions must be exact")
        t = Fraction(self.t)
        if not 0 <= t < 1:
            raise ValueError(f"arc position {t} outside [0, 1)")
        object.__setattr__(self, "t", t)


@dataclass(frozen=True)
class PointF:
    id: int
    coords: tuple[float, ...]

    def __post_init__(self):
        coords = tuple(float(c) for c in self.coords)
        if not all(math.isfinite(c) for c in coords):
            raise ValueError(f"non-finite coordinates for point {self.id}")
        object.__setattr__(self, "coords", coords)


@dataclass
class CensusReport:
    distinct_count: int
    pinned: dict[int, int]
    backend: str
    tolerance: float | None = None
    min_inter_cluster_gap: float | None = None
    ambiguous: bool = False

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pinned"] = {str(k): v for k, v in sorted(self.pinned.items())}
        return d


@dataclass(frozen=True)
class PartiteSpec:
    class_of: dict[int, int]
    mode: str = "bipartite"

    def __post_init__(self):
        if self.mode not in ("bipartite", "kPartite"):
            raise ValueError(f"unknown partite mode {self.mode!r}")
        k = len(set(self.class_of.values()))
        if self.mode == "bipartite" and k != 2:
            raise ValueError(f"bipartite mode needs exactly 2 classes, got {k}")
        if self.mode == "kPartite" and k < 3:
            raise ValueError(f"kPartite mode needs at least 3 classes, got {k}")

    def admits(self, q: int, p: int, r: int) -> bool:
        """Whether the angle at ``q`` with endpoints ``p``, ``r`` is counted."""
        cq, cp, cr = self.class_of[q], self.class_of[p], self.class_of[r]
        if self.mode == "bipartite":
            return cq != cp and cq != cr
        return cq != cp and cq != cr and cp != cr


@dataclass
class AngleTable:
    """Canonical key for every nondegenerate angle ``(vertex, p, r)`` with ``p < r``.

    Numeric keys are cluster indices, so equal keys mean equal angles in
    every backend.
    """

    keys: dict[tuple[int, int, int], object]
    backend: str
    ids: tuple[int, ...]
    tolerance: float | None = None
    min_inter_cluster_gap: float | None = None
    ambiguous: bool = False
    values: dict = field(default_factory=dict, repr=False)

    def report(self) -> CensusReport:
        pinned: dict[int, set] = {i: set() for i in self.ids}
        for (q, _, _), key in self.keys.items():
            pinned[q].add(key)
        return CensusReport(
            distinct_count=len(set(self.keys.values())),
            pinned={i: len(s) for i, s in pinned.items()},
            backend=self.backend,
            tolerance=self.tolerance,
            min_inter_cluster_gap=self.min_inter_cluster_gap,
            ambiguous=self.ambiguous,
        )


def worker_count(workers: int | None = None) -> int:
    if workers is not None:
        return max(1, workers)
    env = os.environ.get("ANGLEKIT_THREADS")
    return max(1, int(env)) if env else 1


def _check_points(ps: Sequence, kind: type) -> list:
    ps = sorted(ps, key=lambda p: p.id)
    if len(ps) < 3:
        raise ValueError(f"census needs at least 3 points, got {len(ps)}")
    if any(not isinstance(p, kind) for p in ps):
        raise TypeError(f"expected {kind.__name__} points")
    ids = [p.id for p in ps]
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate point ids")
    return ps


# Per-vertex kernels. Each returns [((q, p, r), raw_key), ...] for the given
# vertex indices so work can be split across processes and merged in order.

def _exact_rows(vertices, xs, ids):
    out = []
    n = len(xs)
    for qi in vertices:
        q = xs[qi]
        others = [j for j in range(n) if j != qi]
        vecs = [[a - b for a, b in zip(xs[j], q)] for j in others]
        norms = [sum(x * x for x in v) for v in vecs]
        for a in range(len(others)):
            u, uu = vecs[a], norms[a]
            for b in range(a + 1, len(others)):
                v = vecs[b]
                uv = sum(x * y for x, y in zip(u, v))
                num = uv * uv
                den = uu * norms[b]
                if num == den:
                    continue
                sign = (uv > 0) - (uv < 0)
                out.append(((ids[qi], ids[others[a]], ids[others[b]]),
                            AngleKeyExact(sign, Fraction(num, den))))
    return out


def _arc_rows(vertices, ts, period, ids):
    out = []
    n = len(ts)
    for qi in vertices:
        c = ts[qi]
        for a in range(n):
            if a == qi:
                continue
            for b in range(a + 1, n):
                if b == qi:
                    continue
                ab = (ts[b] - ts[a]) % period
                # the subtended arc is the one from p to r that avoids q
                arc = period - ab if (c - ts[a]) % period < ab else ab
                out.append(((ids[qi], ids[a], ids[b]), Fraction(arc, period)))
    return out


def _numeric_rows(vertices, x, ids, tol):
    out = []
    n = len(x)
    for qi in vertices:
        others = np.array([j for j in range(n) if j != qi])
        u = x[others] - x[qi]
        nrm = np.linalg.norm(u, axis=1)
        cos = (u @ u.T) / np.outer(nrm, nrm)
        ia, ib = np.triu_indices(len(others), k=1)
        vals = cos[ia, ib]
        keep = np.abs(vals) < 1 - tol
        for a, b, v in zip(ia[keep], ib[keep], vals[keep]):
            out.append(((ids[qi], ids[others[a]], ids[others[b]]), float(v)))
    return out


def _run(kernel, args, n: int, workers: int):
    if workers <= 1 or n < 2 * workers:
        return kernel(range(n), *args)
    chunks = [list(range(i, n, workers)) for i in range(workers)]
    rows = []
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for f in [pool.submit(kernel, ch, *args) for ch in chunks]:
            rows.extend(f.result())
    rows.sort(key=lambda kv: kv[0])
    return rows


def cluster_values(values: Iterable[float], tol: float):
    """Single-linkage clustering of sorted values with merge radius ``tol``.

    Returns ``(cluster_of, min_gap)``: a map from each distinct value to its
    cluster index (ascending) and the smallest gap between adjacent clusters.
    """
    vals = np.unique(np.fromiter(values, dtype=float))
    if vals.size == 0:
        return {}, None
    gaps = np.diff(vals)
    breaks = gaps >= tol
    labels = np.concatenate([[0], np.cumsum(breaks)])
    min_gap = float(gaps[breaks].min()) if breaks.any() else None
    return dict(zip(vals.tolist(), labels.tolist())), min_gap


def angle_table(ps: Sequence, backend: str | None = None, tol: float = DEFAULT_TOL,
                workers: int | None = None, partite: PartiteSpec | None = None) -> AngleTable:
    """Key every nondegenerate angle of ``ps`` with the requested backend."""
    if backend is None:
        backend = backend_for(ps)
    workers = worker_count(workers)
    if backend == "exact":
        ps = _check_points(ps, PointR)
        d = ps[0].dim
        if any(p.dim != d for p in ps):
            raise ValueError("dimension mismatch")
        if len({p.coords for p in ps}) != len(ps):
            raise ValueError("coincident points")
        ids = [p.id for p in ps]
        rows = _run(_exact_rows, (integer_coords(ps), ids), len(ps), workers)
    elif backend == "arc":
        ps = _check_points(ps, ArcPoint)
        if len({p.t for p in ps}) != len(ps):
            raise ValueError("duplicate arc positions")
        period = 1
        for p in ps:
            period = lcm(period, p.t.denominator)
        ts = [int(p.t * period) for p in ps]
        ids = [p.id for p in ps]
        rows = _run(_arc_rows, (ts, period, ids), len(ps), workers)
    elif backend == "numeric":
        if tol <= 0:
            raise ValueError("tolerance must be positive")
        ps = _check_points(ps, PointF)
        x = np.array([p.coords for p in ps], dtype=float)
        ids = [p.id for p in ps]
        rows = _run(_numeric_rows, (x, ids, tol), len(ps), workers)
    else:
        raise ValueError(f"unknown backend {backend!r}")

    if partite is not None:
        missing = set(ids) - set(partite.class_of)
        if missing:
            raise ValueError(f"partite labels missing for ids {sorted(missing)}")
        rows = [(k, v) for k, v in rows if partite.admits(*k)]

    if backend != "numeric":
        return AngleTable(dict(rows), backend, tuple(ids))
    cluster_of, gap = cluster_values((v for _, v in rows), tol)
    return AngleTable(
        {k: cluster_of[v] for k, v in rows},
        backend,
        tuple(ids),
        tolerance=tol,
        min_inter_cluster_gap=gap,
        ambiguous=gap is not None and gap < AUDIT_FACTOR * tol,
        values={k: v for k, v in rows},
    )


def backend_for(ps: Sequence) -> str:
    """Most exact backend able to read ``ps`` (arc > exact > numeric)."""
    kinds = {type(p) for p in ps}
    if kinds == {ArcPoint}:
        return "arc"
    if kinds == {PointR}:
        return "exact"
    if kinds == {PointF}:
        return "numeric"
    raise TypeError(f"mixed or unknown point types: {sorted(k.__name__ for k in kinds)}")


def census_exact(ps: Sequence[PointR], workers: int | None = None) -> CensusReport:
    return angle_table(ps, "exact", workers=workers).report()


def census_arc(ps: Sequence[ArcPoint], workers: int | None = None) -> CensusReport:
    return angle_table(ps, "arc", workers=workers).report()


def census_numeric(ps: Sequence[PointF], tol: float = DEFAULT_TOL,
                   workers: int | None = None) -> CensusReport:
    return angle_table(ps, "numeric", tol=tol, workers=workers).report()


def census(ps: Sequence, backend: str | None = None, tol: float = DEFAULT_TOL,
           workers: int | None = None) -> CensusReport:
    return angle_table(ps, backend, tol=tol, workers=workers).report()


def census_partite(ps: Sequence, spec: PartiteSpec, backend: str | None = None,
                   tol: float = DEFAULT_TOL, workers: int | None = None) -> CensusReport:
    """Census restricted to angles allowed by ``spec``.

    Bipartite: the vertex class differs from both endpoint classes.
    k-partite: all three classes differ.
    """
    return angle_table(ps, backend, tol=tol, workers=workers, partite=spec).report()


def pinned_summary(report: CensusReport) -> tuple[int, int]:
    vals = report.pinned.values()
    return max(vals, default=0), sum(vals)


def to_floats(ps: Sequence) -> list[PointF]:
    """Render exact or arc points as float coordinates (arc -> unit circle)."""
    out = []
    for p in ps:
        if isinstance(p, PointF):
            out.append(p)
        elif isinstance(p, PointR):
            out.append(PointF(p.id, tuple(float(c) for c in p.coords)))
        elif isinstance(p, ArcPoint):
            a = 2 * math.pi * float(p.t)
            out.append(PointF(p.id, (math.cos(a), math.sin(a))))
        else:
            raise TypeError(type(p).__name__)
    return out
