"""Point configurations: polygons, projections, perturbations, Lenz, simplices."""
from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .census import ArcPoint, PartiteSpec, PointF
from .exact import PointR, general_position

KINDS = (
    "ngon", "ngonCenter", "projectedPolygon", "fan", "perturbedCircle",
    "perturbedLine", "hypercubeProjection", "lenz", "simplex",
)
ARC_DENOMINATOR = 2**31


class GenerationError(RuntimeError):
    """A randomized construction ran out of its resample budget."""


@dataclass(frozen=True)
class GenSpec:
    kind: str
    n: int = 0
    d: int = 2
    k: int = 0
    seed: int = 0
    adversarial: bool = False
    plane_bound: int = 997
    resample_budget: int = 100
    alpha: tuple[int, int] = (1, 8)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}; expected one of {', '.join(KINDS)}")
        if self.k < 0:
            raise ValueError("k must be >= 0")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["alpha"] = list(self.alpha)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "GenSpec":
        d = dict(d)
        if "alpha" in d:
            d["alpha"] = tuple(d["alpha"])
        return cls(**d)


@dataclass(frozen=True)
class PlaneCertificate:
    basis: tuple[tuple[int, ...], tuple[int, ...]]
    gram: tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]
    attempts: int

    def to_dict(self) -> dict:
        return {
            "basis": [list(b) for b in self.basis],
            "gram": [[str(x) for x in row] for row in self.gram],
            "attempts": self.attempts,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PlaneCertificate":
        return cls(
            basis=tuple(tuple(int(x) for x in b) for b in d["basis"]),
            gram=tuple(tuple(Fraction(x) for x in row) for row in d["gram"]),
            attempts=int(d["attempts"]),
        )


def _need_n(n: int, lo: int, what: str) -> None:
    if n < lo:
        raise ValueError(f"{what} needs n >= {lo}, got {n}")


def gen_ngon(n: int) -> list[ArcPoint]:
    _need_n(n, 3, "ngon")
    return [ArcPoint(i, Fraction(i, n)) for i in range(n)]


def _circle(n: int) -> list[tuple[float, float]]:
    return [(math.cos(2 * math.pi * i / n), math.sin(2 * math.pi * i / n)) for i in range(n)]


def gen_ngon_center(n: int) -> list[PointF]:
    """Regular n-gon on the unit circle plus its center (id n)."""
    _need_n(n, 3, "ngonCenter")
    pts = [PointF(i, c) for i, c in enumerate(_circle(n))]
    return pts + [PointF(n, (0.0, 0.0))]


def gen_projected_polygon(n: int) -> list[PointF]:
    """One vertex of a regular n-gon plus the other n-1 projected through it onto a line.

    The apex is id 0; line points follow left to right as ids 1..n-1. For even
    n the line is perpendicular to the diameter at the opposite vertex; for odd
    n it passes through the two neighbours of the apex.
    """
    _need_n(n, 4, "projectedPolygon")
    apex = (0.0, 1.0)
    c = -1.0 if n % 2 == 0 else math.cos(2 * math.pi / n)
    xs = []
    for i in range(1, n):
        a = 2 * math.pi * i / n
        vx, vy = math.sin(a), math.cos(a)
        xs.append(vx * (1 - c) / (1 - vy))
    xs.sort()
    return [PointF(0, apex)] + [PointF(i + 1, (x, c)) for i, x in enumerate(xs)]


def gen_fan(n: int, alpha_num: int, alpha_den: int, offset: float | None = None) -> list[PointF]:
    """Apex plus n-1 points on a line, consecutive apex angles all alpha*pi.

    Rays are laid out symmetrically about the perpendicular from the apex
    unless ``offset`` (radians, angle of the leftmost ray from the
    perpendicular) is given.
    """
    _need_n(n, 3, "fan")
    if alpha_den <= 0 or alpha_num <= 0:
        raise ValueError("alpha must be a positive fraction of pi")
    if Fraction(alpha_num, alpha_den) >= Fraction(1, n - 1):
        raise ValueError(f"alpha = {alpha_num}/{alpha_den} pi must be < pi/{n - 1}")
    alpha = math.pi * alpha_num / alpha_den
    start = -(n - 2) / 2 * alpha if offset is None else offset
    if not (-math.pi / 2 < start and start + (n - 2) * alpha < math.pi / 2):
        raise ValueError("rays do not all meet the line")
    pts = [PointF(0, (0.0, 1.0))]
    for j in range(n - 1):
        pts.append(PointF(j + 1, (math.tan(start + j * alpha), 0.0)))
    return pts


def _rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def _arcs(ts) -> set[Fraction]:
    out = set()
    for a, b in itertools.combinations(ts, 2):
        f = (b - a) % 1
        out.update((f, 1 - f))
    return out


def gen_perturbed_circle(n: int, k: int, seed: int = 0, adversarial: bool = False,
                         resample_budget: int = 100) -> list[ArcPoint]:
    """Regular (n-k)-gon plus k more points on the same circle.

    Random mode draws positions with denominator 2**31. Adversarial mode draws
    them from the last polygon gap and keeps a position only if every arc it
    makes with earlier points is new.
    """
    if not 0 <= k <= n - 3:
        raise ValueError(f"need 0 <= k <= n - 3, got n={n}, k={k}")
    m = n - k
    ts = [Fraction(i, m) for i in range(m)]
    rng = _rng(seed)
    lo = Fraction(m - 1, m)
    for _ in range(k):
        arcs = _arcs(ts)
        for _attempt in range(resample_budget):
            if adversarial:
                width = (1 - lo) * ARC_DENOMINATOR
                t = lo + Fraction(int(rng.integers(1, int(width))), ARC_DENOMINATOR)
            else:
                t = Fraction(int(rng.integers(0, ARC_DENOMINATOR)), ARC_DENOMINATOR)
            if t in ts:
                continue
            if adversarial:
                new = [(t - s) % 1 for s in ts]
                new += [1 - f for f in new]
                if len(set(new)) != len(new) or arcs.intersection(new):
                    continue
            ts.append(t)
            break
        else:
            raise GenerationError(f"no admissible circle position after {resample_budget} draws")
    return [ArcPoint(i, t) for i, t in enumerate(ts)]


def _apex_cos(apex, y: float, a: float, b: float) -> float:
    # cosine of the angle at the apex between (a, y) and (b, y)
    ua = (a - apex[0], y - apex[1])
    ub = (b - apex[0], y - apex[1])
    return (ua[0] * ub[0] + ua[1] * ub[1]) / (math.hypot(*ua) * math.hypot(*ub))


def gen_perturbed_line(n: int, k: int, seed: int = 0, adversarial: bool = False,
                       resample_budget: int = 100, margin: float = 1e-6) -> list[PointF]:
    """Projected polygon on n-k points plus k extra points on its line.

    Random mode places the extras uniformly inside the core's span. Adversarial
    mode places them right of the rightmost point so that every apex angle they
    form differs (in cosine, by at least ``margin``) from all earlier apex angles.
    """
    if not 0 <= k <= n - 4:
        raise ValueError(f"need 0 <= k <= n - 4, got n={n}, k={k}")
    core = gen_projected_polygon(n - k)
    apex = core[0].coords
    y = core[1].coords[1]
    xs = [p.coords[0] for p in core[1:]]
    span = max(xs) - min(xs)
    rng = _rng(seed)

    for _ in range(k):
        existing = np.sort(np.array([_apex_cos(apex, y, a, b) for a, b in itertools.combinations(xs, 2)]))
        for _attempt in range(resample_budget):
            if adversarial:
                x = max(xs) + float(rng.uniform(0, span))
            else:
                x = min(xs) + float(rng.uniform(0, span))
            if min(abs(x - s) for s in xs) < 1e-9 * span:
                continue
            if adversarial:
                new = np.sort(np.array([_apex_cos(apex, y, x, s) for s in xs]))
                if new.size > 1 and np.diff(new).min() < margin:
                    continue
                pos = np.searchsorted(existing, new)
                near = np.minimum(
                    np.abs(existing[np.clip(pos, 0, existing.size - 1)] - new),
                    np.abs(existing[np.clip(pos - 1, 0, existing.size - 1)] - new),
                )
                if near.min() < margin:
                    continue
            xs.append(x)
            break
        else:
            raise GenerationError(f"no admissible line position after {resample_budget} draws")
    extra = [PointF(len(core) + i, (x, y)) for i, x in enumerate(xs[len(core) - 1:])]
    return core + extra


def cube_vertices(d: int, n: int | None = None) -> list[tuple[int, ...]]:
    verts = list(itertools.product((0, 1), repeat=d))
    return verts if n is None else verts[:n]


def projection_matrix(basis: np.ndarray) -> list[list[Fraction]]:
    """Exact B (B^T B)^-1 B^T for an integer d x 2 basis."""
    b = [[int(x) for x in row] for row in basis]
    g00 = sum(r[0] * r[0] for r in b)
    g01 = sum(r[0] * r[1] for r in b)
    g11 = sum(r[1] * r[1] for r in b)
    det = g00 * g11 - g01 * g01
    if det == 0:
        raise ZeroDivisionError("basis has rank < 2")
    inv = ((g11, -g01), (-g01, g00))
    out = []
    for ri in b:
        c = (ri[0] * inv[0][0] + ri[1] * inv[1][0], ri[0] * inv[0][1] + ri[1] * inv[1][1])
        out.append([Fraction(c[0] * rj[0] + c[1] * rj[1], det) for rj in b])
    return out


def project(pmat: list[list[Fraction]], v) -> tuple[Fraction, ...]:
    return tuple(sum((row[j] * v[j] for j in range(len(v)) if v[j]), Fraction(0)) for row in pmat)


def gen_hypercube_projection(d: int, n: int | None = None, seed: int = 0, plane_bound: int = 997,
                             resample_budget: int = 100) -> tuple[list[PointR], PlaneCertificate]:
    """First n cube vertices projected orthogonally onto a random integer plane.

    The emitted points are the d-dimensional projections, exact rationals. A
    plane is kept only when the projection is injective with no three points
    collinear and no four concyclic.
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    n = 2**d if n is None else n
    if not 3 <= n <= 2**d:
        raise ValueError(f"need 3 <= n <= 2**d, got n={n}, d={d}")
    rng = _rng(seed)
    verts = cube_vertices(d, n)
    for attempt in range(1, resample_budget + 1):
        basis = rng.integers(-plane_bound, plane_bound + 1, size=(d, 2))
        try:
            pmat = projection_matrix(basis)
        except ZeroDivisionError:
            continue
        coords = [project(pmat, v) for v in verts]
        if len(set(coords)) != n:
            continue
        pts = [PointR(i, c) for i, c in enumerate(coords)]
        if not general_position(pts).ok:
            continue
        b = [[int(x) for x in row] for row in basis]
        gram = tuple(
            tuple(Fraction(sum(r[i] * r[j] for r in b)) for j in range(2)) for i in range(2)
        )
        cert = PlaneCertificate(
            basis=(tuple(r[0] for r in b), tuple(r[1] for r in b)), gram=gram, attempts=attempt
        )
        return pts, cert
    raise GenerationError(f"no generic plane found in {resample_budget} attempts")


def verify_certificate(pts: list[PointR], cert: PlaneCertificate, d: int) -> list[str]:
    """Recheck a hypercube projection; returns a list of failures (empty if sound)."""
    problems = []
    basis = np.array(cert.basis, dtype=object).T
    b = [[int(x) for x in row] for row in basis]
    gram = tuple(tuple(Fraction(sum(r[i] * r[j] for r in b)) for j in range(2)) for i in range(2))
    if gram != cert.gram:
        problems.append("gram matrix does not match basis")
    try:
        pmat = projection_matrix(basis)
    except ZeroDivisionError:
        return problems + ["basis has rank < 2"]
    verts = cube_vertices(d, len(pts))
    for p, v in zip(sorted(pts, key=lambda p: p.id), verts):
        if p.coords != project(pmat, v):
            problems.append(f"point {p.id} is not the projection of vertex {v}")
            break
    if len({p.coords for p in pts}) != len(pts):
        problems.append("projection is not injective")
    elif not general_position(pts).ok:
        problems.append("projected points are not in general position")
    return problems


def gen_lenz(d: int, n: int) -> list[PointF]:
    """floor(d/2) unit regular n-gons, polygon j in coordinates (2j, 2j+1)."""
    if d < 4:
        raise ValueError("lenz needs d >= 4")
    _need_n(n, 3, "lenz")
    pts = []
    for j in range(d // 2):
        for x, y in _circle(n):
            c = [0.0] * d
            c[2 * j], c[2 * j + 1] = x, y
            pts.append(PointF(len(pts), tuple(c)))
    return pts


def gen_simplex(d: int, n: int) -> list[PointR]:
    """First n standard basis vectors of R^(d+1)."""
    if not 3 <= n <= d + 1:
        raise ValueError(f"need 3 <= n <= d + 1, got n={n}, d={d}")
    return [PointR(i, tuple(int(i == j) for j in range(d + 1))) for i in range(n)]


def gen_partite_assignment(base: GenSpec, sizes) -> PartiteSpec:
    """Class labels for the partite constructions.

    projectedPolygon: the apex joins class 0, which must be a largest class;
    the last class takes the leftmost block of line points, the one before it
    the next block, and class 0 the rightmost rest. ngon: contiguous arcs in
    id order, class 0 first. Two sizes give bipartite mode, three or more
    k-partite.
    """
    sizes = [int(s) for s in sizes]
    if len(sizes) < 2 or any(s < 1 for s in sizes):
        raise ValueError("need at least two positive class sizes")
    total = sum(sizes)
    if base.n != total:
        raise ValueError(f"sizes sum to {total} but the base has {base.n} points")
    mode = "bipartite" if len(sizes) == 2 else "kPartite"
    labels: dict[int, int] = {}
    if base.kind == "projectedPolygon":
        if sizes[0] != max(sizes):
            raise ValueError("the apex class (first size) must be a largest class")
        labels[0] = 0
        line_id = 1
        for cls in range(len(sizes) - 1, 0, -1):
            for _ in range(sizes[cls]):
                labels[line_id] = cls
                line_id += 1
        while line_id < total:
            labels[line_id] = 0
            line_id += 1
    elif base.kind == "ngon":
        pid = 0
        for cls, s in enumerate(sizes):
            for _ in range(s):
                labels[pid] = cls
                pid += 1
    else:
        raise ValueError(f"no partite construction for kind {base.kind!r}")
    return PartiteSpec(labels, mode)


@dataclass
class Generated:
    points: list
    certificate: PlaneCertificate | None = None
    spec: GenSpec | None = None
    labels: dict[int, int] = field(default_factory=dict)


def generate(spec: GenSpec) -> Generated:
    k = spec.kind
    if k == "ngon":
        pts = gen_ngon(spec.n)
    elif k == "ngonCenter":
        pts = gen_ngon_center(spec.n)
    elif k == "projectedPolygon":
        pts = gen_projected_polygon(spec.n)
    elif k == "fan":
        pts = gen_fan(spec.n, *spec.alpha)
    elif k == "perturbedCircle":
        pts = gen_perturbed_circle(spec.n, spec.k, spec.seed, spec.adversarial, spec.resample_budget)
    elif k == "perturbedLine":
        pts = gen_perturbed_line(spec.n, spec.k, spec.seed, spec.adversarial, spec.resample_budget)
    elif k == "hypercubeProjection":
        pts, cert = gen_hypercube_projection(
            spec.d, spec.n or None, spec.seed, spec.plane_bound, spec.resample_budget
        )
        return Generated(pts, cert, spec)
    elif k == "lenz":
        pts = gen_lenz(spec.d, spec.n)
    else:
        pts = gen_simplex(spec.d, spec.n)
    return Generated(pts, None, spec)
