"""Exact rational points, predicates and angle keys.

Angles in (0, pi) are identified by ``(sign(<u,v>), <u,v>^2 / (|u|^2 |v|^2))``.
Cosine is injective on (0, pi) and the squared cosine of rational vectors is
rational, so equality of angles never needs irrational arithmetic.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, NamedTuple, Sequence

Rational = Fraction


def as_rational(value) -> Fraction:
    """Parse ints, Fractions and ``"num/den"`` strings. Floats are refused."""
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass a Fraction or 'num/den' string")
    return Fraction(value)


@dataclass(frozen=True)
class PointR:
    id: int
    coords: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(as_rational(c) for c in self.coords))

    @property
    def dim(self) -> int:
        return len(self.coords)


class AngleKeyExact(NamedTuple):
    sign: int
    cos_sq: Fraction


@dataclass(frozen=True)
class GeneralPositionReport:
    no3_collinear: bool
    no4_concyclic: bool
    witnesses: tuple[tuple[int, ...], ...] = ()

    @property
    def ok(self) -> bool:
        return self.no3_collinear and self.no4_concyclic


def points_from(coords: Iterable[Sequence]) -> list[PointR]:
    return [PointR(i, tuple(c)) for i, c in enumerate(coords)]


def _sub(a: Sequence, b: Sequence) -> list:
    return [x - y for x, y in zip(a, b)]


def _dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def _check_dims(*pts: PointR) -> None:
    d = pts[0].dim
    if any(p.dim != d for p in pts):
        raise ValueError("dimension mismatch: " + ", ".join(str(p.dim) for p in pts))


def _check_distinct(*pts: PointR) -> None:
    seen = set()
    for p in pts:
        if p.coords in seen:
            raise ValueError(f"coincident points among inputs (point id {p.id})")
        seen.add(p.coords)


def key_from_vectors(u: Sequence, v: Sequence) -> AngleKeyExact | None:
    """Key of the angle between two nonzero vectors; ``None`` for 0 or pi."""
    uv = _dot(u, v)
    uu = _dot(u, u)
    vv = _dot(v, v)
    num = uv * uv
    den = uu * vv
    if num == den:
        return None
    sign = (uv > 0) - (uv < 0)
    return AngleKeyExact(sign, Fraction(num, den))


def angle_key_exact(p: PointR, q: PointR, r: PointR) -> AngleKeyExact | None:
    """Key of the angle at vertex ``q`` between ``p`` and ``r``."""
    _check_dims(p, q, r)
    _check_distinct(p, q, r)
    return key_from_vectors(_sub(p.coords, q.coords), _sub(r.coords, q.coords))


def _collinear_vecs(u: Sequence, v: Sequence) -> bool:
    d = len(u)
    for i in range(d):
        for j in range(i + 1, d):
            if u[i] * v[j] != u[j] * v[i]:
                return False
    return True


def collinear(a: PointR, b: PointR, c: PointR) -> bool:
    _check_dims(a, b, c)
    return _collinear_vecs(_sub(b.coords, a.coords), _sub(c.coords, a.coords))


def rank(rows: Sequence[Sequence]) -> int:
    """Rank of a rational matrix by fraction-exact Gaussian elimination."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rk = 0
    for col in range(ncols):
        piv = next((i for i in range(rk, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[rk], m[piv] = m[piv], m[rk]
        for i in range(rk + 1, len(m)):
            if m[i][col]:
                f = m[i][col] / m[rk][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[rk])]
        rk += 1
        if rk == len(m):
            break
    return rk


def det(m: Sequence[Sequence]):
    """Determinant by Bareiss elimination; exact for ints and Fractions."""
    a = [list(r) for r in m]
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                # Bareiss division is exact; keep ints as ints
                a[i][j] = num // prev if isinstance(num, int) and isinstance(prev, int) else num / prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _plane_coords(vs: Sequence[Sequence]) -> list[tuple]:
    """Linear in-plane coordinates of vectors spanning at most a 2-flat.

    Uses the unnormalized basis ``e1 = vs[0]``, ``e2 = vs[1] - proj_e1(vs[1])``
    (falling back to the next independent vector) and returns ``(<x,e1>, <x,e2>)``.
    """
    e1 = next((v for v in vs if any(v)), None)
    if e1 is None:
        return [(0, 0) for _ in vs]
    ee = _dot(e1, e1)
    e2 = None
    for v in vs:
        w = [x - Fraction(_dot(v, e1), ee) * y for x, y in zip(v, e1)]
        if any(w):
            e2 = w
            break
    if e2 is None:
        e2 = [0] * len(e1)
    return [(_dot(v, e1), _dot(v, e2)) for v in vs]


def concyclic(a: PointR, b: PointR, c: PointR, d: PointR) -> bool:
    """True iff the four coplanar points lie on one circle."""
    _check_dims(a, b, c, d)
    _check_distinct(a, b, c, d)
    diffs = [_sub(x.coords, d.coords) for x in (a, b, c)]
    if rank(diffs) > 2:
        raise ValueError("points are not coplanar")
    for x, y, z in itertools.combinations((a, b, c, d), 3):
        if collinear(x, y, z):
            raise ValueError(f"three collinear points among inputs: {x.id}, {y.id}, {z.id}")
    uv = _plane_coords(diffs)
    rows = [[_dot(v, v), u[0], u[1], 1] for v, u in zip(diffs, uv)]
    rows.append([0, 0, 0, 1])
    return det(rows) == 0


def integer_coords(points: Sequence[PointR]) -> list[tuple[int, ...]]:
    """Coordinates scaled by the common denominator (a similarity, keys unchanged)."""
    den = 1
    for p in points:
        for c in p.coords:
            den = lcm(den, c.denominator)
    return [tuple(int(c * den) for c in p.coords) for p in points]


def _canonical(vec: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for x in vec:
        g = gcd(g, x)
    if g == 0:
        return tuple(vec)
    first = next(x for x in vec if x)
    if first < 0:
        g = -g
    return tuple(x // g for x in vec)


def general_position(ps: Sequence[PointR]) -> GeneralPositionReport:
    """Exhaustive exact check for collinear triples and concyclic quadruples.

    Witness tuples are id-sorted; collinear triples come first, then concyclic
    quadruples, each group in lexicographic order.
    """
    ps = sorted(ps, key=lambda p: p.id)
    if len(ps) < 3:
        raise ValueError("general_position needs at least 3 points")
    _check_dims(*ps)
    _check_distinct(*ps)
    ids = [p.id for p in ps]
    xs = integer_coords(ps)
    n = len(ps)

    bad3 = []
    coll = set()
    for i, j, k in itertools.combinations(range(n), 3):
        if _collinear_vecs(_sub(xs[j], xs[i]), _sub(xs[k], xs[i])):
            bad3.append((ids[i], ids[j], ids[k]))
            coll.add((i, j, k))

    bad4 = []
    diffs = [_sub(x, xs[0]) for x in xs]
    if n >= 4 and rank(diffs) <= 2:
        bad4 = _concyclic_planar(ids, diffs, coll)
    elif n >= 4:
        for quad in itertools.combinations(range(n), 4):
            if any(t in coll for t in itertools.combinations(quad, 3)):
                continue
            qs = [ps[i] for i in quad]
            if rank([_sub(xs[i], xs[quad[3]]) for i in quad[:3]]) > 2:
                continue
            if concyclic(*qs):
                bad4.append(tuple(ids[i] for i in quad))
    return GeneralPositionReport(
        no3_collinear=not bad3,
        no4_concyclic=not bad4,
        witnesses=tuple(bad3) + tuple(sorted(bad4)),
    )


def _concyclic_planar(ids, diffs, coll) -> list[tuple[int, ...]]:
    # Lift x -> (|x|^2, u, v); four points are concyclic iff their lifts are
    # coplanar, so grouping triples by their lifted plane finds every circle.
    uv = _plane_coords(diffs)
    den = 1
    for u, v in uv:
        den = lcm(den, Fraction(u).denominator, Fraction(v).denominator)
    lifted = [(_dot(x, x), int(u * den), int(v * den)) for x, (u, v) in zip(diffs, uv)]
    circles: dict[tuple, set[int]] = {}
    for i, j, k in itertools.combinations(range(len(ids)), 3):
        if (i, j, k) in coll:
            continue
        a, b, c = lifted[i], lifted[j], lifted[k]
        u = _sub(b, a)
        v = _sub(c, a)
        nrm = (
            u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0],
        )
        plane = _canonical(nrm + (-_dot(nrm, a),))
        circles.setdefault(plane, set()).update((i, j, k))
    out = set()
    for members in circles.values():
        if len(members) >= 4:
            for quad in itertools.combinations(sorted(members), 4):
                out.add(tuple(ids[i] for i in quad))
    return sorted(out)
