"""Closed-form counts and bounds, with a brute-force check of the class count.

All arithmetic is exact (ints and Fractions). Bounds that are irrational
(cube roots) are returned floored, which is lossless for integer quantities.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, comb, floor
from typing import Callable, Sequence


def tri_class_count(d: int) -> int:
    """Number of translation classes of triangles on the vertices of the d-cube."""
    if d < 1:
        raise ValueError("d must be >= 1")
    num = 7**d - 3 ** (d + 1) + 2
    assert num % 12 == 0
    return num // 12


def a_k(k: int) -> int:
    """Unordered triples of distinct binary k-tuples with no coordinate fixed."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return (6**k - 3 * 2**k) // 6


def t_k(d: int, k: int) -> int:
    """Triangles in the d-cube with exactly k unfixed coordinates."""
    if not 1 <= k <= d:
        raise ValueError(f"k={k} outside 1..{d}")
    return comb(d, k) * (6**k * 2 ** (d - k) - 3 * 2**d) // 6


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: int, y: int) -> None:
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            # smaller root wins so the merge order is deterministic
            if ry < rx:
                rx, ry = ry, rx
            self.parent[ry] = rx

    def count(self) -> int:
        return sum(1 for i in range(len(self.parent)) if self.find(i) == i)


@dataclass(frozen=True)
class ClassCountWitness:
    d: int
    formula_value: int
    brute_force_value: int


def _edge_signature(tri) -> tuple:
    # multiset of edge difference vectors, each taken up to sign
    edges = []
    for a, b in itertools.combinations(tri, 2):
        v = tuple(x - y for x, y in zip(a, b))
        neg = tuple(-x for x in v)
        edges.append(max(v, neg))
    return tuple(sorted(edges))


def brute_force_class_count(d: int) -> ClassCountWitness:
    """Count triangle classes of the d-cube by union-find over all triangles.

    Two triangles are merged when one is obtained from the other by flipping
    a set of its fixed coordinates (a translation inside the cube) or by
    complementing every coordinate, and when their edge difference vectors
    agree up to sign. Both relations are applied; the class count is read off
    the union-find forest.
    """
    if not 1 <= d <= 5:
        raise ValueError("brute force is limited to 1 <= d <= 5")
    verts = list(itertools.product((0, 1), repeat=d))
    tris = list(itertools.combinations(verts, 3))
    index = {frozenset(t): i for i, t in enumerate(tris)}
    uf = UnionFind(len(tris))

    for i, tri in enumerate(tris):
        fixed = [c for c in range(d) if tri[0][c] == tri[1][c] == tri[2][c]]
        for r in range(1, len(fixed) + 1):
            for flip in itertools.combinations(fixed, r):
                moved = frozenset(
                    tuple(1 - x if c in flip else x for c, x in enumerate(v)) for v in tri
                )
                uf.union(i, index[moved])
        comp = frozenset(tuple(1 - x for x in v) for v in tri)
        uf.union(i, index[comp])

    by_edges: dict[tuple, int] = {}
    for i, tri in enumerate(tris):
        sig = _edge_signature(tri)
        if sig in by_edges:
            uf.union(by_edges[sig], i)
        else:
            by_edges[sig] = i

    return ClassCountWitness(d, tri_class_count(d), uf.count())


def icbrt(x: int) -> int:
    """Largest integer s with s**3 <= x (x >= 0)."""
    if x < 0:
        raise ValueError("negative argument")
    s = round(x ** (1 / 3)) if x else 0
    while s**3 > x:
        s -= 1
    while (s + 1) ** 3 <= x:
        s += 1
    return s


def weak_dirac(n: int) -> int:
    """Proven lower bound ceil(n/3) + 1 on lines through the richest point."""
    return -(-n // 3) + 1


def _lenz_upper(n: int, d: int) -> int:
    if 3 <= n <= d + 1:
        return 1
    if d in (2, 3):
        return n - 2
    if d in (4, 5):
        m = -(-n // 2)
        return 2 * m - 3 - (1 if m % 4 == 0 else 0)
    h = d // 2
    bound = 2 * (-(-n // h)) - 2
    if n % h == 0:
        m = n // h
        if m % 12 == 0:
            bound -= 2
        elif m % 3 == 0 or m % 4 == 0:
            bound -= 1
    return bound


def _gen_upper(n: int) -> int:
    d = max(2, (n - 1).bit_length())
    return 3 * tri_class_count(d)


@dataclass(frozen=True)
class BoundsRow:
    quantity: str
    lower: Callable[..., Fraction | int | None]
    upper: Callable[..., Fraction | int | None]
    applies: Callable[..., bool]
    note: str = ""


def _need(ok: bool, msg: str) -> None:
    if not ok:
        raise ValueError(msg)


def _sizes(sizes: Sequence[int] | None, k_min: int) -> list[int]:
    _need(sizes is not None and len(sizes) >= k_min, f"needs at least {k_min} class sizes")
    s = sorted(sizes, reverse=True)
    _need(all(r >= 1 for r in s), "class sizes must be positive")
    return s


CATALOG: dict[str, BoundsRow] = {
    "A": BoundsRow(
        "A", lambda n, **_: Fraction(n, 6), lambda n, **_: n - 2,
        lambda n, **_: n >= 4, "regular n-gon; weak Dirac lower bound"),
    "A_no3l": BoundsRow(
        "A_no3l", lambda n, **_: Fraction(n - 2, 2), lambda n, **_: n - 2,
        lambda n, **_: n >= 4),
    "A_no4c": BoundsRow(
        "A_no4c", lambda n, **_: Fraction(n, 6), lambda n, **_: n - 2,
        lambda n, **_: n >= 4, "projected polygon"),
    "A_gen": BoundsRow(
        "A_gen", lambda n, **_: Fraction(n - 2, 2), lambda n, **_: _gen_upper(n),
        lambda n, **_: n >= 4,
        "lower inherited from A_no3l; upper 3 * class count of the smallest cube with n vertices"),
    "A_hat": BoundsRow(
        "A_hat", lambda n, **_: Fraction(n, 6), lambda n, **_: n - 2,
        lambda n, **_: n >= 4),
    "A_hatSigma": BoundsRow(
        "A_hatSigma", lambda n, **_: Fraction(n, 6) + n - 1, lambda n, **_: 3 * n - 6,
        lambda n, **_: n >= 4),
    "A_hatSigmaPrime": BoundsRow(
        "A_hatSigmaPrime", lambda n, **_: sum(Fraction(i, 6) for i in range(4, n + 1)),
        lambda n, **_: n * (n - 2), lambda n, **_: n >= 4,
        "lower: peel points one at a time; upper: regular n-gon"),
    "R": BoundsRow(
        "R", lambda n, **_: 2, lambda n, **_: icbrt(2 * (n - 2)),
        lambda n, **_: n >= 4, "upper: cube root of twice the n-gon count"),
    "R_gen": BoundsRow(
        "R_gen", lambda n, **_: 2, lambda n, **_: icbrt(2 * _gen_upper(n)),
        lambda n, **_: n >= 4, "only asymptotic orders are stated; lower is trivial"),
    "R_d": BoundsRow(
        "R_d", lambda n, d, **_: 2,
        lambda n, d, **_: 2 if n <= comb(d + 1, 2) else icbrt(max(0, 2 * (-(-n // (d // 2))) - 4)),
        lambda n, d, **_: d is not None and d >= 4 and n >= 3),
    "A_d": BoundsRow(
        "A_d", lambda n, d, **_: 1 if n <= d + 1 else 2,
        lambda n, d, **_: _lenz_upper(n, d),
        lambda n, d, **_: d is not None and d >= 2 and n >= 3),
    "bipartite": BoundsRow(
        "bipartite",
        lambda sizes, no3l=False, **_: (
            max((_sizes(sizes, 2)[0] - 1) // 2, floor((Fraction(sum(sizes), 2) - 1) / 2))
            if no3l else 0),
        lambda sizes, no3l=False, **_: (
            _sizes(sizes, 2)[0] - 2 if no3l else _sizes(sizes, 2)[1]),
        lambda sizes, **_: sizes is not None and len(sizes) == 2,
        "sizes are (|Q|, |P|) in any order; m = smaller, n = larger"),
    "kPartite": BoundsRow(
        "kPartite",
        lambda sizes, no3l=False, **_: (
            ceil(Fraction(sum(sizes) - _sizes(sizes, 3)[-2] - _sizes(sizes, 3)[-1], 2))
            if no3l else 0),
        lambda sizes, no3l=False, **_: (
            sum(sizes) - max(2, _sizes(sizes, 3)[-1] + 1) if no3l
            else 2 * (sum(sizes) - _sizes(sizes, 3)[0] - 1)),
        lambda sizes, **_: sizes is not None and len(sizes) >= 3),
}


def bounds_eval(quantity: str, n: int | None = None, d: int | None = None,
                sizes: Sequence[int] | None = None, no3l: bool = False):
    """Return ``(lower, upper)`` for one catalog row.

    ``n`` defaults to ``sum(sizes)`` for the partite rows. Raises ValueError
    when the arguments fall outside the row's stated range.
    """
    try:
        row = CATALOG[quantity]
    except KeyError:
        raise ValueError(f"unknown quantity {quantity!r}") from None
    if sizes is not None and n is None:
        n = sum(sizes)
    kw = dict(n=n, d=d, sizes=sizes, no3l=no3l)
    if quantity not in ("bipartite", "kPartite") and n is None:
        raise ValueError(f"{quantity} needs n")
    if not row.applies(**kw):
        raise ValueError(f"{quantity} does not apply to n={n}, d={d}, sizes={sizes}")
    lo, hi = row.lower(**kw), row.upper(**kw)
    return Fraction(lo), Fraction(hi)


def formulas_table(n: int, d: int | None = None, sizes: Sequence[int] | None = None) -> list[dict]:
    """Every catalog row that applies to the given arguments."""
    rows = []
    for q, row in CATALOG.items():
        for no3l in ((False, True) if q in ("bipartite", "kPartite") else (False,)):
            try:
                lo, hi = bounds_eval(q, n=None if q in ("bipartite", "kPartite") else n,
                                     d=d, sizes=sizes, no3l=no3l)
            except ValueError:
                continue
            rows.append({
                "quantity": q + ("_no3l" if no3l else ""),
                "n": n if sizes is None else sum(sizes),
                "d": d,
                "lower": str(lo),
                "upper": str(hi),
            })
    return rows
