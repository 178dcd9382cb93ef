import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from anglekit.census import PointF, to_floats
from anglekit.exact import angle_key_exact, points_from
from anglekit.generators import GenSpec, gen_hypercube_projection, gen_ngon
from anglekit.repeats import (
    AmbiguousCensusError,
    explore,
    is_repeat_free,
    q_scan,
    q_scan_naive,
    subset_exact,
    subset_randomized,
)

ints = st.integers(min_value=-3, max_value=3)


def oracle(ps):
    """Ordered-tuple counts straight from the definitions, using exact keys only."""
    byid = {p.id: p for p in ps}
    ids = sorted(byid)

    def K(a, q, b):
        return angle_key_exact(byid[a], byid[q], byid[b])

    def same(x, y):
        return x is not None and x == y

    q3 = sum(same(K(p, q, r), K(q, r, p)) for p, q, r in itertools.permutations(ids, 3))
    c4 = [0] * 4
    for p, q, r, s in itertools.permutations(ids, 4):
        conds = [same(K(p, q, r), K(p, q, s)), same(K(p, q, r), K(r, s, p)),
                 same(K(p, q, r), K(q, r, s)), same(K(p, q, s), K(q, r, s))]
        if any(conds):
            c4[conds.index(True)] += 1
    c5 = [0] * 3
    for p, q, r, s, t in itertools.permutations(ids, 5):
        k = K(p, q, r)
        conds = [same(k, K(s, q, t)), same(k, K(q, s, t)), same(k, K(r, s, t))]
        if any(conds):
            c5[conds.index(True)] += 1
    q6 = sum(same(K(p, q, r), K(s, t, u)) for p, q, r, s, t, u in itertools.permutations(ids, 6))
    return q3, c4, c5, q6


def as_tuple(rep):
    return rep.q3, rep.q4_cases, rep.q5_cases, rep.q6


def test_square_qscan():
    rep = q_scan(points_from([(0, 0), (1, 0), (1, 1), (0, 1)]))
    assert rep.q3 == 8
    assert rep.q6 == 0 and rep.q5 == 0
    assert as_tuple(rep) == oracle(points_from([(0, 0), (1, 0), (1, 1), (0, 1)]))


def test_hexagon_matches_oracle():
    pts = points_from([(0, 0), (2, 0), (3, 1), (2, 3), (0, 2), (-1, 1)])
    assert as_tuple(q_scan(pts)) == oracle(pts)


def test_pair_counts_consistent():
    rep = q_scan(points_from([(0, 0), (2, 0), (1, 1), (0, 2), (2, 2), (1, 3)]))
    assert rep.q6 == 8 * rep.pairs_by_overlap[0]
    assert rep.q3 == 2 * rep.pairs_by_overlap[3]
    assert rep.q4 == sum(rep.q4_cases) and rep.q5 == sum(rep.q5_cases)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.tuples(ints, ints), min_size=4, max_size=7, unique=True))
def test_qscan_matches_oracle(coords):
    pts = points_from(coords)
    assert as_tuple(q_scan(pts)) == oracle(pts)


def test_library_naive_matches_oracle():
    pts = points_from([(0, 0), (3, 0), (1, 2), (2, 2), (0, 3), (3, 3), (1, -1)])
    assert q_scan_naive(pts) == oracle(pts)


def test_arc_backend_qscan():
    # arc keys work the same way as exact ones
    rep = q_scan(gen_ngon(6))
    assert rep.q6 == 8 * rep.pairs_by_overlap[0]
    assert as_tuple(rep) == q_scan_naive(gen_ngon(6))


def test_ambiguous_table_is_refused():
    pts = [PointF(0, (0.0, 0.0)), PointF(1, (1.0, 0.0)), PointF(2, (0.0, 1.0)),
           PointF(3, (1.0, 1e-8 + 1.0))]
    with pytest.raises(AmbiguousCensusError):
        q_scan(pts)
    with pytest.raises(AmbiguousCensusError):
        subset_exact(pts)


def test_subset_square():
    res = subset_exact(points_from([(0, 0), (1, 0), (1, 1), (0, 1)]))
    assert res.size == 2 and res.verified and res.subset == [0, 1]


def test_subset_cap():
    with pytest.raises(ValueError):
        subset_exact(gen_ngon(20))


def test_subset_exact_is_maximum():
    pts = points_from([(0, 0), (3, 0), (1, 2), (2, 2), (0, 3), (3, 3), (1, -1)])
    res = subset_exact(pts)
    ids = [p.id for p in pts]
    best = max(
        (len(s) for r in range(len(ids) + 1) for s in itertools.combinations(ids, r)
         if is_repeat_free(pts, s)),
    )
    assert res.size == best and res.verified


@settings(max_examples=20, deadline=None)
@given(st.lists(st.tuples(ints, ints), min_size=4, max_size=8, unique=True), st.data())
def test_subset_monotone_and_dominates_randomized(coords, data):
    pts = points_from(coords)
    full = subset_exact(pts)
    drop = data.draw(st.integers(min_value=0, max_value=len(pts) - 1))
    sub = [p for p in pts if p.id != drop]
    if len(sub) >= 3:
        assert subset_exact(sub).size <= full.size
    rnd = subset_randomized(pts, C=3.0, trials=4, seed=data.draw(st.integers(0, 1000)))
    assert rnd.verified and rnd.size <= full.size


def test_randomized_zero_rate():
    res = subset_randomized(gen_ngon(10), C=0, trials=3, seed=1)
    assert res.size == 0 and res.subset == [] and res.verified


def test_randomized_is_seeded():
    pts, _ = gen_hypercube_projection(4, seed=0)
    a = subset_randomized(pts, C=4.0, trials=10, seed=9)
    b = subset_randomized(pts, C=4.0, trials=10, seed=9)
    assert a == b and a.verified and a.trials == 10 and a.seed == 9


def test_explore_zero_steps_and_improvement():
    pts, count = explore(GenSpec("ngon", 8), 1, 0, seed=3)
    assert len(pts) == 9 and count >= 6
    _, better = explore(GenSpec("ngon", 8), 1, 200, seed=3)
    assert better <= count
    pts, _ = explore(GenSpec("projectedPolygon", 7), 1, 20, seed=0, on_curve=True)
    assert abs(pts[-1].coords[1] - pts[1].coords[1]) < 1e-12


def test_explore_rejects_other_bases():
    with pytest.raises(ValueError):
        explore(GenSpec("lenz", 4, d=4), 1, 1)
    with pytest.raises(ValueError):
        explore(GenSpec("ngon", 6), 0, 1)


def test_numeric_subset_agrees_with_arc():
    assert subset_exact(to_floats(gen_ngon(9))).size == subset_exact(gen_ngon(9)).size
