import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from anglekit.exact import (
    AngleKeyExact,
    PointR,
    angle_key_exact,
    as_rational,
    collinear,
    concyclic,
    det,
    general_position,
    points_from,
    rank,
)

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
points2 = st.tuples(rationals, rationals)


def P(i, *c):
    return PointR(i, c)


def test_right_angle_key():
    assert angle_key_exact(P(0, 0, 0), P(1, 1, 0), P(2, 1, 1)) == AngleKeyExact(0, Fraction(0))


def test_345_key():
    p, q, r = P(0, 0, 0), P(1, 4, 0), P(2, 4, 3)
    assert angle_key_exact(q, p, r) == AngleKeyExact(1, Fraction(16, 25))


def test_collinear_is_absent():
    assert angle_key_exact(P(0, 0, 0), P(1, 1, 0), P(2, 2, 0)) is None


def test_key_errors():
    with pytest.raises(ValueError):
        angle_key_exact(P(0, 0, 0), P(1, 1, 0), P(2, 1, 0, 0))
    with pytest.raises(ValueError):
        angle_key_exact(P(0, 0, 0), P(1, 0, 0), P(2, 1, 1))


def test_floats_refused():
    with pytest.raises(TypeError):
        as_rational(0.5)
    assert as_rational("3/6") == Fraction(1, 2)


def test_collinear_examples():
    assert collinear(P(0, 0, 0), P(1, 1, 1), P(2, 2, 2))
    assert not collinear(P(0, 0, 0), P(1, 1, 0), P(2, 0, 1))
    assert collinear(P(0, 0, 0, 0), P(1, 1, 2, 3), P(2, 2, 4, 6))


def test_concyclic_square_and_kite():
    sq = points_from([(0, 0), (1, 0), (1, 1), (0, 1)])
    assert concyclic(*sq)
    a, b, c, _ = sq
    assert not concyclic(a, b, c, P(3, 0, 2))


def test_concyclic_errors():
    with pytest.raises(ValueError):
        concyclic(P(0, 0, 0), P(1, 1, 0), P(2, 2, 0), P(3, 0, 1))
    with pytest.raises(ValueError):
        concyclic(P(0, 0, 0, 0), P(1, 1, 0, 0), P(2, 0, 1, 0), P(3, 0, 0, 1))


def test_concyclic_in_space():
    # square lifted into a tilted plane of R^3
    pts = points_from([(0, 0, 0), (1, 0, 1), (1, 1, 1), (0, 1, 0)])
    assert concyclic(*pts)


def test_det_and_rank():
    assert det([[2, 0], [0, 3]]) == 6
    assert det([[1, 2, 3], [4, 5, 6], [7, 8, 10]]) == -3
    assert isinstance(det([[1, 2], [3, 4]]), int)
    assert det([[Fraction(1, 2), 1], [1, 4]]) == 1
    assert rank([[1, 2], [2, 4]]) == 1
    assert rank([[1, 0, 0], [0, 1, 0], [1, 1, 0]]) == 2


def test_general_position_square():
    rep = general_position(points_from([(0, 0), (1, 0), (1, 1), (0, 1)]))
    assert rep.no3_collinear and not rep.no4_concyclic
    assert rep.witnesses == ((0, 1, 2, 3),)


def test_general_position_line():
    rep = general_position(points_from([(0, 0), (1, 1), (2, 2)]))
    assert not rep.no3_collinear
    assert rep.witnesses == ((0, 1, 2),)


def test_general_position_clean():
    rep = general_position(points_from([(0, 0), (3, 0), (1, 2), (5, 7)]))
    assert rep.ok and rep.witnesses == ()


@given(st.lists(points2, min_size=3, max_size=3, unique=True))
def test_key_symmetric_in_endpoints(pts):
    p, q, r = points_from(pts)
    assert angle_key_exact(p, q, r) == angle_key_exact(r, q, p)


@given(
    st.lists(points2, min_size=3, max_size=3, unique=True),
    st.fractions(min_value=Fraction(1, 10), max_value=10),
    points2,
    st.sampled_from([(3, 4), (5, 12), (8, 15), (1, 0)]),
    st.booleans(),
)
def test_key_similarity_invariant(pts, scale, shift, pyth, mirror):
    a, b = pyth
    c = math.isqrt(a * a + b * b)
    cos, sin = Fraction(a, c), Fraction(b, c)

    def move(x, y):
        if mirror:
            y = -y
        return (scale * (cos * x - sin * y) + shift[0], scale * (sin * x + cos * y) + shift[1])

    p, q, r = points_from(pts)
    p2, q2, r2 = points_from([move(*xy) for xy in pts])
    assert angle_key_exact(p, q, r) == angle_key_exact(p2, q2, r2)


@given(st.lists(points2, min_size=3, max_size=3, unique=True))
def test_key_agrees_with_float_cosine(pts):
    p, q, r = points_from(pts)
    key = angle_key_exact(p, q, r)
    u = [float(x - y) for x, y in zip(p.coords, q.coords)]
    v = [float(x - y) for x, y in zip(r.coords, q.coords)]
    cos = (u[0] * v[0] + u[1] * v[1]) / (math.hypot(*u) * math.hypot(*v))
    if key is None:
        assert abs(abs(cos) - 1) < 1e-9
    else:
        assert math.isclose(key.sign * math.sqrt(key.cos_sq), cos, abs_tol=1e-9)
        assert key.cos_sq < 1


@settings(max_examples=50)
@given(st.lists(points2, min_size=4, max_size=4, unique=True), st.permutations(range(4)))
def test_concyclic_permutation_invariant(pts, perm):
    ps = points_from(pts)
    assume(not any(collinear(*t) for t in itertools.combinations(ps, 3)))
    assert concyclic(*ps) == concyclic(*[ps[i] for i in perm])


@settings(max_examples=40)
@given(st.lists(points2, min_size=3, max_size=7, unique=True))
def test_witnesses_recheck(pts):
    ps = points_from(pts)
    byid = {p.id: p for p in ps}
    rep = general_position(ps)
    for w in rep.witnesses:
        q = [byid[i] for i in w]
        if len(w) == 3:
            assert collinear(*q)
        else:
            assert concyclic(*q)
    if rep.no3_collinear:
        assert not any(collinear(*t) for t in itertools.combinations(ps, 3))
    if rep.no3_collinear and rep.no4_concyclic:
        assert not any(concyclic(*t) for t in itertools.combinations(ps, 4))
