import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from anglekit.census import census, census_arc, census_exact, census_numeric, census_partite
from anglekit.exact import PointR, general_position
from anglekit.generators import (
    GenerationError,
    GenSpec,
    PlaneCertificate,
    cube_vertices,
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
    generate,
    verify_certificate,
)


def test_ngon_positions():
    assert [p.t for p in gen_ngon(3)] == [0, Fraction(1, 3), Fraction(2, 3)]
    assert census_arc(gen_ngon(4)).distinct_count == 2
    with pytest.raises(ValueError):
        gen_ngon(2)


@pytest.mark.parametrize("n,want", [(8, 6), (9, 12), (4, 2)])
def test_ngon_center(n, want):
    pts = gen_ngon_center(n)
    assert pts[-1].coords == (0.0, 0.0) and len(pts) == n + 1
    assert census_numeric(pts).distinct_count == want


@pytest.mark.parametrize("n,want", [(8, 6), (5, 3)])
def test_projected_polygon(n, want):
    assert census_numeric(gen_projected_polygon(n)).distinct_count == want


def test_projected_polygon_no_four_concyclic():
    for n in range(4, 13):
        pts = gen_projected_polygon(n)
        rat = [PointR(p.id, tuple(Fraction(c) for c in p.coords)) for p in pts]
        assert general_position(rat).no4_concyclic
        # every 4-subset holds three collinear points, so numerically none is a circle either
        ys = [p.coords[1] for p in pts[1:]]
        assert max(ys) - min(ys) < 1e-12


def test_fan_examples():
    assert census_numeric(gen_fan(4, 1, 8)).distinct_count <= 12
    assert census_numeric(gen_fan(8, 1, 8)).distinct_count == 6
    # the symmetric two-ray fan is an isosceles triangle; a shifted one is scalene
    assert census_numeric(gen_fan(3, 1, 4)).distinct_count == 2
    assert census_numeric(gen_fan(3, 1, 4, offset=0.1)).distinct_count == 3
    with pytest.raises(ValueError):
        gen_fan(5, 1, 4)


def test_perturbed_circle():
    assert gen_perturbed_circle(10, 0) == gen_ngon(10)
    adv = census_arc(gen_perturbed_circle(12, 2, seed=1, adversarial=True)).distinct_count
    assert adv >= 16
    for mode in (False, True):
        assert census_arc(gen_perturbed_circle(12, 2, seed=1, adversarial=mode)).distinct_count <= 50


def test_perturbed_line():
    assert gen_perturbed_line(10, 0) == gen_projected_polygon(10)
    adv = census_numeric(gen_perturbed_line(12, 2, seed=1, adversarial=True))
    assert not adv.ambiguous and adv.distinct_count >= 21
    for mode in (False, True):
        assert census_numeric(gen_perturbed_line(12, 2, seed=1, adversarial=mode)).distinct_count <= 49


@settings(max_examples=15, deadline=None)
@given(st.integers(min_value=0, max_value=2**32), st.booleans())
def test_perturbed_generators_seeded(seed, adv):
    assert gen_perturbed_circle(16, 3, seed, adv) == gen_perturbed_circle(16, 3, seed, adv)
    assert gen_perturbed_line(16, 3, seed, adv) == gen_perturbed_line(16, 3, seed, adv)


def test_hypercube_small_and_bounds():
    pts, cert = gen_hypercube_projection(2, 3, seed=0)
    assert len(pts) == 3 and cert.attempts >= 1
    # in d=2 the plane is the square's own plane, and a square is concyclic
    with pytest.raises(GenerationError):
        gen_hypercube_projection(2, 4, seed=0, resample_budget=5)
    pts, _ = gen_hypercube_projection(3, seed=0)
    assert census_exact(pts).distinct_count <= 66


def test_hypercube_points_lie_in_plane():
    pts, cert = gen_hypercube_projection(4, seed=3)
    basis = np.array(cert.basis, dtype=float)
    for p in pts:
        x = np.array([float(c) for c in p.coords])
        resid = x - basis.T @ np.linalg.lstsq(basis.T, x, rcond=None)[0]
        assert np.abs(resid).max() < 1e-9
    assert verify_certificate(pts, cert, 4) == []


def test_hypercube_seeded_and_certificate_roundtrip():
    a = gen_hypercube_projection(3, seed=11)
    b = gen_hypercube_projection(3, seed=11)
    assert a == b
    cert = a[1]
    assert PlaneCertificate.from_dict(cert.to_dict()) == cert


def test_tampered_certificate_fails():
    pts, cert = gen_hypercube_projection(3, seed=5)
    bad = PlaneCertificate(cert.basis, ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))), 1)
    assert verify_certificate(pts, bad, 3)
    moved = [pts[0], PointR(1, pts[2].coords)] + pts[2:]
    assert verify_certificate(moved, cert, 3)


def test_hypercube_budget():
    with pytest.raises(GenerationError):
        gen_hypercube_projection(3, seed=0, resample_budget=0)
    with pytest.raises(ValueError):
        gen_hypercube_projection(3, n=9)


def test_cube_vertex_order():
    assert cube_vertices(2) == [(0, 0), (0, 1), (1, 0), (1, 1)]


@pytest.mark.parametrize("n,bound", [(4, 4), (5, 7)])
def test_lenz_d4(n, bound):
    pts = gen_lenz(4, n)
    assert len(pts) == 2 * n
    assert census_numeric(pts).distinct_count <= bound


def test_lenz_d6_and_errors():
    assert census_numeric(gen_lenz(6, 4)).distinct_count <= 2 * 4 - 4 + 1
    with pytest.raises(ValueError):
        gen_lenz(3, 5)


@pytest.mark.parametrize("d,n", [(2, 3), (7, 8), (4, 3)])
def test_simplex(d, n):
    assert census_exact(gen_simplex(d, n)).distinct_count == 1


def test_simplex_error():
    with pytest.raises(ValueError):
        gen_simplex(3, 5)


def test_partite_assignment_examples():
    spec = gen_partite_assignment(GenSpec("projectedPolygon", 8), (5, 3))
    assert spec.mode == "bipartite"
    assert census_partite(gen_projected_polygon(8), spec).distinct_count == 3
    spec = gen_partite_assignment(GenSpec("ngon", 9), (4, 3, 2))
    assert census_partite(gen_ngon(9), spec).distinct_count <= 6


def test_partite_assignment_errors():
    with pytest.raises(ValueError):
        gen_partite_assignment(GenSpec("ngon", 9), (4, 3))
    with pytest.raises(ValueError):
        gen_partite_assignment(GenSpec("projectedPolygon", 8), (2, 6))
    with pytest.raises(ValueError):
        gen_partite_assignment(GenSpec("lenz", 8, d=4), (4, 4))


def test_generate_dispatch():
    g = generate(GenSpec("hypercubeProjection", d=3, seed=7))
    assert g.certificate is not None and len(g.points) == 8
    assert generate(GenSpec("ngon", 6)).points == gen_ngon(6)
    with pytest.raises(ValueError):
        GenSpec("triangle", 3)
    assert GenSpec.from_dict(GenSpec("fan", 5, alpha=(1, 9)).to_dict()) == GenSpec("fan", 5, alpha=(1, 9))


def test_numeric_rendering_of_arc_matches():
    from anglekit.census import to_floats
    pts = to_floats(gen_ngon(5))
    assert math.isclose(pts[1].coords[0], math.cos(2 * math.pi / 5))
    assert census(pts).distinct_count == 3
