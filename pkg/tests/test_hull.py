import itertools

import numpy as np
import pytest

from polytopes import SIMPLEX4, SIMPLEX4_KLEENE, TRIANGLE, TRIANGLE_HREP, TRIANGLE_KLEENE, UNIT_SQUARE
from tropiball.balls import TropBall, ball_generators
from tropiball.core import TropPolytope, contains_many, trop_dist
from tropiball.errors import DegenerateSimplex, DimensionError, NotASimplex
from tropiball.hull import (
    MinHyperplane,
    arrangement,
    h_rep,
    hyperplane_distance,
    hyperplane_distances,
    kleene_closure,
    kleene_power,
    kleene_star,
)


def test_kleene_star_triangle():
    ks = kleene_star(TRIANGLE)
    assert ks.m.tolist() == TRIANGLE_KLEENE
    assert ks.sigma == (1, 3, 2)


def test_kleene_star_four_dim():
    assert kleene_star(SIMPLEX4).m.tolist() == SIMPLEX4_KLEENE


def test_hrep_lines():
    lines = h_rep(kleene_star(TRIANGLE)).lines()
    assert sorted(lines) == sorted(TRIANGLE_HREP)
    assert lines[-1] == "y1 = 0"


def test_closure_matches_power():
    rng = np.random.default_rng(0)
    for m in (TRIANGLE_KLEENE, SIMPLEX4_KLEENE):
        m = np.array(m, float)
        assert np.array_equal(kleene_closure(m), kleene_power(m))
    for _ in range(50):
        # random matrices without positive cycles: potentials give m_ij = p_i - p_j - c
        pot = rng.normal(size=5)
        m = pot[:, None] - pot[None, :] - rng.uniform(0, 2, (5, 5))
        np.fill_diagonal(m, 0)
        assert np.allclose(kleene_closure(m), kleene_power(m))


def test_closedness_only_for_polytropes():
    assert kleene_star(TRIANGLE).is_closed()
    ks = kleene_star(SIMPLEX4)
    assert not ks.is_closed()
    assert not ks.has_positive_cycle()


def test_ball_generators_kleene_star():
    gens = ball_generators(TropBall(np.zeros(3), 1.0))
    ks = kleene_star(gens)
    assert not ks.has_positive_cycle()
    hr = h_rep(ks)
    assert {b for _, _, b in hr.constraints} <= {0.0, 1.0, 2.0}
    # the h-rep of a ball is the hexagon max - min <= 1
    assert all(b == 1.0 for _, _, b in hr.constraints)


def test_vertices_satisfy_own_hrep_for_polytropes():
    for v in (TRIANGLE, UNIT_SQUARE):
        assert h_rep(kleene_star(v)).satisfied(np.array(v, float)).all()
    # outside polytropes some generators sit on tentacles, off the trunk
    sat = h_rep(kleene_star(SIMPLEX4)).satisfied(np.array(SIMPLEX4, float))
    assert sat.tolist() == [False, False, True, False]


def test_hrep_equals_membership_on_polytrope_grid():
    p = TropPolytope(TRIANGLE)
    hr = h_rep(kleene_star(p))
    g = np.linspace(-1, 6, 57)
    grid = np.array([(0.0, a, b) for a in g for b in g])
    assert np.array_equal(hr.satisfied(grid, 1e-9), contains_many(p, grid, 1e-9))


def test_hrep_matrix_form():
    hr = h_rep(kleene_star(TRIANGLE))
    g, h = hr.matrix()
    assert g.shape == (6, 2) and h.shape == (6,)
    y = np.array([0.0, 1.5, 1.5])
    assert np.allclose(hr.slack(y)[0], h - g @ y[1:])


def test_kleene_star_errors():
    with pytest.raises(NotASimplex):
        kleene_star([(0, 0, 0), (0, 1, 0)])
    with pytest.raises(DegenerateSimplex):
        kleene_star([(0, 0, 0), (0, 1, 1), (0, 2, 2)])


# --- min-tropical hyperplanes ------------------------------------------------

def test_hyperplane_distance_values():
    assert hyperplane_distance((0, 1, 3), MinHyperplane(np.zeros(3))) == 1
    h = MinHyperplane(np.array([0.0, -2.0, 1.0]))
    assert hyperplane_distance(h.apex, h) == 0
    x = np.array([0.0, 0.3, -2.0])
    assert hyperplane_distance(x + 4.0, h) == pytest.approx(hyperplane_distance(x, h))
    with pytest.raises(DimensionError):
        hyperplane_distance((0, 1), h)


def _h0_points_e3(step=1e-3, span=8.0):
    """Points (0, s, t) of the origin hyperplane: the three rays of the tropical line."""
    r = np.arange(0, span, step)
    return np.vstack([
        np.column_stack([np.zeros_like(r), np.zeros_like(r), r]),
        np.column_stack([np.zeros_like(r), r, np.zeros_like(r)]),
        np.column_stack([np.zeros_like(r), -r, -r]),
    ])


def test_hyperplane_distance_brute_force_e3():
    rng = np.random.default_rng(1)
    h0 = _h0_points_e3()
    for _ in range(25):
        x = np.concatenate(([0.0], rng.uniform(-3, 3, 2)))
        om = np.concatenate(([0.0], rng.uniform(-2, 2, 2)))
        # H_ω = H_0 - ω
        pts = h0 - om
        d = pts - x
        brute = (d.max(axis=1) - d.min(axis=1)).min()
        assert hyperplane_distance(x, MinHyperplane(om)) == pytest.approx(brute, abs=1e-3)


def test_hyperplane_distance_e4_lower_bound_and_witness():
    rng = np.random.default_rng(2)
    for _ in range(25):
        x = rng.uniform(-3, 3, 4)
        om = rng.uniform(-2, 2, 4)
        d = hyperplane_distance(x, MinHyperplane(om))
        z = x + om
        # witness: raise the smallest coordinate to the second smallest
        w = z.copy()
        k = np.argmin(z)
        w[k] = np.sort(z)[1]
        assert hyperplane_distance(w - om, MinHyperplane(om)) == pytest.approx(0, abs=1e-12)
        assert trop_dist(x, w - om) == pytest.approx(d)
        # random hyperplane points are never closer
        for a, b in itertools.combinations(range(4), 2):
            y = rng.uniform(-4, 4, (500, 4))
            m = y.min(axis=1) - rng.uniform(0, 1, 500)
            y[:, a] = m
            y[:, b] = m
            pts = y - om
            diff = pts - x
            assert (diff.max(axis=1) - diff.min(axis=1)).min() >= d - 1e-12


def test_arrangement_apices():
    hs = arrangement(TRIANGLE)
    assert len(hs) == 3
    v = np.array(TRIANGLE, float)
    for vi, h in zip(v, hs):
        assert np.allclose(h.apex, vi)
        assert hyperplane_distance(vi, h) == 0
    single = arrangement([(0, 0, 0)])
    assert len(single) == 1 and np.allclose(single[0].apex, 0)


def test_vectorized_distances():
    rng = np.random.default_rng(3)
    pts = rng.normal(size=(10, 4))
    oms = rng.normal(size=(3, 4))
    got = hyperplane_distances(pts, oms)
    for i, x in enumerate(pts):
        for j, om in enumerate(oms):
            assert got[i, j] == pytest.approx(hyperplane_distance(x, MinHyperplane(om)))
