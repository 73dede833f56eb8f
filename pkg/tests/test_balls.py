import itertools

import numpy as np
import pytest

from polytopes import FLAT4, FOUR_POINTS, SIMPLEX4, TRIANGLE, UNIT_SQUARE
from tropiball.balls import (
    TropBall,
    ball_generators,
    ball_volume,
    max_inscribed,
    max_inscribed_simplex,
    min_enclosing,
    min_enclosing_lower_bound,
)
from tropiball.core import TropPolytope, contains, contains_many, normalize, trop_dist, trop_dist_many
from tropiball.errors import NoTrunk


def test_generators_formula():
    b = TropBall(np.array([0.0, 2.0, 3.0]), 1.5)
    g = ball_generators(b).vertices
    assert g.tolist() == [[0, 0.5, 1.5], [0, 3.5, 3], [0, 2, 4.5]]


def test_zero_radius_generators():
    b = TropBall(np.array([0.0, 1.0, 2.0]), 0.0)
    assert ball_generators(b).vertices.tolist() == [[0, 1, 2]]


def test_generators_span_the_ball():
    rng = np.random.default_rng(0)
    for e in (3, 4, 5):
        c = normalize(rng.normal(size=e))
        b = TropBall(c, 1.3)
        gens = ball_generators(b)
        ys = normalize(c) + rng.uniform(-2, 2, (1000, e))
        ys = ys - ys[:, :1]
        inside = trop_dist_many(ys, c) <= b.radius + 1e-9
        assert inside.any() and not inside.all()
        assert np.array_equal(contains_many(gens, ys, 1e-9), inside)


def test_ball_contains():
    b = TropBall(np.zeros(3), 1.0)
    assert b.contains((0, 1, 0)) and not b.contains((0, 1.1, -0.1))


# --- inscribed ---------------------------------------------------------------

def _inside(p, ball):
    return all(contains(p, g, 1e-6) for g in ball_generators(ball).vertices)


def test_inscribed_triangle():
    b = max_inscribed_simplex(TRIANGLE)
    assert b.radius == pytest.approx(1.5, abs=1e-9)
    assert _inside(TropPolytope(TRIANGLE), b)
    assert np.allclose(b.center, (0, 1.5, 1.5))


def test_inscribed_four_dim_simplex():
    b = max_inscribed_simplex(SIMPLEX4)
    assert b.radius == pytest.approx(0.5, abs=1e-9)
    assert _inside(TropPolytope(SIMPLEX4), b)
    assert np.allclose(b.center, (0, 0.5, 2, 5))


def test_inscribed_non_convex_polytope():
    p = TropPolytope(FOUR_POINTS)
    b = max_inscribed(p)
    assert b.radius == pytest.approx(1.0, abs=1e-9)
    assert np.allclose(b.center, (0, -1, 4), atol=1e-9)
    assert _inside(p, b)
    # agrees with the best of the four simplices
    radii = []
    for idx in itertools.combinations(range(4), 3):
        radii.append(max_inscribed_simplex(p.subset(idx)).radius)
    assert max(radii) == pytest.approx(b.radius)


def test_simplex_input_same_as_simplex_routine():
    a = max_inscribed(TRIANGLE)
    b = max_inscribed_simplex(TRIANGLE)
    assert a.radius == b.radius and np.array_equal(a.center, b.center)


def test_ball_inscribed_in_itself():
    ball = TropBall(np.array([0.0, 1.0, -2.0, 0.5]), 0.75)
    got = max_inscribed(ball_generators(ball))
    assert got.radius == pytest.approx(0.75)
    assert np.allclose(got.center, ball.center)


def test_no_trunk():
    with pytest.raises(NoTrunk):
        max_inscribed([(0, 0, 0), (0, 1, 1)])
    with pytest.raises(NoTrunk):
        max_inscribed([(0, 0, 0), (0, 1, 1), (0, 2, 2)])


def test_inscribed_radius_sampling_oracle():
    # no ball centered at a random point of the trunk can be larger
    rng = np.random.default_rng(1)
    p = TropPolytope(SIMPLEX4)
    big = max_inscribed_simplex(p).radius
    c = max_inscribed_simplex(p).center
    for _ in range(200):
        x = c + np.concatenate(([0.0], rng.uniform(-1, 1, 3)))
        ball = TropBall(x, big * 1.01)
        assert not _inside(p, ball)


# --- enclosing ---------------------------------------------------------------

@pytest.mark.parametrize("verts, radius", [
    (UNIT_SQUARE, 1.0),
    (TRIANGLE, 2.5),
    (FOUR_POINTS, 4.0),
    (SIMPLEX4, 5.0),
])
def test_enclosing_radii(verts, radius):
    b = min_enclosing(verts)
    assert b.radius == pytest.approx(radius, abs=1e-9)
    assert all(b.contains(v, 1e-9) for v in np.asarray(verts, float))


def test_enclosing_strictly_above_lower_bound():
    b = min_enclosing(FLAT4)
    assert b.radius == pytest.approx(10 / 3, abs=1e-9)
    assert min_enclosing_lower_bound(FLAT4) == 3.0
    assert np.allclose(b.center, (0, 2, 10 / 3, 5 / 3))


def test_lower_bound_values():
    assert min_enclosing_lower_bound(FOUR_POINTS) == 4.0
    assert min_enclosing_lower_bound([(0, 1, 2)]) == 0.0


def test_enclosing_bounds_random():
    rng = np.random.default_rng(2)
    for _ in range(300):
        e = int(rng.integers(2, 6))
        s = int(rng.integers(1, 9))
        v = rng.integers(-6, 7, (s, e)).astype(float)
        b = min_enclosing(v)
        lb = min_enclosing_lower_bound(v)
        assert b.radius >= lb - 1e-9
        far = max(trop_dist(b.center, x) for x in v)
        assert far <= b.radius + 1e-9
        # the center of an enclosing ball can't be improved by local moves
        for _ in range(5):
            c2 = b.center + np.concatenate(([0.0], rng.normal(scale=0.1, size=e - 1)))
            assert max(trop_dist(c2, x) for x in v) >= b.radius - 1e-9


# --- volume formula ----------------------------------------------------------

TABLE = {(3, 2): 6, (4, 2): 32, (5, 2): 80, (6, 2): 192, (10, 2): 5120,
         (3, 4): 48, (4, 4): 256, (5, 4): 1280, (6, 4): 6144, (10, 4): 2.62e6}


@pytest.mark.parametrize("key", sorted(TABLE))
def test_volume_table(key):
    e, l = key
    if key == (3, 2):
        # the printed 6 disagrees with e * l^(e-1) = 12
        assert ball_volume(l, e) == 12
    elif key == (10, 4):
        assert ball_volume(l, e) == pytest.approx(TABLE[key], rel=1e-3)
    else:
        assert ball_volume(l, e) == TABLE[key]


def _grid_volume(e, l, h):
    # midpoint cells of side h over [-l, l]^(e-1) in the gauge y_1 = 0
    axis = np.arange(-l + h / 2, l, h)
    mesh = np.meshgrid(*([axis] * (e - 1)), indexing="ij")
    pts = np.stack([np.zeros_like(mesh[0]), *mesh], axis=-1).reshape(-1, e)
    inside = (pts.max(axis=1) - pts.min(axis=1)) <= l
    return inside.sum() * h ** (e - 1)


@pytest.mark.parametrize("e, l", [(3, 1.0), (3, 2.0), (4, 1.0), (4, 2.0)])
def test_volume_grid_oracle(e, l):
    h = l / (40 if e == 3 else 16)
    coarse, fine = _grid_volume(e, l, 2 * h), _grid_volume(e, l, h)
    richardson = 2 * fine - coarse
    assert richardson == pytest.approx(ball_volume(l, e), rel=0.02)


def test_volume_errors():
    with pytest.raises(ValueError):
        ball_volume(-1, 3)
    with pytest.raises(ValueError):
        ball_volume(1, 1)
