import numpy as np
import pytest

from dynball import (Ball, Point, ball_mass, circle, interval, make_denjoy,
                     make_denjoy_minimal, make_dirac, make_lebesgue,
                     make_measure, measure_names, pushforward, sample, torus2)
from dynball.stats import wilson_interval


def test_sampling_deterministic_and_splittable():
    mu = make_lebesgue(torus2())
    a = mu.sample_coords(seed=9, count=2000)
    b = mu.sample_coords(seed=9, count=2000)
    assert np.array_equal(a, b)
    head = mu.sample_coords(seed=9, count=700)
    tail = mu.sample_coords(seed=9, count=1300, start=700)
    assert np.array_equal(a, np.concatenate([head, tail]))
    batch = sample(mu, seed=9, count=2000)
    assert np.array_equal(batch.points, a)
    assert batch.seed == 9 and batch.count == 2000


def test_lebesgue_ball_oracles_exact():
    mu_c = make_lebesgue(circle())
    est, lo, hi = ball_mass(mu_c, Ball(Point(circle(), (0.3,)), 0.07), 10, 0)
    assert est == pytest.approx(0.14) and lo == hi == est
    mu_i = make_lebesgue(interval())
    est, _, _ = ball_mass(mu_i, Ball(Point(interval(), (0.02,)), 0.05), 10, 0)
    assert est == pytest.approx(0.07)  # clipped at the left endpoint
    mu_t = make_lebesgue(torus2())
    for r, area in ((0.3, 0.18), (0.7, 1.0 - 2.0 * 0.09), (1.1, 1.0)):
        est, _, _ = ball_mass(mu_t, Ball(Point(torus2(), (0.5, 0.5)), r), 10, 0)
        assert est == pytest.approx(area)


def test_lebesgue_oracles_match_monte_carlo():
    rng = np.random.default_rng(21)
    for sp in (circle(), torus2()):
        mu = make_lebesgue(sp)
        for trial in range(5):
            center = Point(sp, tuple(rng.random(sp.dim)))
            r = 0.05 + 0.3 * rng.random()
            ball = Ball(center, r)
            exact, _, _ = ball_mass(mu, ball, 10, 0)
            pts = mu.sample_coords(seed=100 + trial, count=40_000)
            d = np.zeros(len(pts))
            from dynball import distance
            d = distance(sp, pts, np.tile(center.array, (len(pts), 1)))
            hits = int(np.sum(d <= r))
            lo, hi = wilson_interval(np.array([hits]), 40_000)
            slack = 4 * (hi[0] - lo[0])
            assert abs(hits / 40_000 - exact) <= slack + 1e-9


def test_dirac_measure():
    mu = make_dirac(Point(circle(), (0.25,)))
    pts = mu.sample_coords(seed=0, count=50)
    assert np.all(pts == 0.25)
    assert not mu.nonatomic
    est, lo, hi = ball_mass(mu, Ball(Point(circle(), (0.3,)), 0.1), 10, 0)
    assert est == 1.0
    est, _, _ = ball_mass(mu, Ball(Point(circle(), (0.75,)), 0.1), 10, 0)
    assert est == 0.0


def test_minimal_measure_lives_on_orbit_closure(denjoy_c):
    nu = make_denjoy_minimal(denjoy_c)
    pts = nu.sample_coords(seed=4, count=5000)[:, 0]
    # sampled points are gap endpoints, so never interior to any gap
    lefts = denjoy_c.left_endpoints
    rights = denjoy_c.right_endpoints
    for v in pts[:200]:
        inside = (v > lefts + 1e-12) & (v < rights - 1e-12)
        assert not inside.any()


def test_minimal_measure_arc_oracle_matches_empirical(denjoy_c):
    nu = make_denjoy_minimal(denjoy_c)
    rng = np.random.default_rng(17)
    pts = nu.sample_coords(seed=8, count=30_000)[:, 0]
    for _ in range(20):
        lo_a = rng.random()
        width = 0.02 + 0.4 * rng.random()
        mass = denjoy_c.arc_mass(lo_a, (lo_a + width) % 1.0)
        if lo_a + width <= 1.0:
            emp = np.mean((pts >= lo_a) & (pts <= lo_a + width))
        else:
            emp = np.mean((pts >= lo_a) | (pts <= (lo_a + width) % 1.0))
        w_lo, w_hi = wilson_interval(np.array([int(emp * 30_000)]), 30_000)
        assert abs(emp - mass) <= 4 * (w_hi[0] - w_lo[0]) + 1e-6


def test_minimal_measure_invariance(denjoy_c):
    # pushing samples through the map leaves arc masses unchanged
    nu = make_denjoy_minimal(denjoy_c)
    f = make_denjoy(denjoy_c)
    pts = nu.sample_coords(seed=13, count=30_000)
    moved = f.forward(pts)[:, 0]
    for lo_a, hi_a in ((0.1, 0.4), (0.5, 0.9), (0.8, 0.2)):
        mass = denjoy_c.arc_mass(lo_a, hi_a)
        if lo_a <= hi_a:
            emp = np.mean((moved >= lo_a) & (moved <= hi_a))
        else:
            emp = np.mean((moved >= lo_a) | (moved <= hi_a))
        assert abs(emp - mass) < 0.01


def test_pushforward_square_cdf():
    mu = make_lebesgue(interval())
    nu = pushforward(mu, np.square, name="pushforward:square")
    pts = nu.sample_coords(seed=2, count=50_000)[:, 0]
    for t in (0.1, 0.25, 0.5, 0.9):
        emp = np.mean(pts <= t)
        assert abs(emp - np.sqrt(t)) < 0.01
    assert nu.ball_oracle is None  # mass falls back to Monte Carlo
    est, lo, hi = ball_mass(nu, Ball(Point(interval(), (0.5,)), 0.1),
                            samples=20_000, seed=3)
    assert lo < est < hi


def test_uniform_quarter_arc_fraction():
    mu = make_lebesgue(circle())
    pts = mu.sample_coords(seed=7, count=100_000)[:, 0]
    frac = np.mean(pts < 0.25)
    assert abs(frac - 0.25) <= 0.006  # binomial 4 sigma


def test_staircase_pushforward_is_uniform(denjoy_c):
    # collapsing the gaps sends the minimal measure to the uniform one
    nu = make_denjoy_minimal(denjoy_c)
    pts = nu.sample_coords(seed=7, count=100_000)[:, 0]
    collapsed = denjoy_c.staircase(pts)
    for t in (0.25, 0.5, 0.75):
        assert abs(np.mean(collapsed <= t) - t) <= 0.007


def test_nonatomic_measures_have_no_atoms(denjoy_c):
    for mu in (make_lebesgue(circle()), make_lebesgue(torus2()),
               make_denjoy_minimal(denjoy_c)):
        assert mu.nonatomic
        pts = mu.sample_coords(seed=3, count=100_000)
        _, counts = np.unique(pts[:, 0], return_counts=True)
        assert counts.max() <= 3  # duplicates only from float coincidence


def test_oracle_consistency_twenty_random_balls(denjoy_c):
    from dynball import distance
    rng = np.random.default_rng(29)
    measures = [make_lebesgue(circle()), make_lebesgue(interval()),
                make_lebesgue(torus2()), make_denjoy_minimal(denjoy_c)]
    for mu in measures:
        pts = mu.sample_coords(seed=41, count=100_000)
        for _ in range(20):
            center = rng.random(mu.space.dim)
            r = 0.02 + 0.4 * rng.random()
            ball = Ball(Point(mu.space, tuple(center)), r)
            exact, _, _ = ball_mass(mu, ball, 10, 0)
            d = distance(mu.space, pts, np.tile(center, (len(pts), 1)))
            hits = int(np.sum(d <= r))
            lo, hi = wilson_interval(np.array([hits]), 100_000)
            assert abs(hits / 100_000 - exact) <= 4 * (hi[0] - lo[0]) / 2 + 1e-4, \
                (mu.name, r)


def test_make_measure_parsing(denjoy_c):
    sp = circle()
    assert make_measure("lebesgue", sp).name == "lebesgue"
    d = make_measure("dirac:0.5", sp)
    assert np.all(d.sample_coords(0, 10) == 0.5)
    d2 = make_measure("dirac:0.25,0.75", torus2())
    assert np.allclose(d2.sample_coords(0, 4), [0.25, 0.75])
    nu = make_measure("denjoy-minimal", sp, denjoy_construction=denjoy_c)
    assert not np.array_equal(nu.sample_coords(0, 8), make_measure("lebesgue", sp).sample_coords(0, 8))
    ps = make_measure("pushforward:sqrt", interval())
    assert ps.pushforward_of == "lebesgue"
    with pytest.raises(KeyError):
        make_measure("nosuch", sp)
    assert any(n.startswith("dirac") for n in measure_names())
