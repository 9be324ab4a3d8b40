"""Piecewise-affine Denjoy-type circle homeomorphism, built by gap insertion.

The construction blows up the orbit ``theta_k = frac(k * alpha)`` of an
irrational rotation: at each orbit point with ``|k| <= N`` an open gap of
length ``l_k ~ 1/((|k|+2)(|k|+3))`` is inserted, lengths normalized so the
gaps carry total length 1/2.  In the new circle coordinates

    psi(theta) = theta/2 + sum of gap lengths inserted strictly below theta

the map sends gap ``I_k`` affinely onto ``I_{k+1}`` for ``k < N`` and acts
on the remainder (a Cantor set of length 1/2) like the rotation seen
through psi.  Collapsing every gap with the monotone staircase ``h``
(piecewise constant on gaps, slope 2 on the remainder) semiconjugates the
map back to the rotation.

Truncation details that keep the map an honest homeomorphism:

* gap ``I_N`` has no inserted successor, so it is squeezed affinely onto a
  ``2 * squeeze`` interval centered at ``psi(theta_{N+1})``; the staircase
  conjugacy defect at breakpoints is then at most ``2 * squeeze``;
* between gaps the map is pinned to ``psi(t) -> psi(t + alpha)`` on a dense
  uniform auxiliary grid, which bounds the rotation-number drift of the
  interpolation by one grid cell.
"""
from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

from .errors import ConstructionError

GOLDEN_CONJUGATE = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(eq=False)
class DenjoyConstruction:
    alpha: float
    N: int
    gap_positions: np.ndarray      # theta_k for k = -N..N
    gap_lengths: np.ndarray        # l_k, same indexing
    left_endpoints: np.ndarray     # a_k = psi(theta_k)
    right_endpoints: np.ndarray    # b_k = a_k + l_k
    breakpoints: np.ndarray        # all gap endpoints, sorted, 2*(2N+1) points
    map_x: np.ndarray              # pin abscissae on [0,1) plus wrap knot
    map_y: np.ndarray              # lifted pin ordinates, strictly increasing
    staircase_x: np.ndarray        # gap endpoints in circle order plus wrap knot
    staircase_y: np.ndarray        # h values (old coordinates), nondecreasing
    orbit_sorted: np.ndarray       # theta_k sorted by position
    gap_cumsum: np.ndarray         # prefix sums of lengths in sorted order
    squeeze: float
    aux_pins: int

    @property
    def smallest_gap(self) -> float:
        return float(self.gap_lengths.min())

    def insertion(self, t: np.ndarray) -> np.ndarray:
        """psi: old circle -> new circle (left endpoint on orbit points)."""
        t = np.asarray(t, dtype=float) % 1.0
        idx = np.searchsorted(self.orbit_sorted, t, side="left")
        return t / 2.0 + self.gap_cumsum[idx]

    def forward(self, x: np.ndarray) -> np.ndarray:
        return np.interp(np.asarray(x, dtype=float) % 1.0, self.map_x, self.map_y) % 1.0

    def inverse(self, y: np.ndarray) -> np.ndarray:
        y = np.asarray(y, dtype=float) % 1.0
        y0 = self.map_y[0]
        lifted = y + (y < y0)
        return np.interp(lifted, self.map_y, self.map_x) % 1.0

    def staircase(self, x: np.ndarray) -> np.ndarray:
        """h: new circle -> old circle, collapsing every gap to its orbit point."""
        return np.interp(np.asarray(x, dtype=float) % 1.0, self.staircase_x, self.staircase_y) % 1.0

    def arc_mass(self, lo: float, hi: float) -> float:
        """Minimal-measure mass of the positively-oriented arc [lo, hi]."""
        hlo = float(np.interp(lo % 1.0, self.staircase_x, self.staircase_y))
        hhi = float(np.interp(hi % 1.0, self.staircase_x, self.staircase_y))
        return (hhi - hlo) % 1.0 if (hi % 1.0) != (lo % 1.0) else 0.0


def build_denjoy(alpha: float = GOLDEN_CONJUGATE, N: int = 64,
                 gap_profile: float = 1.0, aux_pins: int = 1 << 21,
                 squeeze: float = 2.5e-10) -> DenjoyConstruction:
    """Build the truncated construction for gaps at orbit indices |k| <= N.

    ``gap_profile`` scales the raw lengths before normalization (inert
    after the total is renormalized to 1/2; kept as an explicit knob).
    """
    if N < 8:
        raise ConstructionError(f"N={N} too small; need N >= 8")
    if not 0.0 < alpha < 1.0:
        raise ConstructionError("alpha must lie in (0, 1)")
    if gap_profile <= 0:
        raise ConstructionError("gap_profile must be positive")

    ks = np.arange(-N, N + 1)
    theta = (ks * alpha) % 1.0
    lengths = gap_profile / ((np.abs(ks) + 2.0) * (np.abs(ks) + 3.0))
    lengths *= 0.5 / lengths.sum()

    theta_next = ((N + 1) * alpha) % 1.0
    all_orbit = np.sort(np.concatenate([theta, [theta_next]]))
    spacings = np.diff(np.concatenate([all_orbit, [all_orbit[0] + 1.0]]))
    if spacings.min() < 1e-7:
        raise ConstructionError(
            f"alpha={alpha} is too close to rational: orbit points through "
            f"N+1={N + 1} collide (min spacing {spacings.min():.2e})")

    order = np.argsort(theta)
    orbit_sorted = theta[order]
    gap_cumsum = np.concatenate([[0.0], np.cumsum(lengths[order])])

    def psi(t):
        t = np.asarray(t, dtype=float)
        idx = np.searchsorted(orbit_sorted, t, side="left")
        return t / 2.0 + gap_cumsum[idx]

    a = psi(theta)
    b = a + lengths
    p_next = float(psi(theta_next))

    # auxiliary grid, offset to dodge orbit points; drop the handful of
    # cells whose theta or theta+alpha collides with an orbit point
    bad = np.zeros(aux_pins, dtype=bool)
    for t in np.concatenate([all_orbit, (all_orbit - alpha) % 1.0]):
        j = int(np.floor(t * aux_pins - 0.5))
        for jj in (j - 1, j, j + 1, j + 2):
            tt = (jj % aux_pins + 0.5) / aux_pins
            d = abs(tt - t)
            if min(d, 1.0 - d) < 1e-9:
                bad[jj % aux_pins] = True
    grid = ((np.arange(aux_pins) + 0.5) / aux_pins)[~bad]

    px = np.concatenate([a[:-1], b[:-1], [a[-1], b[-1]], psi(grid)])
    py = np.concatenate([a[1:], b[1:], [p_next - squeeze, p_next + squeeze],
                         psi((grid + alpha) % 1.0)])
    s = np.argsort(px)
    px, py = px[s], py[s]
    if not np.all(np.diff(px) > 0):
        raise ConstructionError("pin abscissae collide; reduce aux_pins or N")
    wraps = np.where(np.diff(py) < 0)[0]
    if len(wraps) != 1:
        raise ConstructionError(f"expected exactly one ordinate wrap, found {len(wraps)}")
    py = py.copy()
    py[wraps[0] + 1:] += 1.0
    if not np.all(np.diff(py) > 0):
        raise ConstructionError("pin ordinates not strictly increasing after lift")

    map_x = np.concatenate([px, [px[0] + 1.0]])
    map_y = np.concatenate([py, [py[0] + 1.0]])

    # staircase knots: gap endpoints in circle order; both endpoints of a gap
    # share the collapsed value theta_k, and the remainder gets slope 2
    hx = np.empty(2 * len(order) + 1)
    hy = np.empty_like(hx)
    hx[0:-1:2] = a[order]
    hx[1:-1:2] = b[order]
    hy[0:-1:2] = theta[order]
    hy[1:-1:2] = theta[order]
    hx[-1] = hx[0] + 1.0
    hy[-1] = hy[0] + 1.0

    return DenjoyConstruction(
        alpha=float(alpha), N=int(N),
        gap_positions=theta, gap_lengths=lengths,
        left_endpoints=a, right_endpoints=b,
        breakpoints=np.sort(np.concatenate([a, b])),
        map_x=map_x, map_y=map_y,
        staircase_x=hx, staircase_y=hy,
        orbit_sorted=orbit_sorted, gap_cumsum=gap_cumsum,
        squeeze=float(squeeze), aux_pins=int(aux_pins))


def rotation_number_estimate(c: DenjoyConstruction, n_iter: int = 1_000_000,
                             x0: float = 0.123456789) -> float:
    """Birkhoff average of lift displacements along one orbit.

    For a circle homeomorphism the partial displacements satisfy
    |F^n(x) - x - n*rho| <= 1, so the estimate is within 1/n_iter of the
    map's true rotation number; the construction itself holds that number
    within one auxiliary grid cell (~1/aux_pins) of alpha.
    """
    xs = c.map_x.tolist()
    ys = c.map_y.tolist()
    x = x0 % 1.0
    disp = 0.0
    for _ in range(n_iter):
        j = bisect_right(xs, x) - 1
        y = ys[j] + (ys[j + 1] - ys[j]) * (x - xs[j]) / (xs[j + 1] - xs[j])
        disp += y - x
        x = y % 1.0
    return disp / n_iter
