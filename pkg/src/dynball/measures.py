"""Borel probability measures as seeded samplers with optional ball oracles.

Masses of dynamically defined sets are always estimated as sample
frequencies with Wilson intervals; the oracle, when a measure has one,
gives the exact mass of plain metric balls and backs the calibration
tests.  Sampling is counter-based: the point at index i depends only on
(seed, i), so batches are identical no matter how index ranges are
split across workers.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import geometry as geo
from .denjoy import DenjoyConstruction
from .errors import SpaceMismatchError
from .rng import uniform_block
from .stats import wilson_interval


@dataclass(frozen=True)
class MeasureSpec:
    name: str
    space: geo.SpaceDescriptor
    # maps uniform draws (count, dim) on [0,1)^dim to sample coordinates;
    # must act per-row so parallel generation stays order-independent
    transform: Callable[[np.ndarray], np.ndarray]
    ball_oracle: Optional[Callable[[geo.Ball], float]] = None
    nonatomic: bool = True
    pushforward_of: Optional[str] = None
    params: dict = field(default_factory=dict)

    def sample_coords(self, seed: int, count: int, start: int = 0) -> np.ndarray:
        u = uniform_block(seed, start, count, self.space.dim)
        return self.transform(u)


@dataclass(frozen=True)
class EmpiricalBatch:
    points: np.ndarray
    seed: int
    count: int


def sample(mu: MeasureSpec, seed: int, count: int, start: int = 0) -> EmpiricalBatch:
    if count < 1:
        raise ValueError("count must be >= 1")
    return EmpiricalBatch(points=mu.sample_coords(seed, count, start), seed=seed, count=count)


def ball_mass(mu: MeasureSpec, ball: geo.Ball, samples: int = 100_000,
              seed: int = 0) -> tuple[float, float, float]:
    """(estimate, ci_low, ci_high); exact point interval when an oracle exists."""
    if ball.space != mu.space:
        raise SpaceMismatchError("ball and measure live on different spaces")
    if mu.ball_oracle is not None:
        v = float(mu.ball_oracle(ball))
        return v, v, v
    pts = mu.sample_coords(seed, samples)
    hits = int(np.count_nonzero(geo.ball_contains(ball, pts)))
    lo, hi = wilson_interval(hits, samples)
    return hits / samples, lo, hi


def _lebesgue_ball_oracle(space: geo.SpaceDescriptor) -> Optional[Callable[[geo.Ball], float]]:
    if space.kind == geo.CIRCLE:
        return lambda b: min(1.0, 2.0 * b.radius)
    if space.kind == geo.INTERVAL:
        def oracle(b):
            c = b.center.coords[0]
            return min(1.0, c + b.radius) - max(0.0, c - b.radius)
        return oracle
    if space.kind == geo.TORUS2:
        def oracle(b):
            r = b.radius
            if r >= 1.0:
                return 1.0
            if r <= 0.5:
                return 2.0 * r * r
            return 1.0 - 2.0 * (1.0 - r) ** 2
        return oracle
    return None  # box: L1 balls clip against the boundary; estimate empirically


def make_lebesgue(space: geo.SpaceDescriptor) -> MeasureSpec:
    lo = np.array([b[0] for b in space.bounds])
    widths = space.widths

    def transform(u):
        return lo + u * widths

    return MeasureSpec(name="lebesgue", space=space, transform=transform,
                       ball_oracle=_lebesgue_ball_oracle(space), nonatomic=True)


def make_dirac(point: geo.Point) -> MeasureSpec:
    coords = point.array

    def transform(u):
        return np.broadcast_to(coords, (len(u), len(coords))).copy()

    def oracle(b: geo.Ball) -> float:
        return 1.0 if bool(geo.ball_contains(b, coords)) else 0.0

    return MeasureSpec(name=f"dirac:{','.join(repr(c) for c in point.coords)}",
                       space=point.space, transform=transform,
                       ball_oracle=oracle, nonatomic=False,
                       params={"atom": list(point.coords)})


def make_denjoy_minimal(d: DenjoyConstruction) -> MeasureSpec:
    """The unique minimal measure of the gapped circle map: push the uniform
    variable through the insertion map, which never lands inside a gap."""
    space = geo.circle()

    def transform(u):
        return d.insertion(u[:, 0])[:, None]

    def oracle(b: geo.Ball) -> float:
        if 2.0 * b.radius >= 1.0:
            return 1.0
        c = b.center.coords[0]
        return d.arc_mass(c - b.radius, c + b.radius)

    return MeasureSpec(name="denjoy-minimal", space=space, transform=transform,
                       ball_oracle=oracle, nonatomic=True,
                       params={"alpha": d.alpha, "N": d.N})


def pushforward(mu: MeasureSpec, phi: Callable[[np.ndarray], np.ndarray],
                name: str | None = None) -> MeasureSpec:
    """Image measure: sample mu, apply phi row-wise.  Ball oracles do not
    survive a general phi and are dropped."""
    def transform(u):
        return np.asarray(phi(mu.transform(u)), dtype=float)

    return MeasureSpec(name=name or f"pushforward({mu.name})", space=mu.space,
                       transform=transform, ball_oracle=None,
                       nonatomic=mu.nonatomic, pushforward_of=mu.name,
                       params=dict(mu.params))


def make_measure(name: str, space: geo.SpaceDescriptor,
                 denjoy_construction: DenjoyConstruction | None = None) -> MeasureSpec:
    """Name-string lookup used by the CLI.

    Accepted: ``lebesgue``, ``denjoy-minimal``, ``dirac:<c1>[,<c2>]``,
    ``pushforward:square`` and ``pushforward:sqrt`` (images of Lebesgue).
    """
    if name == "lebesgue":
        return make_lebesgue(space)
    if name == "denjoy-minimal":
        from .denjoy import build_denjoy
        return make_denjoy_minimal(denjoy_construction or build_denjoy())
    if name.startswith("dirac:"):
        coords = tuple(float(v) for v in name.split(":", 1)[1].split(","))
        return make_dirac(geo.Point(space, coords))
    if name.startswith("pushforward:"):
        kind = name.split(":", 1)[1]
        maps = {"square": np.square, "sqrt": np.sqrt}
        if kind not in maps:
            raise KeyError(f"unknown pushforward map {kind!r}; known: {', '.join(maps)}")
        return pushforward(make_lebesgue(space), maps[kind], name=name)
    raise KeyError(f"unknown measure {name!r}")


def measure_names() -> list[str]:
    return ["lebesgue", "denjoy-minimal", "dirac:<coords>",
            "pushforward:square", "pushforward:sqrt"]
