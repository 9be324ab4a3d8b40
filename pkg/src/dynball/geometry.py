"""Spaces, points, balls, and covers.

Supported spaces are the circle R/Z, the unit interval, the 2-torus,
and axis-aligned boxes.  Periodic axes use the quotient metric
min(|a-b|, 1-|a-b|); multi-axis spaces combine coordinates by summing
per-axis distances, so balls on the torus are L1 diamonds.  All ball
membership tests are closed (<=).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import NotACoverError, SpaceMismatchError
from .rng import uniform_block

CIRCLE = "circle"
INTERVAL = "interval"
TORUS2 = "torus2"
BOX = "box"

_PERIODIC_KINDS = {CIRCLE: True, INTERVAL: False, TORUS2: True, BOX: False}


@dataclass(frozen=True)
class SpaceDescriptor:
    """A compact metric space the estimators can sample and measure on."""

    kind: str
    bounds: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if self.kind not in _PERIODIC_KINDS:
            raise ValueError(f"unknown space kind {self.kind!r}")
        for lo, hi in self.bounds:
            if not hi > lo:
                raise ValueError("each axis needs lo < hi")

    @property
    def dim(self) -> int:
        return len(self.bounds)

    @property
    def periodic(self) -> bool:
        return _PERIODIC_KINDS[self.kind]

    @property
    def widths(self) -> np.ndarray:
        return np.array([hi - lo for lo, hi in self.bounds])

    @property
    def diameter(self) -> float:
        """Largest distance realized between two points of the space."""
        w = self.widths
        if self.periodic:
            return float(np.sum(w / 2.0))
        return float(np.sum(w))


def circle() -> SpaceDescriptor:
    return SpaceDescriptor(CIRCLE, ((0.0, 1.0),))


def interval() -> SpaceDescriptor:
    return SpaceDescriptor(INTERVAL, ((0.0, 1.0),))


def torus2() -> SpaceDescriptor:
    return SpaceDescriptor(TORUS2, ((0.0, 1.0), (0.0, 1.0)))


def box(bounds: Iterable[tuple[float, float]]) -> SpaceDescriptor:
    return SpaceDescriptor(BOX, tuple((float(lo), float(hi)) for lo, hi in bounds))


def canonicalize(space: SpaceDescriptor, coords: np.ndarray) -> np.ndarray:
    """Fold periodic coordinates into their fundamental domain."""
    coords = np.asarray(coords, dtype=float)
    if not space.periodic:
        return coords
    lo = np.array([b[0] for b in space.bounds])
    return lo + np.mod(coords - lo, space.widths)


def contains(space: SpaceDescriptor, coords: np.ndarray) -> np.ndarray:
    """Membership in the underlying set (always true on periodic spaces
    after canonicalization)."""
    coords = np.asarray(coords, dtype=float)
    if space.periodic:
        return np.ones(coords.shape[:-1], dtype=bool)
    lo = np.array([b[0] for b in space.bounds])
    hi = np.array([b[1] for b in space.bounds])
    return np.all((coords >= lo) & (coords <= hi), axis=-1)


def distance(space: SpaceDescriptor, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Sum over axes of per-axis distance; broadcasts over leading axes."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    diff = np.abs(a - b)
    if space.periodic:
        w = space.widths
        diff = np.minimum(diff, w - diff)
    return np.sum(diff, axis=-1)


@dataclass(frozen=True)
class Point:
    """A point of a space, canonicalized on construction."""

    space: SpaceDescriptor
    coords: tuple[float, ...]

    def __post_init__(self):
        arr = np.atleast_1d(np.asarray(self.coords, dtype=float))
        if arr.shape != (self.space.dim,):
            raise SpaceMismatchError(
                f"point has {arr.shape} coords, space is {self.space.dim}-dimensional")
        arr = canonicalize(self.space, arr)
        if not bool(contains(self.space, arr)):
            raise SpaceMismatchError(f"coords {tuple(arr)} outside {self.space.kind} bounds")
        object.__setattr__(self, "coords", tuple(float(v) for v in arr))

    @property
    def array(self) -> np.ndarray:
        return np.array(self.coords)


def point_distance(a: Point, b: Point) -> float:
    if a.space != b.space:
        raise SpaceMismatchError("points live on different spaces")
    return float(distance(a.space, a.array, b.array))


@dataclass(frozen=True)
class Ball:
    """Metric ball, closed by default."""

    center: Point
    radius: float
    open: bool = False

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("radius must be positive")

    @property
    def space(self) -> SpaceDescriptor:
        return self.center.space


def ball_contains(ball: Ball, coords: np.ndarray) -> np.ndarray:
    """Membership test, vectorized over rows of ``coords``."""
    d = distance(ball.space, ball.center.array, np.asarray(coords, dtype=float))
    return d < ball.radius if ball.open else d <= ball.radius


def random_points(space: SpaceDescriptor, seed: int, count: int, start: int = 0) -> np.ndarray:
    """Uniform sample of the space, shape (count, dim), reproducible per index."""
    u = uniform_block(seed, start, count, space.dim)
    lo = np.array([b[0] for b in space.bounds])
    return lo + u * space.widths


def probe_grid(space: SpaceDescriptor, count: int) -> np.ndarray:
    """Deterministic, roughly uniform probe points, shape (m, dim) with m >= count.

    Periodic axes drop the right endpoint, closed axes keep both.
    """
    if count < 1:
        raise ValueError("count must be positive")
    d = space.dim
    per_axis = int(np.ceil(count ** (1.0 / d)))
    axes = []
    for (lo, hi) in space.bounds:
        if space.periodic:
            axes.append(lo + (hi - lo) * np.arange(per_axis) / per_axis)
        else:
            axes.append(np.linspace(lo, hi, max(per_axis, 2)))
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


def make_ball_cover(space: SpaceDescriptor, radius: float, step: float) -> list[Ball]:
    """Balls of the given radius centered on a step-spaced grid.

    With step <= radius the result covers the space (sum metric: a point
    is within dim * step/2 of some center).
    """
    per_axis = max(int(np.ceil(space.widths.max() / step)), 1)
    cover = []
    for row in probe_grid(space, per_axis ** space.dim):
        cover.append(Ball(Point(space, tuple(row)), radius))
    return cover


def lebesgue_number(cover: list[Ball], space: SpaceDescriptor | None = None,
                    probe_count: int = 4096) -> float:
    """A delta such that every probed point's closed delta-ball sits inside
    one cover element.

    Conservative by construction: delta = 0.999 * min over probes of the
    best slack (element radius minus center distance).  Raises
    NotACoverError when some probe has no positive slack.
    """
    if not cover:
        raise NotACoverError("empty cover")
    space = space or cover[0].space
    for b in cover:
        if b.space != space:
            raise SpaceMismatchError("cover element space differs from the target space")
    probes = probe_grid(space, probe_count)
    centers = np.stack([b.center.array for b in cover])
    radii = np.array([b.radius for b in cover])
    # slack[p] = max over elements of r_j - d(probe_p, c_j)
    slack = np.full(len(probes), -np.inf)
    for j in range(len(cover)):
        d = distance(space, probes, centers[j])
        slack = np.maximum(slack, radii[j] - d)
    worst = slack.min()
    if worst <= 0:
        raise NotACoverError(f"probe point uncovered (worst slack {worst:.4g})")
    return float(0.999 * worst)
