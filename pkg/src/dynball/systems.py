"""The dynamical-system zoo and the analytic linear-map classifier.

System maps operate on coordinate batches of shape (count, dim) and must
keep iterates inside their space.  Two-sided orbit windows require an
inverse; Jacobians, when present, return (count, dim, dim) and feed the
volume-expanding detector.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import geometry as geo
from .denjoy import GOLDEN_CONJUGATE, DenjoyConstruction, build_denjoy
from .errors import CapabilityError, SpaceMismatchError

Map = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class SystemSpec:
    name: str
    space: geo.SpaceDescriptor
    forward: Map
    inverse: Optional[Map] = None
    jacobian: Optional[Map] = None
    invertible: bool = False
    isometry: bool = False
    params: dict = field(default_factory=dict)
    # canonical-measure verdict expectations, by measure name
    expected_verdicts: dict = field(default_factory=dict)

    def step(self, coords: np.ndarray, direction: int = 1) -> np.ndarray:
        if direction >= 0:
            return self.forward(coords)
        if self.inverse is None:
            raise CapabilityError(f"{self.name} has no inverse")
        return self.inverse(coords)


def iterate(f: SystemSpec, x, n: int):
    """f^n(x); negative n walks the inverse.

    Accepts a Point (returned as a Point) or a (count, dim) coordinate
    array (returned as an array)."""
    as_point = isinstance(x, geo.Point)
    if as_point:
        if x.space != f.space:
            raise SpaceMismatchError(f"point on {x.space.kind}, system on {f.space.kind}")
        coords = x.array.reshape(1, -1)
    else:
        coords = np.asarray(x, dtype=float)
    if n < 0 and not f.invertible:
        raise CapabilityError(f"{f.name} is not invertible; cannot iterate n={n}")
    step = f.forward if n >= 0 else f.inverse
    for _ in range(abs(n)):
        coords = step(coords)
    return geo.Point(f.space, tuple(coords[0])) if as_point else coords


def orbit(f: SystemSpec, coords: np.ndarray, n_steps: int, direction: int = 1) -> np.ndarray:
    """Stack of iterates 0..n_steps, shape (n_steps+1, count, dim)."""
    out = [np.asarray(coords, dtype=float)]
    for _ in range(n_steps):
        out.append(f.step(out[-1], direction))
    return np.stack(out)


def compose_power(f: SystemSpec, k: int) -> SystemSpec:
    """The power system f^k, with inverse and Jacobian chained when present."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if k == 1:
        return f

    def fwd(c, _f=f.forward, _k=k):
        for _ in range(_k):
            c = _f(c)
        return c

    inv = None
    if f.inverse is not None:
        def inv(c, _g=f.inverse, _k=k):
            for _ in range(_k):
                c = _g(c)
            return c

    jac = None
    if f.jacobian is not None:
        def jac(c, _f=f.forward, _j=f.jacobian, _k=k):
            total = _j(c)
            for _ in range(_k - 1):
                c = _f(c)
                total = _j(c) @ total
            return total

    return SystemSpec(
        name=f"{f.name}^{k}", space=f.space, forward=fwd, inverse=inv,
        jacobian=jac, invertible=f.invertible, isometry=f.isometry,
        params={**f.params, "power": k}, expected_verdicts=dict(f.expected_verdicts))


def _const_jacobian(matrix: np.ndarray) -> Map:
    m = np.asarray(matrix, dtype=float)

    def jac(c):
        return np.broadcast_to(m, (len(c), *m.shape)).copy()
    return jac


def make_identity(space: geo.SpaceDescriptor | None = None) -> SystemSpec:
    space = space or geo.circle()
    eye = np.eye(space.dim)
    return SystemSpec(
        name="identity", space=space,
        forward=lambda c: np.asarray(c, dtype=float).copy(),
        inverse=lambda c: np.asarray(c, dtype=float).copy(),
        jacobian=_const_jacobian(eye),
        invertible=True, isometry=True,
        expected_verdicts={"lebesgue": "evidence_not_expansive"})


def make_rotation(alpha: float = GOLDEN_CONJUGATE) -> SystemSpec:
    a = float(alpha)
    return SystemSpec(
        name="rotation", space=geo.circle(),
        forward=lambda c: (np.asarray(c, dtype=float) + a) % 1.0,
        inverse=lambda c: (np.asarray(c, dtype=float) - a) % 1.0,
        jacobian=_const_jacobian(np.eye(1)),
        invertible=True, isometry=True, params={"alpha": a},
        expected_verdicts={"lebesgue": "evidence_not_expansive"})


def make_doubling() -> SystemSpec:
    return SystemSpec(
        name="doubling", space=geo.circle(),
        forward=lambda c: (2.0 * np.asarray(c, dtype=float)) % 1.0,
        jacobian=_const_jacobian([[2.0]]),
        invertible=False,
        expected_verdicts={"lebesgue": "evidence_expansive"})


def make_tent() -> SystemSpec:
    def fwd(c):
        c = np.asarray(c, dtype=float)
        return 1.0 - np.abs(2.0 * c - 1.0)

    def jac(c):
        c = np.asarray(c, dtype=float)
        return np.where(c < 0.5, 2.0, -2.0)[..., None]

    return SystemSpec(
        name="tent", space=geo.interval(), forward=fwd, jacobian=jac,
        invertible=False,
        expected_verdicts={"lebesgue": "evidence_expansive"})


CAT_MATRIX = np.array([[2.0, 1.0], [1.0, 1.0]])
CAT_INVERSE = np.array([[1.0, -1.0], [-1.0, 2.0]])


def make_cat() -> SystemSpec:
    return SystemSpec(
        name="cat", space=geo.torus2(),
        forward=lambda c: (np.asarray(c, dtype=float) @ CAT_MATRIX.T) % 1.0,
        inverse=lambda c: (np.asarray(c, dtype=float) @ CAT_INVERSE.T) % 1.0,
        jacobian=_const_jacobian(CAT_MATRIX),
        invertible=True, params={"matrix": CAT_MATRIX.tolist()},
        expected_verdicts={"lebesgue": "evidence_expansive"})


def make_interval_square() -> SystemSpec:
    def fwd(c):
        return np.square(np.asarray(c, dtype=float))

    def inv(c):
        return np.sqrt(np.asarray(c, dtype=float))

    def jac(c):
        return 2.0 * np.asarray(c, dtype=float)[..., None]

    return SystemSpec(
        name="interval-square", space=geo.interval(),
        forward=fwd, inverse=inv, jacobian=jac, invertible=True,
        expected_verdicts={"lebesgue": "evidence_not_expansive"})


def make_denjoy(construction: DenjoyConstruction | None = None) -> SystemSpec:
    c = construction or build_denjoy()
    return SystemSpec(
        name="denjoy", space=geo.circle(),
        forward=c.forward, inverse=c.inverse,
        invertible=True, params={"alpha": c.alpha, "N": c.N},
        expected_verdicts={"denjoy-minimal": "evidence_expansive"})


def make_zoo(denjoy_construction: DenjoyConstruction | None = None) -> list[SystemSpec]:
    return [
        make_identity(),
        make_rotation(),
        make_doubling(),
        make_tent(),
        make_cat(),
        make_interval_square(),
        make_denjoy(denjoy_construction),
    ]


_FACTORIES = {
    "identity": make_identity,
    "rotation": make_rotation,
    "doubling": make_doubling,
    "tent": make_tent,
    "cat": make_cat,
    "interval-square": make_interval_square,
    "denjoy": make_denjoy,
}


def zoo_names() -> list[str]:
    return list(_FACTORIES)


def get_system(name: str, params: dict | None = None) -> SystemSpec:
    """Look up a zoo system by name; params feed the matching factory."""
    params = dict(params or {})
    if name not in _FACTORIES:
        raise KeyError(f"unknown system {name!r}; known: {', '.join(_FACTORIES)}")
    if name == "rotation":
        return make_rotation(float(params.pop("alpha", GOLDEN_CONJUGATE)))
    if name == "denjoy":
        kwargs = {}
        if "alpha" in params:
            kwargs["alpha"] = float(params.pop("alpha"))
        if "N" in params:
            kwargs["N"] = int(params.pop("N"))
        return make_denjoy(build_denjoy(**kwargs)) if kwargs else make_denjoy()
    return _FACTORIES[name]()


# ---------------------------------------------------------------------------
# linear maps on R^n: the bounded-orbit set {y : sup_n |A^n y| <= delta}
# is analyzed from the eigenstructure, never by sampling (Lebesgue on R^n
# is not a probability measure)

@dataclass(frozen=True)
class LinearMapSpec:
    matrix: np.ndarray

    def __post_init__(self):
        m = np.atleast_2d(np.asarray(self.matrix, dtype=float))
        if m.size and m.shape[0] != m.shape[1]:
            raise ValueError("matrix must be square")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return 0 if self.matrix.size == 0 else self.matrix.shape[0]

    @property
    def eigen_moduli(self) -> np.ndarray:
        if self.dim == 0:
            return np.array([])
        return np.abs(np.linalg.eigvals(self.matrix))


@dataclass(frozen=True)
class GammaZeroReport:
    classification: str          # trivial | positive_volume | lower_dimensional
    jordan_caveat: bool
    eigen_moduli: tuple[float, ...]


def linear_gamma_zero(m: LinearMapSpec, delta: float, tol: float = 1e-9) -> GammaZeroReport:
    """Classify the set of vectors whose full A-orbit stays inside the
    delta-ball at the origin.

    Any eigenvalue off the unit circle confines that set to a proper
    subspace (Lebesgue-null, so the map is Leb-expansive); all moduli 1
    with A power-bounded (diagonalizable) leaves a small ball inside it
    (positive volume); modulus-1 Jordan blocks grow polynomially, which
    again forces a proper subspace, flagged separately.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    if not isinstance(m, LinearMapSpec):
        m = LinearMapSpec(np.asarray(m, dtype=float))
    if m.dim == 0:
        return GammaZeroReport("trivial", False, ())
    if abs(np.linalg.det(m.matrix)) < tol:
        raise ValueError("matrix must be invertible")
    moduli = m.eigen_moduli
    off_circle = np.any(np.abs(moduli - 1.0) > tol)
    if off_circle:
        return GammaZeroReport("lower_dimensional", False, tuple(moduli))
    # all moduli 1: diagonalizable iff every eigenvalue's geometric
    # multiplicity matches its algebraic multiplicity
    vals = np.linalg.eigvals(m.matrix)
    caveat = False
    seen: list[complex] = []
    for lam in vals:
        if any(abs(lam - s) <= 1e-7 for s in seen):
            continue
        seen.append(lam)
        alg = int(np.sum(np.abs(vals - lam) <= 1e-7))
        geom = m.dim - np.linalg.matrix_rank(m.matrix - lam * np.eye(m.dim), tol=1e-9)
        if geom < alg:
            caveat = True
    if caveat:
        return GammaZeroReport("lower_dimensional", True, tuple(moduli))
    return GammaZeroReport("positive_volume", False, tuple(moduli))
