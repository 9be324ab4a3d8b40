"""Dynamical-ball survival estimators and expansiveness verdicts.

A point y survives window n around a center x when every orbit
comparison d(f^i(x), f^i(y)) <= delta holds for i in the window:
one_sided uses 0 <= i < n, two_sided uses -n <= i < n.  Windows are
nested, so survival counts from a single sample batch are exactly
nonincreasing in n, and the terminal count estimates the measure of the
infinite-window set (the liminf of the window measures).

A verdict at radius delta is Monte-Carlo evidence, never proof:
``evidence_expansive`` when even the worst probe's terminal upper
confidence bound is at or below the threshold, ``evidence_not_expansive``
when some probe's lower bound stays at or above it (that probe is the
witness), ``inconclusive`` otherwise.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import geometry as geo
from .errors import CapabilityError, SpaceMismatchError
from .measures import MeasureSpec
from .rng import derive_seed
from .stats import wilson_interval
from .systems import SystemSpec, compose_power

ONE_SIDED = "one_sided"
TWO_SIDED = "two_sided"


def resolve_sided(f: SystemSpec, sided: str | None) -> str:
    """Default: bi-infinite windows for invertible systems, forward otherwise."""
    if sided is None:
        return TWO_SIDED if f.invertible else ONE_SIDED
    alias = {"one": ONE_SIDED, "two": TWO_SIDED, ONE_SIDED: ONE_SIDED, TWO_SIDED: TWO_SIDED}
    if sided not in alias:
        raise ValueError(f"sided must be one_sided or two_sided, got {sided!r}")
    sided = alias[sided]
    if sided == TWO_SIDED and not f.invertible:
        raise CapabilityError(f"{f.name} has no inverse; two_sided windows unavailable")
    return sided


def _pair_distance(space: geo.SpaceDescriptor, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Distance matrix (len(xs), len(ys)) under the sum metric, axis by axis
    to avoid a (P, S, dim) temporary."""
    total = None
    for ax in range(space.dim):
        diff = np.abs(xs[:, ax, None] - ys[None, :, ax])
        if space.periodic:
            w = space.widths[ax]
            diff = np.minimum(diff, w - diff)
        total = diff if total is None else total + diff
    return total


def survival_counts(f: SystemSpec, batch: np.ndarray, centers: np.ndarray,
                    deltas: Sequence[float], sided: str, n_max: int) -> np.ndarray:
    """counts[d, p, n-1] = samples within deltas[d] of center p's orbit
    through window n.  One shared batch serves every (delta, center) cell."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    deltas_arr = np.asarray(list(deltas), dtype=float)
    if np.any(deltas_arr <= 0):
        raise ValueError("deltas must be positive")
    two = sided == TWO_SIDED
    if two and not f.invertible:
        raise CapabilityError(f"{f.name} has no inverse; two_sided windows unavailable")

    D, P = len(deltas_arr), len(centers)
    alive = np.ones((D, P, len(batch)), dtype=bool)
    counts = np.empty((D, P, n_max), dtype=np.int64)
    yf, xf = batch, centers
    yb, xb = batch, centers
    for n in range(1, n_max + 1):
        dist = _pair_distance(f.space, xf, yf)
        alive &= dist[None] <= deltas_arr[:, None, None]
        if two:
            yb = f.inverse(yb)
            xb = f.inverse(xb)
            dist = _pair_distance(f.space, xb, yb)
            alive &= dist[None] <= deltas_arr[:, None, None]
        counts[:, :, n - 1] = alive.sum(axis=2)
        if n < n_max:
            yf = f.forward(yf)
            xf = f.forward(xf)
    return counts


@dataclass(frozen=True)
class DynBallQuery:
    x: geo.Point
    delta: float
    n: int
    sided: str = TWO_SIDED

    def __post_init__(self):
        if self.delta <= 0 or self.n < 1:
            raise ValueError("need delta > 0 and n >= 1")


def dyn_ball_contains(f: SystemSpec, q: DynBallQuery, y):
    """Membership of y in the window set of the query.

    y may be a Point or a 1-D coordinate vector (returns a bool) or a
    (count, dim) array (returns a bool vector)."""
    x = q.x
    if isinstance(x, geo.Point):
        if x.space != f.space:
            raise SpaceMismatchError("query center must live on the system's space")
        x_arr = x.array
    else:
        x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    single = isinstance(y, geo.Point) or np.asarray(y).ndim == 1
    if isinstance(y, geo.Point):
        if y.space != f.space:
            raise SpaceMismatchError("point must live on the system's space")
        ys = y.array[None, :]
    else:
        ys = np.atleast_2d(np.asarray(y, dtype=float))
    sided = resolve_sided(f, q.sided)
    # the distance condition is symmetric in (x, y): treat each y as a
    # center and the single x as the batch to get per-point membership
    counts = survival_counts(f, x_arr[None, :], ys, [q.delta], sided, q.n)
    hits = counts[0, :, -1] == 1
    return bool(hits[0]) if single else hits


@dataclass(frozen=True)
class DecaySeries:
    x: Optional[tuple]
    delta: float
    sided: str
    n_values: tuple[int, ...]
    counts: tuple[int, ...]
    estimates: tuple[float, ...]
    ci_low: tuple[float, ...]
    ci_high: tuple[float, ...]
    sample_count: int
    seed: int

    @property
    def terminal(self) -> float:
        return self.estimates[-1]

    def to_dict(self) -> dict:
        return {
            "x": list(self.x) if self.x is not None else None,
            "delta": self.delta, "sided": self.sided,
            "n": list(self.n_values), "counts": list(self.counts),
            "estimate": list(self.estimates),
            "ci_low": list(self.ci_low), "ci_high": list(self.ci_high),
            "samples": self.sample_count, "seed": self.seed,
        }


def _series_from_counts(x, delta, sided, counts_1d, samples, seed) -> DecaySeries:
    est = counts_1d / samples
    lo, hi = wilson_interval(counts_1d, samples)
    return DecaySeries(
        x=tuple(x) if x is not None else None, delta=float(delta), sided=sided,
        n_values=tuple(range(1, len(counts_1d) + 1)),
        counts=tuple(int(c) for c in counts_1d),
        estimates=tuple(float(v) for v in est),
        ci_low=tuple(float(v) for v in lo), ci_high=tuple(float(v) for v in hi),
        sample_count=int(samples), seed=int(seed))


def decay_series(f: SystemSpec, mu: MeasureSpec, x: geo.Point, delta: float,
                 sided: str | None = None, n_max: int = 30,
                 samples: int = 100_000, seed: int = 0) -> DecaySeries:
    """Window-measure estimates at a single center from one sample batch."""
    if samples < 100:
        raise ValueError("samples must be >= 100")
    if not isinstance(x, geo.Point):
        x = geo.Point(f.space, tuple(np.atleast_1d(np.asarray(x, dtype=float))))
    if mu.space != f.space or x.space != f.space:
        raise SpaceMismatchError("system, measure, and center must share a space")
    sided = resolve_sided(f, sided)
    batch = mu.sample_coords(seed, samples)
    counts = survival_counts(f, batch, x.array[None, :], [delta], sided, n_max)
    return _series_from_counts(x.coords, delta, sided, counts[0, 0], samples, seed)


@dataclass(frozen=True)
class ExpansivenessVerdict:
    verdict: str
    delta: float
    threshold: float
    sided: str
    x_probe_count: int
    worst_upper_bound: float
    witness: Optional[tuple]
    witness_lower_bound: float
    n_max: int
    sample_count: int
    seed: int
    per_probe_terminal: tuple[float, ...] = field(repr=False, default=())
    per_probe_upper: tuple[float, ...] = field(repr=False, default=())
    per_probe_lower: tuple[float, ...] = field(repr=False, default=())

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict, "delta": self.delta,
            "threshold": self.threshold, "sided": self.sided,
            "x_probes": self.x_probe_count,
            "worst_upper_bound": self.worst_upper_bound,
            "witness": list(self.witness) if self.witness is not None else None,
            "witness_lower_bound": self.witness_lower_bound,
            "n_max": self.n_max, "samples": self.sample_count, "seed": self.seed,
            "per_probe_terminal": list(self.per_probe_terminal),
            "per_probe_upper": list(self.per_probe_upper),
            "per_probe_lower": list(self.per_probe_lower),
        }


def expansiveness_verdict(f: SystemSpec, mu: MeasureSpec, delta: float,
                          n_max: int = 30, samples: int = 100_000,
                          x_probes: int = 20, threshold: float = 0.01,
                          seed: int = 0, sided: str | None = None) -> ExpansivenessVerdict:
    """Three-valued verdict from terminal window masses at measure-sampled probes."""
    if threshold <= 0:
        raise ValueError("threshold must be positive")
    if x_probes < 20:
        raise ValueError("x_probes must be >= 20")
    if mu.space != f.space:
        raise SpaceMismatchError("system and measure must share a space")
    sided = resolve_sided(f, sided)
    probes = mu.sample_coords(derive_seed(seed, "probes"), x_probes)
    batch = mu.sample_coords(derive_seed(seed, "batch"), samples)
    counts = survival_counts(f, batch, probes, [delta], sided, n_max)
    terminal = counts[0, :, -1]
    lo, hi = wilson_interval(terminal, samples)
    worst_upper = float(hi.max())
    wit_idx = int(np.argmax(lo))
    witness_lower = float(lo[wit_idx])
    if worst_upper <= threshold:
        verdict, witness = "evidence_expansive", None
    elif witness_lower >= threshold:
        verdict, witness = "evidence_not_expansive", tuple(probes[wit_idx])
    else:
        verdict, witness = "inconclusive", None
    return ExpansivenessVerdict(
        verdict=verdict, delta=float(delta), threshold=float(threshold),
        sided=sided, x_probe_count=int(x_probes), worst_upper_bound=worst_upper,
        witness=witness, witness_lower_bound=witness_lower,
        n_max=int(n_max), sample_count=int(samples), seed=int(seed),
        per_probe_terminal=tuple(float(v) for v in terminal / samples),
        per_probe_upper=tuple(float(v) for v in hi),
        per_probe_lower=tuple(float(v) for v in lo))


@dataclass(frozen=True)
class PowerConsistencyReport:
    k: int
    delta_grid: tuple[float, ...]
    verdicts_base: tuple[str, ...]
    verdicts_power: tuple[str, ...]
    matched_pairs: tuple[tuple[float, float], ...]
    contradiction: bool

    @property
    def consistent(self) -> bool:
        return not self.contradiction

    def to_dict(self) -> dict:
        return {
            "k": self.k, "delta_grid": list(self.delta_grid),
            "verdicts_base": list(self.verdicts_base),
            "verdicts_power": list(self.verdicts_power),
            "matched_pairs": [list(p) for p in self.matched_pairs],
            "consistent": self.consistent,
        }


def power_consistency_check(f: SystemSpec, mu: MeasureSpec, k: int,
                            delta_grid: Sequence[float], n_max: int = 20,
                            samples: int = 30_000, x_probes: int = 20,
                            threshold: float = 0.01, seed: int = 0,
                            sided: str | None = None) -> PowerConsistencyReport:
    """Same-verdict evidence for f and f^k over a radius grid.

    A contradiction means one map looks expansive at every tested radius
    while the other looks non-expansive at every tested radius; anything
    short of that is consistent with expansiveness transferring between
    f and its powers at adjusted radii.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    fk = compose_power(f, k)
    vb, vp = [], []
    for d in delta_grid:
        vb.append(expansiveness_verdict(
            f, mu, d, n_max=n_max, samples=samples, x_probes=x_probes,
            threshold=threshold, seed=derive_seed(seed, "base", repr(d)),
            sided=sided).verdict)
        vp.append(expansiveness_verdict(
            fk, mu, d, n_max=n_max, samples=samples, x_probes=x_probes,
            threshold=threshold, seed=derive_seed(seed, "power", repr(d)),
            sided=sided).verdict)
    matched = tuple(
        (db, dp)
        for db, b in zip(delta_grid, vb) if b == "evidence_expansive"
        for dp, p in zip(delta_grid, vp) if p == "evidence_expansive")
    exp, not_exp = "evidence_expansive", "evidence_not_expansive"
    contradiction = (all(v == exp for v in vb) and all(v == not_exp for v in vp)) or \
                    (all(v == not_exp for v in vb) and all(v == exp for v in vp))
    return PowerConsistencyReport(
        k=int(k), delta_grid=tuple(float(d) for d in delta_grid),
        verdicts_base=tuple(vb), verdicts_power=tuple(vp),
        matched_pairs=matched, contradiction=contradiction)


@dataclass(frozen=True)
class DiagonalReport:
    series: DecaySeries
    fubini_mean: float
    fubini_ci_low: float
    fubini_ci_high: float
    fubini_probes: int
    agree: bool

    def to_dict(self) -> dict:
        return {
            "pair_series": self.series.to_dict(),
            "fubini_mean": self.fubini_mean,
            "fubini_ci": [self.fubini_ci_low, self.fubini_ci_high],
            "fubini_probes": self.fubini_probes,
            "agree": self.agree,
        }


def product_diagonal_test(f: SystemSpec, mu: MeasureSpec, delta: float,
                          n_max: int = 12, pair_samples: int = 100_000,
                          seed: int = 0, sided: str | None = None,
                          fubini_probes: int = 40) -> DiagonalReport:
    """Mass of pairs staying within delta of the diagonal along the window.

    Independent pairs (x, y) ~ mu x mu survive window n when every orbit
    comparison stays within delta; this equals the product-measure mass
    of the diagonal tube intersected over iterates.  Cross-check: by
    Fubini the same number is the mu-average over centers x of the
    window mass at x, estimated from probe-averaged decay terminals.
    """
    if mu.space != f.space:
        raise SpaceMismatchError("system and measure must share a space")
    sided = resolve_sided(f, sided)
    two = sided == TWO_SIDED
    xs = mu.sample_coords(derive_seed(seed, "pair-left"), pair_samples)
    ys = mu.sample_coords(derive_seed(seed, "pair-right"), pair_samples)

    def rowwise(a, b):
        diff = np.abs(a - b)
        if f.space.periodic:
            diff = np.minimum(diff, f.space.widths - diff)
        return diff.sum(axis=1)

    alive = np.ones(pair_samples, dtype=bool)
    counts = np.empty(n_max, dtype=np.int64)
    xf, yf, xb, yb = xs, ys, xs, ys
    for n in range(1, n_max + 1):
        alive &= rowwise(xf, yf) <= delta
        if two:
            xb, yb = f.inverse(xb), f.inverse(yb)
            alive &= rowwise(xb, yb) <= delta
        counts[n - 1] = alive.sum()
        if n < n_max:
            xf, yf = f.forward(xf), f.forward(yf)
    series = _series_from_counts(None, delta, sided, counts, pair_samples, seed)

    probes = mu.sample_coords(derive_seed(seed, "fubini-probes"), fubini_probes)
    batch = mu.sample_coords(derive_seed(seed, "fubini-batch"), pair_samples)
    pc = survival_counts(f, batch, probes, [delta], sided, n_max)
    terminals = pc[0, :, -1] / pair_samples
    mean = float(terminals.mean())
    se = float(terminals.std(ddof=1) / np.sqrt(fubini_probes))
    lo, hi = mean - 1.96 * se, mean + 1.96 * se
    agree = (series.ci_low[-1] <= hi) and (lo <= series.ci_high[-1])
    return DiagonalReport(series=series, fubini_mean=mean,
                          fubini_ci_low=lo, fubini_ci_high=hi,
                          fubini_probes=int(fubini_probes), agree=agree)


@dataclass(frozen=True)
class GeneratorReport:
    cover_size: int
    lebesgue_delta: float
    sequences_tested: int
    max_intersection_estimate: float
    max_upper_ci: float
    is_generator_evidence: bool
    threshold: float
    sided: str
    n_max: int
    per_sequence: tuple[float, ...] = field(repr=False, default=())

    def to_dict(self) -> dict:
        return {
            "cover_size": self.cover_size, "lebesgue_delta": self.lebesgue_delta,
            "sequences_tested": self.sequences_tested,
            "max_intersection_estimate": self.max_intersection_estimate,
            "max_upper_ci": self.max_upper_ci,
            "is_generator_evidence": self.is_generator_evidence,
            "threshold": self.threshold, "sided": self.sided, "n_max": self.n_max,
            "per_sequence": list(self.per_sequence),
        }


def generator_check(f: SystemSpec, mu: MeasureSpec, cover: list[geo.Ball],
                    n_max: int = 10, sequence_samples: int = 32,
                    mc_samples: int = 100_000, seed: int = 0,
                    threshold: float = 0.01, sided: str | None = None) -> GeneratorReport:
    """Worst-case mass of orbit-constrained intersections over a ball cover.

    For each tested sequence (A_n) of cover elements the estimator
    measures the set of y whose iterate f^n(y) lies in Cl(A_n) for every
    n in the window.  Sequences come in two flavors: uniformly random
    indices, and adversarial sequences that follow a measure-sampled
    pilot orbit, always picking the element holding that iterate deepest.
    Evidence for a generator means even the worst sequence's upper CI
    stays at or below the threshold.
    """
    sided = resolve_sided(f, sided)
    leb_delta = geo.lebesgue_number(cover)  # raises NotACoverError if not a cover
    centers = np.stack([b.center.array for b in cover])
    radii = np.array([b.radius for b in cover])
    window = list(range(-n_max, n_max + 1)) if sided == TWO_SIDED else list(range(n_max + 1))

    n_adv = sequence_samples // 2
    n_rand = sequence_samples - n_adv
    pilots = mu.sample_coords(derive_seed(seed, "pilots"), max(n_adv, 1))

    # adversarial: deepest-containment element along each pilot orbit
    seq_idx = np.empty((sequence_samples, len(window)), dtype=np.int64)
    pos = {n: i for i, n in enumerate(window)}
    cur = pilots.copy()
    for n in sorted(n for n in window if n >= 0):
        if n > 0:
            cur = f.forward(cur)
        slack = radii[None, :] - _pair_distance(f.space, cur, centers)
        seq_idx[:n_adv, pos[n]] = np.argmax(slack[:n_adv], axis=1)
    cur = pilots.copy()
    for n in sorted((n for n in window if n < 0), reverse=True):
        cur = f.inverse(cur)
        slack = radii[None, :] - _pair_distance(f.space, cur, centers)
        seq_idx[:n_adv, pos[n]] = np.argmax(slack[:n_adv], axis=1)

    from numpy.random import Generator, Philox
    rng = Generator(Philox(key=derive_seed(seed, "random-sequences")))
    seq_idx[n_adv:] = rng.integers(0, len(cover), size=(n_rand, len(window)))

    batch = mu.sample_coords(derive_seed(seed, "batch"), mc_samples)
    alive = np.ones((sequence_samples, mc_samples), dtype=bool)
    cur = batch
    for n in sorted(n for n in window if n >= 0):
        if n > 0:
            cur = f.forward(cur)
        used = np.unique(seq_idx[:, pos[n]])
        dist = _pair_distance(f.space, centers[used], cur)
        member = dist <= radii[used, None]
        remap = np.searchsorted(used, seq_idx[:, pos[n]])
        alive &= member[remap]
    cur = batch
    for n in sorted((n for n in window if n < 0), reverse=True):
        cur = f.inverse(cur)
        used = np.unique(seq_idx[:, pos[n]])
        dist = _pair_distance(f.space, centers[used], cur)
        member = dist <= radii[used, None]
        remap = np.searchsorted(used, seq_idx[:, pos[n]])
        alive &= member[remap]

    per_seq = alive.sum(axis=1)
    est = per_seq / mc_samples
    _, hi = wilson_interval(per_seq, mc_samples)
    max_upper = float(np.max(hi))
    return GeneratorReport(
        cover_size=len(cover), lebesgue_delta=float(leb_delta),
        sequences_tested=int(sequence_samples),
        max_intersection_estimate=float(est.max()),
        max_upper_ci=max_upper,
        is_generator_evidence=bool(max_upper <= threshold),
        threshold=float(threshold), sided=sided, n_max=int(n_max),
        per_sequence=tuple(float(v) for v in est))


@dataclass(frozen=True)
class FractionEstimate:
    fraction: float
    ci_low: float
    ci_high: float
    hits: int
    sample_count: int
    seed: int

    def to_dict(self) -> dict:
        return {"fraction": self.fraction, "ci_low": self.ci_low,
                "ci_high": self.ci_high, "hits": self.hits,
                "samples": self.sample_count, "seed": self.seed}


def _tail_spread(space: geo.SpaceDescriptor, tail: list[np.ndarray]) -> np.ndarray:
    """Max pairwise distance within each sample's tail segment."""
    spread = np.zeros(len(tail[0]))
    for i in range(len(tail)):
        for j in range(i + 1, len(tail)):
            diff = np.abs(tail[i] - tail[j])
            if space.periodic:
                diff = np.minimum(diff, space.widths - diff)
            spread = np.maximum(spread, diff.sum(axis=1))
    return spread


def converging_semiorbit_fraction(f: SystemSpec, mu: MeasureSpec, w: int = 8,
                                  tol: float = 1e-6, n_max: int = 40,
                                  samples: int = 100_000, seed: int = 0) -> FractionEstimate:
    """Fraction of samples whose forward AND backward orbits look Cauchy
    over the final w iterates (tail spread <= tol).

    Finite-horizon convergence is necessary, not sufficient, so the
    estimate is biased toward detection; it is used as a one-sided
    consistency check.
    """
    if not f.invertible:
        raise CapabilityError(f"{f.name} has no inverse; backward limit sets unavailable")
    if w < 2 or n_max <= w:
        raise ValueError("need w >= 2 and n_max > w")
    if tol <= 0:
        raise ValueError("tol must be positive")
    batch = mu.sample_coords(seed, samples)
    converged = np.ones(samples, dtype=bool)
    for direction in (1, -1):
        cur = batch
        tail: list[np.ndarray] = []
        for n in range(1, n_max + 1):
            cur = f.step(cur, direction)
            if n > n_max - w:
                tail.append(cur)
        converged &= _tail_spread(f.space, tail) <= tol
    hits = int(converged.sum())
    lo, hi = wilson_interval(hits, samples)
    return FractionEstimate(fraction=hits / samples, ci_low=lo, ci_high=hi,
                            hits=hits, sample_count=int(samples), seed=int(seed))


def periodic_fraction(f: SystemSpec, mu: MeasureSpec, max_period: int = 6,
                      eps: float = 1e-4, samples: int = 100_000,
                      seed: int = 0) -> FractionEstimate:
    """Fraction of samples within eps of closing up at some period <= max_period."""
    if max_period < 1 or eps <= 0:
        raise ValueError("need max_period >= 1 and eps > 0")
    batch = mu.sample_coords(seed, samples)
    near = np.zeros(samples, dtype=bool)
    cur = batch
    for _ in range(max_period):
        cur = f.forward(cur)
        diff = np.abs(cur - batch)
        if f.space.periodic:
            diff = np.minimum(diff, f.space.widths - diff)
        near |= diff.sum(axis=1) <= eps
    hits = int(near.sum())
    lo, hi = wilson_interval(hits, samples)
    return FractionEstimate(fraction=hits / samples, ci_low=lo, ci_high=hi,
                            hits=hits, sample_count=int(samples), seed=int(seed))
