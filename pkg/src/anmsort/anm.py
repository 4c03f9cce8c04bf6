"""Linear additive noise models: parameter sampling, data generation, analytics."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import optimize

from .graphs import Dag, topological_order


class DegenerateColumnError(ValueError):
    """A column has zero empirical variance."""

    def __init__(self, column, message=None):
        self.column = column
        super().__init__(message or f"column {column!r} is constant")


@dataclass(frozen=True)
class WeightDist:
    """Uniform on ``(-hi, -lo) U (lo, hi)``."""

    lo: float = 0.5
    hi: float = 2.0

    def __post_init__(self):
        if not 0 < self.lo < self.hi:
            raise ValueError(f"need 0 < lo < hi, got lo={self.lo}, hi={self.hi}")

    def sample(self, size, rng: np.random.Generator) -> np.ndarray:
        magnitude = rng.uniform(self.lo, self.hi, size=size)
        sign = rng.choice((-1.0, 1.0), size=size)
        return sign * magnitude


@dataclass(frozen=True)
class SigmaDist:
    """Distribution of noise standard deviations.

    ``kind="uniform"`` uses ``lo``/``hi``; ``kind="exponential"`` uses ``rate``
    (mean ``1 / rate``).
    """

    kind: str = "uniform"
    lo: float = 0.5
    hi: float = 2.0
    rate: float = 1.0

    def __post_init__(self):
        if self.kind == "uniform":
            if not 0 < self.lo <= self.hi:
                raise ValueError(f"need 0 < lo <= hi, got lo={self.lo}, hi={self.hi}")
        elif self.kind == "exponential":
            if not self.rate > 0:
                raise ValueError(f"exponential rate must be positive, got {self.rate}")
        else:
            raise ValueError(f"unknown sigma distribution {self.kind!r}")

    @classmethod
    def uniform(cls, lo: float, hi: float) -> "SigmaDist":
        return cls("uniform", lo=lo, hi=hi)

    @classmethod
    def exponential(cls, rate: float) -> "SigmaDist":
        return cls("exponential", rate=rate)

    def sample(self, size, rng: np.random.Generator) -> np.ndarray:
        if self.kind == "uniform":
            return rng.uniform(self.lo, self.hi, size=size)
        out = rng.exponential(1.0 / self.rate, size=size)
        # an exact zero would give a degenerate noise term
        return np.where(out > 0, out, np.finfo(float).tiny)


NOISE_FAMILIES = ("gaussian", "uniform")


def draw_noise(family: str, sigma, n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` draws of zero-mean noise with standard deviation ``sigma`` (per column)."""
    sigma = np.asarray(sigma, dtype=float)
    shape = (n,) + sigma.shape
    if family == "gaussian":
        return rng.normal(0.0, 1.0, size=shape) * sigma
    if family == "uniform":
        half_width = math.sqrt(3.0)
        return rng.uniform(-half_width, half_width, size=shape) * sigma
    raise ValueError(f"unknown noise family {family!r}; choose from {NOISE_FAMILIES}")


@dataclass(frozen=True)
class NoiseSpec:
    family: str = "gaussian"
    sigma_dist: SigmaDist = SigmaDist()

    def __post_init__(self):
        if self.family not in NOISE_FAMILIES:
            raise ValueError(f"unknown noise family {self.family!r}")


@dataclass(frozen=True, eq=False)
class AnmInstance:
    """Weighted DAG plus per-node noise standard deviations.

    ``weights[s, t]`` is the coefficient of ``X_s`` in the equation of ``X_t``.
    """

    dag: Dag
    weights: np.ndarray
    sigma: np.ndarray
    noise_family: str = "gaussian"

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        sigma = np.array(self.sigma, dtype=float)
        d = self.dag.d
        if w.shape != (d, d) or sigma.shape != (d,):
            raise ValueError("weights must be (d, d) and sigma (d,)")
        if np.any((w != 0) & (self.dag.adjacency == 0)):
            raise ValueError("nonzero weight outside the DAG's edge set")
        if not np.all(sigma > 0):
            raise ValueError("noise standard deviations must be positive")
        if self.noise_family not in NOISE_FAMILIES:
            raise ValueError(f"unknown noise family {self.noise_family!r}")
        w.setflags(write=False)
        sigma.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "sigma", sigma)

    @property
    def d(self) -> int:
        return self.dag.d


@dataclass(frozen=True, eq=False)
class Dataset:
    values: np.ndarray
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        x = np.array(self.values, dtype=float)
        if x.ndim != 2:
            raise ValueError("dataset values must be a 2-d array")
        if x.shape[0] < 2:
            raise ValueError("a dataset needs at least two observations")
        if not np.isfinite(x).all():
            raise ValueError("dataset contains non-finite values")
        if self.names is not None:
            names = tuple(str(v) for v in self.names)
            if len(names) != x.shape[1]:
                raise ValueError("number of names does not match column count")
            object.__setattr__(self, "names", names)
        x.setflags(write=False)
        object.__setattr__(self, "values", x)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def d(self) -> int:
        return self.values.shape[1]

    def column_name(self, t: int) -> str:
        return self.names[t] if self.names else f"X{t}"


def as_array(data) -> np.ndarray:
    """Accept a :class:`Dataset` or anything array-like."""
    if isinstance(data, Dataset):
        return data.values
    return np.asarray(data, dtype=float)


def sample_instance(
    g: Dag, wdist: WeightDist, noise: NoiseSpec, rng: np.random.Generator
) -> AnmInstance:
    d = g.d
    beta = wdist.sample((d, d), rng)
    sigma = noise.sigma_dist.sample(d, rng)
    return AnmInstance(g, g.adjacency * beta, sigma, noise.family)


def sample_data(inst: AnmInstance, n: int, rng: np.random.Generator) -> Dataset:
    """Draw ``n`` observations by propagating noise along a topological order."""
    if n < 2:
        raise ValueError("need n >= 2")
    x = draw_noise(inst.noise_family, inst.sigma, n, rng)
    w = inst.weights
    for t in topological_order(inst.dag):
        pa = inst.dag.parents(t)
        if pa.size:
            x[:, t] += x[:, pa] @ w[pa, t]
    return Dataset(x)


def standardize(data) -> Dataset:
    x = as_array(data)
    names = data.names if isinstance(data, Dataset) else None
    mean = x.mean(axis=0)
    std = x.std(axis=0)
    for t in np.flatnonzero(~(std > 0)):
        label = names[t] if names else int(t)
        raise DegenerateColumnError(label)
    return Dataset((x - mean) / std, names)


def analytic_covariance(inst: AnmInstance) -> np.ndarray:
    """Population covariance ``(I - W^T)^-1 diag(sigma^2) (I - W)^-1``."""
    d = inst.d
    mixing = np.linalg.inv(np.eye(d) - inst.weights.T)
    cov = (mixing * inst.sigma**2) @ mixing.T
    return (cov + cov.T) / 2


def total_effects(inst: AnmInstance) -> np.ndarray:
    """``effects[i, j]``: sum over directed paths i -> j of weight products."""
    d = inst.d
    return np.linalg.inv(np.eye(d) - inst.weights) - np.eye(d)


def expected_log_abs_weight(wdist: WeightDist) -> float:
    """E[log|V|] for V uniform on ``(-hi, -lo) U (lo, hi)``."""
    a, b = wdist.hi, wdist.lo
    return (a * math.log(a) - a - b * math.log(b) + b) / (a - b)


def solve_alpha_for_target(target: float, lo: float, xtol: float = 1e-12) -> float:
    """Outer bound ``hi`` such that ``Unif(+-(lo, hi))`` has E[log|V|] == target."""
    if not lo > 0:
        raise ValueError("inner bound must be positive")
    floor = math.log(lo)
    if not target > floor:
        raise ValueError(
            f"target {target} is unreachable: E[log|V|] > log(lo) = {floor:.6g} for every hi > lo"
        )

    def gap(hi):
        return expected_log_abs_weight(WeightDist(lo, hi)) - target

    lower = lo * (1 + 1e-12)
    if gap(lower) >= 0:
        return lower
    upper = 2 * lo
    while gap(upper) < 0:
        upper *= 2
    return optimize.bisect(gap, lower, upper, xtol=xtol * lo, maxiter=500)


def chain_variance_lower_bound(weights: Sequence[float], sigma0: float) -> float:
    """``sigma0**2 * sum(log|w|)``, a lower bound on the terminal chain variance."""
    w = np.asarray(weights, dtype=float)
    if w.size == 0:
        raise ValueError("need at least one chain weight")
    if not sigma0 > 0:
        raise ValueError("sigma0 must be positive")
    if np.any(w == 0):
        raise ValueError("a zero weight makes the chain degenerate")
    return float(sigma0**2 * np.log(np.abs(w)).sum())


def chain_variances(weights: Sequence[float], sigma: Sequence[float]) -> np.ndarray:
    """Exact variances ``Var(X_0..X_p)`` of the chain ``X_0 -> ... -> X_p``."""
    w = np.asarray(weights, dtype=float)
    s = np.asarray(sigma, dtype=float)
    if s.size != w.size + 1:
        raise ValueError("a chain with p weights needs p + 1 noise scales")
    out = np.empty(s.size)
    out[0] = s[0] ** 2
    for k in range(1, s.size):
        out[k] = w[k - 1] ** 2 * out[k - 1] + s[k] ** 2
    return out


def chain_instance(weights: Sequence[float], sigma: Sequence[float], family="gaussian") -> AnmInstance:
    w = np.asarray(weights, dtype=float)
    p = w.size
    g = Dag.from_edges(p + 1, [(k, k + 1) for k in range(p)])
    wm = np.zeros((p + 1, p + 1))
    wm[np.arange(p), np.arange(1, p + 1)] = w
    return AnmInstance(g, wm, np.asarray(sigma, dtype=float), family)
