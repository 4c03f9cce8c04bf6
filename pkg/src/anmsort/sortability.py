"""Tau-sortability: agreement between a per-node criterion and the causal order.

Three ways of weighting cause-effect pairs are supported:

``unique_length``
    one term per pair and per path length with at least one path,
``path_existence``
    one term per connected pair,
``path_count``
    one term per directed path.

Each term scores 1 if the criterion increases from cause to effect, 1/2 on a
tie and 0 otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from .anm import as_array
from .graphs import Dag, PathLengthIndex, path_length_index
from .regression import r_squared


class Weighting(str, Enum):
    UNIQUE_LENGTH = "unique_length"
    PATH_EXISTENCE = "path_existence"
    PATH_COUNT = "path_count"


class UndefinedSortabilityError(ValueError):
    """The graph has no directed path, so sortability is 0/0."""


class SaturatedPathCountError(ValueError):
    """Path counts overflowed; path-count weighting cannot be computed exactly."""


@dataclass(frozen=True, eq=False)
class SortabilityReport:
    tau: np.ndarray
    fraction: Fraction
    criterion: str
    weighting: Weighting
    ties: int

    @property
    def value(self) -> float:
        return float(self.fraction)

    def to_dict(self) -> dict:
        return {
            "criterion": self.criterion,
            "weighting": self.weighting.value,
            "value": self.value,
            "ties": self.ties,
            "tau": [float(v) for v in self.tau],
        }


def pair_multiplicity(index: PathLengthIndex, weighting: Weighting | str) -> np.ndarray:
    """Number of terms each ordered pair contributes under ``weighting``.

    Path counts are returned as Python integers (object array) so sums are exact.
    """
    weighting = Weighting(weighting)
    d = index.d
    if weighting is Weighting.PATH_EXISTENCE:
        return index.reachability().astype(np.int64)
    if weighting is Weighting.UNIQUE_LENGTH:
        mult = np.zeros((d, d), dtype=np.int64)
        for power in index.counts:
            mult += power > 0
        return mult
    if index.any_saturated:
        raise SaturatedPathCountError("path counts overflowed; use another weighting")
    mult = np.zeros((d, d), dtype=object)
    for power in index.counts:
        mult = mult + power.astype(object)
    return mult


def sortability(
    tau,
    g: Dag,
    weighting: Weighting | str = Weighting.UNIQUE_LENGTH,
    criterion: str = "custom",
    tie_tol: float = 0.0,
    index: PathLengthIndex | None = None,
) -> SortabilityReport:
    """Fraction of weighted cause-effect terms along which ``tau`` increases.

    Values within ``tie_tol`` of each other count as tied.
    """
    tau = np.asarray(tau, dtype=float)
    if tau.shape != (g.d,):
        raise ValueError(f"tau must have length {g.d}")
    if not np.isfinite(tau).all():
        raise ValueError("tau contains non-finite values")
    weighting = Weighting(weighting)
    index = index if index is not None else path_length_index(g)
    mult = pair_multiplicity(index, weighting)
    diff = tau[None, :] - tau[:, None]  # diff[s, t] = tau_t - tau_s
    tied = np.abs(diff) <= tie_tol
    increasing = (diff > 0) & ~tied
    total = int(mult.sum())
    if total == 0:
        raise UndefinedSortabilityError("graph has no directed paths")
    n_up = int(mult[increasing].sum())
    n_tie = int(mult[tied].sum())
    return SortabilityReport(tau, Fraction(2 * n_up + n_tie, 2 * total), criterion, weighting, n_tie)


def var_criterion(data) -> np.ndarray:
    return as_array(data).var(axis=0)


def r2_criterion(data) -> np.ndarray:
    """R^2 of every column regressed on all remaining columns."""
    x = as_array(data)
    d = x.shape[1]
    if d < 2:
        raise ValueError("need at least two variables")
    return np.array([r_squared(x, t, [s for s in range(d) if s != t]) for t in range(d)])


def cev_criterion(data, g: Dag) -> np.ndarray:
    """R^2 of every column regressed on its parents in ``g``; roots get 0."""
    x = as_array(data)
    if x.shape[1] != g.d:
        raise ValueError("graph and data have different numbers of variables")
    out = np.zeros(g.d)
    for t in range(g.d):
        pa = g.parents(t)
        if pa.size:
            out[t] = r_squared(x, t, pa)
    return out


def analytic_r2_from_covariance(cov) -> np.ndarray:
    """Population R^2 of each variable given all others, ``1 - 1 / (S_tt P_tt)``.

    ``P`` is the precision matrix; with unit variances this is ``1 - 1 / P_tt``.
    """
    cov = np.asarray(cov, dtype=float)
    if cov.ndim != 2 or cov.shape[0] != cov.shape[1]:
        raise ValueError("covariance must be square")
    if not np.allclose(cov, cov.T, rtol=1e-12, atol=1e-14):
        raise ValueError("covariance must be symmetric")
    try:
        chol = np.linalg.cholesky(cov)
    except np.linalg.LinAlgError:
        raise ValueError("covariance is not positive definite") from None
    inv_chol = np.linalg.inv(chol)
    precision_diag = (inv_chol**2).sum(axis=0)
    return 1.0 - 1.0 / (np.diag(cov) * precision_diag)


CRITERIA = ("var", "r2", "cev")


def criterion_values(data, criterion: str, g: Dag | None = None) -> np.ndarray:
    if criterion == "var":
        return var_criterion(data)
    if criterion == "r2":
        return r2_criterion(data)
    if criterion == "cev":
        if g is None:
            raise ValueError("the cev criterion needs the true graph")
        return cev_criterion(data, g)
    raise ValueError(f"unknown criterion {criterion!r}; choose from {CRITERIA}")


def sortability_reports(
    data,
    g: Dag,
    criteria=CRITERIA,
    weighting: Weighting | str = Weighting.UNIQUE_LENGTH,
    tie_tol: float = 0.0,
) -> dict[str, SortabilityReport]:
    index = path_length_index(g)
    return {
        c: sortability(criterion_values(data, c, g), g, weighting, c, tie_tol, index)
        for c in criteria
    }
