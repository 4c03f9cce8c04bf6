"""Sort-and-regress structure learning.

All three estimators share one pipeline: score every variable, sort the
scores ascending into a candidate causal order, then regress each variable on
its predecessors in that order with a BIC-tuned lasso.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .anm import as_array
from .graphs import Dag
from .regression import lasso_path_bic
from .sortability import r2_criterion, var_criterion


@dataclass(frozen=True, eq=False)
class WeightEstimate:
    weights: np.ndarray
    order: tuple[int, ...]
    scores: np.ndarray

    @property
    def d(self) -> int:
        return self.weights.shape[0]


def regress_along_order(data, order, **lasso_kwargs) -> np.ndarray:
    """Fill column ``t`` of the weight estimate from a lasso of ``t`` on its predecessors."""
    x = as_array(data)
    d = x.shape[1]
    w_hat = np.zeros((d, d))
    order = [int(v) for v in order]
    if sorted(order) != list(range(d)):
        raise ValueError("order must be a permutation of the columns")
    for i in range(1, d):
        t = order[i]
        preds = order[:i]
        fit = lasso_path_bic(x[:, preds], x[:, t], **lasso_kwargs)
        w_hat[preds, t] = fit.coefficients
    return w_hat


def sort_n_regress(data, scores, **lasso_kwargs) -> WeightEstimate:
    scores = np.asarray(scores, dtype=float)
    # stable sort: ties resolve by node index
    order = tuple(int(v) for v in np.argsort(scores, kind="stable"))
    return WeightEstimate(regress_along_order(data, order, **lasso_kwargs), order, scores)


def _check(data) -> np.ndarray:
    x = as_array(data)
    n, d = x.shape
    if d < 1 or n <= d:
        raise ValueError(f"need n > d >= 1, got n={n}, d={d}")
    return x


def r2_sort_n_regress(data, **lasso_kwargs) -> WeightEstimate:
    """Order by R^2 of each variable given all others, then regress."""
    x = _check(data)
    scores = r2_criterion(x) if x.shape[1] > 1 else np.zeros(1)
    return sort_n_regress(x, scores, **lasso_kwargs)


def var_sort_n_regress(data, **lasso_kwargs) -> WeightEstimate:
    """Order by marginal variance, then regress."""
    x = _check(data)
    return sort_n_regress(x, var_criterion(x), **lasso_kwargs)


def random_regress(data, rng: np.random.Generator, **lasso_kwargs) -> WeightEstimate:
    """Regress along a uniformly random permutation."""
    x = _check(data)
    d = x.shape[1]
    order = rng.permutation(d)
    # scores are the positions, so argsort reproduces the drawn order
    scores = np.empty(d)
    scores[order] = np.arange(d)
    return sort_n_regress(x, scores, **lasso_kwargs)


def threshold_to_dag(est: WeightEstimate, eps: float = 0.0) -> Dag:
    if eps < 0:
        raise ValueError("eps must be non-negative")
    return Dag((np.abs(est.weights) > eps).astype(np.int8))


ALGORITHMS = {
    "r2sr": r2_sort_n_regress,
    "varsr": var_sort_n_regress,
    "random": random_regress,
}
