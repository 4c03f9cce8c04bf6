"""Least squares with intercept, R^2, and L1-penalized least squares chosen by BIC."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .anm import DegenerateColumnError, as_array


@dataclass(frozen=True, eq=False)
class LinearFit:
    """Affine fit ``target ~ intercept + predictors @ coefficients``."""

    coefficients: np.ndarray
    intercept: float
    rss: float
    n: int
    rank_deficient: bool = False
    penalty: float | None = None

    def predict(self, predictors) -> np.ndarray:
        x = np.asarray(predictors, dtype=float).reshape(-1, self.coefficients.size)
        return self.intercept + x @ self.coefficients

    @property
    def n_nonzero(self) -> int:
        return int(np.count_nonzero(self.coefficients))


def _design(predictors, target) -> tuple[np.ndarray, np.ndarray]:
    y = np.asarray(target, dtype=float).ravel()
    x = np.asarray(predictors, dtype=float)
    x = x.reshape(y.size, -1) if x.size else np.empty((y.size, 0))
    if x.shape[0] != y.size:
        raise ValueError("predictors and target have different numbers of rows")
    return x, y


def ols_fit(predictors, target) -> LinearFit:
    """Minimise the mean squared error of an affine fit.

    Rank-deficient designs get the minimum-norm solution and
    ``rank_deficient=True``.
    """
    x, y = _design(predictors, target)
    n, p = x.shape
    y_mean = y.mean()
    yc = y - y_mean
    if p == 0:
        return LinearFit(np.empty(0), float(y_mean), float(yc @ yc), n)
    x_mean = x.mean(axis=0)
    xc = x - x_mean
    # unit-scale columns so the rank cutoff is not driven by column scales
    scale = xc.std(axis=0)
    scale[~(scale > 0)] = 1.0
    coef, _, rank, _ = np.linalg.lstsq(xc / scale, yc, rcond=None)
    coef = coef / scale
    resid = yc - xc @ coef
    return LinearFit(
        coef,
        float(y_mean - x_mean @ coef),
        float(resid @ resid),
        n,
        rank_deficient=bool(rank < p),
    )


def r_squared(data, t: int, predictors: Sequence[int]) -> float:
    """In-sample coefficient of determination of column ``t`` given ``predictors``."""
    x = as_array(data)
    s = [int(v) for v in predictors]
    if t in s:
        raise ValueError("target must not be among the predictors")
    y = x[:, t]
    yc = y - y.mean()
    tss = float(yc @ yc)
    if not tss > 0:
        raise DegenerateColumnError(t)
    fit = ols_fit(x[:, s], y)
    return float(np.clip(1.0 - fit.rss / tss, 0.0, 1.0))


# --- lasso ---------------------------------------------------------------


@dataclass
class _Standardized:
    xs: np.ndarray  # standardized predictors (kept columns only)
    yc: np.ndarray
    keep: np.ndarray
    x_mean: np.ndarray
    x_std: np.ndarray
    y_mean: float
    gram: np.ndarray
    corr: np.ndarray

    @classmethod
    def build(cls, predictors, target) -> "_Standardized":
        x, y = _design(predictors, target)
        n = y.size
        x_mean = x.mean(axis=0)
        x_std = x.std(axis=0)
        keep = np.flatnonzero(x_std > 0)
        xs = (x[:, keep] - x_mean[keep]) / x_std[keep]
        y_mean = float(y.mean())
        yc = y - y_mean
        return cls(xs, yc, keep, x_mean, x_std, y_mean, xs.T @ xs / n, xs.T @ yc / n)

    @property
    def n(self) -> int:
        return self.yc.size

    def lambda_max(self) -> float:
        return float(np.abs(self.corr).max()) if self.corr.size else 0.0

    def to_fit(self, beta: np.ndarray, penalty: float) -> LinearFit:
        coef = np.zeros(self.x_mean.size)
        coef[self.keep] = beta / self.x_std[self.keep]
        resid = self.yc - self.xs @ beta
        intercept = self.y_mean - float(self.x_mean @ coef)
        return LinearFit(coef, intercept, float(resid @ resid), self.n, penalty=penalty)


def lasso_objective(gram, corr, yy, beta, lam) -> float:
    """``(1/2n)||y - X b||^2 + lam * ||b||_1`` in Gram form (``yy = y.y / n``)."""
    return float(0.5 * (yy - 2 * corr @ beta + beta @ gram @ beta) + lam * np.abs(beta).sum())


def _active_set_solution(gram, corr, lam, beta):
    """Exact lasso solution for the current sign pattern, or ``None``.

    Solves the stationarity equations on the active set and accepts the result
    only if the signs are unchanged and the inactive coordinates satisfy KKT.
    """
    active = np.flatnonzero(beta)
    signs = np.sign(beta[active])
    try:
        b_active = np.linalg.solve(gram[np.ix_(active, active)], corr[active] - lam * signs)
    except np.linalg.LinAlgError:
        return None
    # with lam > 0 stationarity holds only if the assumed signs are reproduced;
    # at lam == 0 it reduces to a zero gradient, whatever the signs
    if lam > 0 and np.any(np.sign(b_active) != signs):
        return None
    candidate = np.zeros_like(beta)
    candidate[active] = b_active
    grad = corr - gram[:, active] @ b_active
    inactive = np.ones(beta.size, dtype=bool)
    inactive[active] = False
    if np.any(np.abs(grad[inactive]) > lam * (1 + 1e-12) + 1e-15):
        return None
    return candidate


def coordinate_descent(
    gram: np.ndarray,
    corr: np.ndarray,
    lam: float,
    beta: np.ndarray | None = None,
    tol: float = 1e-8,
    max_sweeps: int = 10_000,
    trace: list | None = None,
    yy: float = 0.0,
    polish: bool = True,
) -> np.ndarray:
    """Cyclic coordinate descent for the lasso on unit-variance predictors.

    Stops when no coefficient moves by more than ``tol`` in a full sweep. With
    ``polish``, once a sweep leaves the sign pattern unchanged the active-set
    equations are solved directly and accepted if they satisfy KKT. If
    ``trace`` is a list, the objective after each step is appended to it.
    """
    p = corr.size
    beta = np.zeros(p) if beta is None else np.array(beta, dtype=float)
    grad = corr - gram @ beta
    diag = np.diag(gram)
    if polish and beta.any():
        # a warm start usually already has the right sign pattern
        exact = _active_set_solution(gram, corr, lam, beta)
        if exact is not None:
            if trace is not None:
                trace.append(lasso_objective(gram, corr, yy, exact, lam))
            return exact
    pattern = np.sign(beta)
    for _ in range(max_sweeps):
        max_delta = 0.0
        for j in range(p):
            bj = beta[j]
            z = grad[j] + diag[j] * bj
            if z > lam:
                new = (z - lam) / diag[j]
            elif z < -lam:
                new = (z + lam) / diag[j]
            else:
                new = 0.0
            delta = new - bj
            if delta != 0.0:
                grad -= gram[:, j] * delta
                beta[j] = new
                if abs(delta) > max_delta:
                    max_delta = abs(delta)
        if trace is not None:
            trace.append(lasso_objective(gram, corr, yy, beta, lam))
        if max_delta < tol:
            break
        new_pattern = np.sign(beta)
        if polish and np.array_equal(new_pattern, pattern):
            exact = _active_set_solution(gram, corr, lam, beta)
            if exact is not None:
                if trace is not None:
                    trace.append(lasso_objective(gram, corr, yy, exact, lam))
                return exact
        pattern = new_pattern
    return beta


def lambda_grid(lam_max: float, n_lambdas: int = 100, ratio: float = 1e-3) -> np.ndarray:
    if lam_max <= 0:
        return np.zeros(1)
    return lam_max * np.geomspace(1.0, ratio, n_lambdas)


def lasso_fit(predictors, target, lam: float, tol: float = 1e-8, max_sweeps: int = 10_000) -> LinearFit:
    """Lasso at a single penalty level (``lam`` on the standardized scale)."""
    st = _Standardized.build(predictors, target)
    scale = max(float(st.yc.std()), np.finfo(float).tiny)
    beta = coordinate_descent(st.gram, st.corr, lam, tol=tol * scale, max_sweeps=max_sweeps)
    return st.to_fit(beta, lam)


def lasso_path(
    predictors,
    target,
    n_lambdas: int = 100,
    ratio: float = 1e-3,
    tol: float = 1e-8,
    max_sweeps: int = 10_000,
) -> list[LinearFit]:
    """Warm-started lasso fits on a geometric grid from ``lambda_max`` down."""
    st = _Standardized.build(predictors, target)
    scale = max(float(st.yc.std()), np.finfo(float).tiny)
    fits = []
    beta = np.zeros(st.keep.size)
    for lam in lambda_grid(st.lambda_max(), n_lambdas, ratio):
        beta = coordinate_descent(st.gram, st.corr, lam, beta, tol * scale, max_sweeps)
        fits.append(st.to_fit(beta, float(lam)))
    return fits


def bic(fit: LinearFit) -> float:
    """``n log(rss / n) + k log n`` with the intercept counted in ``k``."""
    n = fit.n
    mse = max(fit.rss / n, np.finfo(float).tiny)
    return n * np.log(mse) + (fit.n_nonzero + 1) * np.log(n)


def lasso_path_bic(predictors, target, **path_kwargs) -> LinearFit:
    """Lasso fit whose penalty minimises BIC along :func:`lasso_path`."""
    x, y = _design(predictors, target)
    if y.size <= 2:
        raise ValueError("need more than two observations")
    if x.shape[1] == 0:
        return ols_fit(x, y)
    fits = lasso_path(x, y, **path_kwargs)
    scores = [bic(f) for f in fits]
    return fits[int(np.argmin(scores))]
