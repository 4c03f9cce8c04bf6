"""Distances between an estimated and a true DAG."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .anm import AnmInstance, analytic_covariance, total_effects
from .graphs import Dag, _ancestors, d_separated, descendants


@dataclass(frozen=True)
class GraphDistances:
    sid: int
    shd: int


def _check_dims(g_true: Dag, g_est: Dag):
    if g_true.d != g_est.d:
        raise ValueError(f"graphs have different sizes: {g_true.d} vs {g_est.d}")


def shd(g_true: Dag, g_est: Dag) -> int:
    """Node pairs whose edge status differs; a reversed edge counts once."""
    _check_dims(g_true, g_est)
    a = g_true.adjacency.astype(np.int8)
    b = g_est.adjacency.astype(np.int8)
    # +1 for s->t, -1 for t->s, 0 for no edge, on the upper triangle s < t
    status_a = np.triu(a - a.T, k=1)
    status_b = np.triu(b - b.T, k=1)
    return int(np.count_nonzero(status_a != status_b))


def valid_adjustment(g_true: Dag, i: int, j: int, z, desc: list[set[int]] | None = None) -> bool:
    """Whether adjusting for ``z`` identifies the total effect of ``i`` on ``j``.

    Uses the generalized adjustment criterion: ``z`` must avoid descendants of
    every node on a causal path from ``i`` to ``j`` (``i`` excluded), and must
    d-separate ``i`` from ``j`` once the first edges of those causal paths are
    removed.
    """
    z = set(int(v) for v in z)
    if i in z:
        return False
    if desc is None:
        desc = [descendants(g_true, v) for v in range(g_true.d)]
    adj = g_true.adjacency
    anc_j = _ancestors(adj, [j])
    causal = desc[i] & anc_j  # nodes on causal paths i -> ... -> j, i excluded
    forbidden = set(causal)
    for w in causal:
        forbidden |= desc[w]
    if z & forbidden:
        return False
    pruned = np.array(adj)
    for w in causal:
        pruned[i, w] = 0
    return d_separated(pruned, i, j, z)


def sid_pairs(g_true: Dag, g_est: Dag) -> np.ndarray:
    """Boolean matrix marking ordered pairs ``(i, j)`` whose effect is misestimated."""
    _check_dims(g_true, g_est)
    d = g_true.d
    desc = [descendants(g_true, v) for v in range(d)]
    wrong = np.zeros((d, d), dtype=bool)
    for i in range(d):
        z = set(int(v) for v in g_est.parents(i))
        for j in range(d):
            if j == i:
                continue
            if j in z:
                # parent adjustment claims no effect of i on j
                wrong[i, j] = j in desc[i]
            else:
                wrong[i, j] = not valid_adjustment(g_true, i, j, z, desc)
    return wrong


def sid(g_true: Dag, g_est: Dag) -> int:
    """Structural intervention distance under parent adjustment in ``g_est``."""
    return int(sid_pairs(g_true, g_est).sum())


def distances(g_true: Dag, g_est: Dag) -> GraphDistances:
    return GraphDistances(sid(g_true, g_est), shd(g_true, g_est))


def linear_sid_oracle(inst_true: AnmInstance, g_est: Dag, tol: float = 1e-9) -> int:
    """Count pairs where parent adjustment misstates the linear total effect.

    The adjusted effect is the population regression coefficient of ``X_i``
    when regressing ``X_j`` on ``X_i`` and the parents of ``i`` in ``g_est``.
    """
    _check_dims(inst_true.dag, g_est)
    cov = analytic_covariance(inst_true)
    effects = total_effects(inst_true)
    d = inst_true.d
    count = 0
    for i in range(d):
        z = [int(v) for v in g_est.parents(i)]
        for j in range(d):
            if j == i:
                continue
            if j in z:
                adjusted = 0.0
            else:
                s = [i] + z
                try:
                    adjusted = np.linalg.solve(cov[np.ix_(s, s)], cov[s, j])[0]
                except np.linalg.LinAlgError:
                    raise ValueError("singular covariance block") from None
            if abs(adjusted - effects[i, j]) > tol:
                count += 1
    return count
