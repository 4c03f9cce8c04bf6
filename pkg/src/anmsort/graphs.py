"""DAG representation, random DAG sampling and graph queries."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from graphlib import CycleError, TopologicalSorter
from typing import Iterable

import networkx as nx
import numpy as np

# Counts above this are treated as overflowed (int64 max is ~9.2e18).
_SATURATION_LIMIT = 2.0**62
SATURATED = np.iinfo(np.int64).max


@dataclass(frozen=True, eq=False)
class Dag:
    """Directed acyclic graph over nodes ``0..d-1``.

    ``adjacency[s, t] == 1`` iff there is an edge ``s -> t``. The array is
    stored read-only; construct a new ``Dag`` to change the structure.
    """

    adjacency: np.ndarray

    def __post_init__(self):
        adj = np.array(self.adjacency, dtype=np.int8, copy=True)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise ValueError(f"adjacency must be square, got shape {adj.shape}")
        if adj.shape[0] < 1:
            raise ValueError("a Dag needs at least one node")
        if not np.isin(adj, (0, 1)).all():
            raise ValueError("adjacency entries must be 0 or 1")
        if np.any(np.diag(adj)):
            raise ValueError("self-loops are not allowed")
        adj.setflags(write=False)
        object.__setattr__(self, "adjacency", adj)
        # raises on cycles
        object.__setattr__(self, "_order", _kahn_order(adj))

    @classmethod
    def from_edges(cls, d: int, edges: Iterable[tuple[int, int]]) -> "Dag":
        adj = np.zeros((d, d), dtype=np.int8)
        for s, t in edges:
            if not (0 <= s < d and 0 <= t < d):
                raise ValueError(f"edge ({s}, {t}) out of range for d={d}")
            adj[s, t] = 1
        return cls(adj)

    @classmethod
    def empty(cls, d: int) -> "Dag":
        return cls(np.zeros((d, d), dtype=np.int8))

    @property
    def d(self) -> int:
        return self.adjacency.shape[0]

    @property
    def n_edges(self) -> int:
        return int(self.adjacency.sum())

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(int(s), int(t)) for s, t in zip(*np.nonzero(self.adjacency))]

    def parents(self, t: int) -> np.ndarray:
        return np.flatnonzero(self.adjacency[:, t])

    def children(self, s: int) -> np.ndarray:
        return np.flatnonzero(self.adjacency[s, :])

    def __eq__(self, other):
        if not isinstance(other, Dag):
            return NotImplemented
        return np.array_equal(self.adjacency, other.adjacency)

    def __hash__(self):
        return hash(self.adjacency.tobytes())

    def __repr__(self):
        return f"Dag(d={self.d}, edges={self.edges})"


def _kahn_order(adj: np.ndarray) -> tuple[int, ...]:
    d = adj.shape[0]
    sorter = TopologicalSorter({t: np.flatnonzero(adj[:, t]).tolist() for t in range(d)})
    try:
        return tuple(int(v) for v in sorter.static_order())
    except CycleError as exc:
        raise ValueError(f"graph contains a cycle: {exc.args[1]}") from None


def _orient_and_shuffle(undirected: np.ndarray, rng: np.random.Generator, later_to_earlier=False) -> Dag:
    """Keep one triangle of a symmetric adjacency, then relabel nodes randomly.

    The upper triangle orients edges from lower to higher index; with
    ``later_to_earlier`` the lower triangle is kept instead.
    """
    kept = np.tril(undirected, k=-1) if later_to_earlier else np.triu(undirected, k=1)
    perm = rng.permutation(undirected.shape[0])
    return Dag(kept[np.ix_(perm, perm)])


def sample_er_dag(d: int, m: int, rng: np.random.Generator) -> Dag:
    """Erdős–Rényi DAG with exactly ``m`` edges."""
    max_edges = d * (d - 1) // 2
    if d < 1 or not 0 <= m <= max_edges:
        raise ValueError(f"edge count m={m} must lie in [0, {max_edges}] for d={d}")
    rows, cols = np.triu_indices(d, k=1)
    chosen = rng.choice(max_edges, size=m, replace=False)
    undirected = np.zeros((d, d), dtype=np.int8)
    undirected[rows[chosen], cols[chosen]] = 1
    undirected |= undirected.T
    return _orient_and_shuffle(undirected, rng)


SF_ORIENTATIONS = ("new_to_old", "old_to_new")


def sample_sf_dag(d: int, attach: int, rng: np.random.Generator, orientation: str = "new_to_old") -> Dag:
    """Scale-free DAG from Barabási–Albert preferential attachment.

    Each new node attaches to ``attach`` existing nodes, giving
    ``attach * (d - attach)`` edges. With ``orientation="new_to_old"`` every
    edge points from the newly added node to the node it attached to, so hubs
    collect many parents; ``"old_to_new"`` reverses this, so hubs are sources.
    Nodes are relabelled randomly afterwards.
    """
    if isinstance(attach, bool) or not isinstance(attach, (int, np.integer)):
        raise ValueError(f"attach must be an integer, got {attach!r}")
    if attach < 1 or attach >= d:
        raise ValueError(f"attach={attach} must satisfy 1 <= attach < d={d}")
    if orientation not in SF_ORIENTATIONS:
        raise ValueError(f"orientation must be one of {SF_ORIENTATIONS}, got {orientation!r}")
    seed = int(rng.integers(2**32))
    graph = nx.barabasi_albert_graph(d, int(attach), seed=seed)
    undirected = nx.to_numpy_array(graph, nodelist=range(d), dtype=np.int8)
    return _orient_and_shuffle(undirected, rng, later_to_earlier=orientation == "new_to_old")


def topological_order(g: Dag) -> tuple[int, ...]:
    return g._order


@dataclass(frozen=True, eq=False)
class PathLengthIndex:
    """Matrix powers of the adjacency, ``counts[i-1] == B**i``.

    ``saturated[i-1]`` marks entries whose path count overflowed; those
    entries hold the ``SATURATED`` sentinel, which still correctly indicates
    that a path exists.
    Powers beyond the longest path (all zero) are not stored.
    """

    d: int
    counts: tuple[np.ndarray, ...]
    saturated: tuple[np.ndarray, ...] = field(repr=False)

    @property
    def longest_path(self) -> int:
        return len(self.counts)

    @property
    def any_saturated(self) -> bool:
        return any(s.any() for s in self.saturated)

    def pairs(self, length: int) -> dict[tuple[int, int], int]:
        """Pairs joined by a path of ``length`` edges, mapped to the path count."""
        if length < 1 or length > self.d:
            raise ValueError(f"length must be in [1, {self.d}]")
        if length > self.longest_path:
            return {}
        power = self.counts[length - 1]
        return {(int(s), int(t)): int(power[s, t]) for s, t in zip(*np.nonzero(power))}

    def reachability(self) -> np.ndarray:
        """Boolean transitive closure (``s`` reaches ``t`` by a path of length >= 1)."""
        closure = np.zeros((self.d, self.d), dtype=bool)
        for power in self.counts:
            closure |= power > 0
        return closure


def path_length_index(g: Dag) -> PathLengthIndex:
    adj = g.adjacency.astype(np.int64)
    adj_f = adj.astype(np.float64)
    counts, saturated = [], []
    power, power_f = adj.copy(), adj_f.copy()
    sat = np.zeros(power.shape, dtype=bool)
    while power.any():
        if len(counts) >= g.d:
            raise AssertionError("path lengths exceed node count; graph is cyclic")
        counts.append(power)
        saturated.append(sat)
        # float shadow tracks magnitudes; an entry fed by a saturated entry is
        # itself above the limit, so the int product below is exact elsewhere
        power_f = power_f @ adj_f
        exact = np.where(sat, 0, power) @ adj
        sat = power_f > _SATURATION_LIMIT
        power = np.where(sat, SATURATED, exact)
    for arr in counts + saturated:
        arr.setflags(write=False)
    return PathLengthIndex(g.d, tuple(counts), tuple(saturated))


def descendants(g: Dag, s: int) -> set[int]:
    if not 0 <= s < g.d:
        raise ValueError(f"node {s} out of range")
    seen: set[int] = set()
    queue = deque([s])
    adj = g.adjacency
    while queue:
        u = queue.popleft()
        for v in np.flatnonzero(adj[u]):
            v = int(v)
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return seen


def _ancestors(adj: np.ndarray, nodes: Iterable[int]) -> set[int]:
    seen = set(int(v) for v in nodes)
    queue = deque(seen)
    while queue:
        u = queue.popleft()
        for v in np.flatnonzero(adj[:, u]):
            v = int(v)
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return seen


def ancestors(g: Dag, nodes: Iterable[int]) -> set[int]:
    """Ancestors of ``nodes``, the nodes themselves included."""
    return _ancestors(g.adjacency, nodes)


def _bayes_ball(adj: np.ndarray, source: int, z: set[int]) -> set[int]:
    anc_z = _ancestors(adj, z)
    # direction 0: arrived from a child (moving up); 1: arrived from a parent
    visited: set[tuple[int, int]] = set()
    queue = deque([(source, 0)])
    found: set[int] = set()
    while queue:
        node, direction = queue.popleft()
        if (node, direction) in visited:
            continue
        visited.add((node, direction))
        blocked = node in z
        if not blocked:
            found.add(node)
        if direction == 0 and not blocked:
            queue.extend((int(p), 0) for p in np.flatnonzero(adj[:, node]))
            queue.extend((int(c), 1) for c in np.flatnonzero(adj[node]))
        elif direction == 1:
            if not blocked:
                queue.extend((int(c), 1) for c in np.flatnonzero(adj[node]))
            if node in anc_z:
                # collider with a conditioned descendant is open
                queue.extend((int(p), 0) for p in np.flatnonzero(adj[:, node]))
    found.discard(source)
    return found


def reachable(g: Dag | np.ndarray, source: int, given: Iterable[int] = ()) -> set[int]:
    """Nodes d-connected to ``source`` given ``given``.

    Accepts a raw adjacency array so callers can query edge-deleted variants
    of a graph without rebuilding a :class:`Dag`.
    """
    adj = g.adjacency if isinstance(g, Dag) else np.asarray(g)
    return _bayes_ball(adj, int(source), set(int(v) for v in given))


def d_separated(g: Dag | np.ndarray, i: int, j: int, given: Iterable[int] = ()) -> bool:
    """True iff every path between ``i`` and ``j`` is blocked by ``given``."""
    adj = g.adjacency if isinstance(g, Dag) else np.asarray(g)
    d = adj.shape[0]
    z = set(int(v) for v in given)
    if i == j:
        raise ValueError("d-separation needs two distinct nodes")
    if i in z or j in z:
        raise ValueError("the conditioning set must not contain i or j")
    for v in (i, j, *z):
        if not 0 <= v < d:
            raise ValueError(f"node {v} out of range")
    return j not in _bayes_ball(adj, int(i), z)
