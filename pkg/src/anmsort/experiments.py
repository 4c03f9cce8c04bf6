"""Experiment drivers: benchmark, window averages, chains, sweeps, audits.

Every random quantity is drawn from a substream keyed by
``(seed, replicate, purpose)``, so results do not depend on execution order or
on the number of worker threads.
"""

from __future__ import annotations

import csv
import io
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .anm import (
    AnmInstance,
    Dataset,
    DegenerateColumnError,
    NoiseSpec,
    SigmaDist,
    WeightDist,
    analytic_covariance,
    as_array,
    chain_instance,
    chain_variance_lower_bound,
    chain_variances,
    sample_data,
    sample_instance,
    solve_alpha_for_target,
    standardize,
)
from .discovery import ALGORITHMS, random_regress, threshold_to_dag
from .evaluation import shd, sid
from .graphs import SF_ORIENTATIONS, Dag, sample_er_dag, sample_sf_dag
from .sortability import (
    SortabilityReport,
    UndefinedSortabilityError,
    Weighting,
    analytic_r2_from_covariance,
    r2_criterion,
    sortability,
    sortability_reports,
    var_criterion,
)

log = logging.getLogger(__name__)

# purpose tags for RNG substreams
GRAPH, PARAMS, DATA, ALGO, BOOT = range(5)

DEFAULT_CENTERS = tuple(round(0.05 * k, 2) for k in range(1, 20))
BENCH_ALGORITHMS = ("r2sr", "varsr", "varsr_raw", "random")


def substream(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(key)))


def _map(func: Callable, items: Sequence, threads: int) -> list:
    if threads <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, items))


# --- configuration -------------------------------------------------------


@dataclass(frozen=True)
class ExperimentConfig:
    """Simulation and benchmark settings; defaults follow the ER benchmark."""

    graph_model: str = "er"
    d: int = 20
    gamma: float = 2.0
    noise: NoiseSpec = NoiseSpec("gaussian", SigmaDist.uniform(0.5, 2.0))
    weight_dist: WeightDist = WeightDist(0.5, 2.0)
    n: int = 1000
    replicates: int = 500
    seed: int = 0
    algorithms: tuple[str, ...] = BENCH_ALGORITHMS
    weighting: Weighting = Weighting.UNIQUE_LENGTH
    standardize: bool = True
    eps: float = 0.0
    tie_tol: float = 0.0
    window_width: float = 0.1
    window_centers: tuple[float, ...] = DEFAULT_CENTERS
    sf_orientation: str = "new_to_old"

    def __post_init__(self):
        object.__setattr__(self, "weighting", Weighting(self.weighting))
        object.__setattr__(self, "algorithms", tuple(self.algorithms))
        object.__setattr__(self, "window_centers", tuple(self.window_centers))
        if self.graph_model not in ("er", "sf"):
            raise ValueError(f"graph_model must be 'er' or 'sf', got {self.graph_model!r}")
        if self.d < 1:
            raise ValueError("d must be positive")
        if self.gamma < 0:
            raise ValueError("gamma must be non-negative")
        if self.graph_model == "er" and self.n_edges > self.d * (self.d - 1) // 2:
            raise ValueError(f"gamma * d = {self.n_edges} exceeds the maximum edge count")
        if self.graph_model == "sf" and (self.gamma != int(self.gamma) or not 1 <= self.gamma < self.d):
            raise ValueError("scale-free graphs need an integer gamma with 1 <= gamma < d")
        if self.sf_orientation not in SF_ORIENTATIONS:
            raise ValueError(f"sf_orientation must be one of {SF_ORIENTATIONS}")
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if self.replicates < 1:
            raise ValueError("replicates must be at least 1")
        if not 0 < self.window_width <= 1:
            raise ValueError("window width must lie in (0, 1]")
        unknown = set(self.algorithms) - set(BENCH_ALGORITHMS)
        if unknown:
            raise ValueError(f"unknown algorithms {sorted(unknown)}; choose from {BENCH_ALGORITHMS}")

    @property
    def n_edges(self) -> int:
        return int(round(self.gamma * self.d))

    def sample_graph(self, rng: np.random.Generator) -> Dag:
        if self.graph_model == "er":
            return sample_er_dag(self.d, self.n_edges, rng)
        return sample_sf_dag(self.d, int(self.gamma), rng, self.sf_orientation)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["weighting"] = self.weighting.value
        out["algorithms"] = list(self.algorithms)
        out["window_centers"] = list(self.window_centers)
        return out

    @classmethod
    def from_dict(cls, obj: Mapping) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(obj) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        kwargs = dict(obj)
        if "noise" in kwargs and isinstance(kwargs["noise"], Mapping):
            noise = dict(kwargs["noise"])
            sigma = noise.pop("sigma_dist", {})
            kwargs["noise"] = NoiseSpec(
                sigma_dist=SigmaDist(**sigma) if isinstance(sigma, Mapping) else sigma, **noise
            )
        if "weight_dist" in kwargs and isinstance(kwargs["weight_dist"], Mapping):
            kwargs["weight_dist"] = WeightDist(**kwargs["weight_dist"])
        return cls(**kwargs)


# --- benchmark -----------------------------------------------------------


@dataclass
class BenchRecord:
    replicate: int
    seed: int
    edges: int
    v_var: float = math.nan
    v_r2: float = math.nan
    v_cev: float = math.nan
    sid: dict[str, int] = field(default_factory=dict)
    shd: dict[str, int] = field(default_factory=dict)
    status: str = "ok"

    def get(self, name: str) -> float:
        """Flat field access, e.g. ``"v_r2"`` or ``"sid_r2sr"``."""
        for prefix, table in (("sid_", self.sid), ("shd_", self.shd)):
            if name.startswith(prefix):
                return table.get(name[len(prefix):], math.nan)
        return getattr(self, name)


def _sortabilities(raw: np.ndarray, g: Dag, cfg: ExperimentConfig) -> dict[str, float]:
    try:
        reports = sortability_reports(raw, g, weighting=cfg.weighting, tie_tol=cfg.tie_tol)
    except UndefinedSortabilityError:
        return {}
    return {f"v_{c}": r.value for c, r in reports.items()}


def run_replicate(cfg: ExperimentConfig, replicate: int) -> BenchRecord:
    seed_value = int(np.random.SeedSequence(cfg.seed, spawn_key=(replicate,)).generate_state(1)[0])
    g = cfg.sample_graph(substream(cfg.seed, replicate, GRAPH))
    record = BenchRecord(replicate, seed_value, g.n_edges)
    inst = sample_instance(g, cfg.weight_dist, cfg.noise, substream(cfg.seed, replicate, PARAMS))
    raw = sample_data(inst, cfg.n, substream(cfg.seed, replicate, DATA))
    try:
        scaled = standardize(raw) if cfg.standardize else raw
        for key, value in _sortabilities(raw.values, g, cfg).items():
            setattr(record, key, value)
        for name in cfg.algorithms:
            if name == "random":
                est = random_regress(scaled, substream(cfg.seed, replicate, ALGO))
            elif name == "varsr_raw":
                est = ALGORITHMS["varsr"](raw)
            else:
                est = ALGORITHMS[name](scaled)
            g_hat = threshold_to_dag(est, cfg.eps)
            record.sid[name] = sid(g, g_hat)
            record.shd[name] = shd(g, g_hat)
    except DegenerateColumnError as exc:
        log.warning("replicate %d skipped: %s", replicate, exc)
        record.status = f"skipped: {exc}"
    return record


def run_benchmark(cfg: ExperimentConfig, threads: int = 1) -> list[BenchRecord]:
    """One record per replicate, ordered by replicate index."""
    return _map(lambda r: run_replicate(cfg, r), range(cfg.replicates), threads)


def _fmt(value) -> str:
    if isinstance(value, float):
        return "" if math.isnan(value) else repr(value)
    return str(value)


def bench_header(algorithms: Iterable[str]) -> list[str]:
    algorithms = list(algorithms)
    return (
        ["replicate", "seed", "edges", "status", "v_var", "v_r2", "v_cev"]
        + [f"sid_{a}" for a in algorithms]
        + [f"shd_{a}" for a in algorithms]
    )


def records_to_csv(records: Sequence[BenchRecord], algorithms: Iterable[str]) -> str:
    header = bench_header(algorithms)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for rec in records:
        writer.writerow([_fmt(rec.get(h)) for h in header])
    return buf.getvalue()


def bench_metadata(cfg: ExperimentConfig, records: Sequence[BenchRecord]) -> dict:
    skipped = [r.replicate for r in records if r.status != "ok"]
    return {
        "config": cfg.to_dict(),
        "replicates": len(records),
        "skipped": len(skipped),
        "skipped_replicates": skipped,
    }


# --- window averaging ----------------------------------------------------


@dataclass(frozen=True)
class WindowPoint:
    center: float
    mean: float
    ci_low: float
    ci_high: float
    count: int

    @property
    def single(self) -> bool:
        return self.count == 1


def window_stats(x, y, width: float = 0.1, centers: Sequence[float] = DEFAULT_CENTERS) -> list[WindowPoint]:
    """Mean of ``y`` over closed windows ``[c - width/2, c + width/2]`` of ``x``.

    The interval is the normal-approximation 95% CI of the mean; windows with
    a single point collapse to that point, empty windows are omitted.
    """
    if not width > 0:
        raise ValueError("width must be positive")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    ok = ~(np.isnan(x) | np.isnan(y))
    x, y = x[ok], y[ok]
    half = width / 2
    points = []
    for c in centers:
        # small slack so centers like 0.7 +- 0.05 include boundary points
        inside = (x >= c - half - 1e-12) & (x <= c + half + 1e-12)
        vals = y[inside]
        if vals.size == 0:
            continue
        mean = float(vals.mean())
        if vals.size > 1:
            spread = 1.959963984540054 * vals.std(ddof=1) / math.sqrt(vals.size)
        else:
            spread = 0.0
        points.append(WindowPoint(float(c), mean, mean - spread, mean + spread, int(vals.size)))
    return points


def window_average(
    records: Sequence,
    x_field: str,
    y_field: str,
    width: float = 0.1,
    centers: Sequence[float] = DEFAULT_CENTERS,
) -> list[WindowPoint]:
    def get(rec, name):
        return rec.get(name) if isinstance(rec, BenchRecord) else rec[name]

    xs = [get(r, x_field) for r in records]
    ys = [get(r, y_field) for r in records]
    return window_stats(xs, ys, width, centers)


def curves_to_csv(curves: Mapping[str, Sequence[WindowPoint]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["series", "center", "mean", "ci_low", "ci_high", "count"])
    for name, points in curves.items():
        for p in points:
            writer.writerow([name, _fmt(p.center), _fmt(p.mean), _fmt(p.ci_low), _fmt(p.ci_high), p.count])
    return buf.getvalue()


# --- causal chains -------------------------------------------------------


@dataclass(frozen=True)
class ChainRecord:
    replicate: int
    position: int
    weight: float  # weight of the incoming edge; nan at the root
    sigma: float
    variance: float  # exact
    cev: float  # exact cause-explained variance fraction
    r2: float  # finite-sample R^2 given all other chain nodes
    lower_bound: float  # sigma_0^2 * sum log|w| up to this node; nan at the root


def run_chain(
    replicate: int,
    p_max: int,
    weight_dist: WeightDist,
    sigma_dist: SigmaDist,
    n: int,
    seed: int,
    noise_family: str = "gaussian",
) -> list[ChainRecord]:
    rng = substream(seed, replicate, PARAMS)
    w = weight_dist.sample(p_max, rng)
    s = sigma_dist.sample(p_max + 1, rng)
    variances = chain_variances(w, s)
    cev = 1.0 - s**2 / variances
    cev[0] = 0.0
    data = sample_data(chain_instance(w, s, noise_family), n, substream(seed, replicate, DATA))
    r2 = r2_criterion(data)
    out = []
    for k in range(p_max + 1):
        bound = chain_variance_lower_bound(w[:k], s[0]) if k else math.nan
        out.append(
            ChainRecord(
                replicate, k, float(w[k - 1]) if k else math.nan, float(s[k]),
                float(variances[k]), float(cev[k]), float(r2[k]), bound,
            )
        )
    return out


def chain_experiment(
    p_max: int = 50,
    replicates: int = 30,
    weight_dist: WeightDist = WeightDist(0.5, 2.0),
    sigma_dist: SigmaDist = SigmaDist.uniform(0.5, 2.0),
    n: int = 5000,
    seed: int = 0,
    noise_family: str = "gaussian",
    threads: int = 1,
) -> list[ChainRecord]:
    """Simulate independent chains ``X_0 -> ... -> X_p_max``; one record per node."""
    if p_max < 1:
        raise ValueError("p_max must be at least 1")
    per_chain = _map(
        lambda r: run_chain(r, p_max, weight_dist, sigma_dist, n, seed, noise_family),
        range(replicates),
        threads,
    )
    return [rec for chain in per_chain for rec in chain]


def dataclass_rows_to_csv(rows: Sequence) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if rows:
        names = [f.name for f in fields(rows[0])]
        writer.writerow(names)
        for row in rows:
            writer.writerow([_fmt(getattr(row, n)) for n in names])
    return buf.getvalue()


# --- sortability sweeps --------------------------------------------------


@dataclass(frozen=True)
class SweepCell:
    graph_model: str
    gamma: float
    target: float  # requested E[log|V|]
    hi: float  # outer weight bound reaching the target
    replicates: int
    v_r2: float
    v_var: float = math.nan
    v_cev: float = math.nan


def sweep_heatmap(
    gamma_values: Sequence[float],
    targets: Sequence[float],
    cfg: ExperimentConfig,
    criteria: Sequence[str] = ("r2",),
    threads: int = 1,
) -> list[SweepCell]:
    """Mean sortabilities over a grid of in-degrees and E[log|V|] targets.

    Weights are ``Unif(+-(lo, hi))`` with ``lo = cfg.weight_dist.lo`` and
    ``hi`` solved per target. Sortabilities are computed on raw data.
    """
    his = [solve_alpha_for_target(t, cfg.weight_dist.lo) for t in targets]
    cells = []
    for gi, gamma in enumerate(gamma_values):
        for ti, (target, hi) in enumerate(zip(targets, his)):
            cell_cfg = replace(cfg, gamma=gamma, weight_dist=WeightDist(cfg.weight_dist.lo, hi))
            cell_seed = int(np.random.SeedSequence(cfg.seed, spawn_key=(gi, ti)).generate_state(1)[0])

            def one(rep, cell_cfg=cell_cfg, cell_seed=cell_seed):
                g = cell_cfg.sample_graph(substream(cell_seed, rep, GRAPH))
                inst = sample_instance(g, cell_cfg.weight_dist, cell_cfg.noise, substream(cell_seed, rep, PARAMS))
                raw = sample_data(inst, cell_cfg.n, substream(cell_seed, rep, DATA))
                try:
                    reports = sortability_reports(raw, g, criteria, cell_cfg.weighting, cell_cfg.tie_tol)
                except (UndefinedSortabilityError, DegenerateColumnError) as exc:
                    log.warning("sweep replicate skipped: %s", exc)
                    return None
                return {c: r.value for c, r in reports.items()}

            results = [r for r in _map(one, range(cfg.replicates), threads) if r is not None]

            def mean(c):
                vals = [r[c] for r in results if c in r]
                return float(np.mean(vals)) if vals else math.nan

            cells.append(
                SweepCell(cfg.graph_model, float(gamma), float(target), float(hi), len(results),
                          mean("r2"), mean("var"), mean("cev"))
            )
    return cells


# --- controlled-CEV counterexample --------------------------------------


def counterexample_constants() -> dict[str, float]:
    """Closed-form covariance entries of the four-node unit-variance model."""
    alpha = 1 / math.sqrt(2)
    root = math.sqrt(4 + 2 * math.sqrt(2))
    beta = (1 + alpha) / root
    norm4 = math.sqrt(6 + 4 * alpha + 8 * beta)
    gamma = (1 + alpha) * (1 + 1 / root) / norm4
    delta = (1 + (2 + math.sqrt(2)) / root) / norm4
    return {"alpha": alpha, "beta": beta, "gamma": gamma, "delta": delta}


def counterexample_instance() -> AnmInstance:
    """Complete DAG on four nodes where every non-root node has CEV 1/2 and unit variance."""
    c = counterexample_constants()
    root = math.sqrt(4 + 2 * math.sqrt(2))
    norm4 = math.sqrt(6 + 4 * c["alpha"] + 8 * c["beta"])
    w = np.zeros((4, 4))
    w[0, 1] = 1 / math.sqrt(2)
    w[0, 2] = w[1, 2] = 1 / root
    w[0, 3] = w[1, 3] = w[2, 3] = 1 / norm4
    g = Dag((w != 0).astype(np.int8))
    sigma = np.array([1.0, math.sqrt(0.5), math.sqrt(0.5), math.sqrt(0.5)])
    return AnmInstance(g, w, sigma)


def counterexample_report(tie_tol: float = 1e-12) -> dict:
    """Analytic covariance, R^2 and sortabilities of the controlled-CEV model.

    ``tie_tol`` absorbs rounding in the exactly tied R^2 of the first two nodes.
    """
    inst = counterexample_instance()
    cov = analytic_covariance(inst)
    c = counterexample_constants()
    a, b, g, dl = c["alpha"], c["beta"], c["gamma"], c["delta"]
    printed = np.array([[1, a, b, g], [a, 1, b, g], [b, b, 1, dl], [g, g, dl, 1]])
    r2 = analytic_r2_from_covariance(cov)
    reports: dict[str, SortabilityReport] = {
        w.value: sortability(r2, inst.dag, w, "r2", tie_tol) for w in Weighting
    }
    cev = 1.0 - inst.sigma**2 / np.diag(cov)
    cev[0] = 0.0
    return {
        "constants": c,
        "weights": inst.weights.tolist(),
        "covariance": cov.tolist(),
        "covariance_closed_form": printed.tolist(),
        "precision": np.linalg.inv(cov).tolist(),
        "r2": r2.tolist(),
        "cev": cev.tolist(),
        "sortability": {
            k: {"fraction": str(r.fraction), "value": r.value, "ties": r.ties}
            for k, r in reports.items()
        },
    }


# --- bootstrap audit -----------------------------------------------------


def _summary(values: Sequence[float]) -> dict[str, float]:
    arr = np.asarray(values, dtype=float)
    lo, hi = float(arr.min()), float(arr.max())
    # clip away rounding so that min <= mean <= max always holds
    return {"mean": float(np.clip(arr.mean(), lo, hi)), "min": lo, "max": hi}


def _audit_once(x: np.ndarray, g: Dag | None, weighting, algorithms, rng) -> dict:
    out: dict = {}
    if g is None:
        out["tau_r2"] = r2_criterion(x).tolist()
        out["tau_var"] = var_criterion(x).tolist()
        return out
    for c, r in sortability_reports(x, g, weighting=weighting).items():
        out[f"v_{c}"] = r.value
    for name in algorithms:
        if name == "random":
            est = random_regress(x, rng)
        else:
            est = ALGORITHMS[name](x)
        g_hat = threshold_to_dag(est)
        out[f"sid_{name}"] = sid(g, g_hat)
        out[f"shd_{name}"] = shd(g, g_hat)
    return out


def audit_dataset(
    data: Dataset | np.ndarray,
    g: Dag | None = None,
    bootstrap: int = 30,
    seed: int = 0,
    weighting: Weighting | str = Weighting.UNIQUE_LENGTH,
    algorithms: Sequence[str] = (),
) -> dict:
    """Sortabilities (and optional discovery scores) on data and bootstrap resamples.

    Without a graph only the per-variable criterion values are reported, since
    sortability is defined relative to a graph.
    """
    x = as_array(data)
    if g is not None and g.d != x.shape[1]:
        raise ValueError(f"graph has {g.d} nodes but data has {x.shape[1]} columns")
    unknown = set(algorithms) - set(ALGORITHMS)
    if unknown:
        raise ValueError(f"unknown algorithms {sorted(unknown)}")
    report = {
        "n": int(x.shape[0]),
        "d": int(x.shape[1]),
        "full": _audit_once(x, g, weighting, algorithms, substream(seed, 0, ALGO)),
    }
    if bootstrap <= 0:
        return report
    samples, skipped = [], 0
    for b in range(bootstrap):
        rng = substream(seed, b + 1, BOOT)
        idx = rng.integers(0, x.shape[0], size=x.shape[0])
        try:
            samples.append(_audit_once(x[idx], g, weighting, algorithms, substream(seed, b + 1, ALGO)))
        except (DegenerateColumnError, UndefinedSortabilityError) as exc:
            log.warning("bootstrap sample %d skipped: %s", b, exc)
            skipped += 1
    block: dict = {"B": bootstrap, "skipped": skipped}
    if samples:
        for key, value in samples[0].items():
            if isinstance(value, list):
                block[key] = np.mean([s[key] for s in samples], axis=0).tolist()
            else:
                block[key] = _summary([s[key] for s in samples])
    report["bootstrap"] = block
    return report
