"""
Auditing a dataset from disk
============================

Given a CSV and optionally a graph believed to describe it, the audit reports
sortabilities on the full data and their spread over bootstrap resamples. Here
the "external" dataset is simulated and written to disk first.
"""

# %%
import json
import tempfile
from pathlib import Path

from anmsort.experiments import ExperimentConfig, audit_dataset, sample_instance, substream, GRAPH, PARAMS, DATA
from anmsort.io import read_dataset_csv, read_graph_json, write_dataset_csv, write_graph_json
from anmsort import sample_data

cfg = ExperimentConfig(d=11, gamma=1.5, n=853, seed=4)
g = cfg.sample_graph(substream(cfg.seed, 0, GRAPH))
inst = sample_instance(g, cfg.weight_dist, cfg.noise, substream(cfg.seed, 0, PARAMS))
tmp = Path(tempfile.mkdtemp())
write_dataset_csv(sample_data(inst, cfg.n, substream(cfg.seed, 0, DATA)), tmp / "data.csv")
write_graph_json(g, tmp / "graph.json")

# %%
# Read it back as an outside user would and audit with 30 resamples.
data = read_dataset_csv(tmp / "data.csv")
graph, _ = read_graph_json(tmp / "graph.json")
report = audit_dataset(data, graph, bootstrap=30, seed=0, algorithms=["r2sr"])
print(json.dumps(report["full"], indent=1))
for key in ("v_r2", "v_var", "sid_r2sr"):
    s = report["bootstrap"][key]
    print(f"{key:>9}: mean {s['mean']:.3f}  range [{s['min']:.3f}, {s['max']:.3f}]")

# %%
# Without a graph sortability is undefined, so only the criterion values come back.
print(audit_dataset(data, None, bootstrap=0)["full"]["tau_r2"])
