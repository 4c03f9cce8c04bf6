"""
Equal cause-explained variance, descending R^2
==============================================

A complete DAG on four unit-variance nodes where every non-root variable has
exactly half of its variance explained by its parents. Controlling CEV this way
does not make R^2 uninformative: R^2 actually falls along the causal order.
"""

# %%
import numpy as np

from anmsort.discovery import r2_sort_n_regress
from anmsort.experiments import counterexample_instance, counterexample_report

rep = counterexample_report()
np.set_printoptions(precision=4, suppress=True)
print("covariance:\n", np.array(rep["covariance"]))
print("CEV:", np.array(rep["cev"]))
print("R2: ", np.array(rep["r2"]))

# %%
# Sortability is close to 0 under all weightings; the only credit comes from
# the exact tie between the first two nodes.
for weighting, s in rep["sortability"].items():
    print(f"{weighting:<15} {s['fraction']:>5}  ({s['value']:.4f})")

# %%
# With a large sample, R^2-SortnRegress orders the variables roughly backwards.
from anmsort import sample_data

data = sample_data(counterexample_instance(), 100_000, np.random.default_rng(0))
print("candidate order:", r2_sort_n_regress(data).order, " causal order: (0, 1, 2, 3)")
