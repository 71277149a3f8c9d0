"""A rough function on dyadic hyperbolic crosses.

Run with ``python3 demos/05_kink_on_dyadic_crosses.py`` (about half a minute).

The truncated parabola ``max(25/121 - (x - 1/2)^2, 0)`` has a kink, so its
coefficients only decay like ``|k|^-2``.  Here the index sets are dyadic
hyperbolic crosses in dimensions 4 and 6, where the number of samples per
frequency stays modest even though the sets are far from boxes.
"""

# %%
from mlfft import fit_rate
from mlfft.experiment import ExperimentConfig, run_experiment

for d, levels in ((4, range(2, 10)), (6, range(2, 8))):
    cfg = ExperimentConfig(function="kink", dims=[d], family="dyadic", refinements=list(levels), seed=3)
    records = run_experiment(cfg, threads=4)
    print(f"\nd = {d}")
    print("  n     |I|    L         M  M/|I|   rel_L2    rel_A")
    for r in records:
        print(f"{r.N:3g} {r.cardinality:7d} {r.L:4d} {r.M:9d} {r.M / r.cardinality:6.1f} {r.rel_err_L2:8.2e} {r.rel_err_A:8.2e}")
    print(f"  slope of rel_L2 over the last four points: {fit_rate(records, 4):.2f}")
