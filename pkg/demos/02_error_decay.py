"""How fast does the sampling error decay?

Run with ``python3 demos/02_error_decay.py`` (about ten seconds).

The bivariate test function built from ``sgn(x - 1/2)(sin^3 + sin^4)`` has
Fourier coefficients decaying like ``|k|^-4`` and ``|k|^-5``, so it has
dominating mixed smoothness just below 3.5 in the L2 sense.  We sample it
on multiple rank-1 lattices for a growing family of hyperbolic crosses,
measure the relative errors exactly (truncation tail plus in-set error) and
compare the decay with the reference curve ``M^-3 (log M)^7``.
"""

# %% Sweep the refinement
import numpy as np

from mlfft import BoundParams, bound_curve, fit_rate, fit_scale
from mlfft.experiment import ExperimentConfig, run_experiment

cfg = ExperimentConfig(function="g34", dims=[2], refinements=[2**j for j in range(1, 12)], seed=0)
records = run_experiment(cfg, threads=4)

# %% The measured errors next to the reference curve
params = fit_scale(BoundParams(d=2, beta=3.5), "mr1l_l2", records[0].M, records[0].rel_err_L2)
print("      N     |I|    L         M   rel_L2     rel_A   reference")
for r in records:
    ref = bound_curve(params, "mr1l_l2", r.M)
    print(f"{r.N:7g} {r.cardinality:7d} {r.L:4d} {r.M:9d} {r.rel_err_L2:9.2e} {r.rel_err_A:9.2e} {ref:9.2e}")

# %% Local slopes
slope_l2 = fit_rate(records, 4)
slope_a = fit_rate(records, 4, metric="rel_err_A")
tail = records[-4:]
Ms = np.array([r.M for r in tail], dtype=float)
ref_slope = np.polyfit(np.log(Ms), np.log(bound_curve(params, "mr1l_l2", Ms)), 1)[0]
print(f"\nfitted log-log slope over the last four points: L2 {slope_l2:.2f}, A {slope_a:.2f}")
print(f"local slope of the reference curve over the same samples: {ref_slope:.2f}")
print("(the logarithmic factor keeps the reference well above its asymptotic slope -3 here)")

# %% Randomness: the same point with different seeds
from mlfft import ConstructionParams, TensorTestFunction, approximate, build_multiple_lattice, generate_hc, relative_errors

fn = TensorTestFunction("g34", 2)
I = generate_hc(2, 16, 0.0)
print(f"\n|I| = {len(I)}; five independent constructions:")
for seed in range(5):
    ml, _ = build_multiple_lattice(I, ConstructionParams(seed=seed))
    ra, rl = relative_errors(fn, I, approximate(fn, I, ml))
    print(f"  seed {seed}: L = {ml.L}, M = {ml.total_size:5d}, rel_L2 = {rl:.3e}, rel_A = {ra:.3e}")
print(f"pure truncation error for comparison: {np.sqrt(1 - np.sum(np.abs(fn.tensor_coeff(I.frequencies)) ** 2)):.3e}")
