"""Where does the sampling error come from?

Run with ``python3 demos/04_aliasing_anatomy.py``.

Sampling a function that has frequencies outside the index set folds those
frequencies onto the set.  On a multiple lattice the fold-down at ``k`` is
the average, over the components on which ``k`` is alias-free, of the
coefficients at ``k + h`` with ``h`` in the dual lattice of that component.
We check this formula against an actual reconstruction.
"""

# %%
import numpy as np

from mlfft import (
    CoefficientVector,
    ConstructionParams,
    aliasing_error_exact,
    build_multiple_lattice,
    evaluate_on_lattice,
    explicit,
    generate_hc,
    reconstruct_multiple,
)

rng = np.random.default_rng(5)
I = generate_hc(2, 8, 0.0)
ml, _ = build_multiple_lattice(I, ConstructionParams(seed=5))
print(f"|I| = {len(I)}, components: {[(c.z, c.M) for c in ml.components]}")

# %% A polynomial on I plus a few exterior frequencies
inner = rng.standard_normal(len(I)) + 1j * rng.standard_normal(len(I))
ext = [(40, 3), (-17, 25), (60, -60), (9, 0)]
ext_vals = np.array([0.3, -0.2j, 0.1 + 0.1j, 0.05])
union = explicit(list(I) + ext, 2)
coeffs = np.zeros(len(union), dtype=complex)
coeffs[union.positions(I.frequencies)] = inner
coeffs[union.positions(np.array(ext))] = ext_vals
f = CoefficientVector(union, coeffs)

rec = reconstruct_multiple(ml, [evaluate_on_lattice(f, comp) for comp in ml.components], I)
predicted = aliasing_error_exact(ml, (np.array(ext), ext_vals), I)

# %% Compare
err = rec.values - inner
hit = np.flatnonzero(np.abs(err) > 1e-12)
print(f"\n{hit.size} of {len(I)} coefficients are disturbed by aliasing:")
for i in hit:
    print(f"  k = {tuple(int(v) for v in I.frequencies[i])}: reconstruction error {err[i]:.4f}, formula {-predicted.values[i]:.4f}")
print(f"\nlargest mismatch: {np.max(np.abs(err + predicted.values)):.1e}")
print(f"sum |error| = {np.sum(np.abs(err)):.3f} <= L * sum |exterior| = {ml.L * np.sum(np.abs(ext_vals)):.3f}")
