"""Sparse FFT sampling and reconstruction on multiple rank-1 lattices.

The typical workflow builds a frequency index set, constructs a
reconstructing multiple lattice for it, samples a function on the lattice
nodes and recovers its Fourier coefficients::

    >>> from mlfft import generate_hc, build_multiple_lattice, ConstructionParams, approximate
    >>> I = generate_hc(2, 8, 0.0)
    >>> ml, report = build_multiple_lattice(I, ConstructionParams(seed=1))
"""

from .analysis import (
    BOUND_KINDS,
    BoundParams,
    ErrorRecord,
    InsufficientRecords,
    aliasing_error_exact,
    bound_curve,
    fit_rate,
    fit_scale,
    relative_errors,
)
from .construct import (
    ConstructionParams,
    ConstructionReport,
    NotCovered,
    SearchCeilingExceeded,
    build_multiple_lattice,
    build_single_lattice_cbc,
    eligible_primes,
    l_max,
)
from .fft import FORWARD, INVERSE, dft_direct, fft_1d
from .index_sets import (
    CardinalityCapExceeded,
    FrequencyIndexSet,
    WeightParams,
    dyadic_level,
    expansion,
    explicit,
    filter_even,
    generate_dyadic,
    generate_hc,
    generate_l1ball,
    in_hc,
    weight,
)
from .lattice import (
    MultipleLattice,
    RankOneLattice,
    aliasing_free_mask,
    aliasing_free_subset,
    coverage_check,
    coverage_counts,
    distinct_node_count,
    in_dual,
    is_reconstructing_single,
    node_count_bound,
    residue,
)
from .testfuncs import TensorTestFunction, tail_a_sum, tail_l2_sq, tensor_coeff
from .transform import (
    CoefficientVector,
    CoverageViolation,
    SampleVector,
    adjoint_single,
    approximate,
    evaluate_on_lattice,
    reconstruct_multiple,
    sample_function,
)

__version__ = "0.1.0"

__all__ = [
    "BOUND_KINDS",
    "BoundParams",
    "CardinalityCapExceeded",
    "CoefficientVector",
    "ConstructionParams",
    "ConstructionReport",
    "CoverageViolation",
    "ErrorRecord",
    "FORWARD",
    "FrequencyIndexSet",
    "INVERSE",
    "InsufficientRecords",
    "MultipleLattice",
    "NotCovered",
    "RankOneLattice",
    "SampleVector",
    "SearchCeilingExceeded",
    "TensorTestFunction",
    "WeightParams",
    "adjoint_single",
    "aliasing_error_exact",
    "aliasing_free_mask",
    "aliasing_free_subset",
    "approximate",
    "bound_curve",
    "build_multiple_lattice",
    "build_single_lattice_cbc",
    "coverage_check",
    "coverage_counts",
    "dft_direct",
    "distinct_node_count",
    "dyadic_level",
    "eligible_primes",
    "evaluate_on_lattice",
    "expansion",
    "explicit",
    "fft_1d",
    "filter_even",
    "fit_rate",
    "fit_scale",
    "generate_dyadic",
    "generate_hc",
    "generate_l1ball",
    "in_dual",
    "in_hc",
    "is_reconstructing_single",
    "l_max",
    "node_count_bound",
    "reconstruct_multiple",
    "relative_errors",
    "residue",
    "sample_function",
    "tail_a_sum",
    "tail_l2_sq",
    "tensor_coeff",
    "weight",
]
