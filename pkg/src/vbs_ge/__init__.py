"""Geometric entanglement of integer-spin valence-bond-solid chains.

Exact transfer-matrix contractions for the overlap of the VBS state with
parity-sector product states, a dense brute-force oracle, seeded random
product-state sampling and a fit of the spin scaling law.
"""

from .core import (
    Chain,
    DimensionError,
    InvalidSpinError,
    LocalTensor,
    ProductAnsatz,
    boundary_tensor,
    contracted_row,
    local_tensor,
    sector_ansatz,
    sector_levels,
)
from .contraction import (
    NormResult,
    ScaledMatrix,
    log2_lambda_sq,
    norm_obc,
    norm_pbc,
    overlap_obc,
    overlap_pbc,
    scaled_product,
)
from .dense import DenseCapExceeded, dense_lambda_sq, dense_optimize, dense_state, single_site_rdm
from .ge import GeResult, asymptotic_norm_error, extrapolate, extrapolated_eps, ge, global_ge, sweep
from .sampler import SampleMode, sample, summarize
from .scaling import PUBLISHED_PARAMS, FitParams, eval_f, fit, published_comparison

from . import closed_forms

__version__ = "0.1.0"
