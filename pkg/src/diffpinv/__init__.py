"""Explicit pseudo-inverses of difference matrices and sparse signal approximation."""

__version__ = "0.1.0"

from .dictionary import Dictionary, build_dictionary, correlations
from .estimators import SparseDiffusionApproximator
from .exceptions import *  # noqa: F401,F403
from .inpaint import InpaintProblem, Mask, implied_source, solve_inpainting, spline_reconstruct
from .metrics import INFINITE_PSNR, mse, psnr
from .omp import OmpTrace, SparseCode, omp, reconstruct, sparse_approximate
from .operators import (
    ALL_KINDS,
    BIHARMONIC_NEUMANN,
    BIHARMONIC_PERIODIC,
    LAPLACE_NEUMANN,
    LAPLACE_PERIODIC,
    Boundary,
    DifferenceOperator,
    OperatorKind,
    Order,
    build_operator,
    matvec,
)
from .pinv import (
    PinvMatrix,
    Provenance,
    column_norm_squared_closed_form,
    penrose_residuals,
    pinv_closed_form,
    pinv_generic,
    pinv_spectral,
    trig_identity_residual,
)
from .synth import synth_signal
