"""Spectral distribution and asymptotic eigenvalue expansion of Toeplitz matrices with real spectra.

The pipeline: sample the spectra of a few nested small Toeplitz matrices at
high precision (:func:`extract`), recover the cosine coefficients of the
distribution function (:func:`recover`), and predict spectra of arbitrarily
large matrices without forming them (:func:`predict`).
"""

from .expansion import ExpansionTable, extract, nested_sizes, read_table, sample_eigenvalues, vandermonde_solve, write_table
from .linalg import (
    ConvergenceError,
    SingularMatrixError,
    SpectrumNotRealError,
    SpectrumSample,
    balance,
    eigenvalues,
    project_real_sorted,
    solve_dense,
)
from .precision import NumericFailure, PrecisionContext
from .predict import PredictedSpectrum, compare, interpolate_row, predict
from .presets import PRESETS, get_preset
from .recovery import RecoveredSymbol, classify_rctp, eval_recovered, recover
from .toeplitz import (
    PerfectGrid,
    SampledGrid,
    Symbol,
    build_toeplitz,
    eval_symbol,
    fourier_coefficients_by_quadrature,
    load_symbol,
    perfect_grid,
    symmetrize_tridiagonal,
    tridiag_exact_eigenvalues,
)

__version__ = "0.1.0"
