"""Matrix-less spectra of large Toeplitz matrices from an expansion table.

    lambda_j(T_n) ~ sum_k c_k(theta_{j,n}) h**k,    h = 1/(n+1)

Each ``c_k`` is only known on the coarse grid ``theta_{j,n0}``; off-grid values
come from local Lagrange interpolation through the ``d + 1`` nearest nodes.
Stencils are shifted inwards near 0 and pi rather than reaching outside the
sampled range.
"""

from __future__ import annotations

import bisect
import csv
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from gmpy2 import mpfr

from .expansion import ExpansionTable
from .linalg import SpectrumSample
from .precision import PrecisionContext
from .recovery import RecoveredSymbol, eval_recovered, recover
from .toeplitz import theta_grid

DEFAULT_DEGREE = 4


@dataclass(frozen=True)
class PredictedSpectrum:
    n: int
    values: np.ndarray
    interp_degree: int
    bits: int
    order: str
    source: dict = field(default_factory=dict)


def _stencil(nodes, theta, degree):
    n0 = len(nodes)
    pos = bisect.bisect_left(nodes, theta)
    start = pos - (degree + 1) // 2
    start = max(0, min(start, n0 - degree - 1))
    return range(start, start + degree + 1)


def _lagrange(xs, ys, x):
    total = mpfr(0)
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        w = mpfr(1)
        for m, xm in enumerate(xs):
            if m != i:
                w *= (x - xm) / (xi - xm)
        total += w * yi
    return total


def _effective_degree(n0: int, degree: int) -> int:
    if degree < 0:
        raise ValueError("interpolation degree must be non-negative")
    if n0 < degree + 1:
        warnings.warn(f"only {n0} nodes; interpolation degree reduced to {n0 - 1}", RuntimeWarning)
        return n0 - 1
    return degree


def interpolate_row(table: ExpansionTable, k: int, theta, degree: int = DEFAULT_DEGREE,
                    _nodes=None) -> mpfr:
    """Value of ``c_k(theta)`` by local polynomial interpolation of row ``k``.

    Exact (returns the stored entry) when ``theta`` is a grid node.
    """
    if not 0 <= k <= table.alpha:
        raise ValueError(f"row index {k} outside 0..{table.alpha}")
    ctx = table.ctx
    degree = _effective_degree(table.n0, degree)
    with ctx.active():
        theta = ctx.mpf(theta)
        pi = ctx.pi()
        if not 0 < theta < pi:
            raise ValueError("theta must lie in (0, pi)")
        nodes = list(table.theta()) if _nodes is None else _nodes
        pos = bisect.bisect_left(nodes, theta)
        for cand in (pos - 1, pos):
            if 0 <= cand < len(nodes) and nodes[cand] == theta:
                return table.C[k, cand]
        idx = _stencil(nodes, theta, degree)
        return _lagrange([nodes[i] for i in idx], [table.C[k, i] for i in idx], theta)


def predict(table: ExpansionTable, n: int, degree: int = DEFAULT_DEGREE,
            row0: str | RecoveredSymbol = "auto") -> PredictedSpectrum:
    """Approximate all eigenvalues of ``T_n(f)`` without forming the matrix.

    Parameters
    ----------
    table : ExpansionTable
    n : int
        Target order.
    degree : int
        Local interpolation degree for the ``c_k`` rows.
    row0 : {"auto", "interpolate"} or RecoveredSymbol
        How ``c_0`` is evaluated off-grid.  ``"auto"`` recovers the cosine
        coefficients of ``c_0`` and uses the truncated series when they
        classify as a trigonometric polynomial, interpolation otherwise.
        A :class:`RecoveredSymbol` is used directly.
    """
    if n < 1:
        raise ValueError(f"target order must be positive, got {n}")
    ctx = table.ctx
    degree = _effective_degree(table.n0, degree)
    series = None
    if isinstance(row0, RecoveredSymbol):
        series = row0
    elif row0 == "auto":
        rs = recover(table.C[0], ctx)
        series = rs if rs.rctp_degree is not None else None
    elif row0 != "interpolate":
        raise ValueError(f"unknown row0 mode {row0!r}")
    nodes = list(table.theta())
    with ctx.active():
        h = mpfr(1) / (n + 1)
        values = np.empty(n, dtype=object)
        for j, t in enumerate(theta_grid(n, ctx)):
            if series is not None:
                acc = eval_recovered(series, t)
            else:
                acc = interpolate_row(table, 0, t, degree, _nodes=nodes)
            hk = mpfr(1)
            for k in range(1, table.alpha + 1):
                hk *= h
                acc += interpolate_row(table, k, t, degree, _nodes=nodes) * hk
            values[j] = acc
    source = table.metadata()
    source["row0"] = "series" if series is not None else "interpolation"
    return PredictedSpectrum(n=n, values=values, interp_degree=degree, bits=table.bits,
                             order=table.order, source=source)


@dataclass(frozen=True)
class ComparisonReport:
    n: int
    abs_errors: np.ndarray
    max_error: mpfr
    mean_error: mpfr
    reference_bits: int
    pseudospectrum_hazard: bool

    def summary(self) -> dict:
        return {
            "n": self.n,
            "max_error": float(self.max_error),
            "mean_error": float(self.mean_error),
            "reference_bits": self.reference_bits,
            "pseudospectrum_hazard": self.pseudospectrum_hazard,
        }


HAZARD_BITS = 128


def compare(pred: PredictedSpectrum, reference: SpectrumSample) -> ComparisonReport:
    """Index-wise absolute errors against a reference spectrum.

    The reference is re-sorted into the prediction's order.  References
    computed below 128 bits are flagged: for non-normal matrices they may be
    pseudospectral rather than true eigenvalues.
    """
    if pred.n != reference.n:
        raise ValueError(f"size mismatch: prediction has {pred.n} values, reference {reference.n}")
    bits = max(pred.bits, reference.bits)
    ctx = PrecisionContext(bits)
    with ctx.active():
        ref = sorted((mpfr(v) for v in reference.values), reverse=(pred.order == "descending"))
        errs = np.empty(pred.n, dtype=object)
        errs[:] = [abs(mpfr(a) - b) for a, b in zip(pred.values, ref)]
        total = mpfr(0)
        for e in errs:
            total += e
        return ComparisonReport(n=pred.n, abs_errors=errs, max_error=max(errs),
                                mean_error=total / pred.n, reference_bits=reference.bits,
                                pseudospectrum_hazard=reference.bits < HAZARD_BITS)


def write_prediction(pred: PredictedSpectrum, path) -> Path:
    """CSV ``j,theta,lambda`` with full-precision decimal strings."""
    path = Path(path)
    ctx = PrecisionContext(pred.bits)
    theta = theta_grid(pred.n, ctx)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["j", "theta", "lambda"])
        for j in range(pred.n):
            w.writerow([j + 1, ctx.to_str(theta[j]), ctx.to_str(pred.values[j])])
    return path
