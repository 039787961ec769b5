"""Banded symbols, Toeplitz matrices and the closed-form oracles.

A symbol is stored by its Fourier coefficients ``f_k`` for ``k`` in a finite
band.  The Toeplitz matrix has ``T[i, j] = f_{i-j}``, so positive indices sit
below the diagonal (first column) and negative indices above it (first row).
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Mapping, Sequence

import gmpy2
import numpy as np
from gmpy2 import mpc, mpfr

from .linalg import SpectrumSample
from .precision import NumericFailure, PrecisionContext


@dataclass(frozen=True)
class Symbol:
    """Fourier coefficients ``f_{min_k} .. f_{min_k + len(coeffs) - 1}``."""

    min_k: int
    coeffs: tuple
    bits: int

    def __post_init__(self):
        if len(self.coeffs) == 0 or all(c == 0 for c in self.coeffs):
            raise ValueError("a symbol needs at least one nonzero coefficient")

    @classmethod
    def from_coefficients(cls, min_k: int, coeffs: Sequence, ctx: PrecisionContext) -> "Symbol":
        """Build from a list of coefficients (decimal strings preferred)."""
        return cls(int(min_k), tuple(ctx.mpf(c) for c in coeffs), ctx.bits)

    @classmethod
    def from_mapping(cls, coeffs: Mapping[int, object], ctx: PrecisionContext) -> "Symbol":
        """Build from ``{k: f_k}``; missing indices inside the band are zero."""
        if not coeffs:
            raise ValueError("empty coefficient mapping")
        lo, hi = min(coeffs), max(coeffs)
        return cls.from_coefficients(lo, [coeffs.get(k, "0") for k in range(lo, hi + 1)], ctx)

    @property
    def max_k(self) -> int:
        return self.min_k + len(self.coeffs) - 1

    @property
    def lower_bandwidth(self) -> int:
        """``r``: number of nonzero subdiagonals, i.e. the largest positive index."""
        return max(0, self.max_k)

    @property
    def upper_bandwidth(self) -> int:
        return max(0, -self.min_k)

    def coef(self, k: int) -> mpfr:
        if self.min_k <= k <= self.max_k:
            return self.coeffs[k - self.min_k]
        return mpfr(0)

    def items(self):
        return [(self.min_k + i, c) for i, c in enumerate(self.coeffs)]

    def first_column(self, n: int) -> list:
        return [self.coef(k) for k in range(n)]

    def first_row(self, n: int) -> list:
        return [self.coef(-k) for k in range(n)]

    def is_symmetric(self) -> bool:
        return all(self.coef(k) == self.coef(-k) for k in range(self.min_k, self.max_k + 1))

    def to_json(self, ctx: PrecisionContext | None = None) -> dict:
        ctx = ctx or PrecisionContext(self.bits)
        return {"min_k": self.min_k, "coeffs": [ctx.to_str(c) for c in self.coeffs]}


def load_symbol(path, ctx: PrecisionContext) -> Symbol:
    """Read a ``{"min_k": int, "coeffs": [str, ...]}`` document."""
    doc = json.loads(Path(path).read_text())
    return symbol_from_json(doc, ctx)


def symbol_from_json(doc: dict, ctx: PrecisionContext) -> Symbol:
    try:
        min_k = doc["min_k"]
        coeffs = doc["coeffs"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"symbol document needs 'min_k' and 'coeffs': {exc}") from None
    if not isinstance(min_k, int) or isinstance(min_k, bool):
        raise ValueError("min_k must be an integer")
    if not isinstance(coeffs, list) or not coeffs:
        raise ValueError("coeffs must be a non-empty list")
    for c in coeffs:
        if not isinstance(c, (str, int)):
            raise ValueError(f"coefficients must be decimal strings, got {c!r}")
    return Symbol.from_coefficients(min_k, [str(c) for c in coeffs], ctx)


def save_symbol(symbol: Symbol, path) -> None:
    Path(path).write_text(json.dumps(symbol.to_json(), indent=2) + "\n")


def build_toeplitz(symbol: Symbol, n: int, ctx: PrecisionContext | None = None) -> np.ndarray:
    """Dense ``n x n`` object matrix with ``T[i, j] = f_{i-j}``."""
    if n < 1:
        raise ValueError(f"matrix order must be positive, got {n}")
    ctx = ctx or PrecisionContext(symbol.bits)
    T = ctx.zeros((n, n))
    with ctx.active():
        for k, c in symbol.items():
            if c == 0 or abs(k) >= n:
                continue
            c = mpfr(c)
            if k >= 0:
                for j in range(n - k):
                    T[j + k, j] = c
            else:
                for i in range(n + k):
                    T[i, i - k] = c
    return T


def eval_symbol(symbol: Symbol, theta, ctx: PrecisionContext | None = None) -> mpc:
    """``f(theta) = sum_k f_k exp(i k theta)`` over the band."""
    ctx = ctx or PrecisionContext(symbol.bits)
    with ctx.active():
        theta = ctx.mpf(theta)
        re = mpfr(0)
        im = mpfr(0)
        for k, c in symbol.items():
            if c != 0:
                s, co = gmpy2.sin_cos(k * theta)
                re += c * co
                im += c * s
        return mpc(re, im)


def symmetrize_tridiagonal(symbol: Symbol, ctx: PrecisionContext | None = None) -> Symbol:
    """Symmetric tridiagonal symbol ``g`` with ``T_n(g)`` similar to ``T_n(f)``.

    ``g_0 = f_0`` and ``g_{+-1} = sqrt(f_1) sqrt(f_{-1})`` with principal
    square roots, so two negative off-diagonals give a negative ``g_1``.
    """
    ctx = ctx or PrecisionContext(symbol.bits)
    if symbol.min_k < -1 or symbol.max_k > 1:
        raise ValueError("symmetrization needs a symbol supported on k in {-1, 0, 1}")
    f1, f0, fm1 = symbol.coef(1), symbol.coef(0), symbol.coef(-1)
    with ctx.active():
        prod = f1 * fm1
        if not prod > 0:
            raise ValueError(
                "f_1 * f_-1 must be positive; otherwise the spectrum is complex (not supported)"
            )
        g1 = gmpy2.sqrt(prod)
        if f1 < 0:
            g1 = -g1
    return Symbol(-1, (g1, mpfr(f0), g1), ctx.bits)


def theta_grid(n: int, ctx: PrecisionContext) -> np.ndarray:
    """``theta_{j,n} = j pi / (n + 1)`` for ``j = 1..n``."""
    if n < 1:
        raise ValueError("grid size must be positive")
    with ctx.active():
        pi = gmpy2.const_pi()
        out = np.empty(n, dtype=object)
        out[:] = [j * pi / (n + 1) for j in range(1, n + 1)]
    return out


@dataclass(frozen=True)
class SampledGrid:
    n: int
    points: np.ndarray
    h: mpfr

    @classmethod
    def build(cls, n: int, ctx: PrecisionContext) -> "SampledGrid":
        with ctx.active():
            h = mpfr(1) / (n + 1)
        return cls(n, theta_grid(n, ctx), h)


def tridiag_exact_eigenvalues(symbol: Symbol, n: int, ctx: PrecisionContext | None = None,
                              order: str = "ascending") -> SpectrumSample:
    """Exact spectrum ``g(theta_{j,n})`` of a tridiagonal Toeplitz matrix."""
    ctx = ctx or PrecisionContext(symbol.bits)
    g = symmetrize_tridiagonal(symbol, ctx)
    with ctx.active():
        g0, g1 = g.coef(0), g.coef(1)
        vals = [g0 + 2 * g1 * gmpy2.cos(t) for t in theta_grid(n, ctx)]
        vals.sort(reverse=(order == "descending"))
        values = np.empty(n, dtype=object)
        values[:] = vals
        return SpectrumSample(n=n, values=values, order=order, bits=ctx.bits, max_imag_discarded=mpfr(0))


@dataclass(frozen=True)
class PerfectGrid:
    """Points ``xi_j`` in (0, pi) with ``g(xi_j) = lambda_j``."""

    n: int
    xi: np.ndarray
    residuals: np.ndarray
    ok: np.ndarray

    @property
    def all_ok(self) -> bool:
        return bool(np.all(self.ok))


class BracketError(NumericFailure):
    pass


def _endpoint_value(g_eval, theta, inward, ctx):
    try:
        v = mpfr(g_eval(theta))
        if gmpy2.is_finite(v):
            return theta, v
    except (ZeroDivisionError, ValueError, ArithmeticError):
        pass
    t = theta + inward
    return t, mpfr(g_eval(t))


def perfect_grid(g_eval: Callable, spectrum: SpectrumSample, tol, ctx: PrecisionContext) -> PerfectGrid:
    """Bisection roots of ``g(theta) - lambda_j`` in (0, pi) for a monotone ``g``.

    Entries outside the range of ``g`` (beyond ``tol``) are flagged in ``ok``
    and get ``xi = nan``.  Bisection runs until the bracket is at roundoff
    width, capped at ``4 * bits`` halvings.
    """
    with ctx.active():
        tol = ctx.mpf(tol)
        pi = gmpy2.const_pi()
        step = gmpy2.sqrt(ctx.eps)
        a, ga = _endpoint_value(g_eval, mpfr(0), step, ctx)
        b, gb = _endpoint_value(g_eval, pi, -step, ctx)
        if ga == gb:
            raise BracketError("g takes the same value at both ends of (0, pi); not monotone")
        increasing = gb > ga
        lo_val, hi_val = (ga, gb) if increasing else (gb, ga)
        n = spectrum.n
        xi = np.empty(n, dtype=object)
        res = np.empty(n, dtype=object)
        ok = np.zeros(n, dtype=bool)
        cap = 4 * ctx.bits
        width_tol = ctx.eps * pi
        for j, lam in enumerate(spectrum.values):
            lam = mpfr(lam)
            if lam < lo_val - tol or lam > hi_val + tol:
                xi[j] = mpfr("nan")
                res[j] = mpfr("inf")
                continue
            lo, hi = a, b
            for _ in range(cap):
                mid = (lo + hi) / 2
                gm = mpfr(g_eval(mid))
                if (gm < lam) == increasing:
                    lo = mid
                else:
                    hi = mid
                if hi - lo <= width_tol:
                    break
            x = (lo + hi) / 2
            r = abs(mpfr(g_eval(x)) - lam)
            xi[j] = x
            res[j] = r
            ok[j] = r <= tol
        return PerfectGrid(n=n, xi=xi, residuals=res, ok=ok)


def fourier_coefficients_by_quadrature(g_eval: Callable, K: int, ctx: PrecisionContext,
                                       quad_points: int = 2 ** 16, tol=None,
                                       max_points: int = 2 ** 20) -> list:
    """Cosine Fourier coefficients ``g_0 .. g_{K-1}`` of an even function.

    ``g_k = (1/pi) int_0^pi g(theta) cos(k theta) dtheta`` by the composite
    midpoint rule.  The point count doubles until two successive estimates
    agree within ``tol`` (default ``10**(-bits/4)``) or ``max_points`` is
    reached, in which case a warning is issued and the finest estimate kept.
    """
    if K < 1:
        raise ValueError("K must be positive")
    if quad_points < 8 * K:
        raise ValueError(f"quad_points must be at least 8*K = {8 * K}")
    with ctx.active():
        tol = mpfr(10) ** (-(ctx.bits / 4)) if tol is None else ctx.mpf(tol)
        prev = _midpoint_cosine_sums(g_eval, K, quad_points, ctx)
        N = quad_points
        while N * 2 <= max_points:
            N *= 2
            cur = _midpoint_cosine_sums(g_eval, K, N, ctx)
            diff = max(abs(x - y) for x, y in zip(cur, prev))
            prev = cur
            if diff <= tol:
                return prev
        warnings.warn(
            f"quadrature did not reach tolerance {float(tol):.1e} with {N} points", RuntimeWarning
        )
        return prev


def _midpoint_cosine_sums(g_eval, K, N, ctx):
    pi = gmpy2.const_pi()
    hstep = pi / N
    thetas = [(i + mpfr("0.5")) * hstep for i in range(N)]
    gv = []
    for t in thetas:
        v = mpfr(g_eval(t))
        if not gmpy2.is_finite(v):
            raise NumericFailure(f"g evaluated to {v} at theta = {t}")
        gv.append(v)
    gv = np.array(gv, dtype=object)
    c1 = np.array([gmpy2.cos(t) for t in thetas], dtype=object)
    out = [gmpy2.fsum(gv) / N]
    prev_c = np.array([mpfr(1)] * N, dtype=object)
    cur_c = c1
    for k in range(1, K):
        out.append(gmpy2.fsum(gv * cur_c) / N)
        prev_c, cur_c = cur_c, 2 * c1 * cur_c - prev_c
    return out


# ---------------------------------------------------------------------------
# closed-form spectral functions used by the presets and oracles


def g_tridiagonal_example(theta):
    """``2 - 2 sqrt(2) cos(theta)``, the symmetrized ``-e^{it} + 2 - 2e^{-it}``."""
    theta = mpfr(theta)
    return 2 - 2 * gmpy2.sqrt(mpfr(2)) * gmpy2.cos(theta)


def g_bilaplacian(theta):
    """``6 - 8 cos(theta) + 2 cos(2 theta) = 16 sin(theta/2)**4``."""
    theta = mpfr(theta)
    return 16 * gmpy2.sin(theta / 2) ** 4


def g_shifted_bilaplacian(theta):
    """``-sin(t)^4 / (sin(t/4) sin(3t/4)^3)`` with its limit ``-256/27`` at 0."""
    theta = mpfr(theta)
    if theta == 0:
        return mpfr(-256) / 27
    return -gmpy2.sin(theta) ** 4 / (gmpy2.sin(theta / 4) * gmpy2.sin(3 * theta / 4) ** 3)


def bilaplacian_perfect_grid_closed_form(lam):
    """``2 arcsin(lam**(1/4) / 2)``: inverse of ``16 sin(t/2)**4`` on [0, pi]."""
    lam = mpfr(lam)
    if lam < 0:
        lam = mpfr(0)
    return 2 * gmpy2.asin(gmpy2.root(lam, 4) / 2)


BUILTIN_G = {
    "tridiagonal": g_tridiagonal_example,
    "bilaplacian": g_bilaplacian,
    "shifted_bilaplacian": g_shifted_bilaplacian,
}
