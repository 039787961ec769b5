"""Working-precision context and multiprecision scalar helpers.

All scalars are ``gmpy2.mpfr`` values.  Arithmetic only happens at the
intended precision while a context is active, so every public routine that
computes wraps its body in ``with ctx.active():``.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import gmpy2
import numpy as np
from gmpy2 import mpc, mpfr

DOUBLE_BITS = 53
MPFR = type(mpfr(0))


class NumericFailure(ArithmeticError):
    """Base class for failures caused by the numbers rather than the inputs."""


@dataclass(frozen=True)
class PrecisionContext:
    """Significand precision plus the tolerances derived from it.

    Parameters
    ----------
    bits : int
        Significand bits of every scalar (53 is IEEE double).
    realness_tol : float or str, optional
        Relative threshold below which imaginary parts of computed
        eigenvalues are discarded.  Defaults to ``2**(-bits/2)``.
    """

    bits: int
    realness_tol: object = field(default=None)

    def __post_init__(self):
        if not isinstance(self.bits, (int, np.integer)) or isinstance(self.bits, bool):
            raise TypeError("bits must be an integer")
        if self.bits < DOUBLE_BITS:
            raise ValueError(f"bits must be >= {DOUBLE_BITS}, got {self.bits}")
        object.__setattr__(self, "bits", int(self.bits))
        with self.active():
            if self.realness_tol is None:
                tol = mpfr(2) ** (-(self.bits // 2))
            else:
                tol = self.mpf(self.realness_tol)
            if not tol > 0:
                raise ValueError("realness_tol must be positive")
            tol = max(tol, self.eps)
        object.__setattr__(self, "realness_tol", tol)

    @property
    def eps(self) -> mpfr:
        """Unit roundoff ``2**(1 - bits)``, exact."""
        with self.active():
            return gmpy2.mul_2exp(mpfr(1), 1 - self.bits)

    @property
    def digits(self) -> int:
        """Decimal digits that round-trip a value at this precision."""
        return int(math.ceil(self.bits * math.log10(2))) + 2

    @contextmanager
    def active(self) -> Iterator[gmpy2.context]:
        with gmpy2.context(gmpy2.get_context(), precision=self.bits) as c:
            yield c

    def mpf(self, value) -> mpfr:
        """Convert ``value`` (str, int, Fraction-like, mpfr, float) to an mpfr.

        Strings are parsed directly at working precision; pass strings for
        inputs that must not be rounded to double first.
        """
        with self.active():
            if isinstance(value, str):
                x = mpfr(value.strip())
            else:
                x = mpfr(value)
            if not gmpy2.is_finite(x):
                raise ValueError(f"non-finite scalar {value!r}")
            return x

    def array(self, values: Iterable) -> np.ndarray:
        """1-D object array of mpfr scalars."""
        vals = [self.mpf(v) for v in values]
        out = np.empty(len(vals), dtype=object)
        out[:] = vals
        return out

    def zeros(self, shape) -> np.ndarray:
        with self.active():
            out = np.empty(shape, dtype=object)
            out.fill(mpfr(0))
        return out

    def pi(self) -> mpfr:
        with self.active():
            return gmpy2.const_pi()

    def to_str(self, x) -> str:
        return format_scalar(x, self.digits)


def format_scalar(x, digits: int) -> str:
    """Scientific-notation decimal string with ``digits`` significant digits."""
    if isinstance(x, mpc):
        return f"{format_scalar(x.real, digits)}{'+' if x.imag >= 0 else '-'}{format_scalar(abs(x.imag), digits)}j"
    if not isinstance(x, type(mpfr(0))):
        x = mpfr(x) if not isinstance(x, float) else gmpy2.mpfr(x, 53)
    if x == 0:
        return "0.0"
    if not gmpy2.is_finite(x):
        return str(x)
    mant, exp, _ = x.digits(10, digits)
    sign = ""
    if mant.startswith("-"):
        sign, mant = "-", mant[1:]
    mant = mant.rstrip("0") or "0"
    body = mant[0] + "." + (mant[1:] or "0")
    return f"{sign}{body}e{exp - 1:+d}"


def as_object_matrix(rows, ctx: PrecisionContext) -> np.ndarray:
    """Validate and convert a square table of scalars to an mpfr object matrix."""
    arr = np.asarray(rows, dtype=object)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise ValueError(f"expected a non-empty square matrix, got shape {arr.shape}")
    flat = arr.ravel()
    bits = ctx.bits
    if all(type(v) is MPFR and v.precision == bits and gmpy2.is_finite(v) for v in flat):
        return arr.copy()
    out = np.empty(arr.shape, dtype=object)
    with ctx.active():
        for idx, v in np.ndenumerate(arr):
            out[idx] = ctx.mpf(v)
    return out


def to_float_array(values) -> np.ndarray:
    return np.array([float(v) for v in np.ravel(values)], dtype=float).reshape(np.shape(values))
