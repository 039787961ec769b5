"""Dense linear algebra at configurable precision.

Matrices are square numpy object arrays of ``gmpy2.mpfr``.  The eigensolver
is the classical EISPACK pipeline (balance, Householder Hessenberg reduction,
Francis double-shift QR) written against those arrays, so the same code runs
at 64, 128 or 512 bits.  Row and column updates are vectorised over the object
arrays; the bookkeeping stays in plain Python.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import gmpy2
import numpy as np
from gmpy2 import mpc, mpfr

from .precision import DOUBLE_BITS, NumericFailure, PrecisionContext, as_object_matrix

log = logging.getLogger(__name__)

REMEDY = "Decrease n0 or alpha, or use higher precision (more bits)."


class ConvergenceError(NumericFailure):
    """Shifted QR iteration exceeded its iteration budget."""


class SingularMatrixError(NumericFailure):
    """A pivot fell below the singularity threshold."""

    def __init__(self, message, pivot_index):
        super().__init__(message)
        self.pivot_index = pivot_index


class SpectrumNotRealError(NumericFailure):
    """A computed eigenvalue has an imaginary part above the realness threshold."""

    def __init__(self, value, threshold):
        self.value = value
        self.threshold = threshold
        super().__init__(
            f"Spectrum not real: eigenvalue {complex(value)} has |Im| = {float(abs(value.imag)):.3e}"
            f" > {float(threshold):.3e}. {REMEDY}"
        )


@dataclass(frozen=True)
class SpectrumSample:
    """Sorted real eigenvalues of one matrix."""

    n: int
    values: np.ndarray
    order: str
    bits: int
    max_imag_discarded: mpfr

    def __post_init__(self):
        if self.order not in ("ascending", "descending"):
            raise ValueError(f"order must be 'ascending' or 'descending', got {self.order!r}")
        if len(self.values) != self.n:
            raise ValueError("values length does not match n")


def _abs_sum(a) -> mpfr:
    s = mpfr(0)
    for v in np.ravel(a):
        s += abs(v)
    return s


def norm_inf(A: np.ndarray) -> mpfr:
    """Maximum absolute row sum."""
    best = mpfr(0)
    for row in A:
        best = max(best, _abs_sum(row))
    return best


def balance(A, ctx: PrecisionContext | None = None) -> np.ndarray:
    """Diagonal similarity ``D^-1 A D`` with power-of-two ``D`` equilibrating row and column norms.

    Parlett-Reinsch scaling (the LAPACK ``gebal`` 'S' job).  Only exact
    power-of-two scalings are applied, so the eigenvalues are unchanged.
    """
    ctx = ctx or PrecisionContext(DOUBLE_BITS)
    with ctx.active():
        B = as_object_matrix(A, ctx)
        n = B.shape[0]
        if n == 1:
            return B
        converged = False
        while not converged:
            converged = True
            for i in range(n):
                c = _abs_sum(B[:, i]) - abs(B[i, i])
                r = _abs_sum(B[i, :]) - abs(B[i, i])
                if c == 0 or r == 0:
                    continue
                s = c + r
                f = mpfr(1)
                g = r / 2
                while c < g:
                    f *= 2
                    c *= 4
                g = r * 2
                while c >= g:
                    f /= 2
                    c /= 4
                if (c + r) / f < mpfr("0.95") * s:
                    converged = False
                    B[i, :] = B[i, :] / f
                    B[:, i] = B[:, i] * f
        return B


def hessenberg(A, ctx: PrecisionContext) -> np.ndarray:
    """Householder reduction to upper Hessenberg form.

    Reflectors only span the nonzero tail of each column, so banded input with
    lower bandwidth ``r`` costs O(n^2 r) instead of O(n^3).
    """
    with ctx.active():
        H = np.array(A, dtype=object, copy=True)
        n = H.shape[0]
        zero = mpfr(0)
        for k in range(n - 2):
            col = H[k + 1:, k]
            nz = [i for i, v in enumerate(col) if v != 0]
            if not nz or nz[-1] == 0:
                continue
            m = nz[-1] + 1
            x = col[:m].copy()
            scale = _abs_sum(x)
            x = x / scale
            alpha = gmpy2.sqrt(sum((v * v for v in x), zero))
            if x[0] > 0:
                alpha = -alpha
            v = x.copy()
            v[0] = v[0] - alpha
            vnorm2 = sum((t * t for t in v), zero)
            if vnorm2 == 0:
                continue
            tau = 2 / vnorm2
            rows = slice(k + 1, k + 1 + m)
            # left: H[rows, k:] -= tau v (v^T H[rows, k:])
            w = v @ H[rows, k:]
            H[rows, k:] = H[rows, k:] - np.outer(v * tau, w)
            # right: H[:, rows] -= tau (H[:, rows] v) v^T
            w = H[:, rows] @ v
            H[:, rows] = H[:, rows] - np.outer(w * tau, v)
            H[k + 1, k] = alpha * scale
            H[k + 2:k + 1 + m, k] = zero
        return H


def bandwidth(A: np.ndarray) -> int:
    """Largest ``|i - j|`` with a nonzero entry."""
    rows, cols = np.nonzero(A != 0)
    if len(rows) == 0:
        return 0
    return int(np.max(np.abs(rows - cols)))


def symmetric_band_to_tridiagonal(A, ctx: PrecisionContext):
    """Reduce a symmetric banded matrix to tridiagonal form by Givens bulge chasing.

    Outer diagonals are annihilated one at a time (Schwarz's scheme); every
    rotation touches O(bandwidth) entries, so the whole reduction costs
    O(n^2 b) instead of the O(n^3) of a dense Householder reduction.

    Returns
    -------
    diag, off : lists of mpfr
    """
    with ctx.active():
        n = A.shape[0]
        b = bandwidth(A)
        S = [list(row) for row in A]
        zero = mpfr(0)

        def annihilate(i, j):
            x, y = S[i - 1][j], S[i][j]
            r = gmpy2.hypot(x, y)
            if r == 0:
                return
            c, s = x / r, y / r
            lo, hi = max(0, i - b - 2), min(n, i + b + 2)
            top, bot = S[i - 1], S[i]
            for col in range(lo, hi):
                t, u = top[col], bot[col]
                top[col] = c * t + s * u
                bot[col] = c * u - s * t
            for row in range(lo, hi):
                R = S[row]
                t, u = R[i - 1], R[i]
                R[i - 1] = c * t + s * u
                R[i] = c * u - s * t
            S[i][j] = S[j][i] = zero

        for d in range(b, 1, -1):
            for k in range(n - d):
                i, j = k + d, k
                if S[i][j] == 0:
                    continue
                annihilate(i, j)
                while i + d < n and S[i + d][i - 1] != 0:
                    i, j = i + d, i - 1
                    annihilate(i, j)
        return [S[i][i] for i in range(n)], [S[i + 1][i] for i in range(n - 1)]


def _sign(a, b):
    return abs(a) if b >= 0 else -abs(a)


def hqr(H: np.ndarray, ctx: PrecisionContext, max_iter: int | None = None) -> list:
    """Eigenvalues of an upper Hessenberg matrix by Francis double-shift QR.

    Follows the EISPACK ``hqr`` organisation (eigenvalues only, exceptional
    shifts every 10 iterations on a block).  A subdiagonal entry is
    deflated when ``|h[i+1,i]| <= eps (|h[i,i]| + |h[i+1,i+1]|)``.
    Complex conjugate pairs come out of the trailing 2x2 blocks explicitly.
    """
    with ctx.active():
        a = np.array(H, dtype=object, copy=True)
        n = a.shape[0]
        eps = ctx.eps
        zero = mpfr(0)
        if max_iter is None:
            max_iter = 40 * n
        anorm = _abs_sum(a)
        wr = [zero] * n
        wi = [zero] * n
        nn = n - 1
        t = zero
        total = 0
        while nn >= 0:
            its = 0
            while True:
                # look for a single small subdiagonal element
                l = 0
                for ll in range(nn, 0, -1):
                    s = abs(a[ll - 1, ll - 1]) + abs(a[ll, ll])
                    if s == 0:
                        s = anorm
                    if abs(a[ll, ll - 1]) <= eps * s:
                        a[ll, ll - 1] = zero
                        l = ll
                        break
                x = a[nn, nn]
                if l == nn:
                    wr[nn] = x + t
                    wi[nn] = zero
                    nn -= 1
                    break
                y = a[nn - 1, nn - 1]
                w = a[nn, nn - 1] * a[nn - 1, nn]
                if l == nn - 1:
                    p = (y - x) / 2
                    q = p * p + w
                    z = gmpy2.sqrt(abs(q))
                    x = x + t
                    if q >= 0:
                        z = p + _sign(z, p)
                        wr[nn - 1] = wr[nn] = x + z
                        if z != 0:
                            wr[nn] = x - w / z
                        wi[nn - 1] = wi[nn] = zero
                    else:
                        wr[nn - 1] = wr[nn] = x + p
                        wi[nn - 1] = -z
                        wi[nn] = z
                    nn -= 2
                    break
                if total >= max_iter:
                    raise ConvergenceError(
                        f"QR iteration did not converge for a matrix of order {n} at {ctx.bits} bits "
                        f"after {total} iterations; raise the precision or the iteration cap"
                    )
                if its > 0 and its % 10 == 0:
                    t = t + x
                    for i in range(nn + 1):
                        a[i, i] -= x
                    s = abs(a[nn, nn - 1]) + abs(a[nn - 1, nn - 2])
                    x = y = s * mpfr("0.75")
                    w = s * s * mpfr("-0.4375")
                its += 1
                total += 1
                # look for two consecutive small subdiagonal elements
                m = nn - 2
                while True:
                    z = a[m, m]
                    r = x - z
                    s = y - z
                    p = (r * s - w) / a[m + 1, m] + a[m, m + 1]
                    q = a[m + 1, m + 1] - z - r - s
                    r = a[m + 2, m + 1]
                    s = abs(p) + abs(q) + abs(r)
                    p, q, r = p / s, q / s, r / s
                    if m == l:
                        break
                    u = abs(a[m, m - 1]) * (abs(q) + abs(r))
                    v = abs(p) * (abs(a[m - 1, m - 1]) + abs(z) + abs(a[m + 1, m + 1]))
                    if u <= eps * v:
                        break
                    m -= 1
                for i in range(m + 2, nn + 1):
                    a[i, i - 2] = zero
                    if i != m + 2:
                        a[i, i - 3] = zero
                # double-shift bulge chase on rows/columns l..nn
                for k in range(m, nn):
                    last = k == nn - 1
                    if k != m:
                        p = a[k, k - 1]
                        q = a[k + 1, k - 1]
                        r = zero if last else a[k + 2, k - 1]
                        x = abs(p) + abs(q) + abs(r)
                        if x != 0:
                            p, q, r = p / x, q / x, r / x
                    s = _sign(gmpy2.sqrt(p * p + q * q + r * r), p)
                    if s == 0:
                        continue
                    if k == m:
                        if l != m:
                            a[k, k - 1] = -a[k, k - 1]
                    else:
                        a[k, k - 1] = -s * x
                    p = p + s
                    x = p / s
                    y = q / s
                    z = r / s
                    q = q / p
                    r = r / p
                    # row transformation
                    if last:
                        rows = a[k:k + 2, k:nn + 1]
                        pv = rows[0] + q * rows[1]
                        a[k + 1, k:nn + 1] = rows[1] - pv * y
                        a[k, k:nn + 1] = rows[0] - pv * x
                    else:
                        rows = a[k:k + 3, k:nn + 1]
                        pv = rows[0] + q * rows[1] + r * rows[2]
                        a[k + 2, k:nn + 1] = rows[2] - pv * z
                        a[k + 1, k:nn + 1] = rows[1] - pv * y
                        a[k, k:nn + 1] = rows[0] - pv * x
                    # column transformation
                    mmin = min(nn, k + 3)
                    if last:
                        cols = a[l:mmin + 1, k:k + 2]
                        pv = x * cols[:, 0] + y * cols[:, 1]
                        a[l:mmin + 1, k + 1] = cols[:, 1] - pv * q
                        a[l:mmin + 1, k] = cols[:, 0] - pv
                    else:
                        cols = a[l:mmin + 1, k:k + 3]
                        pv = x * cols[:, 0] + y * cols[:, 1] + z * cols[:, 2]
                        a[l:mmin + 1, k + 2] = cols[:, 2] - pv * r
                        a[l:mmin + 1, k + 1] = cols[:, 1] - pv * q
                        a[l:mmin + 1, k] = cols[:, 0] - pv
        return [mpc(re, im) for re, im in zip(wr, wi)]


def tridiagonal_bands(A: np.ndarray):
    """Return (sub, diag, super) if ``A`` is exactly tridiagonal, else None."""
    n = A.shape[0]
    if bandwidth(A) > 1:
        return None
    return (
        np.array([A[i + 1, i] for i in range(n - 1)], dtype=object),
        np.array([A[i, i] for i in range(n)], dtype=object),
        np.array([A[i, i + 1] for i in range(n - 1)], dtype=object),
    )


def symmetric_tridiagonal_eigenvalues(d, e, ctx: PrecisionContext, max_iter: int | None = None) -> list:
    """Eigenvalues of the symmetric tridiagonal matrix with diagonal ``d`` and off-diagonal ``e``.

    Implicit QL with Wilkinson shifts (EISPACK ``tql1``).
    """
    with ctx.active():
        n = len(d)
        d = [mpfr(v) for v in d]
        e = [mpfr(v) for v in e] + [mpfr(0)]
        eps = ctx.eps
        if max_iter is None:
            max_iter = 40 * n
        total = 0
        for l in range(n):
            while True:
                m = l
                while m < n - 1:
                    dd = abs(d[m]) + abs(d[m + 1])
                    if abs(e[m]) <= eps * dd:
                        break
                    m += 1
                if m == l:
                    break
                total += 1
                if total > max_iter:
                    raise ConvergenceError(
                        f"tridiagonal QL did not converge for order {n} at {ctx.bits} bits"
                    )
                g = (d[l + 1] - d[l]) / (2 * e[l])
                r = gmpy2.hypot(g, mpfr(1))
                g = d[m] - d[l] + e[l] / (g + _sign(r, g))
                s = c = mpfr(1)
                p = mpfr(0)
                i = m - 1
                underflow = False
                while i >= l:
                    f = s * e[i]
                    b = c * e[i]
                    r = gmpy2.hypot(f, g)
                    e[i + 1] = r
                    if r == 0:
                        d[i + 1] -= p
                        e[m] = mpfr(0)
                        underflow = True
                        break
                    s = f / r
                    c = g / r
                    g = d[i + 1] - p
                    r = (d[i] - g) * s + 2 * c * b
                    p = s * r
                    d[i + 1] = g + p
                    g = c * r - b
                    i -= 1
                if underflow:
                    continue
                d[l] -= p
                e[l] = g
                e[m] = mpfr(0)
        return [mpc(v, 0) for v in d]


def _lapack_eigenvalues(A: np.ndarray) -> list:
    import scipy.linalg

    Af = np.array([[float(v) for v in row] for row in A], dtype=float)
    vals = scipy.linalg.eigvals(Af)
    return [mpc(complex(v)) for v in vals]


def eigenvalues(A, ctx: PrecisionContext, method: str = "auto") -> list:
    """All eigenvalues of a real square matrix at working precision.

    Parameters
    ----------
    A : array_like
        Square matrix (any scalars convertible at ``ctx`` precision).
    ctx : PrecisionContext
    method : {"auto", "qr", "lapack", "tridiagonal", "symmetric"}
        ``"qr"`` always runs balance + Hessenberg + Francis QR at ``ctx.bits``.
        ``"lapack"`` hands a float64 copy to LAPACK ``geev``: the standard
        double precision solver.  ``"tridiagonal"`` symmetrizes a tridiagonal
        matrix with nonnegative off-diagonal products by an exact diagonal
        similarity and runs implicit QL.  ``"symmetric"`` reduces a symmetric
        matrix to tridiagonal form and runs implicit QL.  ``"auto"`` uses
        LAPACK at 53 bits; above 53 bits it picks the first structured path
        that applies and falls back to QR.

    Returns
    -------
    list of gmpy2.mpc
    """
    with ctx.active():
        M = as_object_matrix(A, ctx)
        n = M.shape[0]
        if method == "auto":
            if ctx.bits == DOUBLE_BITS:
                method = "lapack"
            else:
                if _sign_symmetric_tridiagonal(M):
                    method = "tridiagonal"
                elif _is_symmetric(M):
                    method = "symmetric"
                else:
                    method = "qr"
        if method == "lapack":
            return _lapack_eigenvalues(M)
        if n == 1:
            return [mpc(M[0, 0], 0)]
        if method == "tridiagonal":
            bands = tridiagonal_bands(M)
            if bands is None:
                raise ValueError("tridiagonal method requested for a non-tridiagonal matrix")
            sub, diag, sup = bands
            prods = [b * c for b, c in zip(sub, sup)]
            if any(p < 0 for p in prods):
                raise ValueError("tridiagonal method needs nonnegative off-diagonal products")
            off = [gmpy2.sqrt(p) for p in prods]
            return symmetric_tridiagonal_eigenvalues(diag, off, ctx)
        if method == "symmetric":
            if not _is_symmetric(M):
                raise ValueError("symmetric method requested for a non-symmetric matrix")
            diag, off = symmetric_band_to_tridiagonal(M, ctx)
            return symmetric_tridiagonal_eigenvalues(diag, off, ctx)
        if method != "qr":
            raise ValueError(f"unknown eigenvalue method {method!r}")
        B = balance(M, ctx)
        H = hessenberg(B, ctx)
        return hqr(H, ctx)


def _is_symmetric(M: np.ndarray) -> bool:
    return bool(np.all(M == M.T))


def _sign_symmetric_tridiagonal(M: np.ndarray) -> bool:
    bands = tridiagonal_bands(M)
    if bands is None:
        return False
    sub, _, sup = bands
    return all(b * c >= 0 for b, c in zip(sub, sup))


def project_real_sorted(eigs, ctx: PrecisionContext, order: str = "ascending") -> SpectrumSample:
    """Drop negligible imaginary parts and sort.

    An eigenvalue counts as real when ``|Im| <= realness_tol * max(1, max|lambda|)``.

    Raises
    ------
    SpectrumNotRealError
        For the first eigenvalue above that threshold.
    """
    if len(eigs) == 0:
        raise ValueError("empty eigenvalue list")
    if order not in ("ascending", "descending"):
        raise ValueError(f"order must be 'ascending' or 'descending', got {order!r}")
    with ctx.active():
        eigs = [v if isinstance(v, mpc) else mpc(v) for v in eigs]
        radius = max(max(abs(v) for v in eigs), mpfr(1))
        threshold = ctx.realness_tol * radius
        worst = max(eigs, key=lambda v: abs(v.imag))
        if abs(worst.imag) > threshold:
            raise SpectrumNotRealError(worst, threshold)
        reals = sorted((v.real for v in eigs), reverse=(order == "descending"))
        values = np.empty(len(reals), dtype=object)
        values[:] = reals
        return SpectrumSample(
            n=len(reals),
            values=values,
            order=order,
            bits=ctx.bits,
            max_imag_discarded=mpfr(abs(worst.imag)),
        )


def solve_dense(A, B, ctx: PrecisionContext) -> np.ndarray:
    """Solve ``A X = B`` by Gaussian elimination with partial (row) pivoting.

    ``B`` may be a vector or a matrix of right-hand sides; the result has the
    same shape.

    Raises
    ------
    SingularMatrixError
        If a pivot is below ``eps * ||A||_inf``.
    """
    with ctx.active():
        M = as_object_matrix(A, ctx)
        n = M.shape[0]
        rhs = np.array(B, dtype=object)
        vector = rhs.ndim == 1
        if vector:
            rhs = rhs.reshape(n, 1)
        if rhs.shape[0] != n:
            raise ValueError(f"right-hand side has {rhs.shape[0]} rows, expected {n}")
        R = np.empty(rhs.shape, dtype=object)
        for idx, v in np.ndenumerate(rhs):
            R[idx] = ctx.mpf(v)
        tiny = ctx.eps * norm_inf(M)
        for k in range(n):
            piv = max(range(k, n), key=lambda i: abs(M[i, k]))
            if abs(M[piv, k]) <= tiny:
                raise SingularMatrixError(f"matrix is singular to working precision at pivot {k}", k)
            if piv != k:
                M[[k, piv]] = M[[piv, k]]
                R[[k, piv]] = R[[piv, k]]
            if k + 1 < n:
                factors = M[k + 1:, k] / M[k, k]
                M[k + 1:, k:] = M[k + 1:, k:] - np.outer(factors, M[k, k:])
                R[k + 1:] = R[k + 1:] - np.outer(factors, R[k])
        X = np.empty(R.shape, dtype=object)
        for i in range(n - 1, -1, -1):
            acc = R[i].copy()
            if i + 1 < n:
                acc = acc - M[i, i + 1:] @ X[i + 1:]
            X[i] = acc / M[i, i]
        return X[:, 0] if vector else X
