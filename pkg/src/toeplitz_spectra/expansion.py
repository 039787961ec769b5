"""Expansion functions c_k on the coarse grid from nested small eigenproblems.

For sizes ``n_k = 2**k (n0 + 1) - 1`` the grids nest: ``theta_{2**k j, n_k}``
equals ``theta_{j, n0}``.  Each eigenvalue sitting on a shared grid point obeys

    lambda = c_0(theta) + c_1(theta) h_k + ... + c_alpha(theta) h_k**alpha + O(h_k**(alpha+1))

with ``h_k = 1/(n_k + 1)``; stacking the ``alpha + 1`` levels gives a small
Vandermonde system per grid point, solved for all points at once.
"""

from __future__ import annotations

import csv
import json
import logging
import time
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from gmpy2 import mpfr

from .linalg import eigenvalues, project_real_sorted, solve_dense
from .precision import PrecisionContext
from .toeplitz import Symbol, build_toeplitz, theta_grid

log = logging.getLogger(__name__)

MAX_ORDER = 2 ** 63 - 1


def nested_sizes(n0: int, alpha: int) -> list[int]:
    """Matrix orders ``2**k (n0 + 1) - 1`` for ``k = 0..alpha``."""
    if n0 < 1:
        raise ValueError(f"n0 must be positive, got {n0}")
    if alpha < 0:
        raise ValueError(f"alpha must be non-negative, got {alpha}")
    sizes = [2 ** k * (n0 + 1) - 1 for k in range(alpha + 1)]
    if sizes[-1] > MAX_ORDER:
        raise OverflowError(f"largest matrix order {sizes[-1]} exceeds {MAX_ORDER}")
    return sizes


def sample_eigenvalues(symbol: Symbol, n0: int, alpha: int, ctx: PrecisionContext,
                       order: str = "ascending", method: str = "auto") -> np.ndarray:
    """``(alpha+1) x n0`` matrix of eigenvalues lying on the coarse grid.

    Row ``k`` holds the sorted spectrum of ``T_{n_k}(f)`` at indices
    ``2**k j`` (1-based), ``j = 1..n0``.

    Raises
    ------
    SpectrumNotRealError
        If any level fails the realness check.
    """
    sizes = nested_sizes(n0, alpha)
    E = np.empty((alpha + 1, n0), dtype=object)
    for k, nk in enumerate(sizes):
        start = time.perf_counter()
        T = build_toeplitz(symbol, nk, ctx)
        spec = project_real_sorted(eigenvalues(T, ctx, method=method), ctx, order)
        step = 2 ** k
        E[k, :] = spec.values[step - 1::step][:n0]
        log.info("level %d of %d: order %d at %d bits, %.1fs",
                 k + 1, alpha + 1, nk, ctx.bits, time.perf_counter() - start)
    return E


def step_sizes(sizes, ctx: PrecisionContext) -> list:
    with ctx.active():
        return [mpfr(1) / (nk + 1) for nk in sizes]


def vandermonde_solve(hs, E, ctx: PrecisionContext) -> np.ndarray:
    """Solve ``V C = E`` with ``V[i, j] = hs[i]**j``.

    ``hs`` must be distinct and positive; ``E`` has one row per entry of ``hs``.
    """
    hs = [ctx.mpf(h) for h in hs]
    if any(h <= 0 for h in hs):
        raise ValueError("step sizes must be positive")
    if len(set(hs)) != len(hs):
        raise ValueError("duplicate step sizes make the Vandermonde matrix singular")
    m = len(hs)
    E = np.asarray(E, dtype=object)
    if E.shape[0] != m:
        raise ValueError(f"E has {E.shape[0]} rows, expected {m}")
    if m == 1:
        return np.array(E, dtype=object, copy=True)
    with ctx.active():
        V = np.empty((m, m), dtype=object)
        for i, h in enumerate(hs):
            V[i, :] = [h ** j for j in range(m)]
    return solve_dense(V, E, ctx)


@dataclass(frozen=True)
class ExpansionTable:
    """Approximations of ``c_k(theta_{j,n0})``; row ``k`` of ``C`` is ``c_k``."""

    n0: int
    alpha: int
    C: np.ndarray
    order: str
    bits: int
    sizes: list = field(default_factory=list)

    def __post_init__(self):
        if self.C.shape != (self.alpha + 1, self.n0):
            raise ValueError(f"C has shape {self.C.shape}, expected {(self.alpha + 1, self.n0)}")
        if list(self.sizes) != nested_sizes(self.n0, self.alpha):
            raise ValueError("sizes do not match n0 and alpha")

    @property
    def ctx(self) -> PrecisionContext:
        return PrecisionContext(self.bits)

    def theta(self) -> np.ndarray:
        return theta_grid(self.n0, self.ctx)

    def row(self, k: int) -> np.ndarray:
        return self.C[k]

    def is_monotone(self) -> bool:
        c0 = list(self.C[0])
        if self.order == "ascending":
            return all(a <= b for a, b in zip(c0, c0[1:]))
        return all(a >= b for a, b in zip(c0, c0[1:]))

    def metadata(self) -> dict:
        return {"n0": self.n0, "alpha": self.alpha, "bits": self.bits,
                "order": self.order, "sizes": list(self.sizes)}


def extract(symbol: Symbol, n0: int, alpha: int, ctx: PrecisionContext,
            order: str = "ascending", method: str = "auto") -> ExpansionTable:
    """Sample the nested spectra and solve for ``c_0 .. c_alpha`` on ``theta_{j,n0}``.

    A non-monotone ``c_0`` row only triggers a ``RuntimeWarning``.
    """
    sizes = nested_sizes(n0, alpha)
    E = sample_eigenvalues(symbol, n0, alpha, ctx, order, method)
    C = vandermonde_solve(step_sizes(sizes, ctx), E, ctx)
    table = ExpansionTable(n0=n0, alpha=alpha, C=C, order=order, bits=ctx.bits, sizes=sizes)
    if not table.is_monotone():
        warnings.warn(f"c_0 is not monotone in the requested {order} order", RuntimeWarning)
    return table


def write_table(table: ExpansionTable, path) -> tuple[Path, Path]:
    """Write ``path`` (CSV) and ``path`` with suffix ``.json`` (metadata sidecar)."""
    path = Path(path)
    ctx = table.ctx
    theta = table.theta()
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["theta"] + [f"c{k}" for k in range(table.alpha + 1)])
        for j in range(table.n0):
            w.writerow([ctx.to_str(theta[j])] + [ctx.to_str(table.C[k, j]) for k in range(table.alpha + 1)])
    sidecar = path.with_suffix(".json")
    sidecar.write_text(json.dumps(table.metadata(), indent=2) + "\n")
    return path, sidecar


def read_table(path) -> ExpansionTable:
    """Inverse of :func:`write_table`; raises ``ValueError`` on malformed input."""
    path = Path(path)
    sidecar = path.with_suffix(".json")
    try:
        meta = json.loads(sidecar.read_text())
        n0, alpha, bits, order = int(meta["n0"]), int(meta["alpha"]), int(meta["bits"]), meta["order"]
    except (OSError, KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"cannot read table metadata {sidecar}: {exc}") from None
    ctx = PrecisionContext(bits)
    with path.open(newline="") as fh:
        rows = list(csv.reader(fh))
    header = [c.strip() for c in rows[0]] if rows else []
    if header != ["theta"] + [f"c{k}" for k in range(alpha + 1)]:
        raise ValueError(f"unexpected table header {header}")
    body = rows[1:]
    if len(body) != n0 or any(len(r) != alpha + 2 for r in body):
        raise ValueError(f"table body must have {n0} rows of {alpha + 2} fields")
    C = np.empty((alpha + 1, n0), dtype=object)
    for j, r in enumerate(body):
        for k in range(alpha + 1):
            C[k, j] = ctx.mpf(r[k + 1])
    return ExpansionTable(n0=n0, alpha=alpha, C=C, order=order, bits=bits,
                          sizes=nested_sizes(n0, alpha))
