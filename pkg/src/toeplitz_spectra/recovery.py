"""Cosine-series recovery of g from its samples on the uniform grid."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

import gmpy2
import numpy as np
from gmpy2 import mpfr

from .linalg import solve_dense
from .precision import DOUBLE_BITS, PrecisionContext
from .toeplitz import theta_grid


def default_threshold(bits: int) -> mpfr:
    """``1e-6`` for double precision data, ``10**(-bits/8)`` above."""
    ctx = PrecisionContext(bits)
    with ctx.active():
        if bits == DOUBLE_BITS:
            return mpfr("1e-6")
        return mpfr(10) ** (-mpfr(bits) / 8)


@dataclass(frozen=True)
class RecoveredSymbol:
    """Coefficients of ``g(t) = ghat[0] + 2 sum_k ghat[k] cos(k t)``."""

    ghat: np.ndarray
    bits: int
    threshold: mpfr
    rctp_degree: int | None = None
    source: dict = field(default_factory=dict)

    @property
    def n0(self) -> int:
        return len(self.ghat)

    def to_json(self) -> dict:
        ctx = PrecisionContext(self.bits)
        doc = {"n0": self.n0, "bits": self.bits, "threshold": ctx.to_str(self.threshold)}
        if self.rctp_degree is not None:
            doc["rctp_degree"] = self.rctp_degree
        doc["ghat"] = [ctx.to_str(v) for v in self.ghat]
        if self.source:
            doc["source"] = self.source
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "RecoveredSymbol":
        ctx = PrecisionContext(int(doc["bits"]))
        ghat = ctx.array(doc["ghat"])
        if len(ghat) != int(doc["n0"]):
            raise ValueError("ghat length does not match n0")
        return cls(ghat=ghat, bits=ctx.bits, threshold=ctx.mpf(doc["threshold"]),
                   rctp_degree=doc.get("rctp_degree"), source=doc.get("source", {}))


def collocation_matrix(n0: int, ctx: PrecisionContext) -> np.ndarray:
    theta = theta_grid(n0, ctx)
    with ctx.active():
        G = np.empty((n0, n0), dtype=object)
        for j, t in enumerate(theta):
            G[j, 0] = mpfr(1)
            for k in range(1, n0):
                G[j, k] = 2 * gmpy2.cos(k * t)
    return G


def recover(c0, ctx: PrecisionContext, threshold=None, source: dict | None = None) -> RecoveredSymbol:
    """Solve the ``n0 x n0`` cosine collocation system for ``ghat_0 .. ghat_{n0-1}``.

    The result is classified with :func:`classify_rctp` at ``threshold``
    (default :func:`default_threshold`).
    """
    c0 = ctx.array(c0)
    n0 = len(c0)
    if n0 < 1:
        raise ValueError("need at least one sample")
    ghat = solve_dense(collocation_matrix(n0, ctx), c0, ctx)
    thr = default_threshold(ctx.bits) if threshold is None else ctx.mpf(threshold)
    rs = RecoveredSymbol(ghat=ghat, bits=ctx.bits, threshold=thr, source=dict(source or {}))
    return replace(rs, rctp_degree=classify_rctp(rs, thr))


def classify_rctp(rs: RecoveredSymbol, threshold) -> int | None:
    """Smallest ``m`` with ``|ghat[k]| <= threshold`` for all ``k > m``.

    Returns None unless ``m <= n0 / 4``; a tail that only vanishes close to
    the end of the coefficient list is not trusted.
    """
    thr = mpfr(threshold)
    if not thr > 0:
        raise ValueError("threshold must be positive")
    m = 0
    for k in range(rs.n0 - 1, -1, -1):
        if abs(rs.ghat[k]) > thr:
            m = k
            break
    return m if m <= rs.n0 / 4 else None


def eval_recovered(rs: RecoveredSymbol, theta, K: int | None = None) -> mpfr:
    """Partial sum ``ghat[0] + 2 sum_{k<K} ghat[k] cos(k theta)``.

    ``K`` defaults to ``rctp_degree + 1`` when classified, else ``n0``.
    """
    if K is None:
        K = rs.rctp_degree + 1 if rs.rctp_degree is not None else rs.n0
    if not 1 <= K <= rs.n0:
        raise ValueError(f"K must be in 1..{rs.n0}, got {K}")
    ctx = PrecisionContext(rs.bits)
    with ctx.active():
        theta = ctx.mpf(theta)
        c1 = gmpy2.cos(theta)
        total = mpfr(rs.ghat[0])
        prev, cur = mpfr(1), c1
        for k in range(1, K):
            total += 2 * rs.ghat[k] * cur
            prev, cur = cur, 2 * c1 * cur - prev
        return total


def write_recovered(rs: RecoveredSymbol, path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(rs.to_json(), indent=2) + "\n")
    return path


def read_recovered(path) -> RecoveredSymbol:
    return RecoveredSymbol.from_json(json.loads(Path(path).read_text()))


def write_magnitudes(rs: RecoveredSymbol, path) -> Path:
    """CSV ``k,abs_ghat`` of coefficient magnitudes."""
    path = Path(path)
    ctx = PrecisionContext(rs.bits)
    lines = ["k,abs_ghat"] + [f"{k},{ctx.to_str(abs(v))}" for k, v in enumerate(rs.ghat)]
    path.write_text("\n".join(lines) + "\n")
    return path
