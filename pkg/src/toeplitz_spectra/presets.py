"""Named symbols and parameter sets for the eight worked examples.

Examples 1-4 introduce the symbols; 5-8 run the extraction on them.
Coefficients are decimal strings so that high-precision runs see exact input.
"""

from __future__ import annotations

from dataclasses import dataclass

from .precision import PrecisionContext
from .toeplitz import BUILTIN_G, Symbol

TRIDIAGONAL = {1: "-1", 0: "2", -1: "-2"}
BILAPLACIAN = {2: "1", 1: "-4", 0: "6", -1: "-4", -2: "1"}
SHIFTED_BILAPLACIAN = {1: "1", 0: "-4", -1: "6", -2: "-4", -3: "1"}
SEVEN_BAND = {3: "1", 2: "-1", 1: "7", -1: "9", -2: "-2", -3: "2", -4: "-1"}


@dataclass(frozen=True)
class Preset:
    name: str
    coeffs: dict
    n0: int = 31
    alpha: int = 4
    bits: int = 128
    n: int = 1000
    g: str | None = None
    description: str = ""

    def symbol(self, ctx: PrecisionContext) -> Symbol:
        return Symbol.from_mapping(self.coeffs, ctx)

    def g_eval(self):
        return BUILTIN_G.get(self.g) if self.g else None


PRESETS = {
    p.name: p
    for p in [
        Preset("example1", TRIDIAGONAL, n0=31, alpha=2, bits=128, n=1000, g="tridiagonal",
               description="non-symmetric tridiagonal, closed-form spectrum"),
        Preset("example2", BILAPLACIAN, n0=100, alpha=4, bits=53, n=5, g="bilaplacian",
               description="symmetric bi-Laplacian, g = f"),
        Preset("example3", SHIFTED_BILAPLACIAN, n0=100, alpha=4, bits=128, n=5, g="shifted_bilaplacian",
               description="shifted bi-Laplacian, g known in closed form"),
        Preset("example4", SEVEN_BAND, n0=100, alpha=4, bits=256, n=5,
               description="seven-band symbol, g unknown"),
        Preset("example5", TRIDIAGONAL, n0=31, alpha=4, bits=128, n=1000, g="tridiagonal",
               description="expansion of the tridiagonal symbol"),
        Preset("example6", BILAPLACIAN, n0=100, alpha=4, bits=53, n=1000, g="bilaplacian",
               description="expansion of the bi-Laplacian"),
        Preset("example7", SHIFTED_BILAPLACIAN, n0=100, alpha=4, bits=256, n=1000, g="shifted_bilaplacian",
               description="expansion of the shifted bi-Laplacian"),
        Preset("example8", SEVEN_BAND, n0=100, alpha=4, bits=512, n=1000,
               description="expansion of the seven-band symbol"),
    ]
}


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None
