# coding: utf-8

# # Banded symbols and Toeplitz matrices

# A symbol is a finite list of Fourier coefficients. The matrix T_n(f) puts f_k on the k-th
# subdiagonal (negative k go above the diagonal). Coefficients are given as decimal strings so a
# 256-bit run sees the exact input rather than a rounded double.

# In[1]:

from toeplitz_spectra import PrecisionContext, Symbol, build_toeplitz, eval_symbol
from toeplitz_spectra.presets import SEVEN_BAND, TRIDIAGONAL

ctx = PrecisionContext(128)
f = Symbol.from_mapping(TRIDIAGONAL, ctx)
T = build_toeplitz(f, 5, ctx)
for row in T:
    print(" ".join(f"{float(v):5.1f}" for v in row))


# The symbol itself is complex valued, even though (as we will see) the spectrum is real.

# In[2]:

print(eval_symbol(f, 0, ctx))
print(eval_symbol(f, ctx.pi() / 2, ctx))


# Wider bands work the same way. This is the seven-band symbol with nothing on the diagonal.

# In[3]:

g = Symbol.from_mapping(SEVEN_BAND, ctx)
print("lower bandwidth", g.lower_bandwidth, "upper bandwidth", g.upper_bandwidth)
for row in build_toeplitz(g, 6, ctx):
    print(" ".join(f"{float(v):5.1f}" for v in row))


# Symbols round-trip through a small JSON document, which is also what the command line reads.

# In[4]:

import json

print(json.dumps(f.to_json()))
