# coding: utf-8

# # Spectra of large matrices without forming them

# Once a table is known, lambda_j(T_n) for any n follows from interpolating each c_k to
# theta_{j,n} and summing the expansion. Nothing of size n is ever built.

# In[1]:

import time

from toeplitz_spectra import (PrecisionContext, Symbol, build_toeplitz, compare, eigenvalues, extract,
                              predict, project_real_sorted)
from toeplitz_spectra.presets import BILAPLACIAN

ctx53 = PrecisionContext(53)
sym = Symbol.from_mapping(BILAPLACIAN, ctx53)
tables = {n0: extract(sym, n0, 4, ctx53) for n0 in (25, 50)}


# A reference spectrum for n = 600, computed directly at 128 bits.

# In[2]:

ctx = PrecisionContext(128)
start = time.perf_counter()
ref = project_real_sorted(eigenvalues(build_toeplitz(Symbol.from_mapping(BILAPLACIAN, ctx), 600, ctx), ctx), ctx)
print(f"reference in {time.perf_counter() - start:.1f}s")


# The error shrinks as the coarse grid gets finer. By default c_0 is evaluated from the recovered
# cosine series when it classifies as an RCTP; plain interpolation is available as well.

# In[3]:

for n0, table in tables.items():
    for mode in ("auto", "interpolate"):
        pred = predict(table, 600, row0=mode)
        print(n0, pred.source["row0"], f"{float(compare(pred, ref).max_error):.3e}")
