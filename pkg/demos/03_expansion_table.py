# coding: utf-8

# # Extracting the expansion functions c_k

# The eigenvalues of T_n(f) are assumed to behave like
#
#     lambda_j = c_0(theta) + c_1(theta) h + ... + c_alpha(theta) h^alpha,   h = 1/(n+1)
#
# at theta = j pi/(n+1). The sizes n_k = 2^k (n0 + 1) - 1 share the coarse grid, so each grid
# point gets alpha + 1 equations and a small Vandermonde solve gives the c_k there.

# In[1]:

import logging

from toeplitz_spectra import PrecisionContext, Symbol, extract, nested_sizes
from toeplitz_spectra.presets import BILAPLACIAN, TRIDIAGONAL

logging.basicConfig(level=logging.INFO, format="%(message)s")
print(nested_sizes(31, 4))


# For the tridiagonal symbol every eigenvalue sits exactly on g, so all corrections vanish.

# In[2]:

ctx = PrecisionContext(128)
table = extract(Symbol.from_mapping(TRIDIAGONAL, ctx), 31, 4, ctx)
for k in range(table.alpha + 1):
    print(f"max |c~_{k}| = {float(max(abs(v) for v in table.C[k])):.3e}")


# The bi-Laplacian is different: c_1 and beyond are genuinely nonzero. Double precision is enough
# here since the matrix is symmetric.

# In[3]:

ctx53 = PrecisionContext(53)
bil = extract(Symbol.from_mapping(BILAPLACIAN, ctx53), 50, 4, ctx53)
theta = bil.theta()
for j in (0, 12, 25, 37, 49):
    print(f"theta = {float(theta[j]):.4f}  " + "  ".join(f"{float(bil.C[k, j]): .5e}" for k in range(5)))


# Tables are stored as CSV with a JSON sidecar holding n0, alpha, bits and the sizes.

# In[4]:

import tempfile
from pathlib import Path

from toeplitz_spectra import read_table, write_table

with tempfile.TemporaryDirectory() as tmp:
    csv_path, meta = write_table(bil, Path(tmp) / "table.csv")
    print(meta.read_text())
    print((read_table(csv_path).C == bil.C).all())
