# coding: utf-8

# # Why high precision: the pseudospectrum trap

# T_n(f) for the tridiagonal symbol is similar to a symmetric matrix, so every eigenvalue is real
# and known in closed form: 2 - 2 sqrt(2) cos(j pi / (n + 1)). The matrix is very far from normal,
# though, and a double precision solver returns points of the pseudospectrum instead.

# In[1]:

from toeplitz_spectra import (PrecisionContext, SpectrumNotRealError, Symbol, build_toeplitz,
                              eigenvalues, project_real_sorted, tridiag_exact_eigenvalues)
from toeplitz_spectra.presets import TRIDIAGONAL

n = 300
low = PrecisionContext(53)
T = build_toeplitz(Symbol.from_mapping(TRIDIAGONAL, low), n, low)
eigs = eigenvalues(T, low)
print("largest imaginary part in double precision:", max(abs(float(z.imag)) for z in eigs))

try:
    project_real_sorted(eigs, low)
except SpectrumNotRealError as exc:
    print("realness check:", exc)


# The same matrix at 128 bits. For tridiagonal input the solver first applies the exact diagonal
# similarity that symmetrizes it, then runs an implicit QL sweep, so n = 300 takes a second or two.

# In[2]:

ctx = PrecisionContext(128)
f = Symbol.from_mapping(TRIDIAGONAL, ctx)
spec = project_real_sorted(eigenvalues(build_toeplitz(f, n, ctx), ctx), ctx)
exact = tridiag_exact_eigenvalues(f, n, ctx)
with ctx.active():
    print("max error at 128 bits:", float(max(abs(a - b) for a, b in zip(spec.values, exact.values))))


# The general path (balancing, Householder reduction, Francis double-shift QR) is used for
# anything else and can be requested explicitly. It is cubic in n, so keep n small here.

# In[3]:

small = build_toeplitz(f, 60, ctx)
qr = project_real_sorted(eigenvalues(small, ctx, method="qr"), ctx)
ref = tridiag_exact_eigenvalues(f, 60, ctx)
with ctx.active():
    print("general QR, n = 60:", float(max(abs(a - b) for a, b in zip(qr.values, ref.values))))
