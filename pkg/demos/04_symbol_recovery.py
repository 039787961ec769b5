# coding: utf-8

# # Recovering g from c_0

# c_0 sampled on the coarse grid determines a cosine series g = ghat_0 + 2 sum ghat_k cos(k theta)
# through an n0 x n0 collocation solve. When the tail vanishes early the symbol is classified as a
# real cosine trigonometric polynomial (RCTP).

# In[1]:

from toeplitz_spectra import PrecisionContext, Symbol, extract, recover
from toeplitz_spectra.presets import BILAPLACIAN, SHIFTED_BILAPLACIAN, TRIDIAGONAL

ctx = PrecisionContext(53)
rs = recover(extract(Symbol.from_mapping(TRIDIAGONAL, ctx), 31, 2, ctx).C[0], ctx)
print("degree", rs.rctp_degree, [float(v) for v in rs.ghat[:3]])

rs = recover(extract(Symbol.from_mapping(BILAPLACIAN, ctx), 40, 3, ctx).C[0], ctx)
print("degree", rs.rctp_degree, [float(v) for v in rs.ghat[:4]])


# The shifted bi-Laplacian is not an RCTP: its g is a rational function of trigonometric terms
# and the coefficients decay slowly. Compare the first few with a direct quadrature of g.

# In[2]:

from toeplitz_spectra import fourier_coefficients_by_quadrature
from toeplitz_spectra.toeplitz import g_shifted_bilaplacian

ctx256 = PrecisionContext(256)
table = extract(Symbol.from_mapping(SHIFTED_BILAPLACIAN, ctx256), 24, 3, ctx256)
rs = recover(table.C[0], ctx256)
truth = fourier_coefficients_by_quadrature(g_shifted_bilaplacian, 5, ctx)
print("classified:", rs.rctp_degree)
for k in range(5):
    print(f"{k}  recovered {float(rs.ghat[k]): .10f}   quadrature {float(truth[k]): .10f}")
