# coding: utf-8

# # The perfect grid

# For a monotone g there are points xi_j with g(xi_j) = lambda_j exactly. For the bi-Laplacian,
# g(t) = 16 sin(t/2)^4 inverts in closed form, which makes a convenient check on the bisection.

# In[1]:

from toeplitz_spectra import PrecisionContext, Symbol, build_toeplitz, eigenvalues, perfect_grid, project_real_sorted
from toeplitz_spectra.presets import BILAPLACIAN
from toeplitz_spectra.toeplitz import bilaplacian_perfect_grid_closed_form, g_bilaplacian, theta_grid

ctx = PrecisionContext(128)
n = 30
spec = project_real_sorted(eigenvalues(build_toeplitz(Symbol.from_mapping(BILAPLACIAN, ctx), n, ctx), ctx), ctx)
grid = perfect_grid(g_bilaplacian, spec, "1e-30", ctx)
theta = theta_grid(n, ctx)
with ctx.active():
    for j in (0, 1, n // 2, n - 1):
        closed = bilaplacian_perfect_grid_closed_form(spec.values[j])
        print(f"j={j + 1:2d}  xi={float(grid.xi[j]):.12f}  closed form diff={float(abs(grid.xi[j] - closed)):.1e}"
              f"  xi - theta={float(grid.xi[j] - theta[j]): .3e}")
