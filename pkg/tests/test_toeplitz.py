import json

import gmpy2
import numpy as np
import pytest
from gmpy2 import mpfr

from conftest import closed_form_tridiagonal
from toeplitz_spectra import (
    PrecisionContext,
    Symbol,
    build_toeplitz,
    eigenvalues,
    eval_symbol,
    fourier_coefficients_by_quadrature,
    load_symbol,
    perfect_grid,
    project_real_sorted,
    symmetrize_tridiagonal,
    tridiag_exact_eigenvalues,
)
from toeplitz_spectra.linalg import SpectrumSample
from toeplitz_spectra.toeplitz import (
    SampledGrid,
    bilaplacian_perfect_grid_closed_form,
    g_bilaplacian,
    g_shifted_bilaplacian,
    g_tridiagonal_example,
    save_symbol,
    symbol_from_json,
    theta_grid,
)


def test_build_places_positive_index_below_diagonal(ctx128, tridiagonal):
    T = build_toeplitz(tridiagonal(ctx128), 4, ctx128)
    assert T[1, 0] == -1 and T[0, 1] == -2 and T[2, 2] == 2
    assert T[3, 0] == 0 and T[0, 3] == 0
    assert T.shape == (4, 4)


def test_build_is_toeplitz(ctx128, seven_band):
    sym = seven_band(ctx128)
    T = build_toeplitz(sym, 9, ctx128)
    for i in range(9):
        for j in range(9):
            assert T[i, j] == sym.coef(i - j)


def test_build_truncates_band_wider_than_matrix(ctx128, seven_band):
    T = build_toeplitz(seven_band(ctx128), 2, ctx128)
    assert T.shape == (2, 2) and T[1, 0] == 7 and T[0, 1] == 9


def test_build_rejects_empty(ctx128, tridiagonal):
    with pytest.raises(ValueError):
        build_toeplitz(tridiagonal(ctx128), 0, ctx128)


def test_symbol_rejects_all_zero(ctx128):
    with pytest.raises(ValueError):
        Symbol.from_mapping({0: "0", 1: "0"}, ctx128)


def test_symbol_bandwidths(ctx128, seven_band, shifted_bilaplacian):
    s = seven_band(ctx128)
    assert (s.lower_bandwidth, s.upper_bandwidth) == (3, 4)
    s = shifted_bilaplacian(ctx128)
    assert (s.lower_bandwidth, s.upper_bandwidth) == (1, 3)


def test_symbol_symmetry(ctx128, bilaplacian, tridiagonal):
    assert bilaplacian(ctx128).is_symmetric()
    assert not tridiagonal(ctx128).is_symmetric()


def test_eval_symbol_values(ctx128, tridiagonal, bilaplacian):
    with ctx128.active():
        v = eval_symbol(tridiagonal(ctx128), 0, ctx128)
        assert v.real == -1 and v.imag == 0
        v = eval_symbol(bilaplacian(ctx128), ctx128.pi(), ctx128)
        assert abs(v.real - 16) < mpfr("1e-35") and abs(v.imag) < mpfr("1e-35")


def test_eval_symbol_is_complex_for_nonsymmetric(ctx128, tridiagonal):
    with ctx128.active():
        v = eval_symbol(tridiagonal(ctx128), ctx128.pi() / 2, ctx128)
        # -i + 2 - 2(-i) = 2 + i
        assert abs(v.real - 2) < mpfr("1e-35") and abs(v.imag - 1) < mpfr("1e-35")


def test_symbol_json_round_trip(tmp_path, ctx128, seven_band):
    sym = seven_band(ctx128)
    save_symbol(sym, tmp_path / "s.json")
    assert load_symbol(tmp_path / "s.json", ctx128) == sym


@pytest.mark.parametrize("doc", [
    {"coeffs": ["1"]},
    {"min_k": "0", "coeffs": ["1"]},
    {"min_k": 0, "coeffs": []},
    {"min_k": 0, "coeffs": [1.5]},
    [1, 2],
])
def test_symbol_json_rejects_malformed(doc, ctx128):
    with pytest.raises(ValueError):
        symbol_from_json(doc, ctx128)


def test_symbol_json_coefficients_are_exact(tmp_path):
    ctx = PrecisionContext(256)
    (tmp_path / "s.json").write_text(json.dumps({"min_k": 0, "coeffs": ["0.1"]}))
    sym = load_symbol(tmp_path / "s.json", ctx)
    assert sym.coeffs[0] == ctx.mpf("0.1")
    assert sym.coeffs[0] != mpfr(0.1)


def test_theta_grid(ctx128):
    t = theta_grid(3, ctx128)
    with ctx128.active():
        assert t[1] == gmpy2.const_pi() / 2
    g = SampledGrid.build(3, ctx128)
    assert g.h == mpfr(1) / 4 and g.n == 3


# -- symmetrization and closed forms ---------------------------------------


def test_symmetrize_positive_product(ctx128):
    g = symmetrize_tridiagonal(Symbol.from_mapping({1: "1", 0: "0", -1: "4"}, ctx128), ctx128)
    assert g.coef(1) == 2 and g.coef(-1) == 2 and g.coef(0) == 0


def test_symmetrize_tridiagonal_example(ctx128, tridiagonal):
    g = symmetrize_tridiagonal(tridiagonal(ctx128), ctx128)
    with ctx128.active():
        assert g.coef(0) == 2
        assert abs(g.coef(1) + gmpy2.sqrt(mpfr(2))) <= ctx128.eps
        assert g.is_symmetric()


@pytest.mark.parametrize("mapping", [{1: "1", -1: "-1"}, {1: "0", 0: "1", -1: "3"}, {2: "1", 0: "1"}])
def test_symmetrize_rejects(mapping, ctx128):
    with pytest.raises(ValueError):
        symmetrize_tridiagonal(Symbol.from_mapping(mapping, ctx128), ctx128)


def test_tridiag_exact_order5(ctx128, tridiagonal):
    spec = tridiag_exact_eigenvalues(tridiagonal(ctx128), 5, ctx128)
    with ctx128.active():
        r2, r6 = gmpy2.sqrt(mpfr(2)), gmpy2.sqrt(mpfr(6))
        expected = [2 - r6, 2 - r2, mpfr(2), 2 + r2, 2 + r6]
        assert max(abs(a - b) for a, b in zip(spec.values, expected)) < mpfr("1e-36")
    desc = tridiag_exact_eigenvalues(tridiagonal(ctx128), 5, ctx128, order="descending")
    assert list(desc.values) == list(spec.values)[::-1]


def test_closed_form_agrees_with_eigensolver(ctx128, tridiagonal):
    A = build_toeplitz(tridiagonal(ctx128), 20, ctx128)
    got = project_real_sorted(eigenvalues(A, ctx128, "qr"), ctx128).values
    exact = tridiag_exact_eigenvalues(tridiagonal(ctx128), 20, ctx128).values
    with ctx128.active():
        assert max(abs(a - b) for a, b in zip(got, exact)) < mpfr("1e-33")
        assert list(exact) == closed_form_tridiagonal(20, ctx128)


def test_builtin_g_values(ctx128):
    with ctx128.active():
        assert g_tridiagonal_example(0) == 2 - 2 * gmpy2.sqrt(mpfr(2))
        assert abs(g_bilaplacian(ctx128.pi()) - 16) < mpfr("1e-35")
        assert g_shifted_bilaplacian(0) == mpfr(-256) / 27
        # continuous at zero
        assert abs(g_shifted_bilaplacian(mpfr("1e-20")) + mpfr(256) / 27) < mpfr("1e-30")


# -- perfect grid ----------------------------------------------------------


def _bilaplacian_spectrum(n, ctx):
    sym = Symbol.from_mapping({2: "1", 1: "-4", 0: "6", -1: "-4", -2: "1"}, ctx)
    return project_real_sorted(eigenvalues(build_toeplitz(sym, n, ctx), ctx), ctx)


def test_perfect_grid_bilaplacian_closed_form(ctx128):
    spec = _bilaplacian_spectrum(50, ctx128)
    grid = perfect_grid(g_bilaplacian, spec, mpfr("1e-30"), ctx128)
    assert grid.all_ok
    with ctx128.active():
        for x, lam in zip(grid.xi, spec.values):
            assert abs(x - bilaplacian_perfect_grid_closed_form(lam)) <= mpfr("1e-12")
        # grid points lie strictly inside (0, pi) and increase
        assert all(0 < a < b < ctx128.pi() for a, b in zip(grid.xi, grid.xi[1:]))


def test_perfect_grid_tridiagonal_is_uniform(ctx128, tridiagonal):
    spec = tridiag_exact_eigenvalues(tridiagonal(ctx128), 7, ctx128)
    grid = perfect_grid(g_tridiagonal_example, spec, mpfr("1e-30"), ctx128)
    with ctx128.active():
        theta = theta_grid(7, ctx128)
        assert max(abs(a - b) for a, b in zip(grid.xi, theta)) < mpfr("1e-30")


def test_perfect_grid_flags_out_of_range(ctx128):
    vals = np.array([mpfr(1), mpfr(20)], dtype=object)
    spec = SpectrumSample(n=2, values=vals, order="ascending", bits=128, max_imag_discarded=mpfr(0))
    grid = perfect_grid(g_bilaplacian, spec, mpfr("1e-20"), ctx128)
    assert list(grid.ok) == [True, False]
    assert gmpy2.is_nan(grid.xi[1])
    assert not grid.all_ok


def test_perfect_grid_endpoint_singularity(ctx128):
    def g(t):
        if t == 0:
            raise ZeroDivisionError
        return -gmpy2.cos(t) / 1
    vals = np.array([mpfr(0)], dtype=object)
    spec = SpectrumSample(n=1, values=vals, order="ascending", bits=128, max_imag_discarded=mpfr(0))
    grid = perfect_grid(g, spec, mpfr("1e-20"), ctx128)
    with ctx128.active():
        assert abs(grid.xi[0] - ctx128.pi() / 2) < mpfr("1e-30")


# -- quadrature ------------------------------------------------------------


def test_quadrature_bilaplacian_is_exact(ctx53):
    c = fourier_coefficients_by_quadrature(g_bilaplacian, 5, ctx53, quad_points=64, max_points=128)
    assert [round(float(v), 12) for v in c] == [6.0, -4.0, 1.0, 0.0, 0.0]


def test_quadrature_shifted_bilaplacian_leading_terms(ctx53):
    c = fourier_coefficients_by_quadrature(g_shifted_bilaplacian, 3, ctx53)
    expected = [-4.000000000000000, -2.423215805461417, -0.354481702999765]
    assert all(abs(float(a) - b) < 1e-12 for a, b in zip(c, expected))


def test_quadrature_warns_when_not_converged(ctx128):
    with pytest.warns(RuntimeWarning, match="did not reach"):
        fourier_coefficients_by_quadrature(g_shifted_bilaplacian, 2, ctx128, quad_points=64, max_points=128)


def test_quadrature_rejects_bad_arguments(ctx53):
    with pytest.raises(ValueError):
        fourier_coefficients_by_quadrature(g_bilaplacian, 0, ctx53)
    with pytest.raises(ValueError):
        fourier_coefficients_by_quadrature(g_bilaplacian, 100, ctx53, quad_points=16)
