import math

import numpy as np
import pytest

from minkspec.analysis import verify
from minkspec.errors import OracleDivergence
from minkspec.model import validate_problem
from minkspec.oracle import (aberth_roots, char_poly_coefficients, char_poly_roots_oracle,
                             det_char_poly, jordan_block_size, jordan_rank_probe, match_spectra,
                             nu_curves, nu_derivative_check, nu_local_expansion, nu_values)
from minkspec.secular import SecularFunction, solve_spectrum
from minkspec.spectral import spectral_form
from minkspec.sweep import critical_a_values

R = 1.0 / math.sqrt(2.0)
MU, D = (4.0, 3.0, 2.0, 1.0), (1.0, 0.001, 0.02, 0.01)


def ex1(a=0.0):
    return spectral_form(MU, D, a)


def ex2():
    return validate_problem([[1, 0], [0, -1]], [R, R], 0.0)


def test_aberth_known_roots():
    roots = aberth_roots(np.poly([3.0, -1.0, 2.0 + 1j, 2.0 - 1j]))
    assert match_spectra(roots, [3.0, -1.0, 2.0 + 1j, 2.0 - 1j]) <= 1e-12


def test_aberth_divergence_reported():
    with pytest.raises(OracleDivergence):
        aberth_roots(np.poly(np.arange(1.0, 9.0)), maxiter=1)


def test_coefficients_example2_are_cubic():
    assert char_poly_coefficients(spectral_form([1.0, -1.0], [0.5, 0.5])) == pytest.approx([1, 0, 0, 0], abs=1e-15)


def test_oracle_example2_triple_zero():
    roots = char_poly_roots_oracle(spectral_form([1.0, -1.0], [0.5, 0.5]), 3)
    assert np.max(np.abs(roots)) <= 1e-4


def test_oracle_pair():
    roots = char_poly_roots_oracle(spectral_form([0.0], [1.0]), 2)
    assert match_spectra(roots, [1j, -1j]) <= 1e-14


def test_oracle_example1_matches_solver():
    for a in (0.0, 1.0, 5.0, 6.5):
        e = solve_spectrum(SecularFunction(ex1(a)))
        assert match_spectra(e.eigenvalues(), char_poly_roots_oracle(ex1(a))) <= 1e-8


def test_oracle_wrong_degree():
    with pytest.raises(ValueError):
        char_poly_roots_oracle(ex1(), 4)


def test_determinant_vanishes_at_eigenvalues():
    p = ex1(0.3).to_pencil()
    for z in solve_spectrum(SecularFunction(ex1(0.3))).eigenvalues():
        assert abs(det_char_poly(p, z)) <= 1e-10


def test_nu_zero_at_every_eigenvalue():
    for a in (0.0, 1.0, 6.5):
        p = ex1(a).to_pencil()
        for z in solve_spectrum(SecularFunction(ex1(a))).eigenvalues():
            assert np.min(np.abs(nu_values(p, z.real))) <= 1e-9


def test_nu_curves_shape_and_matching():
    p = ex1(0.0).to_pencil()
    grid = np.linspace(0.1, 0.9, 201)
    samples = nu_curves(p, grid)
    assert len(samples) == 201
    assert all(s.nus.shape == (5,) for s in samples)
    for s in samples:
        assert sorted(s.matching.tolist()) == list(range(5))
    # matched curves move continuously
    steps = np.array([np.max(np.abs(b.nus - a.nus)) for a, b in zip(samples, samples[1:])])
    assert steps.max() < 0.05


def test_nu_zeros_locate_real_eigenvalues():
    # zero crossings of the matched curves recover the eigenvalues in (0, 1)
    p = ex1(0.0).to_pencil()
    grid = np.linspace(0.05, 0.95, 901)
    nus = np.array([s.nus for s in nu_curves(p, grid)])
    crossings = []
    for j in range(nus.shape[1]):
        idx = np.nonzero(np.sign(nus[:-1, j]) != np.sign(nus[1:, j]))[0]
        for i in idx:
            x0, x1, y0, y1 = grid[i], grid[i + 1], nus[i, j], nus[i + 1, j]
            crossings.append(x0 - y0 * (x1 - x0) / (y1 - y0))
    e = solve_spectrum(SecularFunction(ex1(0.0)))
    inside = sorted(z.real for z in e.eigenvalues() if 0.05 < z.real < 0.95)
    assert sorted(crossings) == pytest.approx(inside, abs=1e-5)


def test_smallest_root_has_negative_slope():
    s = SecularFunction(ex1(0.0))
    lam = min(z.real for z in solve_spectrum(s).eigenvalues())
    chk = nu_derivative_check(ex1(0.0).to_pencil(), s, lam)
    assert chk.numeric < 0 and chk.agree


def test_largest_root_slope_agrees():
    s = SecularFunction(ex1(0.0))
    lam = max(z.real for z in solve_spectrum(s).eigenvalues())
    chk = nu_derivative_check(ex1(0.0).to_pencil(), s, lam)
    assert s._dg(lam) > 1.0
    assert chk.agree and chk.numeric > 0


def test_isolated_root_slope_near_minus_one():
    form = spectral_form([0.0], [1e-4], 50.0)
    s = SecularFunction(form)
    lam = max(z.real for z in solve_spectrum(s).eigenvalues())
    chk = nu_derivative_check(form.to_pencil(), s, lam)
    assert chk.agree and chk.analytic == pytest.approx(-1.0, abs=1e-6)


def test_one_by_one_slope():
    form = spectral_form([], [], 2.0)
    chk = nu_derivative_check(form.to_pencil(), SecularFunction(form), 2.0)
    assert chk.numeric == pytest.approx(-1.0) and chk.agree


def test_example2_cubic_contact():
    order, coeffs = nu_local_expansion(ex2(), 0.0)
    assert order == 3
    assert coeffs[3] > 0


def test_example2_ranks():
    assert [jordan_rank_probe(ex2(), 0.0, k) for k in (1, 2, 3)] == [2, 1, 0]
    assert jordan_block_size(ex2(), 0.0) == 3


def test_simple_eigenvalue_rank():
    p = ex1(0.0).to_pencil()
    for z in solve_spectrum(SecularFunction(ex1(0.0))).eigenvalues():
        assert jordan_rank_probe(p, z.real, 1) == 4
        assert jordan_block_size(p, z.real) == 1


def test_case_4c_ranks():
    c = critical_a_values(ex1())[2]
    assert c.resulting_case == "4c"
    p = ex1(c.a_star).to_pencil()
    assert [jordan_rank_probe(p, c.tangency_point, k) for k in (1, 2)] == [4, 3]
    assert jordan_block_size(p, c.tangency_point) == 2


def test_non_eigenvalue_probe():
    assert jordan_block_size(ex1(0.0).to_pencil(), 10.0) == 0


def test_bad_power():
    with pytest.raises(ValueError):
        jordan_rank_probe(ex2(), 0.0, 4)


@pytest.mark.parametrize("a", [0.0, 1.0, 5.0, 6.5])
def test_verify_suite_passes(a):
    report = verify(ex1(a))
    assert report.passed, [c for c in report.checks if not c.passed]


def test_verify_suite_at_critical_shifts():
    for c in critical_a_values(ex1()):
        report = verify(ex1(c.a_star))
        assert report.passed, [x for x in report.checks if not x.passed]
    assert verify(ex2()).passed
