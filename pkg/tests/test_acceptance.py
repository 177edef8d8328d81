"""Acceptance checks. The summary prints one PASS/FAIL line per criterion."""

import contextlib
import io
import json
import math
import time
from pathlib import Path

import numpy as np
import pytest

from _instances import planted_unobservable_pencil, random_form
from minkspec.analysis import analyze
from minkspec.cli import main
from minkspec.model import validate_problem
from minkspec.oracle import (char_poly_roots_oracle, jordan_rank_probe, match_spectra,
                             nu_derivative_check)
from minkspec.secular import SecularFunction, solve_spectrum
from minkspec.signs import assign_signs
from minkspec.spectral import spectral_form, to_spectral_form
from minkspec.sweep import asymptotic_check, critical_a_values, eigenvalue_trajectories, trajectory_derivative

DATA = Path(__file__).resolve().parent.parent / "demos" / "data"

EX1_MU, EX1_D = (4.0, 3.0, 2.0, 1.0), (1.0, 0.001, 0.02, 0.01)

# published four/five-decimal values
PUBLISHED_A = (0.4591, 0.8319, 1.2631, 1.7485, 2.0087, 6.0097)
PUBLISHED_T = (0.8934, 1.10815, 1.83895, 2.1699, 2.91185, 5.00155)
PUBLISHED_CASES = ("1b", "4b", "4c", "4b", "4c", "3b")

# double roots of p(x; a) in x: common roots of the resultant system solved in
# exact arithmetic (sympy discriminant in x, real roots in a), frozen here
ORACLE_A = (0.45914797446096195185, 0.83186088945825813286, 1.2630853170824003787,
            1.7485411379545537234, 2.0086787205567532217, 6.0096642672077545432)
ORACLE_T = (0.89338914750266063103, 1.1081476771457100731, 1.8389323115534641360,
            2.1699238499290633340, 2.9118438598843367427, 5.0015506268638747154)


def example1(a=0.0):
    return spectral_form(EX1_MU, EX1_D, a)


def example2_pencil(a=0.0):
    r = 1.0 / math.sqrt(2.0)
    return validate_problem(np.diag([1.0, -1.0]), [r, r], a)


def random_forms(count, seed):
    rng = np.random.default_rng(seed)
    return [random_form(rng) for _ in range(count)]


def margin_forms(count, seed, margin=0.05):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        form = random_form(rng)
        s = SecularFunction(form)
        e = solve_spectrum(s)
        if all(abs(s._dg(r.value.real) - 1.0) > margin for r in e.real_records()):
            out.append(form)
    return out


def run_cli(*argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(list(argv))
    return code, buf.getvalue()


# criterion 1 ---------------------------------------------------------------

@pytest.mark.criterion(1, "Example 1 critical a-values and their cases")
def test_critical_values_from_cli():
    start = time.perf_counter()
    code, out = run_cli("--json", "critical-a", str(DATA / "example1.json"))
    elapsed = time.perf_counter() - start
    assert code == 0
    rows = json.loads(out)
    assert len(rows) == 6
    for row, a_pub, case in zip(rows, PUBLISHED_A, PUBLISHED_CASES):
        assert abs(row["a_star"] - a_pub) <= 2e-3
        assert row["resulting_case"] == case
    assert elapsed < 1.0


@pytest.mark.criterion(1, "Example 1 critical a-values and their cases")
def test_critical_values_match_exact_oracle():
    values = critical_a_values(example1())
    assert [c.a_star for c in values] == pytest.approx(ORACLE_A, abs=1e-12)


# criterion 2 ---------------------------------------------------------------

@pytest.mark.criterion(2, "Example 1 double-eigenvalue locations")
def test_tangency_points():
    values = critical_a_values(example1())
    assert len(values) == 6
    for c, t_pub, t_exact in zip(values, PUBLISHED_T, ORACLE_T):
        assert abs(c.tangency_point - t_pub) <= 2e-3
        assert abs(c.tangency_point - t_exact) <= 1e-12


# criterion 3 ---------------------------------------------------------------

def _type1_negative(out):
    neg = [b for b in out.blocks if b.block_type == 1 and b.epsilon < 0]
    assert len(neg) == 1
    return neg[0].eigenvalue.real


@pytest.mark.criterion(3, "Example 1 sign table")
def test_sign_table_simple_roots():
    out = analyze(example1(0.0))
    assert out.case_label == "1a"
    reals = sorted(r.value.real for r in out.records)
    assert _type1_negative(out) == reals[0]

    out = analyze(example1(1.0))
    assert out.case_label == "4a"
    host = out.structure.report.hosting_interval
    trio = sorted(r.value.real for r in out.records if r.interval_index == host)
    assert len(trio) == 3
    assert _type1_negative(out) == trio[1]

    out = analyze(example1(6.5))
    assert out.case_label == "3a"
    assert _type1_negative(out) == max(r.value.real for r in out.records)


@pytest.mark.criterion(3, "Example 1 sign table")
def test_sign_table_double_roots():
    signs, cases = [], []
    for c in critical_a_values(example1()):
        out = analyze(example1(c.a_star))
        cases.append(out.case_label)
        twos = [b for b in out.blocks if b.block_type == 3]
        assert len(twos) == 1
        signs.append(twos[0].epsilon)
    assert cases == list(PUBLISHED_CASES)
    assert signs == [-1, +1, -1, +1, -1, +1]


# criterion 4 ---------------------------------------------------------------

@pytest.mark.criterion(4, "Example 2 triple block")
def test_triple_block():
    p = example2_pencil()
    start = time.perf_counter()
    form = to_spectral_form(p)
    s = SecularFunction(form)
    grid = np.linspace(-2.0, 2.0, 81)
    resid = max(abs(s.char_poly_value(x) - x ** 3) for x in grid)
    coeff_resid = max(abs(np.polyval(s.char_poly(), x) - x ** 3) for x in grid)
    out = analyze(p)
    ranks = tuple(jordan_rank_probe(p, 0.0, k) for k in (1, 2, 3))
    elapsed = time.perf_counter() - start

    assert resid <= 1e-12 and coeff_resid <= 1e-12
    assert out.case_label == "4d"
    assert len(out.blocks) == 1
    block = out.blocks[0]
    assert (block.block_type, block.size) == (4, 3)
    assert abs(block.eigenvalue) <= 1e-12
    assert ranks == (2, 1, 0)
    assert elapsed < 0.1


# criterion 5 ---------------------------------------------------------------

@pytest.mark.criterion(5, "solver agrees with the polynomial-root oracle")
def test_oracle_equivalence():
    start = time.perf_counter()
    worst = 0.0
    for form in random_forms(200, seed=20261017):
        assert form.n <= 10
        e = solve_spectrum(SecularFunction(form))
        worst = max(worst, match_spectra(e.eigenvalues(), char_poly_roots_oracle(form, form.n)))
    elapsed = time.perf_counter() - start
    assert worst <= 1e-8
    assert elapsed < 30.0


# criterion 6 ---------------------------------------------------------------

@pytest.mark.criterion(6, "simple-root signs agree with nu-curve slopes")
def test_sign_rule_against_nu_curves():
    checked = 0
    for form in margin_forms(100, seed=6):
        s = SecularFunction(form)
        e = solve_spectrum(s)
        pencil = form.to_pencil()
        for b in assign_signs(e, s):
            if b.block_type != 1:
                continue
            chk = nu_derivative_check(pencil, s, b.eigenvalue.real)
            assert (1 if chk.numeric > 0 else -1) == b.epsilon
            assert chk.agree
            checked += 1
    assert checked >= 100


# criterion 7 ---------------------------------------------------------------

def structural_problems(problem):
    out = analyze(problem)
    s = SecularFunction(out.observability.reduced)
    problems = []
    vals = out.eigenvalues()
    if match_spectra(vals, vals.conj()) > 1e-12 * max(1.0, float(np.max(np.abs(vals)))):
        problems.append("spectrum not closed under conjugation")
    m = s.m
    census = [0] * (m + 1)
    for r in out.records:
        if r.is_real and not r.detached:
            census[int(np.sum(s.poles > r.value.real))] += r.algebraic_multiplicity
    for k, c in enumerate(census):
        if c not in ((0, 2) if k in (0, m) else (1, 3)):
            problems.append(f"interval {k} holds {c} roots")
    if out.canonical.signature() != (out.n - 1, 1):
        problems.append(f"signature {out.canonical.signature()}")
    if sum(b.block_type in (2, 3, 4) for b in out.blocks) > 1:
        problems.append("several blocks of type 2/3/4")
    if sum(b.block_type == 1 and b.epsilon < 0 for b in out.blocks) > 1:
        problems.append("several negative type-1 signs")
    return problems


def all_instances():
    yield example1(0.0)
    yield example1(1.0)
    yield example1(6.5)
    for c in critical_a_values(example1()):
        yield example1(c.a_star)
    yield example2_pencil()
    yield from random_forms(200, seed=20261017)
    yield from margin_forms(100, seed=6)


@pytest.mark.criterion(7, "structural invariants on every instance")
def test_structural_invariants():
    count = 0
    for problem in all_instances():
        assert structural_problems(problem) == [], problem
        count += 1
    assert count == 310


# criterion 8 ---------------------------------------------------------------

@pytest.mark.criterion(8, "Kalman reduction reproduces the dense spectrum")
def test_kalman_reduction():
    rng = np.random.default_rng(8)
    for _ in range(50):
        p = planted_unobservable_pencil(rng)
        out = analyze(p)
        assert not out.observability.observable
        assert out.observability.unobservable_dimension >= 1
        combined = np.concatenate([np.asarray(out.observability.detached_spectrum, dtype=complex),
                                   out.structure.eigenvalues()])
        assert match_spectra(combined, np.linalg.eigvals(p.A)) <= 1e-8


# criterion 9 ---------------------------------------------------------------

@pytest.mark.criterion(9, "trajectory derivative and large-a asymptotics")
@pytest.mark.parametrize("a", [5.0, 10.0, 100.0])
def test_trajectory_slopes(a):
    form = example1()
    h = 1e-4 * (1.0 + abs(a))
    pts = eigenvalue_trajectories(form, a - h, a + h, 3)
    slopes = (pts[2].eigenvalues - pts[0].eigenvalues) / (2.0 * h)
    s = SecularFunction(form.with_shift(a))
    tested = 0
    for lam, slope in zip(pts[1].eigenvalues, slopes):
        if lam.imag != 0.0:
            continue
        expected = trajectory_derivative(s, lam.real)
        assert abs(slope.real - expected) <= 1e-4 * abs(expected)
        tested += 1
    assert tested == (3 if a == 5.0 else 5)


@pytest.mark.criterion(9, "trajectory derivative and large-a asymptotics")
def test_asymptotics_at_large_a():
    report = asymptotic_check(example1(), 1e4)
    assert report.ok
    assert len(report.pole_branches) == 4
    for mu, lam, _ in report.pole_branches:
        assert 0.0 < lam - mu <= 1e-3
    assert abs(report.large_branch[0] - 1e4) <= 1.0
