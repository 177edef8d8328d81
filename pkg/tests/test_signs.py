import numpy as np
import pytest

from minkspec.analysis import analyze
from minkspec.errors import AmbiguousSign, CanonicalViolation
from minkspec.model import EigenvalueRecord
from minkspec.oracle import nu_local_expansion
from minkspec.secular import EigenStructure, SecularFunction, solve_spectrum
from minkspec.signs import SignedBlock, assemble_canonical_form, assign_signs, sign_census_violations
from minkspec.spectral import spectral_form
from minkspec.sweep import critical_a_values

MU, D = (4.0, 3.0, 2.0, 1.0), (1.0, 0.001, 0.02, 0.01)


def ex1(a=0.0):
    return spectral_form(MU, D, a)


def test_case_1a_smallest_negative():
    out = analyze(ex1(0.0))
    assert out.canonical.signs() == [1, 1, 1, 1, -1]
    assert out.sign_string() == "+ + + + -"


def test_case_3a_largest_negative():
    assert analyze(ex1(6.5)).canonical.signs() == [-1, 1, 1, 1, 1]


def test_case_4a_middle_negative():
    out = analyze(ex1(1.0))
    assert out.canonical.signs() == [1, 1, 1, -1, 1]
    assert sign_census_violations(out.structure, out.blocks) == []


def test_double_root_signs_follow_nu_curves():
    # the sign of a 2x2 block is the sign of the leading (quadratic)
    # coefficient of the nu-curve vanishing there
    form = ex1()
    expected = {"1b": 1, "4b": -1, "4c": 1, "3b": -1}
    for c in critical_a_values(form):
        shifted = form.with_shift(c.a_star)
        out = analyze(shifted)
        (block,) = [b for b in out.blocks if b.block_type == 3]
        order, coeffs = nu_local_expansion(shifted.to_pencil(), block.eigenvalue.real)
        assert order == 2
        assert block.epsilon == (1 if coeffs[2] > 0 else -1)
        assert block.epsilon == expected[c.resulting_case]
        assert sign_census_violations(out.structure, out.blocks) == []


def _jordan_chain_sign(pencil, lam):
    A, H = pencil.A, pencil.H
    B = A - lam * np.eye(A.shape[0])
    x0 = np.linalg.svd(B)[2][-1].conj()
    x1 = np.linalg.lstsq(B, x0, rcond=None)[0]
    return np.vdot(x0, H @ x1).real


def test_double_root_signs_follow_jordan_chain():
    form = ex1()
    for c in critical_a_values(form):
        shifted = form.with_shift(c.a_star)
        (block,) = [b for b in analyze(shifted).blocks if b.block_type == 3]
        value = _jordan_chain_sign(shifted.to_pencil(), block.eigenvalue.real)
        assert block.epsilon == (1 if value > 0 else -1)


def test_double_root_geometry():
    # f = h - g keeps one sign next to a double root: g above h means f < 0
    form = ex1()
    for c in critical_a_values(form):
        s = SecularFunction(form.with_shift(c.a_star))
        out = analyze(form.with_shift(c.a_star))
        (block,) = [b for b in out.blocks if b.block_type == 3]
        t, step = block.eigenvalue.real, 1e-4 * s.spread
        g_above = s.f(t - step) < 0.0 and s.f(t + step) < 0.0
        g_below = s.f(t - step) > 0.0 and s.f(t + step) > 0.0
        assert g_above or g_below
        assert (block.epsilon == 1) == g_above


def test_signs_invariant_under_jordan_chain_canonical_pair():
    for eps in (1, -1):
        A, H = SignedBlock(3, 2.0 + 0j, 2, eps).matrices()
        assert np.array_equal(H @ A, A.conj().T @ H)


def test_triple_block():
    out = analyze(spectral_form([1.0, -1.0], [0.5, 0.5], 0.0))
    assert [(b.block_type, b.size, b.epsilon) for b in out.blocks] == [(4, 3, 1)]
    assert not out.blocks[0].sign_is_free
    assert out.canonical.signature() == (2, 1)


def test_complex_pair_block():
    out = analyze(spectral_form([0.0], [1.0], 0.0))
    (block,) = out.blocks
    assert block.block_type == 2 and block.epsilon is None
    assert block.eigenvalue == pytest.approx(1j)


def test_canonical_matrices_are_h_selfadjoint():
    for a in (0.0, 1.0, 5.0):
        out = analyze(ex1(a))
        A, H = out.canonical.matrices()
        assert np.allclose(H @ A, A.conj().T @ H)
        assert np.sort_complex(np.linalg.eigvals(A)) == pytest.approx(
            np.sort_complex(out.eigenvalues()), abs=1e-12)
        assert np.sum(np.linalg.eigvalsh(H) < 0) == 1


def test_detached_blocks_positive():
    out = analyze(spectral_form([3.0, 2.0, 1.0], [1.0, 1e-20, 0.5], 0.0))
    detached = [b for b in out.blocks if b.detached]
    assert len(detached) == 1 and detached[0].epsilon == 1
    assert out.case_label == "REDUCIBLE"


def test_canonical_violations():
    pair = SignedBlock(2, 1j, 2, None)
    double = SignedBlock(3, 0.5 + 0j, 2, 1)
    neg = SignedBlock(1, 0.0 + 0j, 1, -1)
    pos = SignedBlock(1, 3.0 + 0j, 1, 1)
    with pytest.raises(CanonicalViolation, match="only one block"):
        assemble_canonical_form([pair, double])
    with pytest.raises(CanonicalViolation, match="negative"):
        assemble_canonical_form([neg, neg, pos])
    with pytest.raises(CanonicalViolation, match="signature"):
        assemble_canonical_form([pos, pos])
    with pytest.raises(CanonicalViolation, match="dimensions"):
        assemble_canonical_form([neg, pos], n=3)
    assert assemble_canonical_form([neg, pos], detached=[7.0]).signature() == (2, 1)


def test_ambiguous_sign_at_misclassified_root():
    s = SecularFunction(ex1(0.0))
    t = critical_a_values(ex1())[0].tangency_point
    fake = EigenStructure((EigenvalueRecord(complex(t), 1, 1, True, 4),), "1a", None)
    with pytest.raises(AmbiguousSign):
        assign_signs(fake, s)


def test_simple_signs_from_g_prime():
    s = SecularFunction(ex1(0.0))
    e = solve_spectrum(s)
    for b, r in zip(assign_signs(e, s), e.records):
        assert b.epsilon == (1 if s._dg(r.value.real) > 1.0 else -1)
