import math

import numpy as np
import pytest

from _instances import planted_unobservable_pencil, random_unitary
from minkspec.errors import DimensionMismatch, NonFiniteEntry, ValidationError
from minkspec.model import validate_problem
from minkspec.observability import hautus_test, kalman_reduce
from minkspec.spectral import clusters, spectral_form, to_spectral_form

R = 1.0 / math.sqrt(2.0)


def test_example2_residues():
    form = to_spectral_form(validate_problem([[1, 0], [0, -1]], [R, R], 0))
    assert form.poles.tolist() == [1.0, -1.0]
    assert form.residues == pytest.approx([0.5, 0.5], abs=1e-15)
    assert form.observable


def test_residues_are_rotation_invariant():
    rng = np.random.default_rng(2)
    mu = np.array([3.0, 1.0, -0.5, -2.0])
    w = rng.normal(size=4) + 1j * rng.normal(size=4)
    q = random_unitary(rng, 4)
    form = to_spectral_form(validate_problem(q @ np.diag(mu) @ q.conj().T, q @ w, 0.0))
    assert form.poles == pytest.approx(mu, abs=1e-12)
    assert form.residues == pytest.approx(np.abs(w) ** 2, rel=1e-12)


def test_spectral_form_validation():
    with pytest.raises(ValidationError):
        spectral_form([1, 2], [1, 1])
    with pytest.raises(ValidationError):
        spectral_form([2, 1], [1, 0])
    with pytest.raises(DimensionMismatch):
        spectral_form([2, 1], [1])
    with pytest.raises(NonFiniteEntry):
        spectral_form([2, 1], [1, np.nan])


def test_clusters():
    assert clusters(np.array([3.0, 3.0 + 1e-13, 1.0, 0.0])) == [(0, 2), (2, 3), (3, 4)]


def test_hautus_example1_observable():
    J = np.diag([4.0, 3.0, 2.0, 1.0])
    u = np.sqrt([1.0, 0.001, 0.02, 0.01])
    for method in ("spectral", "stacked"):
        assert hautus_test(J, u, method).observable


def test_hautus_flags_zero_component():
    J = np.diag([2.0, 1.0, 0.0])
    u = np.array([1.0, 0.0, 1.0])
    for method in ("spectral", "stacked"):
        res = hautus_test(J, u, method)
        assert not res.observable
        assert res.failing() == [pytest.approx(1.0)]


def test_hautus_flags_repeated_eigenvalue():
    J = np.diag([2.0, 2.0, 0.0])
    u = np.array([1.0, 1.0, 1.0])
    for method in ("spectral", "stacked"):
        assert hautus_test(J, u, method).failing() == [pytest.approx(2.0)]


def test_hautus_methods_agree_on_planted_instances():
    rng = np.random.default_rng(11)
    for _ in range(20):
        p = planted_unobservable_pencil(rng)
        a = hautus_test(p.J, p.u, "spectral")
        b = hautus_test(p.J, p.u, "stacked")
        assert [ok for _, ok in a.checks] == [ok for _, ok in b.checks]
        assert not a.observable


def test_unknown_method():
    with pytest.raises(ValueError):
        hautus_test(np.eye(1), [1.0], "gramian")


def test_kalman_reduction_dimensions():
    J = np.diag([2.0, 2.0, 1.0, 0.0])
    u = np.array([1.0, 1.0, 0.0, 1.0])
    report = kalman_reduce(validate_problem(J, u, 0.5))
    assert not report.observable
    assert report.unobservable_dimension == 2
    assert sorted(report.detached_spectrum.tolist()) == pytest.approx([1.0, 2.0])
    assert report.reduced.poles == pytest.approx([2.0, 0.0])
    assert report.reduced.residues == pytest.approx([2.0, 1.0])


def test_detached_eigenvalues_belong_to_a():
    rng = np.random.default_rng(12)
    for _ in range(10):
        p = planted_unobservable_pencil(rng)
        report = kalman_reduce(p)
        eig = np.linalg.eigvals(p.A)
        for x in report.detached_spectrum:
            assert np.min(np.abs(eig - x)) <= 1e-8


def test_observable_pencil_has_empty_detached_part():
    report = kalman_reduce(validate_problem([[1, 0], [0, -1]], [R, R], 0))
    assert report.observable and report.unobservable_dimension == 0
