"""Observability of (J, u*) and the Kalman reduction.

For Hermitian J the pair is observable exactly when the eigenvalues of J are
distinct and every residue |(V*u)_j|^2 is nonzero, so the decision is made in
eigen-coordinates rather than from the powers u*J^k.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from . import _tol
from .jacobi import hermitian_eigendecomposition
from .model import BorderedPencil
from .spectral import SpectralForm, clusters, residue_tolerance, to_spectral_form


@dataclass(frozen=True)
class HautusResult:
    """Per-eigenvalue outcome of the Hautus rank test."""

    checks: List[Tuple[float, bool]] = field(default_factory=list)

    @property
    def observable(self) -> bool:
        return all(ok for _, ok in self.checks)

    def failing(self):
        return [mu for mu, ok in self.checks if not ok]


@dataclass(frozen=True, eq=False)
class ObservabilityReport:
    observable: bool
    unobservable_dimension: int
    detached_spectrum: np.ndarray
    reduced: SpectralForm

    def __eq__(self, other):
        if not isinstance(other, ObservabilityReport):
            return NotImplemented
        return (self.observable == other.observable
                and self.unobservable_dimension == other.unobservable_dimension
                and np.array_equal(self.detached_spectrum, other.detached_spectrum)
                and self.reduced == other.reduced)

    __hash__ = None


def hautus_test(J, u, method="spectral") -> HautusResult:
    """Check rank [mu I - J; u*] = n - 1 at every distinct eigenvalue mu of J.

    ``method="spectral"`` passes an eigenvalue when it is a simple pole with a
    residue above the observability cutoff. ``method="stacked"`` forms the
    stacked matrix and compares its smallest singular value with
    ``1e-10 * max(1, |J|_max, |u|)``.
    """
    J = np.asarray(J, dtype=complex)
    u = np.asarray(u, dtype=complex).reshape(-1)
    V, mu = hermitian_eigendecomposition(J)
    checks = []
    if method == "spectral":
        d = np.abs(V.conj().T @ u) ** 2
        tau_obs = residue_tolerance(float(np.sum(np.abs(u) ** 2)))
        for i, j in clusters(mu):
            value = float(np.mean(mu[i:j]))
            checks.append((value, j - i == 1 and float(d[i]) > tau_obs))
    elif method == "stacked":
        m = J.shape[0]
        scale = max(1.0, float(np.max(np.abs(J))) if m else 0.0, float(np.linalg.norm(u)))
        tau_rank = _tol.scaled(_tol.RANK) * scale
        for i, j in clusters(mu):
            value = float(np.mean(mu[i:j]))
            stacked = np.vstack([value * np.eye(m) - J, u.conj()[None, :]])
            sigma_min = np.linalg.svd(stacked, compute_uv=False)[-1]
            checks.append((value, bool(sigma_min > tau_rank)))
    else:
        raise ValueError(f"unknown method {method!r}")
    return HautusResult(checks)


def kalman_reduce(p: BorderedPencil) -> ObservabilityReport:
    """Split off the unobservable part of (J, u*).

    The detached spectrum sigma(J_1) consists of eigenvalues of A with
    eigenvectors in the unobservable subspace; ``reduced`` is the spectral form
    of the observable pair (J_2, u_2*) with the same shift a.
    """
    form = to_spectral_form(p)
    return report_for(form)


def report_for(form: SpectralForm) -> ObservabilityReport:
    detached = form.detached
    return ObservabilityReport(
        observable=detached.shape[0] == 0,
        unobservable_dimension=int(detached.shape[0]),
        detached_spectrum=detached,
        reduced=form.reduced(),
    )
