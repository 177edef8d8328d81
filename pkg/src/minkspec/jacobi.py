"""Cyclic Jacobi eigensolver for Hermitian matrices.

Rotations are applied in round-robin order: each round is a set of disjoint
index pairs, so all of its 2x2 rotations commute and are applied at once with
vectorised row and column updates.
"""

import numpy as np

from . import _tol
from .errors import ConvergenceFailure


def _round_robin(m):
    """Disjoint pair schedule covering every pair (p, q) once per sweep."""
    players = list(range(m)) + ([-1] if m % 2 else [])
    k = len(players)
    rounds = []
    for _ in range(k - 1):
        pairs = [(players[i], players[k - 1 - i]) for i in range(k // 2)]
        pairs = [(min(p, q), max(p, q)) for p, q in pairs if p >= 0 and q >= 0]
        if pairs:
            P, Q = zip(*pairs)
            rounds.append((np.array(P), np.array(Q)))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def _off_norm(M):
    off = M[~np.eye(M.shape[0], dtype=bool)]
    return float(np.linalg.norm(off))


def hermitian_eigendecomposition(J, vectors=True, max_sweeps=None):
    """Eigen-decompose a Hermitian matrix by complex Jacobi rotations.

    Parameters
    ----------
    J : array_like, shape (m, m)
        Hermitian matrix. Only exact Hermitian input is meaningful; the strict
        lower triangle is trusted as the conjugate of the upper one.
    vectors : bool
        Accumulate the unitary V. Eigenvalue-only calls skip that work.
    max_sweeps : int, optional
        Sweep budget, 30 by default.

    Returns
    -------
    V : ndarray, shape (m, m) or None
        Unitary with ``V* J V = diag(mu)``.
    mu : ndarray, shape (m,)
        Eigenvalues sorted in descending order.

    Raises
    ------
    ConvergenceFailure
        The off-diagonal norm did not fall below ``1e-14 * |J|_F`` within the
        sweep budget.
    """
    M = np.array(J, dtype=complex, copy=True)
    m = M.shape[0]
    V = np.eye(m, dtype=complex) if vectors else None
    if m == 0:
        return V, np.zeros(0)
    M[np.diag_indices(m)] = M.diagonal().real
    sweeps = _tol.JACOBI_SWEEPS if max_sweeps is None else max_sweeps
    threshold = _tol.scaled(_tol.JACOBI_THRESHOLD) * np.linalg.norm(M)
    rounds = _round_robin(m)

    converged = _off_norm(M) <= threshold
    for _ in range(sweeps):
        if converged:
            break
        for P, Q in rounds:
            apq = M[P, Q]
            r = np.abs(apq)
            if not np.any(r > 0.0):
                continue
            app = M[P, P].real
            aqq = M[Q, Q].real
            safe_r = np.where(r > 0.0, r, 1.0)
            w = np.where(r > 0.0, apq / safe_r, 1.0)
            theta = (aqq - app) / (2.0 * safe_r)
            t = np.where(theta >= 0.0, 1.0, -1.0) / (np.abs(theta) + np.hypot(theta, 1.0))
            t = np.where(r > 0.0, t, 0.0)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            u00, u01 = c, s
            u10, u11 = -s * w.conj(), c * w.conj()

            Cp, Cq = M[:, P].copy(), M[:, Q].copy()
            M[:, P] = Cp * u00 + Cq * u10
            M[:, Q] = Cp * u01 + Cq * u11
            Rp, Rq = M[P, :].copy(), M[Q, :].copy()
            M[P, :] = np.conj(u00)[:, None] * Rp + np.conj(u10)[:, None] * Rq
            M[Q, :] = np.conj(u01)[:, None] * Rp + np.conj(u11)[:, None] * Rq
            M[P, Q] = 0.0
            M[Q, P] = 0.0
            M[P, P] = app - t * r
            M[Q, Q] = aqq + t * r
            if vectors:
                Vp, Vq = V[:, P].copy(), V[:, Q].copy()
                V[:, P] = Vp * u00 + Vq * u10
                V[:, Q] = Vp * u01 + Vq * u11
        converged = _off_norm(M) <= threshold
    if not converged:
        raise ConvergenceFailure(
            f"Jacobi iteration did not converge in {sweeps} sweeps "
            f"(off-diagonal norm {_off_norm(M):.3e})")

    mu = M.diagonal().real
    order = np.argsort(-mu, kind="stable")
    mu = mu[order]
    if vectors:
        V = V[:, order]
    return V, mu


def hermitian_eigenvalues(J):
    """Descending eigenvalues of a Hermitian matrix (no eigenvectors)."""
    return hermitian_eigendecomposition(J, vectors=False)[1]
