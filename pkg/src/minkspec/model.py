"""The bordered problem A = [[J, u], [-u*, a]] with H = I_{n-1} (+) (-1)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _tol
from .errors import DimensionMismatch, NonFiniteEntry, NotHermitian


def _frozen(arr):
    arr = np.array(arr, copy=True)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class BorderedPencil:
    """Validated data (J, u, a).

    Build instances with :func:`validate_problem`; the constructor does not
    check anything.
    """

    J: np.ndarray
    u: np.ndarray
    a: float

    @property
    def n(self) -> int:
        return self.J.shape[0] + 1

    @property
    def A(self) -> np.ndarray:
        return assemble_A_and_H(self)[0]

    @property
    def H(self) -> np.ndarray:
        return assemble_A_and_H(self)[1]

    def with_shift(self, a: float) -> "BorderedPencil":
        return BorderedPencil(self.J, self.u, float(a))

    def __eq__(self, other):
        if not isinstance(other, BorderedPencil):
            return NotImplemented
        return (self.a == other.a and np.array_equal(self.J, other.J)
                and np.array_equal(self.u, other.u))

    __hash__ = None


@dataclass(frozen=True)
class EigenvalueRecord:
    """One distinct eigenvalue of A.

    ``interval_index`` counts pole intervals from the right: 0 is
    (mu_1, +inf), k is (mu_{k+1}, mu_k), and m is (-inf, mu_m). It is None for
    non-real values and for eigenvalues split off by the Kalman reduction.
    """

    value: complex
    algebraic_multiplicity: int = 1
    jordan_block_size: int = 1
    is_real: bool = True
    interval_index: Optional[int] = None
    detached: bool = False


def validate_problem(raw_J, raw_u, raw_a) -> BorderedPencil:
    """Check and normalise raw (J, u, a) into a :class:`BorderedPencil`.

    Parameters
    ----------
    raw_J : array_like, shape (m, m)
        Hermitian matrix; an empty sequence gives the degenerate n = 1 pencil.
    raw_u : array_like, shape (m,)
    raw_a : float

    Returns
    -------
    BorderedPencil

    Raises
    ------
    DimensionMismatch
        J not square or u of the wrong length.
    NotHermitian
        max |J - J*| above ``1e-10 * max(1, |J|_max)``.
    NonFiniteEntry
        NaN or infinity anywhere in the input.

    Notes
    -----
    Asymmetry below the threshold is removed by replacing J with (J + J*)/2,
    and the diagonal is made exactly real. Validation is idempotent.
    """
    J = np.asarray(raw_J, dtype=complex)
    if J.size == 0:
        J = np.zeros((0, 0), dtype=complex)
    if J.ndim != 2 or J.shape[0] != J.shape[1]:
        raise DimensionMismatch(f"J must be square, got shape {J.shape}")
    u = np.asarray(raw_u, dtype=complex).reshape(-1)
    if u.shape[0] != J.shape[0]:
        raise DimensionMismatch(
            f"u has length {u.shape[0]} but J has order {J.shape[0]}")
    try:
        a = float(raw_a)
    except TypeError:
        a_c = complex(raw_a)
        if a_c.imag != 0.0:
            raise NotHermitian("the corner entry a must be real") from None
        a = a_c.real
    if not (np.all(np.isfinite(J)) and np.all(np.isfinite(u)) and np.isfinite(a)):
        raise NonFiniteEntry("problem data contains NaN or infinite entries")

    if J.size:
        scale = max(1.0, float(np.max(np.abs(J))))
        asym = float(np.max(np.abs(J - J.conj().T)))
        if asym > _tol.scaled(_tol.HERM) * scale:
            raise NotHermitian(f"J is not Hermitian (max |J - J*| = {asym:.3e})")
        J = 0.5 * (J + J.conj().T)
        J[np.diag_indices_from(J)] = J.diagonal().real
    return BorderedPencil(_frozen(J), _frozen(u), a)


def assemble_A_and_H(p: BorderedPencil):
    """Return the bordered matrix A and the diagonal H = diag(1, ..., 1, -1).

    HA = A*H holds exactly: the last row of A is built by negating the
    conjugated last column.
    """
    m = p.J.shape[0]
    A = np.empty((m + 1, m + 1), dtype=complex)
    A[:m, :m] = p.J
    A[:m, m] = p.u
    A[m, :m] = -p.u.conj()
    A[m, m] = p.a
    H = np.eye(m + 1)
    H[m, m] = -1.0
    return A, H
