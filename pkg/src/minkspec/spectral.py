"""Pole/residue form of the bordered problem.

With V*JV = diag(mu) the secular data are the poles mu_j and the residues
d_j = |(V*u)_j|^2. Numerically coincident poles are merged and vanishing
residues are dropped; the eigenvalues lost that way are unobservable and are
kept in ``detached``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _tol
from .errors import DimensionMismatch, NonFiniteEntry, ValidationError
from .jacobi import hermitian_eigendecomposition
from .model import BorderedPencil, validate_problem


def _frozen(values):
    arr = np.array(values, dtype=float).reshape(-1)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class SpectralForm:
    """Poles (strictly decreasing), positive residues and the shift a.

    ``detached`` holds eigenvalues of J that do not appear as poles (they are
    eigenvalues of A in their own right); ``dropped`` is the residue mass that
    was discarded with them.
    """

    poles: np.ndarray
    residues: np.ndarray
    shift: float = 0.0
    detached: np.ndarray = ()
    dropped: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "poles", _frozen(self.poles))
        object.__setattr__(self, "residues", _frozen(self.residues))
        object.__setattr__(self, "detached", _frozen(self.detached))
        object.__setattr__(self, "shift", float(self.shift))
        object.__setattr__(self, "dropped", float(self.dropped))

    @property
    def m(self):
        return self.poles.shape[0]

    @property
    def n(self):
        """Order of the reduced bordered matrix (poles + 1)."""
        return self.m + 1

    @property
    def observable(self):
        return self.detached.shape[0] == 0

    @property
    def spread(self):
        return float(self.poles[0] - self.poles[-1]) if self.m else 0.0

    def with_shift(self, a):
        return SpectralForm(self.poles, self.residues, a, self.detached, self.dropped)

    def reduced(self):
        """The observable part alone (detached eigenvalues removed)."""
        return SpectralForm(self.poles, self.residues, self.shift)

    def to_pencil(self) -> BorderedPencil:
        """A diagonal pencil realising this form, detached eigenvalues last."""
        mu = np.concatenate([self.poles, self.detached])
        u = np.concatenate([np.sqrt(self.residues), np.zeros(self.detached.shape[0])])
        return validate_problem(np.diag(mu), u, self.shift)

    def __eq__(self, other):
        if not isinstance(other, SpectralForm):
            return NotImplemented
        return (self.shift == other.shift and self.dropped == other.dropped
                and np.array_equal(self.poles, other.poles)
                and np.array_equal(self.residues, other.residues)
                and np.array_equal(self.detached, other.detached))

    __hash__ = None


def gap_tolerance(mu):
    mu = np.asarray(mu, dtype=float)
    spread = float(mu.max() - mu.min()) if mu.size else 0.0
    return _tol.scaled(_tol.GAP) * max(1.0, spread)


def clusters(mu):
    """Index ranges of runs of descending ``mu`` chained within the merging gap."""
    tau_gap = gap_tolerance(mu)
    runs = []
    i = 0
    while i < len(mu):
        j = i + 1
        while j < len(mu) and mu[j - 1] - mu[j] <= tau_gap:
            j += 1
        runs.append((i, j))
        i = j
    return runs


def residue_tolerance(norm2):
    return _tol.scaled(_tol.OBS) * max(1.0, norm2)


def _reduce(mu, d, norm2):
    """Merge clustered poles and drop tiny residues; mu must be descending."""
    tau_obs = residue_tolerance(norm2)
    poles, residues, detached = [], [], []
    dropped = 0.0
    for i, j in clusters(mu):
        cluster = mu[i:j]
        weight = float(np.sum(d[i:j]))
        if weight > tau_obs:
            poles.append(float(np.mean(cluster)))
            residues.append(weight)
            detached.extend(cluster[1:])
        else:
            detached.extend(cluster)
            dropped += weight
    return poles, residues, sorted(detached, reverse=True), dropped


def to_spectral_form(p: BorderedPencil) -> SpectralForm:
    """Diagonalise J and return the merged pole/residue data of the pencil."""
    V, mu = hermitian_eigendecomposition(p.J)
    if mu.size == 0:
        return SpectralForm([], [], p.a)
    w = V.conj().T @ p.u
    d = np.abs(w) ** 2
    poles, residues, detached, dropped = _reduce(mu, d, float(np.sum(np.abs(p.u) ** 2)))
    return SpectralForm(poles, residues, p.a, detached, dropped)


def spectral_form(mu, d, a=0.0) -> SpectralForm:
    """Validate user-supplied poles and residues.

    ``mu`` must be strictly decreasing and ``d`` positive. Residues that are
    numerically zero and poles closer than the merging gap are reduced exactly
    as :func:`to_spectral_form` would.
    """
    mu = np.asarray(mu, dtype=float).reshape(-1)
    d = np.asarray(d, dtype=float).reshape(-1)
    if mu.shape != d.shape:
        raise DimensionMismatch(f"mu has {mu.size} entries but d has {d.size}")
    if not (np.all(np.isfinite(mu)) and np.all(np.isfinite(d)) and np.isfinite(a)):
        raise NonFiniteEntry("spectral data contains NaN or infinite entries")
    if np.any(np.diff(mu) >= 0.0):
        raise ValidationError("mu must be strictly decreasing")
    if np.any(d <= 0.0):
        raise ValidationError("residues d must be positive")
    poles, residues, detached, dropped = _reduce(mu, d, float(np.sum(d)))
    return SpectralForm(poles, residues, float(a), detached, dropped)
