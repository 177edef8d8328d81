"""Brute-force checks that do not go through the secular root census.

* roots of the expanded characteristic polynomial by Aberth iteration,
* the eigenvalue curves nu_j(lambda) of the Hermitian matrix lambda H - HA,
* numerical ranks of (A - lambda I)^k by fully pivoted elimination.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from . import _tol
from .errors import OracleDivergence
from .jacobi import hermitian_eigenvalues
from .model import BorderedPencil, assemble_A_and_H
from .spectral import SpectralForm


def char_poly_coefficients(form: SpectralForm) -> np.ndarray:
    """Expanded p(x) = (x - a) prod(x - mu_j) + sum_j d_j prod_{k != j}(x - mu_k)."""
    poles = list(form.poles)
    coeffs = np.array([1.0, -form.shift])
    for mu in poles:
        coeffs = np.convolve(coeffs, [1.0, -mu])
    for j, dj in enumerate(form.residues):
        term = np.array([dj])
        for k, mu in enumerate(poles):
            if k != j:
                term = np.convolve(term, [1.0, -mu])
        coeffs[-term.shape[0]:] += term
    return coeffs


def _aberth(ratio, z, maxiter):
    """Aberth-Ehrlich iteration; ``ratio(z)`` returns p(z) / p'(z) elementwise."""
    for _ in range(maxiter):
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            r = ratio(z)
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            inv = 1.0 / diff
            np.fill_diagonal(inv, 0.0)
            w = r / (1.0 - r * inv.sum(axis=1))
        w = np.where(np.isfinite(w), w, 0.0)
        z = z - w
        if np.all(np.abs(w) <= 4.0 * np.finfo(float).eps * np.maximum(np.abs(z), 1e-300)):
            break
    return z


def _start_circle(coeffs, rng_seed):
    c = np.asarray(coeffs, dtype=complex)
    c = c / c[0]
    deg = c.shape[0] - 1
    center = -c[1] / deg
    shifted = np.poly1d(c)(np.poly1d([1.0, center]))
    sc = np.asarray(shifted.coeffs, dtype=complex)
    # Fujiwara bound on the root radius about the centroid
    radius = 2.0 * max(abs(sc[k] / sc[0]) ** (1.0 / k) for k in range(1, deg + 1))
    radius = max(radius, 1e-3)
    rng = np.random.default_rng(rng_seed)
    angles = 2.0 * np.pi * (np.arange(deg) + 0.25 + 0.1 * rng.random(deg)) / deg
    return center + radius * np.exp(1j * angles)


def aberth_roots(coeffs, maxiter=1000, rng_seed=12345):
    """All roots of a polynomial by simultaneous Aberth-Ehrlich iteration.

    Parameters
    ----------
    coeffs : array_like
        Coefficients, highest degree first, leading coefficient nonzero.

    Returns
    -------
    ndarray of complex
        The roots, in no particular order.

    Raises
    ------
    OracleDivergence
        The iteration cap was reached with residuals above
        ``1e-10 * sum_k |c_k| max(1, |z|)^k``.
    """
    c = np.asarray(coeffs, dtype=complex)
    c = c / c[0]
    if c.shape[0] == 1:
        return np.zeros(0, dtype=complex)
    dc = np.polyder(c)
    z = _aberth(lambda z: np.polyval(c, z) / np.polyval(dc, z), _start_circle(c, rng_seed), maxiter)
    scale = np.polyval(np.abs(c), np.maximum(np.abs(z), 1.0))
    resid = np.abs(np.polyval(c, z))
    if np.any(resid > _tol.scaled(1e-10) * scale):
        raise OracleDivergence(f"Aberth iteration stalled (max residual {resid.max():.3e})")
    return z


def char_poly_roots_oracle(form: SpectralForm, n=None, maxiter=1000) -> np.ndarray:
    """Eigenvalues of the reduced bordered matrix as the roots of p.

    p(x) = (x - a) prod(x - mu_j) + sum_j d_j prod_{k != j}(x - mu_k) is
    evaluated in this product form, never through expanded coefficients
    (the monomial basis loses digits when roots crowd the poles). The
    Aberth correction uses p / p' = q / (q' + q sum_j 1 / (x - mu_j)) with
    q(x) = x - a + sum_j d_j / (x - mu_j). Starting points lie on a circle
    of Fujiwara radius about the root centroid.

    Raises
    ------
    OracleDivergence
        Some iterate has |q| above ``1e-10`` times the size of its terms.
    """
    coeffs = char_poly_coefficients(form)
    if n is not None and n != coeffs.shape[0] - 1:
        raise ValueError(f"n = {n} but the form has degree {coeffs.shape[0] - 1}")
    mu = form.poles.astype(complex)
    d = form.residues
    a = form.shift

    def parts(z):
        inv = 1.0 / (z[:, None] - mu[None, :])
        terms = d[None, :] * inv
        q = z - a + terms.sum(axis=1)
        dq = 1.0 - (terms * inv).sum(axis=1)
        return q, dq, inv.sum(axis=1), np.abs(z) + abs(a) + np.abs(terms).sum(axis=1)

    def ratio(z):
        q, dq, s, _ = parts(z)
        return q / (dq + q * s)

    z = _aberth(ratio, _start_circle(coeffs, 12345), maxiter)
    with np.errstate(divide="ignore", invalid="ignore"):
        q, _, _, size = parts(z)
    if not np.all(np.abs(q) <= _tol.scaled(1e-10) * size):
        raise OracleDivergence("Aberth iteration stalled on the characteristic polynomial")
    return z


def dense_spectrum(p: BorderedPencil) -> np.ndarray:
    """Eigenvalues of the assembled A by a general dense eigensolver."""
    A, _ = assemble_A_and_H(p)
    return np.linalg.eigvals(A)


def det_char_poly(p: BorderedPencil, lam) -> complex:
    """det(lam I - A) by dense LU."""
    A, _ = assemble_A_and_H(p)
    return complex(np.linalg.det(lam * np.eye(A.shape[0]) - A))


def match_spectra(x, y):
    """Optimal one-to-one matching; returns the largest matched distance."""
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    if x.shape != y.shape:
        raise ValueError(f"spectra of different sizes {x.shape} and {y.shape}")
    if x.size == 0:
        return 0.0
    cost = np.abs(x[:, None] - y[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


@dataclass(frozen=True)
class NuCurveSample:
    """Eigenvalues of lambda H - HA at one grid point.

    ``nus`` are in matched (curve) order; ``matching[j]`` is the position of
    curve j in the ascending eigenvalue list at this point.
    """

    lam: float
    nus: np.ndarray
    matching: np.ndarray


def pencil_matrix(p: BorderedPencil, lam) -> np.ndarray:
    """The Hermitian matrix lambda H - HA."""
    A, H = assemble_A_and_H(p)
    return lam * H - H @ A


def nu_values(p: BorderedPencil, lam) -> np.ndarray:
    """Ascending eigenvalues of lambda H - HA (Jacobi)."""
    return hermitian_eigenvalues(pencil_matrix(p, lam))[::-1].copy()


def nu_curves(p: BorderedPencil, grid: Sequence[float]) -> List[NuCurveSample]:
    """Sample the nu-curves on a sorted grid and link them into continuous curves.

    Consecutive samples are linked by minimum-cost assignment on |nu - nu'|;
    the grid should be fine (step well below the smallest pole gap) for the
    links to follow the analytic curves.
    """
    samples = []
    prev = None
    for lam in grid:
        vals = nu_values(p, float(lam))
        if prev is None:
            perm = np.arange(vals.shape[0])
        else:
            cost = np.abs(prev[:, None] - vals[None, :])
            _, perm = linear_sum_assignment(cost)
        nus = vals[perm]
        samples.append(NuCurveSample(float(lam), nus, perm))
        prev = nus
    return samples


def _nearest_zero_nu(p, lam):
    vals = nu_values(p, lam)
    return vals[np.argmin(np.abs(vals))]


@dataclass(frozen=True)
class NuDerivativeCheck:
    numeric: float
    analytic: float
    agree: bool


def nu_derivative_check(p: BorderedPencil, s, lam_i: float) -> NuDerivativeCheck:
    """Compare the slope of the vanishing nu-curve with -(1 - g')/(1 + g').

    The numeric slope is a central difference with step 1e-5 (1 + |lambda|),
    Richardson-extrapolated once; agreement means relative gap <= 1e-4.
    """
    lam_i = float(lam_i)
    h = 1e-5 * (1.0 + abs(lam_i))

    def central(step):
        return (_nearest_zero_nu(p, lam_i + step) - _nearest_zero_nu(p, lam_i - step)) / (2.0 * step)

    d1, d2 = central(h), central(0.5 * h)
    numeric = float((4.0 * d2 - d1) / 3.0)
    dg = s._dg(lam_i) if s.m else 0.0
    analytic = -(1.0 - dg) / (1.0 + dg)
    agree = abs(numeric - analytic) <= 1e-4 * max(abs(analytic), 1e-12)
    return NuDerivativeCheck(numeric, float(analytic), bool(agree))


def nu_local_expansion(p: BorderedPencil, lam0: float, h=None, degree=4):
    """Local Taylor coefficients of the nu-curve vanishing at ``lam0``.

    Fits nu(lam0 + x) = c_0 + c_1 x + ... on a small symmetric stencil and
    returns ``(order, coefficients)`` where ``order`` is the first index whose
    coefficient is not negligible next to the higher ones. The sign of
    ``coefficients[order]`` is the sign characteristic of the block.
    """
    lam0 = float(lam0)
    if h is None:
        h = 2e-3 * (1.0 + abs(lam0))
    xs = h * np.linspace(-1.0, 1.0, 4 * degree + 1)
    ys = np.array([_nearest_zero_nu(p, lam0 + x) for x in xs])
    coeffs = np.polynomial.polynomial.polyfit(xs / h, ys, degree)
    coeffs = coeffs / h ** np.arange(degree + 1)
    # scaled magnitudes |c_k| h^k compare contributions on the stencil
    contrib = np.abs(coeffs) * h ** np.arange(degree + 1)
    floor = 1e-4 * contrib.max()
    order = next(k for k in range(degree + 1) if contrib[k] > floor)
    return order, coeffs


def _full_pivot_rank(M, cutoff):
    M = np.array(M, dtype=complex, copy=True)
    rows, cols = M.shape
    rank = 0
    for step in range(min(rows, cols)):
        sub = np.abs(M[step:, step:])
        i, j = np.unravel_index(np.argmax(sub), sub.shape)
        if sub[i, j] <= cutoff:
            break
        i += step
        j += step
        M[[step, i], :] = M[[i, step], :]
        M[:, [step, j]] = M[:, [j, step]]
        pivot = M[step, step]
        factors = M[step + 1:, step] / pivot
        M[step + 1:, step:] -= factors[:, None] * M[step, step:][None, :]
        rank += 1
    return rank


def jordan_rank_probe(p, lam, k: int) -> int:
    """Numerical rank of (A - lam I)^k.

    ``p`` is a :class:`BorderedPencil` or a square matrix. The pivot cutoff is
    ``1e-8 * max(1, |A - lam I|_max)^k``.
    """
    if k not in (1, 2, 3):
        raise ValueError("k must be 1, 2 or 3")
    A = assemble_A_and_H(p)[0] if isinstance(p, BorderedPencil) else np.asarray(p, dtype=complex)
    B = A - lam * np.eye(A.shape[0])
    Bk = np.linalg.matrix_power(B, k)
    base = max(1.0, float(np.max(np.abs(B))))
    return _full_pivot_rank(Bk, _tol.scaled(_tol.PROBE) * base ** k)


def jordan_block_size(p, lam) -> int:
    """Size of the single Jordan block at ``lam`` read off the rank sequence.

    For a nonderogatory matrix the ranks of (A - lam I)^k drop by one per
    power until the block is exhausted; returns 0 when lam is not an
    eigenvalue and -1 when the drops are inconsistent with a single block.
    """
    n = (p.n if isinstance(p, BorderedPencil) else np.asarray(p).shape[0])
    ranks = [n] + [jordan_rank_probe(p, lam, k) for k in (1, 2, 3)]
    drops = [ranks[i] - ranks[i + 1] for i in range(3)]
    size = 0
    for dr in drops:
        if dr == 1:
            size += 1
        elif dr == 0:
            break
        else:
            return -1
    if any(dr != 0 for dr in drops[size:]):
        return -1
    return size
