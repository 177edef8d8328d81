"""The shift a as a parameter.

Tangencies of h(x) = x - a with g happen exactly where g'(t) = 1, and the
shift that produces each of them is a = t - g(t). Between two consecutive
critical shifts the interlacing case does not change.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment

from . import _tol
from .errors import NumericalError, TangencyDerivative
from .secular import SecularFunction, interval_critical_points, solve_spectrum
from .spectral import SpectralForm


@dataclass(frozen=True)
class CriticalValue:
    a_star: float
    tangency_point: float
    interval_index: int
    resulting_case: str


@dataclass(frozen=True)
class TrajectoryPoint:
    """Eigenvalues at one shift, listed in branch order.

    Branch ``j`` at one sample continues branch ``j`` at the previous one.
    Detached eigenvalues (constant in a) come last.
    """

    a: float
    eigenvalues: np.ndarray
    case_label: str


def _resulting_case(k, m, role):
    if k == 0:
        return "3b"
    if k == m:
        return "1b"
    return {"min": "4b", "max": "4c", "inflection": "4d"}[role]


def critical_a_values(form: SpectralForm) -> List[CriticalValue]:
    """Every shift at which the canonical form degenerates, sorted by a.

    The shift stored in ``form`` is ignored. Outer intervals contribute one
    tangency each (cases 1b and 3b); an internal interval contributes none,
    a 4b/4c pair, or a single collapsed 4d point.
    """
    s = SecularFunction(form.reduced().with_shift(0.0))
    m = s.m
    out = []
    for k in range(m + 1 if m else 0):
        points, _ = interval_critical_points(s, k)
        for p in points:
            a_star = p.t - s._g(p.t)
            out.append(CriticalValue(float(a_star), float(p.t), k, _resulting_case(k, m, p.role)))
    out.sort(key=lambda c: c.a_star)
    return out


def _solve_at(s: SecularFunction, a, detached):
    try:
        e = solve_spectrum(s.with_shift(a))
    except NumericalError as exc:
        raise type(exc)(f"at a = {a!r}: {exc}") from exc
    values = np.concatenate([e.eigenvalues(), np.asarray(detached, dtype=complex)])
    return values, e.case_label


def _link(prev, values):
    cost = np.abs(prev[:, None] - values[None, :])
    _, cols = linear_sum_assignment(cost)
    return values[cols]


def eigenvalue_trajectories(form: SpectralForm, a_min, a_max, steps) -> List[TrajectoryPoint]:
    """Sample the spectrum at ``steps`` equally spaced shifts in [a_min, a_max].

    Consecutive samples are linked into branches by minimum-cost matching in
    the complex plane. When the interlacing case changes between two samples
    one extra solve at the midpoint is used to bridge the link; it is not
    part of the returned list.

    Raises
    ------
    ValueError
        ``a_min >= a_max`` or ``steps < 2``.
    NumericalError
        Propagated from the solver, with the offending shift in the message.
    """
    a_min, a_max, steps = float(a_min), float(a_max), int(steps)
    if not a_min < a_max:
        raise ValueError("a_min must be smaller than a_max")
    if steps < 2:
        raise ValueError("steps must be at least 2")
    s = SecularFunction(form.reduced())
    detached = form.detached
    points = []
    prev, prev_label, prev_a = None, None, None
    for a in np.linspace(a_min, a_max, steps):
        a = float(a)
        values, label = _solve_at(s, a, detached)
        if prev is not None:
            if label != prev_label:
                mid, _ = _solve_at(s, 0.5 * (a + prev_a), detached)
                prev = _link(prev, mid)
            values = _link(prev, values)
        points.append(TrajectoryPoint(a, values, label))
        prev, prev_label, prev_a = values, label, a
    return points


def trajectory_derivative(s: SecularFunction, lam) -> float:
    """d lambda / d a = 1 / (1 - g'(lambda)) along a simple real branch.

    Raises
    ------
    TangencyDerivative
        |g'(lambda) - 1| <= 1e-9, where the branch has a vertical tangent.
    """
    lam = float(lam)
    if s.m == 0:
        return 1.0
    s.check_off_pole(lam)
    gap = 1.0 - s._dg(lam)
    if abs(gap) <= _tol.scaled(_tol.SIGN):
        raise TangencyDerivative(f"g'({lam!r}) = 1 to within {abs(gap):.1e}")
    return 1.0 / gap


@dataclass(frozen=True)
class AsymptoticReport:
    """Outcome of :func:`asymptotic_check`.

    ``pole_branches`` holds ``(mu_j, lambda, ok)`` with ``ok`` meaning
    ``mu_j < lambda < mu_j + bound``; ``large_branch`` is ``(lambda, ok)``
    for the eigenvalue that follows a.
    """

    a: float
    bound: float
    pole_branches: Tuple[Tuple[float, float, bool], ...]
    large_branch: Tuple[float, bool]
    window: Tuple[float, float]

    @property
    def ok(self):
        return self.large_branch[1] and all(b[2] for b in self.pole_branches)


def asymptotic_check(form: SpectralForm, a_large) -> AsymptoticReport:
    """Check the large-a picture: n - 1 eigenvalues just right of the poles.

    For large a the eigenvalue in (mu_j, mu_{j-1}) sits at about
    mu_j + d_j / a, so the bound used is C / a with C = 2 sum_j d_j. One
    eigenvalue must lie in [a - sum d_j / (a - mu_1) - 1, a + 1].

    Raises
    ------
    ValueError
        ``a_large < 10 (1 + |mu_1| + sum d_j)`` when there are poles.
    """
    a = float(a_large)
    red = form.reduced()
    total = float(np.sum(red.residues))
    if red.m and a < 10.0 * (1.0 + abs(red.poles[0]) + total):
        raise ValueError("a_large is too small for the asymptotic regime")
    e = solve_spectrum(SecularFunction(red.with_shift(a)))
    values = e.eigenvalues()
    if np.any(np.abs(values.imag) > 0):
        raise NumericalError(f"non-real eigenvalue at a = {a!r}")
    lams = np.sort(values.real)[::-1]
    bound = 2.0 * total / a
    shift = total / (a - red.poles[0]) if red.m else 0.0
    lo, hi = float(a - shift - 1.0), a + 1.0
    top = float(lams[0])
    large = (top, bool(lo <= top <= hi))
    branches = []
    for mu, lam in zip(red.poles, lams[1:]):
        branches.append((float(mu), float(lam), bool(mu < lam < mu + bound)))
    return AsymptoticReport(a, bound, tuple(branches), large, (lo, hi))


def branch_slopes(points: List[TrajectoryPoint]) -> Optional[np.ndarray]:
    """Central-difference slopes of the real parts at the interior samples."""
    if len(points) < 3:
        return None
    a = np.array([p.a for p in points])
    vals = np.array([p.eigenvalues.real for p in points])
    return (vals[2:] - vals[:-2]) / (a[2:] - a[:-2])[:, None]
