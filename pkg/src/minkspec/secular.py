"""Secular function f = h - g and the real/complex roots of the bordered matrix.

With poles mu_1 > ... > mu_m and residues d_j > 0,

    g(x) = -sum_j d_j / (x - mu_j),    h(x) = x - a,    f = h - g,

and the eigenvalues of A are the zeros of f. On every pole interval g' is
convex (each d_j / (x - mu_j)^2 is), so g' = 1 has at most two solutions per
interval. Those tangency points are the only places where f can turn, which
fixes the number of real roots in each interval before any root is computed.

Intervals are indexed from the right: 0 is (mu_1, inf), k is
(mu_{k+1}, mu_k), and m is (-inf, mu_m).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from . import _tol
from .errors import CountMismatch, PoleEvaluation, Unclassifiable
from .model import EigenvalueRecord
from .spectral import SpectralForm, gap_tolerance

CASE_LABELS = ("1a", "1b", "2", "3a", "3b", "4a", "4b", "4c", "4d")
REDUCIBLE = "REDUCIBLE"
DEGENERATE_SMALL = "DEGENERATE_SMALL"

_EPS = np.finfo(float).eps


class SecularFunction:
    """Evaluate g, h, f and derivatives for a :class:`SpectralForm`.

    Methods prefixed with an underscore skip the pole check; the root finders
    only call them at points strictly inside a pole interval.
    """

    def __init__(self, form: SpectralForm):
        self.form = form
        self.poles = np.asarray(form.poles, dtype=float)
        self.residues = np.asarray(form.residues, dtype=float)
        self.a = float(form.shift)

    @property
    def m(self):
        return self.poles.shape[0]

    @property
    def spread(self):
        return self.form.spread

    def with_shift(self, a):
        return SecularFunction(self.form.with_shift(a))

    def check_off_pole(self, lam):
        if self.m and np.min(np.abs(lam - self.poles)) <= 0.5 * gap_tolerance(self.poles):
            raise PoleEvaluation(f"lambda = {lam!r} is at a pole of the secular function")

    def _g(self, lam):
        return -math.fsum(self.residues / (lam - self.poles))

    def _dg(self, lam):
        return math.fsum(self.residues / (lam - self.poles) ** 2)

    def _d2g(self, lam):
        return -2.0 * math.fsum(self.residues / (lam - self.poles) ** 3)

    def _d3g(self, lam):
        return 6.0 * math.fsum(self.residues / (lam - self.poles) ** 4)

    def _f(self, lam):
        terms = self.residues / (lam - self.poles)
        return math.fsum([lam, -self.a, *terms])

    def _df(self, lam):
        return 1.0 - self._dg(lam)

    def g(self, lam):
        lam = float(lam)
        self.check_off_pole(lam)
        return self._g(lam)

    def h(self, lam):
        return float(lam) - self.a

    def f(self, lam):
        lam = float(lam)
        self.check_off_pole(lam)
        return self._f(lam)

    def g_array(self, x):
        """Vectorised g for plotting; no pole check, poles give inf/nan."""
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            return -np.sum(self.residues / (x[..., None] - self.poles), axis=-1)

    def f_complex(self, z):
        return z - self.a + np.sum(self.residues / (z - self.poles))

    def df_complex(self, z):
        return 1.0 - np.sum(self.residues / (z - self.poles) ** 2)

    def char_poly(self):
        """Coefficients (highest first) of p(x) = (x - a) prod(x - mu_j) + sum_j d_j prod_{k != j}(x - mu_k)."""
        p = np.polymul([1.0, -self.a], np.poly(self.poles)) if self.m else np.array([1.0, -self.a])
        for j in range(self.m):
            others = np.delete(self.poles, j)
            p = np.polyadd(p, self.residues[j] * np.poly(others))
        return np.asarray(p, dtype=float)

    def char_poly_value(self, lam):
        """p(lam) evaluated in product form (no expanded coefficients)."""
        lam = complex(lam)
        diffs = lam - self.poles
        value = (lam - self.a) * np.prod(diffs)
        for j in range(self.m):
            value += self.residues[j] * np.prod(np.delete(diffs, j))
        return value


def eval_g(s: SecularFunction, lam) -> float:
    """g(lam) = -sum d_j / (lam - mu_j), compensated; PoleEvaluation at a pole."""
    return s.g(lam)


def eval_g_derivatives(s: SecularFunction, lam) -> Tuple[float, float]:
    """(g'(lam), g''(lam)); g' is positive wherever it is defined."""
    lam = float(lam)
    s.check_off_pole(lam)
    return s._dg(lam), s._d2g(lam)


def bracketed_root(fun, dfun, lo, hi, sign_lo, maxiter=300):
    """Zero of ``fun`` in the open interval (lo, hi).

    ``sign_lo`` is the sign of ``fun`` just right of ``lo``; the sign just left
    of ``hi`` must be opposite. The endpoints are never evaluated, so they may
    be poles. Newton steps are taken when they stay inside the current bracket
    and shrink fast enough; otherwise the bracket is bisected.
    """
    x = 0.5 * (lo + hi)
    best_x, best_val = x, math.inf
    dx_old = hi - lo
    for _ in range(maxiter):
        fx = fun(x)
        if abs(fx) < best_val:
            best_x, best_val = x, abs(fx)
        if fx == 0.0:
            return float(x)
        if (fx > 0.0) == (sign_lo > 0):
            lo = x
        else:
            hi = x
        dfx = dfun(x)
        newton = x - fx / dfx if dfx != 0.0 and math.isfinite(dfx) else math.nan
        if lo < newton < hi and abs(newton - x) < 0.5 * abs(dx_old):
            x_new = newton
        else:
            x_new = 0.5 * (lo + hi)
        dx_old = x_new - x
        if x_new == x or abs(dx_old) <= 2.0 * _EPS * max(abs(x), abs(x_new)) or not (lo < x_new < hi):
            break
        x = x_new
    if fun(x) != 0.0 and abs(fun(x)) >= best_val:
        return float(best_x)
    return float(x)


@dataclass(frozen=True)
class CriticalPoint:
    """A solution of g'(t) = 1 on one pole interval.

    ``role`` describes what f does there: "max", "min", or "inflection" when
    the two critical points of an internal interval have collapsed into one.
    """

    t: float
    interval_index: int
    role: str


@dataclass(frozen=True)
class IntervalAnalysis:
    index: int
    lower: float
    upper: float
    monotonicity: str
    g_prime_min: Optional[float]
    tangency_points: Tuple[float, ...]
    real_roots: Tuple[Tuple[float, int], ...]

    @property
    def outer(self):
        return math.isinf(self.lower) or math.isinf(self.upper)

    @property
    def root_count(self):
        return sum(mult for _, mult in self.real_roots)


def _collapse_width(s: SecularFunction):
    spread = s.spread
    return _tol.scaled(_tol.COLLAPSE) * (spread if spread > 0 else 1.0)


def interval_critical_points(s: SecularFunction, k: int):
    """Critical points of f on interval ``k`` and, for internal intervals, min g'.

    Returns ``(points, g_prime_min)``.
    """
    m = s.m
    total = float(np.sum(s.residues))
    if k == 0:
        hi = s.poles[0] + math.sqrt(total) + 1.0
        t = bracketed_root(lambda x: s._dg(x) - 1.0, s._d2g, s.poles[0], hi, +1)
        return [CriticalPoint(t, 0, "min")], None
    if k == m:
        lo = s.poles[-1] - math.sqrt(total) - 1.0
        t = bracketed_root(lambda x: s._dg(x) - 1.0, s._d2g, lo, s.poles[-1], -1)
        return [CriticalPoint(t, m, "max")], None

    lo, hi = s.poles[k], s.poles[k - 1]
    c = bracketed_root(s._d2g, s._d3g, lo, hi, -1)
    g_min = s._dg(c)
    width = _collapse_width(s)
    if g_min < 1.0:
        t1 = bracketed_root(lambda x: s._dg(x) - 1.0, s._d2g, lo, c, +1)
        t2 = bracketed_root(lambda x: s._dg(x) - 1.0, s._d2g, c, hi, -1)
        if t2 - t1 <= width:
            return [CriticalPoint(c, k, "inflection")], g_min
        return [CriticalPoint(t1, k, "min"), CriticalPoint(t2, k, "max")], g_min
    # g' stays above 1; still collapsed if the would-be pair is narrower than width
    if g_min - 1.0 <= s._d3g(c) * width * width / 8.0:
        return [CriticalPoint(c, k, "inflection")], g_min
    return [], g_min


def tangency_tolerance(s: SecularFunction):
    return _tol.scaled(_tol.TANGENCY) * (1.0 + abs(s.a) + s.spread)


def analyze_intervals(s: SecularFunction) -> List[IntervalAnalysis]:
    """Certified real-root census of f on every pole interval.

    Roots are polished by safeguarded Newton inside brackets derived from the
    critical points; a critical value |f(t)| within the tangency tolerance is
    reported as a double (or, for collapsed points, triple) root at t.
    """
    m = s.m
    if m == 0:
        return []
    tau = tangency_tolerance(s)
    f, df = s._f, s._df
    out = []
    for k in range(m + 1):
        points, g_min = interval_critical_points(s, k)
        lower = -math.inf if k == m else float(s.poles[k])
        upper = math.inf if k == 0 else float(s.poles[k - 1])
        roots = []
        if k == 0:
            t = points[0].t
            ft = f(t)
            if abs(ft) <= tau:
                roots = [(t, 2)]
            elif ft < 0.0:
                right = max(s.a, t) + 1.0
                roots = [(bracketed_root(f, df, lower, t, +1), 1),
                         (bracketed_root(f, df, t, right, -1), 1)]
            monotone = "g' decreasing"
        elif k == m:
            t = points[0].t
            ft = f(t)
            if abs(ft) <= tau:
                roots = [(t, 2)]
            elif ft > 0.0:
                left = min(s.a, t) - 1.0
                roots = [(bracketed_root(f, df, left, t, -1), 1),
                         (bracketed_root(f, df, t, upper, +1), 1)]
            monotone = "g' increasing"
        else:
            monotone = "g' convex"
            if not points:
                roots = [(bracketed_root(f, df, lower, upper, +1), 1)]
            elif len(points) == 1:
                c = points[0].t
                if abs(f(c)) <= tau:
                    roots = [(c, 3)]
                else:
                    roots = [(bracketed_root(f, df, lower, upper, +1), 1)]
            else:
                t1, t2 = points[0].t, points[1].t
                f1, f2 = f(t1), f(t2)
                z1, z2 = abs(f1) <= tau, abs(f2) <= tau
                if z1 and z2:
                    c = bracketed_root(s._d2g, s._d3g, t1, t2, -1)
                    roots = [(c, 3)]
                elif z1:
                    roots = [(t1, 2), (bracketed_root(f, df, t2, upper, +1), 1)]
                elif z2:
                    roots = [(bracketed_root(f, df, lower, t1, +1), 1), (t2, 2)]
                elif f1 > 0.0:
                    roots = [(bracketed_root(f, df, t2, upper, +1), 1)]
                elif f2 < 0.0:
                    roots = [(bracketed_root(f, df, lower, t1, +1), 1)]
                else:
                    roots = [(bracketed_root(f, df, lower, t1, +1), 1),
                             (bracketed_root(f, df, t1, t2, -1), 1),
                             (bracketed_root(f, df, t2, upper, +1), 1)]
        out.append(IntervalAnalysis(
            index=k, lower=lower, upper=upper, monotonicity=monotone,
            g_prime_min=g_min, tangency_points=tuple(p.t for p in points),
            real_roots=tuple(sorted(roots, reverse=True))))
    return out


@dataclass(frozen=True)
class InterlacingReport:
    case_label: str
    hosting_interval: Optional[int]
    census: Tuple[int, ...]
    narrative: str


@dataclass(frozen=True)
class EigenStructure:
    """All n eigenvalues of the (reduced) bordered matrix.

    ``records`` lists real eigenvalues in decreasing order followed by the
    complex pair (upper half-plane member first), if any.
    """

    records: Tuple[EigenvalueRecord, ...]
    case_label: str
    complex_pair: Optional[complex]
    intervals: Tuple[IntervalAnalysis, ...] = field(default=(), repr=False)
    report: Optional[InterlacingReport] = field(default=None, repr=False)

    @property
    def n(self):
        return sum(r.algebraic_multiplicity for r in self.records)

    def eigenvalues(self):
        """Eigenvalues with multiplicity as a complex array."""
        vals = []
        for r in self.records:
            vals.extend([r.value] * r.algebraic_multiplicity)
        return np.array(vals, dtype=complex)

    def real_records(self):
        return [r for r in self.records if r.is_real]


def _deflate_pair(s: SecularFunction, real_roots):
    """Recover the complex pair by dividing p by the real roots."""
    coeffs = s.char_poly()
    for r in sorted(real_roots, key=abs, reverse=True):
        coeffs, _ = np.polydiv(coeffs, [1.0, -r])
    if coeffs.shape[0] != 3:
        raise CountMismatch("deflation did not leave a quadratic")
    c0, c1, c2 = coeffs
    disc = c1 * c1 - 4.0 * c0 * c2
    if not disc < 0.0:
        raise CountMismatch(
            f"{len(real_roots)} real roots found but the deflated quadratic has real roots "
            f"(discriminant {disc:.3e})")
    z = complex(-c1 / (2.0 * c0), math.sqrt(-disc) / (2.0 * abs(c0)))
    # polish on f itself; keep the deflated value if Newton wanders off
    w = z
    for _ in range(60):
        step = s.f_complex(w) / s.df_complex(w)
        w = w - step
        if abs(step) <= 4.0 * _EPS * abs(w):
            break
    if np.isfinite(w) and w.imag > 0.0 and abs(s.f_complex(w)) <= abs(s.f_complex(z)):
        z = w
    return complex(z.real, abs(z.imag))


def solve_spectrum(s: SecularFunction, n: Optional[int] = None) -> EigenStructure:
    """All eigenvalues of the bordered matrix with poles/residues of ``s``.

    Raises
    ------
    CountMismatch
        The certified real roots plus complex pairs do not account for n.
    """
    m = s.m
    if n is None:
        n = m + 1
    if n != m + 1:
        raise CountMismatch(f"n = {n} but the secular function has {m} poles")
    if m == 0:
        rec = EigenvalueRecord(complex(s.a), 1, 1, True, None)
        return EigenStructure((rec,), DEGENERATE_SMALL, None, (), None)

    intervals = analyze_intervals(s)
    records = []
    real_roots = []
    for iv in intervals:
        for value, mult in iv.real_roots:
            records.append(EigenvalueRecord(complex(value), mult, mult, True, iv.index))
            real_roots.extend([value] * mult)
    records.sort(key=lambda r: -r.value.real)
    count = len(real_roots)
    pair = None
    if count == n - 2:
        pair = _deflate_pair(s, real_roots)
        records.append(EigenvalueRecord(pair, 1, 1, False, None))
        records.append(EigenvalueRecord(pair.conjugate(), 1, 1, False, None))
    elif count != n:
        raise CountMismatch(f"found {count} real roots for n = {n}")
    structure = EigenStructure(tuple(records), "", pair, tuple(intervals), None)
    report = classify_interlacing(structure, s)
    return EigenStructure(tuple(records), report.case_label, pair, tuple(intervals), report)


def _interval_of(s: SecularFunction, x):
    return int(np.sum(s.poles > x))


def classify_interlacing(e: EigenStructure, s: SecularFunction) -> InterlacingReport:
    """Assign one of the labels 1a, 1b, 2, 3a, 3b, 4a, 4b, 4c, 4d.

    The census is rebuilt from the eigenvalues' positions relative to the
    poles, not copied from the interval analysis, and must match one of the
    admissible interlacing patterns.
    """
    m = s.m
    if m == 0:
        return InterlacingReport(DEGENERATE_SMALL, None, (), "no poles: the single eigenvalue is a")
    census = [0] * (m + 1)
    members = [[] for _ in range(m + 1)]
    for r in e.records:
        if not r.is_real:
            continue
        k = _interval_of(s, r.value.real)
        if r.interval_index is not None and r.interval_index != k:
            raise Unclassifiable(
                f"eigenvalue {r.value.real!r} recorded in interval {r.interval_index} lies in {k}")
        census[k] += r.algebraic_multiplicity
        members[k].append(r)
    minimal = [0 if k in (0, m) else 1 for k in range(m + 1)]
    extra = [k for k in range(m + 1) if census[k] != minimal[k]]
    for k in range(m + 1):
        allowed = (0, 2) if k in (0, m) else (1, 3)
        if census[k] not in allowed:
            raise Unclassifiable(f"interval {k} holds {census[k]} real eigenvalues")
    pair = any(not r.is_real for r in e.records)

    if pair:
        if extra:
            raise Unclassifiable("complex pair together with extra real eigenvalues")
        return InterlacingReport("2", None, tuple(census),
                                 "one complex pair, one eigenvalue in every internal interval")
    if len(extra) != 1:
        raise Unclassifiable(f"extra eigenvalues spread over intervals {extra}")
    k = extra[0]
    host = sorted(members[k], key=lambda r: r.value.real)
    sizes = [r.algebraic_multiplicity for r in host]
    if k == m:
        label = "1b" if sizes == [2] else "1a"
        text = "two extra eigenvalues below the smallest pole"
    elif k == 0:
        label = "3b" if sizes == [2] else "3a"
        text = "two extra eigenvalues above the largest pole"
    else:
        if sizes == [3]:
            label = "4d"
        elif sizes == [1, 1, 1]:
            label = "4a"
        elif sizes == [2, 1]:
            label = "4b"
        elif sizes == [1, 2]:
            label = "4c"
        else:
            raise Unclassifiable(f"interval {k} multiplicities {sizes}")
        text = f"three eigenvalues between mu_{k + 1} and mu_{k}"
    if label in ("1a", "3a") and sizes != [1, 1]:
        raise Unclassifiable(f"outer interval {k} multiplicities {sizes}")
    return InterlacingReport(label, k, tuple(census), text)
