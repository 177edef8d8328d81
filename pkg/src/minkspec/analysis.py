"""End-to-end analysis of one problem and the oracle cross-check suite."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from . import _tol
from .model import BorderedPencil, EigenvalueRecord
from .observability import ObservabilityReport, report_for
from .oracle import (char_poly_roots_oracle, dense_spectrum, jordan_block_size,
                     match_spectra, nu_derivative_check, nu_local_expansion,
                     nu_values)
from .secular import REDUCIBLE, EigenStructure, SecularFunction, solve_spectrum
from .signs import CanonicalForm, assemble_canonical_form, assign_signs, sign_census_violations
from .spectral import SpectralForm, to_spectral_form

Problem = Union[BorderedPencil, SpectralForm]

# matching tolerance for the oracle comparison by largest multiplicity present
_MATCH_TOL = {1: 1e-8, 2: 1e-6, 3: 1e-4}


def as_spectral_form(problem: Problem) -> SpectralForm:
    if isinstance(problem, BorderedPencil):
        return to_spectral_form(problem)
    if isinstance(problem, SpectralForm):
        return problem
    raise TypeError(f"expected BorderedPencil or SpectralForm, got {type(problem).__name__}")


@dataclass(frozen=True)
class AnalysisOutput:
    """Everything :func:`analyze` computes for one problem.

    ``records`` covers the whole matrix: the reduced bordered part first,
    then detached eigenvalues (flagged ``detached=True``). ``case_label`` is
    REDUCIBLE for unobservable input; the label of the reduced problem is in
    ``reduced_case_label`` either way.
    """

    observability: ObservabilityReport
    records: Tuple[EigenvalueRecord, ...]
    case_label: str
    reduced_case_label: str
    blocks: tuple
    canonical_valid: bool
    diagnostics: Dict[str, float] = field(default_factory=dict)
    structure: Optional[EigenStructure] = field(default=None, repr=False, compare=False)
    canonical: Optional[CanonicalForm] = field(default=None, repr=False, compare=False)

    @property
    def n(self):
        return sum(r.algebraic_multiplicity for r in self.records)

    def eigenvalues(self):
        vals = []
        for r in self.records:
            vals.extend([r.value] * r.algebraic_multiplicity)
        return np.array(vals, dtype=complex)

    def sign_string(self):
        """Type-1 signs as "+"/"-" by decreasing eigenvalue."""
        return " ".join("+" if e > 0 else "-" for e in self.canonical.signs()) if self.canonical else ""


def _diagnostics(s: SecularFunction, e: EigenStructure):
    coeff_scale = float(np.sum(np.abs(s.char_poly())))
    resid = 0.0
    for lam in e.eigenvalues():
        scale = coeff_scale * max(1.0, abs(lam)) ** s.m
        resid = max(resid, abs(s.char_poly_value(lam)) / scale)
    return {
        "tolerance_factor": _tol.factor(),
        "tau_gap": _tol.scaled(_tol.GAP) * max(1.0, s.spread),
        "tau_tangency": _tol.scaled(_tol.TANGENCY) * (1.0 + abs(s.a) + s.spread),
        "tau_sign": _tol.scaled(_tol.SIGN),
        "relative_char_poly_residual": resid,
    }


def analyze(problem: Problem) -> AnalysisOutput:
    """Observability, spectrum, interlacing case, signs and canonical form.

    Raises
    ------
    NumericalError
        Any failure of the solver, the classifier or the canonical checks.
    """
    form = as_spectral_form(problem)
    obs = report_for(form)
    s = SecularFunction(obs.reduced)
    e = solve_spectrum(s)
    blocks = assign_signs(e, s)
    label = e.case_label if obs.observable else REDUCIBLE
    n = e.n + obs.unobservable_dimension
    canonical = assemble_canonical_form(blocks, obs.detached_spectrum, label, n=n)
    detached = tuple(EigenvalueRecord(complex(float(x)), 1, 1, True, None, detached=True)
                     for x in obs.detached_spectrum)
    return AnalysisOutput(
        observability=obs,
        records=tuple(e.records) + detached,
        case_label=label,
        reduced_case_label=e.case_label,
        blocks=tuple(canonical.blocks),
        canonical_valid=True,
        diagnostics=_diagnostics(s, e),
        structure=e,
        canonical=canonical,
    )


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class VerificationReport:
    checks: Tuple[Check, ...]

    @property
    def passed(self):
        return all(c.passed for c in self.checks)


def verify(problem: Problem) -> VerificationReport:
    """Cross-check :func:`analyze` against the brute-force oracles.

    Runs: Aberth roots of the expanded polynomial, a dense eigensolver on the
    assembled matrix, zeros of the nu-curves at every real eigenvalue,
    nu-slope against sign(g' - 1) at simple eigenvalues (where
    |g' - 1| > 0.05), the local order and leading coefficient of the
    vanishing nu-curve at multiple eigenvalues, Jordan block sizes from rank
    probes, and the sign census. Solver failures propagate.
    """
    form = as_spectral_form(problem)
    pencil = problem if isinstance(problem, BorderedPencil) else form.to_pencil()
    out = analyze(form)
    red = out.observability.reduced
    s = SecularFunction(red)
    e = out.structure
    checks = []

    mult = max((r.algebraic_multiplicity for r in e.records), default=1)
    scale = max(1.0, float(np.max(np.abs(e.eigenvalues()))))
    tol = _MATCH_TOL[mult] * scale

    gap = match_spectra(e.eigenvalues(), char_poly_roots_oracle(red))
    checks.append(Check("polynomial roots", gap <= tol, f"max matched distance {gap:.3e}"))
    gap = match_spectra(out.eigenvalues(), dense_spectrum(pencil))
    checks.append(Check("dense eigensolver", gap <= tol, f"max matched distance {gap:.3e}"))

    worst = 0.0
    for r in out.records:
        if r.is_real:
            worst = max(worst, float(np.min(np.abs(nu_values(pencil, r.value.real)))))
    checks.append(Check("nu-curve zeros", worst <= 1e-7 * scale, f"largest |nu| {worst:.3e}"))

    if s.m:
        signs = {round(b.eigenvalue.real, 12): b.epsilon for b in out.blocks
                 if b.block_type == 1 and not b.detached}
        bad, tested = [], 0
        for r in e.real_records():
            lam = r.value.real
            if r.algebraic_multiplicity == 1:
                if abs(s._dg(lam) - 1.0) <= 0.05:
                    continue
                tested += 1
                chk = nu_derivative_check(pencil, s, lam)
                numeric_sign = 1 if chk.numeric > 0 else -1
                if numeric_sign != signs[round(lam, 12)] or not chk.agree:
                    bad.append(lam)
            else:
                tested += 1
                order, coeffs = nu_local_expansion(pencil, lam)
                block = next(b for b in out.blocks if b.size == r.algebraic_multiplicity)
                if order != r.algebraic_multiplicity or (1 if coeffs[order] > 0 else -1) != block.epsilon:
                    bad.append(lam)
        checks.append(Check("signs against nu-curves", not bad,
                            f"{tested} eigenvalues tested" + (f", mismatches at {bad}" if bad else "")))

    wrong = []
    for r in out.records:
        if r.is_real and not r.detached:
            size = jordan_block_size(pencil, r.value.real)
            if size != r.jordan_block_size:
                wrong.append((r.value.real, size))
    checks.append(Check("Jordan block sizes", not wrong,
                        "rank probes agree" if not wrong else f"probe sizes {wrong}"))

    vals = out.eigenvalues()
    sym = match_spectra(vals, vals.conj())
    checks.append(Check("conjugate symmetry", sym <= tol, f"max distance {sym:.3e}"))
    problems = sign_census_violations(e, out.blocks)
    checks.append(Check("sign census", not problems, "; ".join(problems) or "consistent"))
    return VerificationReport(tuple(checks))
