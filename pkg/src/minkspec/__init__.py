"""Spectral structure of bordered matrices A = [[J, u], [-u*, a]].

A is selfadjoint for the indefinite inner product given by
H = I (+) (-1). The package computes its eigenvalues, Jordan structure,
interlacing case, sign characteristic and canonical block list, and follows
all of these as the corner entry a varies.
"""

from .analysis import AnalysisOutput, VerificationReport, analyze, verify
from .errors import (AmbiguousSign, CanonicalViolation, ConvergenceFailure, CountMismatch,
                     DimensionMismatch, IoError, MinkspecError, NonFiniteEntry, NotHermitian,
                     NumericalError, OracleDivergence, ParseError, PoleEvaluation,
                     TangencyDerivative, Unclassifiable, ValidationError)
from .io import (emit_csv, emit_svg, gh_plot_data, load_problem, parse_problem,
                 serialize_problem)
from .jacobi import hermitian_eigendecomposition
from .model import BorderedPencil, EigenvalueRecord, assemble_A_and_H, validate_problem
from .observability import hautus_test, kalman_reduce
from .oracle import (char_poly_roots_oracle, jordan_rank_probe, nu_curves,
                     nu_derivative_check)
from .secular import SecularFunction, classify_interlacing, eval_g, solve_spectrum
from .signs import CanonicalForm, SignedBlock, assemble_canonical_form, assign_signs
from .spectral import SpectralForm, spectral_form, to_spectral_form
from .sweep import (CriticalValue, TrajectoryPoint, asymptotic_check, critical_a_values,
                    eigenvalue_trajectories, trajectory_derivative)

__version__ = "0.1.0"
