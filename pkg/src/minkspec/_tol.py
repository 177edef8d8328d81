"""Numerical thresholds.

Every threshold is a base value multiplied by the positive factor read from
the ``MINKSPEC_TOL`` environment variable (default 1). The factor is read at
call time so tests and the command line can rescale without reloading.
"""

import os

HERM = 1e-10          # Hermitian asymmetry, relative to max(1, |J|_max)
OBS = 1e-12           # residue cutoff, relative to max(1, |u|^2)
GAP = 1e-10           # pole merging, relative to max(1, spread of poles)
RANK = 1e-10          # stacked Hautus matrix singular value cutoff
TANGENCY = 1e-8       # |f(t)| at a critical point, relative to 1 + |a| + spread
COLLAPSE = 1e-6       # t2 - t1 below which the two critical points merge
SIGN = 1e-9           # g' - 1 (or g'') too close to zero to read a sign
PROBE = 1e-8          # Jordan rank probe pivot cutoff
JACOBI_THRESHOLD = 1e-14
JACOBI_SWEEPS = 30


def factor():
    raw = os.environ.get("MINKSPEC_TOL", "").strip()
    if not raw:
        return 1.0
    try:
        value = float(raw)
    except ValueError:
        raise ValueError(f"MINKSPEC_TOL must be a positive number, got {raw!r}") from None
    if not value > 0.0 or value == float("inf"):
        raise ValueError(f"MINKSPEC_TOL must be a positive number, got {raw!r}")
    return value


def scaled(base):
    return base * factor()
