# coding: utf-8

# # Moving the corner entry
#
# As a grows every eigenvalue moves with slope 1 / (1 - g'(lambda)). The
# largest one follows a off to infinity while the rest settle just to the
# right of the poles.

# %%

from pathlib import Path

import numpy as np

from minkspec import (SecularFunction, asymptotic_check, eigenvalue_trajectories, emit_csv,
                      emit_svg, load_problem, to_spectral_form, trajectory_derivative)

HERE = Path(__file__).resolve().parent
OUT = HERE / "out"
OUT.mkdir(exist_ok=True)

form = load_problem(HERE / "data" / "example1.json")
pair_form = to_spectral_form(load_problem(HERE / "data" / "example2.json"))

# %%

# Example 2 over a in [-3, 3]: outside +-3 sqrt(3) / 2 all three eigenvalues
# are real; inside, two of them form a complex pair which closes up into the
# triple root at a = 0.

points = eigenvalue_trajectories(pair_form, -3.0, 3.0, 601)
emit_csv(points, OUT / "sweep_example2.csv")
emit_svg(points, OUT / "sweep_example2.svg", poles=[1.0, -1.0], title="eigenvalues against a")
labels = [p.case_label for p in points]
print({lab: labels.count(lab) for lab in sorted(set(labels))})

# %%

points = eigenvalue_trajectories(form, -1.0, 8.0, 901)
emit_csv(points, OUT / "sweep_example1.csv")
emit_svg(points, OUT / "sweep_example1.svg", poles=list(form.poles), title="eigenvalues against a")

# %%

# The slope formula against a finite difference at a = 10.

a, h = 10.0, 1e-3
pts = eigenvalue_trajectories(form, a - h, a + h, 3)
s = SecularFunction(form.with_shift(a))
for lam, lo, hi in zip(pts[1].eigenvalues.real, pts[0].eigenvalues.real, pts[2].eigenvalues.real):
    print(f"lambda = {lam:10.6f}  fd {(hi - lo) / (2 * h):+.6e}  formula {trajectory_derivative(s, lam):+.6e}")

# %%

report = asymptotic_check(form, 1e4)
for mu, lam, ok in report.pole_branches:
    print(f"mu = {mu}:  lambda - mu = {lam - mu:.3e}  {'ok' if ok else 'FAIL'}")
print("largest", report.large_branch)
