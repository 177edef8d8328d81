# coding: utf-8

# # Signs of the eigenvalues
#
# Each real eigenvalue of an H-selfadjoint matrix carries a sign +1 or -1.
# With one negative square in H at most one real eigenvalue (or one
# nontrivial block) can be "negative". One way to read the sign: the
# Hermitian matrix lambda H - HA has real eigenvalues nu_j(lambda); at an
# eigenvalue of A one of those curves crosses zero, and the sign is the
# sign of its first nonvanishing derivative there.

# %%

from pathlib import Path

import numpy as np

from minkspec import SecularFunction, analyze, critical_a_values, load_problem
from minkspec.oracle import nu_derivative_check, nu_local_expansion

HERE = Path(__file__).resolve().parent
form = load_problem(HERE / "data" / "example1.json")

# %%

# Simple eigenvalues: the sign is sign(g'(lambda) - 1), i.e. whether g is
# steeper than the line where they cross.

for a in (0.0, 1.0, 6.5):
    out = analyze(form.with_shift(a))
    print(f"a = {a:<4} case {out.case_label:>2}  signs (largest first): {out.sign_string()}")

# %%

# The formula against the curves themselves, at a = 0.

shifted = form.with_shift(0.0)
s = SecularFunction(shifted)
pencil = shifted.to_pencil()
for z in analyze(shifted).eigenvalues():
    chk = nu_derivative_check(pencil, s, z.real)
    print(f"lambda = {z.real:.6f}  nu' numeric {chk.numeric:+.6f}  formula {chk.analytic:+.6f}")

# %%

# At a critical shift two eigenvalues merge into a 2x2 Jordan block. The
# vanishing nu-curve then touches zero quadratically and the block sign is
# the sign of its curvature, which works out to sign(g''(t)). Geometrically
# the block is positive when g stays above h around the touching point.

for c in critical_a_values(form):
    shifted = form.with_shift(c.a_star)
    out = analyze(shifted)
    (block,) = [b for b in out.blocks if b.block_type == 3]
    order, coeffs = nu_local_expansion(shifted.to_pencil(), c.tangency_point)
    g2 = SecularFunction(shifted)._d2g(c.tangency_point)
    print(f"case {c.resulting_case}: epsilon {block.epsilon:+d}   nu'' / 2 = {coeffs[2]:+.4f}   g'' = {g2:+.4f}")

# %%

# An independent reading through a Jordan chain: with (A - t) x0 = 0 and
# (A - t) x1 = x0 the number <H x1, x0> has the sign of the block.

c = critical_a_values(form)[0]
A = form.with_shift(c.a_star).to_pencil().A
H = np.diag([1.0, 1.0, 1.0, 1.0, -1.0])
B = A - c.tangency_point * np.eye(5)
x0 = np.linalg.svd(B)[2][-1].conj()
x1 = np.linalg.lstsq(B, x0, rcond=None)[0]
print("<H x1, x0> =", np.vdot(x0, H @ x1).real)
