# coding: utf-8

# # A Jordan block of order three
#
# Two symmetric poles at +1 and -1 with equal weight 1/2 and a = 0 give
# p(lambda) = lambda^3: all three eigenvalues sit at 0 in a single block.

# %%

from pathlib import Path

import numpy as np

from minkspec import analyze, critical_a_values, jordan_rank_probe, load_problem, to_spectral_form
from minkspec.oracle import nu_local_expansion

HERE = Path(__file__).resolve().parent
pencil = load_problem(HERE / "data" / "example2.json")
print(pencil.A.real.round(6))

# %%

out = analyze(pencil)
print("case", out.case_label)
for b in out.blocks:
    print("block type", b.block_type, "size", b.size, "at", b.eigenvalue)

# %%

# The rank of (A - 0)^k drops by exactly one per power: one block of size 3.

print([jordan_rank_probe(pencil, 0.0, k) for k in (1, 2, 3)])

# %%

# The nu-curve through zero is cubic there, with positive leading
# coefficient.

order, coeffs = nu_local_expansion(pencil, 0.0)
print("order", order, "coefficient", coeffs[order])

# %%

# a = 0 is not the only special shift for this pair of poles: the outer
# intervals have their own tangencies at a = -+3 sqrt(3) / 2.

for c in critical_a_values(to_spectral_form(pencil)):
    print(f"a* = {c.a_star:+.6f}  t = {c.tangency_point:+.6f}  {c.resulting_case}")
print(1.5 * np.sqrt(3.0))
