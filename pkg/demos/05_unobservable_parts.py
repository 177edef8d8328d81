# coding: utf-8

# # Unobservable directions
#
# If J has a repeated eigenvalue, or u is orthogonal to one of its
# eigenvectors, part of J never talks to the border. Those eigenvalues of J
# stay eigenvalues of A, and the rest of the spectrum comes from a smaller
# bordered problem.

# %%

import numpy as np

from minkspec import analyze, hautus_test, validate_problem

rng = np.random.default_rng(0)
z = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
q, _ = np.linalg.qr(z)
J = q @ np.diag([2.0, 2.0, 0.5, -1.0]) @ q.conj().T
u = q @ np.array([1.0, 1.0, 0.0, 0.7])
pencil = validate_problem(J, u, 0.3)

# %%

print("Hautus failures at", hautus_test(J, u).failing())
out = analyze(pencil)
print("case", out.case_label, "(observable part:", out.reduced_case_label + ")")
print("detached", out.observability.detached_spectrum)
print("reduced poles", out.observability.reduced.poles, "residues", out.observability.reduced.residues)

# %%

ours = np.sort_complex(out.eigenvalues())
dense = np.sort_complex(np.linalg.eigvals(pencil.A))
print(np.max(np.abs(ours - dense)))
