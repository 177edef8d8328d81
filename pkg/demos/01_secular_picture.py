# coding: utf-8

# # The secular picture
#
# The bordered matrix A = [[J, u], [-u*, a]] is selfadjoint for the
# indefinite product with H = diag(1, ..., 1, -1). Diagonalising J turns the
# eigenvalue problem into a scalar one: lambda is an eigenvalue exactly when
#
#     h(lambda) = lambda - a   equals   g(lambda) = -sum_j d_j / (lambda - mu_j).
#
# Here we take four poles mu = 4, 3, 2, 1 with very different weights.

# %%

from pathlib import Path

from minkspec import analyze, critical_a_values, emit_csv, emit_svg, gh_plot_data, load_problem

HERE = Path(__file__).resolve().parent
OUT = HERE / "out"
OUT.mkdir(exist_ok=True)

form = load_problem(HERE / "data" / "example1.json")
print("poles   ", form.poles)
print("residues", form.residues)

# %%

# g has a vertical asymptote at every pole and is increasing between them.
# The line h has slope one, so it meets g once per gap between poles, plus
# possibly twice more (or never) in the two unbounded outer intervals or
# in one internal gap. Shifting a slides h sideways.

for a in (0.0, 1.0, 6.5):
    data = gh_plot_data(form, a=a)
    emit_svg(data, OUT / f"g_and_h_a{a:g}.svg", title=f"g and h, a = {a:g}")
emit_csv(gh_plot_data(form, a=6.5), OUT / "g_and_h.csv")

# %%

# h is tangent to g exactly where g'(t) = 1, and the shift producing that
# tangency is a = t - g(t). g' is convex on every gap, so each gap has at
# most two such points and the full list is cheap to get.

for c in critical_a_values(form):
    print(f"a* = {c.a_star:.6f}   t = {c.tangency_point:.6f}   case {c.resulting_case}")

# %%

# Between consecutive critical shifts the case cannot change, so one solve
# per gap labels the whole a-axis. Label 2 means a complex pair.

stars = [c.a_star for c in critical_a_values(form)]
edges = [stars[0] - 1.0] + stars + [stars[-1] + 1.0]
for lo, hi in zip(edges, edges[1:]):
    label = analyze(form.with_shift(0.5 * (lo + hi))).case_label
    print(f"({lo:8.4f}, {hi:8.4f})  case {label}")
