"""Brick wall with unit-height cuts: every mean value is known by hand.

Builds one 8 x 8 x 8 window, estimates the column summary and prints it next
to the height-1 predictions computed from the measured planar summary.
"""

from columntess import ZProcessSpec, build, estimate_column, estimate_planar, predict_all_height1
from columntess.generators import GeneratorSpec, generate

T = generate(GeneratorSpec("brick_wall", length=8.0))
P = estimate_planar(T)
print(f"planar: lam_v={P.lam_v:g} mu_ve={P.mu_ve:g} phi={P.phi:g} mu_e_vpi={P.mu_e_vpi:g}")

CT = build(T, [1.0] * T.n_cells, ZProcessSpec("unit_lattice", 8), seed=0)
S = estimate_column(CT)
pred = predict_all_height1(P)

print(f"{'slot':10s} {'measured':>12s} {'predicted':>12s}  expression")
for slot, value in pred.values.items():
    print(f"{slot:10s} {getattr(S, slot):12.6g} {value:12.6g}  {pred.provenance[slot]}")
