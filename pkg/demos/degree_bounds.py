"""How the mean planar vertex degree moves the height-1 predictions.

Walks the vertex degree from 3 to 6 for side-to-side bases (no pi-vertices)
and prints the predicted topology with the number of constraints that hold
with equality.  At degree 3 the bounds are attained.  The last two
inputs are inconsistent and ``predict_only`` names the violated constraint.
"""

from types import SimpleNamespace

from columntess import check_constraints, predict_all_height1, predict_only

print(f"{'mu_ve':>6s} {'mu_pv':>8s} {'mu_ep':>8s} {'psi':>8s} {'tau':>8s}  tight")
for mu in (3.0, 3.5, 4.0, 5.0, 6.0):
    # every vertex has the same degree, so the second moment is mu^2
    ps = SimpleNamespace(lam_v=1.0, mu_ve=mu, phi=0.0, mu_e_vpi=0.0, mu2_ve=mu * mu)
    v = predict_all_height1(ps).values
    cs = check_constraints(ps)
    tight = sum(c.passed and abs(c.value - c.bound) < 1e-12 for c in cs)
    print(f"{mu:6.2f} {v['mu_pv']:8.4f} {v['mu_ep']:8.4f} {v['psi']:8.4f} {v['tau']:8.4f}  {tight}/{len(cs)}")

for params in ({"lam_v": 2, "mu_ve": 7, "phi": 0, "mu_e_vpi": 0, "mu2_ve": 49},
               {"lam_v": 1, "mu_ve": 3, "phi": 0, "mu_e_vpi": 0.1, "mu2_ve": 9}):
    doc = predict_only(params)
    print(params, "->", "ok" if doc["ok"] else f"rejected: {doc['violated']}")
