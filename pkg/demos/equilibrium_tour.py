"""Pressure, equilibrium measure and the variational identity for a random potential."""
import numpy as np

from kmsgibbs import FiniteRangePotential, normalize
from kmsgibbs.symbolic import parse_cylinder
from kmsgibbs.thermo import cylinder_measure, entropy_and_integral, finite_volume_measure, transfer_matrix

rng = np.random.default_rng(7)
U = FiniteRangePotential.random(2, 2, rng)
print("potential table:", np.round(U.values, 3))

# transfer matrix and its Perron data
T = transfer_matrix(U)
m = normalize(U)
print("T =\n", np.round(T, 4))
print(f"pressure P = {m.pressure:.15f}  (log of the top eigenvalue {np.log(np.linalg.eigvals(T).real.max()):.15f})")

# normalized potential: exp sums to one over each extension
sums = np.exp(m.normalized.values).reshape(2, -1).sum(axis=0)
print("one-symbol extension sums:", sums)

h, integral = entropy_and_integral(m)
print(f"h + int U - P = {h + integral - m.pressure:.2e}")

# a few cylinders, compared with finite volume approximations
for text in ("1|", "|12", "21|21"):
    c = parse_cylinder(text, 2)
    exact = cylinder_measure(m, c)
    approx = [finite_volume_measure(U, -s // 2, s // 2, c) for s in (4, 8, 12, 16)]
    errs = ", ".join(f"{abs(a - exact):.1e}" for a in approx)
    print(f"{text:>6}  measure {exact:.6f}   finite volume errors {errs}")
