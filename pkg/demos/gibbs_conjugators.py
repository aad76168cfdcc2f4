"""Radon-Nikodym derivatives of the equilibrium measure along conjugating pieces."""
import numpy as np

from kmsgibbs import FiniteRangePotential, normalize
from kmsgibbs.cocycle import HomoclinicPair, bar_move_conjugator, cocycle_V, symmetric_conjugator
from kmsgibbs.symbolic import parse_cylinder
from kmsgibbs.thermo import cylinder_measure
from kmsgibbs.verify import bowen_bounds, bowen_envelope, bowen_scan, conjugator_windows, gibbs_residual, gibbs_scan

U = FiniteRangePotential.random(2, 2, np.random.default_rng(3))
m = normalize(U)

p = symmetric_conjugator((1, 1, 2, 1), (1, 2, 1, 2), 2)
print("piece", p.label(), " residual", gibbs_residual(m, p))

# V depends on one symbol of context on each side when r = 2
for lc, rc in [((1,), (1,)), ((2,), (1,)), ((2,), (2,))]:
    pair = HomoclinicPair(p.window, p.source, p.target, lc, rc)
    print(f"  context {lc} {rc}: V = {cocycle_V(pair, U):+.6f}")

# every rewrite on every window touching the bar, up to length 6
worst = max(gibbs_scan(m, w).max() for w in conjugator_windows(6))
print(f"worst residual over all pieces on windows <= 6: {worst:.1e}")

# moving the bar: 112|2 -> 1|122 is realised by four pieces
c = parse_cylinder("112|2", 2)
for q in bar_move_conjugator(c, 2, 2):
    print(f"  {q.label():>18}  residual {gibbs_residual(m, q):.1e}")
print("measures:", cylinder_measure(m, c), cylinder_measure(m, parse_cylinder("1|122", 2)))

# Bowen ratios: the printed envelope is too narrow, the bounds hold
lo, hi = bowen_scan(m, 10, normalized=True)
print(f"Bowen ratios in [{lo:.4f}, {hi:.4f}]")
print("envelope [%.4f, %.4f]" % bowen_envelope(m), " bounds [%.4f, %.4f]" % bowen_bounds(m))
