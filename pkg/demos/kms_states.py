"""The equilibrium state on the convolution algebra: trace at U = 0, KMS in general."""
import numpy as np

from kmsgibbs import FiniteRangePotential, normalize
from kmsgibbs.algebra import (convolve, evaluate_F, involution, kms_residual, positivity_check,
                              random_element, sigma_t, state)

rng = np.random.default_rng(11)
A = random_element(rng, 2)
# B overlaps A* so that products do not vanish
B = involution(A) + random_element(rng, 2)
print("A =", A)
print("B =", B)

flat = normalize(FiniteRangePotential.zero(2, 1))
print("U = 0:  w(AB) - w(BA) =", state(convolve(A, B), flat) - state(convolve(B, A), flat))

U = FiniteRangePotential.random(2, 2, rng)
for beta in (0.5, 1.0, 2.0):
    m = normalize(U.scaled(beta))
    trace_gap = abs(state(convolve(A, B), m) - state(convolve(B, A), m))
    print(f"beta={beta}: trace gap {trace_gap:.3e}  KMS residual {kms_residual(A, B, m, U, beta):.1e}")

# F(t) = w(sigma^t(A) B) along a vertical segment; the top edge matches w(B sigma^t A)
m = normalize(U)
for t in (0.0, 0.7, 1 + 0.3j):
    top = evaluate_F(A, B, m, U, t + 1j)
    other = state(convolve(B, sigma_t(A, t, U)), m)
    print(f"t={t}:  F(t+i) = {top:.6f}   w(B s^t A) = {other:.6f}")

print("w(A A*) =", positivity_check(A, m))
print("w(A* A) =", state(convolve(involution(A), A), m).real)
