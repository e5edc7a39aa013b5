"""
The modular lambda function and the metric on the sphere minus 0, 1, inf
=========================================================================

The lambda function covers the thrice-punctured sphere by the upper
half-plane; the hyperbolic metric is pushed down through it.
"""

import math

import numpy as np

from pullback import dist_sigma, inverse_lambda, modular_lambda
from pullback.hyperbolic import contraction_bound, density_sigma, levy_modulus_threshold
from pullback.modular import lambda_and_derivative

print("lambda(i)  =", modular_lambda(1j))
print("lambda(2i) =", modular_lambda(2j))

# invert and come back
for z in (0.5, -2 + 1j, 3j, 0.999):
    tau = inverse_lambda(z)
    print(f"z = {z!s:>9}  tau = {tau:.12f}  back = {modular_lambda(tau):.12f}")

# the density is the pushforward of 1/Im(tau)
tau = 0.3 + 0.7j
lam, dlam = lambda_and_derivative(tau)
print("rho(lambda(tau)) |lambda'(tau)| Im(tau) =", density_sigma(lam) * abs(dlam) * tau.imag)

# near the puncture 0 the density looks like that of the punctured disk
for e in (2, 6, 10):
    z = 10.0 ** -e
    print(f"|z| = 1e-{e}:  rho * |z| |log |z|| = {density_sigma(z) * z * abs(math.log(z)):.6f}")

# distances are invariant under the six symmetries of {0, 1, inf}
z, w = 0.3 + 0.2j, -1.2 + 0.7j
print("d(z, w)             =", dist_sigma(z, w))
print("d(1 - z, 1 - w)     =", dist_sigma(1 - z, 1 - w))
print("d(1/z, 1/w)         =", dist_sigma(1 / z, 1 / w))

# the contraction factor of an inclusion creeps towards 1 with the distance
for s in np.logspace(-4, 1, 6):
    print(f"s = {s:8.4f}  bound = {contraction_bound(s):.6f}")
print("modulus threshold at d0 = 0:", levy_modulus_threshold(0))
