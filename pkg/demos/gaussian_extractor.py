"""
Building the Gaussian extractor
===============================

A two-dimensional message M = (M1, M2).  The protected variable Y only sees
M1, while X sees both coordinates.  The unique information lives in the M2
direction, and the extractor T is exactly that direction.
"""

import numpy as np

from markov_pid import GaussianJoint, gaussian_mi, markov_check_gaussian, optimal_extractor, ui_gaussian

c1, c2, r = 0.3, 0.5, 0.4
cov = np.array(
    [
        [1.0, 0.0, c1, r],
        [0.0, 1.0, c2, 0.0],
        [c1, c2, 1.0, 0.0],
        [r, 0.0, 0.0, 1.0],
    ]
)
g = GaussianJoint(cov, (2, 1, 1))

res = ui_gaussian(g)
print(f"UI(M : X \\ Y) = {res.value:.6f} bits, kernel dimension {res.kernel_dim}")
print(f"closed form -1/2 log2(1 - c2^2) = {-0.5 * np.log2(1 - c2**2):.6f}")

ex = optimal_extractor(g)
j = ex.joint
print("cov(T, Y) =", j.block("T", "Y").ravel())
print("T - M - (X, Y) holds:", markov_check_gaussian(j, ("T", "M", ("X", "Y"))).holds)
print(f"I(T; X) = {gaussian_mi(j, 'T', 'X'):.6f} bits")
