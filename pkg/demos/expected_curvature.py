"""
Expected horizontal curvature
=============================
"""

import numpy as np

from jetlab import CurvatureTensor, JetVector, RandomStream, expected_curvature
from jetlab import finsler_value, horizontal_curvature, mc_expected_curvature, to_polar

# %%
# A jet in C^2 of order 3, its Finsler norm and polar coordinates.

xi = JetVector(np.array([[1.0, 0.5j], [0.2, 0.0], [0.1, -0.3]]))
print("Psi(xi) =", finsler_value(xi))
lam = 2j
scaled = JetVector([lam**s * b for s, b in enumerate(xi.xi, start=1)])
print("Psi(lam . xi) / Psi(xi) =", finsler_value(scaled) / finsler_value(xi), "vs |lam|^2 =", abs(lam) ** 2)
pt = to_polar(xi)
print("x =", pt.x)

# %%
# Curvature of a random tensor at that point, and its average over the sphere.

c = CurvatureTensor.random(3, 2, RandomStream(seed=3, stream=4))
print(horizontal_curvature(c, pt).eigenvalues())

exact = expected_curvature(c, 3)
est, se = mc_expected_curvature(c, 3, 100_000, RandomStream(seed=3, stream=5))
print("max |MC - exact| / stderr:", np.max(np.abs(est.entries - exact.entries) / np.maximum(se, 1e-300)))
