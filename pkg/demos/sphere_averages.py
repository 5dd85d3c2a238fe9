"""
Averages over unit spheres
==========================

Monte Carlo sphere averages of Hermitian forms and Dirichlet block moments,
next to their exact values.
"""

import numpy as np

from jetlab import BlockConfig, HermitianForm, RandomStream, dirichlet_moment, mc_moment
from jetlab import sphere_quadratic_average
from jetlab.sphere_moments import partition_identity

# %%
# The average of <Q u, u> over the unit sphere of C^r is Tr(Q)/r.

q = HermitianForm(np.array([[2.0, 1j], [-1j, -1.0]]))
est, se, exact = sphere_quadratic_average(q, 100_000, RandomStream(seed=7))
print(f"MC {est:.5f} +- {se:.5f}   exact {exact}")

# %%
# ### Block moments
#
# Split C^M into blocks of sizes n_1..n_k. The squared block masses follow a
# Dirichlet law, so their moments are exact rationals.

cfg = BlockConfig.uniform(3, 2)
for alpha in [(1, 0, 0), (2, 0, 0), (1, 1, 0)]:
    est, se = mc_moment(cfg, alpha, 200_000, RandomStream(seed=7, stream=2))
    print(alpha, dirichlet_moment(cfg, alpha), f"{est:.5f} +- {se:.5f}")

# %%
# A cut level drops one dimension from its block.

cut = BlockConfig.with_cuts(3, 2, [1])
print(cut.block_sizes, dirichlet_moment(cut, (1, 0, 0)), dirichlet_moment(cut, (0, 1, 0)))
print(partition_identity(3, 2, 1))
