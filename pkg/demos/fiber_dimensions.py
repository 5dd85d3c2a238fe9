"""
Counting weighted jet monomials
===============================
"""

from jetlab import JetSpec, asymptotic_fiber_dimension, fiber_dimension
from jetlab.gg_combinatorics import ggdim_rows, monomials_of_degree

# %%
# Monomials of weighted degree 4 in one variable per order, k = 2.

spec = JetSpec(k=2, r=1)
for mono in monomials_of_degree(spec, 4):
    print(mono.alpha)

# %%
# The generating series gives the count directly, and the leading term
# m^(kr-1) / ((kr-1)! (k!)^r) takes over for large m.

for row in ggdim_rows(JetSpec(2, 2), 8):
    print(row)

for m in (10, 1_000, 100_000):
    ratio = fiber_dimension(spec, m) / asymptotic_fiber_dimension(spec, m)
    print(m, float(ratio))
