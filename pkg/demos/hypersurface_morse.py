"""
Hypersurfaces and Morse sums
============================
"""

from fractions import Fraction

from jetlab import CompleteIntersectionCut, HypersurfaceSpec, eta_top_intersection
from jetlab import leading_constant_main_factor, morse_sum, q_index_partition, thm53_check

# %%
# (K_X - eps H)^n on a degree-d hypersurface of P^{n+1}.

for n in (1, 2, 3):
    print(n, [eta_top_intersection(HypersurfaceSpec(n, d)) for d in range(1, 9)])

# %%
# Cutting the jet bundle by two hypersurfaces of orders 10 and 20 at k = 100.

cut = CompleteIntersectionCut(100, (10, 20), (1, 1), Fraction(1, 10))
print(thm53_check(cut, n=2, r=3))

# %%
# Signed sums over index sets, on exact eigenvalues.

points = [((Fraction(1), Fraction(2)), 1), ((Fraction(-1), Fraction(3)), 2), ((Fraction(-1), Fraction(-1)), 1)]
print(q_index_partition(points, 2))
print(morse_sum(points, 1, "le"), morse_sum(points, 1, "eq"))

print(leading_constant_main_factor(1, 2, 2, None, eta_top_intersection(HypersurfaceSpec(1, 4))))
