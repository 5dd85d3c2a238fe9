"""
Line bundle bookkeeping on Semple towers
========================================
"""

from jetlab import PicardClass, RankSequence, TowerSpec, det_Vk_closed, induced_weights
from jetlab.semple_algebra import det_Vk_iterated, dim_semple, validate_rank_sequence

spec = TowerSpec(n=3, r=2, k=3)
print("dim X_k =", dim_semple(spec))
print("det V_k =", det_Vk_closed(spec), "==", det_Vk_iterated(spec))

# %%
# Classes parse from text and add like integers.

a = PicardClass.parse("detV + O(1,0,2) - 3A")
print(a, "|", a + a, "|", a.dual())

# %%
# ### Rank sequences
#
# Ranks drop by at most one per level; the weights follow from the drops.

print(induced_weights(RankSequence((3, 2, 2))))
print(validate_rank_sequence((3, 1, 1)))
