"""Exact and Monte Carlo checks for jet-bundle curvature bookkeeping."""

from .core_numerics import GaussRational, HermitianForm, RandomStream, Rational, signature
from .curvature_mc import (
    CurvatureTensor,
    JetPoint,
    JetVector,
    expected_curvature,
    finsler_value,
    harmonic_sum,
    horizontal_curvature,
    mc_expected_curvature,
    morse_sum,
    q_index_partition,
    to_polar,
)
from .gg_combinatorics import JetSpec, asymptotic_fiber_dimension, fiber_dimension
from .morse_examples import (
    CompleteIntersectionCut,
    HypersurfaceSpec,
    eta_top_intersection,
    leading_constant_main_factor,
    thm53_check,
)
from .semple_algebra import PicardClass, RankSequence, TowerSpec, det_Vk_closed, induced_weights
from .sphere_moments import BlockConfig, dirichlet_moment, mc_moment, sphere_quadratic_average

__version__ = "0.1.0"
