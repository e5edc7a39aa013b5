"""Combinatorics, moduli-space maps and pullback dynamics for marked maps
with four marked points."""

from .errors import PullbackError
from .moebius import INF, Moebius, connecting_map, from_three_points
from .portrait import (FAMILIES, Portrait, cusp_to_levy_class, entire_portrait, enumerate_portraits,
                       exponential_portrait, find_b_sets, totally_unobstructed, validate)
from .modular import inverse_lambda, modular_lambda
from .hyperbolic import contraction_bound, dist_sigma, levy_modulus_threshold
from .gmap import ExpPeriodic, ExpPreperiodic, UserRational, family_for_portrait, find_fixed_points
from .dynamics import (Constant, Explicit, Periodic, backward_orbit, campaign,
                       dichotomy_consistency_check, twist_sweep)

__version__ = "0.1.0"
