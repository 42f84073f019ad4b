"""Sharp convex-order bounds for sums of discrete random variables with fixed marginals."""

from .couplings import (
    FrechetClass,
    InfeasibleClassError,
    JointDistribution,
    comonotonic,
    countermonotonic,
    enumerate_vertex_couplings,
    is_comonotonic,
    is_member,
    is_mutually_exclusive,
    make_joint,
    me_feasible,
    mutually_exclusive,
    sample_coupling,
    sum_distribution,
)
from .distributions import DiscreteDistribution, make_distribution, point_mass
from .orders import OrderVerdict, cx_order, sl_order, sl_order_via_tvar
from .risk_measures import ConcavityError, DistortionFunction, rho, tvar, var
from .verify import ClassConfig, VerificationReport

__version__ = "0.1.0"
