"""Median distributions of uncertain points in one and two dimensions."""

from ._kernels import BACKEND
from .costhat import build_profile_1d, costhat_eval, costhat_many, min_costhat
from .errors import (AuditFailure, ConsistencyError, DegenerateInstanceError, InvalidInputError,
                     ResourceLimitError, BoundViolation, UMedianError)
from .estimate import nonrobustness_demo, median_gap, weighted_median_1d
from .l1median import l1_median
from .model import LexKey, MedianDistribution, Traversal, UncertainPointSet, cost, median_1d
from .pipeline import build_support, exact_distribution
from .support1d import SupportSet, alpha_of, build_support_1d
from .support2d import build_lattice, build_support_2d, rho_lower_bound
from .weights_exact import aggregate_weights, point_weights_1d
from .weights_mc import McConfig, mc_weights, rounds_needed, sampled_support

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "AuditFailure",
    "ConsistencyError",
    "DegenerateInstanceError",
    "InvalidInputError",
    "LexKey",
    "McConfig",
    "MedianDistribution",
    "ResourceLimitError",
    "SupportSet",
    "BoundViolation",
    "Traversal",
    "UMedianError",
    "UncertainPointSet",
    "aggregate_weights",
    "alpha_of",
    "build_lattice",
    "build_profile_1d",
    "build_support",
    "build_support_1d",
    "build_support_2d",
    "cost",
    "costhat_eval",
    "costhat_many",
    "exact_distribution",
    "l1_median",
    "mc_weights",
    "median_1d",
    "min_costhat",
    "nonrobustness_demo",
    "point_weights_1d",
    "rho_lower_bound",
    "rounds_needed",
    "sampled_support",
    "median_gap",
    "weighted_median_1d",
]
