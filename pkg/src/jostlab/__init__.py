"""Resonances of step potentials and finite Paley-Wiener interpolation."""

from __future__ import annotations

__version__ = "0.1.0"

from .analytics import (PointMultiset, band_limit_residual, blaschke_sum, counting_function,
                        log_strip_clearance, phase_sum, sector_excess)
from .clusters import build_clusters, boundary_arcs, strip_partition
from .errors import JostLabError
from .evaluator import AnalyticEvaluator, FunctionEvaluator
from .interpolation import G, build_interpolant, remove_upper_zeros, sinc_power_H
from .jost import JostFunction, jost_k_derivative, jost_value, trig_pair
from .lk import LKConfig, epsilon_schedule, lk_H, theta, xi
from .potential import Potential, parse_potential, serialize_potential, support_diameter
from .sharpness import build_counterexample, obstruction_profile, parse_rate
from .zeros import Rectangle, locate_zeros, winding_count

__all__ = [
    "AnalyticEvaluator", "FunctionEvaluator", "G", "JostFunction", "JostLabError", "LKConfig",
    "PointMultiset", "Potential", "Rectangle", "band_limit_residual", "blaschke_sum",
    "boundary_arcs", "build_clusters", "build_counterexample", "build_interpolant",
    "counting_function", "epsilon_schedule", "jost_k_derivative", "jost_value", "lk_H",
    "locate_zeros", "log_strip_clearance", "obstruction_profile", "parse_potential",
    "parse_rate", "phase_sum", "remove_upper_zeros", "sector_excess", "serialize_potential",
    "sinc_power_H", "strip_partition", "support_diameter", "theta", "trig_pair",
    "winding_count", "xi",
]
