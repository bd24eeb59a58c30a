"""Isotropic hyperelasticity in invariant and logarithmic-strain form, with
sampled stability checks and homogeneous deformation programs."""

from .kinematics import DeformationState, invariants, make_shear, make_uniaxial
from .models import CONSTRUCTORS, BadParams, OutOfDomain
from .response import cauchy_stress, cauchy_stress_fd, tangent_analytic, tangent_fd
from .conditions import ConditionReport, SamplingPlan, linearize
from .bvp import analyze_monotonicity, solve_transverse, trace_shear, trace_uniaxial

__all__ = [
    "CONSTRUCTORS", "BadParams", "ConditionReport", "DeformationState", "OutOfDomain",
    "SamplingPlan", "analyze_monotonicity", "cauchy_stress", "cauchy_stress_fd", "invariants",
    "linearize", "make_shear", "make_uniaxial", "solve_transverse", "tangent_analytic",
    "tangent_fd", "trace_shear", "trace_uniaxial",
]
__version__ = "0.1.0"
