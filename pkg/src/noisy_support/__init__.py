"""Support estimation of convex bodies from noisy uniform samples.

Submodules:

* :mod:`~noisy_support.bodies`, :mod:`~noisy_support.sphere`,
  :mod:`~noisy_support.metrics` -- convex bodies, sphere nets, distances
* :mod:`~noisy_support.linprog` -- dense LP and cutting-plane support queries
* :mod:`~noisy_support.endpoint` -- univariate endpoint estimation
* :mod:`~noisy_support.estimator` -- the truncated halfspace estimator
* :mod:`~noisy_support.lowerbound` -- numerical checks of the two-body construction
* :mod:`~noisy_support.experiments` -- seeded risk curves and rate fits
"""

from .bodies import Ball, Box, ConvexBody, Ellipsoid, Polytope, format_body, parse_body
from .endpoint import bias_bn, bias_bn_tilde, estimate_endpoint
from .estimator import (EstimatorConfig, GaussianNoise, HalfspaceEstimator, UniformBallNoise,
                        build_estimator, choose_M, evaluate_trial)
from .linprog import Halfspace, LinearProgram, solve_lp
from .metrics import hausdorff_support, sym_diff_volume
from .sphere import sample_sphere, sphere_net

__version__ = "0.1.0"

__all__ = [
    "Ball", "Box", "ConvexBody", "Ellipsoid", "Polytope", "format_body", "parse_body",
    "bias_bn", "bias_bn_tilde", "estimate_endpoint",
    "EstimatorConfig", "GaussianNoise", "HalfspaceEstimator", "UniformBallNoise",
    "build_estimator", "choose_M", "evaluate_trial",
    "Halfspace", "LinearProgram", "solve_lp",
    "hausdorff_support", "sym_diff_volume", "sample_sphere", "sphere_net",
]
