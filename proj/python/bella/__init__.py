"""Bregman envelope linesearch (BELLA) composite-minimization solver."""

from ._core import (
    FbStep,
    IterationRecord,
    Kernel,
    Problem,
    SolveResult,
    SolverConfig,
    bfbe,
    bfbe_gradient,
    bregman_distance,
    builtin_problem,
    builtin_problem_names,
    default_solver_config,
    fb_operator,
    finite_diff_gradient,
    forward_step,
    hard_threshold_prox,
    make_kernel,
    residual_certificate,
    soft_threshold_prox,
    solve,
)

__all__ = [
    "FbStep",
    "IterationRecord",
    "Kernel",
    "Problem",
    "SolveResult",
    "SolverConfig",
    "bfbe",
    "bfbe_gradient",
    "bregman_distance",
    "builtin_problem",
    "builtin_problem_names",
    "default_solver_config",
    "fb_operator",
    "finite_diff_gradient",
    "forward_step",
    "hard_threshold_prox",
    "make_kernel",
    "residual_certificate",
    "soft_threshold_prox",
    "solve",
]

__version__ = "0.1.0"
