"""Nonlocal p-growth operators on the first Heisenberg group.

Gauge-ball quadrature for the principal-value operator, a lattice solver for
the exterior-data Dirichlet problem, and empirical constants for the
sup/inf-type inequalities satisfied by nonnegative solutions.
"""

from .calculus import SmoothFunction, dilate_function, translate
from .errors import (
    ConfigError,
    ConvergenceError,
    DegenerateCheckError,
    GeometryError,
)
from .operators import (
    FracParams,
    OperatorValue,
    QuadConfig,
    asymptotics_sweep,
    c1_constant,
    c2_constant,
    evaluate_operator,
    frac_constant,
    frac_sublaplacian,
    gagliardo_seminorm,
    p_operator,
    sobolev_check,
    tail,
)
from .solver import (
    DiscreteFunction,
    DiscreteSolution,
    Mesh,
    Problem,
    assemble_kernel,
    build_mesh,
    far_field_weights,
    residual_check,
    solve,
    solve_linear,
    solve_nonlinear,
)
from .harnack import (
    ball_stats,
    boundedness_check,
    caccioppoli_check,
    chi_term,
    harnack_constant,
    iter_lemma_geometric,
    iter_lemma_interpolation,
    level_set_measure,
    positivity_expansion_check,
    robustness_sweep,
    tail_control_check,
    weak_harnack_check,
)

__version__ = "0.1.0"
