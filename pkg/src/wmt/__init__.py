"""Numerical toolkit for the weighted Moser-Trudinger extremal problem.

The unit-disc problem with energy weight |log|x||^beta is reduced to the
half line via |x| = exp(-t/2); the package evaluates the reduced
exponential functional and weighted energy, reproduces the closed-form
concentrating and Carleson-Chang families, runs concentration diagnostics
and inequality suites, maximizes the functional over the unit energy ball,
and cross-validates maximizers with an Euler-Lagrange shooting solver.
"""

__version__ = "0.1.0"

from .core import DISC_AREA, WeightParams, from_reduced, make_weight_params, to_reduced
from .errors import ConvergenceError, DegenerateInputError, DomainError
from .families import (
    CarlesonChangFunction,
    MoserFamily,
    carleson_chang_f,
    cc_phi,
    cc_weighted_norm,
    moser_profile,
    moser_value,
)
from .functionals import (
    FunctionalReport,
    QuadratureConfig,
    choose_tmax,
    functional_i,
    functional_i_interval,
    functional_j,
    gamma_energy,
    gamma_energy_interval,
    weighted_dirichlet_2d,
)
from .inequalities import (
    ConcentrationDiagnostics,
    cc_tail_bound,
    concentration_level_cap,
    crossing_point,
    diagnose,
    holder_growth,
    km_envelope,
    weighted_tail_bound,
)
from .optimize import (
    OptimizationResult,
    OptimizerConfig,
    beta_sweep,
    default_optimizer_grid,
    discrete_gradient,
    maximize,
    project_feasible,
)
from .profiles import (
    GridSpec,
    Profile1D,
    RadialFunction,
    load_profile,
    make_graded_grid,
    refine_midpoints,
    resample,
    save_profile,
)
from .shooting import ShootingConfig, ShootingResult, el_residual, shoot
from .suites import run_inequality_suites

__all__ = [
    "DISC_AREA",
    "WeightParams",
    "make_weight_params",
    "to_reduced",
    "from_reduced",
    "DomainError",
    "DegenerateInputError",
    "ConvergenceError",
    "Profile1D",
    "RadialFunction",
    "GridSpec",
    "make_graded_grid",
    "refine_midpoints",
    "resample",
    "save_profile",
    "load_profile",
    "QuadratureConfig",
    "FunctionalReport",
    "functional_i",
    "functional_i_interval",
    "functional_j",
    "gamma_energy",
    "gamma_energy_interval",
    "weighted_dirichlet_2d",
    "choose_tmax",
    "MoserFamily",
    "CarlesonChangFunction",
    "moser_profile",
    "moser_value",
    "carleson_chang_f",
    "cc_phi",
    "cc_weighted_norm",
    "ConcentrationDiagnostics",
    "holder_growth",
    "cc_tail_bound",
    "weighted_tail_bound",
    "crossing_point",
    "diagnose",
    "km_envelope",
    "concentration_level_cap",
    "OptimizerConfig",
    "OptimizationResult",
    "discrete_gradient",
    "project_feasible",
    "maximize",
    "beta_sweep",
    "default_optimizer_grid",
    "ShootingConfig",
    "ShootingResult",
    "el_residual",
    "shoot",
    "run_inequality_suites",
]
