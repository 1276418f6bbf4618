"""Barotropic Euler Riemann problems, fan subsolutions and the action functional."""
from .action import (ActionReport, ActionWindow, action_closed_form, action_profile, action_quadrature,
                     action_report, compare, cumulative_action, region_action_density)
from .eos import DEFAULT_EOS, EosParams, State
from .errors import (DegenerateInputError, DomainError, HorizonError, InfeasibleError, LeastActionError,
                     SolverError, VacuumError)
from .riemann import RiemannData, WaveFan, sample, solve_middle_density, solve_riemann
from .spacetime import PiecewiseSolution, build_1d_solution, build_glued_solution, evaluate, outer_extent
from .subsolution import FanSubsolution, check_feasibility, paper_fixture, scan_family, solve_family
from .tolerance import DEFAULT_TOL, ToleranceConfig

__version__ = "0.1.0"

__all__ = [
    "ActionReport",
    "ActionWindow",
    "DEFAULT_EOS",
    "DEFAULT_TOL",
    "DegenerateInputError",
    "DomainError",
    "EosParams",
    "FanSubsolution",
    "HorizonError",
    "InfeasibleError",
    "LeastActionError",
    "PiecewiseSolution",
    "RiemannData",
    "SolverError",
    "State",
    "ToleranceConfig",
    "VacuumError",
    "WaveFan",
    "action_closed_form",
    "action_profile",
    "action_quadrature",
    "action_report",
    "build_1d_solution",
    "build_glued_solution",
    "check_feasibility",
    "compare",
    "cumulative_action",
    "evaluate",
    "outer_extent",
    "paper_fixture",
    "region_action_density",
    "sample",
    "scan_family",
    "solve_family",
    "solve_middle_density",
    "solve_riemann",
    "__version__",
]
