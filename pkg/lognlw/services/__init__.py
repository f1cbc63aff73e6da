"""Services 包初始化文件。"""

from .nonlinearity import eval_f, eval_F, eval_g, eval_G
from .radial_field import (
    divide_by_r,
    radial_derivatives,
    reconstruct_u,
    reconstruct_ut,
    sample_initial,
    support_radius_of,
)
from .profiles import build_initial_data
from .solver import convergence_order, evolve, reference_step, reverse, step
from .diagnostics import (
    accumulate_A,
    build_report,
    energy,
    morawetz_flux,
    norm_B,
    norm_D,
    radial_sobolev_ratio,
    snapshot_norms,
    strichartz_sides,
)
from .certifier import (
    certify,
    check_cbound,
    double_exp_bound,
    greedy_partition,
    plan_subdivision,
    verify_certificate,
)
from .runner import RunResult, RunService, get_run_service

__all__ = [
    "eval_f",
    "eval_F",
    "eval_g",
    "eval_G",
    "divide_by_r",
    "radial_derivatives",
    "reconstruct_u",
    "reconstruct_ut",
    "sample_initial",
    "support_radius_of",
    "build_initial_data",
    "convergence_order",
    "evolve",
    "reference_step",
    "reverse",
    "step",
    "accumulate_A",
    "build_report",
    "energy",
    "morawetz_flux",
    "norm_B",
    "norm_D",
    "radial_sobolev_ratio",
    "snapshot_norms",
    "strichartz_sides",
    "certify",
    "check_cbound",
    "double_exp_bound",
    "greedy_partition",
    "plan_subdivision",
    "verify_certificate",
    "RunResult",
    "RunService",
    "get_run_service",
]
