"""Models 包初始化文件。"""

from .nonlinearity import NonlinearitySpec
from .field import RadialGrid, FieldState, InitialData
from .trajectory import SolveConfig, Trajectory, TrajectoryStatus
from .diagnostics import NormSnapshot, DiagnosticsReport
from .certificate import (
    CboundCheck,
    CertifierConstants,
    Clause,
    IntervalRecord,
    SubdivisionCertificate,
    SubdivisionPlan,
    Verdict,
)
from .convergence import ConvergenceReport

__all__ = [
    "NonlinearitySpec",
    "RadialGrid",
    "FieldState",
    "InitialData",
    "SolveConfig",
    "Trajectory",
    "TrajectoryStatus",
    "NormSnapshot",
    "DiagnosticsReport",
    "CboundCheck",
    "CertifierConstants",
    "Clause",
    "IntervalRecord",
    "SubdivisionCertificate",
    "SubdivisionPlan",
    "Verdict",
    "ConvergenceReport",
]
