"""Schemas 包初始化文件。"""

from .run_config import (
    DataBlock,
    GridBlock,
    NonlinearityBlock,
    OutputBlock,
    RunConfig,
    SolveBlock,
    SweepBlock,
    load_run_config,
    parse_override,
    validate_config,
)
from .summary import RunSummary, SweepRow

__all__ = [
    "DataBlock",
    "GridBlock",
    "NonlinearityBlock",
    "OutputBlock",
    "RunConfig",
    "SolveBlock",
    "SweepBlock",
    "load_run_config",
    "parse_override",
    "validate_config",
    "RunSummary",
    "SweepRow",
]
