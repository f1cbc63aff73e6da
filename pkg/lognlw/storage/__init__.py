"""Storage 包初始化文件：运行产物的文件格式。"""

from .trajectory_dump import read_trajectory, write_trajectory
from .reports import (
    read_diagnostics,
    read_summary,
    write_certificate,
    write_certificate_csv,
    write_diagnostics,
    write_summary,
    write_sweep,
)

__all__ = [
    "read_trajectory",
    "write_trajectory",
    "read_diagnostics",
    "read_summary",
    "write_certificate",
    "write_certificate_csv",
    "write_diagnostics",
    "write_summary",
    "write_sweep",
]
