"""按名称选择的初值剖面。

gaussian-bump、polynomial-bump、zero、table 为紧支剖面；
standing-wave 为 Dirichlet 模式（线性驻波的闭式解用于收敛性研究）。
"""

import csv
import logging
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from ..exceptions import ConfigError, UnsupportedDataError
from ..models.field import InitialData

logger = logging.getLogger(__name__)

PROFILE_NAMES = ("gaussian-bump", "polynomial-bump", "zero", "table", "standing-wave")


def _zero(r: np.ndarray) -> np.ndarray:
    return np.zeros_like(r, dtype=float)


def smooth_cutoff(r: np.ndarray, radius: float) -> np.ndarray:
    """C^∞ 截断 exp(1 − 1/(1 − s²))，s = r/radius；s ≥ 1 时恰为零。"""
    s = np.asarray(r, dtype=float) / radius
    out = np.zeros_like(s)
    inside = np.abs(s) < 1.0
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - s[inside] ** 2))
    return out


def gaussian_bump(
    amplitude: float = 1.0,
    width: float = 1.0,
    center: float = 0.0,
    support_radius: float = 3.0,
    velocity: float = 0.0,
) -> InitialData:
    """u0 = A·exp(−((r−c)/w)²)·cutoff(r/ρ)，u1 = velocity·u0。"""

    def u0(r: np.ndarray) -> np.ndarray:
        return amplitude * np.exp(-(((r - center) / width) ** 2)) * smooth_cutoff(r, support_radius)

    def u1(r: np.ndarray) -> np.ndarray:
        return velocity * u0(r)

    return InitialData(u0=u0, u1=u1, support_radius=support_radius, name="gaussian-bump")


def polynomial_bump(amplitude: float = 1.0, support_radius: float = 3.0) -> InitialData:
    """u0 = A·(1 − (r/ρ)²)⁴，r < ρ；u1 = 0。"""

    def u0(r: np.ndarray) -> np.ndarray:
        s = np.asarray(r, dtype=float) / support_radius
        return np.where(s < 1.0, amplitude * (1.0 - s**2) ** 4, 0.0)

    return InitialData(u0=u0, u1=_zero, support_radius=support_radius, name="polynomial-bump")


def zero_data(support_radius: float = 1.0) -> InitialData:
    return InitialData(u0=_zero, u1=_zero, support_radius=support_radius, name="zero")


def standing_wave_solution(amplitude: float, mode: int, r_max: float) -> Callable[[float, np.ndarray], np.ndarray]:
    """线性驻波的闭式解 v(t, r) = A·sin(kr)·cos(kt)，k = mode·π/r_max。"""
    k = mode * np.pi / r_max

    def solution(t: float, r: np.ndarray) -> np.ndarray:
        return amplitude * np.sin(k * r) * np.cos(k * t)

    return solution


def standing_wave(amplitude: float = 1.0, mode: int = 1, r_max: float = 1.0) -> InitialData:
    """u0 = A·sin(kr)/r（原点取极限 A·k），u1 = 0。"""
    k = mode * np.pi / r_max

    def u0(r: np.ndarray) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        safe = np.where(r > 0.0, r, 1.0)
        return np.where(r > 0.0, amplitude * np.sin(k * r) / safe, amplitude * k)

    return InitialData(u0=u0, u1=_zero, support_radius=None, name="standing-wave")


def table_profile(path: str, amplitude: float = 1.0) -> InitialData:
    """从 CSV 读取 (r, u0, u1) 行并线性插值。

    表格最后一行必须为零，支集半径取最后一个非零行的下一行。
    """
    table_path = Path(path)
    if not table_path.exists():
        raise ConfigError(f"初值表不存在: {path}")

    rows: list[tuple[float, float, float]] = []
    with open(table_path, "r", encoding="utf-8", newline="") as f:
        for record in csv.reader(f):
            if not record or record[0].lstrip().startswith("#"):
                continue
            try:
                rows.append(tuple(float(item) for item in record[:3]))
            except ValueError:
                # 表头行
                if rows:
                    raise ConfigError(f"初值表 {path} 含有无法解析的行: {record}")
    if len(rows) < 2:
        raise ConfigError(f"初值表 {path} 至少需要两行数据")

    data = np.array(rows, dtype=float)
    r_col, u0_col, u1_col = data[:, 0], amplitude * data[:, 1], amplitude * data[:, 2]
    if np.any(np.diff(r_col) <= 0.0):
        raise ConfigError(f"初值表 {path} 的 r 列必须严格递增")
    nonzero = np.nonzero((u0_col != 0.0) | (u1_col != 0.0))[0]
    if nonzero.size and nonzero[-1] == len(r_col) - 1:
        raise UnsupportedDataError(f"初值表 {path} 的最后一行必须为零（紧支）")
    support = float(r_col[nonzero[-1] + 1]) if nonzero.size else float(r_col[-1])

    def u0(r: np.ndarray) -> np.ndarray:
        return np.interp(r, r_col, u0_col, right=0.0)

    def u1(r: np.ndarray) -> np.ndarray:
        return np.interp(r, r_col, u1_col, right=0.0)

    logger.info("loaded table profile %s with %d rows, support %.6g", path, len(r_col), support)
    return InitialData(u0=u0, u1=u1, support_radius=support, name="table")


def build_initial_data(
    profile: str,
    *,
    amplitude: float = 1.0,
    width: float = 1.0,
    center: float = 0.0,
    support_radius: Optional[float] = 3.0,
    velocity: float = 0.0,
    mode: int = 1,
    r_max: float = 1.0,
    table_path: Optional[str] = None,
) -> InitialData:
    """按名称构造初值。

    Raises:
        ConfigError: 未知的剖面名称或缺少必要参数
    """
    if profile == "gaussian-bump":
        return gaussian_bump(amplitude, width, center, support_radius, velocity)
    if profile == "polynomial-bump":
        return polynomial_bump(amplitude, support_radius)
    if profile == "zero":
        return zero_data(support_radius or 1.0)
    if profile == "standing-wave":
        return standing_wave(amplitude, mode, r_max)
    if profile == "table":
        if not table_path:
            raise ConfigError("table 剖面需要 data.table_path")
        return table_profile(table_path, amplitude)
    raise ConfigError(f"未知的初值剖面: {profile}，可选 {', '.join(PROFILE_NAMES)}")
