"""径向场：初值采样、由 v = r·u 重建 u 以及径向导数。"""

import logging
from typing import Optional

import numpy as np

from ..exceptions import ResolutionError, UnsupportedDataError
from ..models.field import FieldState, InitialData, RadialGrid
from ..models.nonlinearity import NonlinearitySpec

logger = logging.getLogger(__name__)

SUPPORT_TOLERANCE = 1e-14
MIN_SUPPORT_CELLS = 8


def _evaluate(profile, r: np.ndarray) -> np.ndarray:
    values = np.broadcast_to(np.asarray(profile(r), dtype=float), r.shape)
    return np.array(values, dtype=float)


def sample_initial(grid: RadialGrid, spec: NonlinearitySpec, data: InitialData) -> FieldState:
    """在网格节点上采样初值：v_j = r_j·u0(r_j)，w_j = r_j·u1(r_j)。

    Args:
        grid: 径向网格
        spec: 非线性项
        data: 初值

    Returns:
        t = 0 时刻的场状态

    Raises:
        UnsupportedDataError: 初值在支集外不为零，或支集不在网格内
        ResolutionError: 支集覆盖的网格单元少于 8 个
    """
    r = grid.nodes
    u0 = _evaluate(data.u0, r)
    u1 = _evaluate(data.u1, r)
    if not (np.all(np.isfinite(u0)) and np.all(np.isfinite(u1))):
        raise UnsupportedDataError(f"初值 {data.name} 在网格上含有非有限值")

    v = r * u0
    w = r * u1

    if data.support_radius is None:
        # Dirichlet 模式：只要求 v 在外边界为零
        scale = max(1.0, float(np.max(np.abs(v))), float(np.max(np.abs(w))))
        if abs(v[-1]) > 1e-10 * scale or abs(w[-1]) > 1e-10 * scale:
            raise UnsupportedDataError(f"初值 {data.name} 在 r_max 处不为零")
    else:
        if data.support_radius >= grid.r_max:
            raise UnsupportedDataError(
                f"支集半径 {data.support_radius} 不小于 r_max = {grid.r_max}"
            )
        if data.support_radius / grid.dr < MIN_SUPPORT_CELLS:
            raise ResolutionError(
                f"支集只覆盖 {data.support_radius / grid.dr:.2f} 个网格单元，至少需要 {MIN_SUPPORT_CELLS} 个"
            )
        outside = r >= data.support_radius
        leak = max(float(np.max(np.abs(u0[outside]), initial=0.0)),
                   float(np.max(np.abs(u1[outside]), initial=0.0)))
        if leak > SUPPORT_TOLERANCE:
            raise UnsupportedDataError(
                f"初值 {data.name} 在 r ≥ {data.support_radius} 处不为零（最大值 {leak:.3e}）"
            )

    v[0] = 0.0
    w[0] = 0.0
    logger.debug("sampled %s on n=%d, r_max=%g", data.name, grid.n, grid.r_max)
    return FieldState(t=0.0, v=v, w=w, grid=grid, spec=spec)


def divide_by_r(grid: RadialGrid, values: np.ndarray) -> np.ndarray:
    """由奇延拓量 q = r·p 重建 p。

    j ≥ 1 时 p_j = q_j / r_j；原点处取 q 在 0 点的单侧导数，
    利用 q 的奇对称性写成 (8q_1 − q_2)/(6dr)，对偶的二次剖面精确。
    """
    r = grid.nodes
    out = np.empty_like(values, dtype=float)
    out[1:] = values[1:] / r[1:]
    out[0] = (8.0 * values[1] - values[2]) / (6.0 * grid.dr)
    return out


def reconstruct_u(state: FieldState) -> np.ndarray:
    """由 v = r·u 重建 u。"""
    return divide_by_r(state.grid, state.v)


def reconstruct_ut(state: FieldState) -> np.ndarray:
    """由 w = ∂ₜ(r·u) 重建 ∂ₜu。"""
    return divide_by_r(state.grid, state.w)


def derivatives_of(values: np.ndarray, dr: float) -> tuple[np.ndarray, np.ndarray]:
    """径向偶函数的一阶与二阶导数，二阶精度。

    内部用中心差分；原点利用偶延拓 p(−r) = p(r)，故 p_r[0] = 0；
    外边界用单侧二阶模板。
    """
    p = np.asarray(values, dtype=float)
    p_r = np.empty_like(p)
    p_rr = np.empty_like(p)

    p_r[1:-1] = (p[2:] - p[:-2]) / (2.0 * dr)
    p_r[0] = 0.0
    p_r[-1] = (3.0 * p[-1] - 4.0 * p[-2] + p[-3]) / (2.0 * dr)

    p_rr[1:-1] = (p[2:] - 2.0 * p[1:-1] + p[:-2]) / (dr * dr)
    p_rr[0] = 2.0 * (p[1] - p[0]) / (dr * dr)
    p_rr[-1] = (2.0 * p[-1] - 5.0 * p[-2] + 4.0 * p[-3] - p[-4]) / (dr * dr)
    return p_r, p_rr


def radial_derivatives(state: FieldState) -> tuple[np.ndarray, np.ndarray]:
    """重建的 u 的径向导数 (u_r, u_rr)。"""
    return derivatives_of(reconstruct_u(state), state.grid.dr)


def support_radius_of(state: FieldState, tolerance: float = SUPPORT_TOLERANCE) -> Optional[float]:
    """数值支集半径：|v| 或 |w| 超过容差的最大节点半径；零场返回 None。"""
    active = (np.abs(state.v) > tolerance) | (np.abs(state.w) > tolerance)
    if not np.any(active):
        return None
    return float(state.grid.nodes[np.nonzero(active)[0][-1]])
