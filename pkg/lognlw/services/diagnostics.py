"""离散状态与轨迹上的连续量：能量、Morawetz 积分、A、B、D、
径向 Sobolev 比值以及 Strichartz 两侧。

空间积分统一使用径向测度 4πr²dr 的梯形权重；Morawetz 的 1/|x|
权重折进被积函数（净权重 4πr），因此没有奇异节点。时间范数使用
快照层面的分段线性插值并精确积分，于是相邻窗口严格可加。
所有约简使用 math.fsum，求和顺序固定。
"""

import logging
import math
from typing import Optional

import numpy as np

from ..exceptions import DegenerateError, WindowError
from ..models.diagnostics import DiagnosticsReport, NormSnapshot
from ..models.field import FieldState, RadialGrid
from ..models.trajectory import Trajectory
from .nonlinearity import eval_F, eval_f, eval_G
from .radial_field import derivatives_of, reconstruct_u, reconstruct_ut

logger = logging.getLogger(__name__)

FOUR_PI = 4.0 * math.pi
DEGENERATE_GRADIENT = 1e-14
_WINDOW_SLACK = 1e-12

Window = tuple[float, float]


def trapezoid_weights(grid: RadialGrid) -> np.ndarray:
    weights = np.full(grid.n + 1, grid.dr)
    weights[0] = weights[-1] = 0.5 * grid.dr
    return weights


def _radial_integral(grid: RadialGrid, weight: np.ndarray, density: np.ndarray) -> float:
    """4π·Σ_j ω_j·weight_j·density_j。"""
    return FOUR_PI * math.fsum(trapezoid_weights(grid) * weight * density)


class _Fields:
    """一个状态的重建量与导数，供各个范数共享。"""

    def __init__(self, state: FieldState):
        grid = state.grid
        self.grid = grid
        self.r = grid.nodes
        self.r2 = self.r * self.r
        self.u = reconstruct_u(state)
        self.ut = reconstruct_ut(state)
        self.u_r, self.u_rr = derivatives_of(self.u, grid.dr)
        self.ut_r, _ = derivatives_of(self.ut, grid.dr)
        # (u_r/r) 在原点取极限 u_rr(0)
        self.u_r_over_r = np.empty_like(self.u)
        self.u_r_over_r[1:] = self.u_r[1:] / self.r[1:]
        self.u_r_over_r[0] = self.u_rr[0]

    def grad_norm_sq(self) -> float:
        return _radial_integral(self.grid, self.r2, self.ut**2 + self.u_r**2)

    def spatial_grad_norm_sq(self) -> float:
        return _radial_integral(self.grid, self.r2, self.u_r**2)

    def hess_norm_sq(self) -> float:
        """‖∇ₓ∂ₜu‖² + ‖∇ₓ²u‖²，径向 Hessian：|∇²u|² = u_rr² + 2(u_r/r)²。"""
        integrand = self.ut_r**2 + self.u_rr**2 + 2.0 * self.u_r_over_r**2
        return _radial_integral(self.grid, self.r2, integrand)


def energy(state: FieldState) -> float:
    """E = 4π∫(½u_t² + ½u_r² + F(u)) r² dr。"""
    fields = _Fields(state)
    density = 0.5 * fields.ut**2 + 0.5 * fields.u_r**2 + np.asarray(eval_F(state.spec, fields.u))
    return _radial_integral(state.grid, fields.r2, density)


def norm_D(state: FieldState) -> float:
    """D = ‖∇_{t,x}u‖_{H¹} = (‖∇_{t,x}u‖₂² + ‖∇ₓ∇_{t,x}u‖₂²)^{1/2}。"""
    fields = _Fields(state)
    return math.sqrt(fields.grad_norm_sq() + fields.hess_norm_sq())


def _sobolev_ratio(fields: _Fields) -> float:
    grad_norm = math.sqrt(fields.spatial_grad_norm_sq())
    if grad_norm < DEGENERATE_GRADIENT:
        raise DegenerateError(f"‖∇u‖₂ = {grad_norm:.3e} 过小，Sobolev 比值无定义")
    return float(np.max(np.abs(fields.u[1:]) * np.sqrt(fields.r[1:]))) / grad_norm


def radial_sobolev_ratio(state: FieldState) -> float:
    """max_{j≥1} |u_j|·r_j^{1/2} / ‖∇ₓu‖₂，理论上界为 (4π)^{-1/2}。

    Raises:
        DegenerateError: 梯度范数低于 1e-14
    """
    return _sobolev_ratio(_Fields(state))


def snapshot_norms(state: FieldState) -> NormSnapshot:
    """计算单个状态的全部逐时刻量。"""
    spec = state.spec
    fields = _Fields(state)
    u = fields.u
    F = np.asarray(eval_F(spec, u))
    G = np.asarray(eval_G(spec, u))
    f = np.asarray(eval_f(spec, u))

    grad_sq = fields.grad_norm_sq()
    hess_sq = fields.hess_norm_sq()
    with np.errstate(over="ignore"):
        a_integrand = np.abs(u) ** 8 * np.log(2.0 + u * u)
    try:
        sobolev = _sobolev_ratio(fields)
    except DegenerateError:
        sobolev = 0.0

    return NormSnapshot(
        t=state.t,
        energy=_radial_integral(
            state.grid, fields.r2, 0.5 * fields.ut**2 + 0.5 * fields.u_r**2 + F
        ),
        sup_u=float(np.max(np.abs(u))),
        sup_du=float(np.max(np.abs(fields.u_r))),
        l2_grad=math.sqrt(grad_sq),
        l2_hess=math.sqrt(hess_sq),
        h1_grad=math.sqrt(grad_sq + hess_sq),
        l2_nonlinearity=math.sqrt(_radial_integral(state.grid, fields.r2, f * f)),
        morawetz_density=_radial_integral(state.grid, fields.r, G),
        a_density=_radial_integral(state.grid, fields.r2, a_integrand),
        sobolev_ratio=sobolev,
    )


def trajectory_norms(trajectory: Trajectory) -> list[NormSnapshot]:
    """逐快照诊断量，缓存在轨迹上。"""
    if trajectory._norm_cache is None:
        trajectory._norm_cache = [snapshot_norms(state) for state in trajectory.states]
    return trajectory._norm_cache


# ---------------------------------------------------------------------------
# 时间方向的约简
# ---------------------------------------------------------------------------


def resolve_window(trajectory: Trajectory, window: Optional[Window] = None) -> Window:
    """校验时间窗口；None 表示整条轨迹。

    Raises:
        WindowError: 窗口不在轨迹时间范围内或端点颠倒
    """
    t0, t1 = trajectory.t_start, trajectory.t_end
    if window is None:
        return t0, t1
    a, b = float(window[0]), float(window[1])
    slack = _WINDOW_SLACK * max(1.0, abs(t1))
    if a > b or a < t0 - slack or b > t1 + slack:
        raise WindowError(f"时间窗口 [{a:.6g}, {b:.6g}] 超出轨迹范围 [{t0:.6g}, {t1:.6g}]")
    return max(a, t0), min(b, t1)


def _value_at(times: np.ndarray, values: np.ndarray, t: float) -> float:
    return float(np.interp(t, times, values))


def gap_integrals(times: np.ndarray, values: np.ndarray, window: Window) -> list[float]:
    """分段线性插值在窗口与每个快照间隔交集上的精确积分。"""
    a, b = window
    lo = np.maximum(times[:-1], a)
    hi = np.minimum(times[1:], b)
    keep = hi > lo
    lo, hi = lo[keep], hi[keep]
    # 在快照时刻上 np.interp 逐位返回快照值，整段的分片与子窗口的分片一致
    pieces = 0.5 * (hi - lo) * (np.interp(lo, times, values) + np.interp(hi, times, values))
    return pieces.tolist()


def time_integral(times: np.ndarray, values: np.ndarray, window: Window) -> float:
    return math.fsum(gap_integrals(times, values, window))


def time_sup(times: np.ndarray, values: np.ndarray, window: Window) -> float:
    a, b = window
    candidates = [_value_at(times, values, a), _value_at(times, values, b)]
    inside = (times > a) & (times < b)
    candidates.extend(float(value) for value in values[inside])
    return max(candidates)


def _series(trajectory: Trajectory, attribute: str) -> tuple[np.ndarray, np.ndarray]:
    norms = trajectory_norms(trajectory)
    return trajectory.times, np.array([getattr(row, attribute) for row in norms])


def accumulate_A(trajectory: Trajectory, window: Optional[Window] = None) -> float:
    """A = ∫_I ∫ |u|⁸log(2+u²) dx dt。"""
    span = resolve_window(trajectory, window)
    return time_integral(*_series(trajectory, "a_density"), span)


def morawetz_flux(trajectory: Trajectory, window: Optional[Window] = None) -> float:
    """∫_I ∫ G(u)/|x| dx dt。"""
    span = resolve_window(trajectory, window)
    return time_integral(*_series(trajectory, "morawetz_density"), span)


def _l2_in_time(trajectory: Trajectory, attribute: str, span: Window) -> float:
    times, values = _series(trajectory, attribute)
    return math.sqrt(max(time_integral(times, values**2, span), 0.0))


def _sup_in_time(trajectory: Trajectory, attribute: str, span: Window) -> float:
    return time_sup(*_series(trajectory, attribute), span)


def norm_B_parts(trajectory: Trajectory, window: Optional[Window] = None) -> dict[str, float]:
    """B 的四个分量。"""
    span = resolve_window(trajectory, window)
    return {
        "u_l2_linf": _l2_in_time(trajectory, "sup_u", span),
        "du_l2_linf": _l2_in_time(trajectory, "sup_du", span),
        "grad_linf_l2": _sup_in_time(trajectory, "l2_grad", span),
        "hess_linf_l2": _sup_in_time(trajectory, "l2_hess", span),
    }


def norm_B(trajectory: Trajectory, window: Optional[Window] = None) -> float:
    """B = Σ_{j=0,1} ‖∇ʲu‖_{L²ₜL^∞ₓ} + ‖∇_{t,x}∇ʲu‖_{L^∞ₜL²ₓ}。"""
    return math.fsum(norm_B_parts(trajectory, window).values())


def strichartz_sides(trajectory: Trajectory, window: Optional[Window] = None) -> tuple[float, float]:
    """(lhs, rhs)：
    lhs = ‖u‖_{L²ₜL^∞ₓ} + ‖∇_{t,x}u‖_{L^∞ₜL²ₓ}，
    rhs = ‖∇_{t,x}u(t₀)‖₂ + ‖f(u)‖_{L¹ₜL²ₓ}。
    """
    span = resolve_window(trajectory, window)
    lhs = _l2_in_time(trajectory, "sup_u", span) + _sup_in_time(trajectory, "l2_grad", span)
    times, grad = _series(trajectory, "l2_grad")
    rhs = _value_at(times, grad, span[0]) + time_integral(*_series(trajectory, "l2_nonlinearity"), span)
    return lhs, rhs


def build_report(
    trajectory: Trajectory,
    window: Optional[Window] = None,
    morawetz_constant: Optional[float] = None,
) -> DiagnosticsReport:
    """汇总一条轨迹（或其中一个窗口）的全部诊断量。"""
    span = resolve_window(trajectory, window)
    norms = trajectory_norms(trajectory)
    times = trajectory.times
    selected = [row for row, t in zip(norms, times) if span[0] <= t <= span[1]]
    if not selected:
        selected = [norms[0]]

    first = selected[0]
    E = first.energy
    drift = 0.0
    if E != 0.0:
        drift = max(abs(row.energy - E) for row in selected) / abs(E)
    lhs, rhs = strichartz_sides(trajectory, span)

    report = DiagnosticsReport(
        snapshots=selected,
        window=span,
        A=accumulate_A(trajectory, span),
        morawetz_flux=morawetz_flux(trajectory, span),
        B=norm_B(trajectory, span),
        D=first.h1_grad,
        E=E,
        energy_drift=drift,
        sobolev_ratio_max=max(row.sobolev_ratio for row in selected),
        strichartz_lhs=lhs,
        strichartz_rhs=rhs,
        record_stride=trajectory.record_stride,
        morawetz_bound=None if morawetz_constant is None else morawetz_constant * E * E,
    )
    logger.debug("report over [%.6g, %.6g]: A=%.6g B=%.6g D=%.6g E=%.6g", *span, report.A, report.B, report.D, E)
    return report
