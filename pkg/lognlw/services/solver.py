"""约化方程 v_tt = v_rr − r·f(v/r) 的显式蛙跳积分。

蛙跳格式以 kick-drift-kick 形式实现：
    w_{n+1/2} = w_n + (dt/2)·a_n
    v_{n+1}   = v_n + dt·w_{n+1/2}
    w_{n+1}   = w_{n+1/2} + (dt/2)·a_{n+1}
消去 w 后与三层蛙跳 v_{n+1} = 2v_n − v_{n−1} + dt²·a_n 完全一致，
首步正是二阶 Taylor 启动，且 w_n = (v_{n+1} − v_{n−1})/(2dt)。
"""

import logging
import math
from typing import Callable, Optional

import numpy as np
from scipy.integrate import solve_ivp
from tqdm import tqdm

from ..exceptions import ConeViolationError, ConfigError, FieldOverflowError
from ..models.convergence import ConvergenceReport
from ..models.field import FieldState, InitialData, RadialGrid
from ..models.nonlinearity import NonlinearitySpec
from ..models.trajectory import SolveConfig, Trajectory, TrajectoryStatus
from .nonlinearity import eval_df, eval_f
from .radial_field import sample_initial, support_radius_of

logger = logging.getLogger(__name__)

DEFAULT_OVERFLOW_THRESHOLD = 1e30
_CONE_SLACK = 1e-12


def acceleration(v: np.ndarray, r: np.ndarray, dr: float, spec: NonlinearitySpec) -> np.ndarray:
    """a = D₊D₋v − r·f(v/r)，两端节点为零（v(t,0) = 0 与外边界 Dirichlet）。"""
    a = np.zeros_like(v)
    a[1:-1] = (v[2:] - 2.0 * v[1:-1] + v[:-2]) / (dr * dr)
    if spec.enabled:
        interior = r[1:-1]
        a[1:-1] -= interior * eval_f(spec, v[1:-1] / interior)
    return a


def _overflowed(v: np.ndarray, threshold: float) -> bool:
    return not np.all(np.isfinite(v)) or float(np.max(np.abs(v))) > threshold


def _kick_drift_kick(
    v: np.ndarray,
    w: np.ndarray,
    a: np.ndarray,
    r: np.ndarray,
    dr: float,
    dt: float,
    spec: NonlinearitySpec,
    threshold: float,
    t_new: float,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    w_half = w + 0.5 * dt * a
    v_new = v + dt * w_half
    v_new[0] = 0.0
    v_new[-1] = 0.0
    if _overflowed(v_new, threshold):
        raise FieldOverflowError(f"max|v| 在 t = {t_new:.6g} 超过阈值 {threshold:.3g}", t=t_new)
    a_new = acceleration(v_new, r, dr, spec)
    w_new = w_half + 0.5 * dt * a_new
    w_new[0] = 0.0
    w_new[-1] = 0.0
    return v_new, w_new, a_new


def step(state: FieldState, dt: float, overflow_threshold: float = DEFAULT_OVERFLOW_THRESHOLD) -> FieldState:
    """推进一个时间步。

    Args:
        state: 当前状态
        dt: 时间步长，需满足 dt ≤ dr
        overflow_threshold: max|v| 的溢出阈值

    Returns:
        t + dt 时刻的状态

    Raises:
        ConfigError: dt 超过 CFL 界
        FieldOverflowError: 更新后的 |v| 超过阈值或出现非有限值
    """
    grid = state.grid
    if dt > grid.dr * (1.0 + 1e-12):
        raise ConfigError(f"dt = {dt:.6g} 超过 dr = {grid.dr:.6g}（CFL 条件）")
    if state.overflowed:
        raise FieldOverflowError("状态已标记为溢出", t=state.t)
    r = grid.nodes
    a = state.accel if state.accel is not None else acceleration(state.v, r, grid.dr, state.spec)
    v, w, a = _kick_drift_kick(
        state.v, state.w, a, r, grid.dr, dt, state.spec, overflow_threshold, state.t + dt
    )
    return FieldState(t=state.t + dt, v=v, w=w, grid=grid, spec=state.spec, accel=a)


def reverse(state: FieldState) -> FieldState:
    """时间反演：w → −w。"""
    return state.model_copy(update={"w": -state.w})


def step_count(t_final: float, dt: float) -> int:
    """到达 t_final 所需步数；t_final/dt 接近整数时取整，否则向下取整。"""
    ratio = t_final / dt
    nearest = round(ratio)
    if abs(ratio - nearest) <= 1e-9 * max(1.0, ratio):
        return int(nearest)
    return int(math.floor(ratio))


def check_light_cone(support_radius: float, t_final: float, r_max: float) -> None:
    """有限传播速度：要求 support_radius + t_final ≤ r_max。"""
    if support_radius + t_final > r_max + _CONE_SLACK:
        raise ConeViolationError(
            f"光锥到达外边界: support_radius + t_final = {support_radius + t_final:.6g} > r_max = {r_max:.6g}"
        )


def stability_number(state: FieldState, dt: float) -> float:
    """蛙跳稳定性数 dt²·ω²_max/4，超过 1 时格式线性不稳定。

    ω²_max = 4cos²(π/2n)/dr² + max(f′(u), 0)，f′ 取当前内部节点上的最大值。
    """
    grid = state.grid
    omega2 = 4.0 * math.cos(math.pi / (2 * grid.n)) ** 2 / (grid.dr * grid.dr)
    if state.spec.enabled and grid.n > 1:
        u = state.v[1:-1] / grid.nodes[1:-1]
        omega2 += max(float(np.max(eval_df(state.spec, u))), 0.0)
    return dt * dt * omega2 / 4.0


def _snapshot(template: FieldState, t: float, v: np.ndarray, w: np.ndarray, a: np.ndarray) -> FieldState:
    return FieldState(t=t, v=v.copy(), w=w.copy(), grid=template.grid, spec=template.spec, accel=a.copy())


def evolve(
    state: FieldState,
    config: SolveConfig,
    support_radius: Optional[float] = None,
) -> Trajectory:
    """从给定状态积分到 t_final，每 record_stride 步记录一次快照。

    Args:
        state: 初始状态
        config: 积分配置
        support_radius: 初值的支集半径；为 None 时由状态推断

    Returns:
        轨迹；溢出时返回截至最后一个有限状态的部分轨迹

    Raises:
        ConeViolationError: 光锥会到达外边界
    """
    grid = state.grid
    dr = grid.dr
    dt = config.cfl * dr

    if config.enforce_light_cone:
        if support_radius is None:
            support_radius = support_radius_of(state) or 0.0
        check_light_cone(support_radius, config.t_final, grid.r_max)

    stability = stability_number(state, dt)
    if stability > 1.0:
        logger.warning(
            "leapfrog stability number %.3g > 1 (n=%d, dt=%.6g): expect spurious growth; refine the grid or lower cfl",
            stability, grid.n, dt,
        )

    n_steps = step_count(config.t_final, dt)
    r = grid.nodes
    v = np.array(state.v, dtype=float)
    w = np.array(state.w, dtype=float)
    a = state.accel if state.accel is not None else acceleration(v, r, dr, state.spec)

    logger.info(
        "evolve %s: n=%d, dt=%.6g, steps=%d, stride=%d",
        state.spec.label, grid.n, dt, n_steps, config.record_stride,
    )

    states = [_snapshot(state, state.t, v, w, a)]
    status = TrajectoryStatus.COMPLETED
    last_recorded = 0
    iterator = range(1, n_steps + 1)
    if config.show_progress:
        iterator = tqdm(iterator, desc="evolve", unit="step")

    for k in iterator:
        t_new = state.t + k * dt
        try:
            v_new, w_new, a_new = _kick_drift_kick(
                v, w, a, r, dr, dt, state.spec, config.overflow_threshold, t_new
            )
        except FieldOverflowError as exc:
            logger.warning("run overflowed: %s", exc)
            if last_recorded != k - 1:
                states.append(_snapshot(state, state.t + (k - 1) * dt, v, w, a))
            status = TrajectoryStatus.OVERFLOWED
            break
        v, w, a = v_new, w_new, a_new
        if k % config.record_stride == 0 or k == n_steps:
            states.append(_snapshot(state, t_new, v, w, a))
            last_recorded = k

    logger.info("evolve finished: status=%s, t_end=%.6g, snapshots=%d", status.value, states[-1].t, len(states))
    return Trajectory(
        states=states,
        dt=dt,
        status=status,
        record_stride=config.record_stride,
        support_radius=support_radius,
    )


def reference_step(state: FieldState, dt: float, rtol: float = 1e-13, atol: float = 1e-15) -> FieldState:
    """用高阶 Runge-Kutta（DOP853）在同一空间半离散上积分一步，作为参照解。"""
    grid = state.grid
    r = grid.nodes
    size = grid.n + 1

    def rhs(_t: float, y: np.ndarray) -> np.ndarray:
        v, w = y[:size], y[size:]
        return np.concatenate([w, acceleration(v, r, grid.dr, state.spec)])

    solution = solve_ivp(
        rhs, (0.0, dt), np.concatenate([state.v, state.w]), method="DOP853", rtol=rtol, atol=atol
    )
    y = solution.y[:, -1]
    return FieldState(t=state.t + dt, v=y[:size], w=y[size:], grid=grid, spec=state.spec)


def _final_field(
    data: InitialData,
    spec: NonlinearitySpec,
    grid: RadialGrid,
    t_final: float,
    cfl: float,
) -> np.ndarray:
    steps = max(1, math.ceil(t_final / (cfl * grid.dr) - 1e-9))
    level_cfl = t_final / steps / grid.dr
    config = SolveConfig(
        t_final=t_final,
        cfl=level_cfl,
        record_stride=steps,
        enforce_light_cone=data.support_radius is not None,
    )
    state = sample_initial(grid, spec, data)
    trajectory = evolve(state, config, support_radius=data.support_radius)
    if trajectory.status is not TrajectoryStatus.COMPLETED:
        raise FieldOverflowError(f"收敛性研究在 n={grid.n} 时溢出", t=trajectory.t_end)
    return trajectory.states[-1].v


def convergence_order(
    data: InitialData,
    spec: NonlinearitySpec,
    base_n: int,
    levels: int,
    *,
    r_max: float,
    t_final: float,
    cfl: float = 0.5,
    exact: Optional[Callable[[float, np.ndarray], np.ndarray]] = None,
) -> ConvergenceReport:
    """网格加密下的观测收敛阶。

    给定闭式解 exact(t, r) 时，在 n, 2n, ... 共 levels 级上计算最大节点误差；
    否则运行 levels + 1 级，用相邻两级在公共节点上的差做自收敛。
    每级调整 dt 使所有级别精确到达同一 t_final。

    Raises:
        ConfigError: levels < 2
    """
    if levels < 2:
        raise ConfigError("收敛性研究至少需要 2 级")

    runs = levels if exact is not None else levels + 1
    grids = [RadialGrid(r_max=r_max, n=base_n * 2**k) for k in range(runs)]
    finals = [_final_field(data, spec, grid, t_final, cfl) for grid in grids]

    if exact is not None:
        errors = [
            float(np.max(np.abs(final - exact(t_final, grid.nodes))))
            for grid, final in zip(grids, finals)
        ]
        reference = "exact"
    else:
        errors = [
            float(np.max(np.abs(coarse - fine[::2])))
            for coarse, fine in zip(finals[:-1], finals[1:])
        ]
        reference = "self"

    ns = [grid.n for grid in grids[: len(errors)]]
    if all(error == 0.0 for error in errors):
        return ConvergenceReport(ns=ns, errors=errors, observed_order=math.inf, reference=reference, exact=True)

    orders = []
    for coarse, fine in zip(errors[:-1], errors[1:]):
        if fine == 0.0:
            orders.append(math.inf)
        elif coarse == 0.0:
            orders.append(0.0)
        else:
            orders.append(math.log2(coarse / fine))
    observed = orders[-1] if orders else math.nan
    logger.info("convergence (%s): errors=%s, orders=%s", reference, errors, orders)
    return ConvergenceReport(ns=ns, errors=errors, orders=orders, observed_order=observed, reference=reference)
