"""运行编排：配置 → 初值 → 轨迹 → 诊断 → 摘要；参数扫描与收敛性研究。

扫描使用线程池并发执行，每个任务拥有自己的轨迹；结果按参数值
的给定顺序合并，与完成顺序无关。
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Sequence

from pydantic import BaseModel, ConfigDict
from tqdm import tqdm

from ..config import get_settings
from ..exceptions import ConeViolationError, ConfigError, DegenerateError, LogNLWError
from ..models.certificate import CertifierConstants
from ..models.convergence import ConvergenceReport
from ..models.diagnostics import DiagnosticsReport
from ..models.field import InitialData
from ..models.trajectory import Trajectory, TrajectoryStatus
from ..schemas.run_config import RunConfig
from ..schemas.summary import RunSummary, SweepRow
from .certifier import check_cbound, double_exp_bound, double_exp_holds
from .diagnostics import build_report
from .profiles import build_initial_data, standing_wave_solution
from .radial_field import sample_initial
from .solver import check_light_cone, convergence_order, evolve

logger = logging.getLogger(__name__)

# 扫描参数 -> 配置键路径与取值类型
SWEEP_KEYS = {
    "amplitude": ("data.amplitude", float),
    "n": ("grid.n", int),
    "cfl": ("solve.cfl", float),
    "sigma": ("nonlinearity.sigma", int),
}


def initial_data_for(config: RunConfig) -> InitialData:
    """按 data 块构造初值；standing-wave 的半径取 grid.r_max。"""
    data = config.data
    return build_initial_data(
        data.profile,
        amplitude=data.amplitude,
        width=data.width,
        center=data.center,
        support_radius=data.support_radius,
        velocity=data.velocity,
        mode=data.mode,
        r_max=config.grid.r_max,
        table_path=data.table_path,
    )


class RunResult(BaseModel):
    """一次运行的全部产物。"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    config: RunConfig
    trajectory: Trajectory
    report: DiagnosticsReport
    summary: RunSummary


def summarize(trajectory: Trajectory, report: DiagnosticsReport, k: CertifierConstants) -> RunSummary:
    """由诊断报告生成摘要；零解的自举比值记为空，未完成的运行不给出派生的比值与界。"""
    summary = RunSummary(
        status=trajectory.status.value,
        t_end=trajectory.t_end,
        n=trajectory.grid.n,
        dt=trajectory.dt,
        snapshots=len(trajectory),
        E=report.E,
        A=report.A,
        B=report.B,
        D=report.D,
        morawetz_flux=report.morawetz_flux,
        morawetz_bound=report.morawetz_bound,
        energy_drift=report.energy_drift,
        sobolev_ratio_max=report.sobolev_ratio_max,
        strichartz_lhs=report.strichartz_lhs,
        strichartz_rhs=report.strichartz_rhs,
        max_sup_u=max(row.sup_u for row in report.snapshots),
    )
    if trajectory.status is not TrajectoryStatus.COMPLETED:
        return summary

    summary.strichartz_ratio = report.strichartz_ratio
    summary.a_over_e2 = report.a_over_e2
    summary.double_exp_bound = double_exp_bound(report.D, k.kappa_a * max(report.A, 0.0), k)
    summary.B_le_bound = double_exp_holds(report, k)
    try:
        check = check_cbound(report, k.cbound_margin)
        summary.cbound_ratio, summary.cbound_passed = check.ratio, check.passed
    except DegenerateError:
        pass
    return summary


class RunService:
    """运行服务。"""

    def __init__(self, max_workers: Optional[int] = None, show_progress: Optional[bool] = None):
        settings = get_settings()
        self.max_workers = max_workers or settings.max_workers
        self.show_progress = settings.show_progress if show_progress is None else show_progress

    def execute(self, config: RunConfig) -> RunResult:
        """执行一次运行。溢出不是异常：轨迹状态为 overflowed，诊断覆盖已完成的部分。

        Raises:
            ConeViolationError: 光锥会到达外边界，不做任何积分
            ConfigError: 初值不被支持或分辨率不足
        """
        spec = config.nonlinearity.to_spec()
        grid = config.grid.to_grid()
        data = initial_data_for(config)

        if not config.is_dirichlet:
            check_light_cone(data.support_radius, config.solve.t_final, grid.r_max)

        state = sample_initial(grid, spec, data)
        trajectory = evolve(
            state,
            config.solve_config(show_progress=self.show_progress),
            support_radius=data.support_radius,
        )
        report = build_report(trajectory, morawetz_constant=config.certifier.morawetz_constant)
        summary = summarize(trajectory, report, config.certifier)
        logger.info(
            "run %s: status=%s E=%.6g A=%.6g B=%.6g D=%.6g",
            data.name, summary.status, summary.E, summary.A, summary.B, summary.D,
        )
        return RunResult(config=config, trajectory=trajectory, report=report, summary=summary)

    def _sweep_row(self, config: RunConfig, parameter: str, value: float) -> SweepRow:
        key, cast = SWEEP_KEYS[parameter]
        try:
            run_config = config.with_overrides(**{key: cast(value)})
            summary = self.execute(run_config).summary
        except ConeViolationError as exc:
            logger.warning("sweep %s=%s: %s", parameter, value, exc)
            return SweepRow(parameter=parameter, value=value, status="cone-violation", error=str(exc))
        except LogNLWError as exc:
            logger.warning("sweep %s=%s failed: %s", parameter, value, exc)
            return SweepRow(parameter=parameter, value=value, status="error", error=str(exc))

        # 未完成运行的 A、B 只覆盖部分时间窗
        completed = summary.status == TrajectoryStatus.COMPLETED.value
        return SweepRow(
            parameter=parameter,
            value=value,
            status=summary.status,
            t_end=summary.t_end,
            E=summary.E,
            A=summary.A if completed else None,
            B=summary.B if completed else None,
            D=summary.D,
            a_over_e2=summary.a_over_e2,
            double_exp_bound=summary.double_exp_bound,
            B_le_bound=summary.B_le_bound,
            sobolev_ratio_max=summary.sobolev_ratio_max,
            strichartz_ratio=summary.strichartz_ratio,
            cbound_ratio=summary.cbound_ratio,
            max_sup_u=summary.max_sup_u,
        )

    def sweep(self, config: RunConfig, parameter: str, values: Sequence[float]) -> list[SweepRow]:
        """对一个参数的取值列表逐一运行，返回与 values 同序的表。

        Raises:
            ConfigError: 未知的扫描参数
        """
        if parameter not in SWEEP_KEYS:
            raise ConfigError(f"未知的扫描参数: {parameter}，可选 {', '.join(SWEEP_KEYS)}")
        values = list(values)
        if not values:
            return []

        workers = config.sweep.max_workers or self.max_workers
        logger.info("sweep %s over %d values with %d workers", parameter, len(values), workers)
        # 扫描内部的单次运行不显示进度条
        worker = RunService(max_workers=1, show_progress=False)
        with ThreadPoolExecutor(max_workers=workers, thread_name_prefix="lognlw-sweep-") as executor:
            rows = executor.map(lambda value: worker._sweep_row(config, parameter, value), values)
            if self.show_progress:
                rows = tqdm(rows, total=len(values), desc=f"sweep {parameter}")
            return list(rows)

    def convergence(self, config: RunConfig, levels: int) -> ConvergenceReport:
        """以 config.grid.n 为最粗网格的收敛性研究。

        线性驻波使用闭式解；其余情形做自收敛。
        """
        spec = config.nonlinearity.to_spec()
        exact = None
        if config.is_dirichlet and not spec.enabled:
            exact = standing_wave_solution(config.data.amplitude, config.data.mode, config.grid.r_max)
        report = convergence_order(
            initial_data_for(config),
            spec,
            config.grid.n,
            levels,
            r_max=config.grid.r_max,
            t_final=config.solve.t_final,
            cfl=config.solve.cfl,
            exact=exact,
        )
        if not math.isnan(report.observed_order):
            logger.info("observed order %.4f over %s", report.observed_order, report.ns)
        return report


def get_run_service() -> RunService:
    """获取运行服务实例。"""
    return RunService()
