"""轨迹转储文件的读写。

格式为 CSV：
    # lognlw-trajectory v1
    # key=value              （r_max, n, dr, p, c, sigma, enabled, dt, record_stride,
    #                           status, support_radius, snapshots）
    t,v_0,...,v_n,w_0,...,w_n
    <每个快照一行>
    # end
浮点数以 17 位有效数字写出，读回后逐位一致。截断的文件（缺少
结尾行或行数不符）视为格式错误。
"""

import csv
import logging
import math
from pathlib import Path
from typing import Iterable, Optional

import numpy as np

from ..exceptions import DumpFormatError
from ..models.field import FieldState, RadialGrid
from ..models.nonlinearity import NonlinearitySpec
from ..models.trajectory import Trajectory, TrajectoryStatus

logger = logging.getLogger(__name__)

MAGIC = "# lognlw-trajectory v1"
TRAILER = "# end"
_DR_RTOL = 1e-12


def fmt(value: float) -> str:
    """17 位有效数字。"""
    return format(float(value), ".17g")


def _header(trajectory: Trajectory) -> list[tuple[str, str]]:
    grid, spec = trajectory.grid, trajectory.spec
    support = trajectory.support_radius
    return [
        ("r_max", fmt(grid.r_max)),
        ("n", str(grid.n)),
        ("dr", fmt(grid.dr)),
        ("p", str(spec.p)),
        ("c", str(spec.c)),
        ("sigma", str(spec.sigma)),
        ("enabled", "true" if spec.enabled else "false"),
        ("dt", fmt(trajectory.dt)),
        ("record_stride", str(trajectory.record_stride)),
        ("status", trajectory.status.value),
        ("support_radius", "none" if support is None else fmt(support)),
        ("snapshots", str(len(trajectory))),
    ]


def _column_names(n: int) -> list[str]:
    return ["t"] + [f"v_{j}" for j in range(n + 1)] + [f"w_{j}" for j in range(n + 1)]


def write_trajectory(trajectory: Trajectory, path: Path) -> Path:
    """写出轨迹转储。"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(MAGIC + "\n")
        for key, value in _header(trajectory):
            f.write(f"# {key}={value}\n")
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(_column_names(trajectory.grid.n))
        for state in trajectory.states:
            writer.writerow([fmt(state.t)] + [fmt(x) for x in state.v] + [fmt(x) for x in state.w])
        f.write(TRAILER + "\n")
    logger.info("wrote trajectory dump %s (%d snapshots)", path, len(trajectory))
    return path


def _parse_header(lines: Iterable[str]) -> dict[str, str]:
    header: dict[str, str] = {}
    for line in lines:
        key, sep, value = line[1:].strip().partition("=")
        if not sep:
            raise DumpFormatError(f"无法解析的头部行: {line.strip()!r}")
        header[key.strip()] = value.strip()
    return header


def _require(header: dict[str, str], key: str, cast):
    if key not in header:
        raise DumpFormatError(f"转储头部缺少 {key}")
    try:
        return cast(header[key])
    except (ValueError, TypeError) as exc:
        raise DumpFormatError(f"转储头部 {key}={header[key]!r} 无法解析") from exc


def _parse_bool(text: str) -> bool:
    if text not in ("true", "false"):
        raise ValueError(text)
    return text == "true"


def _parse_support(text: str) -> Optional[float]:
    return None if text == "none" else float(text)


def read_trajectory(path: Path) -> Trajectory:
    """读取轨迹转储。

    Raises:
        DumpFormatError: 文件不存在、头部缺失、行长度不符、被截断或含非有限值
    """
    path = Path(path)
    if not path.exists():
        raise DumpFormatError(f"转储文件不存在: {path}")
    with open(path, "r", encoding="utf-8", newline="") as f:
        lines = f.read().splitlines()

    if not lines or lines[0].strip() != MAGIC:
        raise DumpFormatError(f"{path} 不是 lognlw 轨迹转储")
    if lines[-1].strip() != TRAILER:
        raise DumpFormatError(f"{path} 缺少结尾行，文件可能被截断")

    body_start = 1
    while body_start < len(lines) and lines[body_start].startswith("#"):
        body_start += 1
    header = _parse_header(lines[1:body_start])

    try:
        grid = RadialGrid(r_max=_require(header, "r_max", float), n=_require(header, "n", int))
        dr = _require(header, "dr", float)
        if not math.isclose(dr, grid.dr, rel_tol=_DR_RTOL):
            raise DumpFormatError(f"转储头部 dr={dr!r} 与 r_max/n = {grid.dr!r} 不一致")
        spec = NonlinearitySpec(
            p=_require(header, "p", int),
            c=_require(header, "c", int),
            sigma=_require(header, "sigma", int),
            enabled=_require(header, "enabled", _parse_bool),
        )
        status = TrajectoryStatus(_require(header, "status", str))
    except DumpFormatError:
        raise
    except ValueError as exc:
        raise DumpFormatError(f"转储头部不合法: {exc}") from exc
    dt = _require(header, "dt", float)
    record_stride = _require(header, "record_stride", int)
    support = _require(header, "support_radius", _parse_support)
    expected = _require(header, "snapshots", int)

    rows = list(csv.reader(lines[body_start:-1]))
    if not rows or rows[0] != _column_names(grid.n):
        raise DumpFormatError(f"{path} 的列名与 n={grid.n} 不符")
    rows = rows[1:]
    if len(rows) != expected:
        raise DumpFormatError(f"{path} 声明 {expected} 个快照，实际 {len(rows)} 个")

    width = 2 * (grid.n + 1) + 1
    states: list[FieldState] = []
    for index, row in enumerate(rows):
        if len(row) != width:
            raise DumpFormatError(f"{path} 第 {index} 个快照有 {len(row)} 列，应为 {width}")
        try:
            values = np.array([float(item) for item in row])
        except ValueError as exc:
            raise DumpFormatError(f"{path} 第 {index} 个快照含无法解析的数值") from exc
        if not np.all(np.isfinite(values)):
            raise DumpFormatError(f"{path} 第 {index} 个快照含非有限值")
        states.append(
            FieldState(
                t=float(values[0]),
                v=values[1 : grid.n + 2],
                w=values[grid.n + 2 :],
                grid=grid,
                spec=spec,
            )
        )
    if not states:
        raise DumpFormatError(f"{path} 不含任何快照")
    times = [state.t for state in states]
    if any(b <= a for a, b in zip(times[:-1], times[1:])) or not all(math.isfinite(t) for t in times):
        raise DumpFormatError(f"{path} 的快照时间不是严格递增的")

    logger.info("read trajectory dump %s (%d snapshots)", path, len(states))
    return Trajectory(
        states=states,
        dt=dt,
        status=status,
        record_stride=record_stride,
        support_radius=support,
    )
