"""运行配置文档（YAML）的 Pydantic 模式与加载。

优先级（从高到低）：--set 键路径覆盖、--output-dir、环境变量
LOGNLW_OUTPUT_DIR、配置文件、模型默认值。
"""

import logging
from pathlib import Path
from typing import Any, Literal, Optional, Sequence

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from ..config import get_settings
from ..exceptions import ConfigError
from ..models.certificate import CertifierConstants
from ..models.field import MIN_CELLS, RadialGrid
from ..models.nonlinearity import NonlinearitySpec
from ..models.trajectory import SolveConfig

logger = logging.getLogger(__name__)

ProfileName = Literal["gaussian-bump", "polynomial-bump", "zero", "table", "standing-wave"]
OutputFormat = Literal["trajectory", "diagnostics", "summary", "certificate"]
SweepParameter = Literal["amplitude", "n", "cfl", "sigma"]


class _Block(BaseModel):
    model_config = ConfigDict(extra="forbid")


class NonlinearityBlock(_Block):
    """nonlinearity 块。"""

    p: int = Field(5, description="幂次（正奇数）")
    c: int = Field(1, description="对数幂次，0 或 1")
    sigma: int = Field(1, description="+1 散焦，-1 聚焦")
    enabled: bool = Field(True, description="关闭时求解线性波动方程")

    def to_spec(self) -> NonlinearitySpec:
        return NonlinearitySpec(p=self.p, c=self.c, sigma=self.sigma, enabled=self.enabled)

    @model_validator(mode="after")
    def _valid_spec(self) -> "NonlinearityBlock":
        self.to_spec()
        return self


class GridBlock(_Block):
    """grid 块。"""

    r_max: float = Field(8.0, gt=0, description="区域半径")
    n: int = Field(512, ge=MIN_CELLS, description="网格单元数")

    def to_grid(self) -> RadialGrid:
        return RadialGrid(r_max=self.r_max, n=self.n)


class SolveBlock(_Block):
    """solve 块。"""

    t_final: float = Field(3.0, gt=0, description="终止时刻")
    cfl: float = Field(0.5, gt=0, le=1, description="dt = cfl·dr")
    record_stride: int = Field(1, ge=1, description="每隔多少步记录一次快照")
    overflow_threshold: float = Field(1e30, gt=0, description="max|v| 的溢出阈值")


class DataBlock(_Block):
    """data 块：剖面名称与参数。"""

    profile: ProfileName = "gaussian-bump"
    amplitude: float = 1.0
    width: float = Field(1.0, gt=0)
    center: float = Field(0.0, ge=0)
    support_radius: Optional[float] = Field(3.0, gt=0)
    velocity: float = 0.0
    mode: int = Field(1, ge=1, description="standing-wave 的模数")
    table_path: Optional[str] = None


class OutputBlock(_Block):
    """output 块。"""

    directory: str = "output"
    formats: list[OutputFormat] = Field(
        default_factory=lambda: ["trajectory", "diagnostics", "summary"]
    )


class SweepBlock(_Block):
    """sweep 块。"""

    parameter: Optional[SweepParameter] = None
    values: list[float] = Field(default_factory=list)
    max_workers: Optional[int] = Field(None, ge=1, description="为空时使用 LOGNLW_MAX_WORKERS")


class RunConfig(_Block):
    """完整的运行配置。"""

    nonlinearity: NonlinearityBlock = Field(default_factory=NonlinearityBlock)
    grid: GridBlock = Field(default_factory=GridBlock)
    solve: SolveBlock = Field(default_factory=SolveBlock)
    data: DataBlock = Field(default_factory=DataBlock)
    certifier: CertifierConstants = Field(default_factory=CertifierConstants)
    output: OutputBlock = Field(default_factory=OutputBlock)
    sweep: SweepBlock = Field(default_factory=SweepBlock)

    @model_validator(mode="after")
    def _support_inside_grid(self) -> "RunConfig":
        if self.data.profile in ("gaussian-bump", "polynomial-bump"):
            if self.data.support_radius is None:
                raise ValueError("data.support_radius: 紧支剖面需要支集半径")
            if self.data.support_radius >= self.grid.r_max:
                raise ValueError(
                    f"data.support_radius: {self.data.support_radius} 不小于 grid.r_max = {self.grid.r_max}"
                )
        if self.data.profile == "table" and not self.data.table_path:
            raise ValueError("data.table_path: table 剖面需要初值表路径")
        return self

    @property
    def is_dirichlet(self) -> bool:
        return self.data.profile == "standing-wave"

    def solve_config(self, show_progress: bool = False) -> SolveConfig:
        return SolveConfig(
            t_final=self.solve.t_final,
            cfl=self.solve.cfl,
            record_stride=self.solve.record_stride,
            overflow_threshold=self.solve.overflow_threshold,
            enforce_light_cone=not self.is_dirichlet,
            show_progress=show_progress,
        )

    def with_overrides(self, **values: Any) -> "RunConfig":
        """按键路径（如 data.amplitude）覆盖并重新校验。"""
        raw = self.model_dump()
        for key, value in values.items():
            set_path(raw, key, value)
        return validate_config(raw)


def set_path(raw: dict, key: str, value: Any) -> None:
    """在嵌套字典中按点分隔的键路径赋值。"""
    parts = key.split(".")
    if not all(parts):
        raise ConfigError(f"非法的键路径: {key!r}")
    node = raw
    for part in parts[:-1]:
        child = node.setdefault(part, {})
        if not isinstance(child, dict):
            raise ConfigError(f"键路径 {key!r} 穿过了非映射的值")
        node = child
    node[parts[-1]] = value


def parse_override(item: str) -> tuple[str, Any]:
    """解析 key.path=value，值按 YAML 标量解析。"""
    key, sep, text = item.partition("=")
    if not sep or not key.strip():
        raise ConfigError(f"--set 需要 key.path=value 形式，得到 {item!r}")
    try:
        value = yaml.safe_load(text) if text.strip() else None
    except yaml.YAMLError as exc:
        raise ConfigError(f"--set {key} 的值无法解析: {exc}") from exc
    return key.strip(), value


def _format_validation(exc: ValidationError) -> str:
    lines = []
    for error in exc.errors():
        path = ".".join(str(part) for part in error["loc"]) or "<root>"
        lines.append(f"{path}: {error['msg']}")
    return "; ".join(lines)


def validate_config(raw: dict) -> RunConfig:
    """校验原始字典。

    Raises:
        ConfigError: 任一字段不合法，消息中给出键路径
    """
    try:
        return RunConfig.model_validate(raw)
    except ValidationError as exc:
        raise ConfigError(f"配置不合法: {_format_validation(exc)}") from exc


def read_config_file(path: str) -> dict:
    """读取 YAML 配置文件为字典。"""
    config_path = Path(path)
    if not config_path.exists():
        raise ConfigError(f"配置文件不存在: {path}")
    try:
        with open(config_path, "r", encoding="utf-8") as f:
            raw = yaml.safe_load(f)
    except yaml.YAMLError as exc:
        raise ConfigError(f"配置文件 {path} 不是合法的 YAML: {exc}") from exc
    if raw is None:
        return {}
    if not isinstance(raw, dict):
        raise ConfigError(f"配置文件 {path} 的顶层必须是映射")
    return raw


def load_run_config(
    path: Optional[str] = None,
    overrides: Sequence[str] = (),
    output_dir: Optional[str] = None,
) -> RunConfig:
    """按优先级合并配置来源并校验。

    Args:
        path: YAML 配置文件路径，为空时只用默认值
        overrides: --set key.path=value 列表
        output_dir: --output-dir 参数

    Returns:
        校验后的 RunConfig

    Raises:
        ConfigError: 文件不可读、键路径非法或校验失败
    """
    raw = read_config_file(path) if path else {}

    env_dir = get_settings().output_dir
    if env_dir:
        set_path(raw, "output.directory", env_dir)
    if output_dir:
        set_path(raw, "output.directory", output_dir)
    for item in overrides:
        key, value = parse_override(item)
        set_path(raw, key, value)

    config = validate_config(raw)
    logger.debug("loaded run config from %s with %d overrides", path or "<defaults>", len(overrides))
    return config
