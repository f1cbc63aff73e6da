"""时间积分配置与轨迹的领域模型。"""

from enum import Enum
from typing import Any, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr

from .field import FieldState, RadialGrid
from .nonlinearity import NonlinearitySpec


class TrajectoryStatus(str, Enum):
    """轨迹的终止原因。"""

    COMPLETED = "completed"
    OVERFLOWED = "overflowed"
    CONE_VIOLATION = "cone-violation"


class SolveConfig(BaseModel):
    """蛙跳积分配置，dt = cfl·dr。"""

    model_config = ConfigDict(frozen=True)

    t_final: float = Field(..., gt=0)
    cfl: float = Field(0.5, gt=0, le=1)
    record_stride: int = Field(1, ge=1)
    overflow_threshold: float = Field(1e30, gt=0)
    enforce_light_cone: bool = True
    show_progress: bool = False


class Trajectory(BaseModel):
    """按时间排序的快照序列。

    快照间隔为 record_stride·dt；最后一个快照总是终止时刻的状态，
    因此最后一个间隔可能更短。逐快照诊断量缓存在私有属性中。
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    states: list[FieldState]
    dt: float
    status: TrajectoryStatus = TrajectoryStatus.COMPLETED
    record_stride: int = 1
    support_radius: Optional[float] = None

    _norm_cache: Optional[list[Any]] = PrivateAttr(default=None)

    @property
    def grid(self) -> RadialGrid:
        return self.states[0].grid

    @property
    def spec(self) -> NonlinearitySpec:
        return self.states[0].spec

    @property
    def times(self) -> np.ndarray:
        return np.array([state.t for state in self.states])

    @property
    def t_start(self) -> float:
        return self.states[0].t

    @property
    def t_end(self) -> float:
        return self.states[-1].t

    def __len__(self) -> int:
        return len(self.states)
