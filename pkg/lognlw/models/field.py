"""径向网格、场状态与初值的领域模型。"""

from typing import Callable, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, computed_field

from .nonlinearity import NonlinearitySpec

# 径向剖面：r 的数组 -> 同形数组
Profile = Callable[[np.ndarray], np.ndarray]

MIN_CELLS = 16


class RadialGrid(BaseModel):
    """[0, r_max] 上的均匀径向网格，节点 r_j = j·dr，j = 0..n。"""

    model_config = ConfigDict(frozen=True)

    r_max: float = Field(..., gt=0, description="区域半径")
    n: int = Field(..., ge=MIN_CELLS, description="网格单元数")

    @computed_field
    @property
    def dr(self) -> float:
        return self.r_max / self.n

    @property
    def nodes(self) -> np.ndarray:
        """节点坐标，r_0 = 0 与 r_n = r_max 精确成立。"""
        return np.linspace(0.0, self.r_max, self.n + 1)

    def refined(self, factor: int = 2) -> "RadialGrid":
        return RadialGrid(r_max=self.r_max, n=self.n * factor)


class InitialData(BaseModel):
    """径向初值 (u0, u1)。

    support_radius 为 None 表示 Dirichlet 模式：初值不紧支，
    但必须在 r_max 处为零（驻波收敛性研究使用）。
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    u0: Profile
    u1: Profile
    support_radius: Optional[float] = Field(None, gt=0)
    name: str = "custom"


class FieldState(BaseModel):
    """某一时刻的场状态，使用约化变量 v = r·u 与 w = ∂ₜ(r·u)。

    v[0] = w[0] = 0 恒成立。accel 缓存当前层的 v_tt，避免重复计算。
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    t: float = 0.0
    v: np.ndarray
    w: np.ndarray
    grid: RadialGrid
    spec: NonlinearitySpec
    overflowed: bool = False
    accel: Optional[np.ndarray] = Field(None, exclude=True, repr=False)
