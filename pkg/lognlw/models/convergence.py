"""收敛阶研究结果。"""

import math

from pydantic import BaseModel, Field


class ConvergenceReport(BaseModel):
    """逐级误差与观测到的收敛阶。

    reference 为 "exact" 时误差相对闭式解；为 "self" 时为相邻两级差。
    exact 为 True 表示差值恒为零（例如零初值）。
    """

    ns: list[int]
    errors: list[float]
    orders: list[float] = Field(default_factory=list)
    observed_order: float = math.nan
    reference: str = "self"
    exact: bool = False

    def passes(self, minimum: float = 1.8) -> bool:
        return self.exact or self.observed_order >= minimum
