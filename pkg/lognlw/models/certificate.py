"""时间区间划分证书的领域模型。"""

from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field


class CertifierConstants(BaseModel):
    """证书使用的常数。

    eps0、C0、kappa 是论证中的“绝对常数”；kappa_a、kappa_b、
    cbound_margin、morawetz_constant 为对标准算例校准后冻结的经验常数。
    """

    model_config = ConfigDict(frozen=True)

    eps0: float = Field(0.01, gt=0, description="小性常数 ε₀")
    C0: float = Field(2.0, gt=1, description="每个区间的增长常数 C₀")
    kappa: float = Field(100.0, gt=0, description="区间数上界 (2+D)^{κA} 中的 κ")
    kappa_a: float = Field(1.0, gt=0, description="双指数比较中 A 的放大系数")
    kappa_b: float = Field(10.0, gt=0, description="区间内 B_n ≤ κ_B·D_n 的比例")
    cbound_margin: float = Field(10.0, gt=0, description="自举不等式的经验常数上限")
    morawetz_constant: float = Field(1.0, gt=0, description="A ≤ C·E² 中的 C")


class Clause(str, Enum):
    """验证子句。"""

    THRESHOLD = "i"
    GROWTH = "ii"
    STRICHARTZ = "iii"


class Verdict(BaseModel):
    """验证结论，失败时给出第一个失败的子句与区间。"""

    passed: bool
    failing_clause: Optional[Clause] = None
    failing_interval: Optional[int] = None
    message: str = ""


class SubdivisionPlan(BaseModel):
    """阈值求和给出的最少区间数及其闭式上界。"""

    N: int
    cap: float


class IntervalRecord(BaseModel):
    """单个区间 [t_n, t_{n+1}] 的测量值与子句结果。"""

    n: int
    t_start: float
    t_end: float
    threshold: float
    measured_A: float
    D_bound: float
    measured_D: float
    B: float
    clause_i: Optional[bool] = None
    clause_ii: Optional[bool] = None
    clause_iii: Optional[bool] = None


class SubdivisionCertificate(BaseModel):
    """贪心划分证书。verdict 为 None 表示尚未验证。"""

    constants: CertifierConstants
    D: float
    A_total: float
    intervals: list[IntervalRecord]
    verdict: Optional[Verdict] = None
    cbound_ratio: Optional[float] = None
    cbound_passed: Optional[bool] = None

    @property
    def N(self) -> int:
        return len(self.intervals)

    @property
    def breakpoints(self) -> list[float]:
        if not self.intervals:
            return []
        return [record.t_start for record in self.intervals] + [self.intervals[-1].t_end]

    @property
    def thresholds(self) -> list[float]:
        return [record.threshold for record in self.intervals]

    @property
    def measured_A(self) -> list[float]:
        return [record.measured_A for record in self.intervals]

    @property
    def measured_D(self) -> list[float]:
        return [record.measured_D for record in self.intervals]

    @property
    def D_bounds(self) -> list[float]:
        return [record.D_bound for record in self.intervals]


class CboundCheck(BaseModel):
    """自举不等式 B ≲ D + A^{1/2}·B·log^{1/2}(2+B²) 的经验常数。"""

    ratio: float
    margin: float
    passed: bool
