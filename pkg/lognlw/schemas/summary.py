"""运行摘要与扫描表行的 Pydantic 模式。"""

from typing import Optional

from pydantic import BaseModel, Field


class RunSummary(BaseModel):
    """单次运行的摘要，写入 summary.txt。

    未完成的运行只覆盖部分时间窗，派生的比值与界（A/E²、双指数界、自举比值、
    Strichartz 比值）留空。
    """

    status: str = Field(..., description="completed / overflowed / cone-violation")
    t_end: float
    n: int
    dt: float
    snapshots: int
    E: float
    A: float
    B: float
    D: float
    morawetz_flux: float
    morawetz_bound: Optional[float] = None
    energy_drift: float
    sobolev_ratio_max: float
    strichartz_lhs: float
    strichartz_rhs: float
    strichartz_ratio: Optional[float] = None
    a_over_e2: Optional[float] = None
    max_sup_u: float
    double_exp_bound: Optional[float] = None
    B_le_bound: Optional[bool] = None
    cbound_ratio: Optional[float] = None
    cbound_passed: Optional[bool] = None
    message: str = ""


class SweepRow(BaseModel):
    """扫描表的一行；运行失败时数值列为空，error 记录原因。"""

    parameter: str
    value: float
    status: str
    error: Optional[str] = None
    t_end: Optional[float] = None
    E: Optional[float] = None
    A: Optional[float] = None
    B: Optional[float] = None
    D: Optional[float] = None
    a_over_e2: Optional[float] = None
    double_exp_bound: Optional[float] = None
    B_le_bound: Optional[bool] = None
    sobolev_ratio_max: Optional[float] = None
    strichartz_ratio: Optional[float] = None
    cbound_ratio: Optional[float] = None
    max_sup_u: Optional[float] = None
