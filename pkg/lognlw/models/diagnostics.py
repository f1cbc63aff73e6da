"""诊断量的领域模型。"""

from typing import Optional

from pydantic import BaseModel, Field


class NormSnapshot(BaseModel):
    """单个时间切片上的范数与积分密度。"""

    t: float
    energy: float
    sup_u: float = Field(..., description="‖u(t)‖_∞")
    l2_grad: float = Field(..., description="‖∇_{t,x}u(t)‖₂")
    h1_grad: float = Field(..., description="‖∇_{t,x}u(t)‖_{H¹}")
    a_density: float = Field(..., description="∫|u|⁸log(2+u²) dx")
    morawetz_density: float = Field(..., description="∫G(u)/|x| dx")
    sup_du: float = Field(..., description="‖∂ᵣu(t)‖_∞")
    l2_hess: float = Field(..., description="‖∇ₓ∇_{t,x}u(t)‖₂")
    l2_nonlinearity: float = Field(..., description="‖f(u(t))‖₂")
    sobolev_ratio: float = Field(0.0, description="max |u|·r^{1/2} / ‖∇ₓu‖₂，梯度为零时记 0")


class DiagnosticsReport(BaseModel):
    """一次运行（或一个时间窗口）的诊断汇总。"""

    snapshots: list[NormSnapshot]
    window: tuple[float, float]
    A: float
    morawetz_flux: float
    B: float
    D: float
    E: float
    energy_drift: float = Field(..., description="max_t |E(t)-E(0)|/E(0)")
    sobolev_ratio_max: float
    strichartz_lhs: float
    strichartz_rhs: float
    record_stride: int = 1
    morawetz_bound: Optional[float] = Field(None, description="C·E²")

    @property
    def strichartz_ratio(self) -> float:
        if self.strichartz_rhs <= 0.0:
            return 0.0
        return self.strichartz_lhs / self.strichartz_rhs

    @property
    def a_over_e2(self) -> float:
        if self.E <= 0.0:
            return 0.0
        return self.A / self.E**2
