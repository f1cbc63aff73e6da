"""非线性项族的领域模型。"""

from pydantic import BaseModel, ConfigDict, Field, field_validator


class NonlinearitySpec(BaseModel):
    """非线性项族 f(u) = σ·u^p·log(2+u²)^c。

    - sigma = +1 为散焦（defocusing），-1 为聚焦（focusing）
    - enabled = False 时 f ≡ 0，即线性波动方程
    """

    model_config = ConfigDict(frozen=True)

    p: int = Field(5, ge=1, description="幂次（正奇数）")
    c: int = Field(1, description="对数幂次，0 或 1")
    sigma: int = Field(1, description="符号，+1 或 -1")
    enabled: bool = Field(True, description="是否启用非线性项")

    @field_validator("p")
    @classmethod
    def _p_odd(cls, value: int) -> int:
        if value % 2 != 1:
            raise ValueError("p 必须是正奇数")
        return value

    @field_validator("c")
    @classmethod
    def _c_binary(cls, value: int) -> int:
        if value not in (0, 1):
            raise ValueError("c 必须是 0 或 1")
        return value

    @field_validator("sigma")
    @classmethod
    def _sigma_sign(cls, value: int) -> int:
        if value not in (1, -1):
            raise ValueError("sigma 必须是 +1 或 -1")
        return value

    @property
    def has_closed_form(self) -> bool:
        """是否为 u⁵log(2+u²) 型（有闭式原函数）。"""
        return self.p == 5 and self.c == 1

    @property
    def label(self) -> str:
        if not self.enabled:
            return "linear"
        sign = "+" if self.sigma > 0 else "-"
        log_part = "·log(2+u²)" if self.c else ""
        return f"{sign}u^{self.p}{log_part}"
