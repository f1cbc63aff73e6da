"""lognlw 的异常层次。

服务层只抛出异常，命令行层负责把异常映射为退出码。
"""


class LogNLWError(ValueError):
    """所有领域错误的基类。"""

    exit_code: int = 1


class ConfigError(LogNLWError):
    """配置不合法。"""

    exit_code = 2


class UnsupportedDataError(ConfigError):
    """初值在声明的支集之外不为零，或支集超出网格。"""


class ResolutionError(LogNLWError):
    """网格或时间分辨率不足以完成请求的操作。"""

    exit_code = 2


class ConeViolationError(LogNLWError):
    """光锥会到达外边界：support_radius + t_final > r_max。"""

    exit_code = 3


class FieldOverflowError(LogNLWError):
    """场值超过溢出阈值（数值或真实爆破）。"""

    exit_code = 4

    def __init__(self, message: str, t: float = float("nan")):
        super().__init__(message)
        self.t = t


class CertificateError(LogNLWError):
    """证书验证失败。"""

    exit_code = 5


class WindowError(CertificateError):
    """时间窗口不在轨迹时间范围内。"""


class DegenerateError(CertificateError):
    """比值的分母为零（例如零解）。"""


class MismatchError(CertificateError):
    """证书的断点不是该轨迹的快照时间。"""


class DumpFormatError(LogNLWError):
    """轨迹转储文件格式错误或被截断。"""

    exit_code = 6


class PartitionResolutionError(ResolutionError, CertificateError):
    """单个快照间隔的 A 增量已超过当前阈值，无法实现划分。"""

    exit_code = 5
