"""命令行退出码表（公开约定）。"""

from ..exceptions import LogNLWError

OK = 0
FAILURE = 1
CONFIG = 2
CONE = 3
OVERFLOW = 4
CERTIFICATE = 5
FORMAT = 6


def exit_code_for(exc: BaseException) -> int:
    """领域异常携带自己的退出码，其余异常记为一般失败。"""
    if isinstance(exc, LogNLWError):
        return exc.exit_code
    return FAILURE
