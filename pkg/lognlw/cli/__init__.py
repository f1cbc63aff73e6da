"""命令行前端：run | sweep | certify | convergence。

子命令只返回退出码或抛出领域异常，异常在这里统一映射为退出码。
"""

import argparse
import logging
from typing import Optional, Sequence

from .. import __version__
from .commands import COMMANDS
from .exit_codes import CONFIG, FAILURE, exit_code_for

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lognlw",
        description="三维径向散焦对数超临界波动方程的模拟与不等式验证",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    subparsers.required = True
    for command in COMMANDS:
        command.register(subparsers)
    return parser


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    """解析参数并执行子命令，返回退出码。"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse 的用法错误记为配置错误
        return CONFIG if exc.code not in (0, None) else 0

    try:
        return args.handler(args)
    except Exception as exc:
        code = exit_code_for(exc)
        if code == FAILURE:
            logger.exception("%s failed", args.command)
        else:
            logger.error("%s: %s", type(exc).__name__, exc)
        return code


__all__ = ["build_parser", "run_cli"]
