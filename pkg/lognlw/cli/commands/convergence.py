"""convergence 子命令：网格加密下的观测收敛阶。"""

import argparse

from ...schemas.run_config import load_run_config
from ...services.runner import get_run_service
from ...storage.reports import render
from ..exit_codes import FAILURE, OK
from ._common import add_config_arguments

MINIMUM_ORDER = 1.8


def register(subparsers) -> None:
    parser = subparsers.add_parser("convergence", help="收敛阶研究")
    add_config_arguments(parser)
    parser.add_argument("--levels", type=int, default=3, help="加密级数（至少 2）")
    parser.set_defaults(handler=cmd_convergence)


def cmd_convergence(args: argparse.Namespace) -> int:
    """执行 convergence 子命令；观测阶 ≥ 1.8 时返回 0。"""
    config = load_run_config(args.config, args.set or (), args.output_dir)
    report = get_run_service().convergence(config, args.levels)

    print(f"reference = {report.reference}")
    for n, error in zip(report.ns, report.errors):
        print(f"n = {n} error = {render(error)}")
    for index, order in enumerate(report.orders):
        print(f"order[{index}] = {render(order)}")
    print(f"observed_order = {render(report.observed_order)}")
    return OK if report.passes(MINIMUM_ORDER) else FAILURE
