"""sweep 子命令：对一个参数的取值列表批量运行。"""

import argparse
import logging
from pathlib import Path

from ...schemas.run_config import load_run_config
from ...services.runner import SWEEP_KEYS, get_run_service
from ...storage import write_sweep
from ..exit_codes import CONFIG, OK
from ._common import add_config_arguments

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("sweep", help="参数扫描，写出 sweep.csv")
    add_config_arguments(parser)
    parser.add_argument("--parameter", choices=sorted(SWEEP_KEYS), default=None, help="扫描参数")
    parser.add_argument(
        "--values",
        type=float,
        nargs="*",
        default=None,
        help="取值列表；省略时使用配置文件的 sweep.values",
    )
    parser.set_defaults(handler=cmd_sweep)


def cmd_sweep(args: argparse.Namespace) -> int:
    """执行 sweep 子命令。单个运行的失败记录在表中，不影响退出码。"""
    config = load_run_config(args.config, args.set or (), args.output_dir)
    parameter = args.parameter or config.sweep.parameter
    if parameter is None:
        logger.error("sweep 需要 --parameter 或配置中的 sweep.parameter")
        return CONFIG
    values = args.values if args.values is not None else config.sweep.values

    rows = get_run_service().sweep(config, parameter, values)
    path = write_sweep(rows, Path(config.output.directory) / "sweep.csv", parameter)

    for row in rows:
        detail = row.error or f"A/E^2={row.a_over_e2!r} B={row.B!r} D={row.D!r}"
        print(f"{parameter}={row.value!r} status={row.status} {detail}")
    print(f"wrote {path}")
    return OK
