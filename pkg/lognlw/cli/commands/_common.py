"""子命令共用的参数与输出。"""

import argparse
from typing import Any, Mapping

from ...storage.reports import render


def add_config_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("-c", "--config", type=str, default=None, help="YAML 运行配置文件")
    parser.add_argument(
        "--set",
        action="append",
        default=[],
        metavar="KEY.PATH=VALUE",
        help="覆盖配置键（可重复），例如 --set data.amplitude=2",
    )
    parser.add_argument(
        "--output-dir",
        type=str,
        default=None,
        help="输出目录（优先于 LOGNLW_OUTPUT_DIR 与配置文件）",
    )


def print_mapping(values: Mapping[str, Any]) -> None:
    width = max((len(key) for key in values), default=0)
    for key, value in values.items():
        print(f"{key.ljust(width)} = {render(value)}")
