"""run 子命令：积分、写出轨迹转储、诊断表与摘要。"""

import argparse
import logging
from pathlib import Path

from ...models.trajectory import TrajectoryStatus
from ...schemas.run_config import load_run_config
from ...services.certifier import certify
from ...services.runner import get_run_service
from ...storage import (
    write_certificate,
    write_certificate_csv,
    write_diagnostics,
    write_summary,
    write_trajectory,
)
from ..exit_codes import OK, OVERFLOW
from ._common import add_config_arguments, print_mapping

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("run", help="运行一次积分并写出诊断")
    add_config_arguments(parser)
    parser.set_defaults(handler=cmd_run)


def cmd_run(args: argparse.Namespace) -> int:
    """执行 run 子命令。

    Returns:
        完成时 0，溢出时 4（已写出部分产物）
    """
    config = load_run_config(args.config, args.set or (), args.output_dir)
    result = get_run_service().execute(config)
    out = Path(config.output.directory)
    formats = set(config.output.formats)

    if "trajectory" in formats:
        write_trajectory(result.trajectory, out / "trajectory.csv")
    if "diagnostics" in formats:
        write_diagnostics(result.report, out / "diagnostics.csv")
    if "summary" in formats:
        write_summary(result.summary, out / "summary.txt")
    if "certificate" in formats and result.trajectory.status is TrajectoryStatus.COMPLETED:
        certificate = certify(result.trajectory, config.certifier)
        write_certificate(certificate, out / "certificate.txt")
        write_certificate_csv(certificate, out / "certificate.csv")

    print_mapping(result.summary.model_dump())
    if result.trajectory.status is TrajectoryStatus.OVERFLOWED:
        logger.warning("run overflowed at t=%.6g; partial artifacts written to %s", result.summary.t_end, out)
        return OVERFLOW
    return OK
