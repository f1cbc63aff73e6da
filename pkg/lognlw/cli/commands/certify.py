"""certify 子命令：从轨迹转储重算诊断并生成区间划分证书。"""

import argparse
import logging
from pathlib import Path

from ...exceptions import CertificateError
from ...models.trajectory import TrajectoryStatus
from ...schemas.run_config import load_run_config
from ...services.certifier import certify
from ...storage import read_trajectory, write_certificate, write_certificate_csv
from ..exit_codes import CERTIFICATE, OK
from ._common import add_config_arguments, print_mapping

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("certify", help="验证轨迹转储并写出证书")
    parser.add_argument("dump", type=str, help="轨迹转储文件（run 的 trajectory.csv）")
    add_config_arguments(parser)
    parser.set_defaults(handler=cmd_certify)


def cmd_certify(args: argparse.Namespace) -> int:
    """执行 certify 子命令。

    Returns:
        证书通过时 0，否则 5；转储格式错误时由异常映射为 6，且不写出任何证书
    """
    config = load_run_config(args.config, args.set or (), args.output_dir)
    trajectory = read_trajectory(Path(args.dump))
    if trajectory.status is not TrajectoryStatus.COMPLETED:
        raise CertificateError(f"轨迹状态为 {trajectory.status.value}，只能为完成的运行生成证书")

    certificate = certify(trajectory, config.certifier)
    out = Path(config.output.directory)
    write_certificate(certificate, out / "certificate.txt")
    write_certificate_csv(certificate, out / "certificate.csv")

    verdict = certificate.verdict
    print_mapping(
        {
            "N": certificate.N,
            "D": certificate.D,
            "A_total": certificate.A_total,
            "verdict": "pass" if verdict.passed else "fail",
            "failing_clause": verdict.failing_clause,
            "failing_interval": verdict.failing_interval,
            "cbound_ratio": certificate.cbound_ratio,
        }
    )
    if not verdict.passed:
        logger.warning("certificate failed: %s", verdict.message)
        return CERTIFICATE
    return OK
