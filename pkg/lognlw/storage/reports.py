"""诊断表、证书、运行摘要与扫描表的文件格式。"""

import csv
import logging
from pathlib import Path
from typing import Any, Optional, Sequence

from pydantic import BaseModel

from ..exceptions import DumpFormatError
from ..models.certificate import SubdivisionCertificate
from ..models.diagnostics import DiagnosticsReport, NormSnapshot
from ..schemas.summary import SweepRow
from .trajectory_dump import fmt

logger = logging.getLogger(__name__)

# 列顺序即 NormSnapshot 的字段顺序
SNAPSHOT_COLUMNS = list(NormSnapshot.model_fields)
REPORT_FOOTER = (
    "A",
    "morawetz_flux",
    "morawetz_bound",
    "B",
    "D",
    "E",
    "energy_drift",
    "sobolev_ratio_max",
    "strichartz_lhs",
    "strichartz_rhs",
    "record_stride",
)
CERTIFICATE_COLUMNS = (
    "n",
    "t_start",
    "t_end",
    "threshold",
    "measured_A",
    "D_bound",
    "measured_D",
    "B",
    "clause_i",
    "clause_ii",
    "clause_iii",
)


def render(value: Any) -> str:
    """输出文件中的统一取值格式。"""
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return fmt(value)
    if hasattr(value, "value"):
        return str(value.value)
    return str(value)


def _ensure_parent(path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def write_diagnostics(report: DiagnosticsReport, path: Path) -> Path:
    """逐快照诊断表，末尾以 # key=value 行给出汇总量。"""
    path = _ensure_parent(path)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(SNAPSHOT_COLUMNS)
        for row in report.snapshots:
            writer.writerow([render(getattr(row, column)) for column in SNAPSHOT_COLUMNS])
        f.write(f"# window={fmt(report.window[0])},{fmt(report.window[1])}\n")
        for key in REPORT_FOOTER:
            f.write(f"# {key}={render(getattr(report, key))}\n")
    return path


def read_diagnostics(path: Path) -> tuple[list[NormSnapshot], dict[str, str]]:
    """读回诊断表：(逐快照行, 汇总量)。"""
    path = Path(path)
    if not path.exists():
        raise DumpFormatError(f"诊断表不存在: {path}")
    with open(path, "r", encoding="utf-8", newline="") as f:
        lines = f.read().splitlines()
    body = [line for line in lines if not line.startswith("#")]
    footer = {}
    for line in lines:
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition("=")
            footer[key] = value
    reader = csv.DictReader(body)
    if reader.fieldnames != SNAPSHOT_COLUMNS:
        raise DumpFormatError(f"{path} 的列名不符")
    rows = [NormSnapshot(**{key: float(value) for key, value in record.items()}) for record in reader]
    return rows, footer


def write_certificate(certificate: SubdivisionCertificate, path: Path) -> Path:
    """人类可读的证书：key = value 头部，每个区间一行。"""
    path = _ensure_parent(path)
    verdict = certificate.verdict
    header: list[tuple[str, Any]] = [
        ("N", certificate.N),
        ("D", certificate.D),
        ("A_total", certificate.A_total),
        *[(f"constants.{key}", value) for key, value in certificate.constants.model_dump().items()],
        ("verdict", None if verdict is None else ("pass" if verdict.passed else "fail")),
        ("failing_clause", None if verdict is None else verdict.failing_clause),
        ("failing_interval", None if verdict is None else verdict.failing_interval),
        ("cbound_ratio", certificate.cbound_ratio),
        ("cbound_passed", certificate.cbound_passed),
    ]
    width = max(len(key) for key, _ in header)
    with open(path, "w", encoding="utf-8") as f:
        for key, value in header:
            f.write(f"{key.ljust(width)} = {render(value)}\n")
        if verdict is not None and verdict.message:
            f.write(f"{'message'.ljust(width)} = {verdict.message}\n")
        f.write("\n")
        f.write(" ".join(CERTIFICATE_COLUMNS) + "\n")
        for record in certificate.intervals:
            f.write(" ".join(render(getattr(record, column)) for column in CERTIFICATE_COLUMNS) + "\n")
    return path


def write_certificate_csv(certificate: SubdivisionCertificate, path: Path) -> Path:
    """证书的机器可读版本。"""
    path = _ensure_parent(path)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(CERTIFICATE_COLUMNS)
        for record in certificate.intervals:
            writer.writerow([render(getattr(record, column)) for column in CERTIFICATE_COLUMNS])
    return path


def write_summary(summary: BaseModel, path: Path) -> Path:
    """key = value 形式的摘要。"""
    path = _ensure_parent(path)
    with open(path, "w", encoding="utf-8") as f:
        for key, value in summary.model_dump().items():
            f.write(f"{key} = {render(value)}\n")
    return path


def read_summary(path: Path) -> dict[str, str]:
    path = Path(path)
    result = {}
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            key, sep, value = line.partition(" = ")
            if sep:
                result[key.strip()] = value.rstrip("\n")
    return result


def write_sweep(rows: Sequence[SweepRow], path: Path, parameter: Optional[str] = None) -> Path:
    """扫描表；空表只写列名。"""
    path = _ensure_parent(path)
    columns = list(SweepRow.model_fields)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([render(getattr(row, column)) for column in columns])
    logger.info("wrote sweep table %s (%d rows%s)", path, len(rows), f", {parameter}" if parameter else "")
    return path