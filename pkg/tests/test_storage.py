"""轨迹转储、报告文件与运行配置加载的测试。"""

import numpy as np
import pytest

from lognlw.config import Settings, get_settings
from lognlw.exceptions import ConfigError, DumpFormatError
from lognlw.models import TrajectoryStatus
from lognlw.schemas import RunConfig, load_run_config
from lognlw.services.certifier import certify, double_exp_holds
from lognlw.services.diagnostics import build_report
from lognlw.services.runner import summarize
from lognlw.storage import (
    read_diagnostics,
    read_summary,
    read_trajectory,
    write_certificate,
    write_certificate_csv,
    write_diagnostics,
    write_summary,
    write_sweep,
    write_trajectory,
)
from lognlw.storage.reports import SNAPSHOT_COLUMNS
from lognlw.storage.trajectory_dump import fmt


def test_dump_round_trip_is_exact(small_run, tmp_path):
    path = write_trajectory(small_run, tmp_path / "trajectory.csv")
    restored = read_trajectory(path)

    assert len(restored) == len(small_run)
    assert restored.dt == small_run.dt
    assert restored.record_stride == small_run.record_stride
    assert restored.support_radius == small_run.support_radius
    assert restored.status is TrajectoryStatus.COMPLETED
    assert restored.grid == small_run.grid
    assert restored.spec == small_run.spec
    assert np.array_equal(restored.times, small_run.times)
    for original, copy in zip(small_run.states, restored.states):
        assert np.array_equal(original.v, copy.v)
        assert np.array_equal(original.w, copy.w)


def test_diagnostics_recomputed_from_dump(small_run, tmp_path):
    restored = read_trajectory(write_trajectory(small_run, tmp_path / "trajectory.csv"))
    original, recomputed = build_report(small_run), build_report(restored)
    for key in ("A", "B", "D", "E", "morawetz_flux", "strichartz_lhs", "strichartz_rhs"):
        assert getattr(recomputed, key) == pytest.approx(getattr(original, key), rel=1e-12, abs=1e-300)


def test_truncated_dump_is_rejected(small_run, tmp_path):
    path = write_trajectory(small_run, tmp_path / "trajectory.csv")
    lines = path.read_text(encoding="utf-8").splitlines()
    truncated = tmp_path / "truncated.csv"
    truncated.write_text("\n".join(lines[: len(lines) // 2]) + "\n", encoding="utf-8")
    with pytest.raises(DumpFormatError):
        read_trajectory(truncated)


def test_dump_with_missing_row_is_rejected(small_run, tmp_path):
    path = write_trajectory(small_run, tmp_path / "trajectory.csv")
    lines = path.read_text(encoding="utf-8").splitlines()
    del lines[-2]
    damaged = tmp_path / "damaged.csv"
    damaged.write_text("\n".join(lines) + "\n", encoding="utf-8")
    with pytest.raises(DumpFormatError, match="快照"):
        read_trajectory(damaged)


def test_dump_with_nan_is_rejected(small_run, tmp_path):
    path = write_trajectory(small_run, tmp_path / "trajectory.csv")
    lines = path.read_text(encoding="utf-8").splitlines()
    cells = lines[-2].split(",")
    cells[3] = "nan"
    lines[-2] = ",".join(cells)
    damaged = tmp_path / "nan.csv"
    damaged.write_text("\n".join(lines) + "\n", encoding="utf-8")
    with pytest.raises(DumpFormatError, match="非有限值"):
        read_trajectory(damaged)


def test_dump_header_records_dr(small_run, tmp_path):
    path = write_trajectory(small_run, tmp_path / "trajectory.csv")
    lines = path.read_text(encoding="utf-8").splitlines()
    assert f"# dr={fmt(small_run.grid.dr)}" in lines

    index = next(i for i, line in enumerate(lines) if line.startswith("# dr="))
    lines[index] = f"# dr={fmt(2.0 * small_run.grid.dr)}"
    damaged = tmp_path / "dr.csv"
    damaged.write_text("\n".join(lines) + "\n", encoding="utf-8")
    with pytest.raises(DumpFormatError, match="dr"):
        read_trajectory(damaged)

    del lines[index]
    damaged.write_text("\n".join(lines) + "\n", encoding="utf-8")
    with pytest.raises(DumpFormatError, match="dr"):
        read_trajectory(damaged)


def test_missing_or_foreign_dump(tmp_path):
    with pytest.raises(DumpFormatError):
        read_trajectory(tmp_path / "absent.csv")
    foreign = tmp_path / "foreign.csv"
    foreign.write_text("t,v_0\n0,0\n", encoding="utf-8")
    with pytest.raises(DumpFormatError):
        read_trajectory(foreign)


def test_diagnostics_file(small_run, tmp_path):
    report = build_report(small_run)
    rows, footer = read_diagnostics(write_diagnostics(report, tmp_path / "diagnostics.csv"))
    assert rows == report.snapshots
    assert float(footer["A"]) == report.A
    assert float(footer["B"]) == report.B
    assert footer["record_stride"] == "2"
    assert [float(x) for x in footer["window"].split(",")] == list(report.window)


def test_diagnostics_column_order(small_run, tmp_path):
    path = write_diagnostics(build_report(small_run), tmp_path / "diagnostics.csv")
    header = next(line for line in path.read_text(encoding="utf-8").splitlines() if not line.startswith("#"))
    assert header.split(",")[:7] == ["t", "energy", "sup_u", "l2_grad", "h1_grad", "a_density", "morawetz_density"]
    assert header.split(",") == SNAPSHOT_COLUMNS


def test_summary_file(small_run, tmp_path):
    report = build_report(small_run)
    constants = RunConfig().certifier
    summary = summarize(small_run, report, constants)
    values = read_summary(write_summary(summary, tmp_path / "summary.txt"))
    assert values["status"] == "completed"
    assert float(values["E"]) == summary.E
    assert values["B_le_bound"] == ("true" if double_exp_holds(report, constants) else "false")
    assert float(values["double_exp_bound"]) > 2.0
    assert values["cbound_passed"] == "true"


def test_summary_of_zero_run_has_no_cbound(zero_run, tmp_path):
    summary = summarize(zero_run, build_report(zero_run), RunConfig().certifier)
    values = read_summary(write_summary(summary, tmp_path / "summary.txt"))
    assert values["cbound_ratio"] == "none"
    assert float(values["A"]) == 0.0


def test_certificate_files(small_run, tmp_path):
    certificate = certify(small_run)
    text = write_certificate(certificate, tmp_path / "certificate.txt").read_text(encoding="utf-8")
    assert "verdict" in text and "pass" in text
    assert "constants.kappa" in text
    table = write_certificate_csv(certificate, tmp_path / "certificate.csv").read_text(encoding="utf-8")
    lines = table.splitlines()
    assert lines[0].startswith("n,t_start,t_end,threshold,measured_A")
    assert len(lines) == certificate.N + 1
    assert lines[1].endswith("true,true,true")


def test_empty_sweep_writes_header(tmp_path):
    text = write_sweep([], tmp_path / "sweep.csv").read_text(encoding="utf-8")
    assert text.splitlines() == ["parameter,value,status,error,t_end,E,A,B,D,a_over_e2,double_exp_bound,"
                                 "B_le_bound,sobolev_ratio_max,strichartz_ratio,cbound_ratio,max_sup_u"]


# ---------------------------------------------------------------------------
# 运行配置
# ---------------------------------------------------------------------------


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text(
        "grid:\n  n: 256\ndata:\n  amplitude: 0.5\noutput:\n  directory: from-file\n",
        encoding="utf-8",
    )
    return str(path)


def test_process_settings_fields(monkeypatch):
    assert set(Settings.model_fields) == {"log_level", "output_dir", "max_workers", "show_progress"}
    monkeypatch.setenv("LOGNLW_MAX_WORKERS", "7")
    get_settings.cache_clear()
    assert get_settings().max_workers == 7


def test_defaults_without_file():
    config = load_run_config()
    assert config.grid.n == 512
    assert config.certifier.kappa == 100.0
    assert config.output.directory == "output"


def test_file_values(config_file):
    config = load_run_config(config_file)
    assert config.grid.n == 256
    assert config.data.amplitude == 0.5
    assert config.output.directory == "from-file"


def test_output_directory_precedence(config_file, monkeypatch):
    monkeypatch.setenv("LOGNLW_OUTPUT_DIR", "from-env")
    get_settings.cache_clear()
    assert load_run_config(config_file).output.directory == "from-env"
    assert load_run_config(config_file, output_dir="from-flag").output.directory == "from-flag"
    config = load_run_config(config_file, ["output.directory=from-set"], output_dir="from-flag")
    assert config.output.directory == "from-set"


def test_set_overrides_parse_yaml_scalars(config_file):
    config = load_run_config(
        config_file,
        ["data.amplitude=2", "nonlinearity.enabled=false", "solve.cfl=0.25", "output.formats=[summary]"],
    )
    assert config.data.amplitude == 2.0
    assert config.nonlinearity.enabled is False
    assert config.solve.cfl == 0.25
    assert config.output.formats == ["summary"]


def test_unknown_key_names_path(config_file):
    with pytest.raises(ConfigError, match="grid.cells"):
        load_run_config(config_file, ["grid.cells=10"])


def test_invalid_values_are_rejected(config_file):
    with pytest.raises(ConfigError, match="nonlinearity"):
        load_run_config(config_file, ["nonlinearity.p=4"])
    with pytest.raises(ConfigError, match="solve.cfl"):
        load_run_config(config_file, ["solve.cfl=1.5"])
    with pytest.raises(ConfigError, match="support_radius"):
        load_run_config(config_file, ["data.support_radius=8.0"])
    with pytest.raises(ConfigError, match="table_path"):
        load_run_config(config_file, ["data.profile=table"])


def test_malformed_override_and_file(tmp_path):
    with pytest.raises(ConfigError):
        load_run_config(overrides=["no-equals-sign"])
    with pytest.raises(ConfigError):
        load_run_config(str(tmp_path / "absent.yaml"))
    listing = tmp_path / "list.yaml"
    listing.write_text("- 1\n- 2\n", encoding="utf-8")
    with pytest.raises(ConfigError, match="映射"):
        load_run_config(str(listing))


def test_with_overrides_revalidates():
    config = RunConfig()
    assert config.with_overrides(**{"grid.n": 128}).grid.n == 128
    with pytest.raises(ConfigError):
        config.with_overrides(**{"grid.n": 2})
