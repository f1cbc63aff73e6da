"""测试共用的夹具。"""

import pytest

from lognlw.config import get_settings
from lognlw.models import NonlinearitySpec, RadialGrid, SolveConfig
from lognlw.services.profiles import gaussian_bump, zero_data
from lognlw.services.radial_field import sample_initial
from lognlw.services.solver import evolve


@pytest.fixture(autouse=True)
def isolated_settings(monkeypatch):
    """每个测试使用干净的进程配置。"""
    for key in ("LOGNLW_OUTPUT_DIR", "LOGNLW_MAX_WORKERS", "LOGNLW_SHOW_PROGRESS", "LOGNLW_LOG_LEVEL"):
        monkeypatch.delenv(key, raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def defocusing():
    return NonlinearitySpec()


@pytest.fixture
def focusing():
    return NonlinearitySpec(sigma=-1)


@pytest.fixture
def linear():
    return NonlinearitySpec(enabled=False)


def simulate(
    spec,
    data,
    *,
    n=128,
    r_max=8.0,
    t_final=2.0,
    cfl=0.5,
    record_stride=1,
):
    """采样初值并积分，返回轨迹。"""
    grid = RadialGrid(r_max=r_max, n=n)
    state = sample_initial(grid, spec, data)
    config = SolveConfig(t_final=t_final, cfl=cfl, record_stride=record_stride)
    return evolve(state, config, support_radius=data.support_radius)


@pytest.fixture(scope="session")
def small_run():
    """小振幅散焦运行，A 低于第一个阈值。"""
    return simulate(NonlinearitySpec(), gaussian_bump(amplitude=0.5), record_stride=2)


@pytest.fixture(scope="session")
def moderate_run():
    """A 需要多个区间的散焦运行。"""
    return simulate(NonlinearitySpec(), gaussian_bump(amplitude=0.8), record_stride=1)


@pytest.fixture(scope="session")
def zero_run():
    return simulate(NonlinearitySpec(), zero_data(support_radius=1.0), n=64, r_max=4.0, t_final=1.0)
