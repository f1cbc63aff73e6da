"""区间划分证书、区间数上界、自举不等式与双指数估计的测试。"""

import math
import random

import numpy as np
import pytest

from lognlw.exceptions import ConfigError, DegenerateError, MismatchError, PartitionResolutionError
from lognlw.models import CertifierConstants, Clause
from lognlw.services.certifier import (
    certify,
    check_cbound,
    DIRECT_TERMS,
    double_exp_bound,
    double_exp_holds,
    greedy_partition,
    plan_subdivision,
    segment_sum,
    threshold,
    verify_certificate,
)
from lognlw.services.diagnostics import accumulate_A, build_report
from lognlw.services.profiles import gaussian_bump

from .conftest import simulate

DEFAULTS = CertifierConstants()


def _log_growth(n, D, k):
    if D == 0.0:
        return math.log(2.0)
    exponent = n * math.log(k.C0) + math.log(D)
    if exponent > 700.0:
        return exponent
    return math.log(2.0 + math.exp(exponent))


def brute_force_sum(count, D, k=DEFAULTS):
    return math.fsum(k.eps0 / _log_growth(n, D, k) for n in range(count))


def _terms(start, stop, D, k):
    n = np.arange(start, stop, dtype=float)
    return k.eps0 / np.log(2.0 + D * np.power(k.C0, n))


def least_count(A, D, k, chunk=1 << 22):
    """逐块累加阈值，返回部分和首次超过 A 的项数。"""
    total, start = 0.0, 0
    while True:
        partial = total + np.cumsum(_terms(start, start + chunk, D, k))
        hits = np.nonzero(partial > A)[0]
        if hits.size:
            return start + int(hits[0]) + 1
        total = float(partial[-1])
        start += chunk


def test_threshold_values():
    assert threshold(0, 1.0, DEFAULTS) == pytest.approx(0.01 / math.log(3.0), rel=1e-14)
    assert threshold(0, 1.0, DEFAULTS) == pytest.approx(0.009102, abs=1e-6)
    assert threshold(3, 0.0, DEFAULTS) == pytest.approx(0.01 / math.log(2.0), rel=1e-14)
    assert threshold(2000, 1.0, DEFAULTS) > 0.0


def test_plan_single_interval():
    assert plan_subdivision(0.005, 1.0, DEFAULTS).N == 1
    assert plan_subdivision(0.0, 1.0, DEFAULTS).N == 1
    assert plan_subdivision(0.0, 0.0, DEFAULTS).N == 1


def test_plan_against_brute_force():
    plan = plan_subdivision(0.05, 1.0, DEFAULTS)
    assert brute_force_sum(plan.N, 1.0) > 0.05
    assert brute_force_sum(plan.N - 1, 1.0) <= 0.05
    assert plan.N <= plan.cap


def test_small_kappa_cap_is_violated():
    plan = plan_subdivision(0.05, 1.0, CertifierConstants(kappa=3.0))
    assert plan.cap == pytest.approx(3.0**0.15, rel=1e-12)
    assert plan.N > plan.cap
    assert plan.N <= plan_subdivision(0.05, 1.0, DEFAULTS).cap


def test_plan_least_N_random_pairs():
    rng = random.Random(20240611)
    for _ in range(50):
        A = rng.uniform(0.0, 0.1)
        D = rng.choice([0.0, rng.uniform(0.0, 10.0)])
        plan = plan_subdivision(A, D, DEFAULTS)
        assert brute_force_sum(plan.N, D) > A
        assert brute_force_sum(plan.N - 1, D) <= A
        assert plan.N <= plan.cap


def test_plan_constant_threshold():
    term = 0.01 / math.log(2.0)
    plan = plan_subdivision(10 * term + 1e-9, 0.0, DEFAULTS)
    assert plan.N == 11


def test_plan_huge_A_uses_tail_and_saturates():
    plan = plan_subdivision(1.0, 1.0, DEFAULTS)
    assert plan.N > 1 << 20
    assert plan_subdivision(1e6, 1.0, DEFAULTS).N > 0
    assert plan_subdivision(1e6, 1.0, DEFAULTS).cap == math.inf


def test_plan_exact_when_C0_near_one():
    k = CertifierConstants(C0=1.0 + 1e-7)
    plan = plan_subdivision(1e4, 1.0, k)
    assert plan.N == least_count(1e4, 1.0, k)
    assert plan.N < DIRECT_TERMS
    terms = _terms(0, plan.N, 1.0, k)
    assert math.fsum(terms) > 1e4
    assert math.fsum(terms[:-1]) <= 1e4


def test_segment_sum_matches_direct_sum():
    k = CertifierConstants(C0=1.0 + 1e-6)
    for D in (1.0, 0.3, 25.0):
        direct = math.fsum(_terms(0, 2_000_000, D, k))
        assert segment_sum(0, 2_000_000, D, k) == pytest.approx(direct, rel=1e-10)
    assert segment_sum(5, 5, 1.0, k) == 0.0


def test_plan_beyond_direct_budget():
    k = CertifierConstants(C0=1.0 + 1e-9)
    A = 2.7e5
    plan = plan_subdivision(A, 1.0, k)
    assert plan.N > DIRECT_TERMS
    assert abs(plan.N - least_count(A, 1.0, k)) <= 1


def test_plan_with_slowly_growing_thresholds():
    k = CertifierConstants(C0=1.0 + 1e-12)
    A = 1e6
    plan = plan_subdivision(A, 1.0, k)
    # 指数 y ≪ 1 时阈值 ≈ (ε₀/log 3)·(1 − y/(3 log 3))
    base = A * math.log(3.0) / k.eps0
    expected = base * (1.0 + 1e-12 * base / (6.0 * math.log(3.0)))
    assert plan.N == pytest.approx(expected, rel=1e-6)


def test_plan_rejects_negative():
    with pytest.raises(ConfigError):
        plan_subdivision(-1.0, 1.0, DEFAULTS)


def test_double_exp_bound():
    assert double_exp_bound(0.0, 0.0, DEFAULTS) == 2.0
    k3 = CertifierConstants(kappa=3.0)
    assert double_exp_bound(1.0, 1.0, k3) == pytest.approx(3.0**27, rel=1e-12)
    assert double_exp_bound(1.0, 1.0, k3) == pytest.approx(7.6256e12, rel=1e-4)
    assert double_exp_bound(100.0, 10.0, DEFAULTS) == math.inf


def test_double_exp_bound_monotone():
    grid = [0.0, 0.5, 1.0, 3.0, 10.0]
    for A in (0.0, 0.01, 0.1):
        values = [double_exp_bound(D, A, DEFAULTS) for D in grid]
        assert values == sorted(values)
    for D in (0.0, 1.0, 5.0):
        values = [double_exp_bound(D, A, DEFAULTS) for A in (0.0, 0.001, 0.01, 0.1)]
        assert values == sorted(values)


def test_zero_trajectory_certificate(zero_run):
    certificate = greedy_partition(zero_run, DEFAULTS)
    assert certificate.N == 1
    assert certificate.breakpoints == [zero_run.t_start, zero_run.t_end]
    verdict = verify_certificate(zero_run, certificate, DEFAULTS)
    assert verdict.passed


def test_zero_run_cbound_is_degenerate(zero_run):
    with pytest.raises(DegenerateError):
        check_cbound(build_report(zero_run), 10.0)


def test_small_run_single_interval(small_run):
    certificate = greedy_partition(small_run, DEFAULTS)
    plan = plan_subdivision(certificate.A_total, certificate.D, DEFAULTS)
    assert certificate.A_total < certificate.thresholds[0]
    assert certificate.N == plan.N == 1
    assert verify_certificate(small_run, certificate, DEFAULTS).passed


def test_moderate_run_tiles_window(moderate_run):
    certificate = greedy_partition(moderate_run, DEFAULTS)
    assert certificate.N > 1
    breakpoints = certificate.breakpoints
    assert breakpoints[0] == moderate_run.t_start
    assert breakpoints[-1] == moderate_run.t_end
    assert all(b > a for a, b in zip(breakpoints[:-1], breakpoints[1:]))
    assert math.fsum(certificate.measured_A) == pytest.approx(accumulate_A(moderate_run), rel=1e-12)
    assert all(a <= t for a, t in zip(certificate.measured_A, certificate.thresholds))
    plan = plan_subdivision(certificate.A_total, certificate.D, DEFAULTS)
    assert certificate.N >= plan.N
    assert plan.N <= plan.cap


def test_moderate_run_certifies(moderate_run):
    certificate = certify(moderate_run, DEFAULTS)
    assert certificate.verdict.passed
    assert all(record.clause_i and record.clause_ii and record.clause_iii for record in certificate.intervals)
    assert certificate.cbound_passed


def test_threshold_fault_injection(moderate_run):
    certificate = greedy_partition(moderate_run, DEFAULTS)
    victim = certificate.intervals[1]
    victim.threshold = 0.5 * victim.measured_A
    verdict = verify_certificate(moderate_run, certificate, DEFAULTS)
    assert not verdict.passed
    assert verdict.failing_clause is Clause.THRESHOLD
    assert verdict.failing_interval == 1


def test_growth_fault_injection(small_run):
    certificate = greedy_partition(small_run, DEFAULTS)
    tight = CertifierConstants(kappa_b=1e-6)
    verdict = verify_certificate(small_run, certificate, tight)
    assert verdict.failing_clause is Clause.STRICHARTZ
    assert verdict.failing_interval == 0


def test_mismatched_breakpoints(small_run):
    certificate = greedy_partition(small_run, DEFAULTS)
    certificate.intervals[-1].t_end = small_run.t_end + 0.123
    with pytest.raises(MismatchError):
        verify_certificate(small_run, certificate, DEFAULTS)


def test_partition_resolution_error(moderate_run):
    tiny = CertifierConstants(eps0=1e-12, kappa=1e12)
    with pytest.raises(PartitionResolutionError):
        greedy_partition(moderate_run, tiny)


def test_cbound_linear_reduces_to_B_over_D(linear):
    report = build_report(simulate(linear, gaussian_bump(amplitude=1.0), t_final=1.0))
    assert report.A > 0.0
    check = check_cbound(report.model_copy(update={"A": 0.0}), 10.0)
    assert check.ratio == pytest.approx(report.B / report.D, rel=1e-14)
    assert check.passed == (report.B <= 10.0 * report.D)


@pytest.mark.parametrize("amplitude", [0.05, 0.5, 1.0, 2.0])
def test_double_exp_estimate_holds(defocusing, amplitude):
    trajectory = simulate(defocusing, gaussian_bump(amplitude=amplitude), n=512, t_final=3.0, record_stride=2)
    report = build_report(trajectory)
    assert double_exp_holds(report, DEFAULTS)
    assert report.B <= double_exp_bound(report.D, DEFAULTS.kappa_a * report.A, DEFAULTS)


def test_double_exp_estimate_ignores_kappa_b(small_run):
    report = build_report(small_run)
    assert double_exp_holds(report, CertifierConstants(kappa_b=1e-9)) == double_exp_holds(report, DEFAULTS)
