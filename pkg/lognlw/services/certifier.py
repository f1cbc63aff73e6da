"""小性命题、贪心时间区间划分、区间数上界、自举不等式与双指数估计。

阈值序列为 ε₀/log(2 + C₀ⁿ·D)。对数通过 logaddexp(log 2, n·log C₀ + log D)
计算，n 很大时也不会溢出。
"""

import logging
import math
import sys
from typing import Optional

import numpy as np
from scipy.integrate import quad
from scipy.special import digamma

from ..exceptions import (
    ConfigError,
    DegenerateError,
    MismatchError,
    PartitionResolutionError,
)
from ..models.certificate import (
    CboundCheck,
    CertifierConstants,
    Clause,
    IntervalRecord,
    SubdivisionCertificate,
    SubdivisionPlan,
    Verdict,
)
from ..models.diagnostics import DiagnosticsReport
from ..models.trajectory import Trajectory
from .diagnostics import (
    accumulate_A,
    build_report,
    gap_integrals,
    norm_B,
    resolve_window,
    trajectory_norms,
)

logger = logging.getLogger(__name__)

DEGENERATE_DENOMINATOR = 1e-14
DIRECT_TERMS = 1 << 24
_BLOCK = 4096
_MAX_BLOCK = 1 << 20
# x ≥ 40 时 log(2 + eˣ) 与 x 在双精度下相等
SATURATED_EXPONENT = 40.0
_LOG2 = math.log(2.0)
_BREAKPOINT_TOLERANCE = 1e-12


def _log_growth(n: np.ndarray, D: float, k: CertifierConstants) -> np.ndarray:
    """log(2 + C₀ⁿ·D)。"""
    log_d = math.log(D) if D > 0.0 else -math.inf
    exponent = np.asarray(n, dtype=float) * math.log(k.C0) + log_d
    return np.logaddexp(_LOG2, exponent)


def threshold(n: int, D: float, k: CertifierConstants) -> float:
    """第 n 个区间的阈值 ε₀/log(2 + C₀ⁿ·D)。"""
    return k.eps0 / float(_log_growth(np.array([n]), D, k)[0])


def growth_bound(n: int, D: float, k: CertifierConstants) -> float:
    """Dₙ = C₀ⁿ·D，溢出时为 inf。"""
    if D == 0.0:
        return 0.0
    try:
        return math.pow(k.C0, n) * D
    except OverflowError:
        return math.inf


def interval_count_cap(A_total: float, D: float, k: CertifierConstants) -> float:
    """区间数的闭式上界 (2+D)^{κ·A}。"""
    try:
        return math.pow(2.0 + D, k.kappa * A_total)
    except OverflowError:
        return math.inf


def _saturate(count: float) -> int:
    if not math.isfinite(count) or count >= sys.maxsize:
        return sys.maxsize
    return int(count)


def _constant_threshold_count(A_total: float, term: float) -> int:
    """阈值恒为 term 时满足 N·term > A 的最小 N。"""
    estimate = math.floor(A_total / term) + 1.0
    if estimate >= sys.maxsize:
        return sys.maxsize
    N = max(1, int(estimate))
    while N > 1 and (N - 1) * term > A_total:
        N -= 1
    while N * term <= A_total:
        N += 1
    return N


def _tail_count(start: int, remaining: float, D: float, k: CertifierConstants) -> int:
    """指数 n·log C₀ + log D ≥ SATURATED_EXPONENT 之后的尾部。

    此时 log(2 + C₀ⁿD) 与 n·log C₀ + log D 在双精度下无差别，
    因此 Σ_{n=start}^{M-1} 阈值 = (ε₀/log C₀)·(ψ(M+β) − ψ(start+β))，β = log D / log C₀。
    """
    log_c = math.log(k.C0)
    beta = math.log(D) / log_c
    target = float(digamma(start + beta)) + remaining * log_c / k.eps0
    if target > 700.0:
        return sys.maxsize
    # ψ(x) ≈ log(x − 1/2)
    M = max(start + 1, math.ceil(math.exp(target) + 0.5 - beta))
    if M >= 2**53:
        return _saturate(M)

    def covered(count: int) -> bool:
        return float(digamma(count + beta)) > target

    while M > start + 1 and covered(M - 1):
        M -= 1
    while not covered(M):
        M += 1
    return M


def _exponent(n: int, D: float, k: CertifierConstants) -> float:
    return n * math.log(k.C0) + math.log(D)


def segment_sum(start: int, stop: int, D: float, k: CertifierConstants) -> float:
    """Σ_{n=start}^{stop-1} ε₀/log(2 + C₀ⁿD)，Euler-Maclaurin：积分加一阶、三阶端点修正。

    用于 C₀ 接近 1、项随 n 变化极慢的区段。积分以 y = n·log C₀ + log D 为变量。
    """
    if stop <= start:
        return 0.0
    log_c = math.log(k.C0)

    def term(n: float) -> float:
        return k.eps0 / float(np.logaddexp(_LOG2, _exponent(n, D, k)))

    def slope(n: float) -> float:
        y = _exponent(n, D, k)
        log_growth = float(np.logaddexp(_LOG2, y))
        return -k.eps0 * log_c * math.exp(y - log_growth) / log_growth**2

    integral, _ = quad(
        lambda y: k.eps0 / float(np.logaddexp(_LOG2, y)),
        _exponent(start, D, k),
        _exponent(stop, D, k),
        epsabs=0.0,
        epsrel=1e-13,
        limit=200,
    )
    return integral / log_c + 0.5 * (term(start) - term(stop)) + (slope(stop) - slope(start)) / 12.0


def _middle_count(start: int, remaining: float, D: float, k: CertifierConstants) -> tuple[Optional[int], int, float]:
    """直接求和预算用尽、指数尚未饱和的区段。

    Returns:
        (N 或 None, 区段终点, 区段和)；N 为 None 表示区段内未超过 remaining
    """
    stop = math.ceil((SATURATED_EXPONENT - math.log(D)) / math.log(k.C0))
    stop = max(stop, start)
    total = segment_sum(start, stop, D, k)
    if total <= remaining:
        return None, stop, total
    lo, hi = start, stop
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if segment_sum(start, mid, D, k) > remaining:
            hi = mid
        else:
            lo = mid
    return hi, stop, total


def plan_subdivision(A_total: float, D: float, k: Optional[CertifierConstants] = None) -> SubdivisionPlan:
    """满足 Σ_{n<N} ε₀/log(2 + C₀ⁿD) > A_total 的最小 N，以及闭式上界。

    在指数 n·log C₀ + log D 达到 SATURATED_EXPONENT 之前逐项求和（numpy 分块，
    块长倍增）；逐项预算 DIRECT_TERMS 用尽时改用 Euler-Maclaurin 区段和；
    指数饱和之后用 digamma 计算尾部。N 超过 sys.maxsize 时饱和。

    Raises:
        ConfigError: A_total 或 D 为负
    """
    k = k or CertifierConstants()
    if A_total < 0.0 or D < 0.0 or not (math.isfinite(A_total) and math.isfinite(D)):
        raise ConfigError(f"plan_subdivision 需要有限非负的 A 与 D，得到 A={A_total}, D={D}")
    cap = interval_count_cap(A_total, D, k)

    if D == 0.0:
        return SubdivisionPlan(N=_constant_threshold_count(A_total, k.eps0 / _LOG2), cap=cap)

    total, start, block = 0.0, 0, _BLOCK
    while start < DIRECT_TERMS and _exponent(start, D, k) < SATURATED_EXPONENT:
        n = np.arange(start, start + block)
        partial = total + np.cumsum(k.eps0 / _log_growth(n, D, k))
        hits = np.nonzero(partial > A_total)[0]
        if hits.size:
            return SubdivisionPlan(N=start + int(hits[0]) + 1, cap=cap)
        total = float(partial[-1])
        start += block
        block = min(2 * block, _MAX_BLOCK)

    if _exponent(start, D, k) < SATURATED_EXPONENT:
        N, start, middle = _middle_count(start, A_total - total, D, k)
        logger.info("plan_subdivision used the Euler-Maclaurin segment: A=%.6g, D=%.6g", A_total, D)
        if N is not None:
            return SubdivisionPlan(N=_saturate(N), cap=cap)
        total += middle

    N = _tail_count(start, A_total - total, D, k)
    logger.info("plan_subdivision used the digamma tail: A=%.6g, D=%.6g, N=%d", A_total, D, N)
    return SubdivisionPlan(N=N, cap=cap)


def greedy_partition(trajectory: Trajectory, k: Optional[CertifierConstants] = None) -> SubdivisionCertificate:
    """从左到右扫描快照，在累计 A 不超过当前阈值的最后一个快照处闭合区间。

    等号时取较晚的快照（极大区间）。D 为第一个快照的 h1_grad。

    Raises:
        PartitionResolutionError: 单个快照间隔的 A 增量已超过当前阈值
    """
    k = k or CertifierConstants()
    norms = trajectory_norms(trajectory)
    times = trajectory.times
    densities = np.array([row.a_density for row in norms])
    D = norms[0].h1_grad
    gaps = gap_integrals(times, densities, resolve_window(trajectory))

    intervals: list[IntervalRecord] = []

    def close(n: int, start: int, end: int, pieces: list[float], limit: float) -> None:
        window = (float(times[start]), float(times[end]))
        intervals.append(
            IntervalRecord(
                n=n,
                t_start=window[0],
                t_end=window[1],
                threshold=limit,
                measured_A=math.fsum(pieces),
                D_bound=growth_bound(n, D, k),
                measured_D=norms[start].h1_grad,
                B=norm_B(trajectory, window),
            )
        )

    n, start = 0, 0
    limit = threshold(n, D, k)
    pieces: list[float] = []
    running = 0.0
    for index, piece in enumerate(gaps):
        if piece > limit:
            raise PartitionResolutionError(
                f"区间 {n} 在 t = {times[index]:.6g} 处单个快照间隔的 A 增量 {piece:.3e} "
                f"超过阈值 {limit:.3e}；请减小 record_stride"
            )
        if running + piece <= limit:
            pieces.append(piece)
            running += piece
            continue
        close(n, start, index, pieces, limit)
        n, start = n + 1, index
        limit = threshold(n, D, k)
        if piece > limit:
            raise PartitionResolutionError(
                f"区间 {n} 在 t = {times[index]:.6g} 处单个快照间隔的 A 增量 {piece:.3e} "
                f"超过阈值 {limit:.3e}；请减小 record_stride"
            )
        pieces, running = [piece], piece
    close(n, start, len(times) - 1, pieces, limit)

    certificate = SubdivisionCertificate(
        constants=k,
        D=D,
        A_total=math.fsum(gaps),
        intervals=intervals,
    )
    logger.info("greedy partition: N=%d, A=%.6g, D=%.6g", certificate.N, certificate.A_total, D)
    return certificate


def _snapshot_index(times: np.ndarray, t: float) -> int:
    scale = max(1.0, float(np.max(np.abs(times))))
    index = int(np.argmin(np.abs(times - t)))
    if abs(times[index] - t) > _BREAKPOINT_TOLERANCE * scale:
        raise MismatchError(f"断点 t = {t!r} 不是该轨迹的快照时间")
    return index


def _agrees(recorded: float, recomputed: float, rel: float = 1e-9) -> bool:
    return abs(recorded - recomputed) <= rel * max(abs(recorded), abs(recomputed), 1e-300)


def verify_certificate(
    trajectory: Trajectory,
    certificate: SubdivisionCertificate,
    k: Optional[CertifierConstants] = None,
) -> Verdict:
    """逐区间检查三个子句，并在证书上记录每个子句的结果。

    (i)   测得的 A_n ≤ 阈值，且阈值不超过 ε₀/log(2 + C₀ⁿD)；
    (ii)  tₙ 处的 ‖∇_{t,x}u‖_{H¹} ≤ C₀ⁿ·D；
    (iii) 区间上的 B_n ≤ κ_B·C₀ⁿ·D。

    所有测量值都从轨迹重新计算，证书中记录的值需与之一致。

    Raises:
        MismatchError: 断点不是快照时间，或没有覆盖整条轨迹
    """
    k = k or certificate.constants
    norms = trajectory_norms(trajectory)
    times = trajectory.times
    breakpoints = certificate.breakpoints
    if not breakpoints:
        raise MismatchError("证书不含任何区间")
    indices = [_snapshot_index(times, t) for t in breakpoints]
    if indices[0] != 0 or indices[-1] != len(times) - 1:
        raise MismatchError("证书的断点没有覆盖整条轨迹")
    if any(b <= a for a, b in zip(indices[:-1], indices[1:])) and len(times) > 1:
        raise MismatchError("证书的断点不是严格递增的")

    D = norms[0].h1_grad
    verdict: Optional[Verdict] = None

    def fail(clause: Clause, n: int, message: str) -> None:
        nonlocal verdict
        if verdict is None:
            verdict = Verdict(passed=False, failing_clause=clause, failing_interval=n, message=message)

    for record, start, end in zip(certificate.intervals, indices[:-1], indices[1:]):
        n = record.n
        window = (float(times[start]), float(times[end]))
        expected_threshold = threshold(n, D, k)
        measured_A = accumulate_A(trajectory, window)
        D_n = growth_bound(n, D, k)
        measured_D = norms[start].h1_grad
        B_n = norm_B(trajectory, window)

        record.clause_i = (
            measured_A <= record.threshold
            and record.threshold <= expected_threshold * (1.0 + 1e-12)
            and _agrees(record.measured_A, measured_A)
        )
        record.clause_ii = measured_D <= D_n * (1.0 + 1e-12) and record.D_bound <= D_n * (1.0 + 1e-12)
        record.clause_iii = B_n <= k.kappa_b * D_n

        if not record.clause_i:
            fail(Clause.THRESHOLD, n, f"区间 {n}: A = {measured_A:.6g} > 阈值 {record.threshold:.6g}")
        elif not record.clause_ii:
            fail(Clause.GROWTH, n, f"区间 {n}: ‖∇u(tₙ)‖_H¹ = {measured_D:.6g} > C₀ⁿD = {D_n:.6g}")
        elif not record.clause_iii:
            fail(Clause.STRICHARTZ, n, f"区间 {n}: B = {B_n:.6g} > κ_B·Dₙ = {k.kappa_b * D_n:.6g}")

    if verdict is None:
        verdict = Verdict(passed=True, message=f"{certificate.N} 个区间全部通过")
    certificate.verdict = verdict
    logger.info("certificate verdict: %s", verdict.message)
    return verdict


def check_cbound(report: DiagnosticsReport, margin: float = 10.0) -> CboundCheck:
    """B / (D + A^{1/2}·B·log^{1/2}(2+B²)) ≤ margin。

    Raises:
        DegenerateError: 分母小于 1e-14（例如零解）
    """
    B, D, A = report.B, report.D, max(report.A, 0.0)
    denominator = D + math.sqrt(A) * B * math.sqrt(math.log(2.0 + B * B))
    if denominator < DEGENERATE_DENOMINATOR:
        raise DegenerateError(f"自举不等式的分母 {denominator:.3e} 过小")
    ratio = B / denominator
    return CboundCheck(ratio=ratio, margin=margin, passed=ratio <= margin)


def double_exp_bound(D: float, A: float, k: Optional[CertifierConstants] = None) -> float:
    """(2+D)^{(2+D)^{κ·A}}；超出浮点范围时返回 inf。

    Raises:
        ConfigError: D 或 A 为负
    """
    k = k or CertifierConstants()
    if D < 0.0 or A < 0.0:
        raise ConfigError(f"double_exp_bound 需要非负参数，得到 D={D}, A={A}")
    base = 2.0 + D
    try:
        exponent = math.pow(base, k.kappa * A)
        return math.pow(base, exponent)
    except OverflowError:
        return math.inf


def double_exp_holds(report: DiagnosticsReport, k: Optional[CertifierConstants] = None) -> bool:
    """B ≤ double_exp_bound(D, κ_A·A)。"""
    k = k or CertifierConstants()
    return report.B <= double_exp_bound(report.D, k.kappa_a * max(report.A, 0.0), k)


def certify(trajectory: Trajectory, k: Optional[CertifierConstants] = None) -> SubdivisionCertificate:
    """贪心划分、逐区间验证与自举不等式检查。零解的自举比值无定义，记为 None。"""
    k = k or CertifierConstants()
    certificate = greedy_partition(trajectory, k)
    verify_certificate(trajectory, certificate, k)

    plan = plan_subdivision(certificate.A_total, certificate.D, k)
    if certificate.N < plan.N:
        logger.warning("greedy partition used fewer intervals (%d) than the plan (%d)", certificate.N, plan.N)

    report = build_report(trajectory, morawetz_constant=k.morawetz_constant)
    try:
        check = check_cbound(report, k.cbound_margin)
    except DegenerateError:
        logger.info("cbound check skipped: degenerate denominator")
    else:
        certificate.cbound_ratio = check.ratio
        certificate.cbound_passed = check.passed
    return certificate
