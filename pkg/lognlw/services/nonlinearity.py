"""非线性项族 f、g、F、G 的精确求值。

所有函数既接受标量也接受 numpy 数组，标量输入返回 float。
|u| > U_SATURATION 的输入被截断，结果被限制在有限浮点范围内，
使爆破的运行退化为可检测的溢出而不是 inf/nan 运算。
"""

from typing import Union

import numpy as np
from scipy.integrate import quad

from ..models.nonlinearity import NonlinearitySpec

ArrayLike = Union[float, np.ndarray]

U_SATURATION = 1e60
_FLOAT_MAX = float(np.finfo(float).max)

# w = u² 低于该值时，F 使用幂级数以避免相消
_SERIES_CUTOFF = 0.5
_SERIES_TERMS = 40
_QUAD_EPSREL = 1e-10


def _prepare(u: ArrayLike) -> tuple[np.ndarray, np.ndarray, bool]:
    """返回 (截断后的 |u|, sign(u), 是否标量)。"""
    arr = np.asarray(u, dtype=float)
    return np.minimum(np.abs(arr), U_SATURATION), np.sign(arr), arr.ndim == 0


def _clip(values: np.ndarray) -> np.ndarray:
    return np.clip(values, -_FLOAT_MAX, _FLOAT_MAX)


def _unwrap(values: np.ndarray, scalar: bool) -> ArrayLike:
    return float(values) if scalar else values


def eval_f(spec: NonlinearitySpec, u: ArrayLike) -> ArrayLike:
    """f(u) = σ·u^p·log(2+u²)^c，通过 |u| 计算，因而逐位奇对称。"""
    a, sign, scalar = _prepare(u)
    if not spec.enabled:
        return _unwrap(np.zeros_like(a), scalar)
    with np.errstate(over="ignore", invalid="ignore"):
        magnitude = a**spec.p
        if spec.c:
            magnitude = magnitude * np.log(2.0 + a * a)
        values = _clip(spec.sigma * sign * magnitude)
    return _unwrap(values, scalar)


def eval_g(spec: NonlinearitySpec, u: ArrayLike) -> ArrayLike:
    """g(u) = f(u)/u = σ·u^{p-1}·log(2+u²)^c，偶函数。"""
    a, _, scalar = _prepare(u)
    if not spec.enabled:
        return _unwrap(np.zeros_like(a), scalar)
    with np.errstate(over="ignore", invalid="ignore"):
        values = a ** (spec.p - 1)
        if spec.c:
            values = values * np.log(2.0 + a * a)
        values = _clip(spec.sigma * values)
    return _unwrap(values, scalar)


def eval_df(spec: NonlinearitySpec, u: ArrayLike) -> ArrayLike:
    """f′(u) = σ·[p·u^{p-1}·L^c + c·2u^{p+1}/(2+u²)]，L = log(2+u²)，偶函数。"""
    a, _, scalar = _prepare(u)
    if not spec.enabled:
        return _unwrap(np.zeros_like(a), scalar)
    with np.errstate(over="ignore", invalid="ignore"):
        w = a * a
        factor = spec.p * np.log(2.0 + w) + 2.0 * w / (2.0 + w) if spec.c else float(spec.p)
        values = _clip(spec.sigma * a ** (spec.p - 1) * factor)
    return _unwrap(values, scalar)


def _log_integral_series(w: np.ndarray) -> np.ndarray:
    """∫₀^w s²·log(1+s/2) ds 的幂级数，适用于小 w。"""
    total = np.zeros_like(w)
    for k in range(_SERIES_TERMS, 0, -1):
        sign = 1.0 if k % 2 == 1 else -1.0
        total += sign * w ** (k + 3) / (2.0**k * k * (k + 3))
    return total


def _log_integral_closed(w: np.ndarray) -> np.ndarray:
    """∫₀^w s²·log(1+s/2) ds 的闭式（分部积分 + 多项式除法）。"""
    log_term = np.log1p(w / 2.0)
    with np.errstate(over="ignore", invalid="ignore"):
        return (w**3 / 3.0) * (log_term - 1.0 / 3.0) + (w * w - 4.0 * w + 8.0 * log_term) / 3.0


def _antiderivative_quintic_log(a: np.ndarray) -> np.ndarray:
    """∫₀^a v⁵·log(2+v²) dv，代换 w = v² 后的闭式。"""
    w = a * a
    small = w < _SERIES_CUTOFF
    tail = np.empty_like(w)
    tail[small] = _log_integral_series(w[small])
    tail[~small] = _log_integral_closed(w[~small])
    with np.errstate(over="ignore", invalid="ignore"):
        return 0.5 * (w**3 * np.log(2.0) / 3.0 + tail)


def _antiderivative_quadrature(spec: NonlinearitySpec, a: np.ndarray) -> np.ndarray:
    """其余 (p, c) 的自适应积分回退。"""

    def integrand(v: float) -> float:
        return v**spec.p * np.log(2.0 + v * v) ** spec.c

    flat = a.reshape(-1)
    out = np.empty_like(flat)
    for index, upper in enumerate(flat):
        if upper == 0.0:
            out[index] = 0.0
            continue
        out[index], _ = quad(integrand, 0.0, float(upper), epsrel=_QUAD_EPSREL, limit=200)
    return out.reshape(a.shape)


def eval_F(spec: NonlinearitySpec, u: ArrayLike) -> ArrayLike:
    """非线性势能 F(u) = ∫₀ᵘ f，F(0) = 0，偶函数。"""
    a, _, scalar = _prepare(u)
    if not spec.enabled:
        return _unwrap(np.zeros_like(a), scalar)
    a = np.atleast_1d(a)
    if spec.c == 0:
        with np.errstate(over="ignore"):
            values = a ** (spec.p + 1) / (spec.p + 1)
    elif spec.has_closed_form:
        values = _antiderivative_quintic_log(a)
    else:
        values = _antiderivative_quadrature(spec, a)
    values = _clip(spec.sigma * values)
    return float(values[0]) if scalar else values


def eval_G(spec: NonlinearitySpec, u: ArrayLike) -> ArrayLike:
    """G(u) = u·f(u) − 2F(u)。散焦时 G ≥ 0 且 G ∼ |u|⁶log(2+u²)。"""
    arr = np.clip(np.asarray(u, dtype=float), -U_SATURATION, U_SATURATION)
    scalar = arr.ndim == 0
    with np.errstate(over="ignore", invalid="ignore"):
        values = arr * np.asarray(eval_f(spec, arr)) - 2.0 * np.asarray(eval_F(spec, arr))
    values = np.where(np.isfinite(values), values, spec.sigma * _FLOAT_MAX)
    return _unwrap(values, scalar)
