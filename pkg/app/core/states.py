"""
量子态与测量基构造
负责Schmidt态的生成以及全部命名测量基族的构造

功能:
- make_state: 由 α/β 生成归一化Schmidt态
- basis_vectors: 测量方向 (φ, ν) 对应的正交基 (v, u)
- hardy_config: Hardy测量基
- nm_config: (n, m) 广义Hardy基
- k_config: 指数四元组 (k1..k4) 广义Hardy基
- reduced_state: 约化密度矩阵

符号约定（所有指数族一致）:
    cosφ1 < 0, cosφ2 > 0, cosφ3 < 0, cosφ4 > 0, 全部 ν = 0（除非显式给出）
"""

import logging
import math
from typing import Sequence, Tuple

import numpy as np

from app.models.exceptions import (
    NonPositiveRatio,
    DegenerateState,
    InvalidExponents,
)
from app.models.result_model import ReducedState
from app.models.state_model import (
    SchmidtState,
    MeasurementSetting,
    MeasurementConfig,
    ExponentQuad,
    K_MAX_CEILING,
)

logger = logging.getLogger(__name__)

# cosφᵢ 的符号（i = 1..4）
COS_SIGNS = (-1.0, 1.0, -1.0, 1.0)
HARDY_QUAD = ExponentQuad(1, 3, 3, 1)


def make_state(ratio: float) -> SchmidtState:
    """
    由 α/β 生成归一化Schmidt态

    Args:
        ratio: α/β，必须为正有限数

    Returns:
        α = r/√(1+r²), β = 1/√(1+r²)

    Raises:
        NonPositiveRatio: ratio ≤ 0、NaN 或 ∞
    """
    try:
        r = float(ratio)
    except (TypeError, ValueError) as e:
        raise NonPositiveRatio(f"无法解析比值: {ratio!r}") from e
    if not math.isfinite(r) or r <= 0:
        raise NonPositiveRatio(f"α/β 必须为正有限数: {ratio!r}")
    norm = math.hypot(r, 1.0)
    return SchmidtState(alpha=r / norm, beta=1.0 / norm)


def basis_vectors(setting: MeasurementSetting) -> Tuple[np.ndarray, np.ndarray]:
    """
    测量方向对应的正交基

    v = (sinφ, e^{iν}cosφ), u = (cosφ, −e^{iν}sinφ)，基矢顺序 (|+⟩, |−⟩)

    Args:
        setting: 测量方向

    Returns:
        (v, u) 两个2分量复向量
    """
    s, c = math.sin(setting.phi), math.cos(setting.phi)
    phase = complex(math.cos(setting.nu), math.sin(setting.nu))
    v = np.array([s, phase * c], dtype=complex)
    u = np.array([c, -phase * s], dtype=complex)
    return v, u


def reduced_state(state: SchmidtState) -> ReducedState:
    """约化密度矩阵 ρ_red = diag(α², β²)"""
    return ReducedState(p_plus=state.alpha ** 2, p_minus=state.beta ** 2)


def _require_nondegenerate(state: SchmidtState):
    if state.is_degenerate:
        raise DegenerateState(
            f"乘积态 (alpha={state.alpha}, beta={state.beta}) 无法构造Hardy类测量基"
        )


def exponent_weights(ratio: float, k: int) -> Tuple[float, float]:
    """
    指数族的 (sinφ, |cosφ|)

    sinφ = β^{k/2}/√(α^k+β^k) = 1/√(1+r^k)
    |cosφ| = α^{k/2}/√(α^k+β^k) = √(r^k/(1+r^k))

    在对数域计算，k = 1024 时不下溢也不上溢。

    Args:
        ratio: α/β > 0
        k: 正整数指数

    Returns:
        (sinφ, |cosφ|)
    """
    x = k * math.log(ratio)
    half_log_norm = 0.5 * float(np.logaddexp(0.0, x))
    sin_phi = math.exp(-half_log_norm)
    cos_abs = math.exp(0.5 * x - half_log_norm)
    return sin_phi, cos_abs


def k_config(
    state: SchmidtState,
    k: ExponentQuad,
    nus: Sequence[float] = (0.0, 0.0, 0.0, 0.0),
    kmax: int = K_MAX_CEILING,
) -> MeasurementConfig:
    """
    指数四元组广义Hardy基

    sinφᵢ = β^{kᵢ/2}/√(α^{kᵢ}+β^{kᵢ})，cosφ1、cosφ3 取负，cosφ2、cosφ4 取正。

    Args:
        state: 非退化Schmidt态
        k: 指数四元组
        nus: 可选的相位 ν1..ν4（默认全0）
        kmax: 指数上限

    Returns:
        测量配置

    Raises:
        DegenerateState: α = 0 或 β = 0
        InvalidExponents: 指数超过 kmax
    """
    _require_nondegenerate(state)
    k.check_bounds(kmax)
    nus = tuple(nus)
    if len(nus) != 4:
        raise ValueError(f"需要4个相位，实际为 {len(nus)}")

    ratio = state.ratio()
    settings = []
    for ki, sign, nu in zip(k.as_tuple(), COS_SIGNS, nus):
        sin_phi, cos_abs = exponent_weights(ratio, ki)
        settings.append(MeasurementSetting.from_sin_cos(sin_phi, sign * cos_abs, nu))
    return MeasurementConfig(tuple(settings))


def hardy_config(state: SchmidtState) -> MeasurementConfig:
    """
    Hardy测量基

    sinφ1 = sinφ4 = √β/√(α+β), sinφ2 = sinφ3 = β^{3/2}/√(α³+β³)
    cosφ1 = −√α/√(α+β), cosφ4 = +√α/√(α+β)
    cosφ2 = +α^{3/2}/√(α³+β³), cosφ3 = −α^{3/2}/√(α³+β³)

    Args:
        state: 非退化Schmidt态

    Returns:
        测量配置（与 k_config(state, (1,3,3,1)) 一致）
    """
    _require_nondegenerate(state)
    a, b = state.alpha, state.beta
    n1 = math.sqrt(a + b)
    n3 = math.sqrt(a ** 3 + b ** 3)
    s1, c1 = math.sqrt(b) / n1, math.sqrt(a) / n1
    s3, c3 = b ** 1.5 / n3, a ** 1.5 / n3
    return MeasurementConfig((
        MeasurementSetting.from_sin_cos(s1, -c1),
        MeasurementSetting.from_sin_cos(s3, c3),
        MeasurementSetting.from_sin_cos(s3, -c3),
        MeasurementSetting.from_sin_cos(s1, c1),
    ))


def nm_config(state: SchmidtState, n: int, m: int) -> MeasurementConfig:
    """
    (n, m) 广义Hardy基，等价于 k_config(state, (n, m, m, n))

    Raises:
        InvalidExponents: n = m 或越界
        DegenerateState: 乘积态
    """
    if n == m:
        raise InvalidExponents(f"(n, m) 族要求 n ≠ m，实际 n = m = {n}")
    return k_config(state, ExponentQuad(n, m, m, n))


def sin_table(config: MeasurementConfig, decimals: int = 2) -> Tuple[float, ...]:
    """
    sinφ1..sinφ4 截断（不四舍五入）到指定小数位
    """
    scale = 10 ** decimals
    return tuple(math.floor(math.sin(phi) * scale + 1e-9) / scale for phi in config.phis)
