"""
CH违背量与阈值效率计算
计算联合/边缘探测概率、CH算符及其期望值 Q、Eberhard不等式余量和 η_crit

功能:
- joint_probability / marginal_probability: 单个概率
- ch_operator: 乘积基下的 4×4 CH算符 Î_CH
- ch_q: 完整违背报告（概率路径与算符路径双重计算）
- hardy_fraction / eta_crit / eberhard_margin
- batch_violation: 供优化器与搜索使用的向量化内核

乘积基顺序: (|++⟩, |+−⟩, |−+⟩, |−−⟩)，下标 = 2·iA + iB
"""

import logging
import math
from typing import Optional, Tuple

import numpy as np

from app.models.exceptions import DegenerateState, InvalidEfficiency
from app.models.result_model import ViolationReport
from app.models.state_model import SchmidtState, MeasurementSetting, MeasurementConfig
from app.core.states import basis_vectors

logger = logging.getLogger(__name__)

TSIRELSON_CH = 1.0 / math.sqrt(2.0) - 0.5


# ============ 单点计算 ============

def joint_probability(
    state: SchmidtState,
    setting_a: MeasurementSetting,
    flip_a: bool,
    setting_b: MeasurementSetting,
    flip_b: bool,
) -> float:
    """
    联合探测概率 |⟨w_A ⊗ w_B|Ψ⟩|²

    Args:
        state: Schmidt态
        setting_a: 粒子1的测量方向
        flip_a: True 时使用正交投影 u（φ̃）
        setting_b: 粒子2的测量方向
        flip_b: True 时使用正交投影 u（φ̃）

    Returns:
        概率 ∈ [0, 1]
    """
    v_a, u_a = basis_vectors(setting_a)
    v_b, u_b = basis_vectors(setting_b)
    w = np.kron(u_a if flip_a else v_a, u_b if flip_b else v_b)
    amplitude = np.vdot(w, state.amplitudes())
    return float(abs(amplitude) ** 2)


def marginal_probability(state: SchmidtState, setting: MeasurementSetting) -> float:
    """
    边缘概率 P(φ) = α² sin²φ + β² cos²φ（与 ν 无关）
    """
    s, c = math.sin(setting.phi), math.cos(setting.phi)
    return state.alpha ** 2 * s * s + state.beta ** 2 * c * c


def _projector(w: np.ndarray) -> np.ndarray:
    return np.outer(w, w.conj())


def ch_operator(config: MeasurementConfig) -> np.ndarray:
    """
    CH算符

    Î_CH = (P_{φ2} − P_{φ̃1}) ⊗ P_{φ3} − P_{φ1} ⊗ P_{φ4} − P_{φ2} ⊗ P_{φ̃4}

    Returns:
        4×4 厄米矩阵
    """
    v1, u1 = basis_vectors(config.settings[0])
    v2, _ = basis_vectors(config.settings[1])
    v3, _ = basis_vectors(config.settings[2])
    v4, u4 = basis_vectors(config.settings[3])
    p_v2 = _projector(v2)
    return (
        np.kron(p_v2 - _projector(u1), _projector(v3))
        - np.kron(_projector(v1), _projector(v4))
        - np.kron(p_v2, _projector(u4))
    )


def operator_max_eigenvalue(config: MeasurementConfig) -> float:
    """Î_CH 的最大本征值（任何态上 Q 的上界）"""
    return float(np.linalg.eigvalsh(ch_operator(config))[-1])


def eta_from_parts(q: float, m2: float, m3: float) -> Optional[float]:
    """
    η_crit = (P(φ2)+P(φ3)) / (Q+P(φ2)+P(φ3))；Q ≤ 0 时返回 None
    """
    if not q > 0:
        return None
    marginals = m2 + m3
    return marginals / (q + marginals)


def ch_q(state: SchmidtState, config: MeasurementConfig) -> ViolationReport:
    """
    完整CH违背报告

    Q 由四个联合概率计算，同时以 ⟨Ψ|Î_CH|Ψ⟩ 计算 q_operator 作交叉校验。

    Args:
        state: Schmidt态
        config: 测量配置

    Returns:
        ViolationReport
    """
    s1, s2, s3, s4 = config.settings
    p23 = joint_probability(state, s2, False, s3, False)
    p1t3 = joint_probability(state, s1, True, s3, False)
    p14 = joint_probability(state, s1, False, s4, False)
    p2t4 = joint_probability(state, s2, False, s4, True)
    m2 = marginal_probability(state, s2)
    m3 = marginal_probability(state, s3)
    q = p23 - p1t3 - p14 - p2t4

    psi = state.amplitudes()
    q_operator = float(np.vdot(psi, ch_operator(config) @ psi).real)

    return ViolationReport(
        p23=p23,
        p1t3=p1t3,
        p14=p14,
        p2t4=p2t4,
        m2=m2,
        m3=m3,
        q=q,
        eta_crit=eta_from_parts(q, m2, m3),
        q_operator=q_operator,
    )


def hardy_fraction(state: SchmidtState) -> float:
    """
    Hardy分数 (αβ(α−β)/(1−αβ))²

    Raises:
        DegenerateState: 乘积态
    """
    if state.is_degenerate:
        raise DegenerateState("乘积态没有Hardy分数")
    a, b = state.alpha, state.beta
    return (a * b * (a - b) / (1.0 - a * b)) ** 2


def eta_crit(state: SchmidtState, config: MeasurementConfig) -> Optional[float]:
    """阈值探测效率；Q ≤ 0 时为 None"""
    return ch_q(state, config).eta_crit


def eberhard_margin(state: SchmidtState, config: MeasurementConfig, eta: float) -> float:
    """
    Eberhard不等式余量 Q − ((1−η)/η)(P(φ2)+P(φ3))

    正值表示在效率 η 下仍违背。

    Raises:
        InvalidEfficiency: η ∉ (0, 1]
    """
    eta = float(eta)
    if not 0.0 < eta <= 1.0:
        raise InvalidEfficiency(f"探测效率必须在 (0, 1] 内: {eta!r}")
    report = ch_q(state, config)
    return report.q - (1.0 - eta) / eta * (report.m2 + report.m3)


# ============ 向量化内核 ============

def pair_probability(alpha, beta, a0, a1, b0, b1, cos_nu):
    """
    |α a0 b0 + β e^{-iθ} a1 b1|²，a、b 为实分量
    """
    x = a0 * b0
    y = a1 * b1
    ax = alpha * x
    by = beta * y
    return ax * ax + by * by + 2.0 * ax * by * cos_nu


def batch_violation(alpha, beta, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    批量计算 Q 与 P(φ2)+P(φ3)

    Args:
        alpha, beta: Schmidt系数（标量或可广播数组）
        x: 形状 (..., 8) 的参数数组 (φ1..φ4, ν1..ν4)

    Returns:
        (q, marginal_sum)，形状为 x.shape[:-1]
    """
    x = np.asarray(x, dtype=float)
    phi = x[..., :4]
    nu = x[..., 4:]
    s = np.sin(phi)
    c = np.cos(phi)
    s1, s2, s3, s4 = (s[..., i] for i in range(4))
    c1, c2, c3, c4 = (c[..., i] for i in range(4))
    n1, n2, n3, n4 = (nu[..., i] for i in range(4))

    # v = (s, e^{iν}c), u = (c, −e^{iν}s)
    p23 = pair_probability(alpha, beta, s2, c2, s3, c3, np.cos(n2 + n3))
    p1t3 = pair_probability(alpha, beta, c1, -s1, s3, c3, np.cos(n1 + n3))
    p14 = pair_probability(alpha, beta, s1, c1, s4, c4, np.cos(n1 + n4))
    p2t4 = pair_probability(alpha, beta, s2, c2, c4, -s4, np.cos(n2 + n4))
    q = p23 - p1t3 - p14 - p2t4

    a2, b2 = alpha * alpha, beta * beta
    marginal_sum = a2 * s2 * s2 + b2 * c2 * c2 + a2 * s3 * s3 + b2 * c3 * c3
    return q, marginal_sum


def batch_eta_objective(alpha, beta, x: np.ndarray) -> np.ndarray:
    """
    η_crit 最小化目标：Q > 0 时为 η_crit，否则为 1 + |Q|

    两段在 Q = 0 处连续（η_crit → 1）。
    """
    q, marginal_sum = batch_violation(alpha, beta, x)
    positive = q > 0
    safe = np.where(positive, q + marginal_sum, 1.0)
    return np.where(positive, marginal_sum / safe, 1.0 + np.abs(q))
