"""
效率加权CH算符的解析特征值分析

约定:
- 计算基为Schmidt基，Π_{a1} = |0⟩⟨0| ⊗ I，Π_{b1} = I ⊗ |0⟩⟨0|
- a0 投影到 (√(1−s), √s)，b0 投影到 (√(1−t), √t)（√s = cosφ, ν = 0）
- B = η²(Π_{a1b1} + Π_{a1b0} + Π_{a0b1} − Π_{a0b0}) − η(Π_{a1} + Π_{b1})
- η = 1, s = t = 1/2 时 λ_max = (√2−1)/2

功能:
- build_B / char_quartic / char_quartic_symmetric
- reduced_cubic_coefficients / reduced_cubic_roots（三角法）
- stationary_lambda / t_quartic_coefficients / optimal_t
- max_violation_for_eta: 组合求解并由最大本征向量提取最优态
"""

import logging
import math
from typing import List, Sequence

import numpy as np

from app.models.exceptions import (
    ComplexRootRegime,
    InvalidEfficiency,
    NoPhysicalRoot,
    SingularEfficiency,
)
from app.models.result_model import AnalyticPoint, EigenSet, FrontierPoint
from app.core.states import make_state

logger = logging.getLogger(__name__)

ARCCOS_CLAMP = 1e-12
IMAG_TOLERANCE = 1e-6
CLUSTER_DISTANCE = 1e-6
ROOT_WINDOW = 1e-9
NEWTON_ITERATIONS = 100
ETA_FLOOR = 2.0 / 3.0

_E0 = np.array([1.0, 0.0])
_I2 = np.eye(2)


def _check_eta(eta: float, lower_open: float = 0.0) -> float:
    eta = float(eta)
    if not (lower_open < eta <= 1.0):
        raise InvalidEfficiency(f"eta={eta!r} 不在 ({lower_open:.6g}, 1] 内")
    return eta


def _check_unit(name: str, value: float) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name}={value!r} 不在 [0, 1] 内")
    return value


# ============ 算符与特征多项式 ============

def build_B(point: AnalyticPoint) -> np.ndarray:
    """
    效率加权CH算符 B（4×4 实对称矩阵）
    """
    eta, s, t = point.eta, point.s, point.t
    a0 = np.array([math.sqrt(1.0 - s), math.sqrt(s)])
    b0 = np.array([math.sqrt(1.0 - t), math.sqrt(t)])
    p1 = np.outer(_E0, _E0)
    pa0 = np.outer(a0, a0)
    pb0 = np.outer(b0, b0)
    joint = np.kron(p1, p1) + np.kron(p1, pb0) + np.kron(pa0, p1) - np.kron(pa0, pb0)
    local = np.kron(p1, _I2) + np.kron(_I2, p1)
    B = eta * eta * joint - eta * local
    return 0.5 * (B + B.T)


def char_quartic(point: AnalyticPoint) -> np.ndarray:
    """
    B 的特征多项式系数（λ⁴ 在前）

    λ⁴ − 2η(η−2)λ³ − η²(4η−5)λ² + 2(η−1)η³(st(η²−η)−1)λ
      + stη⁵(−stη³ + (s+t)η(2η−1) − 3η + 2)
    """
    eta, s, t = point.eta, point.s, point.t
    st = s * t
    return np.array([
        1.0,
        -2.0 * eta * (eta - 2.0),
        -eta ** 2 * (4.0 * eta - 5.0),
        2.0 * (eta - 1.0) * eta ** 3 * (st * (eta ** 2 - eta) - 1.0),
        st * eta ** 5 * (-st * eta ** 3 + (s + t) * eta * (2.0 * eta - 1.0) - 3.0 * eta + 2.0),
    ])


def char_quartic_symmetric(eta: float, t: float) -> np.ndarray:
    """s = t 时的特征多项式系数"""
    eta = _check_eta(eta)
    t = _check_unit("t", t)
    return np.array([
        1.0,
        -2.0 * eta * (eta - 2.0),
        -eta ** 2 * (4.0 * eta - 5.0),
        2.0 * (eta - 1.0) * eta ** 3 * (t * t * (eta ** 2 - eta) - 1.0),
        t * t * eta ** 5 * (-t * t * eta ** 3 + 2.0 * t * eta * (2.0 * eta - 1.0) - 3.0 * eta + 2.0),
    ])


def polynomial_residual(coefficients: Sequence[float], x: float) -> float:
    """按系数量级归一化的多项式残差 |p(x)| / Σ|cᵢ||x|ⁱ"""
    coefficients = np.asarray(coefficients, dtype=float)
    powers = np.abs(x) ** np.arange(len(coefficients) - 1, -1, -1)
    scale = float(np.sum(np.abs(coefficients) * powers))
    return abs(float(np.polyval(coefficients, x))) / max(scale, 1e-300)


# ============ 约化三次方程 ============

def reduced_cubic_coefficients(eta: float, t: float) -> np.ndarray:
    """
    首一三次方程 λ³ + aλ² + bλ + c 的系数 [1, a, b, c]
    """
    a = eta * (3.0 + (t - 2.0) * eta)
    b = eta ** 2 * (eta ** 2 * (t * t - 2.0 * t) + 2.0 * eta * (t - 1.0) + 2.0)
    c = eta ** 3 * (eta ** 3 * t ** 3 - 3.0 * eta ** 2 * t * t + 2.0 * eta * t * t)
    return np.array([1.0, a, b, c])


def singlet_eigenvalue(eta: float, t: float) -> float:
    """单态本征值 λ4 = η²t − η（恒 ≤ 0）"""
    return eta * eta * t - eta


def reduced_cubic_roots(eta: float, t: float) -> EigenSet:
    """
    三角法求约化三次方程的三个实根

    λ_k = −a/3 + (2/3)η√D·cos[(arccos X + 2πk)/3]
    D = 3 − 6η + (4 + 2t − 2t²)η²
    X = η·N / D^{3/2}

    Raises:
        ComplexRootRegime: |X| 超过 1 的幅度大于 1e-12
    """
    eta = _check_eta(eta)
    t = _check_unit("t", t)
    a = eta * (3.0 + (t - 2.0) * eta)
    D = 3.0 - 6.0 * eta + (4.0 + 2.0 * t - 2.0 * t * t) * eta ** 2
    N = (
        9.0 - 18.0 * eta + 8.0 * eta ** 2 - 10.0 * t ** 3 * eta ** 2
        + 3.0 * t * (3.0 - 6.0 * eta + 2.0 * eta ** 2)
        - 3.0 * t * t * (9.0 - 18.0 * eta + 4.0 * eta ** 2)
    )
    X = eta * N / D ** 1.5
    if abs(X) > 1.0 + ARCCOS_CLAMP:
        raise ComplexRootRegime(f"arccos 参数越界: X={X!r} (eta={eta}, t={t})")
    X = min(1.0, max(-1.0, X))

    theta = math.acos(X)
    amplitude = 2.0 / 3.0 * eta * math.sqrt(D)
    roots = sorted(
        (-a / 3.0 + amplitude * math.cos((theta + 2.0 * math.pi * k) / 3.0) for k in range(3)),
        reverse=True,
    )
    return EigenSet(
        lambda1=roots[0],
        lambda2=roots[1],
        lambda3=roots[2],
        lambda4=singlet_eigenvalue(eta, t),
    )


# ============ 驻点条件 ============

def stationary_lambda(eta: float, t: float) -> float:
    """
    λ'(t) = 0 给出的 λ = η(2t²η³ − 3tη(2η−1) + 3η − 2) / (2(η−1)²)

    Raises:
        SingularEfficiency: η = 1
    """
    eta = _check_eta(eta)
    if eta == 1.0:
        raise SingularEfficiency("驻点表达式在 eta = 1 处奇异，请直接使用 reduced_cubic_roots")
    return eta * (2.0 * t * t * eta ** 3 - 3.0 * t * eta * (2.0 * eta - 1.0) + 3.0 * eta - 2.0) / (
        2.0 * (eta - 1.0) ** 2
    )


def t_quartic_coefficients(eta: float) -> np.ndarray:
    """最优 t 满足的四次方程系数（t⁴ 在前）"""
    e = float(eta)
    return np.array([
        4.0 * e ** 6,
        4.0 * e ** 4 * (2.0 * e ** 2 - 10.0 * e + 5.0),
        e ** 2 * (4.0 * e ** 4 - 48.0 * e ** 3 + 156.0 * e ** 2 - 132.0 * e + 33.0),
        2.0 * (2.0 * e - 1.0) ** 2 * (5.0 * e ** 2 - 16.0 * e + 8.0),
        -(e - 2.0) * (2.0 * e - 1.0) ** 2 * (3.0 * e - 2.0),
    ])


def _newton(coefficients: np.ndarray, x: float) -> float:
    derivative = np.polyder(coefficients)
    for _ in range(NEWTON_ITERATIONS):
        slope = np.polyval(derivative, x)
        if slope == 0.0:
            break
        step = np.polyval(coefficients, x) / slope
        x_next = x - step
        if not math.isfinite(x_next):
            break
        if abs(x_next - x) <= 1e-16 * max(1.0, abs(x)):
            x = x_next
            break
        x = x_next
    return float(x)


def t_quartic_real_roots(eta: float) -> List[float]:
    """
    四次方程的全部实根（伴随矩阵求根 + Newton精化）

    相距小于 1e-6 的根视为重根，对导数多项式做Newton迭代。
    """
    coefficients = t_quartic_coefficients(eta)
    raw = np.roots(coefficients)
    candidates = sorted(float(r.real) for r in raw if abs(r.imag) <= IMAG_TOLERANCE)

    clusters: List[List[float]] = []
    for r in candidates:
        if clusters and r - clusters[-1][-1] < CLUSTER_DISTANCE:
            clusters[-1].append(r)
        else:
            clusters.append([r])

    roots = []
    derivative = np.polyder(coefficients)
    for cluster in clusters:
        start = sum(cluster) / len(cluster)
        if len(cluster) > 1:
            roots.append(_newton(derivative, start))
        else:
            roots.append(_newton(coefficients, start))
    return roots


def optimal_t(eta: float) -> float:
    """
    使 λ1 最大的转动参数 t

    在 [0, 1] 内的实根中取 λ1(η, t) 最大者。

    Raises:
        InvalidEfficiency: η ∉ (2/3, 1]
        NoPhysicalRoot: [0, 1] 内无实根
    """
    eta = _check_eta(eta, lower_open=ETA_FLOOR)
    physical = [
        min(1.0, max(0.0, r))
        for r in t_quartic_real_roots(eta)
        if -ROOT_WINDOW <= r <= 1.0 + ROOT_WINDOW
    ]
    if not physical:
        raise NoPhysicalRoot(f"eta={eta}: 四次方程在 [0, 1] 内没有实根")
    best = max(physical, key=lambda t: (reduced_cubic_roots(eta, t).lambda1, -t))
    logger.debug("optimal_t eta=%.6f candidates=%s t*=%.12f", eta, physical, best)
    return best


def extract_state_ratio(B: np.ndarray) -> float:
    """最大本征向量的Schmidt分解：σ2/σ1"""
    _, vectors = np.linalg.eigh(B)
    top = vectors[:, -1].reshape(2, 2)
    sigma = np.linalg.svd(top, compute_uv=False)
    return float(sigma[1] / sigma[0])


def max_violation_for_eta(eta: float) -> FrontierPoint:
    """
    给定效率下的最大违背：最优 t、λ1 与最优态

    Args:
        eta: 探测效率 ∈ (2/3, 1]

    Returns:
        FrontierPoint，可解包为 (t, lambda1, state)
    """
    eta = _check_eta(eta, lower_open=ETA_FLOOR)
    t = optimal_t(eta)
    eigen = reduced_cubic_roots(eta, t)
    ratio = extract_state_ratio(build_B(AnalyticPoint(eta, t, t)))
    return FrontierPoint(
        eta=eta,
        t=t,
        lambda1=eigen.lambda1,
        state=make_state(ratio),
        eigen=eigen,
    )


def analytic_frontier(etas: Sequence[float]) -> List[FrontierPoint]:
    """对效率网格逐点求解"""
    return [max_violation_for_eta(eta) for eta in etas]
