"""
量子态与测量设置模型
定义纯态双量子比特及测量基的不可变数据结构

模型:
- SchmidtState: Schmidt形式纯态 α|++⟩ + β|−−⟩
- MeasurementSetting: 单个测量方向 (φ, ν)
- MeasurementConfig: CH测试的四个测量方向
- ExponentQuad: 广义Hardy基的整数指数 (k1, k2, k3, k4)
"""

import math
from dataclasses import dataclass
from typing import Iterable, Tuple

import numpy as np

from app.models.exceptions import InvalidState, InvalidExponents


NORMALIZATION_TOLERANCE = 1e-12
K_MAX_CEILING = 1024

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class SchmidtState:
    """
    Schmidt形式的纯态双量子比特

    |Ψ⟩ = α|++⟩ + β|−−⟩，α, β ≥ 0 且 α² + β² = 1

    Attributes:
        alpha: |++⟩ 分量的实振幅
        beta: |−−⟩ 分量的实振幅
    """

    alpha: float
    beta: float

    def __post_init__(self):
        a, b = float(self.alpha), float(self.beta)
        if not (math.isfinite(a) and math.isfinite(b)):
            raise InvalidState(f"Schmidt系数必须有限: alpha={a}, beta={b}")
        if a < 0 or b < 0:
            raise InvalidState(f"Schmidt系数必须非负: alpha={a}, beta={b}")
        if abs(a * a + b * b - 1.0) > NORMALIZATION_TOLERANCE:
            raise InvalidState(f"态未归一化: alpha²+beta²={a * a + b * b!r}")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    def ratio(self) -> float:
        """α/β（仅在 β > 0 时有定义）"""
        if self.beta <= 0:
            raise InvalidState("beta = 0 时 α/β 无定义")
        return self.alpha / self.beta

    def concurrence(self) -> float:
        """并发度 C = 2αβ"""
        return 2.0 * self.alpha * self.beta

    @property
    def is_degenerate(self) -> bool:
        """乘积态（α = 0 或 β = 0）"""
        return self.alpha == 0.0 or self.beta == 0.0

    def amplitudes(self) -> np.ndarray:
        """乘积基 (|++⟩, |+−⟩, |−+⟩, |−−⟩) 下的4分量振幅"""
        return np.array([self.alpha, 0.0, 0.0, self.beta], dtype=complex)

    def to_dict(self) -> dict:
        """转换为字典"""
        return {"alpha": self.alpha, "beta": self.beta}


@dataclass(frozen=True)
class MeasurementSetting:
    """
    单个测量方向

    φ 规范化到 [0, π)，ν 规范化到 [0, 2π)。
    φ → φ + π 只改变基矢量的整体相位，因此规范化不改变任何概率。

    Attributes:
        phi: 测量角（弧度）
        nu: 相对相位（弧度）
    """

    phi: float
    nu: float = 0.0

    def __post_init__(self):
        phi, nu = float(self.phi), float(self.nu)
        if not (math.isfinite(phi) and math.isfinite(nu)):
            raise ValueError(f"测量角必须有限: phi={phi}, nu={nu}")
        phi = math.fmod(phi, math.pi)
        if phi < 0:
            phi += math.pi
        if phi >= math.pi:
            phi = 0.0
        nu = math.fmod(nu, TWO_PI)
        if nu < 0:
            nu += TWO_PI
        if nu >= TWO_PI:
            nu = 0.0
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "nu", nu)

    @classmethod
    def from_sin_cos(cls, sin_phi: float, cos_phi: float, nu: float = 0.0) -> "MeasurementSetting":
        """
        由 (sinφ, 带符号cosφ) 构造规范角

        sinφ ≥ 0 时 atan2 直接落在 [0, π]，cosφ 的符号决定象限。
        """
        return cls(phi=math.atan2(sin_phi, cos_phi), nu=nu)

    @property
    def sin_phi(self) -> float:
        return math.sin(self.phi)

    @property
    def cos_phi(self) -> float:
        return math.cos(self.phi)

    def to_dict(self) -> dict:
        """转换为字典"""
        return {"phi": self.phi, "nu": self.nu}


@dataclass(frozen=True)
class MeasurementConfig:
    """
    CH测试的测量配置

    settings[0], settings[1] 作用于粒子1（φ1, φ2），
    settings[2], settings[3] 作用于粒子2（φ3, φ4）。

    Attributes:
        settings: 四个测量方向
    """

    settings: Tuple[MeasurementSetting, MeasurementSetting, MeasurementSetting, MeasurementSetting]

    def __post_init__(self):
        settings = tuple(self.settings)
        if len(settings) != 4:
            raise ValueError(f"测量配置需要4个测量方向，实际为 {len(settings)}")
        object.__setattr__(self, "settings", settings)

    @classmethod
    def from_angles(cls, phis: Iterable[float], nus: Iterable[float] = (0.0, 0.0, 0.0, 0.0)) -> "MeasurementConfig":
        """由 φ1..φ4 与 ν1..ν4 构造"""
        phis, nus = list(phis), list(nus)
        if len(phis) != 4 or len(nus) != 4:
            raise ValueError("需要4个φ与4个ν")
        return cls(tuple(MeasurementSetting(p, n) for p, n in zip(phis, nus)))

    @classmethod
    def from_vector(cls, x: Iterable[float]) -> "MeasurementConfig":
        """由8参数向量 (φ1..φ4, ν1..ν4) 构造"""
        x = [float(v) for v in x]
        if len(x) != 8:
            raise ValueError(f"参数向量长度必须为8，实际为 {len(x)}")
        return cls.from_angles(x[:4], x[4:])

    @property
    def phis(self) -> Tuple[float, ...]:
        return tuple(s.phi for s in self.settings)

    @property
    def nus(self) -> Tuple[float, ...]:
        return tuple(s.nu for s in self.settings)

    def to_vector(self) -> np.ndarray:
        """转换为8参数向量"""
        return np.array(self.phis + self.nus, dtype=float)

    def to_dict(self) -> dict:
        """转换为字典"""
        return {"phis": list(self.phis), "nus": list(self.nus)}


@dataclass(frozen=True)
class ExponentQuad:
    """
    广义Hardy基的指数四元组

    (n, m) 族对应特例 (n, m, m, n)。

    Attributes:
        k1, k2, k3, k4: 正整数指数，1 ≤ kᵢ ≤ 1024
    """

    k1: int
    k2: int
    k3: int
    k4: int

    def __post_init__(self):
        for name in ("k1", "k2", "k3", "k4"):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value:
                raise InvalidExponents(f"{name} 必须为整数: {value!r}")
            value = int(value)
            if not 1 <= value <= K_MAX_CEILING:
                raise InvalidExponents(f"{name}={value} 超出范围 [1, {K_MAX_CEILING}]")
            object.__setattr__(self, name, value)

    @classmethod
    def parse(cls, text: str) -> "ExponentQuad":
        """解析 "a,b,c,d" 形式的字符串"""
        parts = [p.strip() for p in str(text).split(",") if p.strip()]
        if len(parts) != 4:
            raise InvalidExponents(f"指数四元组需要4个整数: {text!r}")
        try:
            return cls(*(int(p) for p in parts))
        except ValueError as e:
            raise InvalidExponents(f"无法解析指数四元组 {text!r}: {e}") from e

    def as_tuple(self) -> Tuple[int, int, int, int]:
        return (self.k1, self.k2, self.k3, self.k4)

    def check_bounds(self, kmax: int) -> "ExponentQuad":
        """检查是否不超过给定上限 kmax"""
        if max(self.as_tuple()) > kmax:
            raise InvalidExponents(f"指数 {self.as_tuple()} 超过上限 {kmax}")
        return self

    def __str__(self) -> str:
        return ",".join(str(k) for k in self.as_tuple())

    def to_dict(self) -> dict:
        """转换为字典"""
        return {"k1": self.k1, "k2": self.k2, "k3": self.k3, "k4": self.k4}
