"""
计算结果模型
定义各计算模块输出的数据结构

模型:
- ViolationReport: 联合概率、边缘概率、Q 与 η_crit
- ReducedState: 约化密度矩阵 diag(α², β²)
- CGResult: 单次共轭梯度运行结果
- OptimumRecord: 单个比值下的最优记录（曲线的一行）
- EigenSet: 约化三次方程的三个根与单态本征值
- AnalyticPoint: 解析分析的 (η, s, t) 参数点
- FrontierPoint: 给定效率下的最大违背解
- CheckResult: 不变量检查结果
"""

from dataclasses import dataclass, field
from typing import Optional, List, Dict, Any

import numpy as np

from app.models.enums import Objective, CGStatus
from app.models.exceptions import InvalidEfficiency
from app.models.state_model import SchmidtState, MeasurementConfig, ExponentQuad


@dataclass(frozen=True)
class ViolationReport:
    """
    CH违背报告

    Attributes:
        p23: P(φ2, φ3)
        p1t3: P(φ̃1, φ3)
        p14: P(φ1, φ4)
        p2t4: P(φ2, φ̃4)
        m2: 边缘概率 P(φ2)
        m3: 边缘概率 P(φ3)
        q: CH违背量 Q
        eta_crit: 阈值效率；Q ≤ 0 时为 None
        q_operator: ⟨Ψ|Î_CH|Ψ⟩（算符路径计算的 Q）
    """

    p23: float
    p1t3: float
    p14: float
    p2t4: float
    m2: float
    m3: float
    q: float
    eta_crit: Optional[float]
    q_operator: Optional[float] = None

    @property
    def violates(self) -> bool:
        """是否违背CH不等式"""
        return self.q > 0

    def to_dict(self) -> dict:
        """转换为字典"""
        return {
            "p23": self.p23,
            "p1t3": self.p1t3,
            "p14": self.p14,
            "p2t4": self.p2t4,
            "m2": self.m2,
            "m3": self.m3,
            "q": self.q,
            "eta_crit": self.eta_crit,
            "q_operator": self.q_operator,
        }


@dataclass(frozen=True)
class ReducedState:
    """约化密度矩阵 diag(α², β²)"""

    p_plus: float
    p_minus: float

    def matrix(self) -> np.ndarray:
        return np.diag([self.p_plus, self.p_minus]).astype(complex)

    @property
    def trace(self) -> float:
        return self.p_plus + self.p_minus


@dataclass
class CGResult:
    """
    共轭梯度运行结果

    Attributes:
        point: 终点参数向量
        value: 终点目标函数值
        status: 终止状态
        iterations: 迭代次数
        gradient_norm: 终点梯度范数
    """

    point: np.ndarray
    value: float
    status: CGStatus
    iterations: int
    gradient_norm: float

    def __iter__(self):
        # (point, value) 解包
        yield self.point
        yield self.value


@dataclass(frozen=True)
class OptimumRecord:
    """
    单个比值下的最优记录

    Attributes:
        ratio: α/β
        config: 测量配置
        k: 指数四元组（仅指数族策略）
        report: 违背报告
        objective: 目标标签
    """

    ratio: float
    config: MeasurementConfig
    report: ViolationReport
    objective: Objective
    k: Optional[ExponentQuad] = None

    @property
    def q(self) -> float:
        return self.report.q

    @property
    def eta_crit(self) -> Optional[float]:
        return self.report.eta_crit

    def to_row(self) -> Dict[str, Any]:
        """曲线文件的一行"""
        row: Dict[str, Any] = {
            "ratio": self.ratio,
            "q": self.report.q,
            "eta_crit": self.report.eta_crit,
        }
        for i, phi in enumerate(self.config.phis, start=1):
            row[f"phi{i}"] = phi
        for i, nu in enumerate(self.config.nus, start=1):
            row[f"nu{i}"] = nu
        quad = self.k.as_tuple() if self.k is not None else (None,) * 4
        for i, k in enumerate(quad, start=1):
            row[f"k{i}"] = k
        return row

    def to_dict(self) -> dict:
        """转换为字典（JSON输出与缓存）"""
        return {
            "ratio": self.ratio,
            "objective": self.objective.value,
            "config": self.config.to_dict(),
            "k": self.k.to_dict() if self.k is not None else None,
            "report": self.report.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "OptimumRecord":
        """由 to_dict() 的输出重建"""
        k = data.get("k")
        return cls(
            ratio=data["ratio"],
            config=MeasurementConfig.from_angles(data["config"]["phis"], data["config"]["nus"]),
            report=ViolationReport(**data["report"]),
            objective=Objective(data["objective"]),
            k=ExponentQuad(**k) if k else None,
        )


@dataclass(frozen=True)
class AnalyticPoint:
    """
    解析分析参数点

    s, t 为转动角余弦的平方（√s = cosφ, ν = 0）。

    Attributes:
        eta: 探测效率 ∈ (0, 1]
        s: A方转动参数 ∈ [0, 1]
        t: B方转动参数 ∈ [0, 1]
    """

    eta: float
    s: float
    t: float

    def __post_init__(self):
        if not 0.0 < self.eta <= 1.0:
            raise InvalidEfficiency(f"eta={self.eta} 不在 (0, 1] 内")
        for name in ("s", "t"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name}={value} 不在 [0, 1] 内")


@dataclass(frozen=True)
class EigenSet:
    """
    算符 B 在 s = t 下的本征值

    Attributes:
        lambda1 ≥ lambda2 ≥ lambda3: 约化三次方程的根
        lambda4: 单态本征值 η²t − η
    """

    lambda1: float
    lambda2: float
    lambda3: float
    lambda4: float

    def as_array(self) -> np.ndarray:
        return np.array([self.lambda1, self.lambda2, self.lambda3, self.lambda4])

    def to_dict(self) -> dict:
        return {
            "lambda1": self.lambda1,
            "lambda2": self.lambda2,
            "lambda3": self.lambda3,
            "lambda4": self.lambda4,
        }


@dataclass(frozen=True)
class FrontierPoint:
    """
    给定效率下的最大违背解

    可解包为 (t, lambda1, state)。

    Attributes:
        eta: 探测效率
        t: 最优转动参数（s = t）
        lambda1: 最大本征值
        state: 由最大本征向量提取的Schmidt态
        eigen: 全部本征值
    """

    eta: float
    t: float
    lambda1: float
    state: SchmidtState
    eigen: EigenSet

    def __iter__(self):
        yield self.t
        yield self.lambda1
        yield self.state

    @property
    def ratio(self) -> float:
        return self.state.ratio()

    def to_row(self) -> Dict[str, Any]:
        """analytic 输出的一行"""
        return {"eta": self.eta, "t": self.t, "lambda1": self.lambda1, "ratio": self.ratio}


@dataclass
class CheckResult:
    """
    不变量检查结果

    Attributes:
        name: 检查名称
        passed: 是否通过
        residual: 实测残差（或最差值）
        tolerance: 使用的容差
        detail: 补充说明
        duration: 耗时（秒，仅控制台显示）
    """

    name: str
    passed: bool
    residual: float
    tolerance: float
    detail: str = ""
    duration: float = 0.0
    extra: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "detail": self.detail,
            **self.extra,
        }


@dataclass
class VerifyReport:
    """不变量检查汇总"""

    checks: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failed_count(self) -> int:
        return sum(1 for c in self.checks if not c.passed)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "total": len(self.checks),
            "failed": self.failed_count,
            "checks": [c.to_dict() for c in self.checks],
        }
