"""
数据模型包
包含系统中使用的所有数据模型

模块说明:
- enums.py: 枚举定义（Strategy, Objective, CGStatus等）
- exceptions.py: 异常层次结构
- state_model.py: 量子态与测量设置模型
- config_model.py: 优化/搜索/运行配置模型（Pydantic）
- result_model.py: 计算结果模型
"""

from app.models.enums import (
    Strategy,
    Objective,
    Metric,
    OutputFormat,
    CGStatus,
    STRATEGY_META,
)
from app.models.exceptions import (
    ChBasesError,
    InvalidState,
    NonPositiveRatio,
    DegenerateState,
    InvalidExponents,
    InvalidEfficiency,
    NonFiniteObjective,
    NoViolationFound,
    ComplexRootRegime,
    SingularEfficiency,
    NoPhysicalRoot,
)
from app.models.state_model import (
    SchmidtState,
    MeasurementSetting,
    MeasurementConfig,
    ExponentQuad,
)
from app.models.config_model import OptimizerSettings, SearchSettings, RunConfig
from app.models.result_model import (
    ViolationReport,
    ReducedState,
    CGResult,
    OptimumRecord,
    AnalyticPoint,
    EigenSet,
    FrontierPoint,
    CheckResult,
    VerifyReport,
)

__all__ = [
    # 枚举
    "Strategy",
    "Objective",
    "Metric",
    "OutputFormat",
    "CGStatus",
    "STRATEGY_META",
    # 异常
    "ChBasesError",
    "InvalidState",
    "NonPositiveRatio",
    "DegenerateState",
    "InvalidExponents",
    "InvalidEfficiency",
    "NonFiniteObjective",
    "NoViolationFound",
    "ComplexRootRegime",
    "SingularEfficiency",
    "NoPhysicalRoot",
    # 态与测量
    "SchmidtState",
    "MeasurementSetting",
    "MeasurementConfig",
    "ExponentQuad",
    # 配置
    "OptimizerSettings",
    "SearchSettings",
    "RunConfig",
    # 结果
    "ViolationReport",
    "ReducedState",
    "CGResult",
    "OptimumRecord",
    "AnalyticPoint",
    "EigenSet",
    "FrontierPoint",
    "CheckResult",
    "VerifyReport",
]
