"""
全局配置模型
定义数值优化、指数搜索与命令行运行的配置参数

配置项:
- OptimizerSettings: 多起点共轭梯度参数
- SearchSettings: 指数空间分阶段搜索参数
- RunConfig: 单次命令行调用的完整配置
"""

from typing import List, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from app.models.enums import Strategy, Metric, OutputFormat
from app.models.state_model import ExponentQuad, K_MAX_CEILING


DEFAULT_SEED = 20111209
DEFAULT_RATIO_GRID = "0.005:0.995:199"


class OptimizerSettings(BaseModel):
    """
    多起点共轭梯度优化参数

    Attributes:
        sample_count: 多起点数量（≥1）
        gradient_step: 中心差分步长，0 < h < 1e-2
        tolerance: 梯度范数收敛阈值
        max_iterations: 单个起点的最大迭代次数
        seed: 64位随机种子
        warm_starts: 是否在随机起点之外加入Hardy/(n,m)族起点
    """

    model_config = {"frozen": True}

    sample_count: int = Field(
        default=10_000,
        ge=1,
        description="多起点数量"
    )
    gradient_step: float = Field(
        default=1e-6,
        gt=0,
        lt=1e-2,
        description="有限差分步长"
    )
    tolerance: float = Field(
        default=1e-10,
        gt=0,
        description="梯度范数收敛阈值"
    )
    max_iterations: int = Field(
        default=1000,
        ge=1,
        description="最大迭代次数"
    )
    seed: int = Field(
        default=DEFAULT_SEED,
        ge=0,
        lt=2 ** 64,
        description="随机种子（64位）"
    )
    warm_starts: bool = Field(
        default=True,
        description="是否加入命名测量基族作为额外起点"
    )


class SearchSettings(BaseModel):
    """
    指数空间搜索参数

    Attributes:
        coarse_kmax: 第一阶段穷举上限
        full_kmax: 第二阶段坐标搜索上限
        refine_rounds: 第二阶段最大轮数
    """

    model_config = {"frozen": True}

    coarse_kmax: int = Field(
        default=32,
        ge=1,
        description="第一阶段穷举上限"
    )
    full_kmax: int = Field(
        default=1024,
        ge=1,
        le=K_MAX_CEILING,
        description="第二阶段搜索上限"
    )
    refine_rounds: int = Field(
        default=8,
        ge=0,
        description="坐标细化轮数"
    )

    @model_validator(mode="after")
    def check_bounds(self) -> "SearchSettings":
        if self.coarse_kmax > self.full_kmax:
            raise ValueError(
                f"coarse_kmax ({self.coarse_kmax}) 不能大于 full_kmax ({self.full_kmax})"
            )
        return self


class RunConfig(BaseModel):
    """
    命令行运行配置

    由默认值、配置文件与命令行参数依次合并而成（后者优先）。

    Attributes:
        command: 子命令（curve/table1/analytic/verify）
        strategy: 曲线策略列表（可重复）
        n, m: (n, m) 族参数
        k: 指数四元组字符串 "a,b,c,d"
        metric: 绘图指标
        ratios: 比值网格 "start:stop:count" 或逗号列表
        eta: 探测效率网格（analytic命令）
        seed / samples / gradient_step / tolerance / max_iterations: 优化器参数
        kmax_coarse / kmax / refine_rounds: 指数搜索参数
        out: 输出路径
        format: 输出格式
        config: 配置文件路径
        cache_dir / no_cache: 结果缓存
        tamper_tolerance: verify命令容差倍率（测试用）
        report: verify命令JSON报告路径
        verbose: 调试日志
    """

    command: str = Field(default="curve", description="子命令")

    # 曲线策略
    strategy: List[Strategy] = Field(
        default_factory=lambda: [Strategy.HARDY],
        min_length=1,
        description="曲线策略"
    )
    n: int = Field(default=3, ge=1, le=K_MAX_CEILING, description="(n,m)族参数n")
    m: int = Field(default=10, ge=1, le=K_MAX_CEILING, description="(n,m)族参数m")
    k: Optional[str] = Field(default=None, description="指数四元组 a,b,c,d")
    metric: Metric = Field(default=Metric.Q, description="绘图指标")

    # 网格
    ratios: str = Field(default=DEFAULT_RATIO_GRID, description="比值网格")
    eta: Optional[str] = Field(default=None, description="效率网格")

    # 优化器
    seed: int = Field(default=DEFAULT_SEED, ge=0, lt=2 ** 64)
    samples: int = Field(default=10_000, ge=1)
    gradient_step: float = Field(default=1e-6, gt=0, lt=1e-2)
    tolerance: float = Field(default=1e-10, gt=0)
    max_iterations: int = Field(default=1000, ge=1)
    warm_starts: bool = Field(default=True)

    # 指数搜索
    kmax_coarse: int = Field(default=32, ge=1)
    kmax: int = Field(default=1024, ge=1, le=K_MAX_CEILING)
    refine_rounds: int = Field(default=8, ge=0)

    # 输出
    out: Optional[str] = Field(default=None, description="输出路径")
    format: OutputFormat = Field(default=OutputFormat.CSV, description="输出格式")
    config: Optional[str] = Field(default=None, description="配置文件路径")
    cache_dir: str = Field(default=".chbases_cache", description="结果缓存目录")
    no_cache: bool = Field(default=False, description="禁用结果缓存")

    # verify
    tamper_tolerance: float = Field(default=1.0, description="容差倍率")
    report: Optional[str] = Field(default=None, description="JSON报告路径")

    verbose: bool = Field(default=False)

    @field_validator("strategy", mode="before")
    @classmethod
    def split_strategy(cls, value):
        """允许 "hardy,nm" 与单个字符串"""
        if isinstance(value, str):
            value = [v.strip() for v in value.split(",") if v.strip()]
        return value

    @field_validator("k")
    @classmethod
    def check_k(cls, value: Optional[str]) -> Optional[str]:
        if value is None:
            return value
        return str(ExponentQuad.parse(value))

    @model_validator(mode="after")
    def check_consistency(self) -> "RunConfig":
        if self.kmax_coarse > self.kmax:
            raise ValueError(f"kmax_coarse ({self.kmax_coarse}) 不能大于 kmax ({self.kmax})")
        if Strategy.NM in self.strategy and self.n == self.m:
            raise ValueError(f"(n,m) 族要求 n ≠ m，实际 n = m = {self.n}")
        if Strategy.K in self.strategy and self.k is None:
            raise ValueError("策略 k 需要 --k a,b,c,d")
        return self

    def optimizer_settings(self) -> OptimizerSettings:
        """提取优化器参数"""
        return OptimizerSettings(
            sample_count=self.samples,
            gradient_step=self.gradient_step,
            tolerance=self.tolerance,
            max_iterations=self.max_iterations,
            seed=self.seed,
            warm_starts=self.warm_starts,
        )

    def search_settings(self) -> SearchSettings:
        """提取指数搜索参数"""
        return SearchSettings(
            coarse_kmax=self.kmax_coarse,
            full_kmax=self.kmax,
            refine_rounds=self.refine_rounds,
        )

    def cache_payload(self) -> dict:
        """
        参与缓存键计算的字段

        输出位置、格式与缓存控制字段不影响计算结果，因此排除。
        """
        return self.model_dump(
            mode="json",
            exclude={"out", "format", "config", "cache_dir", "no_cache", "verbose", "report"},
        )
