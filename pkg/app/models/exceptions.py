"""
异常定义
系统中所有计算错误的统一层次结构

异常类:
- ChBasesError: 根异常
- InvalidState / NonPositiveRatio / DegenerateState: 量子态相关
- InvalidExponents / InvalidEfficiency: 参数范围相关
- NonFiniteObjective / NoViolationFound: 优化器相关
- ComplexRootRegime / SingularEfficiency / NoPhysicalRoot: 解析求解相关
"""


class ChBasesError(Exception):
    """所有计算错误的基类（CLI映射为退出码1）"""


class InvalidState(ChBasesError, ValueError):
    """Schmidt系数不满足非负与归一化条件"""


class NonPositiveRatio(ChBasesError, ValueError):
    """α/β 比值非正、NaN或无穷大"""


class DegenerateState(ChBasesError, ValueError):
    """α=0 或 β=0 的乘积态，Hardy类构造失去意义"""


class InvalidExponents(ChBasesError, ValueError):
    """指数四元组越界，或 (n, m) 族中 n = m"""


class InvalidEfficiency(ChBasesError, ValueError):
    """探测效率 η 不在允许区间内"""


class NonFiniteObjective(ChBasesError, ArithmeticError):
    """目标函数在优化过程中返回 NaN 或 ∞"""


class NoViolationFound(ChBasesError, RuntimeError):
    """所有多起点搜索均未找到 Q > 0 的测量配置"""


class ComplexRootRegime(ChBasesError, ArithmeticError):
    """三次方程离开三实根区域（arccos参数越界超过容差）"""


class SingularEfficiency(ChBasesError, ArithmeticError):
    """驻点表达式在 η = 1 处奇异"""


class NoPhysicalRoot(ChBasesError, ArithmeticError):
    """t 的四次方程在 [0, 1] 内没有实根"""
