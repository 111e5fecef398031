"""统计工具模块

提供样本摘要统计与单侧 t 检验:

    h0: mu <= mu0,  h1: mu > mu0
    t_c = (mean - mu0) / (std / sqrt(n))

t_c 大于临界值时拒绝原假设。临界值可由调用方提供, 或从内置的大样本单侧 t 表中查得。
"""

from typing import Literal, Sequence
import math

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy import stats

Significance = Literal["1%", "5%"]

# 单侧 t 临界值表, 以样本数为键, 查表时取不超过样本数的最大键
CRITICAL_TABLE: dict[str, dict[int, float]] = {
    "1%": {100: 2.364, 120: 2.358, 200: 2.345, 500: 2.334, 1000: 2.330},
    "5%": {100: 1.660, 120: 1.658, 200: 1.653, 500: 1.648, 1000: 1.646},
}
MIN_TABLE_SAMPLES = 100


class Summary(BaseModel):
    """样本摘要统计, std 使用 n-1 分母"""
    model_config = ConfigDict(frozen=True)

    n: int
    mean: float
    std: float
    min: float
    max: float


class TTestResult(BaseModel):
    """单侧 t 检验结果

    Attributes:
        mean: 样本均值
        std: 样本标准差 (n-1 分母)
        n: 样本数
        mu0: 原假设下的均值上界
        t_statistic: 检验统计量 t_c
        critical: 临界值
        reject: 是否拒绝原假设 (t_statistic > critical)
        p_value: 单侧 p 值
    """
    model_config = ConfigDict(frozen=True)

    mean: float
    std: float
    n: int
    mu0: float
    t_statistic: float
    critical: float
    reject: bool
    p_value: float


class StatsUtils:
    """统计工具类"""

    def __new__(cls):
        # 禁止实例化
        raise TypeError("StatsUtils类不可被实例化")

    @staticmethod
    def summarize(samples: Sequence[float]) -> Summary:
        """计算均值, 标准差, 最小值和最大值

        Raises:
            ValueError: 样本为空
        """
        values = np.asarray(samples, dtype=float)
        if values.size == 0:
            raise ValueError("样本不能为空")
        std = float(values.std(ddof=1)) if values.size > 1 else 0.0
        return Summary(
            n=int(values.size),
            mean=float(values.mean()),
            std=std,
            min=float(values.min()),
            max=float(values.max()),
        )

    @staticmethod
    def critical_value(significance: Significance, n: int) -> float:
        """查表得到单侧 t 临界值

        Args:
            significance: 显著性水平, "1%" 或 "5%"
            n: 样本数, 需不少于 100

        Raises:
            ValueError: 显著性水平不受支持, 或样本数不在大样本表范围内, 此时请直接提供临界值
        """
        table = CRITICAL_TABLE.get(significance)
        if table is None:
            raise ValueError(f"不支持的显著性水平: {significance}, 可选值为 {list(CRITICAL_TABLE)}")
        if n < MIN_TABLE_SAMPLES:
            raise ValueError(f"样本数 {n} 不在大样本 t 表范围内 (n >= {MIN_TABLE_SAMPLES}), 请直接提供临界值")
        key = max(k for k in table if k <= n)
        return table[key]

    @staticmethod
    def one_tailed_t(samples: Sequence[float], mu0: float, critical: float) -> TTestResult:
        """单侧 t 检验

        Args:
            samples: 样本 (如每局净收益)
            mu0: 原假设下的均值上界
            critical: 临界值

        Raises:
            ValueError: 样本数少于 2 或标准差为 0
        """
        summary = StatsUtils.summarize(samples)
        if summary.n < 2:
            raise ValueError("t 检验至少需要 2 个样本")
        if summary.std == 0:
            raise ValueError("样本标准差为 0, 无法计算 t 统计量")
        t_statistic = (summary.mean - mu0) / (summary.std / math.sqrt(summary.n))
        return TTestResult(
            mean=summary.mean,
            std=summary.std,
            n=summary.n,
            mu0=mu0,
            t_statistic=t_statistic,
            critical=critical,
            reject=t_statistic > critical,
            p_value=float(stats.t.sf(t_statistic, summary.n - 1)),
        )


__all__ = ["StatsUtils", "Summary", "TTestResult", "CRITICAL_TABLE", "Significance"]
