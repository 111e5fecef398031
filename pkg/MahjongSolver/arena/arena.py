"""对局实验模块

包含批量对局统计, 1v1 并行竞速对局, 对局序列与权重扫描矩阵。

种子派生规则 (见 SeedUtils):
    批量对局: 第 i 局种子 = child(master, i)
    单场对局: 玩家 1 = child(master, 0), 玩家 2 = child(master, 1)
    对局序列: 第 j 场使用 child(master, 2j) / child(master, 2j+1);
              镜像模式下第 2k+1 场复用第 2k 场的两颗种子并交换座位
    权重扫描: 第 (r, c) 格的序列主种子 = child(master, r * 列数 + c)
"""

from __future__ import annotations
from concurrent.futures import ProcessPoolExecutor
from collections import Counter
from itertools import count
from typing import Callable, Iterable, Literal, Optional, Sequence, TypeVar
import logging

from pydantic import BaseModel, ConfigDict, Field

from config.config import Config
from game.hand_eval import payoff
from game.shaping import ShapingParams
from agent.agent import get_agent, play_game
from agent.game_log import GameLog, WonOutcome
from utils.seed_utils import SeedUtils
from utils.stats_utils import StatsUtils, Summary

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

Winner = Literal["player1", "player2", "draw"]


# === 数据模型 ===

class BatchStats(BaseModel):
    """批量对局统计

    Attributes:
        games: 对局数
        completed: 和牌局数
        completion_rate: 和牌率
        discards: 和牌局的打牌数统计
        discard_histogram: 打牌数 -> 局数 (仅和牌局)
        score_histogram: 倍数 m -> 局数 (仅和牌局)
        base_multiplier: 番数表的基础倍数, 即最小可能的 m
        runtime: 每局耗时统计 (秒), 不参与确定性输出
    """
    games: int
    completed: int
    completion_rate: float
    discards: Optional[Summary]
    discard_histogram: dict[int, int]
    score_histogram: dict[int, int]
    base_multiplier: int = Field(1, ge=1)
    runtime: Optional[Summary] = Field(None, exclude=True)

    @property
    def base_multiplier_share(self) -> float:
        """m 等于基础倍数的和牌占和牌局的比例, 无和牌局时为 0"""
        if not self.completed:
            return 0.0
        return self.score_histogram.get(self.base_multiplier, 0) / self.completed


class DuelResult(BaseModel):
    """1v1 对局结果

    Attributes:
        winner: 胜者, 同一回合同时和牌或双方流局为 draw
        winning_turns: 胜者和牌时的打牌数, 平局时为对局结束的回合数
        multiplier: 胜者的和牌倍数, 平局时为 0
        transfer: 资金转移, 正数表示玩家 2 获益
        seed1: 玩家 1 的对局种子
        seed2: 玩家 2 的对局种子
    """
    model_config = ConfigDict(frozen=True)

    winner: Winner
    winning_turns: int
    multiplier: int
    transfer: float
    seed1: int
    seed2: int


class MatchSeries(BaseModel):
    """对局序列结果, 收益均以玩家 2 的视角计

    Attributes:
        cumulative: 玩家 2 的累计收益曲线
        total: 玩家 2 的总收益
        per_match: 每场结果
    """
    cumulative: list[float]
    total: float
    per_match: list[DuelResult]

    @property
    def player1_total(self) -> float:
        return -self.total

    @property
    def transfers(self) -> list[float]:
        return [m.transfer for m in self.per_match]


class SweepResult(BaseModel):
    """权重扫描矩阵, 行为玩家 1 权重, 列为玩家 2 权重, 值为玩家 2 总收益"""
    weights1: list[float]
    weights2: list[float]
    matrix: list[list[float]]
    matches_per_cell: int


# === 并行执行 ===

def parallel_map(func: Callable[[T], R], items: Sequence[T], jobs: int = 1) -> list[R]:
    """按输入顺序返回结果的并行 map, 结果与 jobs 无关"""
    if jobs <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    chunksize = max(1, len(items) // (jobs * 4))
    with ProcessPoolExecutor(max_workers=jobs) as executor:
        return list(executor.map(func, items, chunksize=chunksize))


# === 批量对局 ===

def _play_task(task: tuple[int, ShapingParams]) -> GameLog:
    seed, params = task
    return play_game(seed, params)


def play_batch(n: int, params: ShapingParams, master_seed: int, *, jobs: int = 1) -> list[GameLog]:
    """以派生种子进行 n 局独立对局"""
    if n < 1:
        raise ValueError(f"对局数必须不小于 1: {n}")
    tasks = [(seed, params) for seed in SeedUtils.child_seeds(master_seed, n)]
    return parallel_map(_play_task, tasks, jobs)


def summarize_batch(logs: Iterable[GameLog]) -> BatchStats:
    """汇总对局日志, 所有聚合均与顺序无关"""
    logs = list(logs)
    if not logs:
        raise ValueError("对局日志不能为空")
    won = [log for log in logs if log.won]
    discard_histogram = Counter(log.discards for log in won)
    score_histogram = Counter(log.multiplier for log in won)
    return BatchStats(
        games=len(logs),
        completed=len(won),
        completion_rate=len(won) / len(logs),
        discards=StatsUtils.summarize([log.discards for log in won]) if won else None,
        discard_histogram=dict(sorted(discard_histogram.items())),
        score_histogram=dict(sorted(score_histogram.items())),
        base_multiplier=logs[0].params.score_rules.base,
        runtime=StatsUtils.summarize([log.elapsed_seconds for log in logs]),
    )


def run_batch(n: int, params: ShapingParams, master_seed: int, *, jobs: int = 1) -> BatchStats:
    """批量对局并统计

    Args:
        n: 对局数
        params: 塑形参数
        master_seed: 主种子
        jobs: 并行进程数
    """
    stats = summarize_batch(play_batch(n, params, master_seed, jobs=jobs))
    logger.info(
        f"批量对局完成: {stats.games} 局, 和牌率 {stats.completion_rate:.2%}, "
        f"平均打牌数 {stats.discards.mean if stats.discards else float('nan'):.2f}"
    )
    return stats


# === 1v1 对局 ===

def duel_with_seeds(
    seed1: int,
    seed2: int,
    params1: ShapingParams,
    params2: ShapingParams,
    b: float,
    *,
    transfer_factor: int = 3
) -> DuelResult:
    """两局独立的单人对局逐回合同步推进, 先和牌者获胜

    Args:
        seed1: 玩家 1 的对局种子
        seed2: 玩家 2 的对局种子
        params1: 玩家 1 的塑形参数
        params2: 玩家 2 的塑形参数
        b: 结算底注
        transfer_factor: 输家支付 transfer_factor * 2^m * b
    """
    streams = [get_agent(params1).stream_turns(seed1), get_agent(params2).stream_turns(seed2)]
    outcomes: list = [None, None]
    try:
        for round_no in count():
            for i, stream in enumerate(streams):
                if outcomes[i] is None:
                    outcomes[i] = next(stream).get("outcome")
            winners = [i for i, o in enumerate(outcomes) if isinstance(o, WonOutcome)]
            if len(winners) == 2:
                return DuelResult(winner="draw", winning_turns=round_no, multiplier=0, transfer=0.0,
                                  seed1=seed1, seed2=seed2)
            if len(winners) == 1:
                i = winners[0]
                m = outcomes[i].score.multiplier
                amount = transfer_factor * payoff(m, b)[0]
                return DuelResult(
                    winner="player1" if i == 0 else "player2",
                    winning_turns=outcomes[i].discards,
                    multiplier=m,
                    transfer=-amount if i == 0 else amount,
                    seed1=seed1,
                    seed2=seed2,
                )
            if all(o is not None for o in outcomes):
                # 双方流局
                return DuelResult(winner="draw", winning_turns=round_no, multiplier=0, transfer=0.0,
                                  seed1=seed1, seed2=seed2)
    finally:
        for stream in streams:
            stream.close()
    raise AssertionError("unreachable")


def duel(
    master_seed: int,
    params1: ShapingParams,
    params2: ShapingParams,
    b: float,
    *,
    transfer_factor: int = 3,
    mirrored: bool = False
) -> DuelResult:
    """单场 1v1 对局

    Args:
        master_seed: 主种子, 派生出双方的对局种子
        mirrored: 交换双方的种子
    """
    seed1, seed2 = SeedUtils.child_seed(master_seed, 0), SeedUtils.child_seed(master_seed, 1)
    if mirrored:
        seed1, seed2 = seed2, seed1
    return duel_with_seeds(seed1, seed2, params1, params2, b, transfer_factor=transfer_factor)


def series_seeds(master_seed: int, n_matches: int, *, mirrored: bool = False) -> list[tuple[int, int]]:
    """对局序列中每场的 (玩家 1 种子, 玩家 2 种子)"""
    pairs: list[tuple[int, int]] = []
    for j in range(n_matches):
        if mirrored:
            k = j // 2
            a, b = SeedUtils.child_seed(master_seed, 2 * k), SeedUtils.child_seed(master_seed, 2 * k + 1)
            pairs.append((b, a) if j % 2 else (a, b))
        else:
            pairs.append((SeedUtils.child_seed(master_seed, 2 * j), SeedUtils.child_seed(master_seed, 2 * j + 1)))
    return pairs


def _duel_task(task: tuple[int, int, ShapingParams, ShapingParams, float, int]) -> DuelResult:
    seed1, seed2, params1, params2, b, transfer_factor = task
    return duel_with_seeds(seed1, seed2, params1, params2, b, transfer_factor=transfer_factor)


def run_match_series(
    n_matches: int,
    params1: ShapingParams,
    params2: ShapingParams,
    b: float,
    master_seed: int,
    *,
    transfer_factor: int = 3,
    mirrored: bool = False,
    jobs: int = 1
) -> MatchSeries:
    """连续进行多场 1v1 对局, 记录玩家 2 (使用 params2) 的累计收益

    Args:
        n_matches: 场数
        params1: 玩家 1 的塑形参数
        params2: 玩家 2 的塑形参数
        b: 结算底注
        master_seed: 主种子
        transfer_factor: 输家支付 transfer_factor * 2^m * b
        mirrored: 是否使用镜像配对
        jobs: 并行进程数
    """
    if n_matches < 1:
        raise ValueError(f"场数必须不小于 1: {n_matches}")
    tasks = [
        (seed1, seed2, params1, params2, b, transfer_factor)
        for seed1, seed2 in series_seeds(master_seed, n_matches, mirrored=mirrored)
    ]
    results = parallel_map(_duel_task, tasks, jobs)

    cumulative: list[float] = []
    running = 0.0
    for result in results:
        running += result.transfer
        cumulative.append(running)

    logger.info(
        f"对局序列完成: {n_matches} 场, w1={params1.weight}, w2={params2.weight}, 玩家 2 总收益 {running:+g}"
    )
    return MatchSeries(cumulative=cumulative, total=running, per_match=results)


def sweep(
    weights1: Sequence[float],
    weights2: Sequence[float],
    matches_per_cell: int,
    b: float,
    master_seed: int,
    *,
    base_params: Optional[ShapingParams] = None,
    transfer_factor: int = 3,
    jobs: int = 1
) -> SweepResult:
    """权重扫描, 每格进行一组镜像配对的对局序列

    Args:
        weights1: 玩家 1 的权重列表 (行)
        weights2: 玩家 2 的权重列表 (列)
        matches_per_cell: 每格场数
        b: 结算底注
        master_seed: 主种子
        base_params: 除权重以外的塑形参数
        transfer_factor: 输家支付 transfer_factor * 2^m * b
        jobs: 并行进程数
    """
    if not weights1 or not weights2:
        raise ValueError("权重列表不能为空")
    base_params = base_params or ShapingParams(base_payoff=b)

    matrix: list[list[float]] = []
    for r, w1 in enumerate(weights1):
        row: list[float] = []
        for c, w2 in enumerate(weights2):
            series = run_match_series(
                matches_per_cell,
                base_params.model_copy(update={"weight": w1}),
                base_params.model_copy(update={"weight": w2}),
                b,
                SeedUtils.child_seed(master_seed, r * len(weights2) + c),
                transfer_factor=transfer_factor,
                mirrored=True,
                jobs=jobs,
            )
            row.append(series.total)
        matrix.append(row)

    return SweepResult(
        weights1=list(weights1),
        weights2=list(weights2),
        matrix=matrix,
        matches_per_cell=matches_per_cell,
    )


__all__ = [
    "BatchStats", "DuelResult", "MatchSeries", "SweepResult", "Winner",
    "parallel_map", "play_batch", "summarize_batch", "run_batch",
    "duel_with_seeds", "duel", "series_seeds", "run_match_series", "sweep",
]
