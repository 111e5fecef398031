"""和牌判定与计分模块

负责:
1. 精确的和牌判定 (4 组面子 + 1 对将)
2. 手牌拆解 (规范顺序)
3. 按番数表计算倍数 m 以及 2^m * b 的收支
4. 穷举式向听上界 (用作贪心向听的测试基准)
"""

from __future__ import annotations
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Iterator, Optional, Sequence
import logging

from dotenv import dotenv_values
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from config.config import Config
from .errors import ConfigError, NotWinningError
from .tiles import ALL_KINDS, HAND_SIZE, NUM_KINDS, NUM_SUITED, HandCounts, Suit, TileKind, render_tile, require_hand_size

logger = logging.getLogger(__name__)


# === 面子与拆解 ===

@dataclass(frozen=True, slots=True)
class Triplet:
    """刻子"""
    kind: TileKind

    @property
    def start(self) -> int:
        return self.kind.index

    def tiles(self) -> tuple[int, int, int]:
        return (self.kind.index,) * 3

    def __str__(self) -> str:
        if self.kind.is_honor:
            return render_tile(self.kind) * 3
        return str(self.kind.rank) * 3 + self.kind.suit.value


@dataclass(frozen=True, slots=True)
class Run:
    """顺子, 仅限数牌且起始点数不超过 7"""
    suit: Suit
    start_rank: int

    @property
    def start(self) -> int:
        return SUIT_OFFSETS[self.suit] + self.start_rank - 1

    def tiles(self) -> tuple[int, int, int]:
        s = self.start
        return (s, s + 1, s + 2)

    def __str__(self) -> str:
        return "".join(str(self.start_rank + d) for d in range(3)) + self.suit.value


TileSet = Triplet | Run

SUIT_OFFSETS = {Suit.MAN: 0, Suit.PIN: 9, Suit.SOU: 18}


def set_sort_key(tile_set: TileSet) -> tuple[int, int]:
    """面子排序键: 起始编号优先, 同起点时刻子在前"""
    return (tile_set.start, 0 if isinstance(tile_set, Triplet) else 1)


@dataclass(frozen=True, slots=True)
class Decomposition:
    """和牌拆解

    Attributes:
        sets: 4 组面子, 按 set_sort_key 排序
        pair: 将牌
    """
    sets: tuple[TileSet, ...]
    pair: TileKind

    def counts(self) -> HandCounts:
        counts = [0] * NUM_KINDS
        counts[self.pair.index] += 2
        for tile_set in self.sets:
            for k in tile_set.tiles():
                counts[k] += 1
        return tuple(counts)

    @property
    def triplet_count(self) -> int:
        return sum(1 for s in self.sets if isinstance(s, Triplet))

    def __str__(self) -> str:
        return " ".join(str(s) for s in self.sets) + f" + {render_tile(self.pair)}x2"


def _can_run_from(i: int) -> bool:
    return i < NUM_SUITED and i % 9 <= 6


def _make_set(i: int, is_run: bool) -> TileSet:
    kind = ALL_KINDS[i]
    if is_run:
        return Run(kind.suit, kind.rank)
    return Triplet(kind)


def _can_form_sets(counts: list[int], start: int = 0) -> bool:
    i = start
    while i < NUM_KINDS and counts[i] == 0:
        i += 1
    if i == NUM_KINDS:
        return True
    if counts[i] >= 3:
        counts[i] -= 3
        ok = _can_form_sets(counts, i)
        counts[i] += 3
        if ok:
            return True
    if _can_run_from(i) and counts[i + 1] and counts[i + 2]:
        counts[i] -= 1
        counts[i + 1] -= 1
        counts[i + 2] -= 1
        ok = _can_form_sets(counts, i)
        counts[i] += 1
        counts[i + 1] += 1
        counts[i + 2] += 1
        return ok
    return False


def _iter_sets(counts: list[int], start: int, current: list[TileSet]) -> Iterator[tuple[TileSet, ...]]:
    i = start
    while i < NUM_KINDS and counts[i] == 0:
        i += 1
    if i == NUM_KINDS:
        yield tuple(current)
        return
    # 最小编号的牌必然属于以它起始的面子; 先尝试刻子, 再尝试顺子, 即字典序
    if counts[i] >= 3:
        counts[i] -= 3
        current.append(_make_set(i, False))
        yield from _iter_sets(counts, i, current)
        current.pop()
        counts[i] += 3
    if _can_run_from(i) and counts[i + 1] and counts[i + 2]:
        for d in range(3):
            counts[i + d] -= 1
        current.append(_make_set(i, True))
        yield from _iter_sets(counts, i, current)
        current.pop()
        for d in range(3):
            counts[i + d] += 1


@lru_cache(maxsize=Config.EVAL_CACHE_SIZE)
def _is_winning(hand: HandCounts) -> bool:
    counts = list(hand)
    for pair in range(NUM_KINDS):
        if counts[pair] < 2:
            continue
        counts[pair] -= 2
        ok = _can_form_sets(counts)
        counts[pair] += 2
        if ok:
            return True
    return False


def is_winning(hand: Sequence[int]) -> bool:
    """判断 14 张手牌是否和牌

    先枚举将牌, 再对剩余牌按编号从小到大回溯提取面子

    Raises:
        HandSizeError: 手牌不是 14 张
    """
    hand = tuple(hand)
    require_hand_size(hand)
    return _is_winning(hand)


def iter_decompositions(hand: Sequence[int]) -> Iterator[Decomposition]:
    """按规范顺序枚举全部和牌拆解: 将牌编号从小到大, 同一将牌下面子列表按字典序"""
    hand = tuple(hand)
    require_hand_size(hand)
    counts = list(hand)
    for pair in range(NUM_KINDS):
        if counts[pair] < 2:
            continue
        counts[pair] -= 2
        for sets in _iter_sets(counts, 0, []):
            yield Decomposition(sets=sets, pair=ALL_KINDS[pair])
        counts[pair] += 2


def decompose(hand: Sequence[int]) -> Optional[Decomposition]:
    """返回规范拆解 (最小将牌, 字典序最小的面子列表), 无法和牌时返回 None"""
    return next(iter_decompositions(hand), None)


# === 番数表与计分 ===

class ScoreRules(BaseModel):
    """番数表

    倍数 m = base + 各项贡献之和。字段别名即配置文件中的键名。
    """
    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    base: int = Field(1, ge=1, alias="BASE")
    dragon_triplet: int = Field(1, ge=0, alias="DRAGON_TRIPLET")
    wind_triplet: int = Field(1, ge=0, alias="WIND_TRIPLET")
    all_triplets: int = Field(2, ge=0, alias="ALL_TRIPLETS")
    half_flush: int = Field(2, ge=0, alias="HALF_FLUSH")
    full_flush: int = Field(4, ge=0, alias="FULL_FLUSH")
    all_honors: int = Field(3, ge=0, alias="ALL_HONORS")


DEFAULT_SCORE_RULES = ScoreRules()


def load_score_rules(path: Optional[Path] = None) -> ScoreRules:
    """从 key=value 配置文件加载番数表, 文件不存在时使用内置默认值

    Args:
        path: 配置文件路径, 默认为 Config.SCORE_RULES_FILE

    Raises:
        ConfigError: 文件中存在未知键或非整数值
    """
    path = Path(path) if path is not None else Config.SCORE_RULES_FILE
    if not path.exists():
        logger.info(f"番数表文件 {path} 不存在, 使用内置默认值")
        return DEFAULT_SCORE_RULES
    values = {k: v for k, v in dotenv_values(path).items() if v is not None}
    try:
        rules = ScoreRules.model_validate(values)
    except ValidationError as e:
        raise ConfigError(f"番数表文件 {path} 不合法: {e}") from e
    logger.info(f"已加载番数表: {rules.model_dump()}")
    return rules


class ScoreBreakdown(BaseModel):
    """和牌计分明细

    Attributes:
        multiplier: 倍数 m
        items: (规则名, 贡献) 列表, 不含基础番
        individual_payoff: 单家支付 2^m * b
        total_payoff: 和牌者总收入 3 * 2^m * b
    """
    model_config = ConfigDict(frozen=True)

    multiplier: int
    items: list[tuple[str, int]]
    individual_payoff: float
    total_payoff: float


def payoff(m: int, b: float) -> tuple[float, float]:
    """计算 (单家支付, 总收入) = (2^m * b, 3 * 2^m * b)"""
    if m < 1:
        raise ValueError(f"倍数必须不小于 1: {m}")
    if b <= 0:
        raise ValueError(f"底注必须为正: {b}")
    individual = (2 ** m) * b
    return individual, 3 * individual


def _hand_items(hand: HandCounts, rules: ScoreRules) -> list[tuple[str, int]]:
    """只依赖手牌构成的规则 (一色类)"""
    suits = {i // 9 for i in range(NUM_SUITED) if hand[i]}
    has_honors = any(hand[i] for i in range(NUM_SUITED, NUM_KINDS))
    if not suits:
        return [("all_honors", rules.all_honors)]
    if len(suits) == 1:
        if has_honors:
            return [("half_flush", rules.half_flush)]
        return [("full_flush", rules.full_flush)]
    return []


def _decomposition_items(decomposition: Decomposition, rules: ScoreRules) -> list[tuple[str, int]]:
    items: list[tuple[str, int]] = []
    for tile_set in decomposition.sets:
        if isinstance(tile_set, Triplet):
            if tile_set.kind.suit == Suit.DRAGON:
                items.append(("dragon_triplet", rules.dragon_triplet))
            elif tile_set.kind.suit == Suit.WIND:
                items.append(("wind_triplet", rules.wind_triplet))
    if decomposition.triplet_count == 4:
        items.append(("all_triplets", rules.all_triplets))
    return items


@lru_cache(maxsize=Config.EVAL_CACHE_SIZE)
def _best_items(hand: HandCounts, rules: ScoreRules) -> Optional[tuple[tuple[str, int], ...]]:
    hand_items = _hand_items(hand, rules)
    best: Optional[list[tuple[str, int]]] = None
    best_total = -1
    for decomposition in iter_decompositions(hand):
        items = _decomposition_items(decomposition, rules) + hand_items
        total = sum(c for _, c in items)
        if total > best_total:
            best, best_total = items, total
    if best is None:
        return None
    return tuple((name, c) for name, c in best if c)


def multiplier(hand: Sequence[int], rules: ScoreRules = DEFAULT_SCORE_RULES) -> int:
    """和牌倍数 m, 对依赖拆解的规则取所有拆解中的最大值

    Raises:
        NotWinningError: 手牌未和牌
    """
    hand = tuple(hand)
    require_hand_size(hand)
    items = _best_items(hand, rules)
    if items is None:
        raise NotWinningError("手牌未和牌, 无法计分")
    return rules.base + sum(c for _, c in items)


def score_hand(hand: Sequence[int], b: float, rules: ScoreRules = DEFAULT_SCORE_RULES) -> ScoreBreakdown:
    """按番数表为和牌计分

    Args:
        hand: 14 张和牌的计数向量
        b: 底注
        rules: 番数表

    Returns:
        计分明细

    Raises:
        NotWinningError: 手牌未和牌
    """
    hand = tuple(hand)
    require_hand_size(hand)
    items = _best_items(hand, rules)
    if items is None:
        raise NotWinningError("手牌未和牌, 无法计分")
    m = rules.base + sum(c for _, c in items)
    individual, total = payoff(m, b)
    return ScoreBreakdown(
        multiplier=m,
        items=list(items),
        individual_payoff=individual,
        total_payoff=total,
    )


# === 穷举向听 ===

@lru_cache(maxsize=Config.EVAL_CACHE_SIZE)
def _best_extraction(counts: HandCounts, start: int, has_pair: bool) -> int:
    i = start
    while i < NUM_KINDS and counts[i] == 0:
        i += 1
    if i == NUM_KINDS:
        return 2 if has_pair else 0
    # 剩余的 i 不再参与面子
    best = _best_extraction(counts, i + 1, has_pair or counts[i] >= 2)
    if counts[i] >= 3:
        taken = list(counts)
        taken[i] -= 3
        best = max(best, 3 + _best_extraction(tuple(taken), i, has_pair))
    if _can_run_from(i) and counts[i + 1] and counts[i + 2]:
        taken = list(counts)
        taken[i] -= 1
        taken[i + 1] -= 1
        taken[i + 2] -= 1
        best = max(best, 3 + _best_extraction(tuple(taken), i, has_pair))
    return best


def exact_shangting_oracle(hand: Sequence[int]) -> int:
    """穷举所有不相交的面子提取, 返回 max(3*面子数 + 2*[剩余牌中有对子]) - 14

    Raises:
        HandSizeError: 手牌不是 14 张
    """
    hand = tuple(hand)
    require_hand_size(hand)
    return _best_extraction(hand, 0, False) - HAND_SIZE


__all__ = [
    "Triplet", "Run", "TileSet", "Decomposition", "set_sort_key",
    "is_winning", "iter_decompositions", "decompose",
    "ScoreRules", "DEFAULT_SCORE_RULES", "load_score_rules", "ScoreBreakdown",
    "payoff", "multiplier", "score_hand", "exact_shangting_oracle",
]
