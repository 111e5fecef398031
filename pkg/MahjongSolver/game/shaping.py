"""奖励塑形模块

包含贪心向听 (ShangTing) 距离, unscented 加成, 以及差分形式的塑形奖励 R_s:

    R_s(s', s) = V(s') - V(s)         (s' 未和牌)
    R_s(s', s) = 和牌总收入           (s' 和牌)

其中 V = ShangTing + w * Bonus
"""

from __future__ import annotations
from functools import lru_cache
import math
from typing import Sequence

from pydantic import BaseModel, ConfigDict, Field, field_validator

from config.config import Config
from .hand_eval import DEFAULT_SCORE_RULES, ScoreRules, _is_winning, score_hand
from .tiles import HAND_SIZE, NUM_KINDS, NUM_SUITED, GameState, HandCounts, require_hand_size

HONOR_TRIPLET_SCORE = 3
HONOR_PAIR_SCORE = 1
FLUSH_SCALE = 3


class ShapingParams(BaseModel):
    """塑形参数

    Attributes:
        weight: 加成权重 w, 越大越倾向于追求高番
        base_payoff: 底注 b
        score_rules: 和牌番数表
    """
    model_config = ConfigDict(frozen=True)

    weight: float = Field(0.0, ge=0)
    base_payoff: float = Field(2.0, gt=0)
    score_rules: ScoreRules = DEFAULT_SCORE_RULES

    @field_validator("weight", "base_payoff")
    @classmethod
    def _finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("参数必须是有限值")
        return value


class ShapedValue(BaseModel):
    """塑形势函数值

    Attributes:
        shangting: 贪心向听距离, 取值 [-14, 0]
        bonus: 未加权的 unscented 加成
        combined: shangting + weight * bonus
    """
    model_config = ConfigDict(frozen=True)

    shangting: int
    bonus: float
    combined: float


@lru_cache(maxsize=Config.EVAL_CACHE_SIZE)
def _shangting(hand: HandCounts) -> int:
    counts = list(hand)
    score = -HAND_SIZE

    # 刻子
    for k in range(NUM_KINDS):
        if counts[k] >= 3:
            counts[k] -= 3
            score += 3

    # 顺子: 每种花色按点数从小到大, 反复提取起点最小的顺子
    for offset in (0, 9, 18):
        for i in range(offset, offset + 7):
            while counts[i] and counts[i + 1] and counts[i + 2]:
                counts[i] -= 1
                counts[i + 1] -= 1
                counts[i + 2] -= 1
                score += 3

    # 对子, 只计第一对
    for k in range(NUM_KINDS):
        if counts[k] >= 2:
            score += 2
            break

    return score


def shangting(hand: Sequence[int]) -> int:
    """贪心向听距离

    1. 初始分为 -14
    2. 按编号顺序提取刻子, 每组 +3
    3. 按花色和点数顺序提取顺子, 每组 +3
    4. 剩余牌中编号最小的对子 +2, 其余对子不计分

    Raises:
        HandSizeError: 手牌不是 14 张
    """
    hand = tuple(hand)
    require_hand_size(hand)
    return _shangting(hand)


@lru_cache(maxsize=Config.EVAL_CACHE_SIZE)
def _unscented_bonus(hand: HandCounts) -> float:
    bonus = 0.0

    honor_counts = hand[NUM_SUITED:]
    bonus += HONOR_TRIPLET_SCORE * sum(1 for c in honor_counts if c >= 3)
    # 作为刻子的字牌不再参与对子判定
    if any(c == 2 for c in honor_counts):
        bonus += HONOR_PAIR_SCORE

    suit_totals = [sum(hand[offset:offset + 9]) for offset in (0, 9, 18)]
    suited = sum(suit_totals)
    if suited == 0:
        bonus += FLUSH_SCALE
    else:
        bonus += FLUSH_SCALE * max(suit_totals) / suited

    return bonus


def unscented_bonus(hand: Sequence[int]) -> float:
    """unscented 加成 (未乘权重)

    1. 每组风牌或箭牌刻子 +3
    2. 未成刻子的字牌中若存在对子, 第一对 +1
    3. +3 * (最多的单一花色张数 / 数牌总张数), 无数牌时取 3

    Raises:
        HandSizeError: 手牌不是 14 张
    """
    hand = tuple(hand)
    require_hand_size(hand)
    return _unscented_bonus(hand)


def shaped_value(hand: Sequence[int], params: ShapingParams) -> ShapedValue:
    """势函数 V = ShangTing + w * Bonus"""
    hand = tuple(hand)
    require_hand_size(hand)
    st = _shangting(hand)
    bonus = _unscented_bonus(hand)
    return ShapedValue(shangting=st, bonus=bonus, combined=st + params.weight * bonus)


def potential(hand: HandCounts, weight: float) -> float:
    """shaped_value(...).combined 的快速版本, 供规划器的内层循环使用"""
    return _shangting(hand) + weight * _unscented_bonus(hand)


def successor_reward(next_hand: HandCounts, current_potential: float, params: ShapingParams) -> float:
    """已知当前势函数值时, 计算转移到 next_hand 的奖励

    Args:
        next_hand: 摸牌后的 14 张手牌
        current_potential: 当前状态的势函数值, 传 0 即不取差分
        params: 塑形参数
    """
    if _is_winning(next_hand):
        return score_hand(next_hand, params.base_payoff, params.score_rules).total_payoff
    return potential(next_hand, params.weight) - current_potential


def shaping_reward(s: GameState, s_next: GameState, params: ShapingParams) -> float:
    """差分形式的塑形奖励 R_s(s', s)

    s_next 和牌时返回和牌总收入 3 * 2^m * b, 否则返回 V(s_next) - V(s)
    """
    require_hand_size(s.hand)
    require_hand_size(s_next.hand)
    return successor_reward(s_next.hand, potential(s.hand, params.weight), params)


__all__ = [
    "ShapingParams", "ShapedValue",
    "shangting", "unscented_bonus", "shaped_value", "potential", "successor_reward", "shaping_reward",
]
