"""深度 1 精确前向搜索

对手牌中每种可打出的牌 a, 精确计算

    Q(s, a) = sum_k T(k | s, a) * R_s(s'(a, k), s)

其中 T 为打牌后牌墙的均匀摸牌分布 (按牌种分组), R_s 为差分形式的塑形奖励。
策略取 Q 最大的动作, 并列时取编号最小的牌。
"""

from __future__ import annotations
from dataclasses import dataclass
import math
import logging

from game.errors import WallExhaustedError
from game.shaping import ShapingParams, potential, successor_reward
from game.tiles import (
    HAND_SIZE, NUM_KINDS, TileKind, GameState, ALL_KINDS, KindLike,
    discard_tile, draw_distribution, kind_index, parse_tile, render_tile, require_hand_size,
)

logger = logging.getLogger(__name__)

# 发牌后牌墙剩余张数
WALL_AFTER_DEAL = 122
# 可选动作数 (按位置计)
ACTIONS_PER_STATE = HAND_SIZE


@dataclass(frozen=True, slots=True)
class QReport:
    """一次规划的动作价值报告

    Attributes:
        actions: (可打出的牌种, Q 值) 列表, 按编号升序, 覆盖手牌中出现的全部牌种
        best: Q 值最大的牌种, 并列时取编号最小者
    """
    actions: tuple[tuple[TileKind, float], ...]
    best: TileKind

    def q_of(self, kind: TileKind | int) -> float:
        index = kind.index if isinstance(kind, TileKind) else kind
        for k, q in self.actions:
            if k.index == index:
                return q
        raise KeyError(render_tile(index))

    def to_dict(self) -> dict[str, float]:
        return {render_tile(k): q for k, q in self.actions}

    @classmethod
    def from_dict(cls, q: dict[str, float], best: KindLike) -> QReport:
        """由日志中记录的 Q 值恢复报告"""
        actions = sorted(((parse_tile(token), value) for token, value in q.items()), key=lambda kv: kv[0].index)
        return cls(actions=tuple(actions), best=ALL_KINDS[kind_index(best)])


def q_values(state: GameState, params: ShapingParams, *, difference_form: bool = True) -> QReport:
    """计算每个可选动作的 Q 值

    Args:
        state: 14 张手牌的当前状态
        params: 塑形参数
        difference_form: 为 False 时不减去当前状态的势函数值 (仅用于验证 argmax 不变性)

    Raises:
        HandSizeError: 手牌不是 14 张
        WallExhaustedError: 牌墙已空
    """
    require_hand_size(state.hand)
    if state.wall_size == 0:
        raise WallExhaustedError("牌墙已摸空, 无法规划")

    current = potential(state.hand, params.weight) if difference_form else 0.0

    actions: list[tuple[TileKind, float]] = []
    best_index = -1
    best_q = -math.inf
    for a in range(NUM_KINDS):
        if not state.hand[a]:
            continue
        after = discard_tile(state, a)
        base_hand = list(after.hand)
        terms: list[float] = []
        for kind, p in draw_distribution(after).entries:
            base_hand[kind.index] += 1
            terms.append(p * successor_reward(tuple(base_hand), current, params))
            base_hand[kind.index] -= 1
        q = math.fsum(terms)
        actions.append((ALL_KINDS[a], q))
        if q > best_q:
            best_index, best_q = a, q

    return QReport(actions=tuple(actions), best=ALL_KINDS[best_index])


def best_action(state: GameState, params: ShapingParams) -> TileKind:
    """策略 pi(s) = argmax_a Q(s, a)"""
    return q_values(state, params).best


# === 复杂度 ===

def leaf_node_count(depth: int, *, literal: bool = False) -> int:
    """深度 n 完整前向搜索需要枚举的叶节点数

    默认按 14^n * 122! / (122 - n)! 计算 (n=1 为 1708, n=2 约 290 万);
    literal=True 时按连乘形式 14^n * prod_{i=1..n} 122! / (122 - i)! 计算。

    Args:
        depth: 搜索深度, 1 <= n <= 122

    Raises:
        ValueError: 深度超出范围
    """
    if not 1 <= depth <= WALL_AFTER_DEAL:
        raise ValueError(f"搜索深度必须在 1 到 {WALL_AFTER_DEAL} 之间: {depth}")
    if literal:
        product = 1
        for i in range(1, depth + 1):
            product *= math.perm(WALL_AFTER_DEAL, i)
        return ACTIONS_PER_STATE ** depth * product
    return ACTIONS_PER_STATE ** depth * math.perm(WALL_AFTER_DEAL, depth)


def state_space_size() -> int:
    """状态空间大小 C(136, 14) * 2^122"""
    return math.comb(NUM_KINDS * 4, HAND_SIZE) * 2 ** WALL_AFTER_DEAL


__all__ = ["QReport", "q_values", "best_action", "leaf_node_count", "state_space_size"]
