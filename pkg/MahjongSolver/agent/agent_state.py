from __future__ import annotations
from typing import TypedDict, Annotated, Optional

from game.tiles import GameState
from .game_log import TurnRecord, WonOutcome, ExhaustedOutcome
from .planner import QReport


class GameLoopState(TypedDict, total=False):
    """对局循环状态

        用于在 StateGraph 中存储单局对局的状态

    Attributes:
        seed: 对局种子, 决定发牌与每一次摸牌
        game: 当前牌局状态
        q_report: 最近一次规划得到的 Q 值报告
        turns: 已完成的动作记录
        outcome: 终局结果, 未终局时为 None
    """
    seed: int
    game: GameState
    q_report: Optional[QReport]

    # 每个动作节点只返回新增的一条记录, 由 reducer 追加到列表中
    turns: Annotated[list[TurnRecord], add_to_list]
    outcome: Optional[WonOutcome | ExhaustedOutcome]


# === 自定义 Reducer 函数 ===

def add_to_list(left: list, right: list) -> list:
    """将右侧列表添加到左侧列表中"""
    return (left or []) + (right or [])


__all__ = ["GameLoopState", "add_to_list"]
