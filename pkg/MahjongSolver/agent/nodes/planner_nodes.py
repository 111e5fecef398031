from __future__ import annotations
from typing import TYPE_CHECKING, Any
import logging

from game.hand_eval import is_winning, score_hand
from game.tiles import discard_tile, draw_tile, render_hand, render_tile, sample_draw
from ..game_log import TurnRecord, WonOutcome, ExhaustedOutcome
from ..planner import q_values

# 防止循环引用
if TYPE_CHECKING:
    from ..agent import Agent
    from ..agent_state import GameLoopState


logger = logging.getLogger(__name__)


def plan_node(self: Agent, state: GameLoopState) -> dict[str, Any]:
    """规划节点

        对当前 14 张手牌做深度 1 精确前向搜索, 得到各动作的 Q 值
        该节点之后需添加动作节点来执行推荐的打牌
    """
    report = q_values(state["game"], self.params)
    return {"q_report": report}


def step_node(self: Agent, state: GameLoopState) -> dict[str, Any]:
    """动作节点

    打出 Q 值最大的牌, 再按回合种子从牌墙随机摸一张, 并检查是否和牌或流局
    """
    game = state["game"]
    report = state["q_report"]
    if report is None:
        raise ValueError("缺少 Q 值报告, 动作节点之前需先执行规划节点")

    after = discard_tile(game, report.best)
    drawn = sample_draw(after, state["seed"])
    next_game = draw_tile(after, drawn)

    record = TurnRecord(
        turn=game.turn,
        hand=render_hand(game.hand),
        q=report.to_dict() if self.record_q else None,
        discard=render_tile(report.best),
        drawn=render_tile(drawn),
    )
    logger.debug(f"第 {game.turn} 手: 打出 {record.discard}, 摸入 {record.drawn}")

    update: dict[str, Any] = {"game": next_game, "q_report": None, "turns": [record]}
    if is_winning(next_game.hand):
        score = score_hand(next_game.hand, self.params.base_payoff, self.params.score_rules)
        update["outcome"] = WonOutcome(discards=next_game.turn, score=score)
    elif next_game.wall_size == 0:
        update["outcome"] = ExhaustedOutcome(discards=next_game.turn)
    return update


__all__ = ["plan_node", "step_node"]
