from __future__ import annotations
from typing import TYPE_CHECKING, Any
import logging

from game.hand_eval import is_winning, score_hand
from game.tiles import deal, render_hand
from ..game_log import WonOutcome

# 防止循环引用
if TYPE_CHECKING:
    from ..agent import Agent
    from ..agent_state import GameLoopState

logger = logging.getLogger(__name__)


def deal_node(self: Agent, state: GameLoopState) -> dict[str, Any]:
    """发牌节点

    按种子发出 14 张手牌; 起手即和牌时直接以 0 次打牌终局
    """
    game = deal(state["seed"])
    logger.debug(f"发牌 seed={state['seed']}: {render_hand(game.hand)}")

    update: dict[str, Any] = {"game": game, "q_report": None, "outcome": None}
    if is_winning(game.hand):
        score = score_hand(game.hand, self.params.base_payoff, self.params.score_rules)
        update["outcome"] = WonOutcome(discards=0, score=score)
        logger.info(f"起手和牌 seed={state['seed']}, m={score.multiplier}")
    return update


def outcome_branch(self: Agent, state: GameLoopState) -> str:
    """根据是否已终局分支

    Returns:
        分支名称, "finished" 或 "continue"
    """
    return "finished" if state.get("outcome") is not None else "continue"


__all__ = ["deal_node", "outcome_branch"]
