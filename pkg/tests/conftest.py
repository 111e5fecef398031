"""测试公共夹具"""

from __future__ import annotations
import logging
from typing import Callable, Optional

import numpy as np
import pytest

from config.config import Config
from game.tiles import COPIES, HAND_SIZE, NUM_KINDS, GameState, discard_tile, draw_tile, deal, parse_hand, sample_draw

# 4 组面子 + 1 对将, m=1
WINNING_HAND = "1m 1m 1m 2m 2m 2m 3p 4p 5p 7s 8s 9s E E"
# 无刻子, 无顺子, 无对子
JUNK_HAND = "1m 4m 7m 1p 4p 7p 1s 4s 7s E S W N RD"
# 贪心向听为 -2 的和牌
BLIND_SPOT_HAND = "1m 1m 1m 2m 2m 2m 3m 3m 3m 3m 4m 4m 4m 5m"


StateFactory = Callable[..., GameState]


@pytest.fixture
def make_state() -> StateFactory:
    """由手牌记号 (以及可选的牌墙记号) 构造满足守恒关系的状态

    未给出牌墙时, 手牌以外的全部拷贝都在牌墙中; 否则其余拷贝均视为已打出
    """
    def _make(hand_text: str, wall_text: Optional[str] = None, turn: Optional[int] = None) -> GameState:
        hand = parse_hand(hand_text)
        if wall_text is None:
            wall = tuple(COPIES - c for c in hand)
        else:
            wall = parse_hand(wall_text)
        discard = tuple(COPIES - h - w for h, w in zip(hand, wall))
        if turn is None:
            turn = sum(discard) - (HAND_SIZE - sum(hand))
        return GameState(wall=wall, hand=hand, discard=discard, turn=turn)
    return _make


@pytest.fixture
def random_midgame_states() -> Callable[[int, int], list[GameState]]:
    """按种子随机打牌若干回合, 得到 14 张手牌的中局状态"""
    def _states(count: int, seed: int = 0) -> list[GameState]:
        rng = np.random.default_rng(seed)
        states: list[GameState] = []
        for game_seed in range(count):
            state = deal(game_seed)
            for _ in range(int(rng.integers(0, 30))):
                held = [k for k in range(NUM_KINDS) if state.hand[k]]
                after = discard_tile(state, held[int(rng.integers(len(held)))])
                state = draw_tile(after, sample_draw(after, game_seed))
            states.append(state)
        return states
    return _states


@pytest.fixture
def isolated_logging(tmp_path, monkeypatch):
    """将日志目录指向临时目录, 测试结束后关闭新增的日志处理器并恢复原有处理器"""
    monkeypatch.setattr(Config, "LOG_DIR", tmp_path / "logs")
    root = logging.getLogger()
    before = list(root.handlers)
    level = root.level
    yield tmp_path / "logs"
    for handler in list(root.handlers):
        if handler not in before:
            root.removeHandler(handler)
            handler.close()
    for handler in before:
        if handler not in root.handlers:
            root.addHandler(handler)
    root.setLevel(level)
