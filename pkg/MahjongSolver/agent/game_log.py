"""对局日志模块

日志格式 mjlog/1 为 JSON Lines:
    第 1 行: 头部 {type: header, format, seed, params, record_q}
    每个动作一行: {type: turn, turn, hand, q?, discard, drawn}
    最后一行: {type: outcome, kind: won | exhausted, discards, score?}

日志可由种子完整复现, replay() 会重新发牌并按回合种子重新摸牌, 任何不一致都会抛出 ReplayError。
"""

from __future__ import annotations
from pathlib import Path
from typing import Annotated, Iterator, Literal, Optional, Union
import json
import logging

from pydantic import BaseModel, ConfigDict, Field

from game.errors import MahjongError
from game.hand_eval import ScoreBreakdown, is_winning, score_hand
from game.shaping import ShapingParams
from game.tiles import GameState, deal, discard_tile, draw_tile, parse_tile, render_hand, render_tile, sample_draw
from utils.io_utils import IOUtils
from .planner import best_action

logger = logging.getLogger(__name__)

LOG_FORMAT = "mjlog/1"


class ReplayError(MahjongError):
    """日志复现结果与记录不一致"""


class LogHeader(BaseModel):
    type: Literal["header"] = "header"
    format: str = LOG_FORMAT
    seed: int
    params: ShapingParams
    record_q: bool


class TurnRecord(BaseModel):
    """单个动作的记录

    Attributes:
        turn: 动作序号, 从 0 开始
        hand: 打牌前的 14 张手牌
        q: 各牌种的 Q 值, 未开启记录时为 None
        discard: 打出的牌
        drawn: 摸入的牌
    """
    model_config = ConfigDict(frozen=True)

    type: Literal["turn"] = "turn"
    turn: int
    hand: str
    q: Optional[dict[str, float]] = None
    discard: str
    drawn: str


class WonOutcome(BaseModel):
    model_config = ConfigDict(frozen=True)

    type: Literal["outcome"] = "outcome"
    kind: Literal["won"] = "won"
    discards: int = Field(ge=0)
    score: ScoreBreakdown


class ExhaustedOutcome(BaseModel):
    model_config = ConfigDict(frozen=True)

    type: Literal["outcome"] = "outcome"
    kind: Literal["exhausted"] = "exhausted"
    discards: int = Field(ge=0)


Outcome = Annotated[Union[WonOutcome, ExhaustedOutcome], Field(discriminator="kind")]


class _OutcomeLine(BaseModel):
    outcome: Outcome


class GameLog(BaseModel):
    """单局对局日志

    Attributes:
        seed: 对局种子
        params: 塑形参数
        record_q: 是否记录了每回合的 Q 值
        turns: 动作记录
        outcome: 终局结果
        elapsed_seconds: 对局耗时, 不参与序列化
    """
    seed: int
    params: ShapingParams
    record_q: bool = False
    turns: list[TurnRecord] = Field(default_factory=list)
    outcome: Outcome
    elapsed_seconds: float = Field(0.0, exclude=True)

    # === 属性方法 ===

    @property
    def won(self) -> bool:
        return isinstance(self.outcome, WonOutcome)

    @property
    def discards(self) -> int:
        return self.outcome.discards

    @property
    def multiplier(self) -> Optional[int]:
        return self.outcome.score.multiplier if isinstance(self.outcome, WonOutcome) else None

    # === 序列化方法 ===

    def to_lines(self) -> list[str]:
        header = LogHeader(seed=self.seed, params=self.params, record_q=self.record_q)
        lines = [header.model_dump_json()]
        lines.extend(t.model_dump_json(exclude_none=True) for t in self.turns)
        lines.append(self.outcome.model_dump_json())
        return lines

    def dumps(self) -> str:
        return "\n".join(self.to_lines()) + "\n"

    @classmethod
    def loads(cls, text: str) -> GameLog:
        """从 mjlog 文本解析日志

        Raises:
            ValueError: 格式版本不支持或内容缺失
        """
        lines = [line for line in text.splitlines() if line.strip()]
        if len(lines) < 2:
            raise ValueError("日志内容不完整")
        header = LogHeader.model_validate_json(lines[0])
        if header.format != LOG_FORMAT:
            raise ValueError(f"不支持的日志格式: {header.format}")
        turns = [TurnRecord.model_validate_json(line) for line in lines[1:-1]]
        outcome = _OutcomeLine.model_validate({"outcome": json.loads(lines[-1])}).outcome
        return cls(seed=header.seed, params=header.params, record_q=header.record_q, turns=turns, outcome=outcome)

    def save(self, path: str | Path) -> Path:
        return IOUtils.atomic_write_text(path, self.dumps())

    @classmethod
    def load(cls, path: str | Path) -> GameLog:
        return cls.loads(Path(path).read_text(encoding="utf-8"))

    # === 复现方法 ===

    def iter_states(self) -> Iterator[GameState]:
        """依次给出每个动作之前的状态, 最后给出终局状态"""
        state = deal(self.seed)
        for record in self.turns:
            yield state
            state = draw_tile(discard_tile(state, parse_tile(record.discard)), parse_tile(record.drawn))
        yield state

    def replay(self, *, verify_policy: bool = False) -> GameState:
        """从种子复现整局并校验每一步

        Args:
            verify_policy: 是否同时校验每一步的打牌选择与当前策略一致

        Returns:
            终局状态

        Raises:
            ReplayError: 任意一步与记录不一致
        """
        state = deal(self.seed)
        for record in self.turns:
            if record.turn != state.turn or record.hand != render_hand(state.hand):
                raise ReplayError(f"第 {record.turn} 手的手牌与记录不一致")
            if is_winning(state.hand):
                raise ReplayError(f"第 {record.turn} 手之前已和牌, 对局不应继续")
            if verify_policy and render_tile(best_action(state, self.params)) != record.discard:
                raise ReplayError(f"第 {record.turn} 手的打牌选择与策略不一致")
            after = discard_tile(state, parse_tile(record.discard))
            drawn = sample_draw(after, self.seed)
            if render_tile(drawn) != record.drawn:
                raise ReplayError(f"第 {record.turn} 手摸牌不一致: 记录 {record.drawn}, 复现 {render_tile(drawn)}")
            state = draw_tile(after, drawn)
            state.validate()

        if self.outcome.discards != state.turn:
            raise ReplayError("终局动作数与记录不一致")
        if isinstance(self.outcome, WonOutcome):
            if not is_winning(state.hand):
                raise ReplayError("记录为和牌, 但终局手牌未和牌")
            score = score_hand(state.hand, self.params.base_payoff, self.params.score_rules)
            if score != self.outcome.score:
                raise ReplayError("和牌计分与记录不一致")
        elif state.wall_size != 0 or is_winning(state.hand):
            raise ReplayError("记录为流局, 但牌墙未摸空或手牌已和牌")

        logger.debug(f"日志复现成功: seed={self.seed}, discards={state.turn}")
        return state


__all__ = [
    "LOG_FORMAT", "ReplayError", "LogHeader", "TurnRecord",
    "WonOutcome", "ExhaustedOutcome", "Outcome", "GameLog",
]
