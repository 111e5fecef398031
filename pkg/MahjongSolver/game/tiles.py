"""牌型定义与牌局状态模块

负责 34 种牌的编号与记号, 按区域计数的牌局状态, 发牌, 以及摸牌的精确转移分布。

牌的编号:
    0-8: 万 (1m-9m)
    9-17: 筒 (1p-9p)
    18-26: 索 (1s-9s)
    27-30: 风牌 东南西北 (E S W N)
    31-33: 箭牌 中发白 (RD GD WD)

牌局状态以三个 34 维计数向量表示 (牌墙 / 手牌 / 弃牌), 同种牌的各张拷贝可互换,
34x4 标记数组 (每种牌 4 个拷贝位) 仅作为序列化视图提供。
"""

from __future__ import annotations
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .errors import TileParseError, HandSizeError, IllegalMoveError, WallExhaustedError

NUM_KINDS = 34
COPIES = 4
TOTAL_TILES = NUM_KINDS * COPIES
HAND_SIZE = 14
NUM_SUITED = 27

# 手牌计数向量, 长度为 34
HandCounts = tuple[int, ...]


class Suit(str, Enum):
    MAN = "m"
    PIN = "p"
    SOU = "s"
    WIND = "wind"
    DRAGON = "dragon"

    @property
    def is_suited(self) -> bool:
        return self in (Suit.MAN, Suit.PIN, Suit.SOU)


SUITED = (Suit.MAN, Suit.PIN, Suit.SOU)
WIND_TOKENS = ("E", "S", "W", "N")
DRAGON_TOKENS = ("RD", "GD", "WD")


@dataclass(frozen=True, slots=True)
class TileKind:
    """牌的种类

    Attributes:
        index: 编号 0-33
        suit: 花色
        rank: 点数, 数牌 1-9, 风牌 1-4 (东南西北), 箭牌 1-3 (中发白)
    """
    index: int
    suit: Suit
    rank: int

    @staticmethod
    def from_index(index: int) -> TileKind:
        if not 0 <= index < NUM_KINDS:
            raise TileParseError(str(index))
        return ALL_KINDS[index]

    @property
    def is_honor(self) -> bool:
        return not self.suit.is_suited

    def __str__(self) -> str:
        return render_tile(self)


def _build_kinds() -> tuple[TileKind, ...]:
    kinds: list[TileKind] = []
    for suit_no, suit in enumerate(SUITED):
        for rank in range(1, 10):
            kinds.append(TileKind(suit_no * 9 + rank - 1, suit, rank))
    for rank in range(1, 5):
        kinds.append(TileKind(26 + rank, Suit.WIND, rank))
    for rank in range(1, 4):
        kinds.append(TileKind(30 + rank, Suit.DRAGON, rank))
    return tuple(kinds)


ALL_KINDS: tuple[TileKind, ...] = _build_kinds()

_TOKENS: tuple[str, ...] = tuple(
    [f"{k.rank}{k.suit.value}" for k in ALL_KINDS[:NUM_SUITED]]
    + list(WIND_TOKENS)
    + list(DRAGON_TOKENS)
)
_TOKEN_TO_INDEX: dict[str, int] = {token: i for i, token in enumerate(_TOKENS)}

# 允许传入 TileKind 或编号
KindLike = TileKind | int


def kind_index(kind: KindLike) -> int:
    return kind.index if isinstance(kind, TileKind) else int(kind)


# === 记号 ===

def parse_tile(text: str) -> TileKind:
    """解析单张牌的记号

    Args:
        text: 记号, 如 "1m", "9s", "E", "RD"

    Raises:
        TileParseError: 记号不合法
    """
    index = _TOKEN_TO_INDEX.get(text.strip()) if isinstance(text, str) else None
    if index is None:
        raise TileParseError(text)
    return ALL_KINDS[index]


def render_tile(kind: KindLike) -> str:
    return _TOKENS[kind_index(kind)]


def parse_hand(text: str) -> HandCounts:
    """解析以空格分隔的手牌记号为计数向量"""
    counts = [0] * NUM_KINDS
    for token in text.split():
        counts[parse_tile(token).index] += 1
    for i, c in enumerate(counts):
        if c > COPIES:
            raise TileParseError(f"{_TOKENS[i]}x{c}")
    return tuple(counts)


def render_hand(hand: Sequence[int]) -> str:
    """将计数向量渲染为排序后的空格分隔记号"""
    return " ".join(_TOKENS[i] for i, c in enumerate(hand) for _ in range(c))


def counts_from_tiles(tiles: Iterable[KindLike]) -> HandCounts:
    counts = [0] * NUM_KINDS
    for tile in tiles:
        counts[kind_index(tile)] += 1
    return tuple(counts)


def require_hand_size(hand: Sequence[int], expected: int = HAND_SIZE) -> None:
    total = sum(hand)
    if total != expected:
        raise HandSizeError(expected, total)


# === 牌局状态 ===

@dataclass(frozen=True, slots=True)
class GameState:
    """按区域计数的牌局状态

    Attributes:
        wall: 各种牌在牌墙中的剩余张数
        hand: 各种牌在手牌中的张数
        discard: 各种牌在弃牌堆中的张数
        turn: 已完成的动作数 (打一张 + 摸一张)
    """
    wall: HandCounts
    hand: HandCounts
    discard: HandCounts
    turn: int = 0

    @property
    def hand_size(self) -> int:
        return sum(self.hand)

    @property
    def wall_size(self) -> int:
        return sum(self.wall)

    def validate(self) -> None:
        """检查守恒关系, 不满足时抛出 ValueError"""
        if not (len(self.wall) == len(self.hand) == len(self.discard) == NUM_KINDS):
            raise ValueError("计数向量长度必须为 34")
        for k in range(NUM_KINDS):
            zones = (self.wall[k], self.hand[k], self.discard[k])
            if min(zones) < 0 or sum(zones) != COPIES:
                raise ValueError(f"{_TOKENS[k]} 的区域计数不守恒: {zones}")
        if self.hand_size not in (HAND_SIZE - 1, HAND_SIZE):
            raise HandSizeError(HAND_SIZE, self.hand_size)
        if sum(self.discard) != self.turn + (HAND_SIZE - self.hand_size):
            raise ValueError("弃牌数与已完成动作数不一致")

    def to_mark_array(self) -> np.ndarray:
        """转换为 34x4 标记数组, 0/1/2 分别表示牌墙/手牌/弃牌

        同种牌的拷贝依次按牌墙, 手牌, 弃牌的顺序排列
        """
        marks = np.zeros((NUM_KINDS, COPIES), dtype=np.int8)
        for k in range(NUM_KINDS):
            w, h = self.wall[k], self.hand[k]
            marks[k, w:w + h] = 1
            marks[k, w + h:] = 2
        return marks

    @staticmethod
    def from_mark_array(marks: np.ndarray, turn: int = 0) -> GameState:
        marks = np.asarray(marks)
        if marks.shape != (NUM_KINDS, COPIES):
            raise ValueError(f"标记数组形状应为 (34, 4), 实际为 {marks.shape}")
        wall = tuple(int(x) for x in (marks == 0).sum(axis=1))
        hand = tuple(int(x) for x in (marks == 1).sum(axis=1))
        discard = tuple(int(x) for x in (marks == 2).sum(axis=1))
        return GameState(wall, hand, discard, turn)


@dataclass(frozen=True, slots=True)
class DrawDistribution:
    """按牌种分组的摸牌分布

    Attributes:
        entries: (牌种, 概率) 列表, 仅包含牌墙中仍有剩余的牌种
    """
    entries: tuple[tuple[TileKind, float], ...]

    def probability(self, kind: KindLike) -> float:
        index = kind_index(kind)
        for k, p in self.entries:
            if k.index == index:
                return p
        return 0.0


# === 随机数 ===

def deal_rng(seed: int) -> np.random.Generator:
    """发牌使用的随机数生成器 (PCG64)"""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def draw_rng(seed: int, turn: int) -> np.random.Generator:
    """第 turn 个动作摸牌使用的随机数生成器, 仅由 (seed, turn) 决定"""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(turn + 1,))))


# === 状态转移 ===

def deal(seed: int) -> GameState:
    """随机发出 14 张手牌

    在 136 张实体牌中均匀抽取 14 张, 相同种子得到相同状态

    Args:
        seed: 64 位非负整数种子
    """
    if not 0 <= seed < 1 << 64:
        raise ValueError(f"种子必须是 64 位非负整数: {seed}")
    picks = deal_rng(seed).choice(TOTAL_TILES, size=HAND_SIZE, replace=False)
    hand = tuple(int(c) for c in np.bincount(picks // COPIES, minlength=NUM_KINDS))
    wall = tuple(COPIES - c for c in hand)
    return GameState(wall=wall, hand=hand, discard=(0,) * NUM_KINDS, turn=0)


def discard_tile(state: GameState, kind: KindLike) -> GameState:
    """打出一张手牌, 得到 13 张手牌的中间状态 (turn 不变)"""
    k = kind_index(kind)
    if state.hand[k] < 1:
        raise IllegalMoveError(f"手牌中没有 {_TOKENS[k]}, 无法打出")
    hand = list(state.hand)
    discard = list(state.discard)
    hand[k] -= 1
    discard[k] += 1
    return GameState(state.wall, tuple(hand), tuple(discard), state.turn)


def draw_tile(state: GameState, kind: KindLike) -> GameState:
    """从牌墙摸入指定的牌, 完成一个动作 (turn + 1)"""
    k = kind_index(kind)
    if state.wall[k] < 1:
        raise IllegalMoveError(f"牌墙中没有 {_TOKENS[k]}, 无法摸入")
    wall = list(state.wall)
    hand = list(state.hand)
    wall[k] -= 1
    hand[k] += 1
    return GameState(tuple(wall), tuple(hand), state.discard, state.turn + 1)


def apply(state: GameState, discard: KindLike, drawn: KindLike) -> GameState:
    """执行一个完整动作: 打出 discard, 再摸入 drawn

    Raises:
        IllegalMoveError: 打出的牌不在手中, 或摸入的牌不在牌墙中
    """
    return draw_tile(discard_tile(state, discard), drawn)


def draw_distribution(state: GameState) -> DrawDistribution:
    """打牌后的摸牌分布, 各牌种概率为 wall[k] / sum(wall)

    Raises:
        HandSizeError: 手牌不是 13 张
        WallExhaustedError: 牌墙已空
    """
    require_hand_size(state.hand, HAND_SIZE - 1)
    total = state.wall_size
    if total == 0:
        raise WallExhaustedError("牌墙已摸空")
    return DrawDistribution(tuple(
        (ALL_KINDS[k], w / total) for k, w in enumerate(state.wall) if w > 0
    ))


def sample_draw(state: GameState, seed: int) -> TileKind:
    """按均匀分布从牌墙中随机摸一张实体牌

    Args:
        state: 打牌后的状态 (13 张手牌)
        seed: 对局种子, 与 state.turn 一起决定随机数
    """
    total = state.wall_size
    if total == 0:
        raise WallExhaustedError("牌墙已摸空")
    pick = int(draw_rng(seed, state.turn).integers(total))
    for k, w in enumerate(state.wall):
        if pick < w:
            return ALL_KINDS[k]
        pick -= w
    raise AssertionError("unreachable")


__all__ = [
    "NUM_KINDS", "COPIES", "TOTAL_TILES", "HAND_SIZE", "NUM_SUITED",
    "HandCounts", "Suit", "TileKind", "ALL_KINDS", "KindLike", "kind_index",
    "parse_tile", "render_tile", "parse_hand", "render_hand", "counts_from_tiles", "require_hand_size",
    "GameState", "DrawDistribution",
    "deal_rng", "draw_rng", "deal", "discard_tile", "draw_tile", "apply", "draw_distribution", "sample_draw",
]
