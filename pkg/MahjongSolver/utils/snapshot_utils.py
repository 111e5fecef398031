from __future__ import annotations
from typing import TYPE_CHECKING

from game.tiles import NUM_KINDS, GameState, render_tile

# 防止循环引用
if TYPE_CHECKING:
    from agent.planner import QReport

MIN_COLUMN_WIDTH = 7
BEST_MARKER = "^"


class SnapshotUtils:
    """对局快照渲染工具类"""

    def __new__(cls):
        # 禁止实例化
        raise TypeError("SnapshotUtils类不可被实例化")

    @staticmethod
    def render_snapshot(state: GameState, q_report: QReport) -> str:
        """渲染定宽文本快照

        第一行为排序后的手牌, 每张牌一列; 第二行为对应牌种的 Q 值 (保留 4 位小数);
        第三行在推荐打出的牌下方标记 ^

        Args:
            state: 规划时的状态 (14 张手牌)
            q_report: 由该状态得到的 Q 值报告

        Raises:
            ValueError: 报告中的牌种与手牌不一致
        """
        q_by_kind = {k.index: q for k, q in q_report.actions}
        held = {k for k in range(NUM_KINDS) if state.hand[k]}
        if set(q_by_kind) != held:
            raise ValueError("Q 值报告与手牌不一致")

        columns = [k for k in range(NUM_KINDS) for _ in range(state.hand[k])]
        q_texts = [f"{q_by_kind[k]:.4f}" for k in columns]
        width = max(MIN_COLUMN_WIDTH, max(len(t) for t in q_texts) + 1)

        tiles_row = "".join(render_tile(k).rjust(width) for k in columns)
        q_row = "".join(t.rjust(width) for t in q_texts)
        marker_at = columns.index(q_report.best.index)
        marker_row = "".join(
            (BEST_MARKER if i == marker_at else "").rjust(width) for i in range(len(columns))
        )
        header = f"[turn {state.turn}] wall={state.wall_size} best={render_tile(q_report.best)}"
        return "\n".join([header, tiles_row, q_row, marker_row.rstrip()])


__all__ = ["SnapshotUtils"]
