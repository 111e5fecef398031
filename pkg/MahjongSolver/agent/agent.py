from __future__ import annotations
from functools import lru_cache
from typing import Callable, Iterator, Optional
import logging
import time

from langgraph.graph.state import CompiledStateGraph

from config.config import Config
from game.shaping import ShapingParams
from .agent_state import GameLoopState
from .game_log import GameLog

logger = logging.getLogger(__name__)


class Agent:
    """单人麻将智能体

    以 LangGraph 状态图驱动对局循环: 发牌, 反复规划并执行动作, 直到和牌或牌墙摸空

    Attributes:
        params: 塑形参数
        record_q: 是否在日志中记录每回合的 Q 值
    """
    def __init__(self) -> None:
        self._graph: Optional[CompiledStateGraph] = None
        self._config = {"recursion_limit": Config.GRAPH_RECURSION_LIMIT}

        self.params: ShapingParams = ShapingParams()
        self.record_q: bool = False

    # === 初始化方法 ===

    def initialize(
        self,
        params: ShapingParams,
        *,
        record_q: bool = False,
        workflow: Optional[Callable[[Agent], CompiledStateGraph]] = None
    ) -> Agent:
        """初始化智能体

        Args:
            params: 塑形参数
            record_q: 是否记录每回合的 Q 值, 批量对局时建议关闭以减小日志体积
            workflow: 自定义工作流构建函数, 如果为 None 则使用默认工作流

        Returns:
            智能体自身, 便于链式调用
        """
        self.params = params
        self.record_q = record_q

        if workflow is None:
            # 加载默认工作流
            from .workflows.default_wf import build_workflow
            workflow = build_workflow

        self._graph = workflow(self)
        return self

    # === 对局方法 ===

    def play_game(self, seed: int) -> GameLog:
        """完整进行一局

        Args:
            seed: 对局种子

        Returns:
            可复现的对局日志
        """
        graph = self._require_graph()

        start = time.perf_counter()
        final: GameLoopState = graph.invoke({"seed": seed, "turns": []}, config=self._config)
        elapsed = time.perf_counter() - start

        log = GameLog(
            seed=seed,
            params=self.params,
            record_q=self.record_q,
            turns=final.get("turns", []),
            outcome=final["outcome"],
            elapsed_seconds=elapsed,
        )
        logger.info(
            f"对局结束 seed={seed}, 结果={log.outcome.kind}, 打牌数={log.discards}, "
            f"倍数={log.multiplier}, 耗时={elapsed:.2f}s"
        )
        return log

    def stream_turns(self, seed: int) -> Iterator[GameLoopState]:
        """逐回合推进对局

        发牌后产出一次, 之后每完成一个动作产出一次; 产出的状态中 outcome 不为 None 时对局结束

        Args:
            seed: 对局种子

        Yields:
            每回合结束时的对局状态
        """
        graph = self._require_graph()
        for values in graph.stream({"seed": seed, "turns": []}, config=self._config, stream_mode="values"):
            # 跳过初始输入以及规划节点之后的中间状态
            if values.get("game") is None or values.get("q_report") is not None:
                continue
            yield values

    def _require_graph(self) -> CompiledStateGraph:
        if self._graph is None:
            raise ValueError("智能体未初始化，请先调用 initialize 方法")
        return self._graph


@lru_cache(maxsize=32)
def get_agent(params: ShapingParams, record_q: bool = False) -> Agent:
    """获取 (并缓存) 指定参数的智能体, 同一进程内复用已编译的状态图"""
    return Agent().initialize(params, record_q=record_q)


def play_game(seed: int, params: ShapingParams, *, record_q: bool = False) -> GameLog:
    """以指定参数完整进行一局"""
    return get_agent(params, record_q).play_game(seed)


__all__ = ["Agent", "get_agent", "play_game"]
