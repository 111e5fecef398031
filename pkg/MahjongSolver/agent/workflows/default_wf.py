from __future__ import annotations
from typing import TYPE_CHECKING
import types

from langgraph.graph import StateGraph, START, END
from langgraph.graph.state import CompiledStateGraph

from ..agent_state import GameLoopState
from ..nodes.basic_nodes import deal_node, outcome_branch
from ..nodes.planner_nodes import plan_node, step_node

# 防止循环引用
if TYPE_CHECKING:
    from ..agent import Agent


# 统一定义哪些函数需要挂载, 以及挂载到 agent 上的名字
NODES = {
    "deal": deal_node,
    "plan": plan_node,
    "step": step_node,
}

BRANCHES = {
    "outcome": outcome_branch,
}


def build_workflow(agent: Agent) -> CompiledStateGraph:
    """构建单局对局的状态图

    START -> deal -> (终局? END : plan) ; plan -> step -> (终局? END : plan)

    Args:
        agent: 节点函数挂载的目标智能体

    Returns:
        编译后的状态图
    """
    from ..agent import Agent

    builder = StateGraph(GameLoopState)

    # 将节点函数挂载到 agent 实例上并添加到 workflow 中
    for node_name, func in NODES.items():
        attr_name = "_" + node_name + "_node"
        setattr(agent, attr_name, types.MethodType(func, agent))

        # 节点模块只在类型检查时导入这两个名字, LangGraph 解析类型注解前需补上
        func.__globals__["Agent"] = Agent
        func.__globals__["GameLoopState"] = GameLoopState

        builder.add_node(node_name, getattr(agent, attr_name))

    # 将分支函数挂载到 agent 实例上
    for branch_name, func in BRANCHES.items():
        attr_name = "_" + branch_name + "_branch"
        setattr(agent, attr_name, types.MethodType(func, agent))

        func.__globals__["Agent"] = Agent
        func.__globals__["GameLoopState"] = GameLoopState

    # 添加边
    builder.add_edge(START, "deal")
    builder.add_conditional_edges("deal", agent._outcome_branch, {
        "finished": END,
        "continue": "plan",
    })
    builder.add_edge("plan", "step")
    builder.add_conditional_edges("step", agent._outcome_branch, {
        "finished": END,
        "continue": "plan",
    })

    return builder.compile()


__all__ = ["build_workflow"]
