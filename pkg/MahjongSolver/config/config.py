"""运行配置模块

所有配置项均可通过环境变量或项目根目录下的 .env 文件覆盖
"""

import os
from pathlib import Path

from dotenv import load_dotenv

from config.paths import Paths

# 加载环境变量
load_dotenv()


def _env_int(name: str, default: int) -> int:
    value = os.getenv(name)
    return int(value) if value not in (None, "") else default


def _env_float(name: str, default: float) -> float:
    value = os.getenv(name)
    return float(value) if value not in (None, "") else default


class Config:
    # 日志配置
    LOG_LEVEL: str = os.getenv("MJ_LOG_LEVEL", "INFO")
    LOG_DIR: Path = Path(os.getenv("MJ_LOG_DIR", Paths.LOGS.as_posix()))
    LOG_BACKUP_DAYS: int = _env_int("MJ_LOG_BACKUP_DAYS", 7)

    # 对局配置
    DEFAULT_BASE_PAYOFF: float = _env_float("MJ_BASE_PAYOFF", 2.0)
    DEFAULT_TRANSFER_FACTOR: int = _env_int("MJ_TRANSFER_FACTOR", 3)
    SCORE_RULES_FILE: Path = Path(os.getenv("MJ_SCORE_RULES_FILE", Paths.SCORE_RULES_FILE.as_posix()))

    # 运行配置
    DEFAULT_JOBS: int = _env_int("MJ_JOBS", 1)
    # 每回合占用两个图步骤, 122 回合远低于此上限
    GRAPH_RECURSION_LIMIT: int = _env_int("MJ_GRAPH_RECURSION_LIMIT", 1000)
    EVAL_CACHE_SIZE: int = _env_int("MJ_EVAL_CACHE_SIZE", 1 << 18)
    RESULTS_DIR: Path = Path(os.getenv("MJ_RESULTS_DIR", Paths.RESULTS.as_posix()))


__all__ = ["Config"]
