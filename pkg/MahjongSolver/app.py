"""主程序入口模块

命令行入口, 提供以下子命令:
    play   单局对局, --verbose 时逐回合打印 Q 值快照
    batch  批量对局统计 (和牌率, 打牌数, 倍数分布)
    duel   1v1 对局序列与单侧 t 检验
    sweep  权重扫描矩阵
    ttest  对 CSV 中的一列样本做单侧 t 检验

退出码: 0 成功, 2 参数错误, 1 运行时错误
"""

from __future__ import annotations
import argparse
import logging
from logging.handlers import TimedRotatingFileHandler
from pathlib import Path
import sys
from typing import Annotated, Callable, Literal, Optional, Sequence

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from config.config import Config
from game.errors import ConfigError
from game.hand_eval import ScoreRules, load_score_rules
from game.shaping import ShapingParams
from game.tiles import parse_tile
from agent.agent import play_game
from agent.planner import QReport
from arena.arena import run_batch, run_match_series, sweep
from arena.exporters import Exporter
from utils.snapshot_utils import SnapshotUtils
from utils.stats_utils import Significance, StatsUtils, TTestResult

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2


# === 日志配置 ===

def setup_logging(verbose: bool = False, log_dir: Optional[Path] = None) -> None:
    """配置根日志记录器

    日志文件按天轮转; 控制台默认只显示警告以上的消息本身, --verbose 时显示 INFO
    """
    log_dir = Path(log_dir or Config.LOG_DIR)
    log_dir.mkdir(parents=True, exist_ok=True)

    root = logging.getLogger()
    root.setLevel(Config.LOG_LEVEL)
    if root.hasHandlers():
        root.handlers.clear()

    # 日志文件按天轮转
    file_handler = TimedRotatingFileHandler(
        filename=log_dir / "mahjong.log",
        when="midnight",
        interval=1,
        backupCount=Config.LOG_BACKUP_DAYS,
        encoding="utf-8"
    )
    file_handler.setFormatter(logging.Formatter(
        fmt="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S"
    ))

    # 控制台只显示消息本身, 输出到 stderr 以免混入结果
    console_handler = logging.StreamHandler()
    console_handler.setLevel(logging.INFO if verbose else logging.WARNING)
    console_handler.setFormatter(logging.Formatter("%(message)s"))

    root.addHandler(file_handler)
    root.addHandler(console_handler)


# === 运行配置 ===

class RunConfig(BaseModel):
    """所有子命令共用的运行配置, 在任何对局开始前完成校验"""
    model_config = ConfigDict(extra="forbid", frozen=True)

    base_payoff: float = Field(Config.DEFAULT_BASE_PAYOFF, gt=0, allow_inf_nan=False)
    transfer_factor: Literal[1, 3] = Config.DEFAULT_TRANSFER_FACTOR
    score_rules: Optional[Path] = None
    out: Path = Config.RESULTS_DIR
    jobs: int = Field(Config.DEFAULT_JOBS, ge=1)
    verbose: bool = False

    def shaping_params(self, weight: float, rules: ScoreRules) -> ShapingParams:
        return ShapingParams(weight=weight, base_payoff=self.base_payoff, score_rules=rules)


Seed = Annotated[int, Field(ge=0, lt=2**64)]
Weight = Annotated[float, Field(ge=0, allow_inf_nan=False)]


class PlayConfig(RunConfig):
    seed: Seed = 0
    weight: Weight = 0.0


class BatchConfig(RunConfig):
    seed: Seed
    games: int = Field(ge=1)
    weight: Weight = 0.0


class DuelConfig(RunConfig):
    seed: Seed
    matches: int = Field(ge=1)
    w1: Weight = 0.0
    w2: Weight = 0.0
    mirrored: bool = False
    significance: Significance = "1%"
    critical: Optional[float] = None


class SweepConfig(RunConfig):
    seed: Seed
    matches: int = Field(100, ge=1)
    w1: list[Weight] = Field(min_length=1)
    w2: list[Weight] = Field(min_length=1)

    @field_validator("w1", "w2", mode="before")
    @classmethod
    def _split_weights(cls, value: object) -> object:
        # "0.75,1,1.2" -> [0.75, 1.0, 1.2]
        if isinstance(value, str):
            return [item for item in value.split(",") if item.strip()]
        return value


class TTestConfig(RunConfig):
    input: Path
    column: Optional[str] = None
    mu0: float = 0.0
    significance: Significance = "1%"
    critical: Optional[float] = None


# === 子命令 ===

def _resolve_critical(significance: Significance, n: int, critical: Optional[float]) -> float:
    return critical if critical is not None else StatsUtils.critical_value(significance, n)


def _print_ttest(result: TTestResult) -> None:
    print(
        f"单侧 t 检验 (H0: mu <= {result.mu0:g}): n={result.n}, mean={result.mean:.4f}, std={result.std:.4f}, "
        f"t={result.t_statistic:.4f}, critical={result.critical:.3f}, p={result.p_value:.4g}, "
        f"{'拒绝' if result.reject else '不拒绝'}原假设"
    )


def cmd_play(config: PlayConfig, rules: ScoreRules) -> int:
    """单局对局, 写入 mjlog 日志"""
    params = config.shaping_params(config.weight, rules)
    log = play_game(config.seed, params, record_q=config.verbose)

    if config.verbose:
        for state, record in zip(log.iter_states(), log.turns):
            report = QReport.from_dict(record.q or {}, parse_tile(record.discard))
            print(SnapshotUtils.render_snapshot(state, report))
            print()

    path = log.save(config.out / f"game_{config.seed}.mjlog")
    if log.won:
        score = log.outcome.score
        items = ", ".join(f"{name}+{value}" for name, value in score.items)
        print(
            f"和牌: 打牌数 {log.discards}, 倍数 m={score.multiplier} ({items}), "
            f"个人收入 {score.individual_payoff:g}, 总收入 {score.total_payoff:g}"
        )
    else:
        print(f"流局: 打牌数 {log.discards}")
    print(f"日志: {path}")
    return EXIT_OK


def cmd_batch(config: BatchConfig, rules: ScoreRules) -> int:
    """批量对局统计, 写入汇总报告与直方图 CSV"""
    stats = run_batch(config.games, config.shaping_params(config.weight, rules), config.seed, jobs=config.jobs)
    Exporter.export_batch(stats, config.out)

    print(f"对局数 {stats.games}, 和牌 {stats.completed}, 和牌率 {stats.completion_rate:.2%}")
    if stats.discards is not None:
        d = stats.discards
        print(f"打牌数: mean={d.mean:.2f}, std={d.std:.2f}, min={d.min:g}, max={d.max:g}")
        for m, count in stats.score_histogram.items():
            print(f"  m={m}: {count} ({count / stats.completed:.2%})")
        print(f"基础倍数 m={stats.base_multiplier} 占比 {stats.base_multiplier_share:.2%}")
    if stats.runtime is not None:
        logger.info(f"每局耗时: mean={stats.runtime.mean:.3f}s, max={stats.runtime.max:.3f}s")
    print(f"结果目录: {config.out}")
    return EXIT_OK


def cmd_duel(config: DuelConfig, rules: ScoreRules) -> int:
    """1v1 对局序列, 写入每场结果与累计收益 CSV, 并对玩家 2 的每场收益做单侧 t 检验"""
    series = run_match_series(
        config.matches,
        config.shaping_params(config.w1, rules),
        config.shaping_params(config.w2, rules),
        config.base_payoff,
        config.seed,
        transfer_factor=config.transfer_factor,
        mirrored=config.mirrored,
        jobs=config.jobs,
    )
    Exporter.export_series(series, config.out)

    winners = [m.winner for m in series.per_match]
    print(
        f"{config.matches} 场: 玩家 1 (w={config.w1:g}) 胜 {winners.count('player1')}, "
        f"玩家 2 (w={config.w2:g}) 胜 {winners.count('player2')}, 平局 {winners.count('draw')}"
    )
    print(f"总收益: 玩家 1 {series.player1_total:+g}, 玩家 2 {series.total:+g}")

    try:
        critical = _resolve_critical(config.significance, config.matches, config.critical)
        _print_ttest(StatsUtils.one_tailed_t(series.transfers, 0.0, critical))
    except ValueError as e:
        print(f"未进行 t 检验: {e}")
    print(f"结果目录: {config.out}")
    return EXIT_OK


def cmd_sweep(config: SweepConfig, rules: ScoreRules) -> int:
    """权重扫描, 写入矩阵 CSV (行为玩家 1 权重, 值为玩家 2 收益)"""
    result = sweep(
        config.w1,
        config.w2,
        config.matches,
        config.base_payoff,
        config.seed,
        base_params=config.shaping_params(0.0, rules),
        transfer_factor=config.transfer_factor,
        jobs=config.jobs,
    )
    Exporter.export_sweep(result, config.out)
    print(Exporter.sweep_frame(result).to_string())
    print(f"结果目录: {config.out}")
    return EXIT_OK


def cmd_ttest(config: TTestConfig, rules: ScoreRules) -> int:
    """读取 CSV 中的一列样本做单侧 t 检验

    未指定列名时, 单列文件取唯一一列, 否则取 transfer 列 (duel 导出的 matches.csv)
    """
    frame = pd.read_csv(config.input)
    column = config.column
    if column is None:
        if len(frame.columns) == 1:
            column = frame.columns[0]
        elif "transfer" in frame.columns:
            column = "transfer"
        else:
            raise ValueError(f"{config.input} 含多列, 请用 --column 指定样本列")
    if column not in frame.columns:
        raise ValueError(f"{config.input} 中不存在列 {column}")

    samples = frame[column].dropna().astype(float).tolist()
    critical = _resolve_critical(config.significance, len(samples), config.critical)
    _print_ttest(StatsUtils.one_tailed_t(samples, config.mu0, critical))
    return EXIT_OK


COMMANDS: dict[str, tuple[type[RunConfig], Callable[..., int]]] = {
    "play": (PlayConfig, cmd_play),
    "batch": (BatchConfig, cmd_batch),
    "duel": (DuelConfig, cmd_duel),
    "sweep": (SweepConfig, cmd_sweep),
    "ttest": (TTestConfig, cmd_ttest),
}


# === 参数解析 ===

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mahjong-solver", description="单人麻将决策引擎与对局实验")
    subparsers = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--base-payoff", type=float, default=argparse.SUPPRESS, help="底注 b (默认 2)")
    common.add_argument("--transfer-factor", type=int, default=argparse.SUPPRESS, help="1v1 结算倍率, 1 或 3 (默认 3)")
    common.add_argument("--score-rules", type=Path, default=argparse.SUPPRESS, help="番数表文件")
    common.add_argument("--out", type=Path, default=argparse.SUPPRESS, help="输出目录")
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS, help="并行进程数")
    common.add_argument("--verbose", action="store_true", default=argparse.SUPPRESS, help="显示详细输出")

    play = subparsers.add_parser("play", parents=[common], help="单局对局")
    play.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    play.add_argument("--weight", type=float, default=argparse.SUPPRESS)

    batch = subparsers.add_parser("batch", parents=[common], help="批量对局统计")
    batch.add_argument("--seed", type=int, required=True)
    batch.add_argument("--games", type=int, required=True)
    batch.add_argument("--weight", type=float, default=argparse.SUPPRESS)

    duel = subparsers.add_parser("duel", parents=[common], help="1v1 对局序列")
    duel.add_argument("--seed", type=int, required=True)
    duel.add_argument("--matches", type=int, required=True)
    duel.add_argument("--w1", type=float, default=argparse.SUPPRESS, help="玩家 1 权重")
    duel.add_argument("--w2", type=float, default=argparse.SUPPRESS, help="玩家 2 权重")
    duel.add_argument("--mirrored", action="store_true", default=argparse.SUPPRESS, help="镜像配对")
    duel.add_argument("--significance", choices=["1%", "5%"], default=argparse.SUPPRESS)
    duel.add_argument("--critical", type=float, default=argparse.SUPPRESS, help="直接指定 t 临界值")

    sweep_parser = subparsers.add_parser("sweep", parents=[common], help="权重扫描矩阵")
    sweep_parser.add_argument("--seed", type=int, required=True)
    sweep_parser.add_argument("--w1", type=str, required=True, help="玩家 1 权重列表, 逗号分隔")
    sweep_parser.add_argument("--w2", type=str, required=True, help="玩家 2 权重列表, 逗号分隔")
    sweep_parser.add_argument("--matches", type=int, default=argparse.SUPPRESS, help="每格场数 (默认 100)")

    ttest = subparsers.add_parser("ttest", parents=[common], help="单侧 t 检验")
    ttest.add_argument("--input", type=Path, required=True)
    ttest.add_argument("--column", type=str, default=argparse.SUPPRESS)
    ttest.add_argument("--mu0", type=float, default=argparse.SUPPRESS)
    ttest.add_argument("--significance", choices=["1%", "5%"], default=argparse.SUPPRESS)
    ttest.add_argument("--critical", type=float, default=argparse.SUPPRESS)

    return parser


# === 程序入口 ===

def main(argv: Optional[Sequence[str]] = None) -> int:
    """解析参数并执行子命令

    Returns:
        退出码
    """
    parser = build_parser()
    try:
        args = vars(parser.parse_args(argv))
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    command = args.pop("command")
    config_cls, handler = COMMANDS[command]
    setup_logging(bool(args.get("verbose", False)))

    try:
        config = config_cls.model_validate(args)
        rules = load_score_rules(config.score_rules)
    except (ValidationError, ConfigError) as e:
        print(f"参数错误: {e}", file=sys.stderr)
        return EXIT_USAGE

    logger.info(f"执行 {command}: {config.model_dump_json()}")
    try:
        return handler(config, rules)
    except Exception as e:
        logger.exception(f"{command} 运行出错: {e}")
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
