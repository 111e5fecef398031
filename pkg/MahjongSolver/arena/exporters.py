"""实验结果导出模块

所有输出均为 CSV 或 JSON 文本, 经由 IOUtils 原子写入; 同一组结果总是得到字节一致的文件。
"""

from __future__ import annotations
from pathlib import Path

import pandas as pd

from utils.io_utils import IOUtils
from .arena import BatchStats, MatchSeries, SweepResult


class Exporter:
    """结果导出工具类"""

    def __new__(cls):
        # 禁止实例化
        raise TypeError("Exporter类不可被实例化")

    # === DataFrame 构建 ===

    @staticmethod
    def histogram_frame(histogram: dict[int, int], key: str) -> pd.DataFrame:
        """两列直方图, 按键升序"""
        return pd.DataFrame(
            sorted(histogram.items()),
            columns=[key, "count"],
        )

    @staticmethod
    def batch_summary_frame(stats: BatchStats) -> pd.DataFrame:
        rows: list[tuple[str, float]] = [
            ("games", stats.games),
            ("completed", stats.completed),
            ("completion_rate", stats.completion_rate),
            ("base_multiplier_share", stats.base_multiplier_share),
        ]
        if stats.discards is not None:
            rows += [
                ("discards_mean", stats.discards.mean),
                ("discards_std", stats.discards.std),
                ("discards_min", stats.discards.min),
                ("discards_max", stats.discards.max),
            ]
        return pd.DataFrame(rows, columns=["metric", "value"])

    @staticmethod
    def matches_frame(series: MatchSeries) -> pd.DataFrame:
        """每场一行, 含累计收益列"""
        frame = pd.DataFrame([m.model_dump() for m in series.per_match])
        frame.insert(0, "match", range(len(frame)))
        frame["cumulative"] = series.cumulative
        return frame

    @staticmethod
    def cumulative_frame(series: MatchSeries) -> pd.DataFrame:
        return pd.DataFrame({"match": range(len(series.cumulative)), "cumulative": series.cumulative})

    @staticmethod
    def sweep_frame(result: SweepResult) -> pd.DataFrame:
        """行为玩家 1 权重, 列为玩家 2 权重"""
        return pd.DataFrame(
            result.matrix,
            index=pd.Index([f"{w:g}" for w in result.weights1], name="w1\\w2"),
            columns=[f"{w:g}" for w in result.weights2],
        )

    # === 写入 ===

    @staticmethod
    def write_csv(frame: pd.DataFrame, path: str | Path, *, index: bool = False) -> Path:
        return IOUtils.atomic_write_text(path, frame.to_csv(index=index, lineterminator="\n"))

    @staticmethod
    def export_batch(stats: BatchStats, out_dir: str | Path) -> list[Path]:
        """导出批量对局统计: 汇总 CSV, 打牌数直方图, 倍数直方图, JSON 报告"""
        out_dir = Path(out_dir)
        paths = [
            Exporter.write_csv(Exporter.batch_summary_frame(stats), out_dir / "batch_summary.csv"),
            Exporter.write_csv(
                Exporter.histogram_frame(stats.discard_histogram, "discards"), out_dir / "discard_histogram.csv"
            ),
            Exporter.write_csv(
                Exporter.histogram_frame(stats.score_histogram, "multiplier"), out_dir / "score_histogram.csv"
            ),
            IOUtils.atomic_write_text(out_dir / "batch_report.json", stats.model_dump_json(indent=2) + "\n"),
        ]
        return paths

    @staticmethod
    def export_series(series: MatchSeries, out_dir: str | Path) -> list[Path]:
        """导出对局序列: 每场结果 CSV 与累计收益曲线 CSV"""
        out_dir = Path(out_dir)
        return [
            Exporter.write_csv(Exporter.matches_frame(series), out_dir / "matches.csv"),
            Exporter.write_csv(Exporter.cumulative_frame(series), out_dir / "cumulative.csv"),
        ]

    @staticmethod
    def export_sweep(result: SweepResult, out_dir: str | Path) -> list[Path]:
        """导出权重扫描矩阵 CSV 与 JSON 报告"""
        out_dir = Path(out_dir)
        return [
            Exporter.write_csv(Exporter.sweep_frame(result), out_dir / "sweep_matrix.csv", index=True),
            IOUtils.atomic_write_text(out_dir / "sweep_report.json", result.model_dump_json(indent=2) + "\n"),
        ]


__all__ = ["Exporter"]
