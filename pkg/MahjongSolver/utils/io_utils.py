import os
from pathlib import Path
import tempfile
import logging

logger = logging.getLogger(__name__)


class IOUtils:
    """文件输出工具类"""

    def __new__(cls):
        # 禁止实例化
        raise TypeError("IOUtils类不可被实例化")

    @staticmethod
    def atomic_write_text(path: str | Path, text: str) -> Path:
        """原子写入文本文件

        先写入同目录下的临时文件, 再通过 rename 替换目标文件, 中断时不会留下截断的文件

        Args:
            path: 目标文件路径
            text: 文件内容

        Returns:
            目标文件路径
        """
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
                f.write(text)
            os.replace(tmp_name, path)
        except BaseException:
            # 写入失败时清理临时文件
            if os.path.exists(tmp_name):
                os.unlink(tmp_name)
            raise
        logger.info(f"已写入文件: {path}")
        return path


__all__ = ["IOUtils"]
