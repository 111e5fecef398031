"""麻将引擎异常定义"""


class MahjongError(ValueError):
    """所有领域异常的基类"""


class TileParseError(MahjongError):
    """牌面记号无法解析"""

    def __init__(self, token: str) -> None:
        super().__init__(f"无法解析的牌面记号: {token!r}")
        self.token = token


class HandSizeError(MahjongError):
    """手牌张数不符合要求"""

    def __init__(self, expected: int, actual: int) -> None:
        super().__init__(f"手牌应为 {expected} 张, 实际为 {actual} 张")
        self.expected = expected
        self.actual = actual


class IllegalMoveError(MahjongError):
    """打出未持有的牌, 或摸取牌墙中不存在的牌"""


class WallExhaustedError(MahjongError):
    """牌墙已摸空"""


class NotWinningError(MahjongError):
    """对未和牌的手牌计分"""


class ConfigError(MahjongError):
    """配置文件或命令行参数不合法"""


__all__ = [
    "MahjongError",
    "TileParseError",
    "HandSizeError",
    "IllegalMoveError",
    "WallExhaustedError",
    "NotWinningError",
    "ConfigError",
]
