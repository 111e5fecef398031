from pathlib import Path

class Paths:
    """项目路径类
    
    包含项目中常用路径
    """

    ROOT = Path(__file__).parent.parent.parent
    
    # 数据目录
    DATA = ROOT / "data"
    RESULTS = DATA / "results"
    LOGS = ROOT / "logs"

    # 源代码目录
    SRC = ROOT / "MahjongSolver"
    CONFIG = SRC / "config"
    SCORE_RULES_FILE = CONFIG / "score_rules.env"


__all__ = ["Paths"]
