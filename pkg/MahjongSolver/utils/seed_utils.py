import numpy as np


class SeedUtils:
    """种子派生工具类

    由主种子派生子种子的规则: 第 i 个子种子为
    SeedSequence(master, spawn_key=(i,)) 生成的第一个 uint64。
    子种子只依赖 (master, i), 与派生顺序和并行方式无关。
    """

    def __new__(cls):
        # 禁止实例化
        raise TypeError("SeedUtils类不可被实例化")

    @staticmethod
    def child_seed(master_seed: int, index: int) -> int:
        """派生第 index 个子种子

        Args:
            master_seed: 64 位非负主种子
            index: 子种子序号
        """
        if master_seed < 0 or index < 0:
            raise ValueError("主种子和序号必须为非负整数")
        sequence = np.random.SeedSequence(master_seed, spawn_key=(index,))
        return int(sequence.generate_state(1, dtype=np.uint64)[0])

    @staticmethod
    def child_seeds(master_seed: int, count: int, start: int = 0) -> list[int]:
        """派生连续 count 个子种子"""
        return [SeedUtils.child_seed(master_seed, start + i) for i in range(count)]


__all__ = ["SeedUtils"]
