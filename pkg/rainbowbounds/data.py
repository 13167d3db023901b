"""
Dataクラスの定義
"""

from typing import NamedTuple


class Triple(NamedTuple):
    """昇順に並んだ3頂点の組"""

    u: int
    v: int
    w: int


class TriangleBoundInputs(NamedTuple):
    """
    ## Summary:
        三角形数の下界の計算に使う値をまとめたクラス
    Args:
        n (int):
            頂点数
        m (int):
            辺数
        h (int):
            辺を1本だけ含む3頂点誘導部分グラフの個数
    """

    n: int
    m: int
    h: int = 0

    def validate(self) -> "TriangleBoundInputs":
        if self.n <= 0:
            raise ValueError(f"n must be positive, got {self.n}")
        if not (0 <= self.m <= self.n * (self.n - 1) // 2):
            raise ValueError(
                f"m must be in [0, n(n-1)/2] = [0, {self.n * (self.n - 1) // 2}]"
                f", got {self.m}"
            )
        h_max = self.m * max(self.n - 2, 0)
        if not (0 <= self.h <= h_max):
            raise ValueError(f"h must be in [0, m(n-2)] = [0, {h_max}], got {self.h}")
        return self


class TripleCensus(NamedTuple):
    """誘導される辺の本数ごとの3頂点組の個数"""

    empty: int
    one_edge: int
    two_edges: int
    triangles: int

    @property
    def happy(self) -> int:
        return self.two_edges + self.triangles


class ConditionResidual(NamedTuple):
    """
    ## Summary:
        不等式1本分の評価結果
    Args:
        name (str):
            条件の名前
        lhs (float):
            左辺の値
        rhs (float):
            右辺の値
        residual (float):
            満たす向きを正とした余裕
        strict (bool):
            狭義不等式かどうか
    """

    name: str
    lhs: float
    rhs: float
    residual: float
    strict: bool = True

    def satisfied(self, margin: float) -> bool:
        if self.strict:
            return self.residual > margin
        return self.residual >= -margin


class Violation(NamedTuple):
    """DPの値が閉じた形の上界を超えた (k, l)"""

    k: int
    l: int  # noqa: E741
    value: int
    bound: int
