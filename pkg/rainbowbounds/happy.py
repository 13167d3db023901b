"""
最大次数を制限したグラフにおける happy triple の上界に関するクラスと関数の定義
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Optional, Union

import networkx as nx
import numpy as np
import pandas as pd
import yaml
from tqdm import tqdm

from .config import DEFAULT_K_MAX, DP_RANGE, ORACLE_MAX_K, ORACLE_MAX_N_CAP
from .data import Violation
from .formatter import type_checker_integer, type_checker_range
from .graph import Graph, format_graph, happy_triple_count

logger = logging.getLogger(__name__)

Number = Union[int, float, Fraction]


@dataclass(frozen=True)
class ConvexBound:
    """
    ## Summary:
        f_k(x) = x(x-1)/2 + (k-x+1)(k-x)/2 を表すクラス。
        f_k は凸関数で、x = (k+1)/2 で唯一の最小値をとり、f_k(x) = f_k(k+1-x) を満たす。
    Args:
        k (int | float):
            辺数。実数のパラメータとして扱う。
    """

    k: Number

    def evaluate(self, x: Number) -> Number:
        k = self.k
        return x * (x - 1) / 2 + (k - x + 1) * (k - x) / 2

    def derivative(self, x: Number) -> Number:
        return 2 * x - (self.k + 1)

    @property
    def argmin(self) -> float:
        return (self.k + 1) / 2


@type_checker_integer(arg_index=0, kward="k")
@type_checker_range(arg_index=0, kward="k", lower=1)
def convex_argmin(k: int) -> float:
    """f_k の最小点 (k+1)/2"""
    return ConvexBound(k).argmin


@type_checker_integer(arg_index=0, kward="k")
@type_checker_integer(arg_index=1, kward="l")
@type_checker_range(arg_index=0, kward="k", lower=1)
@type_checker_range(arg_index=1, kward="l", lower=1)
def f_bound(k: int, l: int) -> int:  # noqa: E741
    """
    ## Summary:
        k 辺・最大次数 l (l >= k/2) のグラフの happy triple 数の上界
        C(l, 2) + C(k-l+1, 2) を整数で返す。
    Args:
        k (int):
            辺数
        l (int):
            最大次数の上限。1 <= l <= k。
    Returns:
        int:
            上界の値
    """
    if l > k:
        raise ValueError(f"Argument 'l' must satisfy l <= k = {k}, got {l}")
    return comb(l, 2) + comb(k - l + 1, 2)


def _ceil_half(k: int) -> int:
    return (k + 1) // 2


@dataclass(frozen=True)
class DpTable:
    """
    ## Summary:
        動的計画法で求めた上界の表。entries[k, l] は k 辺・最大次数 l 以下の
        グラフの happy triple 数の上界。witness_j[k, l] はその値を与えた
        最大次数 j（同値の場合は最大の j）。
    Args:
        k_max (int):
            表が扱う辺数の最大値
        entries (np.ndarray):
            (k_max+1) x (k_max+1) の整数配列
        witness_j (np.ndarray):
            entries と同じ形の整数配列
    """

    k_max: int
    entries: np.ndarray
    witness_j: np.ndarray

    def entry(self, k: int, l: int) -> int:  # noqa: E741
        return int(self.entries[k, l])

    def witness(self, k: int, l: int) -> int:  # noqa: E741
        return int(self.witness_j[k, l])

    def ceil_rows(
        self, k_min: int = 3, k_max: Optional[int] = None
    ) -> list[tuple[int, int, int]]:
        """l = ceil(k/2) の行 (k, l, bound) のリスト"""
        k_max = self.k_max if k_max is None else k_max
        if k_max > self.k_max:
            raise ValueError(f"k_max={k_max} exceeds the table size {self.k_max}")
        return [
            (k, _ceil_half(k), self.entry(k, _ceil_half(k)))
            for k in range(k_min, k_max + 1)
        ]

    def to_frame(self, k_min: int = 3, k_max: Optional[int] = None) -> pd.DataFrame:
        rows = self.ceil_rows(k_min, k_max)
        return pd.DataFrame(rows, columns=["k", "l", "bound"])


@type_checker_integer(arg_index=0, kward="k_max")
@type_checker_range(arg_index=0, kward="k_max", lower=2, upper=DP_RANGE - 1)
def build_dp_table(k_max: int = DEFAULT_K_MAX) -> DpTable:
    """
    ## Summary:
        happy triple 数の上界表を動的計画法で構築する。
        l >= k なら C(k, 2)（星 K_{1,k}）、l = 2 かつ k >= 4 なら k、
        それ以外は最大次数の頂点の次数 j について
        C(j, 2) + (k - j) + entries[k-j, j] の最大値をとる。
        l の外側ループ、k の内側ループの順に処理するので、
        必要な (k' < k, l' <= l) の値は常に計算済み。
    Args:
        k_max (int):
            辺数の最大値。2 以上 DP_RANGE-1 以下。
    Returns:
        DpTable:
            上界表
    """
    size = k_max + 1
    ar = [[0] * size for _ in range(size)]
    wj = [[min(k, l) for l in range(size)] for k in range(size)]  # noqa: E741
    for k in range(4, size):
        ar[k][2] = k
        wj[k][2] = 2
    for l in range(2, size):  # noqa: E741
        for k in range(2, size):
            # 既に設定済みの値は上書きしない
            if ar[k][l] > 0:
                continue
            if k <= l:
                ar[k][l] = comb(k, 2)
                wj[k][l] = k
                continue
            bid = 0
            good_j = -1
            for j in range(1, l + 1):
                happy = comb(j, 2) + k - j + ar[k - j][j]
                bid = max(bid, happy)
                if bid == happy:
                    good_j = j
            ar[k][l] = bid
            wj[k][l] = good_j
    entries = np.array(ar, dtype=np.int64)
    witness_j = np.array(wj, dtype=np.int64)
    entries.setflags(write=False)
    witness_j.setflags(write=False)
    logger.debug("dp table built for k_max=%d", k_max)
    return DpTable(k_max=k_max, entries=entries, witness_j=witness_j)


def verify_lemma(table: DpTable, k_max: Optional[int] = None) -> list[Violation]:
    """
    ## Summary:
        ceil(k/2) <= l <= k <= k_max の全ての (k, l) について、表の値が
        閉じた形の上界 f_bound(k, l) を超えていないかを整数で比較する。
    Args:
        table (DpTable):
            上界表
        k_max (int, optional):
            検証する辺数の最大値。None の場合は表の k_max。
    Returns:
        list[Violation]:
            上界を超えた (k, l) のリスト（(k, l) の昇順）。空なら補題が成り立つ。
    """
    k_max = table.k_max if k_max is None else int(k_max)
    if k_max > table.k_max:
        raise ValueError(f"k_max={k_max} exceeds the table size {table.k_max}")
    violations = []
    for k in range(1, k_max + 1):
        for l in range(_ceil_half(k), k + 1):  # noqa: E741
            value = table.entry(k, l)
            bound = f_bound(k, l)
            if value > bound:
                violations.append(Violation(k=k, l=l, value=value, bound=bound))
    if violations:
        logger.warning("%d violations found up to k=%d", len(violations), k_max)
    return violations


@dataclass(frozen=True)
class OracleResult:
    """
    ## Summary:
        総当たりで求めた happy triple 数の最大値
    Args:
        k (int):
            辺数
        l (int):
            最大次数の上限
        maximum (int):
            happy triple 数の最大値
        witness (Graph):
            最大値を与えるグラフ（n_cap 頂点、孤立点を含む）
        graphs_examined (int):
            調べた候補グラフの数
        n_cap (int):
            使用した頂点数の上限
        classes (int):
            k 辺のグラフの同型類の数
    """

    k: int
    l: int  # noqa: E741
    maximum: int
    witness: Graph
    graphs_examined: int
    n_cap: int
    classes: int

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "l": self.l,
            "maximum": self.maximum,
            "n_cap": self.n_cap,
            "graphs_examined": self.graphs_examined,
            "classes": self.classes,
            "witness": format_graph(self.witness),
        }

    def __str__(self) -> str:
        return yaml.dump(self.to_dict(), sort_keys=False)


def canonical_key(g: Graph) -> tuple:
    """
    ## Summary:
        同型不変なキー。次数と近傍の次数の多重集合の組を並べたもの。
        キーが同じでも同型とは限らないので、候補の絞り込みにのみ使う。
    """
    degrees = g.degrees
    return tuple(
        sorted(
            (degrees[v], tuple(sorted(degrees[w] for w in g.adjacency[v])))
            for v in range(g.n)
        )
    )


def _to_networkx(g: Graph) -> nx.Graph:
    nxg = nx.Graph()
    nxg.add_nodes_from(range(g.n))
    nxg.add_edges_from(g.sorted_edges)
    return nxg


@type_checker_integer(arg_index=0, kward="k")
@type_checker_integer(arg_index=1, kward="l")
@type_checker_integer(arg_index=2, kward="n_cap")
@type_checker_range(arg_index=0, kward="k", lower=1, upper=ORACLE_MAX_K)
@type_checker_range(arg_index=1, kward="l", lower=1)
@type_checker_range(arg_index=2, kward="n_cap", lower=3)
def brute_force_max_happy(
    k: int,
    l: int,  # noqa: E741
    n_cap: Optional[int] = None,
    progress: bool = False,
) -> OracleResult:
    """
    ## Summary:
        k 辺・最大次数 l 以下で n_cap 頂点に収まる全てのグラフを調べ、
        happy triple 数の最大値を求める。辺数 1 から順に、各同型類の代表に
        辺を1本加えた候補を作り、canonical_key のバケット内で networkx の
        同型判定を行って代表を1つに絞る。k 辺グラフから辺を1本除くと
        k-1 辺の代表のいずれかと同型になるので、全ての同型類が現れる。
    Args:
        k (int):
            辺数（1〜7）
        l (int):
            最大次数の上限
        n_cap (int, optional):
            頂点数の上限。既定値は max(3, min(2k, 10))。
        progress (bool):
            tqdm で進捗を表示するかどうか
    Returns:
        OracleResult:
            最大値と、それを与えるグラフ
    """
    if n_cap is None:
        n_cap = max(3, min(2 * k, ORACLE_MAX_N_CAP))
    pairs = list(combinations(range(n_cap), 2))
    level = [Graph.empty(n_cap)]
    examined = 0
    for size in tqdm(range(1, k + 1), desc="edges", disable=not progress):
        buckets: dict[tuple, list[nx.Graph]] = {}
        next_level = []
        for rep in level:
            degrees = rep.degrees
            for u, v in pairs:
                if rep.has_edge(u, v) or degrees[u] >= l or degrees[v] >= l:
                    continue
                examined += 1
                candidate = rep.add_edge(u, v)
                bucket = buckets.setdefault(canonical_key(candidate), [])
                nx_candidate = _to_networkx(candidate)
                if any(nx.is_isomorphic(nx_candidate, other) for other in bucket):
                    continue
                bucket.append(nx_candidate)
                next_level.append(candidate)
        level = next_level
        logger.debug("edges=%d classes=%d examined=%d", size, len(level), examined)
        if not level:
            raise ValueError(
                f"No graph with {k} edges and maximum degree <= {l} fits on "
                f"{n_cap} vertices"
            )
    counts = [happy_triple_count(g) for g in level]
    best = int(np.argmax(counts))
    return OracleResult(
        k=k,
        l=l,
        maximum=counts[best],
        witness=level[best],
        graphs_examined=examined,
        n_cap=n_cap,
        classes=len(level),
    )


@type_checker_integer(arg_index=0, kward="k")
@type_checker_integer(arg_index=1, kward="l")
@type_checker_range(arg_index=0, kward="k", lower=1)
@type_checker_range(arg_index=1, kward="l", lower=1)
def extremal_construction(k: int, l: int) -> Graph:  # noqa: E741
    """
    ## Summary:
        happy triple 数が f_bound(k, l) に一致するグラフを構成する。
        - l > k/2: 星 K_{1,l-1} と K_{1,k-l} の中心同士を辺で結んだグラフ
          （l = k のときは星 K_{1,k}）
        - l = k/2: 完全2部グラフ K_{2,l}（l >= 2 が必要）
    Args:
        k (int):
            辺数
        l (int):
            最大次数。k/2 <= l <= k。
    Returns:
        Graph:
            構成したグラフ。頂点 0, 1 が中心。
    """
    if 2 * l == k:
        if l < 2:
            raise ValueError("K_{2,l} needs l >= 2 to keep maximum degree l")
        edges = [(c, 2 + i) for c in (0, 1) for i in range(l)]
        return Graph.from_edges(l + 2, edges)
    if not (k < 2 * l <= 2 * k):
        raise ValueError(f"Arguments must satisfy k/2 <= l <= k, got k={k}, l={l}")
    first = [(0, 2 + i) for i in range(l - 1)]
    second = [(1, 1 + l + i) for i in range(k - l)]
    return Graph.from_edges(k + 1, first + second + [(0, 1)])
