"""
単純グラフと辺彩色グラフ、および三角形に関する数え上げと下界の定義
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from types import MappingProxyType
from typing import Iterable, Mapping, Optional

import yaml

from .data import TriangleBoundInputs, Triple, TripleCensus
from .formatter import type_checker_integer, type_checker_range

logger = logging.getLogger(__name__)

Edge = tuple[int, int]


def _normalize_edge(u: int, v: int, n: int) -> Edge:
    u, v = int(u), int(v)
    if u == v:
        raise ValueError(f"Loop at vertex {u} is not allowed in a simple graph")
    if not (0 <= u < n and 0 <= v < n):
        raise ValueError(f"Edge ({u}, {v}) has a vertex outside 0..{n - 1}")
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """
    ## Summary:
        頂点 0..n-1 上の単純無向グラフ。生成後は変更できない。
        孤立点も表現できる。
    Args:
        n (int):
            頂点数
        edges (frozenset[tuple[int, int]]):
            u < v に正規化された辺の集合
    """

    n: int
    edges: frozenset
    adjacency: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"n must be non-negative, got {self.n}")
        object.__setattr__(self, "edges", frozenset(self.edges))
        adjacency: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            if _normalize_edge(u, v, self.n) != (u, v):
                raise ValueError(f"Edge ({u}, {v}) must satisfy u < v")
            adjacency[u].add(v)
            adjacency[v].add(u)
        object.__setattr__(
            self, "adjacency", tuple(frozenset(nbrs) for nbrs in adjacency)
        )

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Edge]) -> "Graph":
        """
        ## Summary:
            辺のリストからグラフを生成する。向きは正規化し、重複辺はエラーとする。
        Args:
            n (int):
                頂点数
            edges (Iterable[tuple[int, int]]):
                辺のリスト
        Returns:
            Graph:
                生成したグラフ
        """
        normalized: set[Edge] = set()
        for u, v in edges:
            edge = _normalize_edge(u, v, n)
            if edge in normalized:
                raise ValueError(f"Parallel edge {edge} is not allowed")
            normalized.add(edge)
        return cls(n=int(n), edges=frozenset(normalized))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n=n, edges=frozenset())

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(n=n, edges=frozenset(combinations(range(n), 2)))

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    @property
    def degrees(self) -> list[int]:
        return [len(nbrs) for nbrs in self.adjacency]

    @property
    def max_degree(self) -> int:
        return max(self.degrees, default=0)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]

    def add_edge(self, u: int, v: int) -> "Graph":
        """辺を1本追加した新しいグラフを返す"""
        edge = _normalize_edge(u, v, self.n)
        if edge in self.edges:
            raise ValueError(f"Edge {edge} already exists")
        return Graph(n=self.n, edges=self.edges | {edge})

    def __str__(self) -> str:
        data = {
            "type": "Graph",
            "n": self.n,
            "m": self.m,
            "max_degree": self.max_degree,
            "edges": [list(e) for e in self.sorted_edges],
        }
        return yaml.dump(data, sort_keys=False)


@dataclass(frozen=True)
class EdgeColoredGraph:
    """
    ## Summary:
        各辺に色（非負整数）を1つ割り当てたグラフ。彩色は proper でなくてよい。
    Args:
        graph (Graph):
            下敷きとなる単純グラフ
        colors (Mapping[tuple[int, int], int]):
            辺から色への写像。graph の全ての辺をちょうど覆うこと。
    """

    graph: Graph
    colors: Mapping = field(hash=False)

    def __post_init__(self):
        colors = dict(self.colors)
        if set(colors) != set(self.graph.edges):
            missing = sorted(set(self.graph.edges) - set(colors))
            extra = sorted(set(colors) - set(self.graph.edges))
            raise ValueError(
                f"Coloring must cover exactly the edge set (missing={missing[:5]}, "
                f"extra={extra[:5]})"
            )
        for edge, color in colors.items():
            if int(color) != color or color < 0:
                raise ValueError(f"Color of {edge} must be a non-negative integer")
        object.__setattr__(self, "colors", MappingProxyType(colors))

    @classmethod
    def from_colored_edges(
        cls, n: int, colored_edges: Iterable[tuple[int, int, int]]
    ) -> "EdgeColoredGraph":
        triples = [(int(u), int(v), int(c)) for u, v, c in colored_edges]
        graph = Graph.from_edges(n, [(u, v) for u, v, _ in triples])
        colors = {_normalize_edge(u, v, n): c for u, v, c in triples}
        return cls(graph=graph, colors=colors)

    def color_of(self, u: int, v: int) -> int:
        return self.colors[(u, v) if u < v else (v, u)]

    def color_classes(self) -> dict[int, list[Edge]]:
        """色ごとの辺リスト（辺集合の分割）"""
        classes: dict[int, list[Edge]] = {}
        for edge in self.graph.sorted_edges:
            classes.setdefault(self.colors[edge], []).append(edge)
        return dict(sorted(classes.items()))

    @property
    def num_colors(self) -> int:
        return len(set(self.colors.values()))

    def __str__(self) -> str:
        data = {
            "type": "EdgeColoredGraph",
            "n": self.graph.n,
            "m": self.graph.m,
            "num_colors": self.num_colors,
            "class_sizes": {c: len(es) for c, es in self.color_classes().items()},
        }
        return yaml.dump(data, sort_keys=False)


def _triangles_at_edges(g: Graph):
    adj = g.adjacency
    for u, v in g.sorted_edges:
        for w in sorted(adj[u] & adj[v]):
            if w > v:
                yield u, v, w


def triangle_count(g: Graph) -> int:
    """
    ## Summary:
        三角形の個数を数える。辺 (u, v) ごとに近傍の共通部分を取り、
        最大の頂点 w > v のみを数えるので各三角形は1回だけ数えられる。
    Args:
        g (Graph):
            対象のグラフ
    Returns:
        int:
            三角形の個数
    """
    adj = g.adjacency
    return sum(
        sum(1 for w in adj[u] & adj[v] if w > v) for u, v in g.edges
    )


def induced_h_count(g: Graph) -> int:
    """
    ## Summary:
        辺をちょうど1本含む3頂点の組の個数を数える。
        辺 uv に対して、u にも v にも隣接しない頂点が第3の頂点となる。
    Args:
        g (Graph):
            対象のグラフ
    Returns:
        int:
            誘導部分グラフとしての「1辺＋孤立点」の個数
    """
    adj = g.adjacency
    # N(u) ∪ N(v) は u, v 自身を含む
    return sum(g.n - len(adj[u] | adj[v]) for u, v in g.edges)


def happy_triple_count(g: Graph) -> int:
    """
    ## Summary:
        2本以上の辺を誘導する3頂点の組（happy triple）の個数を数える。
        各頂点を中心とする2辺の組 C(deg, 2) の総和は、2辺の組を1回、
        三角形を3回数えるので、三角形の2倍を引く。
    Args:
        g (Graph):
            対象のグラフ
    Returns:
        int:
            happy triple の個数
    """
    cherries = sum(comb(d, 2) for d in g.degrees)
    return cherries - 2 * triangle_count(g)


def empty_triple_count(g: Graph) -> int:
    return comb(g.n, 3) - happy_triple_count(g) - induced_h_count(g)


def triple_census(g: Graph) -> TripleCensus:
    """誘導される辺の本数（0〜3本）ごとに3頂点の組を数える"""
    triangles = triangle_count(g)
    cherries = sum(comb(d, 2) for d in g.degrees)
    one_edge = induced_h_count(g)
    two_edges = cherries - 3 * triangles
    empty = comb(g.n, 3) - one_edge - two_edges - triangles
    return TripleCensus(
        empty=empty, one_edge=one_edge, two_edges=two_edges, triangles=triangles
    )


@type_checker_integer(arg_index=0, kward="n")
@type_checker_integer(arg_index=1, kward="m")
@type_checker_range(arg_index=0, kward="n", lower=1)
@type_checker_range(arg_index=1, kward="m", lower=0)
def goodman_lower_bound(n: int, m: int) -> Fraction:
    """
    ## Summary:
        n 頂点 m 辺のグラフの三角形数に対する古典的な下界
        (4m / 3n)(m - n^2 / 4) を有理数で返す。負になることもある。
    Args:
        n (int):
            頂点数（1以上）
        m (int):
            辺数
    Returns:
        Fraction:
            下界の値
    """
    return Fraction(4 * m, 3 * n) * (m - Fraction(n * n, 4))


def refined_lower_bound(inp: TriangleBoundInputs) -> Fraction:
    """
    ## Summary:
        1辺の誘導部分グラフの個数 h を加味した下界 h/3 + (4m / 3n)(m - n^2 / 4)。
        h >= 0 なので常に goodman_lower_bound 以上となる。
    Args:
        inp (TriangleBoundInputs):
            頂点数・辺数・h
    Returns:
        Fraction:
            下界の値
    """
    inp = TriangleBoundInputs(*inp).validate()
    return Fraction(inp.h, 3) + goodman_lower_bound(inp.n, inp.m)


def bound_inputs(g: Graph) -> TriangleBoundInputs:
    return TriangleBoundInputs(n=g.n, m=g.m, h=induced_h_count(g))


def find_rainbow_triangle(ecg: EdgeColoredGraph) -> Optional[Triple]:
    """
    ## Summary:
        3辺の色がすべて異なる三角形を1つ探す。辺を昇順に走査するので結果は決定的。
    Args:
        ecg (EdgeColoredGraph):
            辺彩色グラフ
    Returns:
        Triple | None:
            見つかった三角形 (u < v < w)。存在しない場合は None。
    """
    colors = ecg.colors
    for u, v, w in _triangles_at_edges(ecg.graph):
        c_uv, c_uw, c_vw = colors[(u, v)], colors[(u, w)], colors[(v, w)]
        if c_uv != c_uw and c_uv != c_vw and c_uw != c_vw:
            return Triple(u, v, w)
    return None


def find_all_rainbow_triangles(ecg: EdgeColoredGraph) -> list[Triple]:
    """全ての3頂点組を調べて虹色三角形を列挙する（検算用）"""
    g = ecg.graph
    found = []
    for u, v, w in combinations(range(g.n), 3):
        if g.has_edge(u, v) and g.has_edge(u, w) and g.has_edge(v, w):
            if len({ecg.color_of(u, v), ecg.color_of(u, w), ecg.color_of(v, w)}) == 3:
                found.append(Triple(u, v, w))
    return found


# ---------------------------------------------------------------------------
# テキスト形式の入出力
# 1行目 "n m"、続く m 行が "u v"（彩色版は "u v c"）
# ---------------------------------------------------------------------------


def _parse_rows(text: str, width: int) -> tuple[int, list[tuple[int, ...]]]:
    lines = [(i + 1, line.split()) for i, line in enumerate(text.split("\n"))]
    lines = [(no, tokens) for no, tokens in lines if tokens]
    if not lines:
        raise ValueError("Graph text is empty")
    header_no, header = lines[0]
    if len(header) != 2:
        raise ValueError(f"Line {header_no}: header must be 'n m', got {header}")
    try:
        n, m = int(header[0]), int(header[1])
    except ValueError as e:
        raise ValueError(f"Line {header_no}: header must hold two integers") from e
    rows = []
    for no, tokens in lines[1:]:
        if len(tokens) != width:
            raise ValueError(
                f"Line {no}: expected {width} integers per edge line, got {tokens}"
            )
        try:
            rows.append(tuple(int(tok) for tok in tokens))
        except ValueError as e:
            raise ValueError(f"Line {no}: non-integer token in {tokens}") from e
    if len(rows) != m:
        raise ValueError(f"Header declares {m} edges but {len(rows)} edge lines found")
    return n, rows


def parse_graph(text: str) -> Graph:
    n, rows = _parse_rows(text, width=2)
    return Graph.from_edges(n, rows)


def parse_colored_graph(text: str) -> EdgeColoredGraph:
    n, rows = _parse_rows(text, width=3)
    return EdgeColoredGraph.from_colored_edges(n, rows)


def format_graph(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"] + [f"{u} {v}" for u, v in g.sorted_edges]
    return "\n".join(lines) + "\n"


def format_colored_graph(ecg: EdgeColoredGraph) -> str:
    g = ecg.graph
    lines = [f"{g.n} {g.m}"] + [
        f"{u} {v} {ecg.colors[(u, v)]}" for u, v in g.sorted_edges
    ]
    return "\n".join(lines) + "\n"


def _read_text(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as f:
            return f.read()
    except OSError as e:
        raise OSError(f"Cannot read graph file '{path}': {e}") from e


def _write_text(text: str, path: str) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    except OSError as e:
        raise OSError(f"Cannot write graph file '{path}': {e}") from e
    logger.info("graph written to %s", path)


def read_graph(path: str) -> Graph:
    return parse_graph(_read_text(path))


def read_colored_graph(path: str) -> EdgeColoredGraph:
    return parse_colored_graph(_read_text(path))


def write_graph(g: Graph, path: str) -> None:
    _write_text(format_graph(g), path)


def write_colored_graph(ecg: EdgeColoredGraph, path: str) -> None:
    _write_text(format_colored_graph(ecg), path)
