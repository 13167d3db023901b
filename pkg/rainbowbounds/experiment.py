"""
ランダムな辺彩色グラフでの実験と、上界表のCSV出力
"""

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, repeat
from math import comb
from typing import Optional

import numpy as np
import pandas as pd
import yaml
from tqdm import tqdm

from .config import DEFAULT_K_MAX
from .data import Triple
from .formatter import type_checker_integer, type_checker_range
from .graph import (
    EdgeColoredGraph,
    bound_inputs,
    find_rainbow_triangle,
    goodman_lower_bound,
    refined_lower_bound,
    triangle_count,
)
from .happy import build_dp_table

logger = logging.getLogger(__name__)

EMPIRICAL_LABEL = "empirical - random instances only"
BOUND_TABLE_COLUMNS = ["k", "l", "bound"]


@dataclass(frozen=True)
class ExperimentConfig:
    """
    ## Summary:
        ランダム実験の設定。num_colors 個の色クラスがそれぞれ class_size 本の辺を持つ。
    Args:
        n (int):
            頂点数
        num_colors (int):
            色の数（約 α n）
        class_size (int):
            1色あたりの辺数（約 β n）
        seed (int):
            64ビットの乱数シード
        trials (int):
            試行回数（0以上）
    """

    n: int
    num_colors: int
    class_size: int
    seed: int
    trials: int

    def __post_init__(self):
        for name in ("n", "num_colors", "class_size"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if not (0 <= self.seed < 2**64):
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.trials < 0:
            raise ValueError(f"trials must be non-negative, got {self.trials}")
        if self.num_colors * self.class_size > comb(self.n, 2):
            raise ValueError(
                f"{self.num_colors} colors x {self.class_size} edges exceed the "
                f"{comb(self.n, 2)} edges of K_{self.n}"
            )

    def to_dict(self) -> dict[str, int]:
        return {
            "n": self.n,
            "num_colors": self.num_colors,
            "class_size": self.class_size,
            "seed": self.seed,
            "trials": self.trials,
        }


@dataclass(frozen=True)
class TrialOutcome:
    """1回の試行の結果"""

    trial: int
    found: bool
    witness: Optional[Triple]
    triangles: int
    goodman_bound: Fraction
    refined_bound: Fraction

    def to_dict(self) -> dict:
        return {
            "trial": self.trial,
            "found": self.found,
            "witness": None if self.witness is None else list(self.witness),
            "triangles": self.triangles,
            "goodman_bound": float(self.goodman_bound),
            "refined_bound": float(self.refined_bound),
        }


@dataclass(frozen=True)
class ExperimentReport:
    """
    ## Summary:
        実験結果の集計。rate は試行回数が0の場合 None。
        ランダムなインスタンスに対する経験的な結果であり、証明ではない。
    """

    config: ExperimentConfig
    outcomes: tuple[TrialOutcome, ...]
    wall_time: float = field(compare=False)
    label: str = EMPIRICAL_LABEL

    @property
    def found(self) -> int:
        return sum(1 for o in self.outcomes if o.found)

    @property
    def rate(self) -> Optional[float]:
        if not self.outcomes:
            return None
        return self.found / len(self.outcomes)

    def to_dict(self, include_timing: bool = False) -> dict:
        data = {
            "label": self.label,
            "config": self.config.to_dict(),
            "found": self.found,
            "rate": self.rate,
            "trials": [o.to_dict() for o in self.outcomes],
        }
        if include_timing:
            data["wall_time"] = self.wall_time
        return data

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for o in self.outcomes:
            u, v, w = o.witness if o.witness is not None else (None, None, None)
            rows.append(
                (
                    o.trial,
                    o.found,
                    u,
                    v,
                    w,
                    o.triangles,
                    float(o.goodman_bound),
                    float(o.refined_bound),
                )
            )
        return pd.DataFrame(
            rows,
            columns=[
                "trial",
                "found",
                "u",
                "v",
                "w",
                "triangles",
                "goodman_bound",
                "refined_bound",
            ],
        )

    def __str__(self) -> str:
        return yaml.dump(self.to_dict(), sort_keys=False)


def random_generator(seed: int, trial: int) -> np.random.Generator:
    """(seed, trial) から決まる PCG64 の乱数生成器"""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, trial])))


@type_checker_integer(arg_index=1, kward="trial")
@type_checker_range(arg_index=1, kward="trial", lower=0)
def generate_instance(cfg: ExperimentConfig, trial: int) -> EdgeColoredGraph:
    """
    ## Summary:
        K_n の辺から num_colors * class_size 本を非復元抽出し、先頭から
        class_size 本ずつ色 0, 1, ... を割り当てる。辺は (u, v) の辞書順で番号付けする。
        同じ (seed, trial) からは同じインスタンスが得られる。
    Args:
        cfg (ExperimentConfig):
            実験の設定
        trial (int):
            試行番号
    Returns:
        EdgeColoredGraph:
            生成した辺彩色グラフ
    """
    pairs = list(combinations(range(cfg.n), 2))
    rng = random_generator(cfg.seed, trial)
    picked = rng.choice(len(pairs), size=cfg.num_colors * cfg.class_size, replace=False)
    colored = [
        (*pairs[int(index)], position // cfg.class_size)
        for position, index in enumerate(picked)
    ]
    return EdgeColoredGraph.from_colored_edges(cfg.n, colored)


def run_trial(cfg: ExperimentConfig, trial: int) -> TrialOutcome:
    ecg = generate_instance(cfg, trial)
    witness = find_rainbow_triangle(ecg)
    inputs = bound_inputs(ecg.graph)
    triangles = triangle_count(ecg.graph)
    goodman = goodman_lower_bound(inputs.n, inputs.m)
    refined = refined_lower_bound(inputs)
    if not (triangles >= refined >= goodman):
        logger.error(
            "trial %d: triangle bounds out of order (%d, %s, %s)",
            trial,
            triangles,
            refined,
            goodman,
        )
    return TrialOutcome(
        trial=trial,
        found=witness is not None,
        witness=witness,
        triangles=triangles,
        goodman_bound=goodman,
        refined_bound=refined,
    )


def run_experiment(
    cfg: ExperimentConfig, workers: int = 1, progress: bool = False
) -> ExperimentReport:
    """
    ## Summary:
        各試行でインスタンスを生成して虹色三角形を探し、結果を集計する。
        workers > 1 の場合はプロセスプールで並列に実行する。結果は試行番号順。
    Args:
        cfg (ExperimentConfig):
            実験の設定
        workers (int):
            並列に実行するプロセス数
        progress (bool):
            tqdm で進捗を表示するかどうか
    Returns:
        ExperimentReport:
            集計結果
    """
    if workers < 1:
        raise ValueError(f"workers must be positive, got {workers}")
    if cfg.trials == 0:
        logger.warning("experiment with 0 trials: rate is undefined")
    start = time.perf_counter()
    trials = range(cfg.trials)
    if workers == 1:
        outcomes = [
            run_trial(cfg, trial)
            for trial in tqdm(trials, disable=not progress, desc="trials")
        ]
    else:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            outcomes = list(
                tqdm(
                    executor.map(run_trial, repeat(cfg), trials),
                    total=cfg.trials,
                    disable=not progress,
                    desc="trials",
                )
            )
    wall_time = time.perf_counter() - start
    report = ExperimentReport(config=cfg, outcomes=tuple(outcomes), wall_time=wall_time)
    logger.info("%d/%d trials found a rainbow triangle", report.found, cfg.trials)
    return report


def bound_table_frame(k_max: int = DEFAULT_K_MAX) -> pd.DataFrame:
    if k_max < 3:
        raise ValueError(f"k_max must be at least 3, got {k_max}")
    return build_dp_table(k_max).to_frame(k_min=3)


@type_checker_integer(arg_index=0, kward="k_max")
@type_checker_range(arg_index=0, kward="k_max", lower=3)
def emit_bound_table(k_max: int, path: str) -> pd.DataFrame:
    """
    ## Summary:
        l = ceil(k/2) の上界表を "k,l,bound" 形式の CSV に書き出す。
        k_max = 103 の場合、同梱の happy_bounds.csv と一致する。
    Args:
        k_max (int):
            辺数の最大値（3以上）
        path (str):
            出力先のパス
    Returns:
        pd.DataFrame:
            書き出した表
    """
    frame = bound_table_frame(k_max)
    try:
        frame.to_csv(path, index=False, lineterminator="\n")
    except OSError as e:
        raise OSError(f"Cannot write bound table '{path}': {e}") from e
    logger.info("bound table with %d rows written to %s", len(frame), path)
    return frame


def load_bound_table(path: str) -> pd.DataFrame:
    """emit_bound_table が書き出した CSV を読み込む"""
    try:
        frame = pd.read_csv(path, dtype="int64")
    except OSError as e:
        raise OSError(f"Cannot read bound table '{path}': {e}") from e
    if list(frame.columns) != BOUND_TABLE_COLUMNS:
        raise ValueError(
            f"Bound table '{path}' must have columns {BOUND_TABLE_COLUMNS}, "
            f"got {list(frame.columns)}"
        )
    return frame


emit_table1 = emit_bound_table
