"""
各種設定の定義
"""

import logging
import os
from dataclasses import dataclass, field, fields, replace
from typing import Any, Optional

import yaml

logger = logging.getLogger(__name__)

# 有向三角形を保証する最小出次数の割合（既知の最良値）
CH_CONSTANT = 0.3465
# 狭義不等式の判定に使う余裕
DEFAULT_MARGIN = 1e-9
# 補題の検証対象となる辺数の上限
DEFAULT_K_MAX = 103
# DP 表の大きさ。k は 0..DP_RANGE-1 まで扱える
DP_RANGE = 200
# 総当たりで扱う辺数の上限
ORACLE_MAX_K = 7
ORACLE_MAX_N_CAP = 10

# 探索の既定値
EPS_GRID = 4000
DELTA_BRACKET = (0.0, 4.0)
T_BRACKET = (0.25, 0.5)
BISECT_TOL = 1e-6
T_TOL = 1e-7
T_GRID = (200, 200)
REFINE_ROUNDS = 3
REFINE_GRID = 200

ENV_MARGIN = "RAINBOW_BOUNDS_MARGIN"
ENV_CONFIG = "RAINBOW_BOUNDS_CONFIG"


@dataclass(frozen=True)
class Settings:
    """
    ## Summary:
        上書き可能な設定値をまとめたデータクラス
    Args:
        margin (float):
            狭義不等式の余裕。残差がこの値を超えた場合のみ満たすとみなす。
        ch_constant (float):
            出次数条件に使う定数。
        eps_grid (int):
            ε 方向のグリッド点数。
        bisect_tol (float):
            δ の二分探索の許容誤差。
        t_tol (float):
            t の二分探索の許容誤差。
        t_grid (tuple[int, int]):
            t 最小化で使う (ε, δ) グリッドの点数。
        refine_rounds (int):
            粗いグリッドの後に行う局所的な再探索の回数。
    """

    margin: float = DEFAULT_MARGIN
    ch_constant: float = CH_CONSTANT
    eps_grid: int = EPS_GRID
    bisect_tol: float = BISECT_TOL
    t_tol: float = T_TOL
    t_grid: tuple[int, int] = field(default=T_GRID)
    refine_rounds: int = REFINE_ROUNDS

    def __post_init__(self):
        if self.margin < 0:
            raise ValueError(f"margin must be non-negative, got {self.margin}")
        if not (0 < self.ch_constant < 0.5):
            raise ValueError(
                f"ch_constant must be in (0, 0.5), got {self.ch_constant}"
            )
        if self.eps_grid < 100:
            raise ValueError(f"eps_grid must be at least 100, got {self.eps_grid}")
        if self.bisect_tol <= 0 or self.t_tol <= 0:
            raise ValueError("bisection tolerances must be positive")

    def __str__(self) -> str:
        data = {f.name: getattr(self, f.name) for f in fields(self)}
        data["t_grid"] = list(self.t_grid)
        return yaml.dump(data, sort_keys=False)


def _margin_from_env() -> Optional[float]:
    raw = os.environ.get(ENV_MARGIN)
    if raw is None or raw.strip() == "":
        return None
    try:
        margin = float(raw)
    except ValueError as e:
        raise ValueError(f"{ENV_MARGIN} must be a float, got '{raw}'") from e
    if margin < 0:
        raise ValueError(f"{ENV_MARGIN} must be non-negative, got {margin}")
    return margin


def _read_yaml(path: str) -> dict[str, Any]:
    try:
        with open(path, encoding="utf-8") as f:
            data = yaml.safe_load(f) or {}
    except OSError as e:
        raise OSError(f"Cannot read settings file '{path}': {e}") from e
    if not isinstance(data, dict):
        raise ValueError(f"Settings file '{path}' must contain a mapping")
    known = {f.name for f in fields(Settings)}
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"Unknown settings in '{path}': {sorted(unknown)}")
    if "t_grid" in data:
        data["t_grid"] = tuple(int(v) for v in data["t_grid"])
    return data


def load_settings(path: Optional[str] = None) -> Settings:
    """
    ## Summary:
        既定値から始めて、YAMLファイルと環境変数で上書きした設定を返す関数。
        優先順位は 環境変数 RAINBOW_BOUNDS_MARGIN > YAMLファイル > 既定値。
    Args:
        path (str, optional):
            YAMLファイルのパス。None の場合は環境変数 RAINBOW_BOUNDS_CONFIG を参照する。
    Returns:
        Settings:
            設定値
    """
    settings = Settings()
    path = path or os.environ.get(ENV_CONFIG)
    if path:
        settings = replace(settings, **_read_yaml(path))
        logger.debug("settings loaded from %s", path)
    margin = _margin_from_env()
    if margin is not None:
        settings = replace(settings, margin=margin)
    return settings


def default_margin() -> float:
    """環境変数を考慮した既定の余裕"""
    margin = _margin_from_env()
    return DEFAULT_MARGIN if margin is None else margin
