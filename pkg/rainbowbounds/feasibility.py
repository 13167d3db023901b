"""
虹色三角形の存在を保証する十分条件（不等式系）の判定と、パラメータの最小化
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional

import numpy as np
import pandas as pd
import yaml

from .config import (
    CH_CONSTANT,
    DELTA_BRACKET,
    EPS_GRID,
    BISECT_TOL,
    REFINE_GRID,
    REFINE_ROUNDS,
    T_BRACKET,
    T_GRID,
    T_TOL,
    default_margin,
)
from .data import ConditionResidual
from .formatter import (
    type_checker_float,
    type_checker_integer,
    type_checker_range,
    valid_names,
)

logger = logging.getLogger(__name__)

SURPLUS = "surplus"
CH = "ch"
SYSTEMS = (SURPLUS, CH)
# 報告に載せる定理番号と、CLI の --theorem の値
THEOREM_LABELS = {SURPLUS: "3.1", CH: "4.1"}
THEOREM_SYSTEMS = {"31": SURPLUS, "41": CH}


@dataclass(frozen=True)
class ParameterPoint:
    """
    ## Summary:
        不等式系のパラメータ (t, δ, ε)
    Args:
        t (float):
            色クラスの大きさの割合
        delta (float):
            色数の超過分の割合
        eps (float):
            0 < eps < 1/2
    """

    t: float
    delta: float
    eps: float

    def __post_init__(self):
        if not self.t > 0:
            raise ValueError(f"t must be positive, got {self.t}")
        if not (0 < self.eps < 0.5):
            raise ValueError(f"eps must be in (0, 0.5), got {self.eps}")
        if not math.isfinite(self.delta):
            raise ValueError(f"delta must be finite, got {self.delta}")

    @property
    def lam(self) -> float:
        """λ = sqrt(1 - 2ε)"""
        return math.sqrt(1 - 2 * self.eps)

    @property
    def alpha(self) -> float:
        """α = (t/2)(λ + 1)"""
        return self.t / 2 * (self.lam + 1)

    def check_identities(self, tol: float = 1e-10) -> bool:
        """λ^2 = 1 - 2ε と α^2 + (t - α)^2 = (1 - ε)t^2 が成り立つか"""
        lam_ok = abs(self.lam**2 + 2 * self.eps - 1) <= 1e-12
        target = (1 - self.eps) * self.t**2
        alpha = self.alpha
        lhs = alpha**2 + (self.t - alpha) ** 2
        return lam_ok and abs(lhs - target) <= tol * max(1.0, abs(target))

    def to_dict(self) -> dict[str, float]:
        return {"t": self.t, "delta": self.delta, "eps": self.eps}


@dataclass(frozen=True)
class FeasibilityReport:
    """
    ## Summary:
        1点における不等式系の評価結果
    Args:
        system (str):
            "surplus" または "ch"
        point (ParameterPoint):
            評価した点
        conditions (tuple[ConditionResidual, ...]):
            各不等式の評価結果
        feasible (bool):
            全ての不等式を満たすかどうか
        margin (float):
            狭義不等式の判定に使った余裕
        ch_constant (float, optional):
            出次数条件の定数（"ch" の場合のみ）
    """

    system: str
    point: ParameterPoint
    conditions: tuple[ConditionResidual, ...]
    feasible: bool
    margin: float
    ch_constant: Optional[float] = None

    @property
    def violated(self) -> list[str]:
        return [c.name for c in self.conditions if not c.satisfied(self.margin)]

    def to_dict(self) -> dict:
        return {
            "theorem": THEOREM_LABELS[self.system],
            "system": self.system,
            "point": self.point.to_dict(),
            "conditions": [c._asdict() for c in self.conditions],
            "feasible": self.feasible,
            "margin": self.margin,
            "ch_constant": self.ch_constant,
        }

    def __str__(self) -> str:
        return yaml.dump(self.to_dict(), sort_keys=False)


@dataclass(frozen=True)
class SearchResult:
    """
    ## Summary:
        最小化の結果。found が False の場合は実行可能な点が見つからなかった。
    Args:
        system (str):
            "surplus" または "ch"
        found (bool):
            実行可能な点が見つかったかどうか
        objective (float, optional):
            最小化した値（δ* または t*）
        point (ParameterPoint, optional):
            再評価で確認済みの点
        report (FeasibilityReport, optional):
            point における評価結果
        iterations (int):
            二分探索の反復回数の合計
        tolerance (float):
            二分探索の許容誤差
    """

    system: str
    found: bool
    objective: Optional[float]
    point: Optional[ParameterPoint]
    report: Optional[FeasibilityReport]
    iterations: int
    tolerance: float

    def to_dict(self) -> dict:
        return {
            "theorem": THEOREM_LABELS[self.system],
            "system": self.system,
            "found": self.found,
            "objective": self.objective,
            "point": None if self.point is None else self.point.to_dict(),
            "report": None if self.report is None else self.report.to_dict(),
            "iterations": self.iterations,
            "tolerance": self.tolerance,
        }

    def __str__(self) -> str:
        return yaml.dump(self.to_dict(), sort_keys=False)


# 各条件は (name, lhs, rhs, residual, strict)。residual > 0 が満たす向き。
# float と np.ndarray のどちらでも同じ式で評価する。
def surplus_conditions(t, delta, eps) -> list[tuple]:
    lam = np.sqrt(1 - 2 * eps)
    a = 1 + delta
    c1_lhs = (1 + delta - eps * delta) * t / 2
    c1_rhs = (4 / 3) * a * (t * a - 1 / 4)
    c2_lhs = (8 / (3 * t)) * (t * a - 1 / 4) * a + (t / 12) * (lam + 1) * (
        4 * (1 - eps) - (1 - lam) ** 2
    )
    c3_lhs = (16 / 3) * a
    c3_rhs = 2 / (3 * t) + 1
    return [
        ("triangle_budget", c1_lhs, c1_rhs, c1_rhs - c1_lhs, True),
        ("good_color_density", c2_lhs, a, c2_lhs - a, True),
        ("edge_density", c3_lhs, c3_rhs, c3_lhs - c3_rhs, True),
    ]


def ch_conditions(t, delta, eps, ch_constant) -> list[tuple]:
    d1_lhs = ((1 - eps) * t - delta) / (1 - delta)
    d2_rhs = 1 / 2 - (1 - eps) ** 2 * t**2
    d3_lhs = (8 / 3) * (t - 1 / 4)
    d3_rhs = (1 - delta * (2 * eps - 2 * eps**2)) * t
    d4_lhs = 1 + 2 * delta * eps**2
    d4_rhs = 4 * eps * delta
    return [
        ("ch_outdegree", d1_lhs, ch_constant, d1_lhs - ch_constant, False),
        ("two_concentrated", t, d2_rhs, t - d2_rhs, True),
        ("happy_budget", d3_lhs, d3_rhs, d3_lhs - d3_rhs, True),
        ("delta_cap", d4_lhs, d4_rhs, d4_lhs - d4_rhs, True),
    ]


def _all_satisfied(conditions: list[tuple], margin: float):
    ok = True
    for _, _, _, residual, strict in conditions:
        ok = ok & ((residual > margin) if strict else (residual >= -margin))
    return ok


def _report(
    system: str,
    point: ParameterPoint,
    conditions: list[tuple],
    margin: float,
    ch_constant: Optional[float] = None,
) -> FeasibilityReport:
    residuals = tuple(
        ConditionResidual(name, float(lhs), float(rhs), float(res), strict)
        for name, lhs, rhs, res, strict in conditions
    )
    feasible = all(r.satisfied(margin) for r in residuals)
    return FeasibilityReport(
        system=system,
        point=point,
        conditions=residuals,
        feasible=feasible,
        margin=margin,
        ch_constant=ch_constant,
    )


def _resolve_margin(margin: Optional[float]) -> float:
    if margin is None:
        return default_margin()
    margin = float(margin)
    if not margin >= 0:
        raise ValueError(f"margin must be non-negative, got {margin}")
    return margin


@type_checker_float(arg_index=0, kward="t")
@type_checker_float(arg_index=1, kward="delta")
@type_checker_float(arg_index=2, kward="eps")
@type_checker_range(arg_index=0, kward="t", lower=0, lower_open=True)
@type_checker_range(arg_index=1, kward="delta", lower=0, lower_open=True)
@type_checker_range(
    arg_index=2, kward="eps", lower=0, upper=0.5, lower_open=True, upper_open=True
)
def check_surplus_system(
    t: float, delta: float, eps: float, margin: Optional[float] = None
) -> FeasibilityReport:
    """
    ## Summary:
        約 (1+δ)n 色・各色 tn 本以上の辺彩色グラフに虹色三角形が存在するための
        十分条件（3本の狭義不等式）を評価する。
        - triangle_budget: (1+δ-εδ)t/2 < (4/3)(1+δ)(t(1+δ) - 1/4)
        - good_color_density:
            (8/(3t))(t(1+δ) - 1/4)(1+δ) + (t/12)(λ+1)(4(1-ε) - (1-λ)^2) > 1+δ
        - edge_density: (16/3)(1+δ) > 2/(3t) + 1
    Args:
        t (float):
            t > 0
        delta (float):
            δ > 0
        eps (float):
            0 < ε < 1/2
        margin (float, optional):
            狭義不等式の余裕。None の場合は既定値（環境変数で上書き可能）。
    Returns:
        FeasibilityReport:
            評価結果
    """
    margin = _resolve_margin(margin)
    point = ParameterPoint(t, delta, eps)
    return _report(SURPLUS, point, surplus_conditions(t, delta, eps), margin)


@type_checker_float(arg_index=0, kward="t")
@type_checker_float(arg_index=1, kward="delta")
@type_checker_float(arg_index=2, kward="eps")
@type_checker_float(arg_index=3, kward="ch_constant")
@type_checker_range(arg_index=0, kward="t", lower=0, lower_open=True)
@type_checker_range(arg_index=1, kward="delta", lower=0, upper=1, upper_open=True)
@type_checker_range(
    arg_index=2, kward="eps", lower=0, upper=0.5, lower_open=True, upper_open=True
)
@type_checker_range(
    arg_index=3,
    kward="ch_constant",
    lower=0,
    upper=0.5,
    lower_open=True,
    upper_open=True,
)
def check_ch_system(
    t: float,
    delta: float,
    eps: float,
    ch_constant: Optional[float] = None,
    margin: Optional[float] = None,
) -> FeasibilityReport:
    """
    ## Summary:
        有向三角形の最小出次数定数 c を使った十分条件（4本の不等式）を評価する。
        - ch_outdegree: ((1-ε)t - δ)/(1-δ) >= c（この条件のみ非狭義）
        - two_concentrated: t > 1/2 - (1-ε)^2 t^2
        - happy_budget: (8/3)(t - 1/4) > (1 - δ(2ε - 2ε^2))t
        - delta_cap: 1 + 2δε^2 > 4εδ
    Args:
        t (float):
            t > 0
        delta (float):
            0 <= δ < 1。δ = 1 は ch_outdegree の分母が0になるためエラー。
        eps (float):
            0 < ε < 1/2
        ch_constant (float, optional):
            出次数条件の定数。None の場合は CH_CONSTANT。
        margin (float, optional):
            狭義不等式の余裕
    Returns:
        FeasibilityReport:
            評価結果
    """
    margin = _resolve_margin(margin)
    ch_constant = CH_CONSTANT if ch_constant is None else ch_constant
    point = ParameterPoint(t, delta, eps)
    conditions = ch_conditions(t, delta, eps, ch_constant)
    return _report(CH, point, conditions, margin, ch_constant)


def _open_grid(lower: float, upper: float, points: int) -> np.ndarray:
    """端点を含まない等間隔の格子"""
    return lower + (upper - lower) * np.arange(1, points + 1) / (points + 1)


def _zoom(grid: np.ndarray, index: int, points: int, cells: int = 2) -> np.ndarray:
    lower = grid[max(index - cells, 0)]
    upper = grid[min(index + cells, len(grid) - 1)]
    return np.linspace(lower, upper, points)


def _bisect_lowest(
    feasible: Callable[[np.ndarray], np.ndarray],
    shape: tuple[int, ...],
    bracket: tuple[float, float],
    tol: float,
) -> tuple[np.ndarray, int]:
    """
    ## Summary:
        各要素について feasible が真となる最小の値を二分探索する。
        上端で実行不可能な要素は NaN。
    """
    lo = np.full(shape, bracket[0], dtype=float)
    hi = np.full(shape, bracket[1], dtype=float)
    reachable = feasible(hi)
    iterations = 0
    while np.max(hi - lo) > tol:
        mid = (lo + hi) / 2
        ok = feasible(mid)
        hi = np.where(ok, mid, hi)
        lo = np.where(ok, lo, mid)
        iterations += 1
    return np.where(reachable, hi, np.nan), iterations


def _ordered_candidates(
    objective: np.ndarray, eps: np.ndarray, other: np.ndarray
) -> Iterable[tuple[float, float, float]]:
    mask = np.isfinite(objective)
    objective, eps, other = objective[mask], eps[mask], other[mask]
    order = np.lexsort((other, eps, objective))
    for i in order:
        yield float(objective[i]), float(eps[i]), float(other[i])


@type_checker_float(arg_index=0, kward="t")
@type_checker_integer(arg_index=1, kward="eps_grid")
@type_checker_float(arg_index=2, kward="bisect_tol")
@type_checker_range(arg_index=0, kward="t", lower=0, lower_open=True)
@type_checker_range(arg_index=1, kward="eps_grid", lower=100)
@type_checker_range(arg_index=2, kward="bisect_tol", lower=0, lower_open=True)
def minimize_delta(
    t: float,
    eps_grid: int = EPS_GRID,
    bisect_tol: float = BISECT_TOL,
    margin: Optional[float] = None,
    refine_rounds: int = REFINE_ROUNDS,
) -> SearchResult:
    """
    ## Summary:
        与えられた t について、surplus 系を満たす最小の δ を探す。
        ε の格子の各点で δ ∈ (0, 4] を二分探索し、最良の格子点の周辺を
        refine_rounds 回細かい格子で探し直す。候補は (δ, ε) の昇順に
        check_surplus_system で再評価し、最初に通ったものを返す。
    Args:
        t (float):
            t > 0
        eps_grid (int):
            ε の格子点数（100以上）
        bisect_tol (float):
            二分探索の許容誤差
        margin (float, optional):
            狭義不等式の余裕
        refine_rounds (int):
            局所的な再探索の回数
    Returns:
        SearchResult:
            結果。実行可能な点がなければ found=False。
    """
    margin = _resolve_margin(margin)
    total_iterations = 0

    def solve(eps: np.ndarray) -> np.ndarray:
        nonlocal total_iterations
        deltas, steps = _bisect_lowest(
            lambda d: _all_satisfied(surplus_conditions(t, d, eps), margin),
            eps.shape,
            DELTA_BRACKET,
            bisect_tol,
        )
        total_iterations += steps
        return deltas

    eps = _open_grid(0.0, 0.5, eps_grid)
    deltas = solve(eps)
    all_eps, all_deltas = [eps], [deltas]
    for round_ in range(refine_rounds):
        if not np.isfinite(deltas).any():
            break
        best = int(np.nanargmin(deltas))
        eps = _zoom(eps, best, REFINE_GRID)
        deltas = solve(eps)
        all_eps.append(eps)
        all_deltas.append(deltas)
        logger.debug("refine round %d: delta=%.9f", round_ + 1, np.nanmin(deltas))

    eps_all = np.concatenate(all_eps)
    delta_all = np.concatenate(all_deltas)
    for delta, e, _ in _ordered_candidates(delta_all, eps_all, np.zeros_like(eps_all)):
        report = check_surplus_system(t, delta, e, margin)
        if report.feasible:
            logger.info("t=%s: delta*=%.7f at eps=%.7f", t, delta, e)
            return SearchResult(
                system=SURPLUS,
                found=True,
                objective=delta,
                point=report.point,
                report=report,
                iterations=total_iterations,
                tolerance=bisect_tol,
            )
    logger.warning("no feasible delta in %s for t=%s", DELTA_BRACKET, t)
    return SearchResult(
        system=SURPLUS,
        found=False,
        objective=None,
        point=None,
        report=None,
        iterations=total_iterations,
        tolerance=bisect_tol,
    )


@type_checker_float(arg_index=0, kward="ch_constant")
@type_checker_range(
    arg_index=0,
    kward="ch_constant",
    lower=0,
    upper=0.5,
    lower_open=True,
    upper_open=True,
)
def minimize_t(
    ch_constant: float = CH_CONSTANT,
    grid: tuple[int, int] = T_GRID,
    tol: float = T_TOL,
    margin: Optional[float] = None,
    refine_rounds: int = REFINE_ROUNDS,
) -> SearchResult:
    """
    ## Summary:
        ch 系を満たす最小の t を探す。(ε, δ) ∈ (0, 1/2) x (0, 1) の格子の
        各点で t ∈ (1/4, 1/2) を二分探索し、最良の格子点の周辺を
        refine_rounds 回細かい格子で探し直す。候補は (t, ε, δ) の昇順に
        check_ch_system で再評価し、最初に通ったものを返す。
    Args:
        ch_constant (float):
            出次数条件の定数（0 < c < 1/2）
        grid (tuple[int, int]):
            ε 方向と δ 方向の格子点数
        tol (float):
            t の二分探索の許容誤差
        margin (float, optional):
            狭義不等式の余裕
        refine_rounds (int):
            局所的な再探索の回数
    Returns:
        SearchResult:
            結果。実行可能な点がなければ found=False。
    """
    margin = _resolve_margin(margin)
    n_eps, n_delta = (int(v) for v in grid)
    if n_eps < 2 or n_delta < 2:
        raise ValueError(f"grid must have at least 2 points per axis, got {grid}")
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    total_iterations = 0

    def solve(eps: np.ndarray, delta: np.ndarray) -> tuple[np.ndarray, ...]:
        nonlocal total_iterations
        e, d = np.meshgrid(eps, delta, indexing="ij")
        ts, steps = _bisect_lowest(
            lambda t: _all_satisfied(ch_conditions(t, d, e, ch_constant), margin),
            e.shape,
            T_BRACKET,
            tol,
        )
        total_iterations += steps
        return ts, e, d

    eps = _open_grid(0.0, 0.5, n_eps)
    delta = _open_grid(0.0, 1.0, n_delta)
    ts, e, d = solve(eps, delta)
    found_t, found_e, found_d = [ts.ravel()], [e.ravel()], [d.ravel()]
    for round_ in range(refine_rounds):
        if not np.isfinite(ts).any():
            break
        i, j = np.unravel_index(int(np.nanargmin(ts)), ts.shape)
        eps = _zoom(eps, int(i), n_eps)
        delta = _zoom(delta, int(j), n_delta)
        ts, e, d = solve(eps, delta)
        found_t.append(ts.ravel())
        found_e.append(e.ravel())
        found_d.append(d.ravel())
        logger.debug("refine round %d: t=%.9f", round_ + 1, np.nanmin(ts))

    candidates = _ordered_candidates(
        np.concatenate(found_t), np.concatenate(found_e), np.concatenate(found_d)
    )
    for t, e_, d_ in candidates:
        report = check_ch_system(t, d_, e_, ch_constant, margin)
        if report.feasible:
            logger.info("c=%s: t*=%.7f at eps=%.7f delta=%.7f", ch_constant, t, e_, d_)
            return SearchResult(
                system=CH,
                found=True,
                objective=t,
                point=report.point,
                report=report,
                iterations=total_iterations,
                tolerance=tol,
            )
    logger.warning("no feasible t in %s for c=%s", T_BRACKET, ch_constant)
    return SearchResult(
        system=CH,
        found=False,
        objective=None,
        point=None,
        report=None,
        iterations=total_iterations,
        tolerance=tol,
    )


def sweep_delta(
    t_values: Iterable[float],
    eps_grid: int = EPS_GRID,
    bisect_tol: float = BISECT_TOL,
    margin: Optional[float] = None,
) -> pd.DataFrame:
    """
    ## Summary:
        複数の t について minimize_delta を実行し、表にまとめる。
        実行可能な点がない t の行は NaN。
    Returns:
        pd.DataFrame:
            列 t, delta, eps, alpha
    """
    rows = []
    for t in t_values:
        result = minimize_delta(t, eps_grid, bisect_tol, margin)
        if result.found:
            p = result.point
            rows.append((p.t, p.delta, p.eps, p.alpha))
        else:
            rows.append((float(t), np.nan, np.nan, np.nan))
    return pd.DataFrame(rows, columns=["t", "delta", "eps", "alpha"])


def _cover_coefficients(r: int) -> tuple[Fraction, Fraction, Fraction]:
    """
    r 個の頂点で覆われる場合の条件
    (1/(2r) - 1/4)k^2 + ((a+b)/2 + (r-1)/2)k + (r ab/2 + 1/4) > 0
    の係数。a = 3r/2 - 7/2, b = 3r/2 - 9/2。
    """
    a = Fraction(3 * r - 7, 2)
    b = Fraction(3 * r - 9, 2)
    quadratic = Fraction(1, 2 * r) - Fraction(1, 4)
    linear = (a + b) / 2 + Fraction(r - 1, 2)
    constant = r * a * b / 2 + Fraction(1, 4)
    return quadratic, linear, constant


@type_checker_integer(arg_index=0, kward="r")
@valid_names(arg_index=0, kward="r", valid_names=[3, 4])
def cover_quadratic(r: int) -> tuple[int, int, int]:
    """
    ## Summary:
        条件を k^2 の係数で割った2次式 k^2 + bk + c の係数 (1, b, c)。
        条件はこの2次式が負であることと同値。
        r=3: k^2 - 18k - 3、r=4: k^2 - 28k - 62。
    """
    quadratic, linear, constant = _cover_coefficients(r)
    b = linear / quadratic
    c = constant / quadratic
    return 1, int(b), int(c)


def cover_quadratic_root(r: int) -> float:
    """
    ## Summary:
        cover_quadratic(r) の正の根。k はこの値未満になる。
        r=3: 9 + sqrt(84)、r=4: 14 + sqrt(258)。
    """
    _, b, c = cover_quadratic(r)
    return float((-b + np.sqrt(b * b - 4 * c)) / 2)


@dataclass(frozen=True)
class CoverBounds:
    """
    ## Summary:
        r >= 5 の場合の k の上界 2r(3r-7)/(r-4) の一覧
    Args:
        values (dict[int, Fraction]):
            r ごとの上界
        max_r (int):
            上界が最大となる r
        max_value (Fraction):
            上界の最大値
        k_max (int):
            最大値未満の最大の整数
    """

    values: dict[int, Fraction]
    max_r: int
    max_value: Fraction
    k_max: int

    def to_dict(self) -> dict:
        return {
            "values": {
                r: {"exact": str(v), "value": float(v)} for r, v in self.values.items()
            },
            "max_r": self.max_r,
            "max_value": float(self.max_value),
            "k_max": self.k_max,
        }


@type_checker_integer(arg_index=0, kward="r_min")
@type_checker_integer(arg_index=1, kward="r_max")
@type_checker_range(arg_index=0, kward="r_min", lower=5)
def large_cover_bounds(r_min: int = 5, r_max: int = 15) -> CoverBounds:
    """
    ## Summary:
        r_min <= r <= r_max について k < 4r(3r/2 - 7/2)/(r - 4) を厳密に計算し、
        全体として k <= k_max となることを示す。
    """
    if r_max < r_min:
        raise ValueError(f"r_max must be >= r_min = {r_min}, got {r_max}")
    values = {r: Fraction(2 * r * (3 * r - 7), r - 4) for r in range(r_min, r_max + 1)}
    max_r = max(values, key=lambda r: values[r])
    max_value = values[max_r]
    k_max = math.ceil(max_value) - 1
    return CoverBounds(values=values, max_r=max_r, max_value=max_value, k_max=k_max)


def r_ge5_k_bound(
    r_min: int = 5, r_max: int = 15
) -> tuple[dict[int, Fraction], Fraction]:
    """r ごとの上界と、その最大値の組"""
    bounds = large_cover_bounds(r_min, r_max)
    return bounds.values, bounds.max_value


# 定理番号による別名
check_thm31 = check_surplus_system
check_thm41 = check_ch_system
minimize_t_thm41 = minimize_t
appendix_a_bound = cover_quadratic_root
