"""
コマンドラインインターフェース

標準出力には JSON（既定）または CSV の文書のみを書き出す。ログは標準エラー出力。
終了コード: 0 成功・実行可能、1 実行不可能・違反あり、2 使い方やパラメータの誤り。

t = 1/3 を渡す場合は 0.333334 のように切り上げた値を使うと、
実数としての判定が安全側になる。
"""

import argparse
import json
import logging
import math
import sys
from fractions import Fraction
from typing import Any, Callable, Optional, Sequence

import numpy as np
import pandas as pd

from .config import DEFAULT_K_MAX, Settings, load_settings
from .data import TriangleBoundInputs
from .experiment import (
    ExperimentConfig,
    bound_table_frame,
    emit_bound_table,
    run_experiment,
)
from .feasibility import (
    SURPLUS,
    SYSTEMS,
    THEOREM_SYSTEMS,
    check_ch_system,
    check_surplus_system,
    cover_quadratic,
    cover_quadratic_root,
    large_cover_bounds,
    minimize_delta,
    minimize_t,
    sweep_delta,
)
from .graph import (
    bound_inputs,
    find_all_rainbow_triangles,
    find_rainbow_triangle,
    format_graph,
    goodman_lower_bound,
    happy_triple_count,
    read_colored_graph,
    read_graph,
    refined_lower_bound,
    triangle_count,
)
from .happy import (
    brute_force_max_happy,
    build_dp_table,
    extremal_construction,
    f_bound,
    verify_lemma,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_ERROR = 2


def _json_default(value: Any) -> Any:
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, Fraction):
        return float(value)
    raise TypeError(f"Object of type {type(value)} is not JSON serializable")


def _clean(value: Any) -> Any:
    """NaN を null に置き換える"""
    if isinstance(value, dict):
        return {k: _clean(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_clean(v) for v in value]
    if isinstance(value, float) and math.isnan(value):
        return None
    return value


def _records(frame: pd.DataFrame) -> list[dict]:
    return _clean(frame.to_dict(orient="records"))


def _emit(args: argparse.Namespace, doc: dict, frame: Optional[pd.DataFrame]) -> None:
    if args.format == "csv":
        if frame is None:
            frame = pd.json_normalize(_clean(doc))
        frame.to_csv(sys.stdout, index=False, lineterminator="\n")
        return
    sys.stdout.write(json.dumps(_clean(doc), indent=2, default=_json_default) + "\n")


def _cmd_dp_table(args, settings: Settings) -> int:
    frame = build_dp_table(args.k_max).to_frame()
    _emit(args, {"k_max": args.k_max, "rows": _records(frame)}, frame)
    return EXIT_OK


def _cmd_bound_table(args, settings: Settings) -> int:
    if args.output:
        frame = emit_bound_table(args.k_max, args.output)
        _emit(args, {"path": args.output, "rows": len(frame)}, None)
    else:
        frame = bound_table_frame(args.k_max)
        _emit(args, {"k_max": args.k_max, "rows": _records(frame)}, frame)
    return EXIT_OK


def _cmd_verify_lemma(args, settings: Settings) -> int:
    violations = verify_lemma(build_dp_table(args.k_max), args.k_max)
    rows = [v._asdict() for v in violations]
    frame = pd.DataFrame(rows, columns=["k", "l", "value", "bound"])
    _emit(args, {"k_max": args.k_max, "violations": rows}, frame)
    return EXIT_FAILED if violations else EXIT_OK


def _cmd_brute_force(args, settings: Settings) -> int:
    result = brute_force_max_happy(args.k, args.l, args.ncap, args.progress)
    doc = result.to_dict()
    if 2 * args.l >= args.k and args.l <= args.k:
        doc["f_bound"] = f_bound(args.k, args.l)
    _emit(args, doc, None)
    return EXIT_OK


def _cmd_construct(args, settings: Settings) -> int:
    g = extremal_construction(args.k, args.l)
    doc = {
        "k": args.k,
        "l": args.l,
        "happy": happy_triple_count(g),
        "f_bound": f_bound(args.k, args.l),
        "graph": format_graph(g),
    }
    frame = pd.DataFrame(g.sorted_edges, columns=["u", "v"])
    _emit(args, doc, frame)
    return EXIT_OK


def _cmd_bound(args, settings: Settings) -> int:
    triangles = None
    if args.graph is not None:
        g = read_graph(args.graph)
        inputs = bound_inputs(g)
        triangles = triangle_count(g)
    elif args.n is not None and args.m is not None:
        inputs = TriangleBoundInputs(args.n, args.m, args.h).validate()
    else:
        raise ValueError("bound needs either --graph or both --n and --m")
    goodman = goodman_lower_bound(inputs.n, inputs.m)
    refined = refined_lower_bound(inputs)
    doc = {
        "n": inputs.n,
        "m": inputs.m,
        "h": inputs.h,
        "goodman": float(goodman),
        "goodman_exact": str(goodman),
        "refined": float(refined),
        "refined_exact": str(refined),
        "triangles": triangles,
    }
    _emit(args, doc, None)
    return EXIT_OK


def _cmd_check(args, settings: Settings) -> int:
    margin = settings.margin if args.margin is None else args.margin
    system = THEOREM_SYSTEMS[args.theorem] if args.theorem else args.system
    if system == SURPLUS:
        report = check_surplus_system(args.t, args.delta, args.eps, margin)
    else:
        ch = settings.ch_constant if args.ch is None else args.ch
        report = check_ch_system(args.t, args.delta, args.eps, ch, margin)
    frame = pd.DataFrame([c._asdict() for c in report.conditions])
    _emit(args, report.to_dict(), frame)
    return EXIT_OK if report.feasible else EXIT_FAILED


def _cmd_minimize_delta(args, settings: Settings) -> int:
    grid = settings.eps_grid if args.grid is None else args.grid
    tol = settings.bisect_tol if args.tol is None else args.tol
    result = minimize_delta(
        args.t, grid, tol, settings.margin, settings.refine_rounds
    )
    _emit(args, result.to_dict(), None)
    return EXIT_OK if result.found else EXIT_FAILED


def _cmd_minimize_t(args, settings: Settings) -> int:
    ch = settings.ch_constant if args.ch is None else args.ch
    grid = settings.t_grid if args.grid is None else tuple(args.grid)
    tol = settings.t_tol if args.tol is None else args.tol
    result = minimize_t(ch, grid, tol, settings.margin, settings.refine_rounds)
    _emit(args, result.to_dict(), None)
    return EXIT_OK if result.found else EXIT_FAILED


def _cmd_sweep(args, settings: Settings) -> int:
    if args.steps < 1:
        raise ValueError(f"--steps must be positive, got {args.steps}")
    t_values = np.linspace(args.t_min, args.t_max, args.steps)
    frame = sweep_delta(
        t_values, settings.eps_grid, settings.bisect_tol, settings.margin
    )
    _emit(args, {"rows": _records(frame)}, frame)
    return EXIT_OK


def _cmd_cover_bounds(args, settings: Settings) -> int:
    large = large_cover_bounds()
    doc = {
        "quadratics": {str(r): list(cover_quadratic(r)) for r in (3, 4)},
        "roots": {str(r): cover_quadratic_root(r) for r in (3, 4)},
        "large_cover": large.to_dict(),
    }
    frame = pd.DataFrame(
        [(r, str(v), float(v)) for r, v in large.values.items()],
        columns=["r", "exact", "value"],
    )
    _emit(args, doc, frame)
    return EXIT_OK


def _cmd_experiment(args, settings: Settings) -> int:
    cfg = ExperimentConfig(
        n=args.n,
        num_colors=args.colors,
        class_size=args.class_size,
        seed=args.seed,
        trials=args.trials,
    )
    report = run_experiment(cfg, workers=args.workers, progress=args.progress)
    _emit(args, report.to_dict(include_timing=args.timing), report.to_frame())
    return EXIT_OK


def _cmd_rainbow(args, settings: Settings) -> int:
    ecg = read_colored_graph(args.graph)
    witness = find_rainbow_triangle(ecg)
    doc = {
        "found": witness is not None,
        "witness": None if witness is None else list(witness),
        "count": len(find_all_rainbow_triangles(ecg)),
    }
    _emit(args, doc, None)
    return EXIT_OK if witness is not None else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rainbow-bounds",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--format", choices=["json", "csv"], default="json")
    parser.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        default="WARNING",
    )
    parser.add_argument("--config", default=None, help="YAML settings file")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(
        name: str, func: Callable, help_: str, aliases: Sequence[str] = ()
    ) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_, aliases=list(aliases))
        p.set_defaults(func=func)
        return p

    p = add("dp-table", _cmd_dp_table, "happy triple upper bounds for l = ceil(k/2)")
    p.add_argument("--k-max", type=int, default=DEFAULT_K_MAX)

    p = add("bound-table", _cmd_bound_table, "write the k,l,bound CSV")
    p.add_argument("--k-max", type=int, default=DEFAULT_K_MAX)
    p.add_argument("--output", default=None)

    p = add("verify-lemma", _cmd_verify_lemma, "compare DP values with the closed form")
    p.add_argument("--k-max", type=int, default=DEFAULT_K_MAX)

    p = add("brute-force", _cmd_brute_force, "exhaustive maximum for small k")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--ncap", type=int, default=None)
    p.add_argument("--progress", action="store_true")

    p = add("construct", _cmd_construct, "graph attaining the closed-form bound")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, required=True)

    p = add("bound", _cmd_bound, "triangle count lower bounds")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--h", type=int, default=0)
    p.add_argument("--graph", default=None, help="graph file (n m / u v lines)")

    p = add("check", _cmd_check, "evaluate an inequality system at one point")
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--theorem", choices=sorted(THEOREM_SYSTEMS))
    which.add_argument("--system", choices=list(SYSTEMS))
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--ch", type=float, default=None)
    p.add_argument("--margin", type=float, default=None)

    p = add("minimize-delta", _cmd_minimize_delta, "smallest delta for a given t")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--grid", type=int, default=None)
    p.add_argument("--tol", type=float, default=None)

    p = add("minimize-t", _cmd_minimize_t, "smallest t for a given out-degree constant")
    p.add_argument("--ch", type=float, default=None)
    p.add_argument("--grid", type=int, nargs=2, default=None, metavar=("EPS", "DELTA"))
    p.add_argument("--tol", type=float, default=None)

    p = add("sweep", _cmd_sweep, "smallest delta over a range of t")
    p.add_argument("--t-min", type=float, required=True)
    p.add_argument("--t-max", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)

    add(
        "appendix-a",
        _cmd_cover_bounds,
        "edge bounds from small vertex covers",
        aliases=["cover-bounds"],
    )

    p = add("experiment", _cmd_experiment, "random colored instances (empirical)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--colors", type=int, required=True)
    p.add_argument("--class-size", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--timing", action="store_true")
    p.add_argument("--progress", action="store_true")

    p = add("rainbow", _cmd_rainbow, "search a colored graph file")
    p.add_argument("--graph", required=True, help="colored graph file (u v c lines)")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code else EXIT_OK
    logging.basicConfig(
        level=args.log_level,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        settings = load_settings(args.config)
        return args.func(args, settings)
    except (ValueError, TypeError, OSError) as e:
        logger.debug("command failed", exc_info=True)
        sys.stderr.write(f"error: {e}\n")
        return EXIT_ERROR
