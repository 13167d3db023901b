"""
引数チェック用デコレーターの定義
"""

import functools
import math
from typing import Any, Iterable, Optional


def _intermediate(arg_index, kward, *args, **kwargs) -> dict[str, Any]:
    """
    位置引数 arg_index かキーワード引数 kward の値を取り出す。
    どちらにもなければ value は None（関数のデフォルト値が使われる）。
    """
    in_args = True
    value = None
    if arg_index < len(args):
        value = args[arg_index]
    else:
        in_args = False
        # デフォルト引数を使用している場合はkwargsに存在しない
        value = kwargs.get(kward, None)
    return {"in_args": in_args, "value": value}


def _return_value(value: Any, data: dict[str, Any], args, kwargs) -> Any:
    """変換後の値を args か kwargs の元の位置に戻す"""
    if data["in_args"]:
        args = list(args)
        args[data["arg_index"]] = value
    else:
        kwargs[data["kward"]] = value
    return {"args": args, "kwargs": kwargs}


def _checked_call(func, arg_index: int, kward: str, convert, args, kwargs):
    data = _intermediate(arg_index, kward, *args, **kwargs)
    data["arg_index"] = arg_index
    data["kward"] = kward
    value = data["value"]
    # デフォルト引数を使用している場合はそのまま関数を呼び出す
    if value is None:
        return func(*args, **kwargs)
    value = convert(value)
    result = _return_value(value, data, args, kwargs)
    return func(*result["args"], **result["kwargs"])


def type_checker_integer(arg_index: int, kward: str):
    """
    ## Summary:
        関数の引数が整数か、整数に変換可能かをチェックするデコレーター。
        小数部を持つ浮動小数点数は整数として扱わない。
    ## Args:
        arg_index (int):
            位置引数のインデックスを指定。
        kward (str):
            キーワード引数の名前を指定。
    ## Returns:
        int:
            整数に変換された引数の値。
    """

    def convert(value: Any) -> int:
        if isinstance(value, float) and not value.is_integer():
            raise TypeError(
                f"Argument '{kward}' must be an integer, got non-integral {value}"
            )
        try:
            return int(value)
        except Exception as e:
            raise TypeError(
                f"Argument '{kward}' must be an integer or convertible to "
                f"integer, got {type(value)}"
            ) from e

    def decorator(func):
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            return _checked_call(func, arg_index, kward, convert, args, kwargs)

        return wrapper

    return decorator


def type_checker_float(arg_index: int, kward: str):
    """
    ## Summary:
        引数が浮動小数点数か浮動小数点数に変換可能かをチェックするデコレーター。
        NaN は受け付けない。
    ## Args:
        arg_index (int):
            位置引数のインデックスを指定。
        kward (str):
            キーワード引数の名前を指定。
    ## Returns:
        float:
            浮動小数点数に変換された引数の値。
    """

    def convert(value: Any) -> float:
        try:
            value = float(value)
        except Exception as e:
            raise TypeError(
                f"Argument '{kward}' must be a float or convertible to float"
                f", got {type(value)}"
            ) from e
        if math.isnan(value):
            raise ValueError(f"Argument '{kward}' must not be NaN")
        return value

    def decorator(func):
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            return _checked_call(func, arg_index, kward, convert, args, kwargs)

        return wrapper

    return decorator


def type_checker_range(
    arg_index: int,
    kward: str,
    lower: Optional[float] = None,
    upper: Optional[float] = None,
    lower_open: bool = False,
    upper_open: bool = False,
):
    """
    ## Summary:
        関数の引数が指定した区間に含まれるかをチェックするデコレーター。
        型の変換は行わないので、type_checker_integer / type_checker_float の
        内側（関数に近い側）に置くこと。
    ## Args:
        arg_index (int):
            位置引数のインデックスを指定。
        kward (str):
            キーワード引数の名前を指定。
        lower (float, optional):
            下限。None の場合は下限なし。
        upper (float, optional):
            上限。None の場合は上限なし。
        lower_open (bool):
            True の場合、下限を含まない（開区間）。
        upper_open (bool):
            True の場合、上限を含まない（開区間）。
    ## Returns:
        Any:
            区間内であることが確認された引数の値（変換なし）。
    """
    left = "(" if lower_open else "["
    right = ")" if upper_open else "]"
    interval = (
        f"{left}{'-inf' if lower is None else lower}, "
        f"{'inf' if upper is None else upper}{right}"
    )

    def convert(value: Any) -> Any:
        too_low = lower is not None and (
            value <= lower if lower_open else value < lower
        )
        too_high = upper is not None and (
            value >= upper if upper_open else value > upper
        )
        if too_low or too_high:
            raise ValueError(
                f"Argument '{kward}' must be in {interval}, got {value}"
            )
        return value

    def decorator(func):
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            return _checked_call(func, arg_index, kward, convert, args, kwargs)

        return wrapper

    return decorator


def valid_names(arg_index: int, kward: str, valid_names: Iterable[Any]):
    """
    ## Summary:
        関数の引数が指定された有効な値のリストに含まれているかをチェックするデコレーター。
    Args:
        arg_index (int):
            位置引数のインデックスを指定。
        kward (str):
            キーワード引数の名前を指定。
        valid_names (Iterable[Any]):
            有効な値のリスト。
    Returns:
        Any:
            有効であることが確認された引数の値。
    """
    names = list(valid_names)

    def convert(value: Any) -> Any:
        if value not in names:
            raise ValueError(
                f"Argument '{kward}' must be one of {names}, got '{value}'"
            )
        return value

    def decorator(func):
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            return _checked_call(func, arg_index, kward, convert, args, kwargs)

        return wrapper

    return decorator
