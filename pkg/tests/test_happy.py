"""
Tests for happy triple bounds, the DP table and the exhaustive search.
"""

from fractions import Fraction
from math import comb

import numpy as np
import pandas as pd
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rainbowbounds.data import Violation
from rainbowbounds.graph import Graph, happy_triple_count
from rainbowbounds.happy import (
    ConvexBound,
    DpTable,
    brute_force_max_happy,
    build_dp_table,
    canonical_key,
    convex_argmin,
    extremal_construction,
    f_bound,
    verify_lemma,
)

from .data import GoldenData


def _wedge(k_max, skip=()):
    """ceil(k/2) <= l <= k の (k, l)"""
    return [
        (k, l)
        for k in range(1, k_max + 1)
        for l in range((k + 1) // 2, k + 1)  # noqa: E741
        if (k, l) not in skip
    ]


class TestConvexBound:
    """Tests for ConvexBound class."""

    def test_argmin(self):
        """最小点は (k+1)/2"""
        assert ConvexBound(4).argmin == 2.5
        assert convex_argmin(4) == 2.5
        assert convex_argmin(7) == 4.0

    def test_derivative_vanishes_at_argmin(self):
        """最小点で微分が0"""
        bound = ConvexBound(9)
        assert bound.derivative(bound.argmin) == 0
        assert bound.derivative(3) < 0 < bound.derivative(6)

    def test_argmin_invalid(self):
        """k = 0 はValueError"""
        with pytest.raises(ValueError):
            convex_argmin(0)

    @given(st.integers(min_value=1, max_value=300), st.data())
    def test_symmetry_and_minimum(self, k, data):
        """f_k(x) = f_k(k+1-x)、最小値は x = (k+1)/2 でのみとる"""
        x = Fraction(data.draw(st.integers(min_value=0, max_value=2 * k)), 2)
        bound = ConvexBound(k)
        x_star = Fraction(k + 1, 2)
        assert bound.evaluate(x) == bound.evaluate(k + 1 - x)
        if x == x_star:
            assert bound.evaluate(x) == bound.evaluate(x_star)
        else:
            assert bound.evaluate(x) > bound.evaluate(x_star)

    @given(st.integers(min_value=1, max_value=300), st.data())
    def test_matches_f_bound(self, k, data):
        """整数点では f_bound と一致"""
        l = data.draw(st.integers(min_value=1, max_value=k))  # noqa: E741
        assert ConvexBound(k).evaluate(Fraction(l)) == f_bound(k, l)


class TestFBound:
    """Tests for f_bound function."""

    @pytest.mark.parametrize(
        "k, l, expected",
        [(1, 1, 0), (3, 2, 2), (4, 2, 4), (6, 3, 9), (9, 5, 20), (7, 7, 21)],
    )
    def test_values(self, k, l, expected):  # noqa: E741
        """f_bound の値"""
        assert f_bound(k, l) == expected

    @pytest.mark.parametrize("k, l", [(3, 4), (3, 0), (0, 1)])
    def test_invalid(self, k, l):  # noqa: E741
        """範囲外の引数はValueError"""
        with pytest.raises(ValueError):
            f_bound(k, l)

    def test_non_integer(self):
        """非整数はTypeError"""
        with pytest.raises(TypeError):
            f_bound(3.5, 2)


class TestDpTable:
    """Tests for build_dp_table and DpTable."""

    def test_golden_rows(self, dp_table):
        """l = ceil(k/2) の101行が同梱の表と一致する"""
        expected = GoldenData().happy_bounds
        actual = dp_table.to_frame()
        assert len(actual) == 101
        pd.testing.assert_frame_equal(actual, expected, check_dtype=False)

    @pytest.mark.parametrize(
        "k, l, bound", [(3, 2, 2), (50, 25, 625), (103, 52, 2652), (9, 5, 20)]
    )
    def test_published_values(self, dp_table, k, l, bound):  # noqa: E741
        """既知の値と一致"""
        assert dp_table.entry(k, l) == bound

    def test_exact_integers(self, dp_table):
        """値は整数で返る"""
        assert dp_table.entries.dtype == np.int64
        assert isinstance(dp_table.entry(10, 5), int)

    def test_read_only(self, dp_table):
        """表は書き換えられない"""
        with pytest.raises(ValueError):
            dp_table.entries[5, 3] = 0

    def test_star_rows(self, dp_table):
        """l >= k では星 K_{1,k} の C(k, 2)"""
        for k in range(2, 30):
            for l in range(k, 40):  # noqa: E741
                assert dp_table.entry(k, l) == comb(k, 2)

    def test_degree_two_column(self, dp_table):
        """l = 2 では閉路の k"""
        assert [dp_table.entry(k, 2) for k in range(4, 20)] == list(range(4, 20))

    def test_degree_one_column(self, dp_table):
        """l = 1 の列は全て0"""
        assert not dp_table.entries[:, 1].any()

    def test_monotone(self, dp_table):
        """k についても l についても単調非減少"""
        entries = dp_table.entries
        assert (np.diff(entries, axis=0) >= 0).all()
        assert (np.diff(entries, axis=1) >= 0).all()

    def test_witness(self, dp_table):
        """同値の場合は最大の j を記録する"""
        assert dp_table.witness(6, 3) == 3
        assert dp_table.witness(5, 3) == 3
        assert dp_table.witness(10, 2) == 2
        assert dp_table.witness(4, 7) == 4

    def test_truncation_keeps_values(self, dp_table):
        """小さい表も同じ値"""
        small = build_dp_table(20)
        assert (small.entries == dp_table.entries[:21, :21]).all()

    def test_ceil_rows(self, dp_table):
        """l = ceil(k/2) の行"""
        assert dp_table.ceil_rows(3, 3) == [(3, 2, 2)]
        assert (9, 5, 20) in dp_table.ceil_rows(k_max=10)
        with pytest.raises(ValueError):
            dp_table.ceil_rows(k_max=104)

    @pytest.mark.parametrize("k_max", [1, 200])
    def test_invalid_size(self, k_max):
        """範囲外の k_max はValueError"""
        with pytest.raises(ValueError):
            build_dp_table(k_max)


class TestVerifyLemma:
    """Tests for verify_lemma function."""

    def test_no_violations(self, dp_table):
        """3 <= k <= 103 で閉じた形の上界を超えない"""
        assert verify_lemma(dp_table) == []

    def test_detects_violation(self, dp_table):
        """上界を超えた値を検出する"""
        entries = dp_table.entries.copy()
        entries[7, 4] += 1
        broken = DpTable(
            k_max=dp_table.k_max, entries=entries, witness_j=dp_table.witness_j
        )
        assert verify_lemma(broken, 10) == [Violation(k=7, l=4, value=13, bound=12)]

    def test_k_max_too_large(self):
        """表より大きい k_max はValueError"""
        with pytest.raises(ValueError):
            verify_lemma(build_dp_table(10), 11)


class TestExtremalConstruction:
    """Tests for extremal_construction function."""

    @pytest.mark.parametrize("k, l", _wedge(30, skip={(2, 1)}))
    def test_attains_bound(self, k, l):  # noqa: E741
        """構成したグラフは上界に一致する"""
        g = extremal_construction(k, l)
        assert g.m == k
        assert g.max_degree == l
        assert happy_triple_count(g) == f_bound(k, l)

    def test_k2l(self):
        """l = k/2 では K_{2,l}"""
        g = extremal_construction(6, 3)
        assert g.n == 5
        assert g.degrees == [3, 3, 2, 2, 2]

    def test_star(self):
        """l = k では星 K_{1,k}"""
        g = extremal_construction(4, 4)
        assert sorted(g.degrees) == [1, 1, 1, 1, 4]

    @pytest.mark.parametrize("k, l", [(2, 1), (5, 2), (3, 4)])
    def test_invalid(self, k, l):  # noqa: E741
        """範囲外の引数はValueError"""
        with pytest.raises(ValueError):
            extremal_construction(k, l)


class TestBruteForce:
    """Tests for brute_force_max_happy function."""

    def test_path_is_best(self):
        """3辺・最大次数2では P4 が最大"""
        result = brute_force_max_happy(3, 2)
        assert result.maximum == 2
        assert sorted(result.witness.degrees, reverse=True)[:4] == [2, 2, 1, 1]

    def test_classes(self):
        """3辺のグラフの同型類は5つ"""
        result = brute_force_max_happy(3, 3, n_cap=6)
        assert result.classes == 5
        assert result.maximum == 3

    def test_examined(self):
        """3頂点に1辺を置く候補は3通り"""
        result = brute_force_max_happy(1, 1)
        assert result.n_cap == 3
        assert result.graphs_examined == 3

    def test_matching_pair(self):
        """(k, l) = (2, 1) では 0 で、閉じた形の上界 1 より小さい"""
        assert brute_force_max_happy(2, 1).maximum == 0
        assert f_bound(2, 1) == 1

    @pytest.mark.slow
    @pytest.mark.parametrize("k, l", _wedge(6, skip={(2, 1)}))
    def test_matches_closed_form(self, k, l):  # noqa: E741
        """総当たりの最大値は閉じた形の上界に一致する"""
        result = brute_force_max_happy(k, l)
        assert result.maximum == f_bound(k, l)
        assert result.maximum == happy_triple_count(extremal_construction(k, l))
        assert result.witness.m == k
        assert result.witness.max_degree <= l
        assert happy_triple_count(result.witness) == result.maximum

    @pytest.mark.slow
    @pytest.mark.parametrize("k", [1, 2, 3, 4, 5, 6, 7])
    def test_dp_is_upper_bound(self, dp_table, k):
        """総当たりの最大値は DP の値を超えない（マッチングも収まる頂点数で）"""
        for l in range(1, k + 1):  # noqa: E741
            result = brute_force_max_happy(k, l, n_cap=max(3, 2 * k))
            assert result.maximum <= dp_table.entry(k, l)

    def test_refuses_large_k(self):
        """k > 7 はValueError"""
        with pytest.raises(ValueError):
            brute_force_max_happy(8, 4)

    def test_does_not_fit(self):
        """頂点数が足りなければValueError"""
        with pytest.raises(ValueError, match="fits on"):
            brute_force_max_happy(4, 1, n_cap=3)

    def test_to_dict(self):
        """辞書への変換"""
        data = brute_force_max_happy(2, 2).to_dict()
        assert data["maximum"] == 1
        assert data["witness"].startswith("4 2\n")

    def test_canonical_key_is_invariant(self, path_p4):
        """キーはラベルの付け方によらない"""
        relabelled = Graph.from_edges(4, [(3, 1), (1, 0), (0, 2)])
        assert canonical_key(relabelled) == canonical_key(path_p4)
