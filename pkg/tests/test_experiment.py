"""
Tests for the random instance generator, the experiment runner and the
bound table emitter.
"""

import pytest

from rainbowbounds.experiment import (
    EMPIRICAL_LABEL,
    ExperimentConfig,
    emit_bound_table,
    emit_table1,
    generate_instance,
    load_bound_table,
    run_experiment,
    run_trial,
)
from rainbowbounds.graph import find_rainbow_triangle

from .data import GoldenData


class TestExperimentConfig:
    """Tests for ExperimentConfig class."""

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"n": 0},
            {"num_colors": 0},
            {"class_size": -1},
            {"seed": -1},
            {"seed": 2**64},
            {"trials": -1},
            {"n": 5, "num_colors": 3, "class_size": 4},
        ],
    )
    def test_invalid(self, kwargs):
        """不正な設定はValueError"""
        base = {"n": 12, "num_colors": 12, "class_size": 4, "seed": 1, "trials": 1}
        base.update(kwargs)
        with pytest.raises(ValueError):
            ExperimentConfig(**base)

    def test_full_packing(self):
        """K_n の辺をちょうど使い切る設定は許される"""
        ExperimentConfig(n=5, num_colors=5, class_size=2, seed=0, trials=1)


class TestGenerateInstance:
    """Tests for generate_instance function."""

    def test_sizes(self):
        """色クラスの数と大きさ"""
        cfg = ExperimentConfig(n=12, num_colors=12, class_size=4, seed=1, trials=1)
        ecg = generate_instance(cfg, 0)
        assert ecg.graph.m == 48
        classes = ecg.color_classes()
        assert sorted(classes) == list(range(12))
        assert all(len(edges) == 4 for edges in classes.values())

    def test_deterministic(self):
        """同じ (seed, trial) からは同じインスタンス"""
        cfg = ExperimentConfig(n=30, num_colors=34, class_size=10, seed=7, trials=1)
        first = generate_instance(cfg, 3)
        second = generate_instance(cfg, 3)
        assert first.graph == second.graph
        assert first.colors == second.colors
        assert first.graph.m == 340

    def test_trial_changes_instance(self):
        """試行番号が違えばインスタンスも違う"""
        cfg = ExperimentConfig(n=30, num_colors=34, class_size=10, seed=7, trials=2)
        assert generate_instance(cfg, 0).colors != generate_instance(cfg, 1).colors

    def test_negative_trial(self):
        """負の試行番号はValueError"""
        cfg = ExperimentConfig(n=12, num_colors=12, class_size=4, seed=1, trials=1)
        with pytest.raises(ValueError):
            generate_instance(cfg, -1)


class TestRunExperiment:
    """Tests for run_experiment function."""

    @pytest.mark.slow
    def test_surplus_regime(self):
        """n = 60、67色、各色20本では全ての試行で虹色三角形が見つかる"""
        cfg = ExperimentConfig(
            n=60, num_colors=67, class_size=20, seed=2024, trials=100
        )
        report = run_experiment(cfg)
        assert report.rate == 1.0
        assert report.found == 100
        assert report.label == EMPIRICAL_LABEL

    def test_single_color(self):
        """1色では虹色三角形はできない"""
        cfg = ExperimentConfig(n=10, num_colors=1, class_size=3, seed=5, trials=10)
        report = run_experiment(cfg)
        assert report.rate == 0.0
        assert all(o.witness is None for o in report.outcomes)

    def test_zero_trials(self):
        """試行0回では rate は None"""
        cfg = ExperimentConfig(n=10, num_colors=2, class_size=3, seed=5, trials=0)
        report = run_experiment(cfg)
        assert report.rate is None
        assert report.outcomes == ()
        assert report.to_dict()["rate"] is None

    def test_outcome_bounds(self):
        """各試行で三角形数が下界以上"""
        cfg = ExperimentConfig(n=20, num_colors=20, class_size=5, seed=3, trials=5)
        for outcome in run_experiment(cfg).outcomes:
            assert outcome.triangles >= outcome.refined_bound >= outcome.goodman_bound

    def test_witness_matches_instance(self):
        """見つかった三角形はインスタンスから直接探したものと一致"""
        cfg = ExperimentConfig(n=20, num_colors=20, class_size=5, seed=3, trials=1)
        outcome = run_trial(cfg, 0)
        assert outcome.witness == find_rainbow_triangle(generate_instance(cfg, 0))

    def test_timing_only_on_request(self):
        """実行時間は要求した場合のみ出力"""
        cfg = ExperimentConfig(n=10, num_colors=5, class_size=3, seed=5, trials=2)
        report = run_experiment(cfg)
        assert "wall_time" not in report.to_dict()
        assert report.to_dict(include_timing=True)["wall_time"] >= 0

    def test_frame(self):
        """試行ごとに1行"""
        cfg = ExperimentConfig(n=10, num_colors=5, class_size=3, seed=5, trials=3)
        frame = run_experiment(cfg).to_frame()
        assert list(frame["trial"]) == [0, 1, 2]
        assert "refined_bound" in frame.columns

    @pytest.mark.slow
    def test_workers_do_not_change_results(self):
        """並列実行しても結果は同じ"""
        cfg = ExperimentConfig(n=20, num_colors=20, class_size=5, seed=11, trials=6)
        serial = run_experiment(cfg)
        parallel = run_experiment(cfg, workers=2)
        assert serial.outcomes == parallel.outcomes

    def test_invalid_workers(self):
        """ワーカー数0はValueError"""
        cfg = ExperimentConfig(n=10, num_colors=5, class_size=3, seed=5, trials=1)
        with pytest.raises(ValueError):
            run_experiment(cfg, workers=0)


class TestBoundTable:
    """Tests for emit_bound_table and load_bound_table."""

    def test_golden_file(self, tmp_path):
        """k_max = 103 の出力は同梱の CSV と同一"""
        path = tmp_path / "bounds.csv"
        emit_bound_table(103, str(path))
        assert path.read_bytes() == GoldenData().happy_bounds_bytes

    def test_table_name(self, tmp_path):
        """emit_table1 は emit_bound_table と同じ出力"""
        path = tmp_path / "table1.csv"
        emit_table1(103, str(path))
        assert path.read_bytes() == GoldenData().happy_bounds_bytes

    def test_single_row(self, tmp_path):
        """k_max = 3 では1行だけ"""
        path = tmp_path / "bounds.csv"
        emit_bound_table(3, str(path))
        assert path.read_text(encoding="utf-8") == "k,l,bound\n3,2,2\n"

    def test_contains_row(self, tmp_path):
        """k = 9 の行"""
        path = tmp_path / "bounds.csv"
        emit_bound_table(10, str(path))
        assert "9,5,20" in path.read_text(encoding="utf-8").splitlines()

    def test_round_trip(self, tmp_path):
        """書き出した表を読み戻せる"""
        path = tmp_path / "bounds.csv"
        written = emit_bound_table(20, str(path))
        loaded = load_bound_table(str(path))
        assert loaded.equals(written.astype("int64"))

    def test_invalid_k_max(self, tmp_path):
        """k_max < 3 はValueError"""
        with pytest.raises(ValueError):
            emit_bound_table(2, str(tmp_path / "bounds.csv"))

    def test_unwritable_path(self, tmp_path):
        """書き込めないパスはOSError"""
        path = tmp_path / "missing" / "bounds.csv"
        with pytest.raises(OSError, match="bounds.csv"):
            emit_bound_table(10, str(path))

    def test_wrong_columns(self, tmp_path):
        """列名が違う CSV はValueError"""
        path = tmp_path / "other.csv"
        path.write_text("a,b\n1,2\n", encoding="utf-8")
        with pytest.raises(ValueError):
            load_bound_table(str(path))
