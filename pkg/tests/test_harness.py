import io
import math

import numpy as np
import pytest

from lowdeg_lab.graphs import LabeledGraph
from lowdeg_lab.harness import (
    ASYMPTOTIC_NOTE,
    SQRT_ALPHA,
    SWEEP_COLUMNS,
    ExperimentSpec,
    read_trial_log,
    run_detection_experiment,
    summarize,
    sweep,
    sweep_csv,
    write_trial_log,
)
from lowdeg_lab.iso import canonical_form
from lowdeg_lab.model import ModelParams
from lowdeg_lab.truncation import PhiParams


def test_summarize_hand_example():
    sp = np.array([2.0, 3.0, 4.0, 5.0])
    sq = np.array([0.0, 1.0, 2.0, 3.0])
    rep = summarize(sp, sq, 2.5)
    assert rep.type1 == 0.25 and rep.type2 == 0.25
    assert rep.mean_P == 3.5 and rep.mean_Q == 1.5
    assert rep.var_P == pytest.approx(5 / 3)
    assert rep.separation_ratio == pytest.approx(math.sqrt(5 / 3) / 2)
    assert rep.snr_empirical == pytest.approx(3.5 / math.sqrt(3.5))
    assert set(rep.se) >= {"type1", "type2", "mean_P", "separation_ratio", "snr_empirical"}


def test_degenerate_and_zero_gap():
    const = np.ones(10)
    rep = summarize(const, const, 1.0)
    assert rep.degenerate and math.isnan(rep.separation_ratio)
    assert rep.as_dict()["separation_ratio"] is None
    rep = summarize(np.array([0.0, 2.0]), np.array([2.0, 0.0]), 1.0)
    assert not rep.degenerate and rep.separation_ratio == math.inf


def test_spec_validation():
    params = ModelParams(10, 0.3, 0.5)
    with pytest.raises(ValueError):
        ExperimentSpec(params, trials=0)
    with pytest.raises(ValueError):
        ExperimentSpec(params, statistic="nope")
    with pytest.raises(ValueError):
        ExperimentSpec(params, statistic="class_count")


def test_planted_rho_separates():
    params = ModelParams(30, 0.3, 0.9)
    rep = run_detection_experiment(ExperimentSpec(params, trials=300, seed=1))
    assert rep.type1 + rep.type2 < 0.05
    assert rep.mean_P > rep.mean_Q


def test_rho_zero_gap_is_noise():
    params = ModelParams(20, 0.3, 0.0)
    rep = run_detection_experiment(ExperimentSpec(params, trials=4000, seed=2))
    assert abs(rep.mean_P - rep.mean_Q) < 4 * rep.se["mean_gap"]


def test_edge_correlation_mean_under_planted():
    # E_P = ρ √(C(n,2)) for the normalized edge correlation
    params = ModelParams(12, 0.3, 0.5)
    rep = run_detection_experiment(ExperimentSpec(params, trials=20_000, seed=3))
    target = 0.5 * math.sqrt(66)
    assert abs(rep.mean_P - target) < 4 * rep.se["mean_P"]
    assert abs(rep.mean_Q) < 4 * rep.se["mean_Q"]


def test_class_count_and_optimal():
    params = ModelParams(7, 0.3, 0.6, d=2)
    tri = canonical_form(LabeledGraph([(1, 2), (2, 3), (1, 3)]))
    rep = run_detection_experiment(ExperimentSpec(params, "class_count", trials=500, seed=4, cls=tri))
    assert rep.mean_P > rep.mean_Q
    rep = run_detection_experiment(ExperimentSpec(params, "optimal", trials=20_000, seed=5, d=2))
    # with the optimal coefficients E_P f = ‖f‖² = 1 + ρ²
    assert abs(rep.mean_P - 1.36) < 4 * rep.se["mean_P"]


def test_class_count_budget():
    params = ModelParams(200, 0.3, 0.5)
    big = canonical_form(LabeledGraph([(1, 2), (2, 3), (3, 4)]))
    with pytest.raises(ValueError):
        run_detection_experiment(ExperimentSpec(params, "class_count", trials=5, cls=big))


def test_callable_statistic_and_quantile_threshold():
    params = ModelParams(10, 0.3, 0.5)

    def a_edges(batch):
        return batch.A.sum(axis=1).astype(float)

    rep = run_detection_experiment(ExperimentSpec(params, a_edges, "quantile:0.95", trials=2000, seed=6))
    assert rep.type1 <= 0.06
    assert abs(rep.mean_P - rep.mean_Q) < 4 * rep.se["mean_gap"]  # A alone carries no signal


def test_truncated_experiment_counts_rejections():
    params = ModelParams(8, 0.1, 0.5, d=4)
    pp = PhiParams(8, 4, 0.1, a=1.0, b=-1.3)
    rep = run_detection_experiment(ExperimentSpec(params, trials=500, seed=7, truncated=True, pp=pp, k_cap=8))
    assert rep.trials == 500 and rep.rejections > 0


def test_determinism_and_trial_log_roundtrip():
    params = ModelParams(10, 0.3, 0.5)
    a = run_detection_experiment(ExperimentSpec(params, trials=300, seed=9))
    b = run_detection_experiment(ExperimentSpec(params, trials=300, seed=9))
    assert a.as_dict() == b.as_dict()
    buf = io.StringIO()
    write_trial_log(a, buf)
    buf.seek(0)
    sp, sq = read_trial_log(buf)
    assert np.array_equal(sp, a.stats_P) and np.array_equal(sq, a.stats_Q)


def test_sweep_rows_and_csv():
    template = ExperimentSpec(ModelParams(10, 0.3, 0.5), trials=50)
    rows = sweep([(10, 0.3, 0.2, 2), (10, 0.3, 0.0, 2), (1, 0.3, 0.5, 2)], template)
    assert rows[0]["below_sqrt_alpha"] and rows[0]["rho_over_sqrt_alpha"] == pytest.approx(0.2 / SQRT_ALPHA)
    assert rows[1]["snr_upper_bound"] == 1.0
    assert rows[2]["error"].startswith("params")
    text = sweep_csv(rows)
    lines = text.splitlines()
    assert lines[0] == f"# {ASYMPTOTIC_NOTE}"
    assert lines[2] == ",".join(SWEEP_COLUMNS)
    assert len(lines) == 6
