import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lowdeg_lab import bounds as bd
from lowdeg_lab.graphs import EMPTY, LabeledGraph, Permutation, complete_graph
from lowdeg_lab.model import ModelParams
from lowdeg_lab.poly import expect_phi_closed
from lowdeg_lab.truncation import PhiParams
from lowdeg_lab.verify import check_fixed_pi_bounds, check_log_precision

EDGE = LabeledGraph([(1, 2)])
P3 = LabeledGraph([(1, 2), (2, 3)])
PARAMS = ModelParams(30, 0.1, 0.5, d=4)


def test_overlap_triple():
    pi = Permutation.identity(5)
    t = bd.OverlapTriple.from_pi(P3, LabeledGraph([(2, 3), (3, 4)]), pi)
    assert t.S0 == LabeledGraph([(2, 3)])
    assert t.exponents == (2, 3, 3, 1, 2, 2)
    with pytest.raises(ValueError):
        bd.OverlapTriple(P3, EDGE, EDGE)


def test_identical_graphs_give_rho_power():
    t = bd.OverlapTriple(P3, P3, P3)
    assert bd.l1_bound(t, PARAMS) == pytest.approx(0.25)
    assert bd.m_value(t, PARAMS) == pytest.approx(0.25)
    assert bd.vertex_bound(t, PARAMS) == pytest.approx(4 * 0.25)


def test_disjoint_edges():
    t = bd.OverlapTriple(EMPTY, EDGE, LabeledGraph([(3, 4)]))
    assert bd.l1_bound(t, PARAMS) == pytest.approx(0.4)
    assert bd.m_value(t, PARAMS) == pytest.approx(30 ** -2 * 4 ** -14)
    assert bd.log_vertex_bound(*t.exponents, 0.5, 30, 4) == pytest.approx(
        -2 * (math.log(30) + 20 * math.log(4)) + 4 * math.log(2))


def test_rho_zero_conventions():
    assert bd.log_l1_bound(0, 2, 2, 0, 1, 1, 0.0, 0.1) == pytest.approx(math.log(0.4))
    assert bd.log_l1_bound(2, 2, 2, 1, 1, 1, 0.0, 0.1) == -math.inf


def test_off_regime_warning():
    t = bd.OverlapTriple(EDGE, EDGE, EDGE)
    with pytest.warns(bd.OffRegimeWarning):
        bd.l1_bound(t, ModelParams(30, 0.1, 0.1, d=4))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        bd.l1_bound(t, PARAMS)


def test_doubling_d_shrinks_vertex_and_m_terms():
    t = (2, 3, 4, 1, 2, 3)
    for d in (4, 8, 16):
        assert bd.log_vertex_bound(*t, 0.5, 100, 2 * d) < bd.log_vertex_bound(*t, 0.5, 100, d)
        assert bd.log_m_value(*t, 0.5, 100, 2 * d) < bd.log_m_value(*t, 0.5, 100, d)


def test_expectation_bound_includes_empty_class():
    two = LabeledGraph([(3, 4)])
    b = bd.expectation_bound(EDGE, two, PARAMS)
    # classes embeddable in both: the empty graph and a single edge
    expected = 30 ** -2 * (4 ** -12 + 0.5 * 2)
    assert b == pytest.approx(expected)


def test_exact_mean_and_bound_differ_by_falling_factorial():
    # the closed form uses (n)_v where the bound uses n^v
    exact = float(expect_phi_closed(P3, P3, PARAMS))
    b = bd.expectation_bound(P3, P3, PARAMS)
    ratio = exact / b
    nv = 30 ** 3 / (30 * 29 * 28)
    assert ratio < nv
    assert ratio > 1  # the bound is exceeded by less than n^v/(n)_v


@given(st.integers(0, 2 ** 32 - 1))
def test_log_bounds_agree_with_mpmath(seed):
    rng = np.random.default_rng(seed)
    t = bd.random_exponent_tuple(rng)
    hi = bd.log_bounds_mp(t, 0.3, 1e-5, 1e9, 100)
    lo = (bd.log_l1_bound(*t, 0.3, 1e-5), bd.log_vertex_bound(*t, 0.3, 1e9, 100),
          bd.log_m_value(*t, 0.3, 1e9, 100))
    for a, b in zip(hi, lo):
        assert abs(a - b) <= 1e-9 * max(1, abs(a))


@given(st.integers(0, 2 ** 32 - 1))
def test_exponent_tuples_are_realizable(seed):
    v0, v1, v2, e0, e1, e2 = bd.random_exponent_tuple(np.random.default_rng(seed))
    assert e0 <= min(e1, e2) and v0 <= min(v1, v2)
    for v, e in ((v1, e1), (v2, e2)):
        assert v * (v - 1) // 2 >= e and v <= 2 * e


def test_min_bound_cases():
    assert bd.min_bound_case((2, 2, 2, 1, 1, 1)) == 2  # Δv = Δe = 0 sits on the case-2 side
    assert bd.min_bound_case((0, 2, 2, 0, 1, 1)) == 1
    assert bd.min_bound_case((3, 3, 3, 0, 3, 3)) == 2


def test_min_bound_case2_holds_for_huge_n():
    res = bd.min_bound_sweep(2, 300, per_case=2000)
    assert res.violations == 0


def test_min_bound_case1_holds_at_moderate_n():
    for nl in (3, 6, 9):
        assert bd.min_bound_sweep(1, nl, per_case=2000).violations == 0


def test_sweep_is_deterministic():
    a = bd.min_bound_sweep(1, 6, per_case=200, seed=5)
    b = bd.min_bound_sweep(1, 6, per_case=200, seed=5)
    assert a == b


def test_mc_verdicts():
    est = bd.McEstimate(1.0, 0.1, 100)
    assert est.verdict(1.0, 1.05) == "pass"
    assert est.verdict(0.8, 1.05) == "warning"
    assert est.verdict(0.2, 1.05) == "fail"
    assert est.ratio(0.5) == 2 and est.ratio(0) == math.inf


def test_mc_fixed_pi_matches_exact_identity():
    # with π = identity and S1 = S2 = S the mean is ρ^{e(S)}
    pi = Permutation.identity(30)
    est = bd.mc_phi_fixed_pi(P3, P3, PARAMS, pi, 200_000, 1)
    assert abs(est.mean - 0.25) < 4 * est.se
    est = bd.mc_phi_fixed_pi(EDGE, LabeledGraph([(5, 6)]), PARAMS, pi, 50_000, 2)
    assert abs(est.mean) < 4 * est.se


def test_mc_deterministic():
    pi = Permutation.identity(30)
    a = bd.mc_phi_fixed_pi(P3, P3, PARAMS, pi, 1000, 3)
    b = bd.mc_phi_fixed_pi(P3, P3, PARAMS, pi, 1000, 3)
    assert a == b


def test_rejection_path_used_when_event_can_fail():
    params = ModelParams(8, 0.1, 0.5, d=4)
    pp = PhiParams(8, 4, 0.1, a=1.0, b=-1.3)
    est = bd.mc_phi_random_pi(EDGE, EDGE, params, 2000, 0, pp=pp, k_cap=8)
    assert est.trials == 2000 and est.rejected > 0


def test_batteries_quick():
    for res in check_fixed_pi_bounds(5000, 4):
        assert res.verdict != "fail", res
    assert check_log_precision(30).violations == 0
