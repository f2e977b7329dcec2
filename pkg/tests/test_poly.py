import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given

from lowdeg_lab.graphs import EMPTY, LabeledGraph, Permutation, all_pairs, complete_graph, relabel
from lowdeg_lab.iso import canonical_form, enumerate_classes
from lowdeg_lab.model import ModelParams, iter_batches, sample_correlated, sample_null
from lowdeg_lab.poly import (
    BatchEvaluator,
    PolyCoeffs,
    eval_poly,
    expect_phi_closed,
    expect_phi_oracle,
    labeled_copies,
    optimal_coeffs,
    phi_eval,
    psi_eval,
    snr_admissible,
    snr_exact,
    snr_upper_bound,
)
from lowdeg_lab.truncation import PhiParams
from lowdeg_lab.verify import check_orthonormality, random_poly

from strategies import graphs

EDGE = LabeledGraph([(1, 2)])
TRI = complete_graph(3)


def test_psi_examples():
    assert psi_eval(EMPTY, TRI, 0.3) == 1
    assert psi_eval(EDGE, EDGE, 0.5) == pytest.approx(1.0)
    assert psi_eval(EDGE, EMPTY, 0.3) == pytest.approx(-math.sqrt(0.3 / 0.7))
    assert psi_eval(EDGE, EDGE, Fraction(1, 5)) == 2
    with pytest.raises(ValueError):
        psi_eval(EDGE, EDGE, 1.0)


def test_phi_examples():
    assert phi_eval(EMPTY, EMPTY, TRI, EDGE, 0.3) == 1
    assert phi_eval(EDGE, EMPTY, EDGE, EMPTY, 0.3) == pytest.approx(math.sqrt(0.7 / 0.3))


def test_closed_form_examples():
    assert expect_phi_closed(EDGE, EDGE, ModelParams(4, 0.3, Fraction(1, 2))) == Fraction(1, 12)
    tri = expect_phi_closed(TRI, TRI, ModelParams(5, 0.3, Fraction(1, 5)))
    assert tri == Fraction(8, 10_000)
    path = LabeledGraph([(1, 2), (2, 3)])
    assert expect_phi_closed(path, LabeledGraph([(1, 2), (3, 4)]), ModelParams(5, 0.3, 0.5)) == 0


def test_oracle_examples():
    params = ModelParams(5, 0.3, Fraction(1, 2))
    assert expect_phi_oracle(EMPTY, EMPTY, params) == 1
    two_k2 = LabeledGraph([(1, 2), (3, 4)])
    assert expect_phi_oracle(two_k2, LabeledGraph([(2, 5), (1, 3)]), params) == Fraction(1, 4) * Fraction(8, 120)
    with pytest.raises(ValueError):
        expect_phi_oracle(EDGE, EDGE, ModelParams(10, 0.3, 0.5), mode="permutations")


def test_oracle_modes_agree():
    params = ModelParams(6, 0.3, Fraction(1, 3))
    rng = random.Random(1)
    from lowdeg_lab.graphs import random_graph

    for _ in range(15):
        s1 = random_graph(rng, 5, 3, labels=6)
        pi = Permutation.random(6, rng)
        s2 = relabel(s1, pi) if rng.random() < 0.7 else random_graph(rng, 5, 3, labels=6)
        a = expect_phi_oracle(s1, s2, params, "injections")
        assert a == expect_phi_oracle(s1, s2, params, "permutations")
        assert a == expect_phi_closed(s1, s2, params)


def test_collapse_identity():
    from lowdeg_lab.verify import check_collapse

    assert check_collapse().violations == 0


def test_snr_examples():
    rho = Fraction(1, 2)
    assert snr_exact(ModelParams(8, 0.3, rho), 2).snr_squared == 1 + rho ** 2
    rep = snr_exact(ModelParams(8, 0.3, rho), 4)
    assert rep.snr_squared == Fraction(11, 8)
    assert rep.snr_squared_centered == Fraction(3, 8)
    r = Fraction(1, 3)
    assert snr_exact(ModelParams(12, 0.3, r), 6).snr_squared == 1 + r ** 2 + 2 * r ** 4 + 5 * r ** 6
    assert rep.snr >= 1
    assert sum(row["classes"] for row in rep.by_edge_count()) == 4


def test_snr_filters_classes_with_too_many_vertices():
    # 3K2 needs 6 vertices; at n=5 it cannot appear
    rep = snr_exact(ModelParams(5, 0.3, 0.5), 6)
    assert all(c.v_count <= 5 for c in rep.per_class)
    assert len(rep.per_class) == 1 + 1 + 2 + 4


def test_snr_upper_bound_values():
    assert snr_upper_bound(0, 5) == 1
    assert snr_upper_bound(0.1, 4) == pytest.approx(1 + 0.16 * math.exp(0.16))
    assert snr_upper_bound(0.1, 4) == pytest.approx(1.1878, abs=1e-4)


def test_snr_monotone_in_rho_and_d():
    prev = 0
    for rho in (0.1, 0.2, 0.3, 0.4):
        v = snr_exact(ModelParams(10, 0.3, rho), 6).snr
        assert v >= prev
        prev = v
    prev = 0
    for d in range(0, 13):
        v = snr_exact(ModelParams(10, 0.3, 0.4), d).snr
        assert v >= prev
        prev = v


def test_snr_admissible_cases():
    params = ModelParams(10, 0.3, Fraction(1, 2), d=4)
    everything = snr_admissible(params, 4)  # q d^6 ≥ 1
    unfiltered = sum(len(v) * params.rho ** (2 * k) for k, v in enumerate_classes(4).items())
    assert everything.snr_squared == unfiltered
    assert snr_admissible(ModelParams(10, 0.3, 0, d=4), 4).snr_squared == 1
    pp = PhiParams(10, 4, 0.1, a=1.0, b=-2.5)
    rep = snr_admissible(params, 4, pp)
    assert rep.snr_squared == 1 + params.rho ** 2


def test_optimal_coeffs_norm():
    params = ModelParams(8, 0.3, 0.5, d=4)
    f = optimal_coeffs(params, 4)
    assert math.sqrt(f.norm_sq()) == pytest.approx(snr_exact(params, 4).snr, rel=1e-10)
    assert optimal_coeffs(params, 0).entries == {(EMPTY, EMPTY): 1}
    with pytest.raises(ValueError):
        optimal_coeffs(ModelParams(9, 0.3, 0.5), 4)


def test_ratio_scale_invariance():
    params = ModelParams(6, 0.3, Fraction(1, 2))
    f = optimal_coeffs(params, 2)

    def ratio(g):
        mean = sum(c * expect_phi_closed(s1, s2, params) for (s1, s2), c in g.entries.items())
        return mean / math.sqrt(g.norm_sq())

    base = ratio(f)
    rng = random.Random(2)
    for _ in range(10):
        alpha = Fraction(rng.randint(1, 50), rng.randint(1, 50))
        assert ratio(f.scaled(alpha)) == pytest.approx(base, rel=1e-12)


def test_degree_bound_enforced():
    with pytest.raises(ValueError):
        PolyCoeffs({(TRI, EDGE): 1.0}, 3)


def test_eval_poly_constant_and_linear():
    rng = random.Random(4)
    const = PolyCoeffs({(EMPTY, EMPTY): 2.5}, 0)
    assert eval_poly(const, TRI, EDGE, 0.3) == 2.5
    f = random_poly(rng, 5, 2, 5)
    g = random_poly(rng, 5, 2, 5)
    for seed in range(5):
        a, b = sample_null(ModelParams(5, Fraction(1, 5), 0), seed)
        lhs = eval_poly(f.combine(3, g, -2), a, b, Fraction(1, 5))
        rhs = 3 * eval_poly(f, a, b, Fraction(1, 5)) - 2 * eval_poly(g, a, b, Fraction(1, 5))
        assert lhs == rhs


def test_batch_evaluator_matches_scalar():
    params = ModelParams(6, 0.3, 0.5, d=4)
    f = random_poly(random.Random(3), 6, 2, 12)
    ev = BatchEvaluator(f, 6, 0.3)
    batch = next(iter_batches(params, 1, 20))
    vals = ev(batch.A, batch.B)
    pairs = all_pairs(6)
    for t in range(20):
        A = LabeledGraph(p for p, x in zip(pairs, batch.A[t]) if x)
        B = LabeledGraph(p for p, x in zip(pairs, batch.B[t]) if x)
        assert vals[t] == pytest.approx(float(eval_poly(f, A, B, 0.3)), rel=1e-9, abs=1e-9)


def test_null_mean_is_constant_term():
    params = ModelParams(6, 0.3, 0.5)
    f = random_poly(random.Random(8), 6, 2, 8)
    f.entries[(EMPTY, EMPTY)] = 1.5
    ev = BatchEvaluator(f, 6, 0.3)
    vals = np.concatenate([ev(b.A, b.B) for b in iter_batches(params, 2, 100_000, null=True)])
    assert abs(vals.mean() - 1.5) < 4 * vals.std() / math.sqrt(len(vals))


def test_orthonormality_exact():
    assert check_orthonormality().violations == 0


def test_orthonormality_monte_carlo():
    params = ModelParams(5, 0.3, 0.0)
    basis = [(EMPTY, EMPTY), (EDGE, EMPTY), (EDGE, EDGE), (TRI, EMPTY), (LabeledGraph([(2, 3)]), EDGE)]
    batches = list(iter_batches(params, 5, 100_000, null=True))
    cols = []
    for s1, s2 in basis:
        ev = BatchEvaluator(PolyCoeffs({(s1, s2): 1.0}, 6), 5, 0.3)
        cols.append(np.concatenate([ev(b.A, b.B) for b in batches]))
    for i in range(len(basis)):
        for j in range(len(basis)):
            prod = cols[i] * cols[j]
            target = 1.0 if i == j else 0.0
            assert abs(prod.mean() - target) <= 4 * prod.std() / math.sqrt(len(prod)) + 1e-12


def test_mc_matches_closed_form():
    params = ModelParams(6, 0.3, 0.6)
    from lowdeg_lab.bounds import mc_phi_random_pi

    for s in (EDGE, LabeledGraph([(1, 2), (2, 3)])):
        est = mc_phi_random_pi(s, s, params, 100_000, 3)
        exact = float(expect_phi_closed(s, s, params))
        assert abs(est.mean - exact) < 4 * est.se


def test_labeled_copies():
    c = canonical_form(LabeledGraph([(1, 2), (2, 3)]))
    copies = labeled_copies(c, 4)
    assert len(copies) == 12 and len(set(copies)) == 12
