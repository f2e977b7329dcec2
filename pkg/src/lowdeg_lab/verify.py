"""Verification batteries run by ``lowdeg-lab verify`` and by the acceptance tests.

Each check returns a :class:`CheckResult`; a suite is a list of them.
Instance counts default to the values used for acceptance and can be
scaled down for quick runs.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations

import numpy as np

from . import bounds as bd
from .graphs import (
    EMPTY,
    LabeledGraph,
    Permutation,
    complete_graph,
    intersection,
    random_graph,
    relabel,
    union,
)
from .iso import (
    aut_count,
    canonical_form,
    enumerate_classes,
    falling_factorial,
    labeled_copy_count,
    unlabeled_tree_counts,
)
from .model import ModelParams, sample_correlated, sample_truncated
from .poly import (
    PolyCoeffs,
    eval_poly,
    expect_phi_closed,
    expect_phi_oracle,
    labeled_copies,
    psi_eval,
)
from .truncation import (
    PhiParams,
    a_set,
    check_event_G,
    dsub,
    g_complement_union_bound,
    is_admissible,
    is_bad,
    lambda_expansion,
    log_phi,
    project_admissible,
    psi_prime_eval,
)


@dataclass
class CheckResult:
    name: str
    instances: int
    violations: int = 0
    max_ratio: float = math.nan
    note: str = ""
    verdict: str = field(default="")

    def __post_init__(self):
        if not self.verdict:
            self.verdict = "pass" if self.violations == 0 else "fail"

    @property
    def ok(self) -> bool:
        return self.verdict in ("pass", "warning")

    def as_dict(self) -> dict:
        mr = self.max_ratio if math.isfinite(self.max_ratio) else None
        return {"name": self.name, "instances": self.instances, "violations": self.violations,
                "max_ratio": mr, "verdict": self.verdict, "note": self.note}


# contrived weights used where the natural ones never produce bad graphs at desk scale
CYCLES_BAD = dict(n=8, d=4, q=Fraction(1, 10), a=1.0, b=-1.3)  # triangles and 4-cycles bad, trees on at most 6 vertices good
K4_BAD = dict(n=100, d=4, q=0.1, a=1.0, b=-1.0)  # K4 bad, K4 minus an edge good
PATHS_BAD = dict(n=10, d=4, q=0.1, a=1.0, b=-2.5)  # every 2-edge graph bad, a single edge good


def _rng(seed: int, tag: int) -> random.Random:
    return random.Random(seed * 1_000_003 + tag)


def _random_subgraph(rng: random.Random, S: LabeledGraph) -> LabeledGraph:
    return LabeledGraph._from_sorted(tuple(e for e in S.edges if rng.random() < 0.5))


def _random_pp(rng: random.Random) -> PhiParams:
    return PhiParams(rng.randint(3, 1000), rng.randint(1, 200), rng.uniform(1e-6, 0.9),
                     a=rng.uniform(0.1, 20), b=rng.uniform(-20, 5))


# graph facts


@lru_cache(maxsize=None)
def _completions(v: int, k: int, l: int, e: int) -> int:
    """Edge sets of size l on v+k vertices avoiding e fixed old-old pairs and covering all k new vertices."""
    old_pairs = [(i, j) for i in range(v) for j in range(i + 1, v)][e:]
    new_pairs = [(i, j) for j in range(v, v + k) for i in range(j)]
    pool = old_pairs + new_pairs
    count = 0
    for combo in combinations(pool, l):
        covered = {x for p in combo for x in p if x >= v}
        if len(covered) == k:
            count += 1
    return count


def suite_graph_facts(instances: int = 10_000, seed: int = 0) -> list[CheckResult]:
    out = []
    rng = _rng(seed, 1)
    bad = 0
    for _ in range(instances):
        S = random_graph(rng, 7, 10, labels=9)
        T = random_graph(rng, 7, 10, labels=9)
        U, I = union(S, T), intersection(S, T)
        if U.v_count + I.v_count > S.v_count + T.v_count or U.e_count + I.e_count != S.e_count + T.e_count:
            bad += 1
    out.append(CheckResult("vertex/edge modularity", instances, bad))

    rng = _rng(seed, 2)
    pps = [_random_pp(rng) for _ in range(5)]
    bad = 0
    worst = -math.inf
    for pp in pps:
        for _ in range(instances):
            S = random_graph(rng, 7, 10, labels=9)
            T = random_graph(rng, 7, 10, labels=9)
            lhs = log_phi(union(S, T), pp) + log_phi(intersection(S, T), pp)
            rhs = log_phi(S, pp) + log_phi(T, pp)
            worst = max(worst, lhs - rhs)
            if lhs > rhs + 1e-9 * (1 + abs(rhs)):
                bad += 1
    out.append(CheckResult("Φ submodularity (5 weight sets)", instances * len(pps), bad,
                           note=f"max log excess {worst:.3g}"))

    rng = _rng(seed, 3)
    bad = 0
    for _ in range(instances):
        T = random_graph(rng, 7, 12)
        S = _random_subgraph(rng, T)
        bound = aut_count(T) * T.v_count ** (2 * (T.e_count - S.e_count)) if T.e_count else 1
        if aut_count(S) > bound:
            bad += 1
    out.append(CheckResult("automorphism growth", instances, bad))

    rng = _rng(seed, 4)
    bad = 0
    for _ in range(instances):
        n = rng.randint(3, 7)
        S = random_graph(rng, min(n, 4), 4, labels=n)
        v = S.v_count
        k = rng.randint(0, n - v)
        l = rng.randint(0, 3)
        count = math.comb(n - v, k) * _completions(v, k, l, S.e_count)
        if count > n ** k * (v + k) ** (2 * l):
            bad += 1
    out.append(CheckResult("supergraph count", instances, bad))

    rng = _rng(seed, 5)
    bad = 0
    for _ in range(instances):
        S = random_graph(rng, 6, 8)
        e = S.e_count
        k = rng.randint(0, e)
        count = sum(1 for _ in combinations(S.edges, e - k))
        if count > math.comb(e, k) or math.comb(e, k) > e ** k:
            bad += 1
    out.append(CheckResult("subgraph count", instances, bad))
    return out


def suite_census(k_max: int = 6, tree_v: int = 10) -> list[CheckResult]:
    expected = [1, 1, 2, 5, 11, 26, 68, 177, 497][: k_max + 1]
    got = [len(v) for v in enumerate_classes(k_max).values()]
    trees = [1, 1, 1, 2, 3, 6, 11, 23, 47, 106, 235, 551][:tree_v]
    got_trees = [unlabeled_tree_counts(tree_v)[v] for v in range(1, tree_v + 1)]
    return [
        CheckResult("class counts by edges", k_max + 1, int(got != expected), note=str(got)),
        CheckResult("unlabeled tree counts by vertices", tree_v, int(got_trees != trees), note=str(got_trees)),
    ]


# expectations


def check_closed_vs_oracle(ns=(6, 7, 8), k_max: int = 4, rho=Fraction(1, 2)) -> CheckResult:
    classes = [c for level in enumerate_classes(k_max).values() for c in level]
    bad = total = 0
    for n in ns:
        params = ModelParams(n, Fraction(3, 10), rho)
        rng = _rng(n, 6)
        for c1 in classes:
            for c2 in classes:
                # place the second graph at random labels so isomorphic pairs differ as labeled graphs
                S2 = relabel(c2.canon, Permutation.random(n, rng)) if c2.v_count <= n else c2.canon
                total += 1
                if expect_phi_closed(c1.canon, S2, params) != expect_phi_oracle(c1.canon, S2, params):
                    bad += 1
    return CheckResult("closed form = injection oracle (class pairs)", total, bad)


def check_copy_counts(n_max: int = 9, k_max: int = 4) -> CheckResult:
    bad = total = 0
    for c in (c for level in enumerate_classes(k_max).values() for c in level):
        for n in range(max(c.v_count, 1), n_max + 1):
            total += 1
            count = labeled_copy_count(c, n)
            if count * c.aut != falling_factorial(n, c.v_count):
                bad += 1
            elif count != len(labeled_copies(c, n)):
                bad += 1
    return CheckResult("copy count x Aut = falling factorial = exhaustive", total, bad)


def check_collapse(n: int = 6, k_max: int = 3, rho=Fraction(2, 5)) -> CheckResult:
    """Σ over labeled pairs of a class of the squared closed-form mean equals ρ^{2|E|}."""
    params = ModelParams(n, Fraction(1, 5), rho)
    bad = total = 0
    for c in (c for level in enumerate_classes(k_max).values() for c in level):
        if c.v_count > n:
            continue
        total += 1
        copies = labeled_copies(c, n)
        s = sum(expect_phi_closed(a, b, params) ** 2 for a in copies for b in copies)
        if s != rho ** (2 * c.e_count):
            bad += 1
    return CheckResult("labeled-pair sum of squared means collapses to ρ^{2|E|}", total, bad)


def suite_expectations(quick: bool = False) -> list[CheckResult]:
    ns = (6,) if quick else (6, 7, 8)
    return [
        check_closed_vs_oracle(ns),
        check_copy_counts(7 if quick else 9),
        check_collapse(),
    ]


# orthonormality


def check_orthonormality(max_degree: int = 3) -> CheckResult:
    """Exact Gram matrix of the basis at n=4, q=1/5, in integers.

    ψ factors are 2 (present) and -1/2 (absent); scaling by 2^max_degree
    makes every basis value an integer, and 5^12 clears the weights.
    """
    pairs = [(i, j) for i in range(1, 5) for j in range(i + 1, 5)]
    m = len(pairs)
    basis = []
    for da in range(max_degree + 1):
        for db in range(max_degree + 1 - da):
            for a in combinations(range(m), da):
                for b in combinations(range(m), db):
                    basis.append((a, b))
    xs = np.array([[(x >> i) & 1 for i in range(2 * m)] for x in range(1 << (2 * m))], dtype=np.int64)
    scale = 2 ** max_degree
    # a present factor contributes 4 in units of 1/2 and an absent one -1
    vals = np.empty((len(xs), len(basis)), dtype=np.int64)
    for j, (a, b) in enumerate(basis):
        cols = list(a) + [m + i for i in b]
        deg = len(cols)
        v = np.prod(np.where(xs[:, cols] == 1, 4, -1), axis=1) if cols else np.ones(len(xs), dtype=np.int64)
        vals[:, j] = v * 2 ** (max_degree - deg)  # (value * 2^deg) * 2^(max-deg) = value * scale
    weights = 4 ** (2 * m - xs.sum(axis=1))
    gram = vals.T @ (vals * weights[:, None])
    target = scale * scale * 5 ** (2 * m)
    ok = np.array_equal(gram, target * np.eye(len(basis), dtype=np.int64))
    return CheckResult(f"exact Gram matrix, n=4, degree <= {max_degree}", len(basis) ** 2, int(not ok))


def suite_orthonormality() -> list[CheckResult]:
    return [check_orthonormality()]


# truncation calculus


def check_subgraph_closure(instances: int = 1000, seed: int = 0) -> CheckResult:
    rng = _rng(seed, 10)
    pp = PhiParams(**CYCLES_BAD)
    bad = done = 0
    while done < instances:
        S = random_graph(rng, 8, 9)
        if not is_admissible(S, pp):
            continue
        done += 1
        if not is_admissible(_random_subgraph(rng, S), pp):
            bad += 1
    return CheckResult("subgraphs of admissible graphs are admissible", instances, bad)


def _planted_inadmissible(rng: random.Random) -> LabeledGraph:
    S = random_graph(rng, 7, 6, labels=8)
    tri = rng.sample(range(1, 9), 3)
    return union(S, complete_graph(tri))


def check_completions(instances: int = 200, seed: int = 0) -> CheckResult:
    rng = _rng(seed, 11)
    pp = PhiParams(**CYCLES_BAD)
    bad = 0
    for _ in range(instances):
        S = _planted_inadmissible(rng)
        assert not is_admissible(S, pp)
        members = a_set(S, pp)
        if len(members) > 2 ** dsub(S, pp).e_count:
            bad += 1
        for H in members:
            if not is_admissible(H, pp) or log_phi(H, pp) < log_phi(S, pp) - 1e-9:
                bad += 1
    return CheckResult("completions admissible with Φ(H) ≥ Φ(S)", instances, bad)


def _subsets(S: LabeledGraph):
    for r in range(S.e_count + 1):
        for combo in combinations(S.edges, r):
            yield LabeledGraph._from_sorted(combo)


def check_lambda(instances: int = 50, seed: int = 0) -> list[CheckResult]:
    rng = _rng(seed, 12)
    pp = PhiParams(**CYCLES_BAD)
    q = pp.q
    bad_identity = bad_bound = pairs = 0
    worst = 0.0
    for i in range(instances):
        if i % 2:
            S = random_graph(rng, 6, 5, labels=8)
        else:
            tri = rng.sample(range(1, 9), 3)
            extra = random_graph(rng, 5, 2, labels=8)
            S = union(complete_graph(tri), extra)
        lam = lambda_expansion(S, pp, q)
        for X in _subsets(S):
            lhs = psi_prime_eval(S, X, pp, q)
            rhs = sum(v * psi_eval(H, X, q) for H, v in lam.items())
            if lhs != rhs:
                bad_identity += 1
        for H, v in lam.items():
            pairs += 1
            cap = (4 * math.sqrt(q)) ** (S.e_count - H.e_count)
            worst = max(worst, abs(float(v)) / cap)
            if abs(v) > cap * (1 + 1e-12):
                bad_bound += 1
    return [
        CheckResult("ψ' = Σ Λ ψ_H on every input (exact)", instances, bad_identity),
        CheckResult("|Λ_S(H)| ≤ (4√q)^gap", pairs, bad_bound, max_ratio=worst),
    ]


def _exists_bad_bruteforce(G: LabeledGraph, pp: PhiParams, k_cap: int) -> bool:
    verts = G.vertices
    for r in range(1, min(k_cap, len(verts)) + 1):
        for W in combinations(verts, r):
            H = G.induced(W)
            if H.e_count and is_bad(H, pp):
                return True
    return False


def check_event_equivalence(instances: int = 100, seed: int = 0) -> CheckResult:
    rng = _rng(seed, 13)
    bad = 0
    for i in range(instances):
        pp = PhiParams(**(CYCLES_BAD if i % 2 else K4_BAD))
        G = random_graph(rng, 8, 14, labels=8)
        k_cap = rng.randint(1, 8)
        if check_event_G(G, pp, k_cap) == _exists_bad_bruteforce(G, pp, k_cap):
            bad += 1
    return CheckResult("event check = brute-force bad-subgraph scan", instances, bad)


def check_event_implies_admissible(instances: int = 100, seed: int = 0) -> CheckResult:
    rng = _rng(seed, 14)
    pp = PhiParams(**CYCLES_BAD)
    bad = total = 0
    while total < instances:
        G = random_graph(rng, 8, 7, labels=8)
        if not check_event_G(G, pp, 8):
            continue
        total += 1
        for _ in range(5):
            if not is_admissible(_random_subgraph(rng, G), pp):
                bad += 1
    return CheckResult("event holds => every subgraph admissible", instances, bad)


def random_poly(rng: random.Random, n: int, max_edges: int, terms: int) -> PolyCoeffs:
    entries = {}
    while len(entries) < terms:
        s1 = random_graph(rng, n, max_edges, labels=n)
        s2 = random_graph(rng, n, max_edges, labels=n)
        entries[(s1, s2)] = Fraction(rng.randint(-20, 20), rng.randint(1, 10))
    return PolyCoeffs(entries, 2 * max_edges)


def check_projection(instances: int = 100, samples: int = 1000, seed: int = 0) -> list[CheckResult]:
    rng = _rng(seed, 15)
    pp = PhiParams(**CYCLES_BAD)
    polys = []
    bad = 0
    worst = 0.0
    while len(polys) < instances:
        f = random_poly(rng, 5, 4, 6)
        if all(is_admissible(a, pp) and is_admissible(b, pp) for a, b in f.entries):
            continue
        polys.append(f)
        g = project_admissible(f, pp)
        if any(not (is_admissible(a, pp) and is_admissible(b, pp)) for a, b in g.entries):
            bad += 1
        ratio = g.norm_sq() / f.norm_sq()
        worst = max(worst, float(ratio))
        if ratio > 8:
            bad += 1
    norm = CheckResult("projection supported on admissible pairs with norm ≤ 8×", instances, bad, max_ratio=worst)

    params = ModelParams(5, Fraction(1, 10), Fraction(1, 2), d=4)
    projected = [(f, project_admissible(f, pp)) for f in polys[:10]]
    mismatches = 0
    for t in range(samples):
        sample = sample_truncated(params, 10_000 + t, 5, 1000, pp=pp)
        f, g = projected[t % len(projected)]
        if eval_poly(f, sample.A, sample.B, pp.q) != eval_poly(g, sample.A, sample.B, pp.q):
            mismatches += 1
    agree = CheckResult("projected polynomial agrees on truncated samples (exact)", samples, mismatches)
    return [norm, agree]


def check_projection_fixed_points(instances: int = 50, seed: int = 0) -> CheckResult:
    rng = _rng(seed, 16)
    pp = PhiParams(**CYCLES_BAD)
    bad = done = 0
    while done < instances:
        f = random_poly(rng, 6, 3, 4)
        if not all(is_admissible(a, pp) and is_admissible(b, pp) for a, b in f.entries):
            continue
        done += 1
        if project_admissible(f, pp).entries != f.entries:
            bad += 1
    return CheckResult("projection fixes admissible polynomials", instances, bad)


TRUNCATION_POINTS = [
    # (model kwargs, weight overrides)
    (dict(n=8, q=0.1, rho=0.5, d=4), dict(a=1.0, b=-1.3)),
    (dict(n=10, q=0.05, rho=0.5, d=4), dict(a=1.2, b=-1.3)),
    (dict(n=20, q=0.03, rho=0.4, d=4), dict(a=1.5, b=-1.0)),
]


def check_truncation_probability(samples: int = 10_000, seed: int = 0) -> list[CheckResult]:
    out = []
    for idx, (mk, ov) in enumerate(TRUNCATION_POINTS):
        params = ModelParams(**mk)
        pp = PhiParams(params.n, params.d, params.q, **ov)
        k_cap = min(params.d ** 2, params.n)
        fails = sum(
            not check_event_G(sample_correlated(params, seed * 1_000_000 + idx * 100_000 + t).G, pp, k_cap)
            for t in range(samples)
        )
        freq = fails / samples
        se = math.sqrt(max(freq * (1 - freq), 1 / samples) / samples)
        bound = g_complement_union_bound(pp, float(params.p), k_cap)
        ok = freq <= bound + 4 * se
        out.append(CheckResult(
            f"event failure ≤ union bound (n={params.n})", samples, int(not ok),
            max_ratio=freq / bound if bound else math.inf,
            note=f"empirical {freq:.4f} ± {se:.4f}, bound {bound:.4f}",
        ))
    return out


def suite_truncation(quick: bool = False) -> list[CheckResult]:
    s = 10 if quick else 1
    return [
        check_subgraph_closure(1000 // s),
        check_completions(200 // s),
        *check_lambda(50 // s),
        check_event_equivalence(100 // s),
        check_event_implies_admissible(100 // s),
        check_projection_fixed_points(50 // s),
        *check_projection(100 // s, 1000 // s),
        *check_truncation_probability(10_000 // s),
    ]


# bounds


BOUNDS_PARAMS = dict(n=30, q=0.1, rho=0.5, d=4)
SWEEP_N_LOG10 = (3, 6, 9)


def bounds_triples(count: int = 20, seed: int = 0) -> list[bd.OverlapTriple]:
    rng = _rng(seed, 20)
    out = []
    ident = Permutation.identity(BOUNDS_PARAMS["n"])
    while len(out) < count:
        S1 = random_graph(rng, 5, 3, labels=6)
        if S1.e_count == 0:
            continue
        r = rng.random()
        if r < 0.4:
            S2 = S1
        elif r < 0.7:
            S2 = union(_random_subgraph(rng, S1), random_graph(rng, 4, 2, labels=6))
        else:
            S2 = random_graph(rng, 5, 3, labels=8)
        if S2.e_count == 0:
            continue
        out.append(bd.OverlapTriple.from_pi(S1, S2, ident))
    return out


def bounds_pairs(count: int = 10, seed: int = 0) -> list[tuple[LabeledGraph, LabeledGraph]]:
    rng = _rng(seed, 21)
    params = ModelParams(**BOUNDS_PARAMS)
    pp = PhiParams(params.n, params.d, params.q)
    out = []
    while len(out) < count:
        S1 = random_graph(rng, 4, 2, labels=30)
        S2 = random_graph(rng, 4, 2, labels=30)
        if len(out) % 2 == 0 and S1.e_count:
            # an isomorphic copy, so the mean is non-zero
            pi = Permutation.random(30, rng)
            S2 = relabel(S1, pi)
        if S1.e_count == 0 or S2.e_count == 0:
            continue
        if is_admissible(S1, pp) and is_admissible(S2, pp):
            out.append((S1, S2))
    return out


def check_fixed_pi_bounds(trials: int = 100_000, count: int = 20, seed: int = 0) -> list[CheckResult]:
    params = ModelParams(**BOUNDS_PARAMS)
    ident = Permutation.identity(params.n)
    rows = {"l1": [], "vertex": []}
    for i, t in enumerate(bounds_triples(count, seed)):
        est = bd.mc_phi_fixed_pi(t.S1, t.S2, params, ident, trials, seed * 1000 + i)
        rows["l1"].append((est, bd.l1_bound(t, params)))
        rows["vertex"].append((est, bd.vertex_bound(t, params)))
    out = []
    for name, label in (("l1", "L1 bound, fixed π"), ("vertex", "vertex-exponent bound, fixed π")):
        verdicts = [est.verdict(b, bd.SLACK_FIXED_PI) for est, b in rows[name]]
        ratio = max(est.ratio(b) for est, b in rows[name])
        out.append(CheckResult(label, len(verdicts), verdicts.count("fail"), max_ratio=ratio,
                               note=f"slack {bd.SLACK_FIXED_PI}, {verdicts.count('warning')} within-noise warnings",
                               verdict="fail" if "fail" in verdicts else ("warning" if "warning" in verdicts else "pass")))
    return out


def check_averaged_bound(trials: int = 1_000_000, count: int = 10, seed: int = 0) -> CheckResult:
    params = ModelParams(**BOUNDS_PARAMS)
    verdicts = []
    ratio = 0.0
    exact_ratio = 0.0
    for i, (S1, S2) in enumerate(bounds_pairs(count, seed)):
        bound = bd.expectation_bound(S1, S2, params)
        est = bd.mc_phi_random_pi(S1, S2, params, trials, seed * 1000 + i)
        verdicts.append(est.verdict(bound, bd.SLACK_AVERAGED))
        ratio = max(ratio, est.ratio(bound))
        exact_ratio = max(exact_ratio, float(expect_phi_closed(S1, S2, params)) / bound)
    return CheckResult("averaged expectation bound", count, verdicts.count("fail"), max_ratio=ratio,
                       note=f"slack {bd.SLACK_AVERAGED}; exact closed-form/bound max {exact_ratio:.4f}",
                       verdict="fail" if "fail" in verdicts else ("warning" if "warning" in verdicts else "pass"))


def check_min_bound_sweep(per_case: int = 10_000, n_log10=SWEEP_N_LOG10, seed: int = 0) -> list[CheckResult]:
    out = []
    for case in (1, 2):
        results = [bd.min_bound_sweep(case, nl, per_case, seed=seed) for nl in n_log10]
        viol = sum(r.violations for r in results)
        worst = max(r.max_log_excess for r in results)
        out.append(CheckResult(
            f"min-bound inequality, case {case}, q=n^-0.9, d=100", sum(r.instances for r in results), viol,
            max_ratio=math.exp(min(worst, 700)),
            note="n = " + ", ".join(f"1e{nl:g}: {r.violations}" for nl, r in zip(n_log10, results)),
        ))
    return out


def check_log_precision(instances: int = 200, seed: int = 0) -> CheckResult:
    rng = np.random.default_rng(seed)
    bad = 0
    for _ in range(instances):
        t = bd.random_exponent_tuple(rng)
        rho, q, n, d = 0.5, 1e-4, 1e6, 100
        hi = bd.log_bounds_mp(t, rho, q, n, d)
        lo = (bd.log_l1_bound(*t, rho, q), bd.log_vertex_bound(*t, rho, n, d), bd.log_m_value(*t, rho, n, d))
        if any(abs(a - b) >= 1e-9 * max(1.0, abs(a)) for a, b in zip(hi, lo)):
            bad += 1
    return CheckResult("log-space bounds stable at 50 digits", instances, bad)


def suite_bounds(quick: bool = False) -> list[CheckResult]:
    if quick:
        return [*check_min_bound_sweep(1000), check_log_precision(50),
                *check_fixed_pi_bounds(20_000, 5), check_averaged_bound(100_000, 4)]
    return [*check_min_bound_sweep(), check_log_precision(),
            *check_fixed_pi_bounds(), check_averaged_bound()]


SUITES = {
    "graph-facts": lambda quick: suite_graph_facts(1000 if quick else 10_000) + suite_census(),
    "expectations": lambda quick: suite_expectations(quick),
    "orthonormality": lambda quick: suite_orthonormality(),
    "truncation": lambda quick: suite_truncation(quick),
    "bounds": lambda quick: suite_bounds(quick),
}


def run_suite(name: str, quick: bool = False) -> list[CheckResult]:
    if name == "all":
        return [r for key in SUITES for r in SUITES[key](quick)]
    return SUITES[name](quick)
