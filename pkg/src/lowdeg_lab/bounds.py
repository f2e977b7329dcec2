"""Expectation bounds for φ under the truncated correlated law, and Monte Carlo checks of them.

Every bound is evaluated as a logarithm first and exponentiated at the end,
so huge exponents of n and d do not overflow.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .graphs import LabeledGraph, Permutation, intersection, pair_index, relabel
from .iso import canonical_form, embeds, enumerate_classes
from .model import ModelParams, stream_rng
from .poly import psi_levels

SLACK_FIXED_PI = 1.05
SLACK_AVERAGED = 1.1
MC_CHUNK = 100_000
MC_STREAM_FIXED, MC_STREAM_RANDOM = 300, 301


class OffRegimeWarning(UserWarning):
    """Raised when ρ < 1/d, outside the standing assumption of the bounds."""


@dataclass(frozen=True)
class OverlapTriple:
    S0: LabeledGraph
    S1: LabeledGraph
    S2: LabeledGraph

    def __post_init__(self):
        e0, v0 = self.S0.e_count, self.S0.v_count
        if e0 > min(self.S1.e_count, self.S2.e_count) or v0 > min(self.S1.v_count, self.S2.v_count):
            raise ValueError("S0 must be no larger than S1 and S2")

    @classmethod
    def from_pi(cls, S1: LabeledGraph, S2: LabeledGraph, pi: Permutation) -> "OverlapTriple":
        """S0 = S1 ∩ π⁻¹(S2)."""
        return cls(intersection(S1, relabel(S2, pi.inverse())), S1, S2)

    @property
    def exponents(self) -> tuple[int, int, int, int, int, int]:
        return (self.S0.v_count, self.S1.v_count, self.S2.v_count,
                self.S0.e_count, self.S1.e_count, self.S2.e_count)


def _xlogy(k, x) -> float:
    """k·ln x with 0·ln 0 = 0 and k·ln 0 = -inf for k > 0."""
    if k == 0:
        return 0.0
    if x == 0:
        return -math.inf
    return k * math.log(x)


def _check_regime(params: ModelParams) -> bool:
    ok = params.rho >= 1 / params.d
    if not ok:
        warnings.warn(f"rho={float(params.rho)} < 1/d={1 / params.d}; bound used off-regime",
                      OffRegimeWarning, stacklevel=3)
    return ok


def log_l1_bound(v0, v1, v2, e0, e1, e2, rho, q) -> float:
    de = e1 + e2 - 2 * e0
    return _xlogy(e0, rho) + (de / 2) * math.log(4 * q)


def log_vertex_bound(v0, v1, v2, e0, e1, e2, rho, n, d) -> float:
    dv = v1 + v2 - 2 * v0
    de = e1 + e2 - 2 * e0
    return _xlogy(e0, rho) - (dv / 2) * (math.log(n) + 20 * math.log(d)) + (2 + de) * math.log(2)


def log_m_value(v0, v1, v2, e0, e1, e2, rho, n, d) -> float:
    dv = v1 + v2 - 2 * v0
    de = e1 + e2 - 2 * e0
    return _xlogy(e0, rho) - (dv / 2) * math.log(n) - 7 * de * math.log(d)


def l1_bound(t: OverlapTriple, params: ModelParams) -> float:
    _check_regime(params)
    return math.exp(log_l1_bound(*t.exponents, params.rho, params.q))


def vertex_bound(t: OverlapTriple, params: ModelParams) -> float:
    _check_regime(params)
    return math.exp(log_vertex_bound(*t.exponents, params.rho, params.n, params.d))


def m_value(t: OverlapTriple, params: ModelParams) -> float:
    return math.exp(log_m_value(*t.exponents, params.rho, params.n, params.d))


def common_subclasses(S1: LabeledGraph, S2: LabeledGraph):
    k = min(S1.e_count, S2.e_count)
    return [c for level in enumerate_classes(k).values() for c in level
            if embeds(c, S1) and embeds(c, S2)]


def expectation_bound(S1: LabeledGraph, S2: LabeledGraph, params: ModelParams) -> float:
    """Σ over classes H0 embeddable in both (the empty class included) of
    n^{-(v1+v2)/2} ρ^{e(H0)} d^{-6(e1+e2-2e(H0))} Aut(H0)."""
    _check_regime(params)
    n, d = params.n, params.d
    total = 0.0
    base = -(S1.v_count + S2.v_count) / 2 * math.log(n)
    for c in common_subclasses(S1, S2):
        de = S1.e_count + S2.e_count - 2 * c.e_count
        total += math.exp(base + _xlogy(c.e_count, params.rho) - 6 * de * math.log(d) + math.log(c.aut))
    return total


def log_bounds_mp(exponents, rho, q, n, d, dps: int = 50) -> tuple:
    """The three log-bounds recomputed with mpmath at ``dps`` digits."""
    import mpmath

    with mpmath.workdps(dps):
        v0, v1, v2, e0, e1, e2 = exponents
        dv = mpmath.mpf(v1 + v2 - 2 * v0)
        de = mpmath.mpf(e1 + e2 - 2 * e0)
        lr = e0 * mpmath.log(mpmath.mpf(rho)) if e0 else mpmath.mpf(0)
        ln, ld = mpmath.log(mpmath.mpf(n)), mpmath.log(mpmath.mpf(d))
        l1 = lr + de / 2 * mpmath.log(4 * mpmath.mpf(q))
        vb = lr - dv / 2 * (ln + 20 * ld) + (2 + de) * mpmath.log(2)
        mv = lr - dv / 2 * ln - 7 * de * ld
        return float(l1), float(vb), float(mv)


# the min-bound inequality as exponent arithmetic


def random_exponent_tuple(rng: np.random.Generator, e_max: int = 12):
    """Exponents (v0, v1, v2, e0, e1, e2) realizable by graphs without isolated vertices."""

    def vrange(e):
        lo = math.ceil((1 + math.sqrt(1 + 8 * e)) / 2) if e else 0
        return lo, 2 * e

    e1 = int(rng.integers(1, e_max + 1))
    e2 = int(rng.integers(1, e_max + 1))
    v1 = int(rng.integers(vrange(e1)[0], vrange(e1)[1] + 1))
    v2 = int(rng.integers(vrange(e2)[0], vrange(e2)[1] + 1))
    e0 = int(rng.integers(0, min(e1, e2) + 1))
    lo, hi = vrange(e0)
    hi = min(hi, v1, v2)
    v0 = int(rng.integers(lo, hi + 1)) if lo <= hi else lo
    return v0, v1, v2, e0, e1, e2


def min_bound_case(exponents) -> int:
    v0, v1, v2, e0, e1, e2 = exponents
    dv = v1 + v2 - 2 * v0
    de = e1 + e2 - 2 * e0
    if 4 * de <= 5 * dv - 1:
        return 1
    if 4 * de >= 5 * dv:
        return 2
    return 0


def min_bound_holds(exponents, log_n: float, log_q: float, d: float) -> tuple[bool, float]:
    """Check min{(4q)-term, vertex term} ≤ n^{-Δv/2} d^{-7Δe}; returns (holds, log excess).

    ρ-powers are common to all three sides and dropped.
    """
    v0, v1, v2, e0, e1, e2 = exponents
    dv = v1 + v2 - 2 * v0
    de = e1 + e2 - 2 * e0
    ld = math.log(d)
    l1 = (de / 2) * (math.log(4) + log_q)
    vb = -(dv / 2) * (log_n + 20 * ld) + (2 + de) * math.log(2)
    rhs = -(dv / 2) * log_n - 7 * de * ld
    excess = min(l1, vb) - rhs
    return excess <= 1e-12 * (1 + abs(rhs)), excess


@dataclass
class SweepResult:
    case: int
    n_log10: float
    instances: int
    violations: int
    max_log_excess: float


def min_bound_sweep(case: int, n_log10: float, per_case: int = 10_000, d: float = 100,
                    q_exponent: float = -0.9, seed: int = 0) -> SweepResult:
    """Randomized check of the min-bound inequality over exponent tuples in one case.

    n is passed as a base-10 logarithm so astronomically large n can be used;
    q = n^{q_exponent}.
    """
    rng = stream_rng(seed, 400, case, int(round(n_log10 * 1000)))
    log_n = n_log10 * math.log(10)
    log_q = q_exponent * log_n
    count = violations = 0
    worst = -math.inf
    while count < per_case:
        t = random_exponent_tuple(rng)
        if min_bound_case(t) != case:
            continue
        count += 1
        ok, excess = min_bound_holds(t, log_n, log_q, d)
        worst = max(worst, excess)
        violations += not ok
    return SweepResult(case, n_log10, count, violations, worst)


# Monte Carlo estimates of E[φ]


@dataclass
class McEstimate:
    mean: float
    se: float
    trials: int
    rejected: int = 0

    def verdict(self, bound: float, slack: float) -> str:
        """'pass', 'warning' (above the bound but within 4 SE) or 'fail'."""
        if abs(self.mean) <= slack * bound:
            return "pass"
        if abs(self.mean) - 4 * self.se <= slack * bound:
            return "warning"
        return "fail"

    def ratio(self, bound: float) -> float:
        return abs(self.mean) / bound if bound > 0 else math.inf


def _combine(chunks: list[np.ndarray], rejected: int = 0) -> McEstimate:
    x = np.concatenate(chunks)
    mean = float(np.mean(x))
    se = float(np.std(x, ddof=1) / math.sqrt(len(x))) if len(x) > 1 else math.inf
    return McEstimate(mean, se, len(x), rejected)


def _index(edges, n):
    return np.array([pair_index(u, v, n) for u, v in edges], dtype=np.int64)


def _event_is_certain(params: ModelParams, pp, k_cap) -> bool:
    from .truncation import PhiParams, event_certain

    pp = pp or PhiParams(params.n, params.d, params.q)
    k_cap = min(params.d ** 2, params.n) if k_cap is None else k_cap
    return event_certain(pp, k_cap)


def _rejection_path(S1, S2, params, trials, seed, pp, k_cap, pi):
    """Full-graph sampling with explicit rejection; used when the event can actually fail."""
    from .model import correlated_chunk, pair_map
    from .truncation import PhiParams, check_event_G
    from .graphs import all_pairs

    pp = pp or PhiParams(params.n, params.d, params.q)
    k_cap = min(params.d ** 2, params.n) if k_cap is None else k_cap
    hi, lo = (float(v) for v in psi_levels(params.q))
    pairs = all_pairs(params.n)
    c1, c2 = _index(S1.edges, params.n), _index(S2.edges, params.n)
    values: list[float] = []
    rejected = 0
    c = 0
    while len(values) < trials:
        batch = correlated_chunk(params, seed, c, 4096)
        c += 1
        if pi is not None:
            # regenerate B under the fixed permutation from the same I and K draws
            perm = np.tile(np.array(pi.images) - 1, (batch.A.shape[0], 1))
            rng = stream_rng(seed, MC_STREAM_FIXED + 10, c)
            K = rng.random(batch.A.shape) < float(params.s)
            pmap = pair_map(perm)
            B = np.zeros_like(batch.A)
            np.put_along_axis(B, pmap, batch.G & np.take_along_axis(K, pmap, axis=1), axis=1)
        else:
            B = batch.B
        za = np.where(batch.A[:, c1], hi, lo).prod(axis=1)
        zb = np.where(B[:, c2], hi, lo).prod(axis=1)
        for row in range(batch.A.shape[0]):
            G = LabeledGraph._from_sorted(tuple(pairs[i] for i in np.flatnonzero(batch.G[row])))
            if not check_event_G(G, pp, k_cap):
                rejected += 1
                continue
            values.append(za[row] * zb[row])
            if len(values) == trials:
                break
    return _combine([np.array(values)], rejected)


def mc_phi_fixed_pi(S1: LabeledGraph, S2: LabeledGraph, params: ModelParams, pi: Permutation,
                    trials: int, seed: int, pp=None, k_cap: int | None = None) -> McEstimate:
    """Estimate the mean of φ_{S1,S2} under the truncated law with π* = π.

    When no parent graph can violate the event the truncated law equals the
    plain one and only the parent pairs touched by S1 and π⁻¹(S2) are drawn.
    """
    if not _event_is_certain(params, pp, k_cap):
        return _rejection_path(S1, S2, params, trials, seed, pp, k_cap, pi)
    n = params.n
    hi, lo = (float(v) for v in psi_levels(params.q))
    inv = pi.inverse()
    parents2 = [relabel(LabeledGraph([f]), inv).edges[0] for f in S2.edges]
    universe = sorted(set(S1.edges) | set(parents2))
    pos = {e: i for i, e in enumerate(universe)}
    a_cols = [pos[e] for e in S1.edges]
    b_cols = [pos[e] for e in parents2]
    chunks = []
    done = c = 0
    while done < trials:
        size = min(MC_CHUNK, trials - done)
        rng = stream_rng(seed, MC_STREAM_FIXED, c)
        I = rng.random((size, len(universe))) < float(params.p)
        J = rng.random((size, len(a_cols))) < float(params.s)
        K = rng.random((size, len(b_cols))) < float(params.s)
        za = np.where(I[:, a_cols] & J, hi, lo).prod(axis=1)
        zb = np.where(I[:, b_cols] & K, hi, lo).prod(axis=1)
        chunks.append(za * zb)
        done += size
        c += 1
    return _combine(chunks)


def mc_phi_random_pi(S1: LabeledGraph, S2: LabeledGraph, params: ModelParams, trials: int, seed: int,
                     pp=None, k_cap: int | None = None) -> McEstimate:
    """Estimate the mean of φ_{S1,S2} under the truncated law with uniform π*."""
    if not _event_is_certain(params, pp, k_cap):
        return _rejection_path(S1, S2, params, trials, seed, pp, k_cap, None)
    n = params.n
    hi, lo = (float(v) for v in psi_levels(params.q))
    e1 = _index(S1.edges, n)
    f = np.array(S2.edges, dtype=np.int64) - 1
    chunks = []
    done = c = 0
    while done < trials:
        size = min(MC_CHUNK, trials - done)
        rng = stream_rng(seed, MC_STREAM_RANDOM, c)
        I1 = rng.random((size, len(e1))) < float(params.p)
        J = rng.random((size, len(e1))) < float(params.s)
        I2 = rng.random((size, len(f))) < float(params.p)
        K = rng.random((size, len(f))) < float(params.s)
        perm = rng.permuted(np.tile(np.arange(n), (size, 1)), axis=1)
        inv = np.argsort(perm, axis=1)
        if len(f):
            x = inv[:, f[:, 0]]
            y = inv[:, f[:, 1]]
            lo_, hi_ = np.minimum(x, y), np.maximum(x, y)
            parent = lo_ * n - lo_ * (lo_ + 1) // 2 + (hi_ - lo_ - 1)
            match = parent[:, :, None] == e1[None, None, :]
            shared = match.any(axis=2)
            which = match.argmax(axis=2)
            I_par = np.where(shared, np.take_along_axis(I1, which, axis=1), I2)
            zb = np.where(I_par & K, hi, lo).prod(axis=1)
        else:
            zb = np.ones(size)
        za = np.where(I1 & J, hi, lo).prod(axis=1)
        chunks.append(za * zb)
        done += size
        c += 1
    return _combine(chunks)
