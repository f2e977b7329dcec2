"""The centred edge-indicator basis, expectations under the correlated law, and SNR."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from math import isqrt

import numpy as np

from .graphs import EMPTY, LabeledGraph, all_pairs, pair_index, relabel
from .iso import (
    IsoClass,
    canonical_form,
    enumerate_classes,
    falling_factorial,
    labeled_copy_count,
)
from .model import ModelParams

ORACLE_PERMUTATION_CEILING = 9
OPTIMAL_N_CEILING = 8
OPTIMAL_D_CEILING = 6


def exact_sqrt(x):
    """Square root that stays rational when ``x`` is a Fraction with square numerator and denominator."""
    if isinstance(x, Fraction):
        rn, rd = isqrt(x.numerator), isqrt(x.denominator)
        if rn * rn == x.numerator and rd * rd == x.denominator:
            return Fraction(rn, rd)
        return math.sqrt(x)
    return math.sqrt(x)


def _check_q(q):
    if not 0 < q < 1:
        raise ValueError(f"q must lie in (0, 1), got {q}")


def psi_levels(q):
    """Values of one factor of ψ for a present and for an absent edge."""
    _check_q(q)
    sigma = exact_sqrt(q * (1 - q))
    return (1 - q) / sigma, -q / sigma


def psi_eval(S: LabeledGraph, X: LabeledGraph, q) -> float | Fraction:
    hi, lo = psi_levels(q)
    present = sum(1 for e in S.edges if e in X.edge_set)
    return hi ** present * lo ** (S.e_count - present)


def phi_eval(S1: LabeledGraph, S2: LabeledGraph, A: LabeledGraph, B: LabeledGraph, q):
    return psi_eval(S1, A, q) * psi_eval(S2, B, q)


def expect_phi_closed(S1: LabeledGraph, S2: LabeledGraph, params: ModelParams):
    """Mean of φ_{S1,S2} under the correlated law: ρ^|E| Aut/(n)_v when S1 ≅ S2, else 0."""
    if S1.e_count != S2.e_count or S1.v_count != S2.v_count:
        return 0 * params.rho
    c1, c2 = canonical_form(S1), canonical_form(S2)
    if c1.canon != c2.canon or c1.v_count > params.n:
        return 0 * params.rho
    return params.rho ** c1.e_count * Fraction(c1.aut, falling_factorial(params.n, c1.v_count))


def _count_edge_preserving_injections(S1: LabeledGraph, S2: LabeledGraph, n: int) -> int:
    """Injections f: V(S1) -> [n] with f(S1) = S2 as edge sets, by plain backtracking."""
    if S1.e_count != S2.e_count:
        return 0
    vs = list(S1.vertices)
    adj1 = S1.adjacency()
    target = S2.edge_set
    image: dict[int, int] = {}
    used: set[int] = set()
    count = 0

    def rec(i: int) -> None:
        nonlocal count
        if i == len(vs):
            mapped = {(min(image[a], image[b]), max(image[a], image[b])) for a, b in S1.edges}
            if mapped == target:
                count += 1
            return
        x = vs[i]
        for y in range(1, n + 1):
            if y in used:
                continue
            ok = True
            for z in adj1[x]:
                if z in image:
                    w = image[z]
                    if ((y, w) if y < w else (w, y)) not in target:
                        ok = False
                        break
            if not ok:
                continue
            image[x] = y
            used.add(y)
            rec(i + 1)
            used.discard(y)
            del image[x]

    rec(0)
    return count


def expect_phi_oracle(S1: LabeledGraph, S2: LabeledGraph, params: ModelParams, mode: str = "injections"):
    """ρ^|E(S1)| · #{π ∈ S_n : π(S1) = S2} / n!, counted directly."""
    n = params.n
    if S1.e_count != S2.e_count:
        return 0 * params.rho
    if mode == "permutations":
        if n > ORACLE_PERMUTATION_CEILING:
            raise ValueError(f"permutation mode supports n <= {ORACLE_PERMUTATION_CEILING}")
        target = S2.edge_set
        hits = 0
        for img in permutations(range(1, n + 1)):
            if all(((img[a - 1], img[b - 1]) if img[a - 1] < img[b - 1] else (img[b - 1], img[a - 1])) in target
                   for a, b in S1.edges):
                hits += 1
        return params.rho ** S1.e_count * Fraction(hits, math.factorial(n))
    if mode != "injections":
        raise ValueError(f"unknown oracle mode {mode!r}")
    if S1.v_count > n or S2.v_count > n:
        return 0 * params.rho
    inj = _count_edge_preserving_injections(S1, S2, n)
    # each injection extends to (n - v)! permutations of [n]
    hits = inj * math.factorial(n - S1.v_count)
    return params.rho ** S1.e_count * Fraction(hits, math.factorial(n))


# signal-to-noise


@dataclass
class SnrReport:
    snr: float
    snr_squared: float | Fraction
    per_class: dict[IsoClass, float | Fraction]
    d: int
    params: ModelParams
    max_edges: int
    filtered: bool = False

    @property
    def snr_squared_centered(self):
        """Sum without the constant (empty class) term."""
        return self.snr_squared - self.per_class.get(canonical_form(EMPTY), 0)

    def by_edge_count(self) -> list[dict]:
        rows: dict[int, dict] = {}
        for c, val in sorted(self.per_class.items()):
            row = rows.setdefault(c.e_count, {"edges": c.e_count, "classes": 0, "contribution": 0})
            row["classes"] += 1
            row["contribution"] += val
        return [dict(r, contribution=float(r["contribution"])) for r in rows.values()]

    def as_dict(self) -> dict:
        return {
            "snr": self.snr,
            "snr_squared": float(self.snr_squared),
            "snr_squared_centered": float(self.snr_squared_centered),
            "d": self.d,
            "max_edges": self.max_edges,
            "params": self.params.as_dict(),
            "per_class": self.by_edge_count(),
        }


def _class_sum(params: ModelParams, k_max: int, keep) -> dict[IsoClass, float | Fraction]:
    out = {}
    for k, level in enumerate_classes(k_max).items():
        for c in level:
            if c.v_count <= params.n and keep(c):
                out[c] = params.rho ** (2 * k)
    return out


def snr_exact(params: ModelParams, d: int) -> SnrReport:
    """Optimal degree-d SNR: classes with at most ⌊d/2⌋ edges (and at most n vertices)."""
    if d < 0:
        raise ValueError("d must be non-negative")
    k_max = d // 2
    per_class = _class_sum(params, k_max, lambda c: True)
    total = sum(per_class.values())
    return SnrReport(math.sqrt(total), total, per_class, d, params, k_max)


def snr_upper_bound(rho: float, d: int) -> float:
    if rho < 0 or d < 1:
        raise ValueError("need rho >= 0 and d >= 1")
    x = (rho * d) ** 2
    return 1 + x * math.exp(x)


def snr_admissible(params: ModelParams, d: int, pp=None) -> SnrReport:
    """Sum of ρ^{2|E|} over admissible classes with at most d edges."""
    from .truncation import PhiParams, is_admissible

    if pp is None:
        pp = PhiParams(params.n, d, params.q)
    per_class = _class_sum(params, d, lambda c: is_admissible(c.canon, pp))
    total = sum(per_class.values())
    return SnrReport(math.sqrt(total), total, per_class, d, params, d, filtered=True)


# explicit polynomials


@dataclass
class PolyCoeffs:
    entries: dict[tuple[LabeledGraph, LabeledGraph], float | Fraction] = field(default_factory=dict)
    d: int = 0

    def __post_init__(self):
        for s1, s2 in self.entries:
            if s1.e_count + s2.e_count > self.d:
                raise ValueError(f"term ({s1}, {s2}) exceeds degree {self.d}")

    def norm_sq(self):
        """Squared ℚ-norm, which is the plain sum of squares by orthonormality."""
        return sum(c * c for c in self.entries.values())

    def scaled(self, alpha) -> "PolyCoeffs":
        return PolyCoeffs({k: alpha * v for k, v in self.entries.items()}, self.d)

    def combine(self, alpha, other: "PolyCoeffs", beta) -> "PolyCoeffs":
        out = {k: alpha * v for k, v in self.entries.items()}
        for k, v in other.entries.items():
            out[k] = out.get(k, 0) + beta * v
        return PolyCoeffs(out, max(self.d, other.d))

    def __len__(self) -> int:
        return len(self.entries)


def labeled_copies(c: IsoClass, n: int) -> list[LabeledGraph]:
    """All S ⋐ K_n isomorphic to ``c``, in sorted order."""
    if c.v_count == 0:
        return [EMPTY]
    found = set()
    base = c.canon
    for img in permutations(range(1, n + 1), c.v_count):
        found.add(relabel(base, dict(zip(base.vertices, img))))
    return sorted(found)


def optimal_coeffs(params: ModelParams, d: int, n_ceiling: int = OPTIMAL_N_CEILING,
                   d_ceiling: int = OPTIMAL_D_CEILING) -> PolyCoeffs:
    """Coefficients proportional to the correlated-law means; only non-zero terms are stored."""
    if params.n > n_ceiling or d > d_ceiling:
        raise ValueError(f"optimal_coeffs supports n <= {n_ceiling}, d <= {d_ceiling}")
    entries = {}
    for k, level in enumerate_classes(d // 2).items():
        for c in level:
            if c.v_count > params.n:
                continue
            value = params.rho ** k * Fraction(c.aut, falling_factorial(params.n, c.v_count))
            copies = labeled_copies(c, params.n)
            assert len(copies) == labeled_copy_count(c, params.n)
            for s1 in copies:
                for s2 in copies:
                    entries[(s1, s2)] = value
    return PolyCoeffs(entries, d)


def eval_poly(coeffs: PolyCoeffs, A: LabeledGraph, B: LabeledGraph, q):
    cache_a: dict[LabeledGraph, object] = {}
    cache_b: dict[LabeledGraph, object] = {}
    total = 0
    for (s1, s2), c in coeffs.entries.items():
        if s1 not in cache_a:
            cache_a[s1] = psi_eval(s1, A, q)
        if s2 not in cache_b:
            cache_b[s2] = psi_eval(s2, B, q)
        total += c * cache_a[s1] * cache_b[s2]
    return total


class BatchEvaluator:
    """Evaluate a fixed polynomial on boolean trial matrices (columns in ``all_pairs`` order).

    f = rowsum((Ψ_A C) ⊙ Ψ_B) where Ψ_X holds ψ_S(X) for the distinct S in the support.
    """

    def __init__(self, coeffs: PolyCoeffs, n: int, q):
        from scipy import sparse

        self.n = n
        self.hi, self.lo = (float(v) for v in psi_levels(q))
        left = sorted({k[0] for k in coeffs.entries})
        right = sorted({k[1] for k in coeffs.entries})
        li = {s: i for i, s in enumerate(left)}
        ri = {s: i for i, s in enumerate(right)}
        rows, cols, vals = [], [], []
        for (s1, s2), c in coeffs.entries.items():
            rows.append(li[s1])
            cols.append(ri[s2])
            vals.append(float(c))
        self.C = sparse.csr_matrix((vals, (rows, cols)), shape=(len(left), len(right)))
        self.left = [self._cols(s) for s in left]
        self.right = [self._cols(s) for s in right]

    def _cols(self, s: LabeledGraph) -> np.ndarray:
        return np.array([pair_index(u, v, self.n) for u, v in s.edges], dtype=np.int64)

    def _psi_matrix(self, X: np.ndarray, graphs: list[np.ndarray]) -> np.ndarray:
        z = np.where(X, self.hi, self.lo)
        out = np.empty((X.shape[0], len(graphs)))
        for j, idx in enumerate(graphs):
            out[:, j] = np.prod(z[:, idx], axis=1) if len(idx) else 1.0
        return out

    def __call__(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        PA = self._psi_matrix(A, self.left)
        PB = self._psi_matrix(B, self.right)
        left = np.asarray((self.C.T @ PA.T).T)
        return np.sum(left * PB, axis=1)


def edge_correlation_terms(A: np.ndarray, B: np.ndarray, perm: np.ndarray, q) -> np.ndarray:
    """Per-trial sum over pairs e of φ_{e, π(e)}, the planted-frame degree-1 statistic."""
    from .model import pair_map

    hi, lo = (float(v) for v in psi_levels(q))
    za = np.where(A, hi, lo)
    zb = np.where(np.take_along_axis(B, pair_map(perm), axis=1), hi, lo)
    return np.sum(za * zb, axis=1)


__all__ = [
    "BatchEvaluator",
    "PolyCoeffs",
    "SnrReport",
    "all_pairs",
    "eval_poly",
    "expect_phi_closed",
    "expect_phi_oracle",
    "labeled_copies",
    "optimal_coeffs",
    "phi_eval",
    "psi_eval",
    "snr_admissible",
    "snr_exact",
    "snr_upper_bound",
]
