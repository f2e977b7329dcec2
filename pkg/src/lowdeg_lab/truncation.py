"""The Φ weight, bad and admissible graphs, the parent-graph event and the admissible projection.

All weights live in log space: log Φ(H) = a|V(H)| + b|E(H)| and H is bad
when log Φ(H) < -ln ln n. For b < 0 adding edges on a fixed vertex set only
lowers log Φ, so searches run over vertex subsets with induced edges.

Pruning: if W is an inclusion-minimal bad vertex set then removing any
vertex x must leave a good set, which forces a < |b| deg_W(x). So every
vertex of W has internal degree > a/|b| and W lies in the strict
(a/|b|)-core. Minimizers of log Φ satisfy the same with ≥, hence lie in the
weak core.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from scipy.special import gammaln
from scipy.stats import binom

from .graphs import EMPTY, LabeledGraph, difference, union
from .iso import enumerate_classes
from .poly import PolyCoeffs, exact_sqrt, psi_eval, psi_levels

COMPONENT_BUDGET = 22
SUBSET_EDGE_BUDGET = 16
NEVER = math.inf
TIE_TOL = 1e-12


@dataclass(frozen=True)
class PhiParams:
    n: int
    d: int
    q: float | Fraction
    a: float | None = None
    b: float | None = None
    overridden: bool = field(init=False, default=False)
    threshold: float = field(init=False, default=0.0)

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("n must be at least 3 so that ln ln n is defined")
        if self.d < 1:
            raise ValueError("d must be at least 1")
        if not 0 < self.q < 1:
            raise ValueError(f"q must lie in (0, 1), got {self.q}")
        overridden = self.a is not None or self.b is not None
        if self.a is None:
            object.__setattr__(self, "a", (1 + 4 / self.d) * math.log(self.n) + 20 * math.log(self.d))
        if self.b is None:
            object.__setattr__(self, "b", math.log(self.q) + 6 * math.log(self.d))
        if self.a <= 0:
            raise ValueError("the per-vertex weight a must be positive")
        object.__setattr__(self, "overridden", overridden)
        object.__setattr__(self, "threshold", -math.log(math.log(self.n)))

    @classmethod
    def from_model(cls, params, d: int | None = None, **overrides) -> "PhiParams":
        return cls(params.n, d if d is not None else params.d, params.q, **overrides)

    @property
    def in_regime(self) -> bool:
        """Whether the parameters sit in the asymptotic regime the weights were designed for."""
        return not self.overridden and self.d >= 100

    @property
    def core_degree(self) -> float:
        return self.a / -self.b if self.b < 0 else math.inf

    def as_dict(self) -> dict:
        return {"n": self.n, "d": self.d, "q": float(self.q), "a": self.a, "b": self.b,
                "threshold": self.threshold, "overridden": self.overridden, "in_regime": self.in_regime}


def log_phi(S: LabeledGraph, pp: PhiParams) -> float:
    return pp.a * S.v_count + pp.b * S.e_count


def is_bad(S: LabeledGraph, pp: PhiParams) -> bool:
    return log_phi(S, pp) < pp.threshold


# vertex-subset search


def _bit_adjacency(S: LabeledGraph):
    verts = list(S.vertices)
    index = {x: i for i, x in enumerate(verts)}
    adj = [0] * len(verts)
    for u, v in S.edges:
        adj[index[u]] |= 1 << index[v]
        adj[index[v]] |= 1 << index[u]
    return verts, adj


def _core(adj: list[int], lam: float, strict: bool) -> int:
    """Bitmask of the vertices surviving repeated deletion of low-degree vertices."""
    alive = (1 << len(adj)) - 1
    changed = True
    while changed:
        changed = False
        for i in range(len(adj)):
            if alive >> i & 1:
                deg = (adj[i] & alive).bit_count()
                if (deg <= lam) if strict else (deg < lam):
                    alive &= ~(1 << i)
                    changed = True
    return alive


def _mask_components(adj: list[int], mask: int) -> list[list[int]]:
    comps = []
    seen = 0
    for i in range(len(adj)):
        if mask >> i & 1 and not seen >> i & 1:
            comp = []
            frontier = 1 << i
            seen |= frontier
            while frontier:
                j = (frontier & -frontier).bit_length() - 1
                frontier &= frontier - 1
                comp.append(j)
                nxt = adj[j] & mask & ~seen
                seen |= nxt
                frontier |= nxt
            comps.append(comp)
    return comps


def _max_edges_by_size(adj: list[int], comp: list[int], cap: int) -> list[int]:
    """best[s] = max |E(G[W])| over W ⊂ comp with |W| = s, for s ≤ cap."""
    c = len(comp)
    if c > COMPONENT_BUDGET:
        raise ValueError(
            f"search budget exceeded: core component with {c} vertices (limit {COMPONENT_BUDGET})"
        )
    local = [0] * c
    pos = {v: i for i, v in enumerate(comp)}
    for i, v in enumerate(comp):
        m = 0
        for u in comp:
            if adj[v] >> u & 1:
                m |= 1 << pos[u]
        local[i] = m
    cap = min(cap, c)
    best = [0] + [-1] * cap
    # edges(mask) computed incrementally from mask without its lowest bit
    edges = [0] * (1 << c)
    for mask in range(1, 1 << c):
        low = (mask & -mask).bit_length() - 1
        rest = mask & (mask - 1)
        e = edges[rest] + (local[low] & rest).bit_count()
        edges[mask] = e
        size = mask.bit_count()
        if size <= cap and e > best[size]:
            best[size] = e
    return best


def _combine_max(x: list[int], y: list[int], cap: int) -> list[int]:
    out = [-1] * min(cap + 1, len(x) + len(y) - 1)
    for i, xi in enumerate(x):
        if xi < 0:
            continue
        for j, yj in enumerate(y):
            if yj < 0 or i + j >= len(out):
                continue
            if xi + yj > out[i + j]:
                out[i + j] = xi + yj
    return out


def max_edges_in_core(S: LabeledGraph, pp: PhiParams, cap: int | None = None) -> list[int]:
    """Max induced edge count by vertex-set size, restricted to the strict core (where bad sets live)."""
    verts, adj = _bit_adjacency(S)
    cap = len(verts) if cap is None else cap
    mask = _core(adj, pp.core_degree, strict=True)
    total = [0]
    for comp in _mask_components(adj, mask):
        total = _combine_max(total, _max_edges_by_size(adj, comp, cap), cap)
    return total


def _has_bad_subset(S: LabeledGraph, pp: PhiParams, cap: int | None) -> bool:
    if pp.b >= 0:
        # a non-empty H has log Φ ≥ 2a > 0 and the empty graph has log Φ = 0,
        # while the threshold -ln ln n is negative for n ≥ 3
        return False
    best = max_edges_in_core(S, pp, cap)
    return any(e >= 0 and pp.a * k + pp.b * e < pp.threshold for k, e in enumerate(best) if k >= 1)


@lru_cache(maxsize=200_000)
def is_admissible(S: LabeledGraph, pp: PhiParams) -> bool:
    return not _has_bad_subset(S, pp, None)


def e_threshold(k: int, pp: PhiParams):
    """Smallest k' ≥ 0 with a k + b k' < -ln ln n; ``NEVER`` when b ≥ 0."""
    if pp.b >= 0:
        return NEVER
    t = pp.threshold
    kp = max(0, math.floor((pp.a * k - t) / -pp.b) + 1)
    while kp > 0 and pp.a * k + pp.b * (kp - 1) < t:
        kp -= 1
    while not pp.a * k + pp.b * kp < t:
        kp += 1
    return kp


def check_event_G(G: LabeledGraph, pp: PhiParams, k_cap: int) -> bool:
    """True when G has no bad subgraph on at most ``k_cap`` vertices.

    Equivalently, for every k ≤ k_cap the densest k-vertex induced subgraph
    has fewer than e(k) edges.
    """
    if k_cap > min(pp.d ** 2, pp.n):
        raise ValueError(f"k_cap={k_cap} exceeds min(d^2, n)")
    if pp.b >= 0 or G.e_count == 0:
        return True
    best = max_edges_in_core(G, pp, k_cap)
    for k in range(1, len(best)):
        if best[k] >= 0 and best[k] >= e_threshold(k, pp):
            return False
    return True


def event_certain(pp: PhiParams, k_cap: int) -> bool:
    """Whether no graph at all can violate the event (e(k) exceeds the k-clique edge count)."""
    if pp.b >= 0:
        return True
    return all(e_threshold(k, pp) > k * (k - 1) // 2 for k in range(1, k_cap + 1))


def g_complement_union_bound(pp: PhiParams, p_edge: float, k_max: int | None = None) -> float:
    """Union bound Σ_k C(n,k) P[Bin(C(k,2), p_edge) ≥ e(k)] on the probability that the event fails."""
    if not 0 < p_edge < 1:
        raise ValueError("p_edge must lie in (0, 1)")
    if pp.b >= 0:
        return 0.0
    K = min(pp.d ** 2, pp.n) if k_max is None else k_max
    logs = []
    for k in range(1, K + 1):
        m = k * (k - 1) // 2
        e = e_threshold(k, pp)
        if e > m:
            continue
        log_choose = gammaln(pp.n + 1) - gammaln(k + 1) - gammaln(pp.n - k + 1)
        logs.append(log_choose + binom.logsf(e - 1, m, p_edge))
    if not logs:
        return 0.0
    top = max(logs)
    return float(math.exp(top) * sum(math.exp(x - top) for x in logs))


# the projection calculus


def _edge_key(H: LabeledGraph):
    return (-H.e_count, H.edges)


@lru_cache(maxsize=100_000)
def dsub(S: LabeledGraph, pp: PhiParams) -> LabeledGraph:
    """The log Φ-minimizing subgraph of an inadmissible S (empty when S is admissible).

    Ties go to the subgraph with more edges, then to the lexicographically
    smallest edge list.
    """
    if is_admissible(S, pp):
        return EMPTY
    verts, adj = _bit_adjacency(S)
    mask = _core(adj, pp.core_degree, strict=False)
    members = [i for i in range(len(verts)) if mask >> i & 1]
    if len(members) > COMPONENT_BUDGET:
        raise ValueError(f"search budget exceeded: core with {len(members)} vertices")
    best_val = math.inf
    best: list[LabeledGraph] = []
    for r in range(1, len(members) + 1):
        for combo in combinations(members, r):
            H = S.induced(verts[i] for i in combo)
            val = log_phi(H, pp)
            tol = TIE_TOL * (1 + abs(val))
            if not best or val < best_val - tol:
                best_val = val
                best = [H]
            elif abs(val - best_val) <= tol:
                best.append(H)
    return min(best, key=_edge_key)


def _edge_subsets(D: LabeledGraph):
    if D.e_count > SUBSET_EDGE_BUDGET:
        raise ValueError(f"enumeration budget exceeded: 2^{D.e_count} subsets of D(S)")
    edges = D.edges
    for r in range(len(edges) + 1):
        for combo in combinations(edges, r):
            yield LabeledGraph._from_sorted(combo)


@lru_cache(maxsize=100_000)
def _a_set(S: LabeledGraph, pp: PhiParams) -> tuple[LabeledGraph, ...]:
    D = dsub(S, pp)
    if D.e_count == 0:
        return (S,)
    rest = difference(S, D)
    out = [union(rest, K) for K in _edge_subsets(D) if is_admissible(K, pp)]
    return tuple(sorted(out))


def a_set(S: LabeledGraph, pp: PhiParams) -> list[LabeledGraph]:
    """Admissible completions: (S minus D(S)) joined with each admissible K ⊂ D(S)."""
    return list(_a_set(S, pp))


def _ratio(q):
    return exact_sqrt(q / (1 - q))


def lambda_expansion(S: LabeledGraph, pp: PhiParams, q=None) -> dict[LabeledGraph, object]:
    """Λ_S(H) for every H in 𝒜(S)."""
    q = pp.q if q is None else q
    members = _a_set(S, pp)
    r = _ratio(q)
    out = {}
    for H in members:
        total = 0
        for J in members:
            if H.issubgraph(J):
                total += (-1) ** (S.e_count - J.e_count)
        out[H] = r ** (S.e_count - H.e_count) * total
    return out


def lambda_coeff(S: LabeledGraph, H: LabeledGraph, pp: PhiParams, q=None):
    members = _a_set(S, pp)
    if H not in members:
        raise ValueError("H is not an admissible completion of S")
    return lambda_expansion(S, pp, q)[H]


def psi_hat_eval(D: LabeledGraph, X: LabeledGraph, pp: PhiParams, q=None):
    """ψ_D with every inadmissible monomial removed from its expansion in the raw indicators."""
    q = pp.q if q is None else q
    hi, _ = psi_levels(q)
    r = _ratio(q)
    sigma = (1 - q) / hi  # √(q(1-q))
    total = 0
    for K in _edge_subsets(D):
        if not is_admissible(K, pp):
            continue
        if all(e in X.edge_set for e in K.edges):
            total += (-r) ** (D.e_count - K.e_count) / sigma ** K.e_count
    return total


def psi_prime_eval(S: LabeledGraph, X: LabeledGraph, pp: PhiParams, q=None):
    q = pp.q if q is None else q
    D = dsub(S, pp)
    if D.e_count == 0:
        return psi_eval(S, X, q)
    return psi_eval(difference(S, D), X, q) * psi_hat_eval(D, X, pp, q)


def project_admissible(f: PolyCoeffs, pp: PhiParams, q=None) -> PolyCoeffs:
    """Replace every φ_{S1,S2} by ψ'_{S1} ψ'_{S2} expanded in the admissible basis."""
    out: dict = {}
    for (s1, s2), c in f.entries.items():
        l1 = lambda_expansion(s1, pp, q)
        l2 = lambda_expansion(s2, pp, q)
        for h1, a in l1.items():
            if a == 0:
                continue
            for h2, b in l2.items():
                if b == 0:
                    continue
                key = (h1, h2)
                out[key] = out.get(key, 0) + c * a * b
    return PolyCoeffs({k: v for k, v in out.items() if v != 0}, f.d)


def census_admissible(N: int, pp: PhiParams) -> int:
    return sum(1 for c in enumerate_classes(N)[N] if is_admissible(c.canon, pp))
