"""Samplers for the correlated pair, the independent pair and its truncation.

Randomness contract: every stream is a ``numpy.random.SeedSequence`` keyed by
``(seed, spawn_key)``. Scalar samplers draw one vector per stream (I, J, K,
permutation, null A, null B) indexed by pair position in ``all_pairs(n)``
order. Batch samplers seed each fixed-size chunk of trials independently,
so the result of trial ``t`` does not depend on how chunks are scheduled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

import numpy as np

from .graphs import LabeledGraph, Permutation, all_pairs

N_CEILING = 10_000
CHUNK = 4096

STREAM_I, STREAM_J, STREAM_K, STREAM_PI, STREAM_NULL_A, STREAM_NULL_B = range(6)
CHUNK_CORRELATED, CHUNK_NULL, ATTEMPT_TRUNCATED = 100, 101, 200


class TruncationFailure(RuntimeError):
    def __init__(self, attempts: int, accepted: int, message: str):
        super().__init__(message)
        self.attempts = attempts
        self.accepted = accepted

    @property
    def acceptance_estimate(self) -> float:
        return self.accepted / self.attempts if self.attempts else float("nan")


def derive_ps(q, rho):
    """Invert ``q = p s`` and ``rho = s (1 - p) / (1 - p s)``."""
    if not 0 < q < 1:
        raise ValueError(f"q must lie in (0, 1), got {q}")
    if not 0 <= rho < 1:
        raise ValueError(f"rho must lie in [0, 1), got {rho}")
    s = q + rho * (1 - q)
    p = q / s
    return p, s


@dataclass(frozen=True)
class ModelParams:
    n: int
    q: float | Fraction
    rho: float | Fraction
    d: int = 2
    p: float | Fraction = field(init=False)
    s: float | Fraction = field(init=False)

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if self.n > N_CEILING:
            raise ValueError(f"n={self.n} exceeds the sampler ceiling {N_CEILING}")
        if self.d < 1:
            raise ValueError("d must be at least 1")
        if self.rho == 1:
            # the s = 1 boundary: A = G and B = pi*(G)
            if not 0 < self.q < 1:
                raise ValueError(f"q must lie in (0, 1), got {self.q}")
            p, s = self.q, 1
        else:
            p, s = derive_ps(self.q, self.rho)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "s", s)
        self._check_roundtrip()

    @classmethod
    def from_ps(cls, n: int, p, s, d: int = 2) -> "ModelParams":
        if not 0 < p <= 1 or not 0 < s <= 1:
            raise ValueError("p and s must lie in (0, 1]")
        q = p * s
        rho = 1 if s == 1 else s * (1 - p) / (1 - p * s)
        return cls(n, q, rho, d)

    def _check_roundtrip(self):
        p, s = self.p, self.s
        if not math.isclose(float(p * s), float(self.q), rel_tol=1e-12):
            raise ArithmeticError("p*s does not reproduce q")
        if s == 1 and self.rho == 1:
            return
        back = s * (1 - p) / (1 - p * s)
        # 1 - p cancels badly as p -> 1, so widen the float tolerance accordingly
        tol = 1e-12 if p == 1 else max(1e-12, 1e-14 / float(1 - p))
        if not math.isclose(float(back), float(self.rho), rel_tol=tol, abs_tol=1e-12):
            raise ArithmeticError("s(1-p)/(1-ps) does not reproduce rho")

    @property
    def n_pairs(self) -> int:
        return self.n * (self.n - 1) // 2

    def as_dict(self) -> dict:
        return {"n": self.n, "q": float(self.q), "rho": float(self.rho), "d": self.d,
                "p": float(self.p), "s": float(self.s)}


@dataclass
class CorrelatedSample:
    pi_star: Permutation
    G: LabeledGraph
    A: LabeledGraph
    B: LabeledGraph
    rejections: int = 0


def stream_rng(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(key)))


def _bernoulli(seed: int, stream: int, size: int, prob) -> np.ndarray:
    return stream_rng(seed, stream).random(size) < float(prob)


def _graph_from_mask(mask: np.ndarray, pairs: list[tuple[int, int]]) -> LabeledGraph:
    return LabeledGraph._from_sorted(tuple(pairs[i] for i in np.flatnonzero(mask)))


def pair_map(perm0: np.ndarray) -> np.ndarray:
    """For 0-based images ``perm0`` (shape ``(..., n)``) return the pair index of π(e) for every pair e."""
    n = perm0.shape[-1]
    iu, ju = np.triu_indices(n, 1)
    a = perm0[..., iu]
    b = perm0[..., ju]
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    return lo * n - lo * (lo + 1) // 2 + (hi - lo - 1)


def sample_correlated(params: ModelParams, seed: int) -> CorrelatedSample:
    n, m = params.n, params.n_pairs
    pairs = all_pairs(n)
    I = _bernoulli(seed, STREAM_I, m, params.p)
    J = _bernoulli(seed, STREAM_J, m, params.s)
    K = _bernoulli(seed, STREAM_K, m, params.s)
    perm0 = stream_rng(seed, STREAM_PI).permutation(n)
    pmap = pair_map(perm0)
    A = I & J
    B = np.zeros(m, dtype=bool)
    B[pmap] = I & K[pmap]
    return CorrelatedSample(
        pi_star=Permutation(perm0 + 1),
        G=_graph_from_mask(I, pairs),
        A=_graph_from_mask(A, pairs),
        B=_graph_from_mask(B, pairs),
    )


def sample_null(params: ModelParams, seed: int) -> tuple[LabeledGraph, LabeledGraph]:
    m = params.n_pairs
    pairs = all_pairs(params.n)
    A = _bernoulli(seed, STREAM_NULL_A, m, params.q)
    B = _bernoulli(seed, STREAM_NULL_B, m, params.q)
    return _graph_from_mask(A, pairs), _graph_from_mask(B, pairs)


def attempt_seed(seed: int, attempt: int) -> int:
    if attempt == 0:
        return seed
    state = np.random.SeedSequence(seed, spawn_key=(ATTEMPT_TRUNCATED, attempt)).generate_state(2, np.uint32)
    return int(state[0]) << 32 | int(state[1])


def sample_truncated(params: ModelParams, seed: int, k_cap: int, max_rejects: int, pp=None) -> CorrelatedSample:
    """Rejection sampler for the correlated law conditioned on the parent avoiding bad subgraphs.

    Attempt 0 reuses ``seed`` so that, when nothing is rejected, the result
    coincides with :func:`sample_correlated`.
    """
    from .truncation import PhiParams, check_event_G

    if pp is None:
        pp = PhiParams(params.n, params.d, params.q)
    if k_cap > min(params.d ** 2, params.n):
        raise ValueError(f"k_cap={k_cap} exceeds min(d^2, n)={min(params.d ** 2, params.n)}")
    for attempt in range(max_rejects + 1):
        sample = sample_correlated(params, attempt_seed(seed, attempt))
        if check_event_G(sample.G, pp, k_cap):
            sample.rejections = attempt
            return sample
    attempts = max_rejects + 1
    raise TruncationFailure(
        attempts, 0,
        f"no admissible parent graph in {attempts} attempts; acceptance rate estimate < {1 / attempts:.3g}",
    )


# vectorized batches


@dataclass
class PairBatch:
    """Trials stacked row-wise; columns follow ``all_pairs(n)`` order."""

    A: np.ndarray
    B: np.ndarray
    perm: np.ndarray  # 0-based images, shape (trials, n)
    G: np.ndarray | None = None


def correlated_chunk(params: ModelParams, seed: int, chunk_index: int, size: int) -> PairBatch:
    rng = stream_rng(seed, CHUNK_CORRELATED, chunk_index)
    m = params.n_pairs
    I = rng.random((size, m)) < float(params.p)
    J = rng.random((size, m)) < float(params.s)
    K = rng.random((size, m)) < float(params.s)
    perm = rng.permuted(np.tile(np.arange(params.n), (size, 1)), axis=1)
    pmap = pair_map(perm)
    B = np.zeros((size, m), dtype=bool)
    np.put_along_axis(B, pmap, I & np.take_along_axis(K, pmap, axis=1), axis=1)
    return PairBatch(A=I & J, B=B, perm=perm, G=I)


def null_chunk(params: ModelParams, seed: int, chunk_index: int, size: int) -> PairBatch:
    rng = stream_rng(seed, CHUNK_NULL, chunk_index)
    m = params.n_pairs
    A = rng.random((size, m)) < float(params.q)
    B = rng.random((size, m)) < float(params.q)
    perm = rng.permuted(np.tile(np.arange(params.n), (size, 1)), axis=1)
    return PairBatch(A=A, B=B, perm=perm)


def iter_batches(params: ModelParams, seed: int, trials: int, null: bool = False,
                 chunk: int = CHUNK) -> Iterator[PairBatch]:
    """Yield ``trials`` draws in chunks; chunk ``c`` always holds trials ``c*chunk ...``."""
    make = null_chunk if null else correlated_chunk
    c = 0
    done = 0
    while done < trials:
        size = min(chunk, trials - done)
        batch = make(params, seed, c, chunk)
        if size < chunk:
            batch = PairBatch(batch.A[:size], batch.B[:size], batch.perm[:size],
                              None if batch.G is None else batch.G[:size])
        yield batch
        done += size
        c += 1


def batch_row_graph(mask_row: np.ndarray, n: int) -> LabeledGraph:
    return _graph_from_mask(mask_row, all_pairs(n))
