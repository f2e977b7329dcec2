"""Detection experiments: threshold tests on polynomial statistics, separation diagnostics, sweeps."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from .graphs import pair_index
from .iso import IsoClass, labeled_copy_count
from .model import ModelParams, PairBatch, iter_batches
from .poly import BatchEvaluator, edge_correlation_terms, optimal_coeffs, snr_exact, snr_upper_bound

SQRT_ALPHA = math.sqrt(0.338)
COPY_BUDGET = 200_000
ASYMPTOTIC_NOTE = (
    "finite-n landscape only: the detection thresholds concern n -> infinity and "
    "cannot be confirmed or refuted by fixed-n experiments"
)

Statistic = Callable[[PairBatch], np.ndarray]


@dataclass
class ExperimentSpec:
    params: ModelParams
    statistic: str | Statistic = "edge_correlation"
    threshold: float | str = "auto"
    trials: int = 1000
    seed: int = 0
    truncated: bool = False
    cls: IsoClass | None = None
    d: int | None = None
    k_cap: int | None = None
    pp: object = None

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if isinstance(self.statistic, str) and self.statistic not in ("optimal", "edge_correlation", "class_count"):
            raise ValueError(f"unknown statistic {self.statistic!r}")
        if self.statistic == "class_count" and self.cls is None:
            raise ValueError("class_count needs an isomorphism class")

    @property
    def statistic_name(self) -> str:
        return self.statistic if isinstance(self.statistic, str) else getattr(self.statistic, "__name__", "custom")


@dataclass
class ErrorReport:
    type1: float
    type2: float
    mean_P: float
    mean_Q: float
    var_P: float
    var_Q: float
    separation_ratio: float
    threshold: float
    trials: int
    se: dict = field(default_factory=dict)
    snr_empirical: float = math.nan
    degenerate: bool = False
    rejections: int = 0
    stats_P: np.ndarray | None = field(default=None, repr=False)
    stats_Q: np.ndarray | None = field(default=None, repr=False)

    def as_dict(self) -> dict:
        out = {k: getattr(self, k) for k in (
            "type1", "type2", "mean_P", "mean_Q", "var_P", "var_Q", "separation_ratio",
            "threshold", "trials", "snr_empirical", "degenerate", "rejections")}
        out["se"] = dict(self.se)
        return {k: (None if isinstance(v, float) and not math.isfinite(v) else v) for k, v in out.items()}


# statistics


def _edge_correlation(params: ModelParams) -> Statistic:
    m = params.n_pairs

    def stat(batch: PairBatch) -> np.ndarray:
        return edge_correlation_terms(batch.A, batch.B, batch.perm, params.q) / math.sqrt(m)

    return stat


def _class_count(params: ModelParams, c: IsoClass) -> Statistic:
    from .poly import labeled_copies

    total = labeled_copy_count(c, params.n)
    if total > COPY_BUDGET:
        raise ValueError(f"{total} labeled copies of the class exceed the budget {COPY_BUDGET}")
    copies = labeled_copies(c, params.n)
    idx = np.array([[pair_index(u, v, params.n) for u, v in s.edges] for s in copies], dtype=np.int64)
    mean = total * float(params.q) ** c.e_count
    scale = mean if mean > 0 else 1.0

    def count(X: np.ndarray) -> np.ndarray:
        out = np.zeros(X.shape[0])
        for start in range(0, len(idx), 2048):
            block = idx[start:start + 2048]
            out += X[:, block].all(axis=2).sum(axis=1)
        return out

    def stat(batch: PairBatch) -> np.ndarray:
        return (count(batch.A) - mean) * (count(batch.B) - mean) / scale

    return stat


def _optimal(params: ModelParams, d: int) -> Statistic:
    evaluator = BatchEvaluator(optimal_coeffs(params, d), params.n, params.q)

    def stat(batch: PairBatch) -> np.ndarray:
        return evaluator(batch.A, batch.B)

    return stat


def resolve_statistic(spec: ExperimentSpec) -> Statistic:
    if callable(spec.statistic):
        return spec.statistic
    if spec.statistic == "edge_correlation":
        return _edge_correlation(spec.params)
    if spec.statistic == "class_count":
        return _class_count(spec.params, spec.cls)
    return _optimal(spec.params, spec.d if spec.d is not None else spec.params.d)


# sampling


def _statistics_P(spec: ExperimentSpec, stat: Statistic) -> tuple[np.ndarray, int]:
    if not spec.truncated:
        return np.concatenate([stat(b) for b in iter_batches(spec.params, spec.seed, spec.trials)]), 0
    from .graphs import all_pairs, LabeledGraph
    from .model import correlated_chunk
    from .truncation import PhiParams, check_event_G

    params = spec.params
    pp = spec.pp or PhiParams(params.n, params.d, params.q)
    k_cap = spec.k_cap if spec.k_cap is not None else min(params.d ** 2, params.n)
    pairs = all_pairs(params.n)
    kept: list[np.ndarray] = []
    have = rejected = c = 0
    while have < spec.trials:
        batch = correlated_chunk(params, spec.seed, c, 4096)
        c += 1
        ok = np.array([
            check_event_G(LabeledGraph._from_sorted(tuple(pairs[i] for i in np.flatnonzero(row))), pp, k_cap)
            for row in batch.G
        ])
        rejected += int((~ok).sum())
        vals = stat(PairBatch(batch.A[ok], batch.B[ok], batch.perm[ok], batch.G[ok]))
        vals = vals[: spec.trials - have]
        kept.append(vals)
        have += len(vals)
        if c > 1000 and have == 0:
            raise RuntimeError("truncated sampler accepted nothing in 1000 chunks")
    return np.concatenate(kept), rejected


def _statistics_Q(spec: ExperimentSpec, stat: Statistic) -> np.ndarray:
    return np.concatenate([stat(b) for b in iter_batches(spec.params, spec.seed, spec.trials, null=True)])


def _var_se(x: np.ndarray) -> float:
    n = len(x)
    if n < 2:
        return math.inf
    c = x - x.mean()
    m4 = float(np.mean(c ** 4))
    v = float(np.mean(c ** 2))
    return math.sqrt(max(m4 - v * v, 0.0) / n)


def _threshold(spec: ExperimentSpec, sp: np.ndarray, sq: np.ndarray) -> float:
    t = spec.threshold
    if t == "auto":
        return (float(sp.mean()) + float(sq.mean())) / 2
    if isinstance(t, str) and t.startswith("quantile:"):
        level = float(t.split(":", 1)[1])
        return float(np.quantile(sq, level))
    return float(t)


def summarize(sp: np.ndarray, sq: np.ndarray, tau: float, rejections: int = 0) -> ErrorReport:
    t = len(sp)
    mp, mq = float(sp.mean()), float(sq.mean())
    vp = float(sp.var(ddof=1)) if t > 1 else 0.0
    vq = float(sq.var(ddof=1)) if len(sq) > 1 else 0.0
    type1 = float(np.mean(sq >= tau))
    type2 = float(np.mean(sp < tau))
    gap = abs(mp - mq)
    spread = math.sqrt(max(vp, vq))
    degenerate = gap == 0 and spread == 0
    if degenerate:
        ratio = math.nan
    elif gap == 0:
        ratio = math.inf
    else:
        ratio = spread / gap
    se_mp, se_mq = math.sqrt(vp / t), math.sqrt(vq / len(sq))
    se_vp, se_vq = _var_se(sp), _var_se(sq)
    se_gap = math.hypot(se_mp, se_mq)
    if math.isfinite(ratio) and ratio > 0:
        se_spread = (se_vp if vp >= vq else se_vq) / (2 * spread)
        se_ratio = ratio * math.hypot(se_spread / spread, se_gap / gap)
    else:
        se_ratio = math.nan
    # E_P[f] / sqrt(E_Q[f^2]) with a delta-method standard error
    m2q = float(np.mean(sq ** 2))
    snr = mp / math.sqrt(m2q) if m2q > 0 else math.nan
    se_m2q = float(np.std(sq ** 2, ddof=1) / math.sqrt(len(sq))) if len(sq) > 1 else math.inf
    se_snr = abs(snr) * math.hypot(se_mp / mp if mp else math.inf, se_m2q / (2 * m2q)) if m2q > 0 else math.nan
    se = {
        "type1": math.sqrt(type1 * (1 - type1) / len(sq)),
        "type2": math.sqrt(type2 * (1 - type2) / t),
        "mean_P": se_mp, "mean_Q": se_mq, "var_P": se_vp, "var_Q": se_vq,
        "mean_gap": se_gap, "separation_ratio": se_ratio, "snr_empirical": se_snr,
    }
    return ErrorReport(type1, type2, mp, mq, vp, vq, ratio, tau, t, se, snr, degenerate,
                       rejections, sp, sq)


def run_detection_experiment(spec: ExperimentSpec) -> ErrorReport:
    stat = resolve_statistic(spec)  # fails before any sampling if infeasible
    sp, rejected = _statistics_P(spec, stat)
    sq = _statistics_Q(spec, stat)
    return summarize(sp, sq, _threshold(spec, sp, sq), rejected)


def strong_separation_ratio(spec: ExperimentSpec) -> float:
    """√max(Var_P, Var_Q) / |mean gap|; NaN marks the degenerate constant-statistic case."""
    return run_detection_experiment(spec).separation_ratio


def write_trial_log(report: ErrorReport, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["trial", "law", "statistic"])
    for i, v in enumerate(report.stats_P):
        w.writerow([i, "P", repr(float(v))])
    for i, v in enumerate(report.stats_Q):
        w.writerow([i, "Q", repr(float(v))])


def read_trial_log(fh) -> tuple[np.ndarray, np.ndarray]:
    rows = list(csv.DictReader(fh))
    sp = np.array([float(r["statistic"]) for r in rows if r["law"] == "P"])
    sq = np.array([float(r["statistic"]) for r in rows if r["law"] == "Q"])
    return sp, sq


# sweeps

SWEEP_COLUMNS = [
    "n", "q", "rho", "d", "rho_d", "rho_over_sqrt_alpha", "below_sqrt_alpha",
    "snr_exact", "snr_upper_bound", "separation_ratio", "type1", "type2", "error",
]


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, float):
        return "" if math.isnan(x) else repr(x)
    return str(x)


def sweep(grid: Iterable[tuple[int, float, float, int]], template: ExperimentSpec) -> list[dict]:
    rows = []
    for n, q, rho, d in grid:
        row = {"n": n, "q": q, "rho": rho, "d": d, "rho_d": rho * d,
               "rho_over_sqrt_alpha": rho / SQRT_ALPHA, "below_sqrt_alpha": rho < SQRT_ALPHA,
               "snr_exact": None, "snr_upper_bound": None, "separation_ratio": None,
               "type1": None, "type2": None, "error": ""}
        errors = []
        try:
            params = ModelParams(n, q, rho, d)
        except (ValueError, ArithmeticError) as exc:
            row["error"] = f"params: {exc}"
            rows.append(row)
            continue
        try:
            row["snr_exact"] = snr_exact(params, d).snr
        except ValueError as exc:
            errors.append(f"snr: {exc}")
        if rho > 0:
            row["snr_upper_bound"] = snr_upper_bound(rho, d)
        else:
            row["snr_upper_bound"] = 1.0
        try:
            spec = ExperimentSpec(params, template.statistic, template.threshold, template.trials,
                                  template.seed, template.truncated, template.cls, d, template.k_cap, template.pp)
            rep = run_detection_experiment(spec)
            row["separation_ratio"] = rep.separation_ratio
            row["type1"] = rep.type1
            row["type2"] = rep.type2
        except (ValueError, RuntimeError) as exc:
            errors.append(f"experiment: {exc}")
        row["error"] = "; ".join(errors)
        rows.append(row)
    return rows


def sweep_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    buf.write(f"# {ASYMPTOTIC_NOTE}\n")
    buf.write(f"# reference line: sqrt(alpha) = {SQRT_ALPHA!r} with alpha = 0.338 (Otter's constant)\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_COLUMNS)
    for r in rows:
        w.writerow([_fmt(r[c]) for c in SWEEP_COLUMNS])
    return buf.getvalue()
