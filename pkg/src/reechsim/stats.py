"""Cross-run means and Student-t confidence half-widths."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np
from scipy import stats as sps

from .engine import METRICS, RunSummary

MILESTONES = ("stability", "lifetime", "instability")
# metrics that keep their last value after a run ends; the rest drop to zero
_CARRY = ("alive", "dead", "total_energy_j")


class AggregationError(ValueError):
    pass


def t_halfwidth(samples, confidence: float = 0.95, axis: int = 0):
    """Two-sided t-interval half-width ``t * s / sqrt(n)`` along ``axis``."""
    x = np.asarray(samples, dtype=float)
    n = x.shape[axis]
    if n < 2:
        raise AggregationError(f"need at least 2 samples for an interval, got {n}")
    if not 0 < confidence < 1:
        raise AggregationError(f"confidence must lie in (0, 1), got {confidence}")
    s = x.std(axis=axis, ddof=1)
    # identical samples can leave rounding residue in the mean
    s = np.where(np.all(x == np.take(x, [0], axis=axis), axis=axis), 0.0, s)
    tq = sps.t.ppf((1 + confidence) / 2, n - 1)
    return tq * s / np.sqrt(n)


def pad_series(run: RunSummary, length: int) -> dict[str, np.ndarray]:
    out = {}
    for m in METRICS:
        s = run.series[m]
        fill = s[-1] if (m in _CARRY and s.size) else 0
        out[m] = np.concatenate([s, np.full(length - s.size, fill, dtype=s.dtype)])
    return out


@dataclass
class AggregateStats:
    n: int
    confidence: float
    mean: dict[str, np.ndarray]
    ci: dict[str, np.ndarray]
    milestone_mean: dict[str, float]
    milestone_ci: dict[str, float]

    @property
    def rounds(self) -> int:
        return len(self.mean["alive"])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["round", *(f"{m}_{k}" for m in METRICS for k in ("mean", "ci"))])
        for r in range(self.rounds):
            row = [r]
            for m in METRICS:
                fmt = "{:.9f}" if m == "total_energy_j" else "{:.6f}"
                row += [fmt.format(self.mean[m][r]), fmt.format(self.ci[m][r])]
            w.writerow(row)
        return buf.getvalue()

    def summary_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["milestone", "mean", "ci"])
        for m in MILESTONES:
            w.writerow([m, f"{self.milestone_mean[m]:.6f}", f"{self.milestone_ci[m]:.6f}"])
        return buf.getvalue()


def aggregate(runs: list[RunSummary], confidence: float = 0.95) -> AggregateStats:
    """Per-round and per-milestone mean and t-interval half-width over ``runs``.

    Shorter runs are padded with their terminal state (alive, dead and
    energy held, packet counters zero) up to the longest run.
    """
    if len(runs) < 2:
        raise AggregationError(f"need at least 2 runs to aggregate, got {len(runs)}")
    length = max(r.rounds for r in runs)
    padded = [pad_series(r, length) for r in runs]
    mean, ci = {}, {}
    for m in METRICS:
        # sorting per round makes the reductions independent of run order
        stack = np.sort(np.stack([p[m] for p in padded]).astype(float), axis=0)
        mean[m] = stack.mean(axis=0)
        ci[m] = t_halfwidth(stack, confidence)
    ms = {
        "stability": sorted(r.stability_period for r in runs),
        "lifetime": sorted(r.lifetime for r in runs),
        "instability": sorted(r.instability_period for r in runs),
    }
    return AggregateStats(
        n=len(runs),
        confidence=confidence,
        mean=mean,
        ci=ci,
        milestone_mean={k: float(np.mean(v)) for k, v in ms.items()},
        milestone_ci={k: float(t_halfwidth(v, confidence)) for k, v in ms.items()},
    )
