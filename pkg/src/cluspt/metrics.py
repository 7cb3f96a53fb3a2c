"""Batch statistics and algorithm-comparison measures."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import InstanceError, UndefinedCorrelation

# Reference PI of this solver over C-MFEA on Type 4 instances; kept for
# comparison only, the per-instance aggregation behind it is not known.
REPORTED_PI_TYPE4_C_MFEA = 85.90


@dataclass(frozen=True)
class BatchSummary:
    instance: str
    runs: int
    best_found: float
    average: float
    coefficient_of_variation: float
    mean_runtime: float


@dataclass(frozen=True)
class ComparisonRow:
    instance: str
    cost_new: float
    cost_other: float
    rpd: float
    pi: float

    @classmethod
    def from_costs(cls, instance: str, cost_new: float, cost_other: float) -> "ComparisonRow":
        return cls(instance, cost_new, cost_other, rpd(cost_other, cost_new), pi(cost_new, cost_other))


def summarize(costs: Sequence[float], runtimes: Optional[Sequence[float]] = None,
              instance: str = "") -> BatchSummary:
    """BF, Avg and CV over a batch of runs.

    CV uses the sample (n - 1) standard deviation and is 0 for a single run.
    """
    costs = list(costs)
    if not costs:
        raise InstanceError("summarize needs at least one run")
    if any(c <= 0 for c in costs):
        raise InstanceError("costs must be positive")
    n = len(costs)
    mean = math.fsum(costs) / n
    if n > 1:
        var = math.fsum((c - mean) ** 2 for c in costs) / (n - 1)
        cv = math.sqrt(var) / mean
    else:
        cv = 0.0
    runtimes = list(runtimes or [])
    mean_rt = math.fsum(runtimes) / len(runtimes) if runtimes else 0.0
    return BatchSummary(instance, n, min(costs), mean, cv, mean_rt)


def rpd(cost_a: float, cost_new: float) -> float:
    """Relative percentage difference of ``cost_a`` against ``cost_new``."""
    if cost_new <= 0:
        raise InstanceError(f"reference cost must be positive, got {cost_new}")
    return (cost_a - cost_new) / cost_new * 100.0


def pi(cost_a: float, cost_b: float) -> float:
    """Percentage by which ``cost_a`` improves on ``cost_b``."""
    if cost_b <= 0:
        raise InstanceError(f"compared cost must be positive, got {cost_b}")
    return (cost_b - cost_a) / cost_b * 100.0


def pi_mean_of_instances(rows: Iterable[ComparisonRow]) -> float:
    """Average of the per-instance PI values."""
    values = [r.pi for r in rows]
    if not values:
        raise InstanceError("no rows to aggregate")
    return math.fsum(values) / len(values)


def pi_of_totals(rows: Iterable[ComparisonRow]) -> float:
    """PI applied to the summed costs of all rows."""
    rows = list(rows)
    if not rows:
        raise InstanceError("no rows to aggregate")
    return pi(math.fsum(r.cost_new for r in rows), math.fsum(r.cost_other for r in rows))


def _betacf(a, b, x):
    # modified Lentz evaluation of the incomplete beta continued fraction
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, 10000):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        d = tiny if abs(d) < tiny else d
        c = 1.0 + aa / c
        c = tiny if abs(c) < tiny else c
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        d = tiny if abs(d) < tiny else d
        c = 1.0 + aa / c
        c = tiny if abs(c) < tiny else c
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            return h
    raise ArithmeticError("incomplete beta continued fraction did not converge")


def betainc(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta function I_x(a, b)."""
    if a <= 0 or b <= 0:
        raise InstanceError("betainc needs positive shape parameters")
    if not 0.0 <= x <= 1.0:
        raise InstanceError(f"betainc argument {x} outside [0, 1]")
    if x == 0.0 or x == 1.0:
        return x
    log_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                 + a * math.log(x) + b * math.log1p(-x))
    front = math.exp(log_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def pearson(x: Sequence[float], y: Sequence[float]) -> tuple:
    """Pearson r and its two-sided p-value from the t test with n - 2 dof.

    A perfect correlation returns p = 0.
    """
    n = len(x)
    if n != len(y):
        raise InstanceError(f"length mismatch: {n} vs {len(y)}")
    if n < 3:
        raise InstanceError("pearson needs at least 3 points")
    mx = math.fsum(x) / n
    my = math.fsum(y) / n
    dx = [v - mx for v in x]
    dy = [v - my for v in y]
    sxx = math.fsum(v * v for v in dx)
    syy = math.fsum(v * v for v in dy)
    if sxx == 0 or syy == 0:
        raise UndefinedCorrelation("correlation is undefined for a constant vector")
    sxy = math.fsum(a * b for a, b in zip(dx, dy))
    r = sxy / math.sqrt(sxx * syy)
    r = max(-1.0, min(1.0, r))
    dof = n - 2
    # t^2 = r^2 dof / (1 - r^2), so dof / (dof + t^2) = 1 - r^2
    one_minus_r2 = (1.0 - r) * (1.0 + r)
    if one_minus_r2 <= 0.0:
        return r, 0.0
    p = betainc(dof / 2.0, 0.5, one_minus_r2)
    return r, min(1.0, max(0.0, p))
