"""Hashing-bound analysis and rate planning.

The depolarizing channel at error probability p admits an achievable
quantum rate of

    C_Q(p) = 1 - H(p) - p*log2(3)         (H = binary entropy),

strictly decreasing from 1 at p=0 until it crosses zero near p=0.1893.
Inverting it on that branch gives the largest p at which a rate is
achievable at all; the gap between that limit and an operating point
measures how far a concrete scheme sits from the bound.

Switching tables turn measured QBER sweeps into deployment advice: for
each code rate, the largest p still meeting a QBER requirement, and the
resulting p-intervals on which each rate is the best admissible choice.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .exit_chart import binary_entropy
from .pipeline import SweepRecord

LOG2_3 = math.log2(3.0)
_BISECT_TOL = 1e-6


def hashing_capacity(p: float) -> float:
    """Achievable qubits per channel use at depolarizing probability p."""
    p = float(p)
    if not 0.0 <= p < 1.0:
        raise ValueError(f"depolarizing probability must be in [0, 1), got {p}")
    return 1.0 - binary_entropy(p) - p * LOG2_3


def _zero_capacity_point() -> float:
    lo, hi = 0.1, 0.25  # capacity(0.1) > 0 > capacity(0.25)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if hashing_capacity(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# Largest p with positive capacity; upper end of the invertible branch.
P_ZERO_CAPACITY = _zero_capacity_point()


def hashing_threshold(r_Q) -> float:
    """Largest p at which rate r_Q stays below the capacity curve.

    Bisection of C_Q on its decreasing branch [0, P_ZERO_CAPACITY] to
    within 1e-6.  r_Q = 1 maps to 0 (only the noiseless channel carries
    a full qubit per use).
    """
    r = float(r_Q)
    if not 0.0 < r <= 1.0:
        raise ValueError(f"rate must be in (0, 1], got {r_Q}")
    if r == 1.0:
        return 0.0
    lo, hi = 0.0, P_ZERO_CAPACITY
    while hi - lo > _BISECT_TOL:
        mid = 0.5 * (lo + hi)
        if hashing_capacity(mid) > r:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def distance_from_bound(r_Q, p_achieved: float, *, p_star: float | None = None) -> float:
    """Margin p* - p between the rate's capacity crossing and an
    operating point.

    `p_star` overrides the recomputed threshold, so published
    thresholds quoted at fixed precision subtract exactly.
    """
    limit = hashing_threshold(r_Q) if p_star is None else float(p_star)
    return limit - float(p_achieved)


def goodput(r_Q, qber: float) -> float:
    """Delivered logical-qubit rate r_Q * (1 - QBER)."""
    qber = float(qber)
    if not 0.0 <= qber <= 1.0:
        raise ValueError(f"qber must be in [0, 1], got {qber}")
    return float(r_Q) * (1.0 - qber)


def hashing_bound_curve(p_grid: Sequence[float]) -> list[tuple[float, float]]:
    """(p, C_Q) pairs for overlaying the bound on rate/goodput plots."""
    return [(float(p), hashing_capacity(p)) for p in p_grid]


# ---------------------------------------------------------------------------
# Switching tables
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Requirement:
    """A QBER acceptance rule: beat the uncoded channel, or stay at or
    below a fixed target."""

    kind: str                     # "uncoded" or "target"
    target: float | None = None

    def __post_init__(self):
        if self.kind == "uncoded":
            if self.target is not None:
                raise ValueError("the uncoded requirement takes no target")
        elif self.kind == "target":
            if self.target is None or not 0.0 < self.target < 1.0:
                raise ValueError("target requirement needs a target in (0, 1)")
        else:
            raise ValueError(f"unknown requirement kind {self.kind!r}")

    def met(self, qber: float, p: float) -> bool:
        if self.kind == "uncoded":
            return qber < p
        return qber <= self.target

    def label(self) -> str:
        if self.kind == "uncoded":
            return "qber<uncoded"
        return f"qber<={self.target:g}"


BEAT_UNCODED = Requirement("uncoded")


def target_requirement(value: float) -> Requirement:
    return Requirement("target", float(value))


@dataclass(frozen=True)
class RateThreshold:
    rate: Fraction
    threshold: float | None       # None: the sweep does not bracket one


@dataclass(frozen=True)
class SwitchInterval:
    p_low: float
    p_high: float                 # interval (p_low, p_high]
    rate: Fraction


@dataclass(frozen=True)
class SwitchTable:
    requirement: str
    thresholds: tuple[RateThreshold, ...]   # ascending rate
    intervals: tuple[SwitchInterval, ...]   # ascending p

    def threshold_of(self, rate) -> float | None:
        rate = Fraction(rate)
        for entry in self.thresholds:
            if entry.rate == rate:
                return entry.threshold
        raise KeyError(f"no sweep for rate {rate}")


def _log_qber(record: SweepRecord) -> float:
    """log10 of the measured QBER, substituting half an error at zero.

    A zero-error point has no finite log; the standard "less than one
    error in the observed total" floor 1/(2*qubit_total) keeps the
    interpolation defined while staying below any resolvable QBER.
    """
    if record.qber > 0.0:
        return math.log10(record.qber)
    return math.log10(0.5 / record.qubit_total)


def _threshold_for_rate(records: list[SweepRecord], requirement: Requirement) -> float | None:
    """Largest p meeting the requirement, by log-domain interpolation.

    Records are scanned in ascending p.  The crossing between the last
    meeting point and the next point is found on the straight line
    through (p, log10 qber); the uncoded rule compares that line
    against log10(p) by bisection.  A sweep meeting the requirement
    everywhere answers its own largest p; one meeting it nowhere has no
    threshold.
    """
    records = sorted(records, key=lambda r: r.p)
    met = [requirement.met(r.qber, r.p) for r in records]
    if not any(met):
        return None
    if all(met):
        return records[-1].p
    # last index meeting the requirement with a non-meeting successor
    j = max(i for i in range(len(records) - 1) if met[i] and not met[i + 1])
    a, b = records[j], records[j + 1]
    ya, yb = _log_qber(a), _log_qber(b)

    def line(p: float) -> float:
        w = (p - a.p) / (b.p - a.p)
        return ya + w * (yb - ya)

    if requirement.kind == "target":
        y_target = math.log10(requirement.target)
        if yb == ya:
            return a.p
        w = (y_target - ya) / (yb - ya)
        return a.p + min(max(w, 0.0), 1.0) * (b.p - a.p)
    # uncoded: crossing of line(p) with log10(p); the line is below at
    # a.p and at or above at b.p, and log10(p) is continuous increasing
    lo, hi = a.p, b.p
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if line(mid) < math.log10(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def switching_points(
    sweeps: Iterable[SweepRecord], requirement: Requirement
) -> SwitchTable:
    """Per-rate thresholds and best-rate intervals from measured sweeps.

    Sweeps may mix rates; records are grouped by their rate field.
    Each interval is assigned the highest rate whose threshold covers
    it; p beyond every threshold belongs to no interval.
    """
    by_rate: dict[Fraction, list[SweepRecord]] = {}
    for record in sweeps:
        by_rate.setdefault(Fraction(record.rate), []).append(record)
    if not by_rate:
        raise ValueError("no sweep records given")

    thresholds = tuple(
        RateThreshold(rate, _threshold_for_rate(by_rate[rate], requirement))
        for rate in sorted(by_rate)
    )

    defined = [(t.threshold, t.rate) for t in thresholds if t.threshold is not None]
    intervals = []
    prev = 0.0
    for cut in sorted({thr for thr, _ in defined}):
        eligible = [rate for thr, rate in defined if thr >= cut]
        intervals.append(SwitchInterval(prev, cut, max(eligible)))
        prev = cut
    return SwitchTable(
        requirement=requirement.label(),
        thresholds=thresholds,
        intervals=tuple(intervals),
    )
