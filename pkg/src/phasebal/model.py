"""Domain model for a three-phase feeder and its unbalance diagnostics.

A feeder is modeled as three phase conductors, each carrying a list of
single-phase load points (kW). Load points are movable between phases;
the balancing pipeline never creates or destroys load, it only reassigns
points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import chain
from typing import Iterable, Sequence

__all__ = [
    "NUM_PHASES",
    "FeederSnapshot",
    "PhaseTotals",
    "Branch",
    "phase_totals",
    "system_total",
    "avg_unbalance",
    "total_power_loss",
    "round_half_away",
]

NUM_PHASES = 3

# Per-phase kW totals, one entry per phase.
PhaseTotals = tuple[float, float, float]


def round_half_away(x: float) -> int:
    """Round to the nearest integer, ties away from zero.

    This is the rounding convention used throughout the pipeline (fuzzy
    output, average error, point counts). Note it differs from Python's
    built-in banker's rounding: round_half_away(2.5) == 3, not 2.
    """
    if x >= 0:
        return int(math.floor(x + 0.5))
    return int(math.ceil(x - 0.5))


@dataclass(frozen=True)
class FeederSnapshot:
    """Immutable state of the feeder: three tuples of load-point powers (kW).

    Every load point is a finite, non-negative kW value. Point counts per
    phase may differ (and will, after moves are applied).
    """

    phases: tuple[tuple[float, ...], ...]

    def __post_init__(self) -> None:
        if len(self.phases) != NUM_PHASES:
            raise ValueError(
                f"feeder must have exactly {NUM_PHASES} phases, got {len(self.phases)}"
            )
        object.__setattr__(
            self, "phases", tuple(tuple(float(p) for p in ph) for ph in self.phases)
        )
        for i, ph in enumerate(self.phases):
            for j, p in enumerate(ph):
                if not math.isfinite(p):
                    raise ValueError(f"phase {i + 1} point {j} is not finite: {p!r}")
                if p < 0:
                    raise ValueError(f"phase {i + 1} point {j} is negative: {p!r}")

    @classmethod
    def from_lists(cls, phases: Sequence[Sequence[float]]) -> "FeederSnapshot":
        return cls(tuple(tuple(ph) for ph in phases))


@dataclass(frozen=True)
class Branch:
    """One branch of the network, for the resistive-loss diagnostic.

    r is the branch resistance (ohm), p and q the real (kW) and reactive
    (kVAr) power flow, v_mag the voltage magnitude (V, strictly positive).
    """

    r: float
    p: float
    q: float
    v_mag: float

    def __post_init__(self) -> None:
        if self.r < 0:
            raise ValueError(f"branch resistance must be >= 0, got {self.r!r}")
        if self.v_mag <= 0:
            raise ValueError(f"branch voltage must be > 0, got {self.v_mag!r}")


def phase_totals(snapshot: FeederSnapshot) -> PhaseTotals:
    """Total load per phase. Exact (fsum) per phase, no rounding."""
    t = tuple(math.fsum(ph) for ph in snapshot.phases)
    return t  # type: ignore[return-value]


def system_total(snapshot: FeederSnapshot) -> float:
    """Total system load over all phases, summed in one exact pass.

    fsum over the flattened point list is invariant under any reassignment
    of points between phases, which is what conservation checks rely on.
    """
    return math.fsum(chain.from_iterable(snapshot.phases))


def avg_unbalance(totals: Sequence[float]) -> float:
    """Average unbalance per phase: mean pairwise absolute difference of
    the three phase totals.

    Zero when all three totals are equal; invariant under permutation of
    the phases and under adding a common constant to all three.
    """
    if len(totals) != NUM_PHASES:
        raise ValueError(f"expected {NUM_PHASES} totals, got {len(totals)}")
    t1, t2, t3 = totals
    # fsum keeps the metric independent of phase ordering
    return math.fsum((abs(t1 - t2), abs(t2 - t3), abs(t3 - t1))) / 3.0


def total_power_loss(branches: Iterable[Branch]) -> float:
    """Total resistive loss over the branches: sum of r * (p^2 + q^2) / v^2.

    A motivating diagnostic only; the balancing pipeline itself never
    needs branch data.
    """
    terms = []
    for i, b in enumerate(branches):
        if b.v_mag == 0:
            raise ValueError(f"branch {i} has zero voltage magnitude")
        terms.append(b.r * (b.p * b.p + b.q * b.q) / (b.v_mag * b.v_mag))
    return math.fsum(terms)
