"""Iterative feeder balancing: suggest, correct, plan, apply, repeat.

Each pass reads the phase totals, asks the fuzzy controller for a signed
change per phase, repairs the suggestion so it sums to zero (moving load
cannot create or destroy power), turns it into concrete point moves, and
applies them. The loop stops when the average unbalance drops below the
threshold, an iteration cap is hit, the suggestion cannot be implemented,
or a phase total leaves the controller's input range.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .fuzzy import FuzzyController, default_controller, suggest_changes
from .model import FeederSnapshot, avg_unbalance, phase_totals, round_half_away
from .planner import (
    BalancePlan,
    ChangeSuggestion,
    determine,
    distribute,
    feasibility_check,
)

__all__ = [
    "BALANCED",
    "ALREADY_BALANCED",
    "INFEASIBLE",
    "ITERATION_CAP",
    "OVER_CAPACITY",
    "BalancerConfig",
    "IterationRecord",
    "BalanceReport",
    "error_correct",
    "apply_plan",
    "balance",
]

BALANCED = "balanced"
ALREADY_BALANCED = "already-balanced"
INFEASIBLE = "infeasible"
ITERATION_CAP = "iteration-cap"
OVER_CAPACITY = "over-capacity"


@dataclass(frozen=True)
class BalancerConfig:
    """Knobs for the balancing loop.

    unbalance_threshold is in kW and compared strictly (< threshold
    stops). integer_scale sharpens the subset solver's kW lattice for
    fractional load data; 1 keeps whole-kW resolution.
    """

    unbalance_threshold: float = 10.0
    max_iterations: int = 10
    controller: FuzzyController = field(default_factory=default_controller)
    integer_scale: int = 1

    def __post_init__(self) -> None:
        if not self.unbalance_threshold > 0:
            raise ValueError(f"threshold must be > 0, got {self.unbalance_threshold!r}")
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1, got {self.max_iterations!r}")
        if not (isinstance(self.integer_scale, int) and self.integer_scale >= 1):
            raise ValueError(f"integer_scale must be a positive integer, got {self.integer_scale!r}")


@dataclass(frozen=True)
class IterationRecord:
    """Everything one pass of the loop did, for reporting."""

    totals_before: tuple[float, float, float]
    suggestion_raw: tuple[int, int, int]
    average_error: int
    error_vector: tuple[int, int, int]
    suggestion_corrected: tuple[int, int, int]
    plan: BalancePlan | None
    infeasibility: str | None
    totals_after: tuple[float, float, float]
    unbalance_after: float


@dataclass(frozen=True)
class BalanceReport:
    """Outcome of a balance run: status plus the full iteration trail."""

    initial_totals: tuple[float, float, float]
    initial_unbalance: float
    iterations: tuple[IterationRecord, ...]
    status: str
    final_totals: tuple[float, float, float]
    final_unbalance: float
    final_snapshot: FeederSnapshot


def error_correct(raw: tuple[int, int, int]) -> tuple[int, tuple[int, int, int], tuple[int, int, int]]:
    """Repair a raw suggestion so the three changes sum to exactly zero.

    The average error (sum/3, rounded) is removed from the first two
    phases; the third absorbs the remainder so integer truncation cannot
    leave a residue. Returns (average_error, error_vector, corrected).
    """
    total = sum(raw)
    ae = round_half_away(total / 3)
    error = (ae, ae, total - 2 * ae)
    corrected = tuple(r - e for r, e in zip(raw, error))
    return ae, error, corrected


def apply_plan(snapshot: FeederSnapshot, plan: BalancePlan) -> FeederSnapshot:
    """Execute a plan: detach each moved point, append it to its new phase.

    Surviving points keep their relative order; arrivals land at the end
    of the destination phase in move order. The system total is preserved
    exactly because the very same float values are reattached.
    """
    removing: dict[int, set[int]] = {}
    for mv in plan.moves:
        points = snapshot.phases[mv.source_phase]
        if not 0 <= mv.point_index < len(points):
            raise ValueError(
                f"move references point {mv.point_index} of phase {mv.source_phase + 1}, "
                f"which has {len(points)} points"
            )
        if points[mv.point_index] != mv.power:
            raise ValueError(
                f"move expects {mv.power!r} kW at phase {mv.source_phase + 1} "
                f"point {mv.point_index}, snapshot has {points[mv.point_index]!r}"
            )
        taken = removing.setdefault(mv.source_phase, set())
        if mv.point_index in taken:
            raise ValueError(
                f"phase {mv.source_phase + 1} point {mv.point_index} moved twice"
            )
        taken.add(mv.point_index)

    new_phases: list[list[float]] = [
        [p for j, p in enumerate(points) if j not in removing.get(i, ())]
        for i, points in enumerate(snapshot.phases)
    ]
    for mv in plan.moves:
        new_phases[mv.dest_phase].append(mv.power)
    return FeederSnapshot.from_lists(new_phases)


def balance(snapshot: FeederSnapshot, config: BalancerConfig | None = None) -> BalanceReport:
    """Run the balancing loop until the feeder settles or a stop fires.

    Stop conditions, checked in order at the top of each pass: unbalance
    already under threshold (status balanced, or already-balanced when no
    pass ran); iteration cap reached; any phase total outside the
    controller's input range (over-capacity). Inside a pass the plan step
    can declare the suggestion infeasible, which also ends the run.
    """
    cfg = config if config is not None else BalancerConfig()
    current = snapshot
    initial_totals = phase_totals(snapshot)
    initial_unbalance = avg_unbalance(initial_totals)
    records: list[IterationRecord] = []
    status: str | None = None

    while True:
        totals = phase_totals(current)
        unbalance = avg_unbalance(totals)
        if unbalance < cfg.unbalance_threshold:
            status = BALANCED if records else ALREADY_BALANCED
            break
        if len(records) >= cfg.max_iterations:
            status = ITERATION_CAP
            break
        lo, hi = cfg.controller.input.universe
        if any(not lo <= t <= hi for t in totals):
            status = OVER_CAPACITY
            break

        raw = suggest_changes(cfg.controller, totals)
        ae, error, corrected = error_correct(raw)
        suggestion = ChangeSuggestion(corrected, corrected=True)

        reason = feasibility_check(current, suggestion)
        if reason is not None:
            records.append(
                IterationRecord(
                    totals_before=totals,
                    suggestion_raw=raw,
                    average_error=ae,
                    error_vector=error,
                    suggestion_corrected=corrected,
                    plan=None,
                    infeasibility=reason,
                    totals_after=totals,
                    unbalance_after=unbalance,
                )
            )
            status = INFEASIBLE
            break

        vector = determine(current, suggestion, cfg.integer_scale)
        plan = distribute(vector, suggestion, cfg.integer_scale)
        current = apply_plan(current, plan)
        totals_after = phase_totals(current)
        records.append(
            IterationRecord(
                totals_before=totals,
                suggestion_raw=raw,
                average_error=ae,
                error_vector=error,
                suggestion_corrected=corrected,
                plan=plan,
                infeasibility=None,
                totals_after=totals_after,
                unbalance_after=avg_unbalance(totals_after),
            )
        )

    final_totals = phase_totals(current)
    return BalanceReport(
        initial_totals=initial_totals,
        initial_unbalance=initial_unbalance,
        iterations=tuple(records),
        status=status,
        final_totals=final_totals,
        final_unbalance=avg_unbalance(final_totals),
        final_snapshot=current,
    )
