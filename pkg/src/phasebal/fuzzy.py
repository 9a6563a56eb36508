"""Mamdani fuzzy controller mapping a phase load (kW) to a suggested change (kW).

The controller is data driven: two linguistic variables (an input "Load"
and an output "Change", each partitioned into overlapping triangular
terms) plus a rule list pairing one input term with one output term.
Inference clips each rule's consequent at the antecedent firing strength
(min implication), aggregates the clipped sets by pointwise max, and
defuzzifies by centroid.

The built-in controller (see default_controller) covers a feeder rated
150 kW per phase with a 300 kW overload ceiling. Other ratings are
supported by loading a different controller definition; nothing below is
specific to the default numbers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import PhaseTotals, round_half_away

__all__ = [
    "TriangularMF",
    "LinguisticVariable",
    "Rule",
    "FuzzyController",
    "UniverseError",
    "membership_at",
    "infer_change",
    "suggest_changes",
    "response_samples",
    "default_controller",
    "DEFAULT_RESOLUTION",
]

DEFAULT_RESOLUTION = 10001

# One inference rule: (input term label, output term label).
Rule = tuple[str, str]


class UniverseError(ValueError):
    """Input load lies outside the controller's designed universe.

    Beyond the overload ceiling the controller must not be used at all;
    the phase should be cut from service instead of balanced.
    """


@dataclass(frozen=True)
class TriangularMF:
    """Triangular membership function with vertices left <= apex <= right.

    Membership is 0 outside (left, right), rises linearly to 1 at the
    apex and falls linearly back to 0. Degenerate edges (left == apex or
    apex == right) are allowed and carry membership 1 at that boundary;
    left == right is not a valid shape.
    """

    label: str
    left: float
    apex: float
    right: float

    def __post_init__(self) -> None:
        if not self.label:
            raise ValueError("membership function needs a non-empty label")
        if not (self.left <= self.apex <= self.right):
            raise ValueError(
                f"term {self.label}: vertices must satisfy left <= apex <= right, "
                f"got ({self.left}, {self.apex}, {self.right})"
            )
        if self.left == self.right:
            raise ValueError(f"term {self.label}: zero-width triangle")

    @property
    def is_symmetric(self) -> bool:
        return (self.right - self.apex) == (self.apex - self.left)


def membership_at(mf: TriangularMF, x: float) -> float:
    """Degree of membership of x in mf, in [0, 1]."""
    left, apex, right = mf.left, mf.apex, mf.right
    if x < left or x > right:
        return 0.0
    if x == left:
        return 1.0 if apex == left else 0.0
    if x == right:
        return 1.0 if apex == right else 0.0
    if x <= apex:
        return (x - left) / (apex - left)
    return (right - x) / (right - apex)


def _membership_grid(mf: TriangularMF, xs: np.ndarray) -> np.ndarray:
    """Vectorized membership_at over a sample grid."""
    out = np.zeros_like(xs)
    left, apex, right = mf.left, mf.apex, mf.right
    if apex > left:
        rising = (xs > left) & (xs <= apex)
        out[rising] = (xs[rising] - left) / (apex - left)
    else:
        out[xs == left] = 1.0
    if right > apex:
        falling = (xs > apex) & (xs < right)
        out[falling] = (right - xs[falling]) / (right - apex)
    else:
        out[xs == right] = 1.0
    return out


@dataclass(frozen=True)
class LinguisticVariable:
    """A named quantity partitioned into overlapping triangular terms.

    Terms must lie within the universe and chain across it (each term
    starts no later than the furthest right edge reached so far), so that
    the universe has no interior gap with zero coverage.
    """

    name: str
    universe: tuple[float, float]
    terms: tuple[TriangularMF, ...]

    def __post_init__(self) -> None:
        lo, hi = self.universe
        if not (lo < hi):
            raise ValueError(f"variable {self.name}: empty universe [{lo}, {hi}]")
        if not self.terms:
            raise ValueError(f"variable {self.name}: needs at least one term")
        labels = [t.label for t in self.terms]
        if len(set(labels)) != len(labels):
            raise ValueError(f"variable {self.name}: duplicate term labels")
        for t in self.terms:
            if t.left < lo or t.right > hi:
                raise ValueError(
                    f"variable {self.name}: term {t.label} [{t.left}, {t.right}] "
                    f"exceeds universe [{lo}, {hi}]"
                )
        covered = lo
        for t in sorted(self.terms, key=lambda t: (t.left, t.right)):
            if t.left > covered:
                raise ValueError(
                    f"variable {self.name}: coverage gap between {covered} and {t.left}"
                )
            covered = max(covered, t.right)
        if covered < hi:
            raise ValueError(
                f"variable {self.name}: coverage gap between {covered} and {hi}"
            )

    def term(self, label: str) -> TriangularMF:
        for t in self.terms:
            if t.label == label:
                return t
        raise KeyError(f"variable {self.name} has no term {label!r}")


@dataclass(frozen=True)
class FuzzyController:
    """Immutable Mamdani controller: input/output variables plus rules.

    integration_resolution is the number of uniform samples taken over
    the output universe when the aggregated fuzzy set is defuzzified.
    """

    input: LinguisticVariable
    output: LinguisticVariable
    rules: tuple[Rule, ...]
    integration_resolution: int = DEFAULT_RESOLUTION

    def __post_init__(self) -> None:
        if not self.rules:
            raise ValueError("controller needs at least one rule")
        for ant, cons in self.rules:
            self.input.term(ant)
            self.output.term(cons)
        if self.integration_resolution < 1000:
            raise ValueError(
                f"integration resolution must be >= 1000, got {self.integration_resolution}"
            )


def _clipped_centroid(mf: TriangularMF, strength: float) -> float:
    """Exact centroid of a triangle clipped at the given height.

    A symmetric triangle clipped at any level keeps its centroid at the
    apex; the general case decomposes the clipped trapezoid into two
    ramps and a plateau.
    """
    if mf.is_symmetric:
        return mf.apex
    left, apex, right = mf.left, mf.apex, mf.right
    p = left + strength * (apex - left)
    q = right - strength * (right - apex)
    pieces = (
        ((p - left) * strength / 2.0, left + 2.0 * (p - left) / 3.0),
        ((q - p) * strength, (p + q) / 2.0),
        ((right - q) * strength / 2.0, q + (right - q) / 3.0),
    )
    area = sum(a for a, _ in pieces)
    return sum(a * c for a, c in pieces) / area


def infer_change(ctrl: FuzzyController, load: float) -> float:
    """Defuzzified change suggestion (kW) for one phase load (kW).

    Pipeline: fuzzify the load against every rule antecedent, clip each
    fired rule's consequent at its firing strength, aggregate by pointwise
    max, and return the centroid of the aggregate. Deterministic; output
    always lies within the output universe.

    When the aggregate reduces to a single clipped consequent, its
    centroid is returned in closed form (for a symmetric triangle that is
    the apex, exactly). When no rule fires at all, which under chained
    terms can only happen at the extreme ends of the input universe, the
    controller stays continuous by returning the consequent apex of the
    rule whose antecedent apex is nearest to the load.

    Raises UniverseError for loads outside the input universe.
    """
    lo, hi = ctrl.input.universe
    if not (lo <= load <= hi):
        raise UniverseError(
            f"load {load} kW outside controller universe [{lo}, {hi}] kW; "
            f"the controller must not be used beyond its design range"
        )

    # Max firing strength per consequent term (a term may serve several rules).
    clipped: dict[str, float] = {}
    for ant, cons in ctrl.rules:
        w = membership_at(ctrl.input.term(ant), load)
        if w > 0.0:
            clipped[cons] = max(clipped.get(cons, 0.0), w)

    if not clipped:
        nearest = min(
            ctrl.rules,
            key=lambda rule: abs(ctrl.input.term(rule[0]).apex - load),
        )
        return ctrl.output.term(nearest[1]).apex

    if len(clipped) == 1:
        (cons, w), = clipped.items()
        return _clipped_centroid(ctrl.output.term(cons), w)

    out_lo, out_hi = ctrl.output.universe
    xs = np.linspace(out_lo, out_hi, ctrl.integration_resolution)
    agg = np.zeros_like(xs)
    for cons, w in clipped.items():
        np.maximum(agg, np.minimum(w, _membership_grid(ctrl.output.term(cons), xs)), out=agg)
    return float(np.dot(xs, agg) / agg.sum())


def suggest_changes(ctrl: FuzzyController, totals: PhaseTotals) -> tuple[int, int, int]:
    """Per-phase change suggestion, rounded to whole kW (ties away from zero).

    Raises UniverseError naming the offending phase if any total lies
    outside the controller's input universe.
    """
    changes = []
    for i, total in enumerate(totals):
        try:
            changes.append(round_half_away(infer_change(ctrl, total)))
        except UniverseError as exc:
            raise UniverseError(f"phase {i + 1}: {exc}") from None
    return tuple(changes)  # type: ignore[return-value]


def response_samples(ctrl: FuzzyController, step: float = 1.0) -> list[tuple[float, float]]:
    """(load, change) samples over the input universe at the given step.

    The top of the universe is always included, so the sampled relation
    spans the full design range even when step does not divide it.
    """
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    lo, hi = ctrl.input.universe
    samples = []
    k = 0
    while True:
        load = lo + k * step
        if load > hi:
            break
        samples.append((load, infer_change(ctrl, load)))
        k += 1
    if samples[-1][0] < hi:
        samples.append((hi, infer_change(ctrl, hi)))
    return samples


def default_controller(integration_resolution: int = DEFAULT_RESOLUTION) -> FuzzyController:
    """Built-in controller for a 150 kW per phase feeder (300 kW ceiling).

    Eight load terms from Very Less Loaded to Heavily Overloaded, eight
    change terms from High Subtraction to Very Large Addition, one rule
    per load term. Each term is a symmetric triangle with its apex at the
    midpoint of the term's range.
    """
    load = LinguisticVariable(
        name="Load",
        universe=(0.0, 300.0),
        terms=(
            TriangularMF("VLL", 0.0, 25.0, 50.0),
            TriangularMF("LL", 35.0, 60.0, 85.0),
            TriangularMF("MLL", 65.0, 90.0, 115.0),
            TriangularMF("PL", 100.0, 125.0, 150.0),
            TriangularMF("SOL", 125.0, 150.0, 175.0),
            TriangularMF("MOL", 165.0, 190.0, 215.0),
            TriangularMF("OL", 200.0, 225.0, 250.0),
            TriangularMF("HOL", 235.0, 267.5, 300.0),
        ),
    )
    change = LinguisticVariable(
        name="Change",
        universe=(-150.0, 150.0),
        terms=(
            TriangularMF("HS", -150.0, -117.5, -85.0),
            TriangularMF("S", -100.0, -75.0, -50.0),
            TriangularMF("MS", -65.0, -40.0, -15.0),
            TriangularMF("SS", -50.0, -12.5, 25.0),
            TriangularMF("PA", 0.0, 25.0, 50.0),
            TriangularMF("MA", 35.0, 60.0, 85.0),
            TriangularMF("LA", 65.0, 90.0, 115.0),
            TriangularMF("VLA", 100.0, 125.0, 150.0),
        ),
    )
    rules: tuple[Rule, ...] = (
        ("VLL", "VLA"),
        ("LL", "LA"),
        ("MLL", "MA"),
        ("PL", "PA"),
        ("SOL", "SS"),
        ("MOL", "MS"),
        ("OL", "S"),
        ("HOL", "HS"),
    )
    return FuzzyController(load, change, rules, integration_resolution)
