"""Plan fitness: algebraic, adaptive two-phase, and fuzzy-ranked variants.

The algebraic form rewards feasible prefix length and penalizes orientation
and gripper changes:

    fitness = w_f * feasible_len
            + w_o * (n - 1 - orient_changes)
            + w_g * (n - 1 - grip_changes)

The adaptive variant scores plans by feasible prefix length alone until the
whole population is feasible for the first time, then switches (and stays)
on the full algebraic form.  The fuzzy variant normalizes the three metrics
into [0, 1] and ranks plans by the Mamdani quality output.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field as dc_field

from .encoding import PlanChromosome, PlanMetrics, metrics
from .fuzzy import FuzzySystem, build_ranking_system
from .product import ProductModel


@dataclass(frozen=True)
class Weights:
    """Non-negative weights of the algebraic fitness terms (sum must be > 0)."""

    feasible: float = 2.0
    orientation: float = 1.0
    gripper: float = 1.0

    def __post_init__(self) -> None:
        vals = (self.feasible, self.orientation, self.gripper)
        if any(w < 0 for w in vals):
            raise ValueError(f"fitness weights must be non-negative, got {vals}")
        if sum(vals) <= 0:
            raise ValueError("at least one fitness weight must be positive")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.feasible, self.orientation, self.gripper)


class FitnessMode(enum.Enum):
    """The four run modes of the planner."""

    ALGEBRAIC = "A"
    FUZZY_RANKED = "B"
    ADAPTIVE = "C"
    ADAPTIVE_CONTROLLED = "D"

    @classmethod
    def from_letter(cls, letter: str) -> "FitnessMode":
        try:
            return cls(letter.upper())
        except ValueError:
            raise ValueError(
                f"unknown mode {letter!r}; expected one of A, B, C, D"
            ) from None

    @property
    def adaptive(self) -> bool:
        return self in (FitnessMode.ADAPTIVE, FitnessMode.ADAPTIVE_CONTROLLED)


def algebraic_fitness(m: PlanMetrics, weights: Weights = Weights()) -> float:
    n = m.n_parts
    return (
        weights.feasible * m.feasible_len
        + weights.orientation * (n - 1 - m.orient_changes)
        + weights.gripper * (n - 1 - m.grip_changes)
    )


def adaptive_fitness(m: PlanMetrics, weights: Weights, population_all_feasible: bool) -> float:
    """Phase 1 (not all feasible): prefix length only; phase 2: algebraic."""
    if not population_all_feasible:
        return float(m.feasible_len)
    return algebraic_fitness(m, weights)


def normalized_measures(m: PlanMetrics) -> dict[str, float]:
    """Map plan metrics onto the three [0, 1] inputs of the ranking system.

    Change counts are normalized by the feasible prefix's own change budget,
    max(feasible_len - 1, 1), so short prefixes are not rewarded for having
    few opportunities to change.
    """
    n = max(m.n_parts, 1)
    budget = max(m.feasible_len - 1, 1)
    return {
        "feasible_fraction": m.feasible_len / n,
        "orientation_stability": 1.0 - m.orient_changes / budget,
        "gripper_stability": 1.0 - m.grip_changes / budget,
    }


def fuzzy_fitness(m: PlanMetrics, system: FuzzySystem) -> float:
    """Quality centroid of the plan under the ranking system."""
    return system.infer(normalized_measures(m))


@dataclass
class EvalContext:
    """Everything rank_population needs besides the chromosomes.

    ``all_feasible`` is the latched adaptive phase flag; the GA flips it once
    and never clears it.  ``cache`` memoizes fuzzy inference per distinct
    (feasible_len, orient_changes, grip_changes) triple, which keeps mode B
    affordable on large products.
    """

    model: ProductModel
    mode: FitnessMode = FitnessMode.ALGEBRAIC
    weights: Weights = Weights()
    all_feasible: bool = False
    ranking_system: FuzzySystem | None = None
    cache: dict = dc_field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.mode is FitnessMode.FUZZY_RANKED and self.ranking_system is None:
            self.ranking_system = build_ranking_system()

    def evaluate(self, m: PlanMetrics) -> float:
        if self.mode is FitnessMode.FUZZY_RANKED:
            key = (m.feasible_len, m.orient_changes, m.grip_changes)
            value = self.cache.get(key)
            if value is None:
                value = fuzzy_fitness(m, self.ranking_system)
                self.cache[key] = value
            return value
        if self.mode.adaptive:
            return adaptive_fitness(m, self.weights, self.all_feasible)
        return algebraic_fitness(m, self.weights)


def rank_population(
    population: list[PlanChromosome], ctx: EvalContext
) -> list[tuple[PlanChromosome, float, PlanMetrics]]:
    """Score and sort a population, best first.

    Ties on fitness are broken toward fewer orientation changes, then fewer
    gripper changes, then original position (stable).
    """
    scored = []
    for chrom in population:
        m = metrics(ctx.model, chrom)
        scored.append((chrom, ctx.evaluate(m), m))
    order = sorted(
        range(len(scored)),
        key=lambda i: (-scored[i][1], scored[i][2].orient_changes, scored[i][2].grip_changes, i),
    )
    return [scored[i] for i in order]
