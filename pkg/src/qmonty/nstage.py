"""The generalized n-box, n-stage game.

Classical policy evaluation is exact: the full game tree (placements,
reveal choices, switch targets) is expanded with rational arithmetic, so
optimality claims carry no floating-point caveats.  The quantum analysis
reduces the last stage to the two-box core with posterior weights
(1/n, (n-1)/n) on Bob's box and the survivor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .errors import DomainError, ResourceLimitError
from .equilibrium import EquilibriumReport, StrategyProfile, verify_nash
from .game import AliceMeasurementStrategy, BobStrategy

#: Policies are enumerated and trees expanded exactly up to this box count.
BRUTE_FORCE_LIMIT = 8


@dataclass(frozen=True)
class NStageConfig:
    n_boxes: int
    reveal_tie_break: str = "uniform"

    def __post_init__(self):
        if self.n_boxes < 3:
            raise DomainError(f"the staged game needs at least 3 boxes, got {self.n_boxes}")
        if self.reveal_tie_break not in ("uniform", "adversarial"):
            raise DomainError(f"unknown reveal tie-break {self.reveal_tie_break!r}")


@dataclass(frozen=True)
class BobPolicy:
    """Per-stage stick/switch plan for the n-2 decision rounds.

    A switch moves to a box drawn uniformly from the unrevealed boxes other
    than the current one.
    """

    decisions: tuple[str, ...]

    def __post_init__(self):
        if not self.decisions:
            raise DomainError("policy needs at least one decision")
        for d in self.decisions:
            if d not in ("stick", "switch"):
                raise DomainError(f"unknown decision {d!r}")

    @classmethod
    def stick_until_last_switch(cls, n_boxes: int) -> "BobPolicy":
        return cls(("stick",) * (n_boxes - 3) + ("switch",))

    @classmethod
    def all_stick(cls, n_boxes: int) -> "BobPolicy":
        return cls(("stick",) * (n_boxes - 2))

    @classmethod
    def from_string(cls, text: str) -> "BobPolicy":
        return cls(tuple(part.strip() for part in text.split(",") if part.strip()))

    def __str__(self) -> str:
        return ",".join(self.decisions)


def classical_value(policy: BobPolicy, config: NStageConfig) -> Fraction:
    """Exact win probability of a policy under uniform placement.

    Expands every reveal choice and switch target; under the adversarial
    tie-break Alice's reveal choices minimize Bob's continuation value by
    backward induction.
    """
    n = config.n_boxes
    if n > BRUTE_FORCE_LIMIT:
        raise ResourceLimitError(
            f"exact tree expansion capped at {BRUTE_FORCE_LIMIT} boxes, got {n}")
    if len(policy.decisions) != n - 2:
        raise DomainError(
            f"policy has {len(policy.decisions)} decisions, the {n}-box game needs {n - 2}")
    adversarial = config.reveal_tie_break == "adversarial"
    cache: dict[tuple, Fraction] = {}

    def reveal_value(unrevealed: frozenset, bob: int, particle: int) -> Fraction:
        key = (unrevealed, bob, particle)
        got = cache.get(key)
        if got is not None:
            return got
        choices = sorted(unrevealed - {bob, particle})
        branches = [decide_value(unrevealed - {box}, bob, particle) for box in choices]
        value = min(branches) if adversarial else sum(branches) / len(branches)
        cache[key] = value
        return value

    def decide_value(unrevealed: frozenset, bob: int, particle: int) -> Fraction:
        stage = n - len(unrevealed)  # decisions are 1-indexed by stage
        if policy.decisions[stage - 1] == "stick":
            return continue_value(unrevealed, bob, particle)
        targets = sorted(unrevealed - {bob})
        branches = [continue_value(unrevealed, t, particle) for t in targets]
        return sum(branches) / len(branches)

    def continue_value(unrevealed: frozenset, bob: int, particle: int) -> Fraction:
        if len(unrevealed) == 2:
            return Fraction(1 if bob == particle else 0)
        return reveal_value(unrevealed, bob, particle)

    boxes = frozenset(range(n))
    total = sum(reveal_value(boxes, 0, particle) for particle in range(n))
    return total / n


def optimal_classical_policy(config: NStageConfig) -> tuple[BobPolicy, Fraction]:
    """Brute-force argmax over all 2^(n-2) policies.

    Ties resolve to the lexicographically smallest decision tuple
    ("stick" < "switch"), making the result deterministic.
    """
    n = config.n_boxes
    if n > BRUTE_FORCE_LIMIT:
        raise ResourceLimitError(
            f"exact policy enumeration capped at {BRUTE_FORCE_LIMIT} boxes, got {n}")
    best: tuple[Fraction, BobPolicy] | None = None
    for decisions in product(("stick", "switch"), repeat=n - 2):
        policy = BobPolicy(decisions)
        value = classical_value(policy, config)
        if best is None or value > best[0] or (value == best[0]
                                               and decisions < best[1].decisions):
            best = (value, policy)
    return best[1], best[0]


def final_stage_weights(n_boxes: int) -> tuple[Fraction, Fraction]:
    """Posterior on (Bob's box, survivor) when Bob sticks until the last choice."""
    return Fraction(1, n_boxes), Fraction(n_boxes - 1, n_boxes)


def quantum_nstage_equilibrium(config: NStageConfig, tol: float = 1e-9) -> EquilibriumReport:
    """Verify the wait-until-last measured equilibrium of the n-box game.

    Profile: Alice leaves the particle alone until two boxes remain, then
    measures both location branches at balanced angles; Bob sticks until the
    last choice and plays the even stick/switch mixture.  The pre-final
    stages reduce to the two-box core with weights (1/n, (n-1)/n), and the
    balanced measurement flattens any weight pair, so the value is 1/2 and
    neither last-stage deviation family (Bob's mixtures and rotated
    projectors, Alice's angle pairs) gains anything.
    """
    w = final_stage_weights(config.n_boxes)
    weights = (float(w[0]), float(w[1]))
    profile = StrategyProfile(
        AliceMeasurementStrategy(math.pi / 4, math.pi / 4), BobStrategy.mix(0.5))
    return verify_nash(profile, tol=tol, weights=weights)
