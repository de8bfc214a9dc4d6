"""Trajectory-sampling oracle for the box games.

Plays the full game stochastically (placement, reveal tie-breaks,
measurement collapses, decision coins, box openings) without touching the
closed forms, so its estimates can certify them independently.

Trials are partitioned into chunks seeded from a spawned Philox
counter-based stream per chunk; the merge is a plain win count, so the
estimate is bit-for-bit reproducible from (seed, trials, chunk count) and
independent of execution order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .equilibrium import StrategyProfile
from .game import AliceMeasurementStrategy, BobStrategy, expected_payoff
from .nstage import BobPolicy, NStageConfig, final_stage_weights

DEFAULT_CHUNKS = 8

#: Acceptance band half-width in standard errors for analytic comparisons.
#: Two-sided tail mass at 5 sigma is ~6e-7, so even dozens of checks per run
#: keep the false-failure rate well under 1 in 10^4.
SIGMA_BAND = 5.0


@dataclass(frozen=True)
class McEstimate:
    p_hat: float
    stderr: float
    trials: int
    seed: int
    chunks: int

    def __post_init__(self):
        if not 0.0 <= self.p_hat <= 1.0:
            raise DomainError(f"p_hat must lie in [0, 1], got {self.p_hat!r}")
        expected = math.sqrt(self.p_hat * (1.0 - self.p_hat) / self.trials)
        if abs(self.stderr - expected) > 1e-12:
            raise DomainError("stderr must equal sqrt(p(1-p)/trials)")


@dataclass(frozen=True)
class McComparison:
    """Statistical agreement report between sampled and analytic values."""

    p_hat: float
    p_exact: float
    stderr: float
    z_score: float
    passed: bool
    low_power: bool
    trials: int
    seed: int
    chunks: int


def _chunk_rngs(seed: int, chunks: int) -> list[np.random.Generator]:
    root = np.random.SeedSequence(seed)
    return [np.random.Generator(np.random.Philox(child)) for child in root.spawn(chunks)]


def _chunk_sizes(trials: int, chunks: int) -> list[int]:
    base, extra = divmod(trials, chunks)
    return [base + (1 if i < extra else 0) for i in range(chunks)]


def _final_amplitudes(rng: np.random.Generator, size: int, at_pick: np.ndarray,
                      alice: AliceMeasurementStrategy) -> tuple[np.ndarray, np.ndarray]:
    """Sample Alice's collapse; return real amplitudes over (pick, other)."""
    alpha = np.where(at_pick, alice.alpha0, alice.alpha1)
    c, s = np.cos(alpha), np.sin(alpha)
    aligned_prob = np.where(at_pick, c * c, s * s)
    aligned = rng.random(size) < aligned_prob
    amp_pick = np.where(aligned, c, -s)
    amp_other = np.where(aligned, s, c)
    return amp_pick, amp_other


def _sample_bob_win(rng: np.random.Generator, size: int, bob: BobStrategy,
                    amp_pick: np.ndarray, amp_other: np.ndarray) -> int:
    if bob.kind == "quantum":
        c, s = math.cos(bob.beta), math.sin(bob.beta)
        win_prob = (c * amp_pick + s * amp_other) ** 2
    else:
        stick = rng.random(size) < bob.stick_weight
        win_prob = np.where(stick, amp_pick ** 2, amp_other ** 2)
    return int(np.count_nonzero(rng.random(size) < win_prob))


def _three_box_chunk(profile: StrategyProfile, size: int, rng: np.random.Generator) -> int:
    """One chunk of full three-box trajectories with Bob's pick at box 0."""
    placement = rng.integers(0, 3, size=size)
    # Alice reveals a fair empty box; its identity does not feed a
    # label-blind decision, so only the location relative to the pick matters.
    at_pick = placement == 0
    amp_pick, amp_other = _final_amplitudes(rng, size, at_pick, profile.alice)
    return _sample_bob_win(rng, size, profile.bob, amp_pick, amp_other)


def _choose_uniform(rng: np.random.Generator, eligible: np.ndarray) -> np.ndarray:
    """Row-wise uniform choice over a boolean eligibility matrix."""
    counts = eligible.sum(axis=1)
    ranks = np.floor(rng.random(eligible.shape[0]) * counts).astype(int)
    cumulative = np.cumsum(eligible, axis=1)
    return np.argmax(cumulative >= (ranks + 1)[:, None], axis=1)


def _nstage_classical_chunk(policy: BobPolicy, config: NStageConfig, size: int,
                            rng: np.random.Generator) -> int:
    """One chunk of full n-box classical trajectories."""
    n = config.n_boxes
    particle = rng.integers(0, n, size=size)
    bob = np.zeros(size, dtype=int)
    open_boxes = np.ones((size, n), dtype=bool)
    rows = np.arange(size)
    for stage, decision in enumerate(policy.decisions):
        eligible = open_boxes.copy()
        eligible[rows, bob] = False
        eligible[rows, particle] = False
        if config.reveal_tie_break == "uniform":
            revealed = _choose_uniform(rng, eligible)
        else:
            revealed = np.argmax(eligible, axis=1)
        open_boxes[rows, revealed] = False
        if decision == "switch":
            targets = open_boxes.copy()
            targets[rows, bob] = False
            bob = _choose_uniform(rng, targets)
    return int(np.count_nonzero(bob == particle))


def _nstage_quantum_chunk(profile: StrategyProfile, config: NStageConfig, size: int,
                          rng: np.random.Generator) -> int:
    """Stick-until-last trajectories with Alice measuring at the final stage.

    Bob holds his pick through every reveal, so the particle survives to the
    final pair exactly when it is not in his box; the reveal choices
    themselves cannot move that split.
    """
    n = config.n_boxes
    particle = rng.integers(0, n, size=size)
    at_pick = particle == 0
    amp_pick, amp_other = _final_amplitudes(rng, size, at_pick, profile.alice)
    return _sample_bob_win(rng, size, profile.bob, amp_pick, amp_other)


def simulate(profile: StrategyProfile | None, trials: int, seed: int, *,
             chunks: int = DEFAULT_CHUNKS,
             config: NStageConfig | None = None,
             policy: BobPolicy | None = None) -> McEstimate:
    """Estimate Bob's win probability by sampling full game trajectories.

    * ``profile`` alone: the three-box game.
    * ``config`` + ``policy``: the classical n-box game under the policy.
    * ``profile`` + ``config``: the n-box game where Bob sticks until the
      last choice, Alice measures there, and Bob plays ``profile.bob``.
    """
    if trials < 1:
        raise DomainError("trials must be positive")
    if chunks < 1:
        raise DomainError("chunk count must be positive")
    if config is None and policy is not None:
        raise DomainError("a policy needs an n-stage config")
    if config is None and profile is None:
        raise DomainError("either a profile or an n-stage config is required")
    if config is not None and (policy is None) == (profile is None):
        raise DomainError("with a config, give a policy (classical) or a "
                          "profile (measured last stage), not both")
    if config is not None and policy is not None and len(policy.decisions) != config.n_boxes - 2:
        raise DomainError(f"policy has {len(policy.decisions)} decisions, "
                          f"the {config.n_boxes}-box game needs {config.n_boxes - 2}")

    wins = 0
    rngs = _chunk_rngs(seed, chunks)
    for size, rng in zip(_chunk_sizes(trials, chunks), rngs):
        if size == 0:
            continue
        if config is None:
            wins += _three_box_chunk(profile, size, rng)
        elif policy is not None:
            wins += _nstage_classical_chunk(policy, config, size, rng)
        else:
            wins += _nstage_quantum_chunk(profile, config, size, rng)
    p_hat = wins / trials
    stderr = math.sqrt(p_hat * (1.0 - p_hat) / trials)
    return McEstimate(p_hat=p_hat, stderr=stderr, trials=trials, seed=seed, chunks=chunks)


def analytic_value(profile: StrategyProfile | None, config: NStageConfig | None = None,
                   policy: BobPolicy | None = None) -> float:
    """Closed-form counterpart of :func:`simulate` for the same arguments."""
    if config is None:
        return expected_payoff(profile.alice, profile.bob).p_win
    if policy is not None:
        from .nstage import classical_value

        return float(classical_value(policy, config))
    weights = tuple(float(w) for w in final_stage_weights(config.n_boxes))
    from .equilibrium import profile_value

    return profile_value(profile, weights)


def compare_with_analytic(profile: StrategyProfile, trials: int, seed: int, *,
                          chunks: int = DEFAULT_CHUNKS,
                          config: NStageConfig | None = None,
                          policy: BobPolicy | None = None) -> McComparison:
    """Hold a sampled estimate against the exact value at the 5-sigma band.

    With few trials the band may span much of [0, 1]; the report flags that
    as ``low_power`` rather than celebrating a vacuous pass.
    """
    estimate = simulate(profile, trials, seed, chunks=chunks, config=config, policy=policy)
    p_exact = analytic_value(profile, config, policy)
    gap = abs(estimate.p_hat - p_exact)
    if estimate.stderr == 0.0:
        z = 0.0 if gap == 0.0 else math.inf
        passed = gap == 0.0
    else:
        z = gap / estimate.stderr
        passed = gap <= SIGMA_BAND * estimate.stderr
    return McComparison(
        p_hat=estimate.p_hat,
        p_exact=p_exact,
        stderr=estimate.stderr,
        z_score=z,
        passed=passed,
        low_power=SIGMA_BAND * max(estimate.stderr, math.sqrt(0.25 / trials)) >= 0.25,
        trials=trials,
        seed=seed,
        chunks=chunks,
    )


def random_profile(rng: np.random.Generator, quantum_bob: bool = False) -> StrategyProfile:
    """Draw a random strategy pair, optionally with a rotated-projector Bob."""
    alice = AliceMeasurementStrategy(*(rng.uniform(0.0, math.pi / 2, size=2)))
    if quantum_bob:
        bob = BobStrategy.quantum(float(rng.uniform(0.0, math.pi)))
    else:
        bob = BobStrategy.mix(float(rng.uniform()))
    return StrategyProfile(alice, bob)
