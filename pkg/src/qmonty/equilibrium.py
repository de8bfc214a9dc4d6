"""Best responses, exploitability, Nash verification, and payoff sweeps.

Exploitability is reported in win-probability units throughout: the largest
improvement either player can obtain by a unilateral deviation, measured as a
probability gap.  The zero-sum coin gain doubles every gap (gain = 2p - 1),
so the deterministic-profile scan certificate also carries the gain-units
figure, which is what its pass threshold applies to.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ScanFailureError
from .game import (
    CANONICAL_WEIGHTS,
    AliceMeasurementStrategy,
    BobStrategy,
    mixture_win_probability,
    post_measurement_entries,
    quantum_win_probability,
)

HALF_PI = math.pi / 2

#: Gain-units floor asserted by the deterministic-profile scan.  The exact
#: minimum over that profile family is 2/9, attained on the always-switch
#: branch where the post-measurement state is diag(5/9, 4/9); see
#: no_pure_equilibrium_scan.
SCAN_GAIN_THRESHOLD = 0.2


@dataclass(frozen=True)
class StrategyProfile:
    alice: AliceMeasurementStrategy
    bob: BobStrategy


@dataclass(frozen=True)
class EquilibriumReport:
    """Outcome of a Nash check at a given tolerance."""

    profile: StrategyProfile
    value: float
    exploitability: float
    is_nash: bool
    tol: float
    alice_best_dev: tuple[float, float, float]  # (alpha0, alpha1, value)
    bob_best_dev: tuple[BobStrategy, float]

    def __post_init__(self):
        if not 0.0 <= self.value <= 1.0:
            raise DomainError(f"value must lie in [0, 1], got {self.value!r}")
        if self.exploitability < 0.0:
            raise DomainError("exploitability must be nonnegative")
        if self.is_nash != (self.exploitability <= self.tol):
            raise DomainError("is_nash must mirror exploitability <= tol")


@dataclass(frozen=True)
class ScanCertificate:
    """Minimum exploitability found over all deterministic profiles on a grid.

    ``min_exploitability`` is in win-probability units; ``min_gain_exploitability``
    is the same figure in gain units (exactly twice as large) and is the number
    held against ``threshold``.
    """

    grid_step: float
    grid_points_per_axis: int
    profiles_scanned: int
    min_exploitability: float
    min_gain_exploitability: float
    argmin_alpha0: float
    argmin_alpha1: float
    argmin_eta: float
    argmin_p_win: float
    threshold: float


@dataclass(frozen=True)
class SweepRow:
    alpha0: float
    alpha1: float
    eta: float | None
    beta: float | None
    p_win: float
    gain: float


@dataclass(frozen=True)
class SweepTable:
    """Deterministic payoff table over a parameter grid, in index order."""

    rows: tuple[SweepRow, ...]
    bob_axis: str  # "eta" | "beta"

    CSV_HEADER = "alpha0,alpha1,eta,beta,p_win,gain"

    def to_records(self) -> list[dict]:
        return [
            {"alpha0": r.alpha0, "alpha1": r.alpha1, "eta": r.eta, "beta": r.beta,
             "p_win": r.p_win, "gain": r.gain}
            for r in self.rows
        ]

    def write_csv(self, stream) -> None:
        def cell(value):
            return "" if value is None else repr(value)

        stream.write(self.CSV_HEADER + "\n")
        for r in self.rows:
            stream.write(",".join(
                [repr(r.alpha0), repr(r.alpha1), cell(r.eta), cell(r.beta),
                 repr(r.p_win), repr(r.gain)]) + "\n")


def profile_value(profile: StrategyProfile,
                  weights: tuple[float, float] = CANONICAL_WEIGHTS) -> float:
    """Bob's win probability under the profile and post-reveal weights."""
    alice, bob = profile.alice, profile.bob
    if bob.is_mixture_family:
        return float(mixture_win_probability(alice.alpha0, alice.alpha1,
                                             bob.stick_weight, *weights))
    return float(quantum_win_probability(alice.alpha0, alice.alpha1, bob.beta, *weights))


def bob_best_response(strat_a: AliceMeasurementStrategy, space: str = "quantum",
                      weights: tuple[float, float] = CANONICAL_WEIGHTS
                      ) -> tuple[BobStrategy, float]:
    """Bob's best reply to Alice's angles.

    ``space`` selects the deviation family: ``mixture-only`` compares stick
    and switch (the mixture optimum is always at an endpoint); ``quantum``
    maximizes over rotated projectors, whose optimum is the top eigenvalue of
    the post-measurement state, attained at the top eigenvector's angle.
    Ties resolve toward the smaller parameter (switch, then beta = 0).
    """
    p00, p11, p01 = post_measurement_entries(strat_a.alpha0, strat_a.alpha1, *weights)
    p00, p11, p01 = float(p00), float(p11), float(p01)
    if space == "mixture-only":
        if p00 > p11:
            return BobStrategy.stick(), p00
        return BobStrategy.switch(), p11
    if space != "quantum":
        raise DomainError(f"unknown deviation space {space!r}")
    mean = 0.5 * (p00 + p11)
    radius = math.hypot(0.5 * (p00 - p11), p01)
    value = mean + radius
    beta = 0.5 * math.atan2(2.0 * p01, p00 - p11) % math.pi
    return BobStrategy.quantum(beta), value


def alice_best_response(strat_b: BobStrategy,
                        weights: tuple[float, float] = CANONICAL_WEIGHTS
                        ) -> tuple[AliceMeasurementStrategy, float]:
    """Alice's payoff-minimizing angles against a stick/switch mixture.

    With u_i = sin^2(a_i) cos^2(a_i) in [0, 1/4], the payoff is linear in
    each u_i, so each branch saturates at an endpoint: angle 0 when the
    branch coefficient is positive, pi/4 when negative, pi/4 on ties.
    """
    if not strat_b.is_mixture_family:
        raise DomainError("Alice's closed-form best response is defined against "
                          "stick/switch mixtures only")
    eta = strat_b.stick_weight
    w_pick, w_other = weights
    # Branch coefficients of u0 and u1 in the payoff.
    coeff0 = w_pick * (2.0 - 4.0 * eta)
    coeff1 = w_other * (4.0 * eta - 2.0)
    alpha0, u0 = (0.0, 0.0) if coeff0 > 0.0 else (math.pi / 4, 0.25)
    alpha1, u1 = (0.0, 0.0) if coeff1 > 0.0 else (math.pi / 4, 0.25)
    value = (w_pick * (eta + (2.0 - 4.0 * eta) * u0)
             + w_other * ((1.0 - eta) + (4.0 * eta - 2.0) * u1))
    return AliceMeasurementStrategy(alpha0, alpha1), value


def exploitability(profile: StrategyProfile, space: str = "quantum",
                   weights: tuple[float, float] = CANONICAL_WEIGHTS) -> float:
    """Largest unilateral improvement available to either player.

    Win-probability units; zero exactly at a Nash equilibrium.  Alice's
    deviation side requires Bob's strategy to be in the mixture family.
    """
    value = profile_value(profile, weights)
    _, bob_value = bob_best_response(profile.alice, space, weights)
    _, alice_value = alice_best_response(profile.bob, weights)
    return max(bob_value - value, value - alice_value, 0.0)


def verify_nash(profile: StrategyProfile, tol: float = 1e-9,
                weights: tuple[float, float] = CANONICAL_WEIGHTS) -> EquilibriumReport:
    """Check a profile for equilibrium, reporting both best deviations.

    Bob's deviation space includes the rotated projectors; Alice's spans the
    full two-angle measurement family.
    """
    if tol <= 0:
        raise DomainError("tolerance must be positive")
    value = profile_value(profile, weights)
    bob_dev, bob_value = bob_best_response(profile.alice, "quantum", weights)
    alice_dev, alice_value = alice_best_response(profile.bob, weights)
    expl = max(bob_value - value, value - alice_value, 0.0)
    return EquilibriumReport(
        profile=profile,
        value=value,
        exploitability=expl,
        is_nash=expl <= tol,
        tol=tol,
        alice_best_dev=(alice_dev.alpha0, alice_dev.alpha1, alice_value),
        bob_best_dev=(bob_dev, bob_value),
    )


def no_pure_equilibrium_scan(grid_step: float = math.pi / 200,
                             threshold: float = SCAN_GAIN_THRESHOLD) -> ScanCertificate:
    """Scan every deterministic profile for a would-be pure equilibrium.

    Deterministic profiles are an angle pair on the grid and a pure Bob
    choice (eta in {0, 1}).  For each, the exploitability uses Bob's exact
    top-eigenvalue deviation and Alice's exact closed-form best response, so
    only the profile grid is discretized.

    The certificate's pass condition is on the gain-units minimum.  Exactly:
    over all deterministic profiles the gain exploitability is at least 2/9
    (probability units: 1/9), attained against always-switch at
    sin^2(2 a0) = 8/15, sin^2(2 a1) = 14/15, where the post-measurement state
    is diag(5/9, 4/9) and both players' best deviations gain 1/9.  A grid
    minimum below ``threshold`` is impossible for a correct payoff model and
    raises ScanFailureError.
    """
    if grid_step > math.pi / 100 + 1e-12:
        raise DomainError(f"grid step {grid_step!r} too coarse (max pi/100)")
    if grid_step <= 0:
        raise DomainError("grid step must be positive")
    points = int(round(HALF_PI / grid_step)) + 1
    grid = np.linspace(0.0, HALF_PI, points)
    a0, a1 = np.meshgrid(grid, grid, indexing="ij")
    p00, p11, p01 = post_measurement_entries(a0, a1)
    top_eig = 0.5 * (p00 + p11) + np.sqrt((0.5 * (p00 - p11)) ** 2 + p01 ** 2)

    best = None
    for eta in (0.0, 1.0):
        value = eta * p00 + (1.0 - eta) * p11
        _, alice_value = alice_best_response(BobStrategy.mix(eta))
        expl = np.maximum(top_eig - value, value - alice_value)
        idx = np.unravel_index(np.argmin(expl), expl.shape)
        candidate = (float(expl[idx]), float(grid[idx[0]]), float(grid[idx[1]]),
                     eta, float(value[idx]))
        if best is None or candidate[0] < best[0]:
            best = candidate

    min_expl, arg_a0, arg_a1, arg_eta, arg_p = best
    min_gain = 2.0 * min_expl
    if min_gain < threshold:
        raise ScanFailureError(
            f"deterministic profile with gain exploitability {min_gain!r} < "
            f"{threshold!r} at (alpha0={arg_a0!r}, alpha1={arg_a1!r}, eta={arg_eta!r})")
    return ScanCertificate(
        grid_step=float(grid[1] - grid[0]),
        grid_points_per_axis=points,
        profiles_scanned=2 * points * points,
        min_exploitability=min_expl,
        min_gain_exploitability=min_gain,
        argmin_alpha0=arg_a0,
        argmin_alpha1=arg_a1,
        argmin_eta=arg_eta,
        argmin_p_win=arg_p,
        threshold=threshold,
    )


def sweep_payoff(alpha0_steps: int, alpha1_steps: int, eta_steps: int | None = None,
                 beta_steps: int | None = None) -> SweepTable:
    """Payoff table over an (alpha0, alpha1, eta | beta) grid.

    Angles span [0, pi/2] inclusive; eta spans [0, 1] inclusive; beta spans
    [0, pi) half-open (the payoff is pi-periodic in beta).  Rows come out in
    lexicographic index order regardless of evaluation schedule.
    """
    if (eta_steps is None) == (beta_steps is None):
        raise DomainError("exactly one of eta_steps/beta_steps must be given")
    for name, steps in (("alpha0_steps", alpha0_steps), ("alpha1_steps", alpha1_steps),
                        ("bob_steps", eta_steps if eta_steps is not None else beta_steps)):
        if steps < 2:
            raise DomainError(f"{name} must be at least 2, got {steps}")

    a0_axis = np.linspace(0.0, HALF_PI, alpha0_steps)
    a1_axis = np.linspace(0.0, HALF_PI, alpha1_steps)
    if eta_steps is not None:
        bob_axis = "eta"
        b_axis = np.linspace(0.0, 1.0, eta_steps)
    else:
        bob_axis = "beta"
        b_axis = np.linspace(0.0, math.pi, beta_steps, endpoint=False)

    a0, a1, b = np.meshgrid(a0_axis, a1_axis, b_axis, indexing="ij")
    if bob_axis == "eta":
        p = mixture_win_probability(a0, a1, b)
    else:
        p = quantum_win_probability(a0, a1, b)
    gain = 2.0 * p - 1.0

    rows = []
    flat = (a0.ravel(), a1.ravel(), b.ravel(), p.ravel(), gain.ravel())
    for va0, va1, vb, vp, vg in zip(*flat):
        rows.append(SweepRow(
            alpha0=float(va0), alpha1=float(va1),
            eta=float(vb) if bob_axis == "eta" else None,
            beta=float(vb) if bob_axis == "beta" else None,
            p_win=float(vp), gain=float(vg)))
    return SweepTable(rows=tuple(rows), bob_axis=bob_axis)


def nash_profile() -> StrategyProfile:
    """The fair-game profile: balanced angles against the even mixture."""
    return StrategyProfile(AliceMeasurementStrategy(math.pi / 4, math.pi / 4),
                           BobStrategy.mix(0.5))
