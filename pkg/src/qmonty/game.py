"""The three-box quantum Monty Hall game.

Placement, pick, reveal, Alice's location-conditioned measurement, Bob's
decision, and the closed-form payoff, plus a stateful :class:`GameSession`
for interactive play (which also supports the n-box generalization used by
the session service).

Conventions
-----------
Analysis relabels Bob's pick to index 0 and the surviving box to index 1;
sessions keep real box labels and map at the boundary.  Alice's measurement
bases are the rotated-plane pair at angle ``alpha0`` when the particle sits
in Bob's box and ``alpha1`` when it sits in the other box.  The payoff is a
win probability in [0, 1]; the zero-sum coin gain is ``2 p - 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ProtocolViolationError, ShapeError
from .quantum import (
    ATOL_ALGEBRA,
    DensityMatrix,
    StateVector,
    basis_ket,
    density_from_pure,
    measure_projective,
    mix,
    partial_trace,
    rotated_basis,
    superpose,
)

HALF_PI = math.pi / 2

#: Posterior weights on (pick, other) after a fair reveal of an empty box
#: under uniform placement over three boxes.
CANONICAL_WEIGHTS = (1.0 / 3.0, 2.0 / 3.0)


@dataclass(frozen=True)
class AliceMeasurementStrategy:
    """Conditional measurement angles, both in [0, pi/2].

    ``alpha0`` rotates the basis used when the particle is in Bob's box,
    ``alpha1`` the basis used when it is in the other unrevealed box.
    """

    alpha0: float
    alpha1: float

    def __post_init__(self):
        for name, value in (("alpha0", self.alpha0), ("alpha1", self.alpha1)):
            if not -ATOL_ALGEBRA <= value <= HALF_PI + ATOL_ALGEBRA:
                raise DomainError(f"{name} must lie in [0, pi/2], got {value!r}")


@dataclass(frozen=True)
class BobStrategy:
    """Bob's final decision: stick, switch, an eta-mixture, or a rotated projector.

    ``mix(eta)`` sticks with probability eta and switches otherwise.
    ``quantum(beta)`` scores the state against cos(beta)|0> + sin(beta)|1>;
    beta is canonicalized into [0, pi) since the payoff is pi-periodic.
    """

    kind: str
    eta: float | None = None
    beta: float | None = None

    _KINDS = ("stick", "switch", "mix", "quantum")

    def __post_init__(self):
        if self.kind not in self._KINDS:
            raise DomainError(f"unknown strategy kind {self.kind!r}")
        if self.kind == "mix":
            if self.eta is None or not 0.0 <= self.eta <= 1.0:
                raise DomainError(f"mixture weight eta must lie in [0, 1], got {self.eta!r}")
        elif self.kind == "quantum":
            if self.beta is None or not math.isfinite(self.beta):
                raise DomainError(f"quantum angle beta must be finite, got {self.beta!r}")
            object.__setattr__(self, "beta", self.beta % math.pi)

    @classmethod
    def stick(cls) -> "BobStrategy":
        return cls("stick")

    @classmethod
    def switch(cls) -> "BobStrategy":
        return cls("switch")

    @classmethod
    def mix(cls, eta: float) -> "BobStrategy":
        return cls("mix", eta=float(eta))

    @classmethod
    def quantum(cls, beta: float) -> "BobStrategy":
        return cls("quantum", beta=float(beta))

    @property
    def is_mixture_family(self) -> bool:
        """True for stick/switch/mix, the strategies with a stick weight."""
        return self.kind in ("stick", "switch", "mix")

    @property
    def stick_weight(self) -> float:
        """Effective eta for the mixture family (stick = 1, switch = 0)."""
        if self.kind == "stick":
            return 1.0
        if self.kind == "switch":
            return 0.0
        if self.kind == "mix":
            return float(self.eta)
        raise DomainError("quantum strategy has no stick weight")

    def describe(self) -> str:
        if self.kind == "mix":
            return f"mix(eta={self.eta!r})"
        if self.kind == "quantum":
            return f"quantum(beta={self.beta!r})"
        return self.kind


@dataclass(frozen=True)
class Placement:
    """How Alice put the particle into the boxes.

    ``classical`` is a definite box, ``superposed`` a pure state over the
    boxes, ``entangled`` a joint pure state with an auxiliary particle
    (system index varying slowest).
    """

    mode: str
    box: int | None = None
    state: StateVector | None = None
    dims: tuple[int, int] | None = None

    @classmethod
    def classical(cls, box: int, n_boxes: int = 3) -> "Placement":
        if not 0 <= box < n_boxes:
            raise DomainError(f"box {box} out of range for {n_boxes} boxes")
        return cls("classical", box=box, dims=(n_boxes, 1))

    @classmethod
    def superposed(cls, state: StateVector) -> "Placement":
        return cls("superposed", state=state, dims=(state.dim, 1))

    @classmethod
    def uniform_superposition(cls, n_boxes: int = 3) -> "Placement":
        return cls.superposed(superpose(np.ones(n_boxes)))

    @classmethod
    def entangled(cls, joint: StateVector, dims: tuple[int, int] = (3, 3)) -> "Placement":
        if dims[0] * dims[1] != joint.dim:
            raise ShapeError(f"dims {dims} do not factor joint dimension {joint.dim}")
        return cls("entangled", state=joint, dims=dims)

    @property
    def n_boxes(self) -> int:
        return self.dims[0]

    def location_prior(self) -> np.ndarray:
        """Box-occupation probabilities seen by a computational measurement."""
        if self.mode == "classical":
            prior = np.zeros(self.n_boxes)
            prior[self.box] = 1.0
            return prior
        if self.mode == "superposed":
            return np.abs(self.state.amplitudes) ** 2
        reduced = partial_trace(density_from_pure(self.state), self.dims, keep=0)
        return np.real(np.diag(reduced.matrix))


@dataclass(frozen=True)
class PayoffReport:
    """Win probability and zero-sum gain, with provenance."""

    p_win: float
    gain: float
    method: str
    stderr: float = 0.0

    def __post_init__(self):
        if not -ATOL_ALGEBRA <= self.p_win <= 1.0 + ATOL_ALGEBRA:
            raise DomainError(f"p_win must lie in [0, 1], got {self.p_win!r}")
        if abs(self.gain - (2.0 * self.p_win - 1.0)) > ATOL_ALGEBRA:
            raise DomainError("gain must equal 2*p_win - 1")
        if self.stderr < 0.0:
            raise DomainError("stderr must be nonnegative")
        if self.method not in ("analytic", "monte-carlo"):
            raise DomainError(f"unknown method {self.method!r}")

    @classmethod
    def analytic(cls, p_win: float) -> "PayoffReport":
        return cls(p_win=p_win, gain=2.0 * p_win - 1.0, method="analytic", stderr=0.0)


# ---------------------------------------------------------------------------
# Closed forms (numpy-broadcastable).


def mixture_win_probability(alpha0, alpha1, eta, w_pick=CANONICAL_WEIGHTS[0],
                            w_other=CANONICAL_WEIGHTS[1]):
    """Closed-form win probability for Bob's eta-mixture of stick and switch.

    ``w_pick``/``w_other`` are the post-reveal weights on Bob's box and the
    surviving box ((1/3, 2/3) in the three-box game).  Broadcasts over numpy
    arrays in any argument.
    """
    c0sq = np.cos(alpha0) ** 2
    s0sq = np.sin(alpha0) ** 2
    c1sq = np.cos(alpha1) ** 2
    s1sq = np.sin(alpha1) ** 2
    quartic0 = c0sq * c0sq + s0sq * s0sq
    quartic1 = c1sq * c1sq + s1sq * s1sq
    cross0 = 2.0 * s0sq * c0sq
    cross1 = 2.0 * s1sq * c1sq
    return (w_pick * (eta * quartic0 + (1.0 - eta) * cross0)
            + w_other * ((1.0 - eta) * quartic1 + eta * cross1))


def post_measurement_entries(alpha0, alpha1, w_pick=CANONICAL_WEIGHTS[0],
                             w_other=CANONICAL_WEIGHTS[1]):
    """Entries (p00, p11, p01) of the particle's state after Alice measures.

    The state is the conditional dephasing of diag(w_pick, w_other) in the
    rotated bases at ``alpha0`` (particle in Bob's box) and ``alpha1``
    (particle in the other box).  All entries are real; broadcasts over
    numpy arrays.
    """
    c0sq = np.cos(alpha0) ** 2
    s0sq = np.sin(alpha0) ** 2
    c1sq = np.cos(alpha1) ** 2
    s1sq = np.sin(alpha1) ** 2
    p00 = w_pick * (c0sq * c0sq + s0sq * s0sq) + w_other * (2.0 * s1sq * c1sq)
    p11 = w_pick * (2.0 * s0sq * c0sq) + w_other * (c1sq * c1sq + s1sq * s1sq)
    p01 = 0.25 * (w_pick * np.sin(4.0 * alpha0) - w_other * np.sin(4.0 * alpha1))
    return p00, p11, p01


def quantum_win_probability(alpha0, alpha1, beta, w_pick=CANONICAL_WEIGHTS[0],
                            w_other=CANONICAL_WEIGHTS[1]):
    """Closed-form win probability for Bob's rotated-projector decision."""
    p00, p11, p01 = post_measurement_entries(alpha0, alpha1, w_pick, w_other)
    return (np.cos(beta) ** 2) * p00 + (np.sin(beta) ** 2) * p11 + np.sin(2.0 * beta) * p01


# ---------------------------------------------------------------------------
# Pipeline operations.


def post_reveal_state(placement: Placement, pick: int, revealed: int,
                      tie_break: str = "uniform") -> DensityMatrix:
    """Bayesian posterior over the two unrevealed boxes after Alice's reveal.

    Returns a diagonal 2x2 density matrix in the ordered basis
    (Bob's box, surviving box).  Coherent placements are first measured in
    the computational basis (the reveal itself presumes a definite location),
    so the prior is the placement's location distribution.

    ``tie_break`` fixes Alice's reveal rule when Bob's box holds the particle
    and both other boxes are empty: ``uniform`` picks fairly, ``adversarial``
    always reveals the lowest-indexed empty box.
    """
    n = placement.n_boxes
    if n != 3:
        raise ShapeError(f"post_reveal_state is defined for 3 boxes, got {n}")
    if not 0 <= pick < n:
        raise DomainError(f"pick {pick} out of range")
    if not 0 <= revealed < n:
        raise DomainError(f"revealed box {revealed} out of range")
    if pick == revealed:
        raise ProtocolViolationError("Alice cannot reveal Bob's own box")
    if tie_break not in ("uniform", "adversarial"):
        raise DomainError(f"unknown tie_break {tie_break!r}")

    prior = placement.location_prior()
    if prior[revealed] > 1.0 - ATOL_ALGEBRA:
        raise ProtocolViolationError("revealed box is occupied")
    other = next(b for b in range(n) if b not in (pick, revealed))
    others = [b for b in range(n) if b != pick]

    # Likelihood of this particular reveal given each surviving location.
    if tie_break == "uniform":
        like_pick = 1.0 / len(others)
    else:
        like_pick = 1.0 if revealed == min(others) else 0.0
    like_other = 1.0  # the reveal is forced when the particle is elsewhere

    w_pick = prior[pick] * like_pick
    w_other = prior[other] * like_other
    total = w_pick + w_other
    if total <= ATOL_ALGEBRA:
        raise ProtocolViolationError("reveal inconsistent with the placement")
    return DensityMatrix(np.diag([w_pick / total, w_other / total]).astype(complex))


def alice_post_measurement_state(rho_post_reveal: DensityMatrix,
                                 strat: AliceMeasurementStrategy) -> DensityMatrix:
    """The particle's state after Alice's location-conditioned measurement.

    The input must be diagonal in the (pick, other) basis: Alice knows where
    the particle is, so each diagonal weight feeds a branch measured in its
    own rotated basis, and the branches recombine as a classical mixture.
    """
    if rho_post_reveal.dim != 2:
        raise ShapeError("post-reveal state must be 2-dimensional")
    off = abs(complex(rho_post_reveal.matrix[0, 1]))
    if off > ATOL_ALGEBRA:
        raise ProtocolViolationError(
            f"post-reveal state must be diagonal (coherent placements go through "
            f"measure-then-reveal); off-diagonal magnitude {off!r}")
    w_pick = float(np.real(rho_post_reveal.matrix[0, 0]))
    w_other = float(np.real(rho_post_reveal.matrix[1, 1]))

    def dephased(ket_index: int, alpha: float) -> DensityMatrix:
        outcomes = measure_projective(density_from_pure(basis_ket(2, ket_index)),
                                      rotated_basis(alpha))
        return mix([(max(p, 0.0), density_from_pure(v)) for p, v in outcomes])

    return mix([(w_pick, dephased(0, strat.alpha0)),
                (w_other, dephased(1, strat.alpha1))])


def bob_win_probability(rho: DensityMatrix, strat: BobStrategy) -> float:
    """Bob's win probability against a post-measurement state."""
    if rho.dim != 2:
        raise ShapeError("Bob decides over the 2-dimensional (pick, other) space")
    m = rho.matrix
    p_stick = m[0, 0].real
    p_switch = m[1, 1].real
    if strat.kind == "stick":
        return float(p_stick)
    if strat.kind == "switch":
        return float(p_switch)
    if strat.kind == "mix":
        return float(strat.eta * p_stick + (1.0 - strat.eta) * p_switch)
    # <psi|rho|psi> for the real rotated vector, using hermiticity.
    c, s = math.cos(strat.beta), math.sin(strat.beta)
    return float(c * c * p_stick + s * s * p_switch + 2.0 * c * s * m[0, 1].real)


def expected_payoff(strat_a: AliceMeasurementStrategy, strat_b: BobStrategy) -> PayoffReport:
    """Exact expected payoff of a strategy pair in the three-box game.

    Mixture-family strategies use the closed form; the rotated-projector
    decision is computed through the full measurement pipeline
    (post-reveal posterior -> conditional measurement -> decision).
    """
    if strat_b.is_mixture_family:
        p = float(mixture_win_probability(strat_a.alpha0, strat_a.alpha1,
                                          strat_b.stick_weight))
    else:
        rho = post_reveal_state(Placement.uniform_superposition(3), pick=0, revealed=2)
        rho = alice_post_measurement_state(rho, strat_a)
        p = bob_win_probability(rho, strat_b)
    return PayoffReport.analytic(p)


# ---------------------------------------------------------------------------
# Interactive session.

PHASES = ("placed", "picked", "revealed", "decided", "resolved")


@dataclass
class GameSession:
    """One playthrough of the n-box game, advanced by :func:`session_step`.

    Single-writer: a session is mutated by at most one actor at a time.
    Random outcomes (reveal tie-breaks, measurement collapses, mixture coins)
    are drawn from the session's seeded generator, so a full transcript is
    reproducible from the seed.
    """

    placement: Placement
    seed: int | None = None
    tie_break: str = "uniform"
    rng: np.random.Generator | None = None

    phase: str = field(init=False, default="placed")
    pick: int | None = field(init=False, default=None)
    current_box: int | None = field(init=False, default=None)
    revealed: list[int] = field(init=False, default_factory=list)
    location: int | None = field(init=False, default=None)
    outcome: int | None = field(init=False, default=None)
    final_box: int | None = field(init=False, default=None)
    final_location: int | None = field(init=False, default=None)
    actions: list[dict] = field(init=False, default_factory=list)

    def __post_init__(self):
        if self.tie_break not in ("uniform", "adversarial"):
            raise DomainError(f"unknown tie_break {self.tie_break!r}")
        if self.rng is None:
            self.rng = np.random.default_rng(self.seed)
        self.unrevealed = set(range(self.n_boxes))
        self.measured = False
        self._post_state: np.ndarray | None = None  # amplitudes over final pair
        self._final_pair: tuple[int, int] | None = None
        self._final_index: int | None = None
        self._decision: BobStrategy | None = None
        if self.placement.mode == "classical":
            self.location = self.placement.box

    @property
    def n_boxes(self) -> int:
        return self.placement.n_boxes

    @property
    def is_final_round(self) -> bool:
        return len(self.unrevealed) == 2

    def _require_phase(self, *allowed: str):
        if self.phase not in allowed:
            raise ProtocolViolationError(
                f"action not allowed in phase {self.phase!r} (expected {allowed})")

    def _log(self, action: str, **detail):
        self.actions.append({"action": action, **detail})

    # -- Bob-side actions ---------------------------------------------------

    def do_pick(self, box: int) -> "GameSession":
        self._require_phase("placed")
        if not 0 <= box < self.n_boxes:
            raise DomainError(f"pick {box} out of range for {self.n_boxes} boxes")
        self.pick = box
        self.current_box = box
        self.phase = "picked"
        self._log("pick", box=box)
        return self

    def do_decide(self, strat: BobStrategy, target: int | None = None) -> "GameSession":
        self._require_phase("revealed")
        if self.is_final_round:
            return self._decide_final(strat)
        return self._decide_midgame(strat, target)

    def _decide_midgame(self, strat: BobStrategy, target: int | None) -> "GameSession":
        if strat.kind == "quantum":
            raise ProtocolViolationError("quantum decisions are only available at the last choice")
        stick = strat.kind == "stick" or (
            strat.kind == "mix" and self.rng.random() < strat.eta)
        if stick:
            self._log("decide", strategy=strat.describe(), stayed=True)
        else:
            options = sorted(self.unrevealed - {self.current_box})
            if target is None:
                target = int(options[self.rng.integers(len(options))])
            elif target not in options:
                raise DomainError(f"switch target {target} not among open boxes {options}")
            self.current_box = target
            self._log("decide", strategy=strat.describe(), stayed=False, target=target)
        self.phase = "picked"
        return self

    def _decide_final(self, strat: BobStrategy) -> "GameSession":
        pair = (self.current_box, next(iter(self.unrevealed - {self.current_box})))
        self._final_pair = pair
        self._decision = strat
        if strat.kind == "quantum":
            self._final_index = None
        else:
            stick = strat.kind == "stick" or (
                strat.kind == "mix" and self.rng.random() < strat.eta)
            self._final_index = 0 if stick else 1
        self.phase = "decided"
        self._log("decide", strategy=strat.describe(), final=True)
        return self

    # -- Alice-side actions -------------------------------------------------

    def do_reveal(self) -> "GameSession":
        self._require_phase("picked")
        if self.location is None:
            # Coherent placement: the reveal presumes a definite location, so
            # Alice first measures in the computational basis.
            prior = self.placement.location_prior()
            self.location = int(self.rng.choice(self.n_boxes, p=prior / prior.sum()))
            self._log("measure_computational", location_known=True)
        eligible = sorted(self.unrevealed - {self.current_box, self.location})
        if not eligible:
            raise ProtocolViolationError("no empty box available to reveal")
        if self.tie_break == "uniform":
            box = int(eligible[self.rng.integers(len(eligible))])
        else:
            box = int(eligible[0])
        if box == self.location:  # pragma: no cover - guarded by construction
            raise ProtocolViolationError("internal error: revealed box is occupied")
        self.unrevealed.discard(box)
        self.revealed.append(box)
        self.phase = "revealed"
        self._log("reveal", box=box)
        return self

    def do_measure(self, strat: AliceMeasurementStrategy) -> "GameSession":
        self._require_phase("revealed")
        if not self.is_final_round:
            raise ProtocolViolationError("Alice measures once two boxes remain")
        if self.measured:
            raise ProtocolViolationError("Alice already measured this round")
        pair = (self.current_box, next(iter(self.unrevealed - {self.current_box})))
        at_pick = self.location == pair[0]
        alpha = strat.alpha0 if at_pick else strat.alpha1
        c, s = math.cos(alpha), math.sin(alpha)
        aligned_prob = c * c if at_pick else s * s
        if self.rng.random() < aligned_prob:
            self._post_state = np.array([c, s])
        else:
            self._post_state = np.array([-s, c])
        self._final_pair = pair
        self.location = None  # superseded by the coherent post-state
        self.measured = True
        self._log("measure", alpha=alpha)
        return self

    def do_resolve(self) -> "GameSession":
        self._require_phase("decided")
        pair = self._final_pair
        if self._post_state is None:
            # No measurement: the particle has a definite location.
            loc_index = 0 if self.location == pair[0] else 1
            state = np.zeros(2)
            state[loc_index] = 1.0
        else:
            state = self._post_state

        strat = self._decision
        if strat.kind == "quantum":
            c, s = math.cos(strat.beta), math.sin(strat.beta)
            amp = c * state[0] + s * state[1]
            win = bool(self.rng.random() < amp * amp)
            # Opening the boxes afterwards collapses the projected state.
            post = np.array([c, s]) if win else np.array([-s, c])
            found = 0 if self.rng.random() < post[0] ** 2 else 1
        else:
            found = 0 if self.rng.random() < state[0] ** 2 else 1
            win = found == self._final_index
            self.final_box = pair[self._final_index]
        self.final_location = pair[found]
        self.outcome = 1 if win else -1
        self.phase = "resolved"
        self._log("resolve", outcome=self.outcome, location=self.final_location)
        return self


def session_step(session: GameSession, action: str, **kwargs) -> GameSession:
    """Advance a session by one named action.

    Actions: ``pick(box)``, ``reveal``, ``measure(strat)``,
    ``decide(strat, target=None)``, ``resolve``.  Raises
    ProtocolViolationError for out-of-phase actions.
    """
    handlers = {
        "pick": session.do_pick,
        "reveal": session.do_reveal,
        "measure": session.do_measure,
        "decide": session.do_decide,
        "resolve": session.do_resolve,
    }
    if action not in handlers:
        raise DomainError(f"unknown action {action!r}")
    return handlers[action](**kwargs)


def auto_play(session: GameSession, bob: BobStrategy,
              alice: AliceMeasurementStrategy | None = None,
              pick: int = 0, policy=None) -> GameSession:
    """Drive one session to resolution.

    Bob picks ``pick``, follows ``policy`` (an iterable of "stick"/"switch")
    at intermediate rounds when the game has more than three boxes, and plays
    ``bob`` at the last choice.  When ``alice`` is given she measures at the
    final round before Bob decides.
    """
    session.do_pick(pick)
    stage_plan = list(policy.decisions[:-1]) if policy is not None else []
    stage = 0
    while True:
        session.do_reveal()
        if session.is_final_round:
            break
        decision = stage_plan[stage] if stage < len(stage_plan) else "stick"
        session.do_decide(BobStrategy(decision))
        stage += 1
    if alice is not None:
        session.do_measure(alice)
    session.do_decide(bob)
    session.do_resolve()
    return session
