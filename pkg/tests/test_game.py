"""Game engine: strategies, reveal posterior, measurement pipeline, sessions."""

import math

import numpy as np
import pytest

from qmonty import game
from qmonty.errors import DomainError, ProtocolViolationError, ShapeError
from qmonty.game import (
    AliceMeasurementStrategy,
    BobStrategy,
    GameSession,
    PayoffReport,
    Placement,
    alice_post_measurement_state,
    auto_play,
    bob_win_probability,
    expected_payoff,
    mixture_win_probability,
    post_measurement_entries,
    post_reveal_state,
    quantum_win_probability,
    session_step,
)
from qmonty.quantum import DensityMatrix, superpose

PI = math.pi


def bayes_posterior(prior, pick, revealed, tie_break):
    """Independent oracle: enumerate placements and Alice's reveal choices."""
    n = len(prior)
    others = [b for b in range(n) if b != pick]
    weights = {}
    for loc in range(n):
        eligible = [b for b in others if b != loc]
        if revealed not in eligible:
            continue
        if tie_break == "uniform":
            like = 1.0 / len(eligible)
        else:
            like = 1.0 if revealed == min(eligible) else 0.0
        weights[loc] = prior[loc] * like
    total = sum(weights.values())
    other = next(b for b in others if b != revealed)
    return weights.get(pick, 0.0) / total, weights.get(other, 0.0) / total


def direct_post_measurement(alpha0, alpha1, w0=1 / 3, w1=2 / 3):
    """Independent oracle: build the four projectors explicitly."""
    c0, s0 = math.cos(alpha0), math.sin(alpha0)
    c1, s1 = math.cos(alpha1), math.sin(alpha1)
    phi0 = np.array([c0, s0]); phi0p = np.array([-s0, c0])
    phi1 = np.array([c1, s1]); phi1p = np.array([-s1, c1])
    return (w0 * (c0 ** 2 * np.outer(phi0, phi0) + s0 ** 2 * np.outer(phi0p, phi0p))
            + w1 * (s1 ** 2 * np.outer(phi1, phi1) + c1 ** 2 * np.outer(phi1p, phi1p)))


class TestStrategyTypes:
    def test_alice_angle_domain(self):
        AliceMeasurementStrategy(0.0, PI / 2)
        with pytest.raises(DomainError):
            AliceMeasurementStrategy(-0.1, 0.0)
        with pytest.raises(DomainError):
            AliceMeasurementStrategy(0.0, PI / 2 + 0.1)

    def test_mixture_weight_domain(self):
        BobStrategy.mix(0.0)
        BobStrategy.mix(1.0)
        with pytest.raises(DomainError):
            BobStrategy.mix(1.2)

    def test_beta_canonicalized_without_changing_payoff(self):
        a = BobStrategy.quantum(0.3)
        b = BobStrategy.quantum(0.3 + PI)
        assert a.beta == pytest.approx(b.beta)
        rho = DensityMatrix(np.array([[0.6, 0.2], [0.2, 0.4]], dtype=complex))
        assert bob_win_probability(rho, a) == pytest.approx(bob_win_probability(rho, b), abs=1e-12)

    def test_payoff_report_invariants(self):
        with pytest.raises(DomainError):
            PayoffReport(p_win=0.5, gain=0.1, method="analytic")
        with pytest.raises(DomainError):
            PayoffReport(p_win=1.5, gain=2.0, method="analytic")


class TestPostRevealState:
    def test_uniform_prior_fair_host(self):
        rho = post_reveal_state(Placement.uniform_superposition(), 0, 2)
        assert np.allclose(rho.matrix, np.diag([1 / 3, 2 / 3]), atol=1e-15)

    def test_known_location(self):
        rho = post_reveal_state(Placement.classical(1), 0, 2)
        assert np.allclose(rho.matrix, np.diag([0.0, 1.0]), atol=1e-15)

    def test_matches_bayes_oracle(self):
        rng = np.random.default_rng(31)
        for _ in range(20):
            amps = rng.normal(size=3) + 1j * rng.normal(size=3)
            placement = Placement.superposed(superpose(amps))
            prior = placement.location_prior()
            pick, revealed = rng.choice(3, size=2, replace=False)
            for tie_break in ("uniform", "adversarial"):
                try:
                    rho = post_reveal_state(placement, int(pick), int(revealed), tie_break)
                except ProtocolViolationError:
                    w = bayes_posterior(prior, int(pick), int(revealed), tie_break)
                    assert sum(w) == pytest.approx(0.0, abs=1e-9) or prior[revealed] > 1 - 1e-12
                    continue
                want = bayes_posterior(prior, int(pick), int(revealed), tie_break)
                assert np.allclose(np.diag(rho.matrix).real, want, atol=1e-12)

    def test_adversarial_reveal_identity_leaks_information(self):
        placement = Placement.uniform_superposition()
        low = post_reveal_state(placement, 0, 1, "adversarial")
        high = post_reveal_state(placement, 0, 2, "adversarial")
        assert np.allclose(np.diag(low.matrix).real, [0.5, 0.5], atol=1e-15)
        assert np.allclose(np.diag(high.matrix).real, [0.0, 1.0], atol=1e-15)

    def test_entangled_placement_reduces_to_uniform(self):
        coeffs = np.zeros(9)
        coeffs[[0, 4, 8]] = 1.0
        placement = Placement.entangled(superpose(coeffs), (3, 3))
        rho = post_reveal_state(placement, 0, 2)
        assert np.allclose(rho.matrix, np.diag([1 / 3, 2 / 3]), atol=1e-12)

    def test_protocol_violations(self):
        with pytest.raises(ProtocolViolationError):
            post_reveal_state(Placement.classical(2), 0, 2)
        with pytest.raises(ProtocolViolationError):
            post_reveal_state(Placement.uniform_superposition(), 1, 1)
        with pytest.raises(DomainError):
            post_reveal_state(Placement.uniform_superposition(), 3, 2)


class TestAlicePostMeasurement:
    def test_balanced_angles_flatten_the_state(self):
        rho = post_reveal_state(Placement.uniform_superposition(), 0, 2)
        out = alice_post_measurement_state(rho, AliceMeasurementStrategy(PI / 4, PI / 4))
        assert np.allclose(out.matrix, np.eye(2) / 2, atol=1e-12)

    def test_eigenbasis_measurement_changes_nothing(self):
        rho = post_reveal_state(Placement.uniform_superposition(), 0, 2)
        for alpha in (0.0, PI / 2):
            out = alice_post_measurement_state(rho, AliceMeasurementStrategy(alpha, alpha))
            assert np.allclose(out.matrix, np.diag([1 / 3, 2 / 3]), atol=1e-12)

    def test_matches_direct_projector_construction(self):
        rng = np.random.default_rng(37)
        rho = post_reveal_state(Placement.uniform_superposition(), 0, 2)
        for _ in range(25):
            a0, a1 = rng.uniform(0, PI / 2, size=2)
            out = alice_post_measurement_state(rho, AliceMeasurementStrategy(a0, a1))
            assert np.max(np.abs(out.matrix - direct_post_measurement(a0, a1))) <= 1e-12

    def test_closed_form_entries_match_direct_construction(self):
        rng = np.random.default_rng(41)
        for _ in range(25):
            a0, a1 = rng.uniform(0, PI / 2, size=2)
            w0 = rng.uniform(0.05, 0.95)
            p00, p11, p01 = post_measurement_entries(a0, a1, w0, 1 - w0)
            want = direct_post_measurement(a0, a1, w0, 1 - w0)
            assert np.allclose([p00, p11, p01], [want[0, 0], want[1, 1], want[0, 1]], atol=1e-13)

    def test_rejects_coherent_input(self):
        coherent = DensityMatrix(np.full((2, 2), 0.5, dtype=complex))
        with pytest.raises(ProtocolViolationError):
            alice_post_measurement_state(coherent, AliceMeasurementStrategy(0.1, 0.1))


class TestBobWinProbability:
    def test_balanced_state_ties_every_mixture(self):
        rho = DensityMatrix(np.eye(2, dtype=complex) / 2)
        for eta in (0.0, 0.3, 0.5, 1.0):
            assert bob_win_probability(rho, BobStrategy.mix(eta)) == pytest.approx(0.5, abs=1e-15)

    def test_switch_reads_the_other_diagonal(self):
        rho = DensityMatrix(np.diag([1 / 3, 2 / 3]).astype(complex))
        assert bob_win_probability(rho, BobStrategy.switch()) == pytest.approx(2 / 3, abs=1e-15)
        assert bob_win_probability(rho, BobStrategy.stick()) == pytest.approx(1 / 3, abs=1e-15)

    def test_quantum_projector_matches_a_coherent_state(self):
        rho = DensityMatrix(np.full((2, 2), 0.5, dtype=complex))
        assert bob_win_probability(rho, BobStrategy.quantum(PI / 4)) == pytest.approx(1.0, abs=1e-15)


class TestExpectedPayoff:
    @pytest.mark.parametrize("eta", [0.0, 0.25, 0.5, 1.0])
    def test_equilibrium_value(self, eta):
        report = expected_payoff(AliceMeasurementStrategy(PI / 4, PI / 4), BobStrategy.mix(eta))
        assert report.p_win == pytest.approx(0.5, abs=1e-12)
        assert report.gain == pytest.approx(0.0, abs=1e-12)
        assert report.method == "analytic" and report.stderr == 0.0

    def test_classical_baselines(self):
        a = AliceMeasurementStrategy(0.0, 0.0)
        assert expected_payoff(a, BobStrategy.mix(1.0)).p_win == pytest.approx(1 / 3, abs=1e-12)
        assert expected_payoff(a, BobStrategy.mix(0.0)).p_win == pytest.approx(2 / 3, abs=1e-12)

    def test_lopsided_profiles(self):
        a = AliceMeasurementStrategy(PI / 4, 0.0)
        assert expected_payoff(a, BobStrategy.mix(1.0)).p_win == pytest.approx(1 / 6, abs=1e-12)
        assert expected_payoff(a, BobStrategy.mix(0.0)).p_win == pytest.approx(5 / 6, abs=1e-12)

    def test_pipeline_matches_closed_form_on_grid(self):
        grid = np.linspace(0.0, PI / 2, 21)
        etas = np.linspace(0.0, 1.0, 21)
        rho_base = post_reveal_state(Placement.uniform_superposition(), 0, 2)
        for a0 in grid:
            for a1 in grid:
                rho = alice_post_measurement_state(rho_base, AliceMeasurementStrategy(a0, a1))
                for eta in etas:
                    via_pipeline = bob_win_probability(rho, BobStrategy.mix(eta))
                    via_formula = mixture_win_probability(a0, a1, eta)
                    assert abs(via_pipeline - via_formula) <= 1e-12

    def test_quantum_closed_form_matches_pipeline(self):
        rng = np.random.default_rng(43)
        rho_base = post_reveal_state(Placement.uniform_superposition(), 0, 2)
        for _ in range(25):
            a0, a1 = rng.uniform(0, PI / 2, size=2)
            beta = rng.uniform(0, PI)
            rho = alice_post_measurement_state(rho_base, AliceMeasurementStrategy(a0, a1))
            assert bob_win_probability(rho, BobStrategy.quantum(beta)) == pytest.approx(
                float(quantum_win_probability(a0, a1, beta)), abs=1e-12)

    def test_angle_reflection_symmetry(self):
        grid = np.linspace(0.0, PI / 2, 41)
        a0, a1 = np.meshgrid(grid, grid, indexing="ij")
        for eta in (0.0, 0.3, 0.7, 1.0):
            p = mixture_win_probability(a0, a1, eta)
            q = mixture_win_probability(PI / 2 - a0, PI / 2 - a1, eta)
            assert np.max(np.abs(p - q)) <= 1e-12

    def test_half_mixture_is_flat(self):
        grid = np.linspace(0.0, PI / 2, 41)
        a0, a1 = np.meshgrid(grid, grid, indexing="ij")
        assert np.max(np.abs(mixture_win_probability(a0, a1, 0.5) - 0.5)) <= 1e-12

    def test_stick_and_switch_are_complementary(self):
        grid = np.linspace(0.0, PI / 2, 41)
        a0, a1 = np.meshgrid(grid, grid, indexing="ij")
        total = mixture_win_probability(a0, a1, 1.0) + mixture_win_probability(a0, a1, 0.0)
        assert np.max(np.abs(total - 1.0)) <= 1e-12

    def test_balanced_alice_neutralizes_every_bob_variant(self):
        alice = AliceMeasurementStrategy(PI / 4, PI / 4)
        for eta in np.linspace(0, 1, 11):
            assert expected_payoff(alice, BobStrategy.mix(eta)).p_win == pytest.approx(0.5, abs=1e-12)
        for beta in np.linspace(0, PI, 11, endpoint=False):
            assert expected_payoff(alice, BobStrategy.quantum(beta)).p_win == pytest.approx(0.5, abs=1e-12)

    def test_no_unitary_on_the_playing_particle(self):
        # The strategy space bans evolving the particle after placement: the
        # engine's public surface must not offer such an operation.
        public = [name for name in dir(game) if not name.startswith("_")]
        assert not any("unitary" in name.lower() for name in public)


class TestGameSession:
    def test_pick_transitions(self):
        s = GameSession(Placement.uniform_superposition(), seed=1)
        session_step(s, "pick", box=1)
        assert s.phase == "picked" and s.pick == 1

    def test_reveal_avoids_pick_and_particle(self):
        for seed in range(20):
            s = GameSession(Placement.classical(0), seed=seed)
            s.do_pick(0)
            s.do_reveal()
            assert s.revealed[0] in (1, 2)

    def test_out_of_phase_actions_raise(self):
        s = GameSession(Placement.uniform_superposition(), seed=3)
        with pytest.raises(ProtocolViolationError):
            s.do_reveal()
        s.do_pick(0)
        with pytest.raises(ProtocolViolationError):
            s.do_decide(BobStrategy.stick())
        with pytest.raises(ProtocolViolationError):
            s.do_pick(1)

    def test_measure_requires_final_round(self):
        s = GameSession(Placement.uniform_superposition(5), seed=4)
        s.do_pick(0)
        s.do_reveal()
        with pytest.raises(ProtocolViolationError):
            s.do_measure(AliceMeasurementStrategy(PI / 4, PI / 4))

    def test_transcript_reproducible_from_seed(self):
        def play(seed):
            s = GameSession(Placement.uniform_superposition(), seed=seed)
            return auto_play(s, BobStrategy.mix(0.5),
                             AliceMeasurementStrategy(PI / 4, PI / 4)).actions

        assert play(99) == play(99)
        transcripts = {str(play(seed)) for seed in range(30)}
        assert len(transcripts) > 1

    def test_classical_switch_wins_two_thirds(self):
        rng = np.random.default_rng(7)
        wins = 0
        trials = 4000
        for _ in range(trials):
            s = GameSession(Placement.uniform_superposition(), rng=rng)
            auto_play(s, BobStrategy.switch())
            wins += s.outcome == 1
        p_hat = wins / trials
        stderr = math.sqrt(2 / 3 * 1 / 3 / trials)
        assert abs(p_hat - 2 / 3) <= 5 * stderr

    def test_equilibrium_session_play_is_fair(self):
        rng = np.random.default_rng(12)
        alice = AliceMeasurementStrategy(PI / 4, PI / 4)
        wins = 0
        trials = 4000
        for _ in range(trials):
            s = GameSession(Placement.uniform_superposition(), rng=rng)
            auto_play(s, BobStrategy.mix(0.5), alice)
            wins += s.outcome == 1
        stderr = math.sqrt(0.25 / trials)
        assert abs(wins / trials - 0.5) <= 5 * stderr

    def test_quantum_decision_statistics(self):
        # Alice at balanced angles leaves I/2, so any projector wins half.
        rng = np.random.default_rng(21)
        alice = AliceMeasurementStrategy(PI / 4, PI / 4)
        wins = 0
        trials = 4000
        for _ in range(trials):
            s = GameSession(Placement.uniform_superposition(), rng=rng)
            auto_play(s, BobStrategy.quantum(0.9), alice)
            wins += s.outcome == 1
        stderr = math.sqrt(0.25 / trials)
        assert abs(wins / trials - 0.5) <= 5 * stderr

    def test_five_box_session_runs_all_rounds(self):
        s = GameSession(Placement.uniform_superposition(5), seed=8)
        s.do_pick(2)
        rounds = 0
        while True:
            s.do_reveal()
            rounds += 1
            if s.is_final_round:
                break
            s.do_decide(BobStrategy.stick())
        s.do_decide(BobStrategy.switch())
        s.do_resolve()
        assert rounds == 3
        assert s.outcome in (1, -1)
        assert s.final_location not in s.revealed

    def test_resolved_session_reports_location(self):
        s = GameSession(Placement.uniform_superposition(), seed=13)
        auto_play(s, BobStrategy.switch())
        assert s.final_location in range(3)
        assert s.final_box != s.pick
        assert (s.outcome == 1) == (s.final_location == s.final_box)
