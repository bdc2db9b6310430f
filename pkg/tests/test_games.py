import math
from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from uqlab._core.errors import DimensionMismatchError, InvalidObservableError
from uqlab._core.games import (
    TSIRELSON_VALUE,
    DeterministicStrategy,
    GameRule,
    GameSpec,
    QuantumStrategy,
    biased_chsh_quantum_bound,
    box_discrimination_report,
    classical_value,
    deterministic_strategies,
    fine_grained_qubit_bound,
    fine_grained_qubit_maximizer,
    fine_grained_qubit_scan,
    game_operator,
    game_value_classical_max,
    game_value_definitional,
    game_value_nosignaling_max,
    game_value_quantum,
    game_value_quantum_max,
    ghz_state,
    normalize_bias,
    nosignaling_box,
    phi_plus_state,
    planar_strategy,
    simulate_referee,
    svetlichny_operator,
)
from uqlab._core.linalg_core import (
    SIGMA_X,
    SIGMA_Z,
    Observable,
    expectation,
    maximally_mixed,
    pure_state,
    random_density_matrix,
    random_unit_vector,
    spin_observable,
)
from uqlab._core.purity import singlet_state

SZ, SX = Observable(SIGMA_Z), Observable(SIGMA_X)
B_PLUS = Observable((SIGMA_Z + SIGMA_X) / math.sqrt(2))
B_MINUS = Observable((SIGMA_Z - SIGMA_X) / math.sqrt(2))
GHZ_ANGLES = [0.0, math.pi / 2, 0.0, math.pi / 2, -math.pi / 4, math.pi / 4]


def _random_strategy(rng, parties):
    dim = 2 ** parties
    settings = tuple((spin_observable(random_unit_vector(rng)), spin_observable(random_unit_vector(rng)))
                     for _ in range(parties))
    return QuantumStrategy(random_density_matrix(dim, rng), settings)


class TestFineGrainedQubit:
    def test_bound(self):
        assert fine_grained_qubit_bound() == pytest.approx(0.5 + 1 / (2 * math.sqrt(2)), abs=1e-12)

    def test_maximizer_is_eigenstate(self):
        n = fine_grained_qubit_maximizer()
        assert np.allclose(n.as_array(), [1 / math.sqrt(2), 0, 1 / math.sqrt(2)])
        obs = Observable((SIGMA_X + SIGMA_Z) / math.sqrt(2))
        ket = obs.eigenvectors[:, 1]
        assert expectation(obs, pure_state(ket)) == pytest.approx(1.0, abs=1e-12)

    def test_scan_agrees(self):
        value, _ = fine_grained_qubit_scan()
        assert value == pytest.approx(fine_grained_qubit_bound(), abs=1e-4)
        assert value <= fine_grained_qubit_bound() + 1e-12

    @pytest.mark.parametrize("weight", [0.0, 0.3, 1.0])
    def test_weighted(self, weight):
        value, _ = fine_grained_qubit_scan(weight, points_per_axis=200)
        assert value == pytest.approx(fine_grained_qubit_bound(weight), abs=1e-3)


class TestQuantumValue:
    def test_singlet_with_tsirelson_settings(self):
        # outcome a <-> eigenvalue (-1)^a: the singlet loses, its complement wins
        strat = QuantumStrategy(singlet_state(), ((SZ, SX), (B_PLUS, B_MINUS)))
        assert game_value_quantum(GameSpec(GameRule.CHSH), strat) == pytest.approx(1 - TSIRELSON_VALUE, abs=1e-9)

    def test_phi_plus_with_tsirelson_settings(self):
        strat = QuantumStrategy(phi_plus_state(), ((SZ, SX), (B_PLUS, B_MINUS)))
        assert game_value_quantum(GameSpec(GameRule.CHSH), strat) == pytest.approx(TSIRELSON_VALUE, abs=1e-9)

    def test_singlet_with_negated_bob(self):
        strat = QuantumStrategy(singlet_state(), ((SZ, SX), (-1 * B_PLUS, -1 * B_MINUS)))
        assert game_value_quantum(GameSpec(GameRule.CHSH), strat) == pytest.approx(TSIRELSON_VALUE, abs=1e-9)

    def test_maximally_mixed(self, rng):
        strat = _random_strategy(rng, 2)
        strat = QuantumStrategy(maximally_mixed(4), strat.settings)
        assert game_value_quantum(GameSpec(GameRule.CHSH), strat) == pytest.approx(0.5, abs=1e-12)

    def test_ghz_box1(self):
        strat = planar_strategy(GHZ_ANGLES)
        assert game_value_quantum(GameSpec(GameRule.BOX1), strat) == pytest.approx(TSIRELSON_VALUE, abs=1e-6)

    def test_arity_mismatch(self):
        strat = QuantumStrategy(phi_plus_state(), ((SZ, SX), (B_PLUS, B_MINUS)))
        with pytest.raises(DimensionMismatchError):
            game_value_quantum(GameSpec(GameRule.BOX1), strat)

    def test_rejects_non_involution(self):
        with pytest.raises(InvalidObservableError):
            QuantumStrategy(phi_plus_state(), ((SZ, 0.5 * SX), (B_PLUS, B_MINUS)))

    @pytest.mark.parametrize("rule, bias", [
        (GameRule.CHSH, (0.5, 0.5)),
        (GameRule.CHSH, (0.7, 0.2)),
        (GameRule.BOX1, ()),
        (GameRule.BOX2, (0.6, 0.3, 0.9)),
        (GameRule.BOX3, ()),
    ])
    def test_dual_path(self, rng, rule, bias):
        spec = GameSpec(rule, bias)
        for _ in range(200):
            strat = _random_strategy(rng, spec.parties)
            closed = 0.5 * (1 + expectation(game_operator(spec, strat), strat.shared_state))
            assert abs(closed - game_value_definitional(spec, strat)) < 1e-10

    def test_unbiased_specialization(self, rng):
        strat = _random_strategy(rng, 2)
        op = game_operator(GameSpec(GameRule.CHSH, (0.5, 0.5)), strat)
        a0, a1 = strat.settings[0]
        b0, b1 = strat.settings[1]
        chsh = (np.kron(a0.matrix, b0.matrix) + np.kron(a0.matrix, b1.matrix)
                + np.kron(a1.matrix, b0.matrix) - np.kron(a1.matrix, b1.matrix))
        assert np.allclose(op.matrix, chsh / 4)


class TestClassical:
    def test_unbiased_chsh(self):
        report = game_value_classical_max(GameSpec(GameRule.CHSH))
        assert report.value == 0.75
        assert report.metadata['exact'] == '3/4'
        assert report.metadata['strategies_enumerated'] == 16
        # first table in lexicographic order that wins 3/4: everybody outputs 0
        assert report.argmax_strategy == {'party_0': [0, 0], 'party_1': [0, 0]}

    def test_biased_chsh(self):
        report = game_value_classical_max(GameSpec(GameRule.CHSH, (0.7, 0.7)))
        assert report.metadata['exact'] == str(Fraction(91, 100))

    def test_box1(self):
        report = game_value_classical_max(GameSpec(GameRule.BOX1))
        assert report.value == 0.75
        assert report.metadata['strategies_enumerated'] == 64

    def test_enumeration_counts(self):
        assert len(deterministic_strategies(2)) == 16
        assert len(deterministic_strategies(3)) == 64

    def test_deterministic_svetlichny_bounded(self):
        for strategy in deterministic_strategies(3):
            s1 = sum((-1) ** GameRule.BOX1.target(inputs)
                     * np.prod([(-1) ** o for o in strategy.outputs(inputs)])
                     for inputs in product((0, 1), repeat=3))
            assert abs(s1) <= 4

    @pytest.mark.parametrize("rule, bias", [(GameRule.CHSH, (0.5, 0.5)), (GameRule.CHSH, (0.8, 0.35)),
                                            (GameRule.BOX2, (0.5, 0.5, 0.5))])
    def test_referee_consistency(self, rng, rule, bias):
        spec = GameSpec(rule, bias)
        strategies = deterministic_strategies(spec.parties)
        z_scores = []
        for strategy in strategies:
            freq, stderr = simulate_referee(spec, strategy, 10 ** 6, rng)
            z_scores.append(abs(freq - float(classical_value(spec, strategy))) / stderr)
        z_scores = np.array(z_scores)
        # about 0.3% of honest tables land beyond 3 standard errors
        assert np.count_nonzero(z_scores > 3.0) <= 1 + len(strategies) // 32
        assert z_scores.max() <= 4.5


class TestNoSignaling:
    @pytest.mark.parametrize("rule, bias", [
        (GameRule.CHSH, ()),
        (GameRule.CHSH, (0.9, 0.2)),
        (GameRule.BOX1, ()),
        (GameRule.BOX2, ()),
        (GameRule.BOX3, (0.3, 0.6, 0.1)),
    ])
    def test_value_one(self, rule, bias):
        assert game_value_nosignaling_max(GameSpec(rule, bias)).value == pytest.approx(1.0, abs=1e-12)

    def test_pr_box_marginals(self):
        box = nosignaling_box(GameSpec(GameRule.CHSH))
        assert box.is_no_signaling()
        assert box.probability((0, 0), (1, 1)) == 0.0
        assert box.probability((0, 1), (1, 1)) == 0.5


class TestQuantumMax:
    def test_unbiased_chsh(self):
        report = game_value_quantum_max(GameSpec(GameRule.CHSH))
        assert report.value == pytest.approx(TSIRELSON_VALUE, abs=1e-6)
        assert report.value <= report.metadata['analytic_bound'] + 1e-6

    def test_biased_region_one(self):
        report = game_value_quantum_max(GameSpec(GameRule.CHSH, (0.6, 0.9)))
        assert report.value == pytest.approx(0.96, abs=1e-6)
        assert report.metadata['region'] == 1

    def test_biased_region_two(self):
        expected = 0.5 * (1 + math.sqrt(2) * math.sqrt(0.6 ** 2 + 0.4 ** 2) * math.sqrt(0.55 ** 2 + 0.45 ** 2))
        report = game_value_quantum_max(GameSpec(GameRule.CHSH, (0.55, 0.6)))
        assert report.value == pytest.approx(expected, abs=1e-6)
        assert report.metadata['region'] == 2

    def test_box1(self):
        report = game_value_quantum_max(GameSpec(GameRule.BOX1))
        assert report.value == pytest.approx(TSIRELSON_VALUE, abs=1e-6)

    def test_ordering(self):
        for spec in (GameSpec(GameRule.CHSH), GameSpec(GameRule.CHSH, (0.3, 0.8)), GameSpec(GameRule.BOX1)):
            c = game_value_classical_max(spec).value
            q = game_value_quantum_max(spec).value
            ns = game_value_nosignaling_max(spec).value
            assert c <= q + 1e-9 and q <= ns + 1e-9

    def test_reproducible(self):
        a = game_value_quantum_max(GameSpec(GameRule.CHSH), seed=7)
        b = game_value_quantum_max(GameSpec(GameRule.CHSH), seed=7)
        assert a.value == b.value
        assert a.argmax_strategy == b.argmax_strategy


class TestBiasedBound:
    def test_unbiased(self):
        assert biased_chsh_quantum_bound(0.5, 0.5)['value'] == pytest.approx(TSIRELSON_VALUE, abs=1e-12)

    @pytest.mark.parametrize("p, q", [(0.2, 0.7), (0.6, 0.1), (0.3, 0.3)])
    def test_relabeling_invariance(self, p, q):
        direct = biased_chsh_quantum_bound(p, q)['value']
        flipped = biased_chsh_quantum_bound(max(p, 1 - p), max(q, 1 - q))['value']
        assert direct == pytest.approx(flipped, abs=1e-15)

    def test_normalize_bias(self):
        assert normalize_bias(0.2, 0.7) == (0.8, 0.7, [0])

    def test_stated_region_label(self):
        assert biased_chsh_quantum_bound(0.6, 0.9)['stated_region'] == 1
        assert biased_chsh_quantum_bound(0.55, 0.6)['stated_region'] == 2


class TestSvetlichny:
    def test_cancels_on_product_state(self):
        op = svetlichny_operator([(SZ, SZ)] * 3)
        assert expectation(op, pure_state([1, 0, 0, 0, 0, 0, 0, 0])) == pytest.approx(0.0, abs=1e-12)

    def test_ghz_maximum(self):
        strat = planar_strategy(GHZ_ANGLES)
        op = svetlichny_operator(strat.settings)
        assert expectation(op, ghz_state()) == pytest.approx(4 * math.sqrt(2), abs=1e-6)

    def test_matches_box1_operator(self, rng):
        strat = _random_strategy(rng, 3)
        assert np.allclose(svetlichny_operator(strat.settings).matrix,
                           8 * game_operator(GameSpec(GameRule.BOX1), strat).matrix)

    def test_arity(self):
        with pytest.raises(DimensionMismatchError):
            svetlichny_operator([(SZ, SX)] * 2)


class TestBoxDiscrimination:
    @pytest.fixture(scope='class')
    def rows(self):
        return {row.rule: row for row in box_discrimination_report()}

    def test_box1_gap(self, rows):
        row = rows[GameRule.BOX1]
        assert row.classical == 0.75
        assert row.quantum == pytest.approx(TSIRELSON_VALUE, abs=1e-6)
        assert row.nosignaling == 1.0
        assert row.gap

    def test_box2_no_gap(self, rows):
        row = rows[GameRule.BOX2]
        assert row.quantum == pytest.approx(row.classical, abs=1e-6)
        assert not row.gap

    def test_box3_no_gap(self, rows):
        assert not rows[GameRule.BOX3].gap
