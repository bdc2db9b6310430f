import math

import numpy as np
import pytest

from uqlab._core.errors import DimensionMismatchError, InvalidStateError
from uqlab._core.linalg_core import (
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    BlochVector,
    Observable,
    maximally_mixed,
    pure_state,
    qubit_from_bloch,
    random_density_matrix,
    random_hermitian,
    random_unit_vector,
    spin_observable,
    tensor,
)
from uqlab._core.purity import (
    PurityAnalyzer,
    WitnessVerdict,
    blind_band,
    gell_mann_matrices,
    linear_entropy,
    mixedness_verdict,
    planar_product_observable,
    planar_settings_grid,
    rs_quantity,
    single_qubit_q_closed_form,
    singlet_state,
    werner_state,
)

SZ, SX = Observable(SIGMA_Z), Observable(SIGMA_X)


def _random_bloch(rng) -> BlochVector:
    return BlochVector.from_sequence(random_unit_vector(rng) * rng.uniform(0.0, 1.0) ** (1 / 3))


class TestRSQuantity:
    def test_pure_qubit(self):
        assert rs_quantity(SZ, SX, pure_state([1, 0])) == pytest.approx(0.0, abs=1e-12)

    def test_maximally_mixed_qubit(self):
        assert rs_quantity(SZ, SX, maximally_mixed(2)) == pytest.approx(1.0, abs=1e-12)

    def test_commuting_two_qubit_settings(self):
        a = Observable(tensor(SIGMA_X, SIGMA_X))
        b = Observable(tensor(SIGMA_Y, SIGMA_Y))
        assert rs_quantity(a, b, pure_state([1, 0, 0, 0])) == pytest.approx(0.0, abs=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            rs_quantity(SZ, SX, singlet_state())

    @pytest.mark.parametrize("dim", [2, 3, 4])
    def test_nonnegative(self, rng, dim):
        for _ in range(300):
            rho = random_density_matrix(dim, rng)
            q = rs_quantity(random_hermitian(dim, rng), random_hermitian(dim, rng), rho)
            assert q >= -1e-9


class TestLinearEntropy:
    def test_pure(self):
        assert linear_entropy(pure_state([1, 1j])) == pytest.approx(0.0, abs=1e-12)

    def test_maximally_mixed(self):
        assert linear_entropy(maximally_mixed(2)) == pytest.approx(1.0, abs=1e-12)
        assert linear_entropy(maximally_mixed(2), normalized=False) == pytest.approx(0.5, abs=1e-12)

    @pytest.mark.parametrize("p", np.linspace(0, 1, 11))
    def test_werner(self, p):
        expected = 4 / 3 * (1 - (1 + 3 * p ** 2) / 4)
        assert linear_entropy(werner_state(p)) == pytest.approx(expected, abs=1e-12)


class TestSingleQubitClosedForm:
    @pytest.mark.parametrize("r_hat, t_hat, n, expected", [
        ((0, 0, 1), (1, 0, 0), (0, 0, 0), 1.0),
        ((0, 0, 1), (0, 0, 1), (0.3, 0.2, 0.5), 0.0),
        ((0, 0, 1), (1 / math.sqrt(2), 0, 1 / math.sqrt(2)), (0, 0, 0), 0.5),
    ])
    def test_examples(self, r_hat, t_hat, n, expected):
        bloch = BlochVector(*n)
        closed = single_qubit_q_closed_form(r_hat, t_hat, bloch)
        assert closed == pytest.approx(expected, abs=1e-12)
        direct = rs_quantity(spin_observable(r_hat), spin_observable(t_hat), qubit_from_bloch(bloch))
        assert direct == pytest.approx(closed, abs=1e-10)

    def test_matches_general_quantity(self, rng):
        for _ in range(1000):
            r_hat, t_hat = random_unit_vector(rng), random_unit_vector(rng)
            n = _random_bloch(rng)
            direct = rs_quantity(spin_observable(r_hat), spin_observable(t_hat), qubit_from_bloch(n))
            assert abs(direct - single_qubit_q_closed_form(r_hat, t_hat, n)) < 1e-10

    def test_orthogonal_settings_give_linear_entropy(self, rng):
        for _ in range(1000):
            n = _random_bloch(rng)
            rho = qubit_from_bloch(n)
            assert abs(rs_quantity(SZ, SX, rho) - linear_entropy(rho)) < 1e-10
            assert abs(linear_entropy(rho) - (1 - n.norm ** 2)) < 1e-10


class TestWernerState:
    def test_endpoints(self):
        assert np.allclose(werner_state(0.0).matrix, np.eye(4) / 4)
        assert np.allclose(werner_state(1.0).matrix, singlet_state().matrix)

    def test_spectrum(self):
        assert np.allclose(werner_state(1 / 3).eigenvalues, [1 / 6, 1 / 6, 1 / 6, 1 / 2], atol=1e-12)

    @pytest.mark.parametrize("p", [-0.1, 1.2])
    def test_out_of_range(self, p):
        with pytest.raises(InvalidStateError):
            werner_state(p)


class TestPlanarSettings:
    def test_examples(self):
        assert np.allclose(planar_product_observable(0, 0).matrix, tensor(SIGMA_X, SIGMA_X))
        assert np.allclose(planar_product_observable(math.pi / 2, math.pi / 2).matrix,
                           tensor(SIGMA_Y, SIGMA_Y), atol=1e-12)

    def test_square_is_identity(self, rng):
        for a1, a2 in rng.uniform(0, 2 * math.pi, size=(20, 2)):
            m = planar_product_observable(a1, a2).matrix
            assert np.allclose(m @ m, np.eye(4), atol=1e-10)

    @pytest.mark.parametrize("ket", [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    def test_z_polarized_products_vanish(self, rng, ket):
        rho = pure_state(ket)
        for angles in rng.uniform(0, 2 * math.pi, size=(25, 4)):
            a = planar_product_observable(angles[0], angles[1])
            b = planar_product_observable(angles[2], angles[3])
            assert abs(rs_quantity(a, b, rho)) < 1e-9

    @pytest.mark.parametrize("p", np.round(np.arange(0.1, 1.0, 0.1), 1))
    def test_werner_detected(self, p):
        a = planar_product_observable(0, 0)
        b = planar_product_observable(math.pi / 2, math.pi / 2)
        q = rs_quantity(a, b, werner_state(p))
        assert q > 0
        assert q == pytest.approx((1 - p) ** 2 * (1 + 2 * p), abs=1e-12)

    def test_most_settings_on_werner_grid(self):
        # zero only on the diagonal alpha = beta
        assert planar_settings_grid(werner_state(0.5)) == pytest.approx(56 / 64)


class TestVerdict:
    @pytest.mark.parametrize("q, epsilon, verdict", [
        (0.5, 0.01, WitnessVerdict.MIXED),
        (0.0, 0.01, WitnessVerdict.PURE_CONSISTENT),
        (0.01, 0.01, WitnessVerdict.MIXED),
        (-0.1, 0.01, WitnessVerdict.INCONCLUSIVE),
    ])
    def test_examples(self, q, epsilon, verdict):
        assert mixedness_verdict(q, epsilon) is verdict

    def test_blind_band_edges(self):
        band = blind_band(0.015)
        assert band['stated'] == pytest.approx(math.sqrt(0.99), abs=1e-12)
        assert band['normalized'] == pytest.approx(math.sqrt(0.985), abs=1e-12)
        assert band['raw'] == pytest.approx(math.sqrt(0.97), abs=1e-12)

    def test_states_in_stated_band_are_misclassified(self):
        analyzer = PurityAnalyzer(epsilon=0.015)
        for radius in np.linspace(math.sqrt(0.99), 0.999999, 7):
            result = analyzer.analyze_qubit((0, 0, 1), (1, 0, 0), BlochVector(0.0, 0.0, radius))
            assert result.verdict is WitnessVerdict.PURE_CONSISTENT

    def test_radius_sweep(self):
        epsilon = 0.015
        band = blind_band(epsilon)
        radii = np.linspace(0.0, 1.0, 10 ** 4)
        missed = np.array([
            mixedness_verdict(single_qubit_q_closed_form((0, 0, 1), (1, 0, 0), BlochVector(0.0, 0.0, n)),
                              epsilon) is WitnessVerdict.PURE_CONSISTENT
            for n in radii
        ])
        assert np.array_equal(missed, radii > band['normalized'])
        assert missed[radii >= band['stated']].all()

    def test_realized_edge(self):
        analyzer = PurityAnalyzer(epsilon=0.015)
        inside = analyzer.analyze_qubit((0, 0, 1), (1, 0, 0), BlochVector(0.0, 0.0, math.sqrt(0.985) + 1e-6))
        outside = analyzer.analyze_qubit((0, 0, 1), (1, 0, 0), BlochVector(0.0, 0.0, math.sqrt(0.985) - 1e-6))
        assert inside.verdict is WitnessVerdict.PURE_CONSISTENT
        assert outside.verdict is WitnessVerdict.MIXED


class TestGellMann:
    def test_algebra(self):
        matrices = gell_mann_matrices()
        assert len(matrices) == 8
        for j, a in enumerate(matrices):
            assert np.allclose(a, a.conj().T)
            assert abs(np.trace(a)) < 1e-12
            for k, b in enumerate(matrices):
                assert abs(np.trace(a @ b) - (2.0 if j == k else 0.0)) < 1e-12

    def test_qutrit_witness(self):
        m = gell_mann_matrices()
        q = rs_quantity(Observable(m[0]), Observable(m[1]), maximally_mixed(3))
        assert q > 0


class TestSweep:
    def test_werner_sweep(self):
        rows = PurityAnalyzer().sweep_werner(5)
        assert [r['p'] for r in rows] == pytest.approx([0, 0.25, 0.5, 0.75, 1.0])
        assert rows[0]['q'] == pytest.approx(1.0, abs=1e-12)
        assert rows[-1]['q'] == pytest.approx(0.0, abs=1e-12)
        assert rows[-1]['verdict'] == 'pure-consistent'
