# -*- coding: utf-8 -*-
"""
Purity witnessing with the Robertson-Schrodinger relation
Q(A, B, rho) >= 0 holds for every state; Q vanishes on pure qubit states and
is strictly positive on most mixed ones, which makes it a mixedness witness
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence
import logging
import math

import numpy as np

from uqlab._core.errors import DimensionMismatchError, InvalidStateError
from uqlab._core.linalg_core import (
    SIGMA_X,
    SIGMA_Y,
    BlochVector,
    DensityMatrix,
    Observable,
    expectation,
    pure_state,
    qubit_from_bloch,
    spin_observable,
    tensor,
    unit_direction,
    variance,
)

logger = logging.getLogger('uqlab')

DEFAULT_EPSILON = 1e-3
RS_TOL = 1e-9


class WitnessVerdict(Enum):
    """Outcome of the mixedness test"""
    PURE_CONSISTENT = 'pure-consistent'
    MIXED = 'mixed'
    INCONCLUSIVE = 'inconclusive'


@dataclass
class RSWitnessResult:
    """Robertson-Schrodinger witness evaluation for one state and observable pair"""
    q_value: float
    linear_entropy: float
    verdict: WitnessVerdict
    epsilon: float
    linear_entropy_raw: float  # 1 - tr(rho^2), without the d/(d-1) prefactor
    dim: int
    details: Dict[str, float] = field(default_factory=dict)


def rs_quantity(a: Observable, b: Observable, rho: DensityMatrix) -> float:
    """
    Q(A,B,rho) = dA^2 dB^2 - |<[A,B]>/2|^2 - |<{A,B}>/2 - <A><B>|^2

    Args:
        a, b: observables of the state's dimension
        rho: state

    Returns:
        Q, nonnegative up to rounding for every valid input
    """
    if a.dim != rho.dim or b.dim != rho.dim:
        raise DimensionMismatchError(
            f'observable dimensions ({a.dim}, {b.dim}) do not match state dimension {rho.dim}'
        )
    am, bm, r = a.matrix, b.matrix, rho.matrix
    ab = am @ bm
    ba = bm @ am

    commutator = np.trace((ab - ba) @ r)
    anticommutator = np.trace((ab + ba) @ r)

    covariance = 0.5 * anticommutator.real - expectation(a, rho) * expectation(b, rho)
    return (variance(a, rho) * variance(b, rho)
            - abs(0.5 * commutator) ** 2
            - covariance ** 2)


def linear_entropy(rho: DensityMatrix, normalized: bool = True) -> float:
    """
    Linear entropy of a state

    Args:
        rho: state
        normalized: True for (d/(d-1))(1 - tr rho^2) in [0, 1];
                    False for the raw 1 - tr rho^2

    Returns:
        Linear entropy, zero iff rho is pure
    """
    raw = max(0.0, 1.0 - rho.purity)
    if not normalized:
        return raw
    d = rho.dim
    if d == 1:
        return 0.0
    return min(1.0, d / (d - 1) * raw)


def single_qubit_q_closed_form(r_hat: Sequence[float], t_hat: Sequence[float],
                               n: BlochVector) -> float:
    """(1 - (r.t)^2) S_l(rho(n)) for spin observables along r and t"""
    r = unit_direction(r_hat)
    t = unit_direction(t_hat)
    return (1.0 - float(np.dot(r, t)) ** 2) * linear_entropy(qubit_from_bloch(n))


def singlet_state() -> DensityMatrix:
    """(|01> - |10>)/sqrt(2)"""
    return pure_state([0, 1, -1, 0])


def werner_state(p: float) -> DensityMatrix:
    """rho_w = ((1 - p)/4) I + p rho_singlet"""
    if not 0.0 <= p <= 1.0:
        raise InvalidStateError(f'Werner parameter must lie in [0, 1], got {p!r}')
    return DensityMatrix((1.0 - p) / 4.0 * np.eye(4, dtype=complex) + p * singlet_state().matrix)


def _planar_spin(angle: float) -> np.ndarray:
    return math.cos(angle) * SIGMA_X + math.sin(angle) * SIGMA_Y


def planar_product_observable(angle_1: float, angle_2: float) -> Observable:
    """(m.sigma) x (n.sigma) with m, n in the x-y plane at the given azimuths"""
    return Observable(tensor(_planar_spin(angle_1), _planar_spin(angle_2)))


def mixedness_verdict(q: float, epsilon: float) -> WitnessVerdict:
    """
    Classify a measured Q against the instrument threshold epsilon

    Q >= epsilon means mixed; 0 <= Q < epsilon is consistent with a pure state.
    A Q below -RS_TOL violates the RS relation itself, so no verdict is given.
    """
    if epsilon < 0:
        raise ValueError(f'epsilon must be nonnegative, got {epsilon!r}')
    if q < -RS_TOL:
        return WitnessVerdict.INCONCLUSIVE
    if q >= epsilon:
        return WitnessVerdict.MIXED
    return WitnessVerdict.PURE_CONSISTENT


def blind_band(epsilon: float) -> Dict[str, float]:
    """
    Lower edge of the Bloch-radius band misread as pure for orthogonal qubit settings

    Three edges are reported side by side: the one realized by Q = S_l = 1 - n^2,
    the one for the raw normalization Q = (1 - n^2)/2, and the stated
    sqrt(1 - 2 epsilon / 3).
    """
    if epsilon < 0:
        raise ValueError(f'epsilon must be nonnegative, got {epsilon!r}')
    return {
        'normalized': math.sqrt(max(0.0, 1.0 - epsilon)),
        'raw': math.sqrt(max(0.0, 1.0 - 2.0 * epsilon)),
        'stated': math.sqrt(max(0.0, 1.0 - 2.0 * epsilon / 3.0)),
    }


def gell_mann_matrices() -> List[np.ndarray]:
    """The eight Gell-Mann matrices, lambda_1 ... lambda_8"""
    m = [np.zeros((3, 3), dtype=complex) for _ in range(8)]
    m[0][0, 1] = m[0][1, 0] = 1
    m[1][0, 1], m[1][1, 0] = -1j, 1j
    m[2][0, 0], m[2][1, 1] = 1, -1
    m[3][0, 2] = m[3][2, 0] = 1
    m[4][0, 2], m[4][2, 0] = -1j, 1j
    m[5][1, 2] = m[5][2, 1] = 1
    m[6][1, 2], m[6][2, 1] = -1j, 1j
    m[7][0, 0] = m[7][1, 1] = 1 / math.sqrt(3)
    m[7][2, 2] = -2 / math.sqrt(3)
    return m


def planar_settings_grid(rho: DensityMatrix, n_angles: int = 8, tol: float = RS_TOL) -> float:
    """
    Fraction of an n x n grid of planar product settings with Q > tol

    A uses azimuth alpha on both qubits and B uses beta on both, with
    alpha, beta over k pi / n_angles.
    """
    if rho.dim != 4:
        raise DimensionMismatchError(f'planar settings need a two-qubit state, got dimension {rho.dim}')
    angles = [k * math.pi / n_angles for k in range(n_angles)]
    positive = 0
    for alpha in angles:
        a = planar_product_observable(alpha, alpha)
        for beta in angles:
            if rs_quantity(a, planar_product_observable(beta, beta), rho) > tol:
                positive += 1
    return positive / (n_angles * n_angles)


class PurityAnalyzer:
    """
    Mixedness witness built on the RS quantity
    Holds the instrument threshold epsilon shared by all evaluations
    """

    def __init__(self, epsilon: float = DEFAULT_EPSILON):
        if epsilon < 0:
            raise ValueError(f'epsilon must be nonnegative, got {epsilon!r}')
        self.epsilon = epsilon

    def analyze(self, a: Observable, b: Observable, rho: DensityMatrix) -> RSWitnessResult:
        """
        Evaluate Q and the linear entropy and classify the state

        Args:
            a, b: measured observables
            rho: state under test

        Returns:
            RSWitnessResult
        """
        q = rs_quantity(a, b, rho)
        result = RSWitnessResult(
            q_value=q,
            linear_entropy=linear_entropy(rho),
            verdict=mixedness_verdict(q, self.epsilon),
            epsilon=self.epsilon,
            linear_entropy_raw=linear_entropy(rho, normalized=False),
            dim=rho.dim,
            details={
                'var_a': variance(a, rho),
                'var_b': variance(b, rho),
                'mean_a': expectation(a, rho),
                'mean_b': expectation(b, rho),
            },
        )
        logger.debug('RS witness: Q=%.6g S_l=%.6g verdict=%s', q, result.linear_entropy,
                     result.verdict.value)
        return result

    def analyze_qubit(self, r_hat: Sequence[float], t_hat: Sequence[float],
                      n: BlochVector) -> RSWitnessResult:
        """Single-qubit witness with spin observables along r_hat and t_hat"""
        return self.analyze(spin_observable(r_hat), spin_observable(t_hat), qubit_from_bloch(n))

    def sweep_werner(self, n_points: int, a: Optional[Observable] = None,
                     b: Optional[Observable] = None) -> List[Dict[str, float]]:
        """
        Q and S_l along the Werner family p in [0, 1]

        Defaults to the planar settings A = sx (x) sx, B = sy (x) sy.
        """
        if n_points < 2:
            raise ValueError(f'Werner sweep needs at least 2 points, got {n_points}')
        a = a if a is not None else planar_product_observable(0.0, 0.0)
        b = b if b is not None else planar_product_observable(math.pi / 2, math.pi / 2)
        rows = []
        for p in np.linspace(0.0, 1.0, n_points):
            rho = werner_state(float(p))
            q = rs_quantity(a, b, rho)
            rows.append({
                'p': float(p),
                'q': q,
                'linear_entropy': linear_entropy(rho),
                'verdict': mixedness_verdict(q, self.epsilon).value,
            })
        return rows

    def blind_band(self) -> Dict[str, float]:
        return blind_band(self.epsilon)
