# -*- coding: utf-8 -*-
"""
Nonlocal retrieval games and fine-grained uncertainty
Winning probabilities of CHSH (unbiased and biased) and the tripartite
full-correlation boxes under classical, quantum and no-signaling theories
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import reduce
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple
import logging
import math

import numpy as np
from scipy.optimize import minimize

from uqlab._core.errors import DimensionMismatchError, InvalidObservableError, UQLabError
from uqlab._core.linalg_core import (
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    BlochVector,
    DensityMatrix,
    Observable,
    expectation,
    pure_state,
    tensor_all,
)

logger = logging.getLogger('uqlab')

DUAL_PATH_TOL = 1e-10
ORDER_TOL = 1e-9
GAP_TOL = 1e-6
COARSE_STEP_DEG = 5.0
MAX_SWEEPS = 50
DEFAULT_STARTS = 8

TSIRELSON_VALUE = 0.5 + 1.0 / (2.0 * math.sqrt(2.0))


class GameRule(Enum):
    """Winning predicates: XOR of all outputs must equal f(inputs)"""
    CHSH = 'chsh'    # a+b = st
    BOX1 = 'box1'    # a+b+c = st + tu + us
    BOX2 = 'box2'    # a+b+c = st + su
    BOX3 = 'box3'    # a+b+c = stu

    @property
    def arity(self) -> int:
        return 2 if self is GameRule.CHSH else 3

    def target(self, inputs: Sequence[int]) -> int:
        """Required parity of the outputs for the given inputs"""
        if len(inputs) != self.arity:
            raise DimensionMismatchError(f'{self.value} takes {self.arity} inputs, got {len(inputs)}')
        if self is GameRule.CHSH:
            s, t = inputs
            return s & t
        s, t, u = inputs
        if self is GameRule.BOX1:
            return (s & t) ^ (t & u) ^ (u & s)
        if self is GameRule.BOX2:
            return (s & t) ^ (s & u)
        return s & t & u


class Theory(Enum):
    CLASSICAL = 'classical'
    QUANTUM = 'quantum'
    NO_SIGNALING = 'no-signaling'


@dataclass(frozen=True)
class GameSpec:
    """
    Retrieval game: rule plus, per party, the probability that its input is 0
    """
    rule: GameRule
    bias: Tuple[float, ...] = ()

    def __post_init__(self):
        bias = tuple(float(b) for b in self.bias) or (0.5,) * self.rule.arity
        if len(bias) != self.rule.arity:
            raise DimensionMismatchError(
                f'{self.rule.value} needs {self.rule.arity} bias values, got {len(bias)}'
            )
        if any(not 0.0 <= b <= 1.0 for b in bias):
            raise ValueError(f'bias probabilities must lie in [0, 1], got {bias}')
        object.__setattr__(self, 'bias', bias)

    @property
    def parties(self) -> int:
        return self.rule.arity

    def input_weight(self, inputs: Sequence[int]) -> float:
        return float(np.prod([b if x == 0 else 1.0 - b for b, x in zip(self.bias, inputs)]))

    def exact_input_weight(self, inputs: Sequence[int]) -> Fraction:
        """Input weight in rational arithmetic (bias read through its decimal repr)"""
        weight = Fraction(1)
        for b, x in zip(self.bias, inputs):
            fb = Fraction(repr(b))
            weight *= fb if x == 0 else 1 - fb
        return weight

    def inputs(self) -> List[Tuple[int, ...]]:
        return list(product((0, 1), repeat=self.parties))


@dataclass(frozen=True, eq=False)
class QuantumStrategy:
    """Shared state plus two +/-1-valued observables per party (one per input)"""
    shared_state: DensityMatrix
    settings: Tuple[Tuple[Observable, Observable], ...]

    def __post_init__(self):
        settings = tuple(tuple(pair) for pair in self.settings)
        for k, pair in enumerate(settings):
            if len(pair) != 2:
                raise DimensionMismatchError(f'party {k} needs two observables, got {len(pair)}')
            for obs in pair:
                if obs.dim != 2:
                    raise DimensionMismatchError(f'party {k} observable has dimension {obs.dim}, expected 2')
                if not obs.is_involution():
                    raise InvalidObservableError(f'party {k} observable is not +/-1-valued')
        if self.shared_state.dim != 2 ** len(settings):
            raise DimensionMismatchError(
                f'state dimension {self.shared_state.dim} does not fit {len(settings)} qubits'
            )
        object.__setattr__(self, 'settings', settings)

    @property
    def parties(self) -> int:
        return len(self.settings)


@dataclass(frozen=True)
class DeterministicStrategy:
    """Output table: table[k] = (output on input 0, output on input 1) for party k"""
    table: Tuple[Tuple[int, int], ...]

    def outputs(self, inputs: Sequence[int]) -> Tuple[int, ...]:
        return tuple(self.table[k][x] for k, x in enumerate(inputs))

    def describe(self) -> Dict[str, List[int]]:
        return {f'party_{k}': list(row) for k, row in enumerate(self.table)}


@dataclass(frozen=True, eq=False)
class NoSignalingBox:
    """Conditional distribution probs[outputs..., inputs...]"""
    parties: int
    probs: np.ndarray

    def probability(self, outputs: Sequence[int], inputs: Sequence[int]) -> float:
        return float(self.probs[tuple(outputs) + tuple(inputs)])

    def is_no_signaling(self, tol: float = 1e-12) -> bool:
        """Every party's marginal is independent of the other parties' inputs"""
        n = self.parties
        for k in range(n):
            others = [j for j in range(n) if j != k]
            marg = self.probs.sum(axis=tuple(others))  # axes: (a_k, inputs...)
            for x_k in (0, 1):
                sl = np.take(marg, x_k, axis=1 + k)
                if not np.allclose(sl, sl.reshape(2, -1)[:, :1].reshape((2,) + (1,) * (n - 1)),
                                   atol=tol):
                    return False
        return True


@dataclass
class GameValueReport:
    """Game value under one theory"""
    value: float
    theory: Theory
    spec: GameSpec
    argmax_strategy: Optional[Dict] = None
    metadata: Dict = field(default_factory=dict)


@dataclass
class BoxDiscriminationRow:
    rule: GameRule
    classical: float
    quantum: float
    nosignaling: float
    gap: bool


# ------------------------------------------------------------------
# Single-qubit fine-grained bound
# ------------------------------------------------------------------

def fine_grained_qubit_bound(weight: float = 0.5) -> float:
    """
    max over states of w p(up|sz) + (1 - w) p(up|sx)

    Closed form 1/2 + sqrt(w^2 + (1 - w)^2)/2; w = 1/2 gives 1/2 + 1/(2 sqrt 2).
    """
    if not 0.0 <= weight <= 1.0:
        raise ValueError(f'weight must lie in [0, 1], got {weight!r}')
    return 0.5 + 0.5 * math.hypot(weight, 1.0 - weight)


def fine_grained_qubit_maximizer(weight: float = 0.5) -> BlochVector:
    """Bloch vector attaining the bound: along (1 - w) x + w z"""
    norm = math.hypot(weight, 1.0 - weight)
    return BlochVector((1.0 - weight) / norm, 0.0, weight / norm)


def fine_grained_qubit_scan(weight: float = 0.5, points_per_axis: int = 100) -> Tuple[float, BlochVector]:
    """Brute-force maximum over a theta x phi grid of pure states"""
    theta = np.linspace(0.0, math.pi, points_per_axis)
    phi = np.linspace(0.0, 2.0 * math.pi, points_per_axis, endpoint=False)
    tt, pp = np.meshgrid(theta, phi, indexing='ij')
    nx = np.sin(tt) * np.cos(pp)
    nz = np.cos(tt)
    values = weight * 0.5 * (1.0 + nz) + (1.0 - weight) * 0.5 * (1.0 + nx)
    i, j = np.unravel_index(int(np.argmax(values)), values.shape)
    return float(values[i, j]), BlochVector.from_angles(1.0, float(theta[i]), float(phi[j]))


# ------------------------------------------------------------------
# Quantum evaluation
# ------------------------------------------------------------------

def _check_arity(spec: GameSpec, parties: int):
    if parties != spec.parties:
        raise DimensionMismatchError(
            f'{spec.rule.value} is a {spec.parties}-party game, strategy has {parties} parties'
        )


def correlator(strat: QuantumStrategy, inputs: Sequence[int]) -> float:
    """<A_s (x) B_t [(x) C_u]> on the shared state"""
    ops = [strat.settings[k][x].matrix for k, x in enumerate(inputs)]
    return expectation(tensor_all(*ops), strat.shared_state)


def game_operator(spec: GameSpec, strat: QuantumStrategy) -> Observable:
    """
    Bias-weighted Bell operator sum_inputs w (-1)^f(inputs) A (x) B [(x) C]

    The game value is (1 + <operator>)/2. For unbiased CHSH this is B_CHSH/4,
    for unbiased box1 it is S_1/8.
    """
    _check_arity(spec, strat.parties)
    dim = strat.shared_state.dim
    total = np.zeros((dim, dim), dtype=complex)
    for inputs in spec.inputs():
        sign = -1.0 if spec.rule.target(inputs) else 1.0
        ops = [strat.settings[k][x].matrix for k, x in enumerate(inputs)]
        total += spec.input_weight(inputs) * sign * tensor_all(*ops)
    return Observable(total)


def game_value_definitional(spec: GameSpec, strat: QuantumStrategy) -> float:
    """
    Sum over inputs and outputs of weighted projector expectations on winning outcomes

    Outcome a of observable A corresponds to the projector (I + (-1)^a A)/2.
    """
    _check_arity(spec, strat.parties)
    identity = np.eye(2, dtype=complex)
    projectors = [
        [[0.5 * (identity + (-1) ** a * pair[x].matrix) for a in (0, 1)] for x in (0, 1)]
        for pair in strat.settings
    ]
    value = 0.0
    for inputs in spec.inputs():
        weight = spec.input_weight(inputs)
        target = spec.rule.target(inputs)
        for outputs in product((0, 1), repeat=spec.parties):
            if reduce(lambda acc, o: acc ^ o, outputs, 0) != target:
                continue
            ops = [projectors[k][x][a] for k, (x, a) in enumerate(zip(inputs, outputs))]
            value += weight * expectation(tensor_all(*ops), strat.shared_state)
    return value


def game_value_quantum(spec: GameSpec, strat: QuantumStrategy) -> float:
    """
    Winning probability of a quantum strategy

    Computed from the closed-form Bell operator and from the definitional sum;
    the two must agree to DUAL_PATH_TOL.
    """
    closed = 0.5 * (1.0 + expectation(game_operator(spec, strat), strat.shared_state))
    direct = game_value_definitional(spec, strat)
    if abs(closed - direct) > DUAL_PATH_TOL:
        raise UQLabError(
            f'closed-form value {closed!r} disagrees with definitional value {direct!r}'
        )
    return closed


# ------------------------------------------------------------------
# Classical and no-signaling maxima
# ------------------------------------------------------------------

def deterministic_strategies(parties: int) -> List[DeterministicStrategy]:
    """All output tables in lexicographic order"""
    rows = list(product((0, 1), repeat=2))
    return [DeterministicStrategy(tuple(choice)) for choice in product(rows, repeat=parties)]


def classical_value(spec: GameSpec, strategy: DeterministicStrategy) -> Fraction:
    """Exact winning probability of a deterministic strategy"""
    value = Fraction(0)
    for inputs in spec.inputs():
        outputs = strategy.outputs(inputs)
        if reduce(lambda acc, o: acc ^ o, outputs, 0) == spec.rule.target(inputs):
            value += spec.exact_input_weight(inputs)
    return value


def game_value_classical_max(spec: GameSpec) -> GameValueReport:
    """
    Exhaustive maximum over deterministic strategies

    16 tables for two parties, 64 for three; ties keep the first table found.
    """
    best_value, best_strategy = Fraction(-1), None
    strategies = deterministic_strategies(spec.parties)
    for strategy in strategies:
        value = classical_value(spec, strategy)
        if value > best_value:
            best_value, best_strategy = value, strategy
    return GameValueReport(
        value=float(best_value),
        theory=Theory.CLASSICAL,
        spec=spec,
        argmax_strategy=best_strategy.describe(),
        metadata={'exact': str(best_value), 'strategies_enumerated': len(strategies)},
    )


def nosignaling_box(spec: GameSpec) -> NoSignalingBox:
    """PR-type box: uniform over the output strings that satisfy the rule"""
    n = spec.parties
    probs = np.zeros((2,) * (2 * n))
    for inputs in spec.inputs():
        target = spec.rule.target(inputs)
        for outputs in product((0, 1), repeat=n):
            if reduce(lambda acc, o: acc ^ o, outputs, 0) == target:
                probs[tuple(outputs) + tuple(inputs)] = 1.0 / 2 ** (n - 1)
    return NoSignalingBox(n, probs)


def box_value(spec: GameSpec, box: NoSignalingBox) -> float:
    value = 0.0
    for inputs in spec.inputs():
        target = spec.rule.target(inputs)
        for outputs in product((0, 1), repeat=spec.parties):
            if reduce(lambda acc, o: acc ^ o, outputs, 0) == target:
                value += spec.input_weight(inputs) * box.probability(outputs, inputs)
    return value


def game_value_nosignaling_max(spec: GameSpec) -> GameValueReport:
    """Algebraic maximum, attained by a box that wins pointwise"""
    box = nosignaling_box(spec)
    if not box.is_no_signaling():
        raise UQLabError(f'constructed box for {spec.rule.value} signals')
    return GameValueReport(
        value=box_value(spec, box),
        theory=Theory.NO_SIGNALING,
        spec=spec,
        argmax_strategy={'box': 'uniform over winning outputs'},
        metadata={'no_signaling_checked': True},
    )


def simulate_referee(spec: GameSpec, strategy: DeterministicStrategy, rounds: int,
                     rng: np.random.Generator) -> Tuple[float, float]:
    """
    Monte-Carlo referee: draw inputs from the bias, score the table

    Returns:
        (win frequency, standard error)
    """
    if rounds <= 0:
        raise ValueError(f'rounds must be positive, got {rounds}')
    inputs = np.stack([(rng.random(rounds) >= b).astype(np.int64) for b in spec.bias], axis=1)
    table = np.asarray(strategy.table, dtype=np.int64)
    outputs = table[np.arange(spec.parties)[None, :], inputs]
    parity = np.bitwise_xor.reduce(outputs, axis=1)
    s, t = inputs[:, 0], inputs[:, 1]
    if spec.rule is GameRule.CHSH:
        target = s & t
    else:
        u = inputs[:, 2]
        if spec.rule is GameRule.BOX1:
            target = (s & t) ^ (t & u) ^ (u & s)
        elif spec.rule is GameRule.BOX2:
            target = (s & t) ^ (s & u)
        else:
            target = s & t & u
    wins = (parity == target).astype(float)
    freq = float(wins.mean())
    return freq, math.sqrt(max(freq * (1.0 - freq), 1e-300) / rounds)


# ------------------------------------------------------------------
# Quantum maximum
# ------------------------------------------------------------------

def phi_plus_state() -> DensityMatrix:
    """(|00> + |11>)/sqrt(2)"""
    return pure_state([1, 0, 0, 1])


def ghz_state() -> DensityMatrix:
    """(|000> + |111>)/sqrt(2)"""
    ket = np.zeros(8)
    ket[0] = ket[7] = 1.0
    return pure_state(ket)


def _planar_basis(parties: int) -> Tuple[np.ndarray, np.ndarray]:
    """Bipartite settings span (sz, sx); tripartite settings span (sx, sy)"""
    return (SIGMA_Z, SIGMA_X) if parties == 2 else (SIGMA_X, SIGMA_Y)


def planar_observable(angle: float, parties: int) -> Observable:
    first, second = _planar_basis(parties)
    return Observable(math.cos(angle) * first + math.sin(angle) * second)


def planar_strategy(angles: Sequence[float], state: Optional[DensityMatrix] = None) -> QuantumStrategy:
    """Strategy with planar observables; angles ordered (party0 in0, party0 in1, party1 in0, ...)"""
    parties = len(angles) // 2
    state = state if state is not None else (phi_plus_state() if parties == 2 else ghz_state())
    settings = tuple(
        (planar_observable(angles[2 * k], parties), planar_observable(angles[2 * k + 1], parties))
        for k in range(parties)
    )
    return QuantumStrategy(state, settings)


class _PlanarObjective:
    """
    Fast game value for planar settings on a fixed state

    Each observable is cos(a) P + sin(a) Q, so a full correlator expands into
    2^n precomputed expectations of P/Q tensor products.
    """

    def __init__(self, spec: GameSpec, state: DensityMatrix):
        self.spec = spec
        n = spec.parties
        basis = _planar_basis(n)
        self.table = np.empty((2,) * n)
        for choice in product((0, 1), repeat=n):
            self.table[choice] = expectation(tensor_all(*[basis[c] for c in choice]), state)
        self.terms = [
            (inputs, spec.input_weight(inputs) * (-1.0 if spec.rule.target(inputs) else 1.0))
            for inputs in spec.inputs()
        ]

    def __call__(self, angles: np.ndarray) -> float:
        angles = np.asarray(angles, dtype=float)
        n = self.spec.parties
        total = 0.0
        for inputs, coeff in self.terms:
            trig = [np.array([math.cos(angles[2 * k + x]), math.sin(angles[2 * k + x])])
                    for k, x in enumerate(inputs)]
            if n == 2:
                corr = trig[0] @ self.table @ trig[1]
            else:
                corr = np.einsum('abc,a,b,c->', self.table, *trig)
            total += coeff * corr
        return 0.5 * (1.0 + total)


def _coordinate_scan(objective: _PlanarObjective, start: np.ndarray) -> Tuple[np.ndarray, float, int]:
    grid = np.deg2rad(np.arange(0.0, 360.0, COARSE_STEP_DEG))
    x = start.copy()
    best = objective(x)
    sweeps = 0
    for sweeps in range(1, MAX_SWEEPS + 1):
        improved = False
        for i in range(x.size):
            trial = x.copy()
            values = []
            for angle in grid:
                trial[i] = angle
                values.append(objective(trial))
            k = int(np.argmax(values))
            if values[k] > best + 1e-13:
                best, x[i], improved = values[k], grid[k], True
        if not improved:
            break
    return x, best, sweeps


def biased_chsh_quantum_bound(p: float, q: float) -> Dict[str, float]:
    """
    Analytic quantum maximum of the biased CHSH game on a maximally entangled state

    With A = p^2 + (1-p)^2 the value is 1/2 [1 + F], F the maximum over c in [-1, 1]
    of q sqrt(A + B c) + (1 - q) sqrt(A - B c), B = 2p(1-p). The interior optimum
    gives sqrt(2) sqrt(q^2 + (1-q)^2) sqrt(p^2 + (1-p)^2); at the boundary it is
    the classical 1 - (1-p)(1-q). Inputs are first relabeled to p, q >= 1/2.
    """
    p_n, q_n, flips = normalize_bias(p, q)
    a = p_n ** 2 + (1.0 - p_n) ** 2
    q_sq = q_n ** 2 + (1.0 - q_n) ** 2
    interior = 2.0 * a * q_n ** 2 <= q_sq + 1e-15
    if interior:
        f = math.sqrt(2.0) * math.sqrt(q_sq) * math.sqrt(a)
        value = 0.5 * (1.0 + f)
    else:
        value = 1.0 - (1.0 - p_n) * (1.0 - q_n)
    return {
        'value': value,
        'region': 2 if interior else 1,
        'stated_region': 1 if p_n * q_n * 2.0 >= 1.0 else 2,
        'p': p_n,
        'q': q_n,
        'flipped_parties': flips,
    }


def normalize_bias(p: float, q: float) -> Tuple[float, float, List[int]]:
    """
    Relabel inputs so that both biases are at least 1/2

    Swapping a party's inputs turns the predicate into st + t (or st + s), which the
    other party absorbs by flipping its output on input 1; the game value is unchanged.
    """
    flips = []
    if p < 0.5:
        p, flips = 1.0 - p, flips + [0]
    if q < 0.5:
        q, flips = 1.0 - q, flips + [1]
    return p, q, flips


def _analytic_quantum_bound(spec: GameSpec) -> Optional[float]:
    if spec.rule is GameRule.CHSH:
        return biased_chsh_quantum_bound(*spec.bias)['value']
    if all(abs(b - 0.5) < 1e-15 for b in spec.bias):
        return {GameRule.BOX1: TSIRELSON_VALUE, GameRule.BOX2: 0.75, GameRule.BOX3: 0.875}[spec.rule]
    return None


def game_value_quantum_max(spec: GameSpec, n_starts: int = DEFAULT_STARTS,
                           seed: int = 0) -> GameValueReport:
    """
    Maximize the game value over planar settings on a fixed entangled state

    |Phi+> with (sz, sx)-plane settings for two parties, GHZ with (sx, sy)-plane
    settings for three. Coarse multi-start coordinate scan on a 5 degree grid,
    then BFGS polish.
    """
    parties = spec.parties
    state = phi_plus_state() if parties == 2 else ghz_state()
    objective = _PlanarObjective(spec, state)
    rng = np.random.default_rng(seed)

    starts = [np.zeros(2 * parties)] + [rng.uniform(0.0, 2.0 * math.pi, 2 * parties)
                                        for _ in range(max(n_starts - 1, 0))]
    best_x, best_value, total_sweeps = None, -1.0, 0
    for start in starts:
        x, value, sweeps = _coordinate_scan(objective, start)
        total_sweeps += sweeps
        polished = minimize(lambda v: -objective(v), x, method='BFGS', options={'gtol': 1e-12})
        if -polished.fun > value:
            x, value = polished.x, -polished.fun
        if value > best_value:
            best_x, best_value = x, value

    best_x = np.mod(best_x, 2.0 * math.pi)
    strategy = planar_strategy(best_x, state)
    verified = game_value_quantum(spec, strategy)
    if abs(verified - best_value) > 1e-9:
        raise UQLabError(f'optimizer value {best_value!r} does not match strategy value {verified!r}')

    bound = _analytic_quantum_bound(spec)
    metadata = {
        'starts': len(starts),
        'coarse_step_deg': COARSE_STEP_DEG,
        'coordinate_sweeps': total_sweeps,
        'state': 'phi_plus' if parties == 2 else 'ghz',
        'plane': 'z-x' if parties == 2 else 'x-y',
    }
    if bound is not None:
        metadata['analytic_bound'] = bound
        metadata['gap_to_bound'] = bound - verified
        if verified > bound + GAP_TOL:
            logger.warning('Quantum value %.10f exceeds analytic bound %.10f', verified, bound)
    if spec.rule is GameRule.CHSH:
        metadata.update({k: v for k, v in biased_chsh_quantum_bound(*spec.bias).items()
                         if k in ('region', 'stated_region', 'flipped_parties')})
    logger.debug('Quantum max for %s bias=%s: %.10f', spec.rule.value, spec.bias, verified)
    return GameValueReport(
        value=verified,
        theory=Theory.QUANTUM,
        spec=spec,
        argmax_strategy={'angles_rad': [float(a) for a in best_x]},
        metadata=metadata,
    )


# ------------------------------------------------------------------
# Tripartite analysis
# ------------------------------------------------------------------

def svetlichny_operator(settings: Sequence[Tuple[Observable, Observable]]) -> Observable:
    """
    S_1 = sum over inputs of (-1)^(st + tu + us) A_s (x) B_t (x) C_u

    Signs + + + + - - - - over (000, 001, 010, 100, 011, 101, 110, 111).
    """
    if len(settings) != 3:
        raise DimensionMismatchError(f'Svetlichny operator needs 3 parties, got {len(settings)}')
    total = np.zeros((8, 8), dtype=complex)
    for inputs in product((0, 1), repeat=3):
        sign = -1.0 if GameRule.BOX1.target(inputs) else 1.0
        total += sign * tensor_all(*[settings[k][x].matrix for k, x in enumerate(inputs)])
    return Observable(total)


def box_discrimination_report(n_starts: int = DEFAULT_STARTS, seed: int = 0) -> List[BoxDiscriminationRow]:
    """Classical, quantum and no-signaling maxima for each unbiased tripartite box"""
    rows = []
    for rule in (GameRule.BOX1, GameRule.BOX2, GameRule.BOX3):
        spec = GameSpec(rule)
        classical = game_value_classical_max(spec).value
        quantum = game_value_quantum_max(spec, n_starts=n_starts, seed=seed).value
        nosignaling = game_value_nosignaling_max(spec).value
        rows.append(BoxDiscriminationRow(rule, classical, quantum, nosignaling,
                                         gap=quantum - classical > GAP_TOL))
    return rows
