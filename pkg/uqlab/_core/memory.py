# -*- coding: utf-8 -*-
"""
Entropic uncertainty with quantum memory
Maassen-Uffink, Berta, Coles-Piani, Pati and fine-grained bounds on
S(R|B) + S(S|B), plus the key-rate expressions built from them
"""

from dataclasses import dataclass, field
from typing import Dict, NamedTuple, Optional, Sequence, Tuple
import logging
import math

import numpy as np
from scipy.optimize import minimize

from uqlab._core.errors import (
    DegenerateSpectrumError,
    DimensionMismatchError,
    InvalidStateError,
    UnsupportedDimensionError,
)
from uqlab._core.linalg_core import (
    PAULIS,
    SIGMA_Z,
    BlochVector,
    DensityMatrix,
    Observable,
    binary_entropy,
    mutual_information,
    partial_trace,
    pure_state,
    tensor,
    von_neumann_entropy,
)
from uqlab._core.purity import singlet_state, werner_state

logger = logging.getLogger('uqlab')

DEGENERACY_TOL = 1e-9
BOUND_TOL = 1e-9
DEFAULT_SCAN_STEP_DEG = 2.0
EXCLUSION_CONE_DEG = 0.5
REFINED_CONE_DEG = 0.05
REFINE_TOL = 1e-10

__all__ = [
    'MeasurementPair', 'MemoryBoundReport', 'MemoryAnalyzer', 'KeyRates',
    'complementarity_c', 'post_measurement_state', 'conditional_entropy',
    'berta_bound', 'coles_piani_bound', 'discord_and_classical_info', 'pati_bound',
    'shannon_lhs_fano', 'fine_grained_inf', 'key_rates', 'bell_diagonal_state',
    'maximally_entangled_state', 'singlet_state', 'werner_state', 'werner_discord_closed_form',
]


@dataclass(frozen=True, eq=False)
class MeasurementPair:
    """Two observables R, S on party A"""
    r: Observable
    s: Observable

    def __post_init__(self):
        if self.r.dim != self.s.dim:
            raise DimensionMismatchError(
                f'R has dimension {self.r.dim} but S has dimension {self.s.dim}'
            )

    @property
    def dim(self) -> int:
        return self.r.dim

    def overlaps(self) -> np.ndarray:
        """c_ij = |<r_i|s_j>|^2"""
        return np.abs(self.r.eigenvectors.conj().T @ self.s.eigenvectors) ** 2


@dataclass
class ClassicalCorrelation:
    """Measurement-maximized classical correlation C_A^M with its optimal direction"""
    classical_info: float
    mutual_information: float
    direction: BlochVector
    grid_points: int

    @property
    def discord(self) -> float:
        return self.mutual_information - self.classical_info


@dataclass
class FineGrainedScan:
    """Infimum of the anticorrelation probability over spin directions S != R"""
    p_inf: float
    bound: float
    p_d_r: float
    direction: BlochVector
    scan_spread: float      # max - min of p_d over the scan grid
    on_cone_edge: bool
    grid_points: int


class KeyRates(NamedTuple):
    berta: float
    fine_grained: float               # log2(1/c) - H(p_d^R) + H(p_inf), as printed
    fine_grained_both_minus: float    # log2(1/c) - H(p_d^R) - H(p_inf)


@dataclass
class MemoryBoundReport:
    """All bounds on S(R|B) + S(S|B) for one state and measurement pair, in bits"""
    lhs: float
    bounds: Dict[str, float]
    shannon_lhs: float
    key_rate_berta: float
    key_rate_fine_grained: float
    key_rate_fine_grained_both_minus: float
    discord: float
    classical_info: float
    fine_grained_exceeds_berta: bool
    metadata: Dict = field(default_factory=dict)


# ------------------------------------------------------------------
# States
# ------------------------------------------------------------------

def maximally_entangled_state() -> DensityMatrix:
    """|Phi+> = (|00> + |11>)/sqrt(2)"""
    return pure_state([1, 0, 0, 1])


def bell_diagonal_state(c1: float, c2: float, c3: float) -> DensityMatrix:
    """(I (x) I + sum_k c_k sigma_k (x) sigma_k)/4, rejected when not positive"""
    matrix = np.eye(4, dtype=complex)
    for c, sigma in zip((c1, c2, c3), PAULIS):
        matrix = matrix + c * tensor(sigma, sigma)
    try:
        return DensityMatrix(matrix / 4.0)
    except InvalidStateError as e:
        raise InvalidStateError(f'Bell-diagonal coefficients ({c1}, {c2}, {c3}) give no state: {e}')


def werner_discord_closed_form(p: float) -> Tuple[float, float]:
    """
    Discord and classical correlation of the Werner state, in bits

    C = ((1-p)/2) log2(1-p) + ((1+p)/2) log2(1+p); D = I - C.
    """
    def xlog2(x: float) -> float:
        return x * math.log2(x) if x > 0 else 0.0

    evals = [(1.0 + 3.0 * p) / 4.0] + [(1.0 - p) / 4.0] * 3
    s_ab = -sum(xlog2(v) for v in evals)
    classical = 0.5 * (xlog2(1.0 - p) + xlog2(1.0 + p))
    return (2.0 - s_ab) - classical, classical


# ------------------------------------------------------------------
# Entropic quantities
# ------------------------------------------------------------------

def _split_dims(rho_ab: DensityMatrix, d_a: int) -> Tuple[int, int]:
    if d_a <= 0 or rho_ab.dim % d_a:
        raise DimensionMismatchError(f'party A dimension {d_a} does not divide state dimension {rho_ab.dim}')
    return d_a, rho_ab.dim // d_a


def complementarity_c(pair: MeasurementPair) -> float:
    """c = max_ij |<r_i|s_j>|^2, in [1/d, 1]; degenerate spectra are rejected"""
    for name, obs in (('R', pair.r), ('S', pair.s)):
        gaps = np.diff(obs.eigenvalues)
        if gaps.size and float(gaps.min()) < DEGENERACY_TOL:
            raise DegenerateSpectrumError(f'{name} has a degenerate spectrum {obs.eigenvalues}')
    return float(pair.overlaps().max())


def post_measurement_state(rho_ab: DensityMatrix, obs: Observable) -> DensityMatrix:
    """
    Measure obs on party A in its eigenbasis: sum_j (P_j (x) I) rho (P_j (x) I)

    Args:
        rho_ab: joint state, A the leftmost factor
        obs: observable of party A

    Returns:
        classical-quantum state
    """
    _, d_b = _split_dims(rho_ab, obs.dim)
    identity = np.eye(d_b, dtype=complex)
    out = np.zeros_like(rho_ab.matrix)
    for proj in obs.projectors():
        big = tensor(proj, identity)
        out = out + big @ rho_ab.matrix @ big
    return DensityMatrix(out)


def conditional_entropy(rho_ab: DensityMatrix, dims: Sequence[int]) -> float:
    """S(A|B) = S(AB) - S(B), negative only for entangled states"""
    return von_neumann_entropy(rho_ab) - von_neumann_entropy(partial_trace(rho_ab, dims, 1))


def measured_conditional_entropies(rho_ab: DensityMatrix, pair: MeasurementPair) -> Tuple[float, float]:
    """(S(R|B), S(S|B))"""
    dims = _split_dims(rho_ab, pair.dim)
    return (conditional_entropy(post_measurement_state(rho_ab, pair.r), dims),
            conditional_entropy(post_measurement_state(rho_ab, pair.s), dims))


def maassen_uffink_bound(pair: MeasurementPair) -> float:
    """log2(1/c): the memoryless bound"""
    return -math.log2(complementarity_c(pair))


def berta_bound(rho_ab: DensityMatrix, pair: MeasurementPair) -> float:
    """log2(1/c) + S(A|B)"""
    dims = _split_dims(rho_ab, pair.dim)
    return maassen_uffink_bound(pair) + conditional_entropy(rho_ab, dims)


def coles_piani_bound(rho_ab: DensityMatrix, pair: MeasurementPair) -> float:
    """
    c'(rho_A) + S(A|B)

    c' is the larger of sum_i p^r_i log2(1/max_j c_ij) and the same sum with
    the roles of R and S exchanged.
    """
    complementarity_c(pair)
    dims = _split_dims(rho_ab, pair.dim)
    rho_a = partial_trace(rho_ab, dims, 0).matrix
    overlaps = pair.overlaps()

    def weighted(vectors: np.ndarray, row_max: np.ndarray) -> float:
        probs = np.real(np.einsum('ki,kl,li->i', vectors.conj(), rho_a, vectors))
        return float(np.sum(probs * -np.log2(row_max)))

    c_prime = max(weighted(pair.r.eigenvectors, overlaps.max(axis=1)),
                  weighted(pair.s.eigenvectors, overlaps.max(axis=0)))
    return c_prime + conditional_entropy(rho_ab, dims)


# ------------------------------------------------------------------
# Discord
# ------------------------------------------------------------------

def _bloch_directions(theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    return np.stack([np.sin(theta) * np.cos(phi),
                     np.sin(theta) * np.sin(phi),
                     np.cos(theta)], axis=-1)


def _xlog2x(values: np.ndarray) -> np.ndarray:
    values = np.clip(values, 0.0, None)
    safe = np.where(values > 0, values, 1.0)
    return np.where(values > 0, values * np.log2(safe), 0.0)


class _ConditionalEntropyMap:
    """
    Average entropy of B after a projective measurement n.sigma on qubit A

    The unnormalized conditional states are (rho_B +/- sum_k n_k T_k)/2 with
    T_k = tr_A[(sigma_k (x) I) rho].
    """

    def __init__(self, rho_ab: DensityMatrix, d_a: int = 2):
        if d_a != 2:
            raise UnsupportedDimensionError(f'discord optimization needs a qubit on A, got d_A = {d_a}')
        _, d_b = _split_dims(rho_ab, d_a)
        if d_b < 2:
            raise UnsupportedDimensionError('discord needs a nontrivial B subsystem')
        t = rho_ab.matrix.reshape(2, d_b, 2, d_b)
        self.rho_b = np.einsum('ajak->jk', t)
        self.t_k = np.stack([np.einsum('ba,ajbk->jk', sigma, t) for sigma in PAULIS])

    def __call__(self, directions: np.ndarray) -> np.ndarray:
        m = np.einsum('nk,kjl->njl', directions, self.t_k)
        total = np.zeros(directions.shape[0])
        for sign in (1.0, -1.0):
            block = 0.5 * (self.rho_b[None, :, :] + sign * m)
            evals = np.linalg.eigvalsh(block)
            p = evals.sum(axis=1)
            total += -_xlog2x(evals).sum(axis=1) + _xlog2x(p)
        return total


def optimal_classical_correlation(rho_ab: DensityMatrix, step_deg: float = DEFAULT_SCAN_STEP_DEG,
                                  d_a: int = 2) -> ClassicalCorrelation:
    """
    C_A^M = S(rho_B) - min over projective qubit measurements of the average conditional entropy

    Batched (theta, phi) grid at step_deg, then Nelder-Mead refinement.
    Only d_a = 2 is supported.
    """
    cond = _ConditionalEntropyMap(rho_ab, d_a)
    d_b = rho_ab.dim // d_a
    step = math.radians(step_deg)
    theta = np.arange(0.0, math.pi + 0.5 * step, step)
    phi = np.arange(0.0, 2.0 * math.pi, step)
    tt, pp = np.meshgrid(theta, phi, indexing='ij')
    values = cond(_bloch_directions(tt.ravel(), pp.ravel()))
    k = int(np.argmin(values))
    start = np.array([tt.ravel()[k], pp.ravel()[k]])

    def objective(x: np.ndarray) -> float:
        return float(cond(_bloch_directions(np.array([x[0]]), np.array([x[1]])))[0])

    refined = minimize(objective, start, method='Nelder-Mead',
                       options={'xatol': REFINE_TOL, 'fatol': REFINE_TOL * 1e-2, 'maxiter': 2000})
    best_x, best = (refined.x, refined.fun) if refined.fun < values[k] else (start, values[k])

    s_b = von_neumann_entropy(DensityMatrix(cond.rho_b))
    info = mutual_information(rho_ab, (2, d_b))
    logger.debug('Discord scan: %d grid points, refinement %s after %d iterations',
                 values.size, 'converged' if refined.success else 'stopped', refined.nit)
    return ClassicalCorrelation(
        classical_info=s_b - float(best),
        mutual_information=info,
        direction=BlochVector.from_angles(1.0, float(best_x[0]), float(best_x[1])),
        grid_points=int(values.size),
    )


def discord_and_classical_info(rho_ab: DensityMatrix, step_deg: float = DEFAULT_SCAN_STEP_DEG,
                               d_a: int = 2) -> Tuple[float, float]:
    """(D_A, C_A^M) in bits; party A must be a qubit"""
    result = optimal_classical_correlation(rho_ab, step_deg, d_a)
    return result.discord, result.classical_info


def pati_bound(rho_ab: DensityMatrix, pair: MeasurementPair,
               step_deg: float = DEFAULT_SCAN_STEP_DEG) -> float:
    """Coles-Piani plus max{0, D_A - C_A^M}"""
    discord, classical = discord_and_classical_info(rho_ab, step_deg, pair.dim)
    return coles_piani_bound(rho_ab, pair) + max(0.0, discord - classical)


# ------------------------------------------------------------------
# Shannon and fine-grained forms
# ------------------------------------------------------------------

def difference_probability(rho_ab: DensityMatrix, obs: Observable) -> float:
    """
    Probability that both parties measuring obs get different outcomes

    p_d = 1 - sum_i <r_i r_i| rho |r_i r_i>
    """
    if obs.dim * obs.dim != rho_ab.dim:
        raise DimensionMismatchError(
            f'state dimension {rho_ab.dim} is not the square of observable dimension {obs.dim}'
        )
    vecs = obs.eigenvectors
    same = 0.0
    for i in range(obs.dim):
        ket = np.kron(vecs[:, i], vecs[:, i])
        same += float(np.real(ket.conj() @ rho_ab.matrix @ ket))
    return min(max(1.0 - same, 0.0), 1.0)


def shannon_lhs_fano(rho_ab: DensityMatrix, pair: MeasurementPair) -> float:
    """H(p_d^R) + H(p_d^S) with binary Shannon entropy"""
    return (binary_entropy(difference_probability(rho_ab, pair.r))
            + binary_entropy(difference_probability(rho_ab, pair.s)))


def _correlation_matrix(rho_ab: DensityMatrix) -> np.ndarray:
    """T_ij = tr[(sigma_i (x) sigma_j) rho]"""
    return np.array([[np.real(np.trace(tensor(si, sj) @ rho_ab.matrix)) for sj in PAULIS]
                     for si in PAULIS])


def _bloch_axis(obs: Observable) -> np.ndarray:
    """Bloch direction of the upper eigenvector of a non-degenerate qubit observable"""
    if obs.dim != 2:
        raise UnsupportedDimensionError(f'fine-grained R must be a qubit observable, got dimension {obs.dim}')
    if obs.eigenvalues[1] - obs.eigenvalues[0] < DEGENERACY_TOL:
        raise DegenerateSpectrumError(f'R has a degenerate spectrum {obs.eigenvalues}')
    top = obs.eigenvectors[:, -1]
    axis = np.array([np.real(top.conj() @ sigma @ top) for sigma in PAULIS])
    return axis / np.linalg.norm(axis)


def _polar_frame(axis: np.ndarray) -> np.ndarray:
    """Orthonormal columns (e1, e2, axis); sigma_z gives the identity"""
    helper = np.array([1.0, 0.0, 0.0]) if abs(axis[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = helper - np.dot(helper, axis) * axis
    e1 = e1 / np.linalg.norm(e1)
    return np.column_stack([e1, np.cross(axis, e1), axis])


def fine_grained_scan(rho_ab: DensityMatrix, fixed_r: Optional[Observable] = None,
                      step_deg: float = DEFAULT_SCAN_STEP_DEG) -> FineGrainedScan:
    """
    Infimum over spin directions n != +/-r of p_d(n) = (1 - n.T.n)/2

    r is the Bloch axis of fixed_r (sigma_z by default). The scan runs in polar
    angles about r and excludes a cone of half-angle EXCLUSION_CONE_DEG around
    it. If the refined minimizer lands on the cone edge, the cone is narrowed
    once and the refinement repeated.
    """
    if rho_ab.dim != 4:
        raise UnsupportedDimensionError(f'fine-grained scan needs two qubits, got dimension {rho_ab.dim}')
    fixed_r = fixed_r if fixed_r is not None else Observable(SIGMA_Z)
    frame = _polar_frame(_bloch_axis(fixed_r))
    corr = frame.T @ _correlation_matrix(rho_ab) @ frame

    def p_d(directions: np.ndarray) -> np.ndarray:
        return 0.5 * (1.0 - np.einsum('ni,ij,nj->n', directions, corr, directions))

    step = math.radians(step_deg)
    cone = math.radians(EXCLUSION_CONE_DEG)
    theta = np.concatenate([[cone], np.arange(step, math.pi - 0.5 * step, step), [math.pi - cone]])
    phi = np.arange(0.0, 2.0 * math.pi, step)
    tt, pp = np.meshgrid(theta, phi, indexing='ij')
    values = p_d(_bloch_directions(tt.ravel(), pp.ravel()))
    k = int(np.argmin(values))

    def refine(start: np.ndarray, cone_rad: float):
        res = minimize(lambda x: float(p_d(_bloch_directions(x[:1], x[1:]))[0]), start,
                       method='L-BFGS-B', bounds=[(cone_rad, math.pi - cone_rad), (None, None)],
                       options={'ftol': 1e-15, 'gtol': 1e-12})
        return res.x, float(res.fun)

    start = np.array([tt.ravel()[k], pp.ravel()[k]])
    x, best = refine(start, cone)
    on_edge = min(x[0] - cone, math.pi - cone - x[0]) < 1e-8
    if on_edge:
        logger.warning('Fine-grained minimizer sits on the exclusion cone edge; narrowing to %.2f deg',
                       REFINED_CONE_DEG)
        x, best = refine(x, math.radians(REFINED_CONE_DEG))
    best = min(best, float(values[k]))

    p_inf = min(max(best, 0.0), 1.0)
    p_d_r = difference_probability(rho_ab, fixed_r)
    return FineGrainedScan(
        p_inf=p_inf,
        bound=binary_entropy(p_d_r) + binary_entropy(p_inf),
        p_d_r=p_d_r,
        direction=BlochVector.from_sequence(frame @ _bloch_directions(x[0], x[1])),
        scan_spread=float(values.max() - values.min()),
        on_cone_edge=bool(on_edge),
        grid_points=int(values.size),
    )


def fine_grained_inf(rho_ab: DensityMatrix, fixed_r: Optional[Observable] = None,
                     step_deg: float = DEFAULT_SCAN_STEP_DEG) -> Tuple[float, float]:
    """(p_inf, H(p_d^R) + H(p_inf)) with R = sigma_z unless given"""
    scan = fine_grained_scan(rho_ab, fixed_r, step_deg)
    return scan.p_inf, scan.bound


def key_rates(rho_ab: DensityMatrix, pair: MeasurementPair,
              step_deg: float = DEFAULT_SCAN_STEP_DEG) -> KeyRates:
    """
    Key-rate expressions evaluated as written; negative values mean no key

    The fine-grained variant is reported both with the printed sign and with
    both entropies subtracted.
    """
    log_c = maassen_uffink_bound(pair)
    s_r, s_s = measured_conditional_entropies(rho_ab, pair)
    scan = fine_grained_scan(rho_ab, step_deg=step_deg)
    h_r, h_inf = binary_entropy(scan.p_d_r), binary_entropy(scan.p_inf)
    return KeyRates(
        berta=log_c - s_r - s_s,
        fine_grained=log_c - h_r + h_inf,
        fine_grained_both_minus=log_c - h_r - h_inf,
    )


class MemoryAnalyzer:
    """
    Bound hierarchy for one state and measurement pair
    Discord and fine-grained scans share the direction grid step
    """

    def __init__(self, scan_step_deg: float = DEFAULT_SCAN_STEP_DEG):
        if not 0.0 < scan_step_deg <= 45.0:
            raise ValueError(f'scan step must lie in (0, 45] degrees, got {scan_step_deg!r}')
        self.scan_step_deg = scan_step_deg

    def report(self, rho_ab: DensityMatrix, pair: MeasurementPair) -> MemoryBoundReport:
        """
        Evaluate every bound, the measured lhs and the key rates

        Args:
            rho_ab: two-party state with party A first
            pair: observables R, S of party A

        Returns:
            MemoryBoundReport
        """
        s_r, s_s = measured_conditional_entropies(rho_ab, pair)
        lhs = s_r + s_s
        mu = maassen_uffink_bound(pair)
        berta = berta_bound(rho_ab, pair)
        coles = coles_piani_bound(rho_ab, pair)

        correlation = optimal_classical_correlation(rho_ab, self.scan_step_deg, pair.dim)
        pati = coles + max(0.0, correlation.discord - correlation.classical_info)

        scan = fine_grained_scan(rho_ab, step_deg=self.scan_step_deg)
        h_r, h_inf = binary_entropy(scan.p_d_r), binary_entropy(scan.p_inf)

        if lhs < berta - BOUND_TOL:
            logger.warning('Measured lhs %.10f is below the Berta bound %.10f', lhs, berta)

        return MemoryBoundReport(
            lhs=lhs,
            bounds={
                'maassen_uffink': mu,
                'berta': berta,
                'coles_piani': coles,
                'pati': pati,
                'fine_grained': scan.bound,
            },
            shannon_lhs=shannon_lhs_fano(rho_ab, pair),
            key_rate_berta=mu - lhs,
            key_rate_fine_grained=mu - h_r + h_inf,
            key_rate_fine_grained_both_minus=mu - h_r - h_inf,
            discord=correlation.discord,
            classical_info=correlation.classical_info,
            fine_grained_exceeds_berta=scan.bound > berta + BOUND_TOL,
            metadata={
                'fine_grained_r': 'sz',
                'p_d_r': scan.p_d_r,
                'p_inf': scan.p_inf,
                'p_inf_direction': list(scan.direction.as_array()),
                'p_inf_on_cone_edge': scan.on_cone_edge,
                'discord_direction': list(correlation.direction.as_array()),
                'scan_step_deg': self.scan_step_deg,
                'exclusion_cone_deg': EXCLUSION_CONE_DEG,
                'complementarity_c': complementarity_c(pair),
            },
        )
