# -*- coding: utf-8 -*-
"""
Small-dimension linear algebra and quantum state primitives
Density matrices, observables, tensor products, partial traces and entropies
shared by every analysis module
"""

from dataclasses import dataclass
from functools import cached_property, reduce
from typing import Iterable, List, Optional, Sequence, Tuple, Union
import logging
import math

import numpy as np

from uqlab._core.errors import (
    DimensionMismatchError,
    InvalidObservableError,
    InvalidStateError,
    NormalizationError,
)

logger = logging.getLogger('uqlab')

# Tolerances
HERMITIAN_TOL = 1e-12
# accepted input trace error; stored states are renormalized to unit trace
TRACE_TOL = 1e-10
NEGATIVITY_TOL = 1e-10
EXPECTATION_IMAG_TOL = 1e-10
UNIT_TOL = 1e-9
PROB_TOL = 1e-9

ComplexMatrix = np.ndarray

# Pauli matrices
IDENTITY_2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)


def _as_square(matrix, name: str = 'matrix') -> np.ndarray:
    """Coerce input to a square complex array"""
    arr = np.asarray(matrix, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionMismatchError(f'{name} must be square, got shape {arr.shape}')
    return arr


def _hermitian_defect(arr: np.ndarray) -> float:
    return float(np.max(np.abs(arr - arr.conj().T))) if arr.size else 0.0


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """
    Hermitian, positive semidefinite, unit-trace d x d matrix

    Eigenvalues in [-NEGATIVITY_TOL, 0) are clamped to zero and the trace is
    renormalized on construction; anything more negative is rejected.
    """
    matrix: ComplexMatrix

    def __post_init__(self):
        arr = _as_square(self.matrix, 'density matrix')
        if _hermitian_defect(arr) > HERMITIAN_TOL:
            raise InvalidStateError(
                f'density matrix is not Hermitian (defect {_hermitian_defect(arr):.3e})'
            )
        arr = 0.5 * (arr + arr.conj().T)

        trace = np.trace(arr).real
        if abs(trace - 1.0) > TRACE_TOL:
            raise InvalidStateError(f'density matrix trace is {trace!r}, expected 1')

        evals, evecs = np.linalg.eigh(arr)
        if evals[0] < -NEGATIVITY_TOL:
            raise InvalidStateError(
                f'density matrix has negative eigenvalue {evals[0]:.3e}'
            )
        if evals[0] < 0:
            logger.debug('Clamping eigenvalues down to %.3e', evals[0])
            evals = np.clip(evals, 0.0, None)
            arr = (evecs * evals) @ evecs.conj().T
            arr = 0.5 * (arr + arr.conj().T)
        arr = arr / np.trace(arr).real

        arr.setflags(write=False)
        object.__setattr__(self, 'matrix', arr)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def eigenvalues(self) -> np.ndarray:
        """Ascending spectrum, clipped to [0, 1]"""
        return np.clip(np.linalg.eigvalsh(self.matrix), 0.0, 1.0)

    @property
    def purity(self) -> float:
        """tr(rho^2)"""
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    def is_pure(self, tol: float = 1e-9) -> bool:
        return abs(self.purity - 1.0) <= tol


@dataclass(frozen=True, eq=False)
class Observable:
    """Hermitian d x d matrix with cached eigendecomposition"""
    matrix: ComplexMatrix

    def __post_init__(self):
        arr = _as_square(self.matrix, 'observable')
        if _hermitian_defect(arr) > HERMITIAN_TOL:
            raise InvalidObservableError(
                f'observable is not Hermitian (defect {_hermitian_defect(arr):.3e})'
            )
        arr = 0.5 * (arr + arr.conj().T)
        arr.setflags(write=False)
        object.__setattr__(self, 'matrix', arr)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def _eigh(self) -> Tuple[np.ndarray, np.ndarray]:
        evals, evecs = np.linalg.eigh(self.matrix)
        return evals, evecs

    @property
    def eigenvalues(self) -> np.ndarray:
        """Real eigenvalues in ascending order"""
        return self._eigh[0]

    @property
    def eigenvectors(self) -> np.ndarray:
        """Orthonormal eigenvectors as columns, matching eigenvalues"""
        return self._eigh[1]

    def projectors(self) -> List[np.ndarray]:
        """Rank-one projectors onto the eigenvectors"""
        vecs = self.eigenvectors
        return [np.outer(vecs[:, k], vecs[:, k].conj()) for k in range(self.dim)]

    def is_involution(self, tol: float = 1e-10) -> bool:
        """True when the observable squares to the identity (a +/-1-valued observable)"""
        return bool(np.allclose(self.matrix @ self.matrix, np.eye(self.dim), atol=tol))

    def __add__(self, other: 'Observable') -> 'Observable':
        return Observable(self.matrix + other.matrix)

    def __mul__(self, scalar: float) -> 'Observable':
        return Observable(self.matrix * float(scalar))

    __rmul__ = __mul__


@dataclass(frozen=True)
class BlochVector:
    """Three real components of a qubit Bloch vector"""
    x: float
    y: float
    z: float

    @classmethod
    def from_sequence(cls, values: Sequence[float]) -> 'BlochVector':
        if len(values) != 3:
            raise DimensionMismatchError(f'Bloch vector needs 3 components, got {len(values)}')
        return cls(float(values[0]), float(values[1]), float(values[2]))

    @classmethod
    def from_angles(cls, radius: float, theta: float, phi: float) -> 'BlochVector':
        return cls(radius * math.sin(theta) * math.cos(phi),
                   radius * math.sin(theta) * math.sin(phi),
                   radius * math.cos(theta))

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    @property
    def norm(self) -> float:
        return math.sqrt(self.x ** 2 + self.y ** 2 + self.z ** 2)


def _check_dims(obs_dim: int, state_dim: int):
    if obs_dim != state_dim:
        raise DimensionMismatchError(
            f'observable dimension {obs_dim} does not match state dimension {state_dim}'
        )


def _matrix_of(obj) -> np.ndarray:
    if isinstance(obj, (Observable, DensityMatrix)):
        return obj.matrix
    return np.asarray(obj, dtype=complex)


def expectation(obs: Union[Observable, ComplexMatrix], rho: DensityMatrix) -> float:
    """
    Expectation value tr(A rho)

    Args:
        obs: Hermitian observable (or raw Hermitian matrix)
        rho: state

    Returns:
        Real part of the trace; the imaginary part must vanish to EXPECTATION_IMAG_TOL
    """
    a = _matrix_of(obs)
    _check_dims(a.shape[0], rho.dim)
    value = np.trace(a @ rho.matrix)
    if abs(value.imag) > EXPECTATION_IMAG_TOL:
        raise InvalidObservableError(
            f'expectation has imaginary part {value.imag:.3e}; observable is not Hermitian'
        )
    return float(value.real)


def variance(obs: Union[Observable, ComplexMatrix], rho: DensityMatrix) -> float:
    """<A^2> - <A>^2, clamped at zero"""
    a = _matrix_of(obs)
    _check_dims(a.shape[0], rho.dim)
    mean = expectation(a, rho)
    value = expectation(a @ a, rho) - mean * mean
    if value < -NEGATIVITY_TOL:
        raise InvalidStateError(f'negative variance {value:.3e}')
    return max(value, 0.0)


def tensor(a, b) -> np.ndarray:
    """Kronecker product, leftmost factor slowest-varying"""
    return np.kron(_matrix_of(a), _matrix_of(b))


def tensor_all(*factors) -> np.ndarray:
    """Kronecker product of any number of factors"""
    return reduce(tensor, factors)


def partial_trace(rho: DensityMatrix, subsystem_dims: Sequence[int],
                  keep: Union[int, Iterable[int]]) -> DensityMatrix:
    """
    Reduced state on the kept subsystems

    Args:
        rho: joint state
        subsystem_dims: local dimensions, leftmost slowest-varying
        keep: index or indices of the subsystems to keep

    Returns:
        Reduced DensityMatrix over the kept subsystems in their original order
    """
    dims = [int(d) for d in subsystem_dims]
    if any(d <= 0 for d in dims) or int(np.prod(dims)) != rho.dim:
        raise DimensionMismatchError(
            f'subsystem dimensions {dims} do not factor state dimension {rho.dim}'
        )
    kept = sorted({keep} if isinstance(keep, (int, np.integer)) else set(keep))
    if not kept or any(k < 0 or k >= len(dims) for k in kept):
        raise DimensionMismatchError(f'invalid subsystem selection {keep!r} for {len(dims)} parties')

    n = len(dims)
    t = rho.matrix.reshape(dims + dims)
    for idx in reversed(range(n)):
        if idx in kept:
            continue
        t = np.trace(t, axis1=idx, axis2=idx + n)
        n -= 1
    d_keep = int(np.prod([dims[k] for k in kept]))
    return DensityMatrix(t.reshape(d_keep, d_keep))


def _log(values: np.ndarray, log_base: float) -> np.ndarray:
    if log_base == 2:
        return np.log2(values)
    if log_base == math.e:
        return np.log(values)
    return np.log(values) / math.log(log_base)


def von_neumann_entropy(rho: DensityMatrix, log_base: float = 2) -> float:
    """-sum lambda log lambda over the spectrum, with 0 log 0 = 0"""
    evals = rho.eigenvalues
    evals = evals[evals > 0]
    return float(max(-np.sum(evals * _log(evals, log_base)), 0.0))


def shannon_entropy(probs: Sequence[float], log_base: float = 2) -> float:
    """
    Shannon entropy of a probability vector

    Entries down to -1e-12 are clamped into [0, 1]; the sum must be within
    PROB_TOL of one.
    """
    p = np.asarray(probs, dtype=float).ravel()
    if p.size == 0:
        raise NormalizationError('empty probability vector')
    if np.any(p < -1e-12):
        raise NormalizationError(f'negative probability {p.min():.3e}')
    if abs(p.sum() - 1.0) > PROB_TOL:
        raise NormalizationError(f'probabilities sum to {p.sum()!r}')
    p = np.clip(p, 0.0, 1.0)
    p = p[p > 0]
    return float(max(-np.sum(p * _log(p, log_base)), 0.0))


def binary_entropy(p: float, log_base: float = 2) -> float:
    """H(p) = -p log p - (1 - p) log(1 - p)"""
    p = min(max(float(p), 0.0), 1.0)
    return shannon_entropy([p, 1.0 - p], log_base)


def mutual_information(rho: DensityMatrix, subsystem_dims: Sequence[int],
                       log_base: float = 2) -> float:
    """I(A:B) = S(A) + S(B) - S(AB) for a bipartite state"""
    s_a = von_neumann_entropy(partial_trace(rho, subsystem_dims, 0), log_base)
    s_b = von_neumann_entropy(partial_trace(rho, subsystem_dims, 1), log_base)
    return s_a + s_b - von_neumann_entropy(rho, log_base)


def qubit_from_bloch(n: BlochVector) -> DensityMatrix:
    """rho(n) = (I + n.sigma) / 2"""
    if n.norm > 1.0 + 1e-12:
        raise InvalidStateError(f'Bloch vector length {n.norm!r} exceeds 1')
    matrix = 0.5 * (IDENTITY_2 + n.x * SIGMA_X + n.y * SIGMA_Y + n.z * SIGMA_Z)
    return DensityMatrix(matrix)


def unit_direction(direction: Sequence[float]) -> np.ndarray:
    vec = np.asarray(direction, dtype=float).ravel()
    if vec.size != 3:
        raise DimensionMismatchError(f'direction needs 3 components, got {vec.size}')
    length = float(np.linalg.norm(vec))
    if abs(length - 1.0) > UNIT_TOL:
        raise InvalidObservableError(f'direction is not a unit vector (|n| = {length!r})')
    return vec


def spin_matrix(direction: Sequence[float]) -> np.ndarray:
    """n.sigma for a unit direction, as a raw matrix"""
    vec = unit_direction(direction)
    return vec[0] * SIGMA_X + vec[1] * SIGMA_Y + vec[2] * SIGMA_Z


def spin_observable(direction: Sequence[float]) -> Observable:
    """Spin observable n.sigma with eigenvalues -1, +1"""
    return Observable(spin_matrix(direction))


def pure_state(vector: Sequence[complex]) -> DensityMatrix:
    """Projector onto a (normalized) ket"""
    ket = np.asarray(vector, dtype=complex).ravel()
    norm = np.linalg.norm(ket)
    if norm == 0:
        raise InvalidStateError('zero vector has no state')
    ket = ket / norm
    return DensityMatrix(np.outer(ket, ket.conj()))


def maximally_mixed(dim: int) -> DensityMatrix:
    """I / d"""
    if dim <= 0:
        raise DimensionMismatchError(f'dimension must be positive, got {dim}')
    return DensityMatrix(np.eye(dim, dtype=complex) / dim)


def random_unit_vector(rng: np.random.Generator) -> np.ndarray:
    """Uniformly distributed direction on the unit sphere"""
    vec = rng.normal(size=3)
    return vec / np.linalg.norm(vec)


def random_density_matrix(dim: int, rng: np.random.Generator,
                          rank: Optional[int] = None) -> DensityMatrix:
    """Random state from a Ginibre matrix G: rho = G G^dagger / tr(G G^dagger)"""
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real)


def random_hermitian(dim: int, rng: np.random.Generator) -> Observable:
    """Random Hermitian observable (GUE-like)"""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return Observable(0.5 * (g + g.conj().T))
