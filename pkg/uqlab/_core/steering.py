# -*- coding: utf-8 -*-
"""
EPR steering for continuous-variable Laguerre-Gaussian states
Reid inferred-variance criterion and the entropic steering inequality,
both evaluated from the two-mode Wigner function W_nm(X, P_X; Y, P_Y)
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Dict, List, Optional, Tuple, Union
import logging
import math

import numpy as np
from scipy.special import eval_genlaguerre, roots_hermite

from uqlab._core.errors import NormalizationError, SingularMomentError
from uqlab.utils.config import thread_count

logger = logging.getLogger('uqlab')

MAX_MODE_ORDER = 6
NORMALIZATION_TOL = 1e-3
POSITIVITY_TOL = 1e-7
DENSITY_FLOOR = 1e-300
STEERING_TOL = 2e-3
MOMENT_FLOOR = 1e-12
REID_BOUND = 0.25
REID_TOL = 1e-9
MOMENT_NODES = 16

LN_PI_E = math.log(math.pi * math.e)

# Quadrature order used for moments: X, P_X, Y, P_Y
QUADRATURES = ('X', 'P_X', 'Y', 'P_Y')


class QuadraturePair(Enum):
    """Pairs of commuting quadratures whose joint density is measurable"""
    X_PY = ('X', 'P_Y')
    PX_Y = ('P_X', 'Y')
    X_Y = ('X', 'Y')
    PX_PY = ('P_X', 'P_Y')

    @classmethod
    def parse(cls, value: Union['QuadraturePair', str, Tuple[str, str]]) -> 'QuadraturePair':
        if isinstance(value, cls):
            return value
        if isinstance(value, str):
            value = tuple(part.strip() for part in value.split(','))
        for pair in cls:
            if pair.value == tuple(value):
                return pair
        raise ValueError(f'unknown quadrature pair {value!r}')

    @property
    def complement(self) -> Tuple[str, str]:
        return tuple(q for q in QUADRATURES if q not in self.value)


@dataclass(frozen=True)
class LGModeSpec:
    """Laguerre-Gaussian mode indices (n, m)"""
    n: int
    m: int

    def __post_init__(self):
        if self.n < 0 or self.m < 0:
            raise ValueError(f'LG indices must be nonnegative, got ({self.n}, {self.m})')
        if self.n + self.m > MAX_MODE_ORDER:
            raise ValueError(
                f'LG order n + m = {self.n + self.m} exceeds supported maximum {MAX_MODE_ORDER}'
            )


@dataclass(frozen=True)
class GridParams:
    """Outer sampling grid and inner Gauss-Hermite order"""
    half_extent: float = 6.0
    points_per_axis: int = 201
    quadrature_nodes: int = 48

    def __post_init__(self):
        if not self.half_extent > 0:
            raise ValueError(f'grid half extent must be positive, got {self.half_extent!r}')
        if self.points_per_axis < 64:
            raise ValueError(f'grid needs at least 64 points per axis, got {self.points_per_axis}')
        if self.quadrature_nodes < 4:
            raise ValueError(f'too few quadrature nodes: {self.quadrature_nodes}')

    def doubled(self) -> 'GridParams':
        """Twice the extent and twice the points at the same spacing"""
        return GridParams(2.0 * self.half_extent, 2 * self.points_per_axis - 1,
                          self.quadrature_nodes)


@dataclass(frozen=True, eq=False)
class PhaseSpaceGrid:
    """
    Sampled joint density of two commuting quadratures

    values[i, j] is the density at (u_i, v_j) with u, v the two axes in order.
    """
    axes: Tuple[str, str]
    half_extent: float
    points_per_axis: int
    values: np.ndarray

    @property
    def coords(self) -> np.ndarray:
        return np.linspace(-self.half_extent, self.half_extent, self.points_per_axis)

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_extent / (self.points_per_axis - 1)

    @property
    def cell_area(self) -> float:
        return self.spacing ** 2

    def total_mass(self) -> float:
        return float(self.values.sum() * self.cell_area)

    def to_rows(self) -> List[Tuple[float, float, float]]:
        """(u, v, p) rows, u slowest"""
        c = self.coords
        return [(float(c[i]), float(c[j]), float(self.values[i, j]))
                for i in range(self.points_per_axis) for j in range(self.points_per_axis)]


@dataclass(frozen=True, eq=False)
class Marginal1D:
    """Single-quadrature density obtained by summing a joint grid"""
    axis: str
    coords: np.ndarray
    values: np.ndarray
    spacing: float


@dataclass
class EntropicSteeringResult:
    """Entropic steering inequality h(X|P_Y) + h(P_X|Y) >= ln(pi e), in nats"""
    h_joint_1: float
    h_joint_2: float
    h_marg_1: float
    h_marg_2: float
    lhs: float
    bound: float
    violated: bool
    mode: LGModeSpec
    grid: GridParams
    joint_grids: Dict[str, PhaseSpaceGrid] = field(default_factory=dict, repr=False)


@dataclass
class ReidResult:
    """Reid inferred-variance test at the conjugate pairing (X|P_Y), (P_X|Y)"""
    g1: float
    g2: float
    inferred_var_1: float
    inferred_var_2: float
    product: float
    epr_flag: bool
    moments: Dict[str, float] = field(default_factory=dict)


@dataclass
class ReidScanResult:
    """Minimum inferred-variance product over rotated quadratures"""
    min_product: float
    theta: float
    phi_1: float
    phi_2: float
    n_angles: int
    epr_flag: bool


# ------------------------------------------------------------------
# Wigner function
# ------------------------------------------------------------------

def _wigner_polynomial(spec: LGModeSpec, x, p_x, y, p_y):
    """W_nm without its exp(-4 Q0) Gaussian factor"""
    q0 = 0.25 * (x * x + y * y + p_x * p_x + p_y * p_y)
    q2 = 0.5 * (x * p_y - y * p_x)
    sign = -1.0 if (spec.n + spec.m) % 2 else 1.0
    return (sign / math.pi ** 2
            * eval_genlaguerre(spec.n, 0, 4.0 * (q0 + q2))
            * eval_genlaguerre(spec.m, 0, 4.0 * (q0 - q2)))


def wigner_lg(spec: LGModeSpec, x, p_x, y, p_y):
    """
    Two-mode LG Wigner function in dimensionless quadratures

    W_nm = (-1)^(n+m)/pi^2 L_n[4(Q0+Q2)] L_m[4(Q0-Q2)] exp(-4 Q0) with
    Q0 = (X^2+Y^2+P_X^2+P_Y^2)/4 and Q2 = (X P_Y - Y P_X)/2. Accepts scalars
    or broadcastable arrays.
    """
    x, p_x, y, p_y = (np.asarray(v, dtype=float) for v in (x, p_x, y, p_y))
    gaussian = np.exp(-(x * x + y * y + p_x * p_x + p_y * p_y))
    value = _wigner_polynomial(spec, x, p_x, y, p_y) * gaussian
    return float(value) if value.ndim == 0 else value


def wigner_closed_form_00(x, p_x, y, p_y):
    """exp(-X^2-Y^2-P_X^2-P_Y^2)/pi^2"""
    return np.exp(-(np.square(x) + np.square(y) + np.square(p_x) + np.square(p_y))) / math.pi ** 2


def wigner_closed_form_10(x, p_x, y, p_y):
    """exp(-X^2-Y^2-P_X^2-P_Y^2) ((P_X - Y)^2 + (P_Y + X)^2 - 1)/pi^2"""
    return (wigner_closed_form_00(x, p_x, y, p_y)
            * ((np.asarray(p_x) - y) ** 2 + (np.asarray(p_y) + x) ** 2 - 1.0))


# ------------------------------------------------------------------
# Joint distributions and entropies
# ------------------------------------------------------------------

@lru_cache(maxsize=16)
def _gauss_hermite(n_nodes: int) -> Tuple[np.ndarray, np.ndarray]:
    nodes, weights = roots_hermite(n_nodes)
    return nodes, weights


def _joint_row(spec: LGModeSpec, pair: QuadraturePair, u: float, v: np.ndarray,
               nodes: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Density along one outer row u, all v, integrated over the complementary pair"""
    s = nodes[None, :, None]
    t = nodes[None, None, :]
    shape = (v.size, nodes.size, nodes.size)
    slots = {
        pair.value[0]: np.full(shape, u),
        pair.value[1]: np.broadcast_to(v[:, None, None], shape),
        pair.complement[0]: np.broadcast_to(s, shape),
        pair.complement[1]: np.broadcast_to(t, shape),
    }
    poly = _wigner_polynomial(spec, slots['X'], slots['P_X'], slots['Y'], slots['P_Y'])
    inner = np.einsum('jkl,k,l->j', poly, weights, weights)
    return np.exp(-u * u - v * v) * inner


def joint_distribution(spec: LGModeSpec,
                       pair: Union[QuadraturePair, str, Tuple[str, str]],
                       grid_params: Optional[GridParams] = None) -> PhaseSpaceGrid:
    """
    Joint density of a commuting quadrature pair on the outer grid

    The complementary pair is integrated out with Gauss-Hermite quadrature after
    factoring its Gaussian weight; rows are evaluated in parallel.

    Args:
        spec: LG mode
        pair: which pair to keep, e.g. QuadraturePair.X_PY or 'X,P_Y'
        grid_params: outer grid and inner quadrature order

    Returns:
        PhaseSpaceGrid, nonnegative and normalized

    Raises:
        NormalizationError: mass off by more than NORMALIZATION_TOL or a
            negative density below -POSITIVITY_TOL
    """
    pair = QuadraturePair.parse(pair)
    grid_params = grid_params or GridParams()
    nodes, weights = _gauss_hermite(grid_params.quadrature_nodes)
    coords = np.linspace(-grid_params.half_extent, grid_params.half_extent,
                         grid_params.points_per_axis)

    workers = thread_count()
    logger.debug('Joint %s for LG(%d,%d): N=%d L=%g nodes=%d workers=%d',
                 pair.value, spec.n, spec.m, grid_params.points_per_axis,
                 grid_params.half_extent, grid_params.quadrature_nodes, workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        rows = list(pool.map(
            lambda u: _joint_row(spec, pair, float(u), coords, nodes, weights), coords))
    values = np.vstack(rows)

    grid = PhaseSpaceGrid(pair.value, grid_params.half_extent,
                          grid_params.points_per_axis, values)
    minimum = float(values.min())
    if minimum < -POSITIVITY_TOL:
        raise NormalizationError(f'joint density of {pair.value} is negative ({minimum:.3e})')
    mass = grid.total_mass()
    if abs(mass - 1.0) > NORMALIZATION_TOL:
        raise NormalizationError(
            f'joint density of {pair.value} integrates to {mass:.6f}; enlarge the grid'
        )
    return PhaseSpaceGrid(pair.value, grid_params.half_extent,
                          grid_params.points_per_axis, np.clip(values, 0.0, None))


def marginal(grid: PhaseSpaceGrid, axis: str) -> Marginal1D:
    """Sum a joint grid over the other axis"""
    if axis not in grid.axes:
        raise ValueError(f'axis {axis!r} not in grid axes {grid.axes}')
    other = 1 if grid.axes.index(axis) == 0 else 0
    values = grid.values.sum(axis=other) * grid.spacing
    return Marginal1D(axis, grid.coords, values, grid.spacing)


def _entropy_sum(values: np.ndarray, measure: float) -> float:
    p = values[values > DENSITY_FLOOR]
    return float(-np.sum(p * np.log(p)) * measure)


def differential_entropy(grid: Union[PhaseSpaceGrid, Marginal1D]) -> float:
    """-sum P ln P dA in nats, cells with P < 1e-300 contributing zero"""
    if isinstance(grid, Marginal1D):
        return _entropy_sum(grid.values, grid.spacing)
    return _entropy_sum(grid.values, grid.cell_area)


def entropic_steering(spec: LGModeSpec,
                      grid_params: Optional[GridParams] = None) -> EntropicSteeringResult:
    """
    Evaluate h(X|P_Y) + h(P_X|Y) against ln(pi e)

    Conditional entropies are h(A|B) = h(A,B) - h(B) from the joint grids
    (X, P_Y) and (P_X, Y).
    """
    grid_params = grid_params or GridParams()
    grid_1 = joint_distribution(spec, QuadraturePair.X_PY, grid_params)
    grid_2 = joint_distribution(spec, QuadraturePair.PX_Y, grid_params)

    h_joint_1 = differential_entropy(grid_1)
    h_joint_2 = differential_entropy(grid_2)
    h_marg_1 = differential_entropy(marginal(grid_1, 'P_Y'))
    h_marg_2 = differential_entropy(marginal(grid_2, 'Y'))
    lhs = (h_joint_1 - h_marg_1) + (h_joint_2 - h_marg_2)

    logger.debug('LG(%d,%d) entropic steering lhs=%.6f bound=%.6f', spec.n, spec.m, lhs, LN_PI_E)
    return EntropicSteeringResult(
        h_joint_1=h_joint_1,
        h_joint_2=h_joint_2,
        h_marg_1=h_marg_1,
        h_marg_2=h_marg_2,
        lhs=lhs,
        bound=LN_PI_E,
        violated=lhs < LN_PI_E - STEERING_TOL,
        mode=spec,
        grid=grid_params,
        joint_grids={'X,P_Y': grid_1, 'P_X,Y': grid_2},
    )


def grid_convergence(spec: LGModeSpec,
                     grid_params: Optional[GridParams] = None) -> Dict[str, float]:
    """Entropies at the given grid and at doubled extent and points"""
    grid_params = grid_params or GridParams()
    base = entropic_steering(spec, grid_params)
    fine = entropic_steering(spec, grid_params.doubled())
    changes = {
        'h_joint_1': abs(fine.h_joint_1 - base.h_joint_1),
        'h_joint_2': abs(fine.h_joint_2 - base.h_joint_2),
        'h_marg_1': abs(fine.h_marg_1 - base.h_marg_1),
        'h_marg_2': abs(fine.h_marg_2 - base.h_marg_2),
        'lhs': abs(fine.lhs - base.lhs),
    }
    changes['max_change'] = max(changes.values())
    return changes


# ------------------------------------------------------------------
# Reid criterion
# ------------------------------------------------------------------

@lru_cache(maxsize=32)
def second_moments(spec: LGModeSpec, n_nodes: int = MOMENT_NODES) -> np.ndarray:
    """
    Raw symmetric second moments <q_i q_j> over (X, P_X, Y, P_Y)

    Four-dimensional Gauss-Hermite quadrature against the exp(-4 Q0) weight;
    exact for the polynomial degrees in range.
    """
    nodes, weights = _gauss_hermite(n_nodes)
    x, p_x, y, p_y = np.meshgrid(nodes, nodes, nodes, nodes, indexing='ij')
    w = np.einsum('i,j,k,l->ijkl', weights, weights, weights, weights)
    density = _wigner_polynomial(spec, x, p_x, y, p_y) * w

    mass = float(density.sum())
    if abs(mass - 1.0) > NORMALIZATION_TOL:
        raise NormalizationError(f'Wigner quadrature mass {mass:.6f} for LG({spec.n},{spec.m})')

    coords = (x, p_x, y, p_y)
    moments = np.empty((4, 4))
    for i in range(4):
        for j in range(i, 4):
            moments[i, j] = moments[j, i] = float(np.sum(density * coords[i] * coords[j]))
    moments.setflags(write=False)
    return moments


def _inferred(moments: np.ndarray, target: int, source: int) -> Tuple[float, float]:
    """Optimal gain and inferred variance of quadrature target given source"""
    denom = moments[source, source]
    if denom <= MOMENT_FLOOR:
        raise SingularMomentError(f'<{QUADRATURES[source]}^2> = {denom:.3e} vanishes')
    gain = moments[target, source] / denom
    return gain, max(0.0, moments[target, target] - gain * moments[target, source])


def reid_criterion(spec: LGModeSpec, grid_params: Optional[GridParams] = None) -> ReidResult:
    """
    Reid EPR test with X inferred from P_Y and P_X inferred from Y

    Gains g = <X_t Y_s>/<Y_s^2>; the EPR flag requires the product of inferred
    variances to fall below 1/4 by more than REID_TOL.
    """
    n_nodes = MOMENT_NODES if grid_params is None else min(MOMENT_NODES, grid_params.quadrature_nodes)
    moments = second_moments(spec, n_nodes)
    x, p_x, y, p_y = range(4)
    g1, var_1 = _inferred(moments, x, p_y)
    g2, var_2 = _inferred(moments, p_x, y)
    product = var_1 * var_2
    return ReidResult(
        g1=g1,
        g2=g2,
        inferred_var_1=var_1,
        inferred_var_2=var_2,
        product=product,
        epr_flag=product < REID_BOUND - REID_TOL,
        moments={f'{QUADRATURES[i]}*{QUADRATURES[j]}': float(moments[i, j])
                 for i in range(4) for j in range(i, 4)},
    )


def reid_angle_scan(spec: LGModeSpec, n_angles: int = 181) -> ReidScanResult:
    """
    Minimum Reid product over rotated quadratures

    Party 1 measures X_theta = X cos(theta) + P_X sin(theta) and its conjugate
    X_(theta+pi/2); each is inferred from the best Y_phi = Y cos(phi) + P_Y sin(phi),
    the two inferences optimized independently.
    """
    moments = second_moments(spec)
    angles = np.linspace(0.0, math.pi, n_angles)
    c, s = np.cos(angles), np.sin(angles)
    zeros = np.zeros_like(angles)

    bob = np.stack([zeros, zeros, c, s], axis=1)
    bob_var = np.einsum('ai,ij,aj->a', bob, moments, bob)
    if np.any(bob_var <= MOMENT_FLOOR):
        raise SingularMomentError('rotated quadrature of party 2 has vanishing variance')

    def best_inferred(alice: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        alice_var = np.einsum('ai,ij,aj->a', alice, moments, alice)
        cross = np.einsum('ai,ij,bj->ab', alice, moments, bob)
        inferred = np.clip(alice_var[:, None] - cross ** 2 / bob_var[None, :], 0.0, None)
        best = np.argmin(inferred, axis=1)
        return inferred[np.arange(angles.size), best], best

    var_1, phi_1 = best_inferred(np.stack([c, s, zeros, zeros], axis=1))
    var_2, phi_2 = best_inferred(np.stack([-s, c, zeros, zeros], axis=1))
    products = var_1 * var_2
    k = int(np.argmin(products))
    logger.debug('Reid scan LG(%d,%d): min product %.6f at theta=%.4f',
                 spec.n, spec.m, products[k], angles[k])
    return ReidScanResult(
        min_product=float(products[k]),
        theta=float(angles[k]),
        phi_1=float(angles[phi_1[k]]),
        phi_2=float(angles[phi_2[k]]),
        n_angles=n_angles,
        epr_flag=bool(products[k] < REID_BOUND - REID_TOL),
    )
