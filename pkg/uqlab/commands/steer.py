# -*- coding: utf-8 -*-
"""
steer subcommand: Reid and entropic steering tests on Laguerre-Gaussian modes
"""

from typing import Dict, List, Optional, Tuple
import argparse

from uqlab._core.steering import (
    MAX_MODE_ORDER,
    REID_BOUND,
    GridParams,
    LGModeSpec,
    QuadraturePair,
    entropic_steering,
    joint_distribution,
    reid_angle_scan,
    reid_criterion,
)
from uqlab.utils.report import BoundReport, write_rows_csv

CRITERIA = ('reid', 'entropic', 'both')


def add_arguments(parser: argparse.ArgumentParser):
    parser.add_argument('--mode', choices=('lg',), default='lg', help='mode family (lg)')
    parser.add_argument('--n', type=int, default=0, help='radial LG index')
    parser.add_argument('--m', type=int, default=0, help='azimuthal LG index')
    parser.add_argument('--grid-extent', type=float, default=6.0, help='grid half extent L')
    parser.add_argument('--grid-points', type=int, default=201, help='points per axis N')
    parser.add_argument('--criterion', choices=CRITERIA, default='both')
    parser.add_argument('--dump-grid', metavar='FILE', help='write the (X, P_Y) grid as u,v,p CSV')


def _validate_options(args) -> Tuple[Optional[Dict], Optional[str]]:
    """Validate steer options, returns (cleaned_options, error_message)"""
    if args.n < 0 or args.m < 0:
        return None, f'--n and --m must be nonnegative (got {args.n}, {args.m})'
    if args.n + args.m > MAX_MODE_ORDER:
        return None, f'--n + --m must not exceed {MAX_MODE_ORDER} (got {args.n + args.m})'
    if not args.grid_extent > 0:
        return None, f'--grid-extent must be positive (got {args.grid_extent})'
    if args.grid_points < 64:
        return None, f'--grid-points must be at least 64 (got {args.grid_points})'
    return {
        'mode': LGModeSpec(args.n, args.m),
        'grid': GridParams(args.grid_extent, args.grid_points),
        'criterion': args.criterion,
        'dump_grid': args.dump_grid,
    }, None


def run(options: Dict, seed: Optional[int] = None) -> List[BoundReport]:
    spec, grid = options['mode'], options['grid']
    label = f'LG({spec.n},{spec.m})'
    reports = []
    joint = None

    if options['criterion'] in ('entropic', 'both'):
        result = entropic_steering(spec, grid)
        joint = result.joint_grids['X,P_Y']
        reports.append(BoundReport(
            title=f'Entropic steering {label}',
            lhs_name='h(X|P_Y)+h(P_X|Y)',
            lhs_value=result.lhs,
            rhs=[('ln(pi e)', result.bound)],
            verdict='steering' if result.violated else 'no violation',
            metadata={
                'h_joint_x_py': result.h_joint_1,
                'h_joint_px_y': result.h_joint_2,
                'h_marg_py': result.h_marg_1,
                'h_marg_y': result.h_marg_2,
                'grid_half_extent': grid.half_extent,
                'grid_points': grid.points_per_axis,
                'quadrature_nodes': grid.quadrature_nodes,
            },
        ))

    if options['criterion'] in ('reid', 'both'):
        reid = reid_criterion(spec, grid)
        scan = reid_angle_scan(spec)
        reports.append(BoundReport(
            title=f'Reid EPR criterion {label}',
            lhs_name='inferred variance product',
            lhs_value=reid.product,
            rhs=[('reid_bound', REID_BOUND), ('rotated_scan_min', scan.min_product)],
            verdict='EPR' if reid.epr_flag else 'no EPR',
            metadata={
                'g1': reid.g1,
                'g2': reid.g2,
                'inferred_var_x': reid.inferred_var_1,
                'inferred_var_px': reid.inferred_var_2,
                'moments': reid.moments,
                'scan_theta': scan.theta,
                'scan_epr_flag': scan.epr_flag,
            },
        ))

    if options['dump_grid']:
        if joint is None:
            joint = joint_distribution(spec, QuadraturePair.X_PY, grid)
        write_rows_csv(joint.to_rows(), ('u', 'v', 'p'), options['dump_grid'])
    return reports
