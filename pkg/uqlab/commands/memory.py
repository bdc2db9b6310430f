# -*- coding: utf-8 -*-
"""
memory subcommand: entropic uncertainty bounds with quantum memory
"""

from typing import Dict, List, Optional, Tuple
import argparse
import os

from uqlab._core.errors import UQLabError
from uqlab._core.linalg_core import DensityMatrix
from uqlab._core.memory import (
    BOUND_TOL,
    DEFAULT_SCAN_STEP_DEG,
    MeasurementPair,
    MemoryAnalyzer,
    bell_diagonal_state,
    singlet_state,
    werner_state,
)
from uqlab.commands import resolve_observable, resolve_state
from uqlab.utils.report import BoundReport


def add_arguments(parser: argparse.ArgumentParser):
    parser.add_argument('--state', required=True,
                        help='matrix file, werner:<p>, bell-diagonal:<c1,c2,c3> or singlet')
    parser.add_argument('--obs-r', default='sz', help='observable R (palette name or file)')
    parser.add_argument('--obs-s', default='sx', help='observable S (palette name or file)')
    parser.add_argument('--scan-step', type=float, default=DEFAULT_SCAN_STEP_DEG,
                        help=f'direction scan step in degrees (default {DEFAULT_SCAN_STEP_DEG})')


def parse_memory_state(text: str) -> DensityMatrix:
    """werner:<p>, bell-diagonal:<c1,c2,c3>, singlet, or anything resolve_state accepts"""
    if os.path.isfile(text):
        return resolve_state(text)
    kind, _, arg = text.partition(':')
    kind = kind.strip().lower()
    if kind == 'werner':
        return werner_state(float(arg))
    if kind == 'bell-diagonal':
        coeffs = [float(part) for part in arg.split(',')]
        if len(coeffs) != 3:
            raise ValueError(f'bell-diagonal needs three coefficients, got {len(coeffs)}')
        return bell_diagonal_state(*coeffs)
    if kind == 'singlet':
        return singlet_state()
    return resolve_state(text)


def _validate_options(args) -> Tuple[Optional[Dict], Optional[str]]:
    """Validate memory options, returns (cleaned_options, error_message)"""
    if not 0.0 < args.scan_step <= 45.0:
        return None, f'--scan-step must lie in (0, 45] degrees (got {args.scan_step})'
    try:
        state = parse_memory_state(args.state)
        pair = MeasurementPair(resolve_observable(args.obs_r), resolve_observable(args.obs_s))
    except (UQLabError, ValueError) as e:
        return None, f'--state/--obs-r/--obs-s: {e}'
    if state.dim % pair.dim:
        return None, f'observable dimension {pair.dim} does not divide state dimension {state.dim}'
    return {
        'state': state,
        'pair': pair,
        'scan_step': args.scan_step,
        'labels': {'state': args.state, 'obs_r': args.obs_r, 'obs_s': args.obs_s},
    }, None


def run(options: Dict, seed: Optional[int] = None) -> List[BoundReport]:
    report = MemoryAnalyzer(options['scan_step']).report(options['state'], options['pair'])
    holds = report.lhs >= report.bounds['berta'] - BOUND_TOL
    return [BoundReport(
        title='Entropic uncertainty with quantum memory',
        lhs_name='S(R|B)+S(S|B)',
        lhs_value=report.lhs,
        rhs=list(report.bounds.items()) + [
            ('shannon_lhs', report.shannon_lhs),
            ('key_rate_berta', report.key_rate_berta),
            ('key_rate_fine_grained', report.key_rate_fine_grained),
            ('key_rate_fine_grained_both_minus', report.key_rate_fine_grained_both_minus),
        ],
        verdict='berta bound holds' if holds else 'berta bound violated',
        metadata={
            **options['labels'],
            'discord': report.discord,
            'classical_info': report.classical_info,
            'fine_grained_exceeds_berta': report.fine_grained_exceeds_berta,
            **report.metadata,
        },
    )]
