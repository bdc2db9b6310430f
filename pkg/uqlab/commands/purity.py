# -*- coding: utf-8 -*-
"""
purity subcommand: Robertson-Schrodinger mixedness witness
"""

from typing import Dict, List, Optional, Tuple
import argparse

from uqlab._core.errors import UQLabError
from uqlab._core.purity import DEFAULT_EPSILON, PurityAnalyzer
from uqlab.commands import resolve_observable, resolve_state
from uqlab.utils.report import BoundReport


def add_arguments(parser: argparse.ArgumentParser):
    parser.add_argument('--state', help='state matrix file or palette name')
    parser.add_argument('--obs-a', help='first observable (matrix file or palette name)')
    parser.add_argument('--obs-b', help='second observable (matrix file or palette name)')
    parser.add_argument('--epsilon', type=float, default=DEFAULT_EPSILON,
                        help=f'instrument threshold (default {DEFAULT_EPSILON})')
    parser.add_argument('--sweep-werner', type=int, metavar='N_POINTS',
                        help='evaluate Q along the Werner family instead of a single state')


def _validate_options(args) -> Tuple[Optional[Dict], Optional[str]]:
    """Validate purity options, returns (cleaned_options, error_message)"""
    if args.epsilon < 0:
        return None, f'--epsilon must be nonnegative (got {args.epsilon})'
    if args.sweep_werner is not None:
        given = [flag for flag, value in (('--state', args.state), ('--obs-a', args.obs_a),
                                          ('--obs-b', args.obs_b)) if value is not None]
        if given:
            return None, f'--sweep-werner uses fixed Werner states and settings; drop {", ".join(given)}'
        if args.sweep_werner < 2:
            return None, f'--sweep-werner needs at least 2 points (got {args.sweep_werner})'
        return {'epsilon': args.epsilon, 'sweep_werner': args.sweep_werner}, None

    missing = [flag for flag, value in (('--state', args.state), ('--obs-a', args.obs_a),
                                        ('--obs-b', args.obs_b)) if value is None]
    if missing:
        return None, f'missing required option(s): {", ".join(missing)}'
    try:
        state = resolve_state(args.state)
        obs_a = resolve_observable(args.obs_a)
        obs_b = resolve_observable(args.obs_b)
    except UQLabError as e:
        return None, str(e)
    for flag, obs in (('--obs-a', obs_a), ('--obs-b', obs_b)):
        if obs.dim != state.dim:
            return None, f'{flag} has dimension {obs.dim} but the state has dimension {state.dim}'
    return {
        'epsilon': args.epsilon,
        'sweep_werner': None,
        'state': state,
        'obs_a': obs_a,
        'obs_b': obs_b,
        'labels': {'state': args.state, 'obs_a': args.obs_a, 'obs_b': args.obs_b},
    }, None


def run(options: Dict, seed: Optional[int] = None) -> List[BoundReport]:
    analyzer = PurityAnalyzer(options['epsilon'])
    if options['sweep_werner']:
        return [
            BoundReport(
                title=f'RS witness on Werner p={row["p"]:.6g}',
                lhs_name='Q',
                lhs_value=row['q'],
                rhs=[('epsilon', options['epsilon']), ('linear_entropy', row['linear_entropy'])],
                verdict=row['verdict'],
                metadata={'p': row['p'], 'observables': 'sx(x)sx, sy(x)sy'},
            )
            for row in analyzer.sweep_werner(options['sweep_werner'])
        ]

    result = analyzer.analyze(options['obs_a'], options['obs_b'], options['state'])
    return [BoundReport(
        title='RS purity witness',
        lhs_name='Q',
        lhs_value=result.q_value,
        rhs=[
            ('epsilon', result.epsilon),
            ('linear_entropy', result.linear_entropy),
            ('linear_entropy_raw', result.linear_entropy_raw),
        ],
        verdict=result.verdict.value,
        metadata={**options['labels'], 'dim': result.dim, **result.details,
                  'blind_band': analyzer.blind_band() if result.dim == 2 else None},
    )]
