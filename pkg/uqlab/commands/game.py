# -*- coding: utf-8 -*-
"""
game subcommand: classical, quantum and no-signaling values of retrieval games
"""

from typing import Dict, List, Optional, Tuple
import argparse

import numpy as np

from uqlab._core.games import (
    DEFAULT_STARTS,
    GAP_TOL,
    DeterministicStrategy,
    GameRule,
    GameSpec,
    GameValueReport,
    Theory,
    game_value_classical_max,
    game_value_nosignaling_max,
    game_value_quantum_max,
    simulate_referee,
)
from uqlab.utils.report import BoundReport

THEORIES = ('classical', 'quantum', 'nosignaling', 'all')
MC_SIGMAS = 3.0


def add_arguments(parser: argparse.ArgumentParser):
    parser.add_argument('--rule', choices=[r.value for r in GameRule], required=True)
    parser.add_argument('--bias', help='probability of input 0 per party: p[,q[,r]]')
    parser.add_argument('--theory', choices=THEORIES, default='all')
    parser.add_argument('--mc-rounds', type=int, default=0,
                        help='referee rounds for the classical Monte-Carlo check (0 disables)')
    parser.add_argument('--starts', type=int, default=DEFAULT_STARTS,
                        help='optimizer starting points for the quantum maximum')


def _parse_bias(text: Optional[str], arity: int) -> Tuple[Optional[Tuple[float, ...]], Optional[str]]:
    if text is None:
        return (0.5,) * arity, None
    try:
        values = tuple(float(part) for part in text.split(','))
    except ValueError:
        return None, f'--bias must be comma-separated numbers (got {text!r})'
    if len(values) == 1:
        values = values * arity
    if len(values) != arity:
        return None, f'--bias needs 1 or {arity} values for this rule (got {len(values)})'
    if any(not 0.0 <= v <= 1.0 for v in values):
        return None, f'--bias values must lie in [0, 1] (got {text})'
    return values, None


def _validate_options(args) -> Tuple[Optional[Dict], Optional[str]]:
    """Validate game options, returns (cleaned_options, error_message)"""
    rule = GameRule(args.rule)
    bias, error = _parse_bias(args.bias, rule.arity)
    if error:
        return None, error
    if args.mc_rounds < 0:
        return None, f'--mc-rounds must be nonnegative (got {args.mc_rounds})'
    if args.starts < 1:
        return None, f'--starts must be at least 1 (got {args.starts})'
    return {
        'spec': GameSpec(rule, bias),
        'theory': args.theory,
        'mc_rounds': args.mc_rounds,
        'starts': args.starts,
    }, None


def _monte_carlo(spec: GameSpec, classical: GameValueReport, rounds: int, seed: Optional[int]) -> Dict:
    table = DeterministicStrategy(tuple(tuple(row) for row in classical.argmax_strategy.values()))
    rng = np.random.default_rng(seed)
    freq, stderr = simulate_referee(spec, table, rounds, rng)
    return {
        'mc_rounds': rounds,
        'mc_frequency': freq,
        'mc_stderr': stderr,
        'mc_consistent': abs(freq - classical.value) <= MC_SIGMAS * stderr,
    }


def run(options: Dict, seed: Optional[int] = None) -> List[BoundReport]:
    spec, theory = options['spec'], options['theory']
    seed = 0 if seed is None else seed
    values: Dict[str, GameValueReport] = {}

    if theory in ('classical', 'all') or options['mc_rounds']:
        values['classical'] = game_value_classical_max(spec)
    if theory in ('quantum', 'all'):
        values['quantum'] = game_value_quantum_max(spec, n_starts=options['starts'], seed=seed)
    if theory in ('nosignaling', 'all'):
        values['no-signaling'] = game_value_nosignaling_max(spec)

    metadata = {'rule': spec.rule.value, 'bias': list(spec.bias), 'seed': seed}
    for name, report in values.items():
        metadata[f'{name}_strategy'] = report.argmax_strategy
        metadata.update({f'{name}_{k}': v for k, v in report.metadata.items()})
    if options['mc_rounds']:
        metadata.update(_monte_carlo(spec, values['classical'], options['mc_rounds'], seed))

    if theory == 'all':
        classical, quantum = values['classical'].value, values['quantum'].value
        lhs_name, lhs_value = 'quantum', quantum
        verdict = 'quantum advantage' if quantum - classical > GAP_TOL else 'no quantum advantage'
    else:
        key = 'no-signaling' if theory == 'nosignaling' else theory
        lhs_name, lhs_value = key, values[key].value
        verdict = Theory(key).value + ' maximum'
    return [BoundReport(
        title=f'{spec.rule.value} game',
        lhs_name=lhs_name,
        lhs_value=lhs_value,
        rhs=[(name, report.value) for name, report in values.items()
             if theory == 'all' or name == lhs_name],
        verdict=verdict,
        metadata=metadata,
    )]
