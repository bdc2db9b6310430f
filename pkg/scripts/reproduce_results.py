#!/usr/bin/env python3
"""Headline numbers for all four analyses, printed as tables (or JSON with --json)"""
import argparse
import json
import logging
import math
import os
import sys

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from uqlab._core.games import (  # noqa: E402
    GameRule,
    GameSpec,
    biased_chsh_quantum_bound,
    box_discrimination_report,
    fine_grained_qubit_bound,
    game_value_classical_max,
    game_value_quantum_max,
)
from uqlab._core.linalg_core import (  # noqa: E402
    SIGMA_X,
    SIGMA_Z,
    Observable,
    random_density_matrix,
    random_unit_vector,
    spin_observable,
)
from uqlab._core.memory import (  # noqa: E402
    MeasurementPair,
    MemoryAnalyzer,
    berta_bound,
    coles_piani_bound,
    measured_conditional_entropies,
    pati_bound,
    shannon_lhs_fano,
    werner_state,
)
from uqlab._core.purity import PurityAnalyzer, planar_settings_grid  # noqa: E402
from uqlab._core.steering import LGModeSpec, entropic_steering, reid_criterion  # noqa: E402
from uqlab.utils.logger import setup_logging  # noqa: E402
from uqlab.utils.report import render_table  # noqa: E402

logger = logging.getLogger('uqlab')

SEED = 20240611
ENSEMBLE_STATES = 500
ENSEMBLE_PAIRS = 50
BIASED_POINTS = [(0.6, 0.9), (0.55, 0.6), (0.8, 0.35), (0.5, 0.5)]


def purity_section():
    analyzer = PurityAnalyzer()
    rows = [(r['p'], r['q'], r['linear_entropy'], r['verdict']) for r in analyzer.sweep_werner(6)]
    band = analyzer.blind_band()
    return {
        'werner_sweep': rows,
        'blind_band': band,
        'planar_grid_fraction_singlet': planar_settings_grid(werner_state(1.0)),
    }


def steering_section():
    rows = []
    for n, m in ((0, 0), (1, 0), (0, 1)):
        spec = LGModeSpec(n, m)
        ent = entropic_steering(spec)
        reid = reid_criterion(spec)
        rows.append((f'LG({n},{m})', ent.lhs, ent.bound, ent.violated, reid.product, reid.epr_flag))
    return rows


def games_section():
    rows = []
    for p, q in BIASED_POINTS:
        spec = GameSpec(GameRule.CHSH, (p, q))
        bound = biased_chsh_quantum_bound(p, q)
        rows.append((p, q, game_value_classical_max(spec).value,
                     game_value_quantum_max(spec).value, bound['value'], bound['region']))
    boxes = [(r.rule.value, r.classical, r.quantum, r.nosignaling, r.gap)
             for r in box_discrimination_report()]
    return {'biased_chsh': rows, 'boxes': boxes, 'fine_grained_qubit': fine_grained_qubit_bound()}


def memory_section():
    pair = MeasurementPair(Observable(SIGMA_Z), Observable(SIGMA_X))
    analyzer = MemoryAnalyzer()
    werner_rows = []
    for p in (0.2, 0.5, 0.72, 0.9):
        r = analyzer.report(werner_state(p), pair)
        werner_rows.append((p, r.lhs, r.bounds['berta'], r.bounds['pati'], r.bounds['fine_grained'],
                            r.key_rate_berta, r.fine_grained_exceeds_berta))

    # random ensemble: lhs >= Berta, Berta <= Coles-Piani <= Pati and H(p_d^R) + H(p_d^S) >= lhs
    rng = np.random.default_rng(SEED)
    worst = {'lhs_minus_berta': math.inf, 'coles_minus_berta': math.inf,
             'pati_minus_coles': math.inf, 'shannon_minus_lhs': math.inf}
    for _ in range(ENSEMBLE_STATES):
        rho = random_density_matrix(4, rng)
        for j in range(ENSEMBLE_PAIRS):
            pr = MeasurementPair(spin_observable(random_unit_vector(rng)),
                                 spin_observable(random_unit_vector(rng)))
            lhs = sum(measured_conditional_entropies(rho, pr))
            berta, coles = berta_bound(rho, pr), coles_piani_bound(rho, pr)
            worst['lhs_minus_berta'] = min(worst['lhs_minus_berta'], lhs - berta)
            worst['coles_minus_berta'] = min(worst['coles_minus_berta'], coles - berta)
            worst['shannon_minus_lhs'] = min(worst['shannon_minus_lhs'], shannon_lhs_fano(rho, pr) - lhs)
            # the discord scan dominates the cost, so Pati runs on the first pair of each state
            if j == 0:
                worst['pati_minus_coles'] = min(worst['pati_minus_coles'], pati_bound(rho, pr) - coles)
    return {'werner': werner_rows, 'ensemble_worst_margins': worst}


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument('--json', action='store_true', help='print one JSON document')
    parser.add_argument('--skip-ensemble', action='store_true', help='skip the random-state ensemble')
    args = parser.parse_args()
    setup_logging()

    if args.skip_ensemble:
        global ENSEMBLE_STATES
        ENSEMBLE_STATES = 0

    results = {
        'purity': purity_section(),
        'steering': steering_section(),
        'games': games_section(),
        'memory': memory_section(),
    }
    if args.json:
        print(json.dumps(results, indent=2, default=str))
        return

    print('Werner sweep (sx(x)sx, sy(x)sy)')
    print(render_table(results['purity']['werner_sweep'], ('p', 'Q', 'S_l', 'verdict')))
    print(f"blind band: {results['purity']['blind_band']}")
    print(f"singlet planar grid fraction: {results['purity']['planar_grid_fraction_singlet']:.6f}\n")

    print('Steering')
    print(render_table(results['steering'],
                       ('mode', 'h(X|P_Y)+h(P_X|Y)', 'ln(pi e)', 'entropic', 'Reid product', 'Reid EPR')))
    print()

    print('Biased CHSH')
    print(render_table(results['games']['biased_chsh'],
                       ('p', 'q', 'classical', 'quantum', 'analytic', 'region')))
    print('Tripartite boxes')
    print(render_table(results['games']['boxes'], ('rule', 'classical', 'quantum', 'no-signaling', 'gap')))
    print(f"single-qubit fine-grained bound: {results['games']['fine_grained_qubit']:.6f}\n")

    print('Werner memory bounds (R = sz, S = sx)')
    print(render_table(results['memory']['werner'],
                       ('p', 'lhs', 'berta', 'pati', 'fine-grained', 'key rate', 'fg > berta')))
    print(f"ensemble worst margins: {results['memory']['ensemble_worst_margins']}")


if __name__ == '__main__':
    main()
