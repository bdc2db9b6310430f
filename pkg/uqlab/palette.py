# -*- coding: utf-8 -*-
"""
Named observables and states
sx, sy, sz, the Gell-Mann set gm1..gm8, singlet, ghz and mixed:<d>
"""

from typing import Dict, Union
import json
import logging
import os

import numpy as np

from uqlab._core.errors import ConfigError
from uqlab._core.linalg_core import PAULIS, DensityMatrix, Observable, maximally_mixed, pure_state
from uqlab._core.purity import gell_mann_matrices
from uqlab.utils.matrix_io import literal_to_matrix

logger = logging.getLogger('uqlab')


class Palette:
    """
    Canonical objects addressable by name from the command line
    """

    def __init__(self):
        self.data = self._load_palette()
        self.observables = {name: Observable(literal_to_matrix(lit))
                            for name, lit in self.data['observables'].items()}
        self.states = {name: pure_state(entry['ket'])
                       for name, entry in self.data['states'].items()}

    def _load_palette(self) -> Dict:
        """Load palette literals from JSON file"""
        palette_path = os.path.join(os.path.dirname(__file__), 'data', 'palette.json')
        try:
            with open(palette_path, 'r', encoding='utf-8') as f:
                return json.load(f)
        except FileNotFoundError:
            logger.warning('palette.json not found, using built-in palette')
            return self._get_default_palette()

    def _get_default_palette(self) -> Dict:
        def literal(m: np.ndarray) -> Dict:
            return {'dim': m.shape[0], 're': m.real.tolist(), 'im': m.imag.tolist()}

        observables = {name: literal(m) for name, m in zip(('sx', 'sy', 'sz'), PAULIS)}
        observables.update({f'gm{k + 1}': literal(m) for k, m in enumerate(gell_mann_matrices())})
        return {
            'observables': observables,
            'states': {
                'singlet': {'ket': [0, 1, -1, 0]},
                'ghz': {'ket': [1, 0, 0, 0, 0, 0, 0, 1]},
            },
        }

    def names(self):
        return sorted(self.observables) + sorted(self.states) + ['mixed:<d>']

    def get(self, name: str) -> Union[Observable, DensityMatrix]:
        key = name.strip().lower()
        if key in self.observables:
            return self.observables[key]
        if key in self.states:
            return self.states[key]
        if key.startswith('mixed:'):
            try:
                dim = int(key.split(':', 1)[1])
            except ValueError:
                raise ConfigError(f'mixed state needs an integer dimension, got {name!r}')
            if dim < 1:
                raise ConfigError(f'mixed state dimension must be positive, got {dim}')
            return maximally_mixed(dim)
        raise ConfigError(f'unknown palette name {name!r}; known: {", ".join(self.names())}')


_palette = None


def named_palette(name: str) -> Union[Observable, DensityMatrix]:
    """Canonical observable or state for a palette name"""
    global _palette
    if _palette is None:
        _palette = Palette()
    return _palette.get(name)
