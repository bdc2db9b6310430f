# -*- coding: utf-8 -*-
"""
Matrix literal files
JSON object { "dim": d, "re": [[...]], "im": [[...]] } shared by every command
"""

from pathlib import Path
from typing import Dict, Union
import json
import logging

import numpy as np

from uqlab._core.errors import ConfigError, DimensionMismatchError
from uqlab._core.linalg_core import DensityMatrix, Observable

logger = logging.getLogger('uqlab')


def literal_to_matrix(literal: Dict) -> np.ndarray:
    """Complex matrix from a {dim, re, im} literal; 'im' may be omitted for real matrices"""
    try:
        dim = int(literal['dim'])
        re = np.asarray(literal['re'], dtype=float)
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigError(f'matrix literal needs integer "dim" and numeric "re": {e}')
    im = np.asarray(literal.get('im', np.zeros_like(re)), dtype=float)
    if re.shape != (dim, dim) or im.shape != (dim, dim):
        raise DimensionMismatchError(
            f'matrix literal declares dim {dim} but has re {re.shape} and im {im.shape}'
        )
    return re + 1j * im


def matrix_to_literal(matrix: Union[np.ndarray, DensityMatrix, Observable]) -> Dict:
    if isinstance(matrix, (DensityMatrix, Observable)):
        matrix = matrix.matrix
    arr = np.asarray(matrix, dtype=complex)
    return {
        'dim': int(arr.shape[0]),
        're': arr.real.tolist(),
        'im': arr.imag.tolist(),
    }


def _read_literal(path: Union[str, Path]) -> Dict:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except OSError as e:
        raise ConfigError(f'cannot read matrix file {path}: {e}')
    except json.JSONDecodeError as e:
        raise ConfigError(f'matrix file {path} is not valid JSON: {e}')


def load_state(path: Union[str, Path]) -> DensityMatrix:
    """Density matrix from a literal file, validated on load"""
    state = DensityMatrix(literal_to_matrix(_read_literal(path)))
    logger.debug('Loaded %dx%d state from %s', state.dim, state.dim, path)
    return state


def load_observable(path: Union[str, Path]) -> Observable:
    return Observable(literal_to_matrix(_read_literal(path)))


def dump_matrix(matrix, path: Union[str, Path]):
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(matrix_to_literal(matrix), f, indent=2)
