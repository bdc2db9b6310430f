# -*- coding: utf-8 -*-
"""
Subcommand handlers
Each module exposes add_arguments(parser), _validate_options(args) and run(options, seed)
"""

import os

from uqlab._core.errors import ConfigError
from uqlab._core.linalg_core import DensityMatrix, Observable
from uqlab.palette import named_palette
from uqlab.utils.matrix_io import load_observable, load_state


def resolve_observable(value: str) -> Observable:
    """Observable from a matrix file or a palette name"""
    if os.path.isfile(value):
        return load_observable(value)
    obj = named_palette(value)
    if not isinstance(obj, Observable):
        raise ConfigError(f'{value!r} names a state, not an observable')
    return obj


def resolve_state(value: str) -> DensityMatrix:
    """State from a matrix file or a palette name"""
    if os.path.isfile(value):
        return load_state(value)
    obj = named_palette(value)
    if not isinstance(obj, DensityMatrix):
        raise ConfigError(f'{value!r} names an observable, not a state')
    return obj
