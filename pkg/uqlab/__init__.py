# -*- coding: utf-8 -*-
"""
uqlab
Purity witnessing, continuous-variable steering, nonlocal games and
entropic uncertainty with quantum memory
"""

from uqlab._core.errors import UQLabError
from uqlab._core.linalg_core import BlochVector, DensityMatrix, Observable
from uqlab.cli import RunConfig, parse_config
from uqlab.palette import named_palette
from uqlab.utils.report import BoundReport, emit_report

__version__ = '1.0.0'

__all__ = [
    'BlochVector', 'BoundReport', 'DensityMatrix', 'Observable', 'RunConfig', 'UQLabError',
    'emit_report', 'named_palette', 'parse_config',
]
