# -*- coding: utf-8 -*-
"""
Exception hierarchy for uqlab
Every failure a calculation can report derives from UQLabError
"""


class UQLabError(Exception):
    """Base class for all uqlab computation errors"""


class DimensionMismatchError(UQLabError, ValueError):
    """Operands act on spaces of different dimension"""


class InvalidStateError(UQLabError, ValueError):
    """Matrix is not Hermitian, not unit-trace or not positive semidefinite"""


class InvalidObservableError(UQLabError, ValueError):
    """Matrix is not a valid observable for the requested use"""


class NormalizationError(UQLabError):
    """A probability vector or sampled density does not sum/integrate to one"""


class DegenerateSpectrumError(UQLabError):
    """Observable has repeated eigenvalues where a unique eigenbasis is required"""


class UnsupportedDimensionError(UQLabError):
    """Operation is only implemented for particular subsystem dimensions"""


class ConfigError(UQLabError):
    """Invalid run configuration or environment setting"""


class SingularMomentError(UQLabError):
    """A second moment used as a denominator vanishes"""
