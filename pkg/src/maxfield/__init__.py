"""Exact simulation of max-stable moving-maxima fields on rectangles."""
from ._backend import BACKEND
from .errors import (BudgetExhausted, ConfigError, EmptyInput, MaxFieldError,
                     NonFiniteConstant, QuadratureFailure, RegularityViolation)
from .geometry import RectDomain
from .rng import RngStream, derive_seed, derive_stream
from .shapes import GaussianShape, IndicatorShape, ProfileShape, SpectralModel
from .simulators import (Realization, StoppingVariant, run_replications,
                         simulate_normalized, simulate_schlather, simulate_transformed)
from .weights import Custom, GStar, UniformWindow, esssup_bound

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "BudgetExhausted", "ConfigError", "Custom", "EmptyInput", "GStar",
    "GaussianShape", "IndicatorShape", "MaxFieldError", "NonFiniteConstant",
    "ProfileShape", "QuadratureFailure", "Realization", "RectDomain",
    "RegularityViolation", "RngStream", "SpectralModel", "StoppingVariant",
    "UniformWindow", "derive_seed", "derive_stream", "esssup_bound",
    "run_replications", "simulate_normalized", "simulate_schlather",
    "simulate_transformed",
]
