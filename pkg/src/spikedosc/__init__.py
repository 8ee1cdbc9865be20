"""Closed-form sums for the first-order correction of the generalized spiked harmonic oscillator."""

from .errors import (
    DivergenceError,
    DomainError,
    NonConvergenceError,
    PoleError,
    RangeError,
    SpikedOscError,
)
from .hyperfun import EvalConfig, PfqParams, SeriesEstimate, digamma, kummer_terminating, pfq
from .oscillator import OscillatorModel, first_order_correction, matrix_element_x_alpha
from .sums import QuadConfig, SumQuery, closed_sum, contour_sum, partial_sum

__version__ = "0.1.0"
