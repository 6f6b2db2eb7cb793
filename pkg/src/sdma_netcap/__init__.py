"""Closed-form and Monte Carlo performance analysis of ad hoc networks whose
transmitters serve several users by zero-forcing beamforming with quantized
channel feedback."""

from .core import (NetcapError, NetworkParams, NumericalError, QuantizationScheme,
                   ValidationError, quantization_delta, validate)

__all__ = ["NetcapError", "NetworkParams", "NumericalError", "QuantizationScheme",
           "ValidationError", "quantization_delta", "validate"]
__version__ = "0.1.0"
