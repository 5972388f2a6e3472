"""GL(3) moment toolkit: exponential sums, weights, kernels and desk-scale moment checks."""

__version__ = "0.1.0"
