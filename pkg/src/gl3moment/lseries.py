"""Smoothed Dirichlet series for entire L-functions.

sum_n b(n) n^{-s} exp(-(n/X)^2) = L(s) + (1/2 pi i) int_{(-a)} L(s+w) Gamma(w/2)/2 X^w dw,
so for an entire L the smoothed sum converges to L(s) for any fixed s as X
grows past the square root of the analytic conductor, also inside the
critical strip.  Terms beyond 6X are below exp(-36) relative and dropped.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coeffs import GL2Form, GL3Coeffs, InsufficientTable, rankin_selberg_coeffs_satake

__all__ = ["NotConverged", "DirichletSeries", "gl2_series", "rankin_selberg_series"]

CUT = 6.0


class NotConverged(RuntimeError):
    pass


@dataclass(frozen=True)
class DirichletSeries:
    b: np.ndarray  # b[0] unused
    name: str = ""

    @property
    def n_max(self) -> int:
        return len(self.b) - 1

    def smoothed(self, s, X: float) -> np.ndarray | complex:
        """sum_{n <= 6X} b(n) n^{-s} exp(-(n/X)^2), vectorized over s."""
        N = int(CUT * X)
        if N > self.n_max:
            raise InsufficientTable(f"smoothing scale {X} needs {N} coefficients, have {self.n_max}")
        arr = np.asarray(s, dtype=np.complex128)
        scalar = arr.ndim == 0
        sv = np.atleast_1d(arr).ravel()
        n = np.arange(1, N + 1, dtype=float)
        w = self.b[1 : N + 1] * np.exp(-((n / X) ** 2))
        keep = w != 0
        ln = np.log(n[keep])
        w = w[keep]
        out = np.empty(len(sv), dtype=np.complex128)
        for i0 in range(0, len(sv), 64):
            out[i0 : i0 + 64] = np.exp(-np.outer(sv[i0 : i0 + 64], ln)) @ w
        return complex(out[0]) if scalar else out.reshape(arr.shape)

    def value(self, s: complex, scales=(1e3, 1e4), tol: float = 1e-3) -> complex:
        """L(s) from the larger scale, after checking both scales agree to tol (relative)."""
        vals = [complex(self.smoothed(s, X)) for X in scales]
        ref = vals[-1]
        spread = max(abs(v - ref) for v in vals)
        if spread > tol * max(abs(ref), 1e-300):
            raise NotConverged(f"smoothed values {vals} differ by {spread:.2e}")
        return ref


def gl2_series(g: GL2Form, n_max: int | None = None) -> DirichletSeries:
    n_max = n_max or g.n_max
    if n_max > g.n_max:
        raise InsufficientTable("GL(2) table too short")
    return DirichletSeries(np.asarray(g.lam[: n_max + 1], dtype=float), f"L({g.name})")


def rankin_selberg_series(g: GL2Form, Pi: GL3Coeffs, n_max: int) -> DirichletSeries:
    return DirichletSeries(rankin_selberg_coeffs_satake(g, Pi, n_max), f"L({g.name} x {Pi.name})")


def smoothing_error_scale(X: float) -> float:
    return math.exp(-(CUT**2))
