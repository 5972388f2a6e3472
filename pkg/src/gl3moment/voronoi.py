"""GL(3) Voronoi summation: gamma kernels, the transforms Omega_+-, and a two-sided harness.

Two kernels are provided.

* ``gamma_pm`` is the gamma quotient exactly as typeset in the statement
  being checked (no pi powers, no factor 1/2, argument s).
* ``VoronoiKernel`` is the kernel derived from the functional equations of
  Pi and of its odd twist: with L_inf(s) = prod Gamma_R(s + mu_j),

      G_+(s) + G_-(s) = eps_even * L_inf(1 + s, dual) / L_inf(-s)
      G_+(s) - G_-(s) = eps_odd  * L_inf^odd(1 + s, dual) / L_inf^odd(-s)

  where Gamma_R(s) = pi^{-s/2} Gamma(s/2).  For a spherical form these are
  the usual pi^{-3s-3/2}/2 [prod ... -+ i prod ...] kernels.

The identity is then

    sum_n A(m,n) e(n abar/c) phi(n/x)
      = c sum_+- sum_{n1 | cm} sum_{n2 > 0} A(n2, n1)/(n1 n2) S(am, +-n2; cm/n1) Omega_+-(n2 n1^2 x/(c^3 m))

with Omega_+-(y) = (1/2 pi i) int_{(sigma)} y^{-s} G_+-(s) phi~(-s) ds.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from .analytic import ContourOnPole, LanglandsParams, log_gamma
from .arith import divisors, inv_mod
from .coeffs import GL3Coeffs, InsufficientTable
from .exp_sums import kloosterman_classical
from .kuznetsov import BudgetExceeded, bump

__all__ = [
    "BumpPhi",
    "VoronoiKernel",
    "VoronoiInstance",
    "VoronoiResult",
    "gamma_pm",
    "mellin_of_phi",
    "omega_pm",
    "sym2_kernel",
    "spherical_kernel",
    "voronoi_lhs",
    "voronoi_two_sides",
    "convergence_table",
]


# --------------------------------------------------------------------------
# test functions and their Mellin transforms


@dataclass(frozen=True)
class BumpPhi:
    """phi(t) = bump on [a, b] (peak 1), optionally rescaled as phi(t / scale)."""

    a: float = 0.5
    b: float = 2.5
    scale: float = 1.0
    amplitude: float = 1.0

    def __call__(self, t) -> np.ndarray:
        return self.amplitude * bump(np.asarray(t, dtype=float) / self.scale, self.a, self.b)

    @property
    def support(self) -> tuple[float, float]:
        return self.a * self.scale, self.b * self.scale

    def rescaled(self, lam: float) -> "BumpPhi":
        return BumpPhi(self.a, self.b, self.scale * lam, self.amplitude)


def mellin_of_phi(phi: BumpPhi, s, nodes: int = 2048) -> np.ndarray | complex:
    """int phi(t) t^{s-1} dt, computed as int phi(e^w) e^{ws} dw by the trapezoid rule.

    phi(e^w) is smooth with compact support, so the rule is spectrally
    accurate while nodes resolve the oscillation (|Im s| * width / nodes < ~1).
    """
    arr = np.asarray(s, dtype=np.complex128)
    scalar = arr.ndim == 0
    sv = np.atleast_1d(arr)
    lo, hi = phi.support
    if lo <= 0:
        raise ValueError("support must lie in (0, inf)")
    w, h = np.linspace(math.log(lo), math.log(hi), nodes + 1, retstep=True)
    f = phi(np.exp(w))
    out = np.empty(len(sv), dtype=np.complex128)
    for i0 in range(0, len(sv), 1024):
        blk = sv[i0 : i0 + 1024]
        out[i0 : i0 + 1024] = np.exp(np.outer(blk, w)) @ f
    out *= h
    return complex(out[0]) if scalar else out


# --------------------------------------------------------------------------
# kernels


def gamma_pm(s, alpha, sign: int) -> np.ndarray | complex:
    """The typeset quotient Gamma((s+a)/2)... / Gamma((1-s-a)/2)... -+ i Gamma((1+s+a)/2)... / Gamma((2-s-a)/2)...

    sign=+1 selects the '-i' combination (gamma_+), sign=-1 the '+i' one.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    arr = np.asarray(s, dtype=np.complex128)
    scalar = arr.ndim == 0
    sv = np.atleast_1d(arr)
    al = np.asarray(alpha, dtype=np.complex128)
    t1 = sum(log_gamma((sv + a) / 2) - log_gamma((1 - sv - a) / 2) for a in al)
    t2 = sum(log_gamma((1 + sv + a) / 2) - log_gamma((2 - sv - a) / 2) for a in al)
    out = np.exp(t1) - sign * 1j * np.exp(t2)
    return complex(out[0]) if scalar else out


def _log_gamma_r(s: np.ndarray) -> np.ndarray:
    return -0.5 * s * math.log(math.pi) + log_gamma(s / 2)


@dataclass(frozen=True)
class VoronoiKernel:
    """Gamma_R shifts of Pi (mu_even) and of its odd twist (mu_odd), with archimedean root numbers."""

    mu_even: tuple[complex, ...]
    mu_odd: tuple[complex, ...]
    eps_even: complex = 1.0
    eps_odd: complex = -1j
    name: str = ""

    def _ratio(self, s: np.ndarray, mu) -> np.ndarray:
        # L_inf(1 + s, dual) / L_inf(-s); the dual shifts are the conjugates
        out = np.zeros_like(s)
        for m in mu:
            out += _log_gamma_r(1 + s + np.conj(m)) - _log_gamma_r(-s + m)
        return out

    def even(self, s) -> np.ndarray:
        s = np.atleast_1d(np.asarray(s, dtype=np.complex128))
        return self.eps_even * np.exp(self._ratio(s, self.mu_even))

    def odd(self, s) -> np.ndarray:
        s = np.atleast_1d(np.asarray(s, dtype=np.complex128))
        return self.eps_odd * np.exp(self._ratio(s, self.mu_odd))

    def G(self, s, sign: int) -> np.ndarray:
        """G_+ (sign=+1) or G_- (sign=-1)."""
        return 0.5 * (self.even(s) + sign * self.odd(s))

    def pole_abscissa(self) -> float:
        """Largest real part of a pole of either numerator; contours must stay right of it."""
        return max(-1.0 - float(np.real(m)) for m in (*self.mu_even, *self.mu_odd))

    def with_odd_phase(self, kappa: complex) -> "VoronoiKernel":
        return VoronoiKernel(self.mu_even, self.mu_odd, self.eps_even, kappa, self.name)


def sym2_kernel(k: int = 12) -> VoronoiKernel:
    """Symmetric square of a weight-k form: Gamma_R(s+1) Gamma_C(s+k-1), odd twist Gamma_R(s) Gamma_C(s+k-1).

    Root numbers: i^{2k} for the form, i^{2k-1} for the odd twist (the
    Gamma_R(s+1) factor carries i, the Gamma_C(s+k-1) factor i^{2k-1}).
    """
    return VoronoiKernel(
        mu_even=(1.0, k - 1.0, float(k)),
        mu_odd=(0.0, k - 1.0, float(k)),
        eps_even=1j ** (2 * k),
        eps_odd=1j ** (2 * k - 1),
        name=f"sym2(k={k})",
    )


def spherical_kernel(alpha) -> VoronoiKernel:
    """Spherical Maass form with Voronoi parameters alpha: shifts -alpha_j, odd twist 1 - alpha_j."""
    al = tuple(complex(a) for a in alpha)
    return VoronoiKernel(tuple(-a for a in al), tuple(1 - a for a in al), 1.0, -1j, "spherical")


def kernel_for(Pi: GL3Coeffs, k: int | None = None) -> VoronoiKernel:
    if k is not None:
        return sym2_kernel(k)
    return spherical_kernel(Pi.langlands.alpha)


# --------------------------------------------------------------------------
# Omega transforms


@dataclass(frozen=True)
class OmegaContour:
    sigma: float = -0.5
    height: float | None = None  # None: from the decay of phi~
    step: float | None = None  # None: from the bandwidth


def _phi_height(phi: BumpPhi, sigma: float, rel: float = 1e-12) -> float:
    # the transform reaches the rounding floor (~1e-16) near |t| = 3000 for the default bump
    t = np.concatenate([np.linspace(0, 200, 201), np.geomspace(210, 20000, 400)])
    vals = np.abs(mellin_of_phi(phi, -sigma + 1j * t, nodes=16384))
    peak = vals.max()
    above = np.nonzero(vals > rel * peak)[0]
    idx = above[-1]
    if idx >= len(t) - 1:
        raise BudgetExceeded("Mellin transform of phi does not decay on the scanned range")
    return float(t[idx + 1])


def omega_pm(
    y,
    phi: BumpPhi,
    kernel: VoronoiKernel,
    sign: int,
    contour: OmegaContour = OmegaContour(),
) -> np.ndarray:
    """Omega_+-(y) = (1/2 pi i) int_{(sigma)} y^{-s} G_+-(s) phi~(-s) ds, vectorized over y."""
    return _omega(y, phi, lambda s: kernel.G(s, sign), contour, kernel.pole_abscissa())


def omega_parts(y, phi: BumpPhi, kernel: VoronoiKernel, contour: OmegaContour = OmegaContour()):
    """(Omega_+ + Omega_-, Omega_+ - Omega_-), which pair with the even and odd parts of S(am, +-n2)."""
    pa = kernel.pole_abscissa()
    return (
        _omega(y, phi, kernel.even, contour, pa),
        _omega(y, phi, kernel.odd, contour, pa),
    )


@lru_cache(maxsize=16)
def _phi_tilde_line(phi: BumpPhi, sigma: float, H: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes s = sigma + it on [-H, H] and phi~(-s) there."""
    lo, hi = phi.support
    t = np.linspace(-H, H, n)
    s = sigma + 1j * t
    return s, mellin_of_phi(phi, -s, nodes=max(4096, int(H * math.log(hi / lo))))


def _omega(y, phi: BumpPhi, G: Callable, contour: OmegaContour, pole: float) -> np.ndarray:
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if np.any(y <= 0):
        raise ValueError("y must be positive")
    sigma = contour.sigma
    if sigma <= pole + 1e-9:
        raise ContourOnPole(f"abscissa {sigma} not right of the kernel poles at Re s = {pole}")
    ly = np.log(y)
    H = contour.height or _phi_height_cached(phi, sigma)
    lo, hi = phi.support
    # bandwidth in t: log y, the log-support of phi and the phase growth of G (~3 log t)
    band = float(np.abs(ly).max()) + max(abs(math.log(lo)), abs(math.log(hi))) + 3 * math.log(H + 10) + 10
    h = contour.step or math.pi / band
    # round the node count up to a multiple of 1024 so nearby calls share the cached transform
    n = 1024 * (int(2 * H / h) // 1024 + 1) + 1
    s, pt = _phi_tilde_line(phi, sigma, H, n)
    h = 2 * H / (n - 1)
    w = G(s) * pt
    w[0] *= 0.5
    w[-1] *= 0.5
    out = np.empty(len(y), dtype=np.complex128)
    for i0 in range(0, len(y), 128):
        blk = ly[i0 : i0 + 128]
        out[i0 : i0 + 128] = np.exp(-np.outer(blk, s)) @ w
    return out * h / (2 * math.pi)


@lru_cache(maxsize=16)
def _phi_height_cached(phi: BumpPhi, sigma: float) -> float:
    return _phi_height(phi, sigma)


# --------------------------------------------------------------------------
# two-sided identity


@dataclass(frozen=True)
class VoronoiInstance:
    coeffs: GL3Coeffs
    a: int = 1
    c: int = 2
    m: int = 1
    x: float = 20.0
    phi: BumpPhi = field(default_factory=BumpPhi)
    kernel: VoronoiKernel = field(default_factory=sym2_kernel)

    def __post_init__(self):
        if self.c == 0:
            raise ValueError("c must be nonzero")
        if math.gcd(self.a, self.c) != 1:
            raise ValueError("a and c must be coprime")
        lo, hi = self.phi.support
        if lo < 0.5 - 1e-12 or hi > 2.5 + 1e-12:
            raise ValueError("phi must be supported in [1/2, 5/2]")


@dataclass(frozen=True)
class VoronoiResult:
    lhs: complex
    rhs: complex
    residual: float
    tail: float
    cutoff: int


def voronoi_lhs(inst: VoronoiInstance) -> complex:
    lo, hi = inst.phi.support
    n = np.arange(max(1, math.ceil(lo * inst.x)), math.floor(hi * inst.x) + 1)
    if len(n) == 0:
        return 0j
    if n[-1] > inst.coeffs.n_max:
        raise InsufficientTable("coefficient table too short for the left side")
    abar = inv_mod(inst.a, abs(inst.c)).value
    A = np.array([inst.coeffs.A(inst.m, int(k)) for k in n])
    ph = np.exp(2j * math.pi * ((n * abar) % abs(inst.c)) / abs(inst.c))
    return complex(np.sum(A * ph * inst.phi(n / inst.x)))


def _rhs_terms(inst: VoronoiInstance, cutoff: int, contour: OmegaContour) -> np.ndarray:
    """Dual terms indexed by n2 = 1..cutoff (summed over n1 and the two signs)."""
    c, m, a = abs(inst.c), inst.m, inst.a
    if cutoff > inst.coeffs.n_max:
        raise InsufficientTable("coefficient table too short for the dual cutoff")
    n2 = np.arange(1, cutoff + 1)
    out = np.zeros(cutoff, dtype=np.complex128)
    for n1 in divisors(c * m):
        if n1 > inst.coeffs.n_max:
            raise InsufficientTable("coefficient table too short for n1")
        k = c * m // n1
        y = n2 * (n1 * n1 * inst.x / (c**3 * m))
        om_even, om_odd = omega_parts(y, inst.phi, inst.kernel, contour)
        sp = np.array([kloosterman_classical(a * m, int(v), k).real for v in n2])
        sm = np.array([kloosterman_classical(a * m, -int(v), k).real for v in n2])
        # A(n2, n1) is the dual coefficient conj A(n1, n2)
        A = np.array([np.conj(inst.coeffs.A(n1, int(v))) for v in n2])
        out += A / (n1 * n2) * (0.5 * (sp + sm) * om_even + 0.5 * (sp - sm) * om_odd)
    return c * out


def voronoi_two_sides(
    inst: VoronoiInstance, cutoff: int = 10_000, contour: OmegaContour = OmegaContour(), block: int | None = None
) -> VoronoiResult:
    """Both sides, residual |lhs - rhs| / (1 + |lhs|), and a tail estimate from the last block."""
    lhs = voronoi_lhs(inst)
    if inst.phi.amplitude == 0:
        return VoronoiResult(0j, 0j, 0.0, 0.0, cutoff)
    terms = _rhs_terms(inst, cutoff, contour)
    rhs = complex(terms.sum())
    block = block or max(1, cutoff // 8)
    tail = float(abs(terms[-block:].sum()))
    return VoronoiResult(lhs, rhs, abs(lhs - rhs) / (1 + abs(lhs)), tail, cutoff)


def convergence_table(
    inst: VoronoiInstance, cutoffs=(1250, 2500, 5000, 10_000), contour: OmegaContour = OmegaContour()
) -> list[VoronoiResult]:
    """Residuals for a doubling sequence of dual cutoffs (one dual evaluation at the largest)."""
    top = max(cutoffs)
    lhs = voronoi_lhs(inst)
    terms = _rhs_terms(inst, top, contour)
    out = []
    for N in sorted(cutoffs):
        rhs = complex(terms[:N].sum())
        blk = max(1, N // 8)
        out.append(VoronoiResult(lhs, rhs, abs(lhs - rhs) / (1 + abs(lhs)), float(abs(terms[N - blk : N].sum())), N))
    return out
