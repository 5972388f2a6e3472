"""Gamma machinery, mollifiers, gamma factors and Mellin-Barnes weight functions.

The four weights are

    V(y)  = (1/2 pi i) int y^{-u} G1(u) gamma_gF(s+u) / gamma_gF(s) du/u
    Vt(y) = (1/2 pi i) int y^{-u} G1(u) gamma~_gF(1-s+u) / gamma_gF(s) du/u
    W(y), Wt(y)  likewise with G2 and the degree-9 factor gamma_PiF,

where gamma~ uses the dual (negated) archimedean parameters.  They are
evaluated by the trapezoid rule on a vertical line, which is spectrally
accurate here because the integrands are analytic in a strip and the
mollifiers decay super-exponentially.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

__all__ = [
    "PoleAt",
    "OutsideStrip",
    "ContourOnPole",
    "LanglandsParams",
    "ContourSpec",
    "WeightParams",
    "log_gamma",
    "gamma",
    "log_mollifier",
    "mollifier",
    "gamma_factor_gF",
    "gamma_factor_PiF",
    "log_gamma_ratio_gF",
    "log_gamma_ratio_PiF",
    "weight_V",
    "weight_Vtilde",
    "weight_W",
    "weight_Wtilde",
    "plateau_value",
    "mellin_barnes",
    "default_langlands",
]


class PoleAt(ValueError):
    pass


class OutsideStrip(ValueError):
    pass


class ContourOnPole(ValueError):
    pass


# --------------------------------------------------------------------------
# log-gamma

# Stirling series coefficients B_{2k} / (2k (2k-1)), k = 1..10
_STIRLING = np.array(
    [
        1 / 12,
        -1 / 360,
        1 / 1260,
        -1 / 1680,
        1 / 1188,
        -691 / 360360,
        1 / 156,
        -3617 / 122400,
        43867 / 244188,
        -174611 / 125400,
    ]
)
_HALF_LOG_2PI = 0.5 * math.log(2 * math.pi)
_SHIFT = 16.0


def _loggamma_right(z: np.ndarray) -> np.ndarray:
    # recurrence up to |z| large enough for the Stirling tail, then Stirling
    out = np.zeros_like(z)
    need = np.maximum(np.ceil(_SHIFT - z.real), 0).astype(int)
    need[np.abs(z) >= _SHIFT] = 0
    zz = z.copy()
    kmax = int(need.max()) if need.size else 0
    for k in range(kmax):
        m = need > k
        out[m] -= np.log(zz[m])
        zz[m] += 1.0
    inv = 1.0 / zz
    inv2 = inv * inv
    series = np.zeros_like(zz)
    for c in _STIRLING[::-1]:
        series = series * inv2 + c
    return out + (zz - 0.5) * np.log(zz) - zz + _HALF_LOG_2PI + series * inv


def _log_sin_pi(z: np.ndarray) -> np.ndarray:
    # log sin(pi z) without overflow for large |Im z|
    up = z.imag >= 0
    w = np.where(up, z, np.conj(z))
    # sin(pi w) = e^{-i pi w} (e^{2 i pi w} - 1) / (2i), |e^{2 i pi w}| <= 1
    val = -1j * np.pi * w + np.log((np.exp(2j * np.pi * w) - 1.0) / 2j)
    return np.where(up, val, np.conj(val))


def log_gamma(z) -> np.ndarray | complex:
    """log Gamma(z) for complex z (array or scalar).

    exp(log_gamma(z)) equals Gamma(z); the imaginary part follows the
    continuous branch for Re z >= 1/2 and the reflection formula below.
    """
    arr = np.asarray(z, dtype=np.complex128)
    scalar = arr.ndim == 0
    a = np.atleast_1d(arr).copy()
    near = (a.real <= 0.5) & (np.abs(a - np.round(a.real)) < 1e-12) & (np.round(a.real) <= 0)
    if np.any(near):
        raise PoleAt(f"Gamma has a pole at {a[near][0]}")
    out = np.empty_like(a)
    right = a.real >= 0.5
    if np.any(right):
        out[right] = _loggamma_right(a[right])
    left = ~right
    if np.any(left):
        zl = a[left]
        out[left] = math.log(math.pi) - _log_sin_pi(zl) - _loggamma_right(1.0 - zl)
    return complex(out[0]) if scalar else out


def gamma(z):
    return np.exp(log_gamma(z))


# --------------------------------------------------------------------------
# parameters


@dataclass(frozen=True)
class LanglandsParams:
    """Archimedean parameters.

    rho: F, lam: Pi (in the spherical coordinates used by the weight
    gamma factors), alpha: the Voronoi coordinates of Pi, T: spectral scale.
    """

    rho: tuple[complex, complex, complex] = (0j, 0j, 0j)
    lam: tuple[complex, complex, complex] = (0j, 0j, 0j)
    alpha: tuple[complex, complex, complex] = (0j, 0j, 0j)
    T: float = 1.0

    def __post_init__(self):
        for name in ("rho", "lam", "alpha"):
            v = getattr(self, name)
            if len(v) != 3:
                raise ValueError(f"{name} must have three entries")
            if abs(sum(v)) > 1e-9 * (1 + sum(abs(x) for x in v)):
                raise ValueError(f"{name} must sum to zero, got {sum(v)}")
        if self.T <= 0:
            raise ValueError("T must be positive")

    def mu(self) -> np.ndarray:
        """The nine sums lam_i + rho_j."""
        return np.add.outer(np.asarray(self.lam), np.asarray(self.rho)).ravel()


def default_langlands(T: float = 1000.0, k: int = 12) -> LanglandsParams:
    """F with rho = iT(1, 1, -2); Pi with the spherical proxy lam = i(k-1)/2 (1, 0, -1)."""
    r = 1j * T
    h = 0.5j * (k - 1)
    return LanglandsParams(rho=(r, r, -2 * r), lam=(h, 0j, -h), alpha=(0j, 0j, 0j), T=T)


@dataclass(frozen=True)
class ContourSpec:
    sigma: float = 1.0
    height_cut: float | None = None  # None: chosen from the integrand decay
    nodes: int = 8192

    def __post_init__(self):
        if self.nodes < 64:
            raise ValueError("nodes must be >= 64")
        if self.height_cut is not None and self.height_cut <= 0:
            raise ValueError("height_cut must be positive")


@dataclass(frozen=True)
class WeightParams:
    B: int = 4
    k: int = 12
    langlands: LanglandsParams = field(default_factory=default_langlands)
    s: float = 0.5
    tilde_literal: bool = False  # use gamma(1-s-u) instead of the dual gamma(1-s+u)

    def __post_init__(self):
        if self.B < 1:
            raise ValueError("B must be >= 1")


# --------------------------------------------------------------------------
# mollifiers and gamma factors


def _log_cos(w: np.ndarray) -> np.ndarray:
    up = w.imag >= 0
    # cos w = e^{-i w} (1 + e^{2 i w}) / 2 for Im w >= 0
    a = -1j * w + np.log((1.0 + np.exp(2j * w)) / 2.0)
    b = 1j * w + np.log((1.0 + np.exp(-2j * w)) / 2.0)
    return np.where(up, a, b)


def log_mollifier(u, B: int, power: int = 12) -> np.ndarray:
    """log of cos(pi u / 4B)^(-power*B); power is 12 (G1) or 24 (G2)."""
    u = np.asarray(u, dtype=np.complex128)
    if np.any(np.abs(u.real) >= 2 * B):
        raise OutsideStrip(f"|Re u| must be < {2 * B}")
    return -power * B * _log_cos(np.pi * u / (4 * B))


def mollifier(u, B: int, power: int = 12):
    v = np.exp(log_mollifier(u, B, power))
    return complex(v) if np.ndim(v) == 0 else v


def _gF_args(s, rho, k):
    s = np.asarray(s, dtype=np.complex128)
    return s[..., None] + (k + 1) / 2 + np.asarray(rho)


def log_gamma_factor_gF(s, rho, k: int) -> np.ndarray:
    s = np.asarray(s, dtype=np.complex128)
    g = log_gamma(_gF_args(s, rho, k).ravel()).reshape(s.shape + (3,))
    return -3 * s * math.log(2 * math.pi) + g.sum(axis=-1)


def log_gamma_factor_PiF(s, mu) -> np.ndarray:
    s = np.asarray(s, dtype=np.complex128)
    z = s[..., None] + np.asarray(mu)
    g = log_gamma((z / 2).ravel()).reshape(z.shape)
    # the pi-power as printed: prod pi^{s + mu}
    return (z * math.log(math.pi) + g).sum(axis=-1)


def gamma_factor_gF(s: complex, wp: WeightParams) -> complex:
    return complex(np.exp(log_gamma_factor_gF(s, wp.langlands.rho, wp.k)))


def gamma_factor_PiF(s: complex, wp: WeightParams) -> complex:
    return complex(np.exp(log_gamma_factor_PiF(s, wp.langlands.mu())))


def log_gamma_ratio_gF(u, wp: WeightParams, tilde: bool = False) -> np.ndarray:
    rho = np.asarray(wp.langlands.rho)
    den = log_gamma_factor_gF(wp.s, rho, wp.k)
    u = np.asarray(u, dtype=np.complex128)
    if not tilde:
        return log_gamma_factor_gF(wp.s + u, rho, wp.k) - den
    if wp.tilde_literal:
        return log_gamma_factor_gF(1 - wp.s - u, rho, wp.k) - den
    return log_gamma_factor_gF(1 - wp.s + u, -rho, wp.k) - den


def log_gamma_ratio_PiF(u, wp: WeightParams, tilde: bool = False) -> np.ndarray:
    mu = wp.langlands.mu()
    den = log_gamma_factor_PiF(wp.s, mu)
    u = np.asarray(u, dtype=np.complex128)
    if not tilde:
        return log_gamma_factor_PiF(wp.s + u, mu) - den
    if wp.tilde_literal:
        return log_gamma_factor_PiF(1 - wp.s - u, mu) - den
    return log_gamma_factor_PiF(1 - wp.s + u, -mu) - den


# --------------------------------------------------------------------------
# contour integrals


def _choose_height(logker: Callable, sigma: float, ly_max: float, rel: float = 1e-17) -> float:
    """Smallest H with |integrand| < rel * peak for |t| >= H (coarse scan)."""
    t = np.linspace(0.0, 400.0, 4001)
    u = sigma + 1j * t
    lm = (logker(u) - np.log(u)).real + abs(sigma) * ly_max
    lm2 = (logker(sigma - 1j * t) - np.log(sigma - 1j * t)).real + abs(sigma) * ly_max
    lm = np.maximum(lm, lm2)
    peak = lm.max()
    above = np.nonzero(lm > peak + math.log(rel))[0]
    if len(above) == 0:
        return 1.0
    idx = above[-1]
    if idx >= len(t) - 1:
        raise ContourOnPole("integrand does not decay on the scanned range")
    return float(t[idx + 1]) * 1.05 + 0.5


def mellin_barnes(y, logker: Callable, contour: ContourSpec) -> np.ndarray:
    """(1/2 pi i) int_{(sigma)} y^{-u} exp(logker(u)) du/u by the trapezoid rule."""
    y = np.atleast_1d(np.asarray(y, dtype=np.float64))
    if np.any(y <= 0):
        raise ValueError("y must be positive")
    sigma = contour.sigma
    if abs(sigma) < 1e-9:
        raise ContourOnPole("contour passes through u = 0")
    ly = np.log(y)
    H = contour.height_cut or _choose_height(logker, sigma, float(np.abs(ly).max()))
    t = np.linspace(-H, H, contour.nodes)
    h = t[1] - t[0]
    u = sigma + 1j * t
    w = np.exp(logker(u)) / u
    w[0] *= 0.5
    w[-1] *= 0.5
    out = np.empty(len(y), dtype=np.complex128)
    for i0 in range(0, len(y), 256):
        blk = ly[i0 : i0 + 256]
        out[i0 : i0 + 256] = np.exp(-np.outer(blk, u)) @ w
    return out * h / (2 * np.pi)


def _check_poles(wp: WeightParams, which: str, sigma: float) -> None:
    s = wp.s
    if which in ("V", "Vt"):
        a = (wp.k + 1) / 2 + np.asarray(wp.langlands.rho).real
        if which == "V":
            right = -(s + a)
        elif not wp.tilde_literal:
            right = -(1 - s + (wp.k + 1) / 2 - np.asarray(wp.langlands.rho).real)
        else:
            right = None
            left = 1 - s + a
    else:
        mu = wp.langlands.mu().real
        if which == "W":
            right = -(s + mu)
        elif not wp.tilde_literal:
            right = -(1 - s - mu)
        else:
            right = None
            left = 1 - s + mu
    if right is not None:
        if sigma <= right.max() + 1e-9:
            raise ContourOnPole(f"sigma={sigma} must lie right of the poles at Re u <= {right.max()}")
    elif sigma >= left.min() - 1e-9:
        raise ContourOnPole(f"sigma={sigma} must lie left of the poles at Re u >= {left.min()}")
    if abs(sigma) >= 2 * wp.B:
        raise OutsideStrip(f"|sigma| must be < {2 * wp.B}")


def _weight(y, wp: WeightParams, contour: ContourSpec, which: str):
    _check_poles(wp, which, contour.sigma)
    power = 12 if which in ("V", "Vt") else 24
    ratio = log_gamma_ratio_gF if which in ("V", "Vt") else log_gamma_ratio_PiF
    tilde = which.endswith("t")

    def logker(u):
        return log_mollifier(u, wp.B, power) + ratio(u, wp, tilde)

    out = mellin_barnes(y, logker, contour)
    return complex(out[0]) if np.ndim(y) == 0 else out


def weight_V(y, wp: WeightParams = WeightParams(), contour: ContourSpec = ContourSpec()):
    return _weight(y, wp, contour, "V")


def weight_Vtilde(y, wp: WeightParams = WeightParams(), contour: ContourSpec = ContourSpec()):
    return _weight(y, wp, contour, "Vt")


def weight_W(y, wp: WeightParams = WeightParams(), contour: ContourSpec = ContourSpec()):
    return _weight(y, wp, contour, "W")


def weight_Wtilde(y, wp: WeightParams = WeightParams(), contour: ContourSpec = ContourSpec()):
    return _weight(y, wp, contour, "Wt")


def plateau_value(wp: WeightParams, which: str) -> complex:
    """Residue at u = 0: the small-y limit of the weight (1 for V and W)."""
    if which in ("V", "W"):
        return 1.0 + 0j
    if which == "Vt":
        return complex(np.exp(log_gamma_ratio_gF(0.0, wp, True)))
    if which == "Wt":
        return complex(np.exp(log_gamma_ratio_PiF(0.0, wp, True)))
    raise ValueError(which)
