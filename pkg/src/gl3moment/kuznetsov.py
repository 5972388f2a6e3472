"""Numerical Kuznetsov transforms J~_{eps;H}(A) and J_{eps;H}(A1, A2).

After substituting t_i = A_i y_i the factor conj H(A1 y1, A2 y2) confines t
to the box of H, and the second H factor confines x to an explicit box:

* J~: with R = x1^2 + x2^2 + 1, the two H arguments f, s satisfy
  A^4 = t1^2 y2 R^{3/2} f s^2, so J~ vanishes identically unless
  A^4 >= a1^3 a2^3 and then R^{3/2} <= A^4 / (a1^3 a2^3).
* J: with P = (x1 x2 - x3)^2 + x1^2 + 1 and Q = x3^2 + x2^2 + 1,
  Q^{3/2} <= (A1 A2^2)^2 / (a1^3 a2^3) and P^{3/2} <= (A2 A1^2)^2 / (a1^3 a2^3),
  so J vanishes unless min(A1 A2^2, A2 A1^2) >= (a1 a2)^{3/2}.

For the default box [1, 2]^2 these are the thresholds A >= 1 and
min(A1 A2^2, A2 A1^2) >= 1.  Inside the box the integrand is smooth and
compactly supported, so the trapezoid rule converges faster than any power;
the error estimate is the difference to the rule on the even-index subgrid.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

__all__ = [
    "BudgetExceeded",
    "TestFunctionH",
    "KernelArg",
    "KernelValue",
    "QuadBudget",
    "kernel_Jtilde",
    "kernel_J",
    "jtilde_support_threshold",
    "j_support_holds",
    "derivative_ratio_probe",
    "KernelTable",
    "build_kernel_table",
]

TWO_PI = 2.0 * math.pi


class BudgetExceeded(RuntimeError):
    pass


def bump(t, a: float, b: float) -> np.ndarray:
    """exp(1 - 1/(1 - u^2)) for u = (2t - a - b)/(b - a) in (-1, 1), else 0; peak 1 at the midpoint."""
    u = (2.0 * np.asarray(t, dtype=float) - a - b) / (b - a)
    out = np.zeros_like(u)
    m = np.abs(u) < 1.0
    out[m] = np.exp(1.0 - 1.0 / (1.0 - u[m] ** 2))
    return out


@dataclass(frozen=True)
class TestFunctionH:
    """Product bump H(y1, y2) = b(y1) b(y2) on the box [a1, b1] x [a2, b2]."""

    box: tuple[float, float, float, float] = (1.0, 2.0, 1.0, 2.0)

    __test__ = False  # not a pytest class

    def __post_init__(self):
        a1, b1, a2, b2 = self.box
        if not (0 < a1 < b1 and 0 < a2 < b2):
            raise ValueError(f"invalid support box {self.box}")

    def __call__(self, y1, y2) -> np.ndarray:
        a1, b1, a2, b2 = self.box
        return bump(y1, a1, b1) * bump(y2, a2, b2)

    def swapped(self) -> "TestFunctionH":
        a1, b1, a2, b2 = self.box
        return TestFunctionH((a2, b2, a1, b1))

    @property
    def floor(self) -> float:
        # a1^3 a2^3, the constant in the support inequalities
        return (self.box[0] * self.box[2]) ** 3


@dataclass(frozen=True)
class KernelArg:
    A: tuple[float, ...]
    eps: tuple[int, ...]

    def __post_init__(self):
        if any(a <= 0 for a in self.A):
            raise ValueError("kernel arguments must be positive")
        if any(e not in (1, -1) for e in self.eps):
            raise ValueError("signs must be +1 or -1")


@dataclass(frozen=True)
class KernelValue:
    value: complex
    error: float
    nodes: int

    def __abs__(self):
        return abs(self.value)


@dataclass(frozen=True)
class QuadBudget:
    """Nodes per x-direction and per t-direction; doubled up to max_doublings times until err <= tol."""

    nx: int = 128
    nt: int = 24
    tol: float = 1e-3
    max_doublings: int = 2
    relative: bool = False


def _grid(lo: float, hi: float, n: int) -> tuple[np.ndarray, float]:
    x = np.linspace(lo, hi, n + 1)
    return x, (hi - lo) / n


class _TrapAccumulator:
    """Trapezoid sums on the full grid and on its even-index subgrid, accumulated slice by slice.

    Boundary values vanish (compact support), so no end weights are needed.
    """

    def __init__(self, x_even: np.ndarray):
        self.x_even = x_even
        self.full = 0j
        self.coarse = 0j

    def add(self, i: int, j: int, vals: np.ndarray, mask: np.ndarray) -> None:
        self.full += vals.sum()
        if i % 2 == 0 and j % 2 == 0:
            self.coarse += vals[self.x_even[mask]].sum()

    def result(self, steps: list[float], ndim: int) -> tuple[complex, float]:
        w = math.prod(steps)
        full = self.full * w
        coarse = self.coarse * w * 2**ndim
        return complex(full), abs(full - coarse)


def _even_mask(shape: tuple[int, ...]) -> np.ndarray:
    grids = np.meshgrid(*[np.arange(n) % 2 == 0 for n in shape], indexing="ij")
    return np.logical_and.reduce(grids)


def _jtilde_raw(A: float, eps: int, H: TestFunctionH, nx: int, nt: int) -> tuple[complex, float]:
    a1, b1, a2, b2 = H.box
    Rmax = (A**4 / H.floor) ** (2.0 / 3.0)
    X = math.sqrt(max(Rmax - 1.0, 0.0))
    t1, h1 = _grid(a1, b1, nt)
    y2, h2 = _grid(a2, b2, nt)
    x, hx = _grid(-X, X, nx)
    x1, x2 = np.meshgrid(x, x, indexing="ij")
    r1 = x1 * x1 + 1.0
    R = r1 + x2 * x2
    g1 = x1 * x2 / r1
    g2 = x2 / R
    f0 = np.sqrt(R) / r1
    s0 = np.sqrt(r1) / R
    Hy = bump(t1, a1, b1)[:, None] * bump(y2, a2, b2)[None, :]
    acc = _TrapAccumulator(_even_mask(x1.shape))
    for i, tt in enumerate(t1):
        for j, yy in enumerate(y2):
            if Hy[i, j] == 0.0:
                continue
            c = A * A / (tt * yy)
            amp = H(yy * f0, c * s0)
            m = amp != 0.0
            if not m.any():
                continue
            ph = -eps * x1[m] * tt + yy * g1[m] + c * g2[m]
            acc.add(i, j, amp[m] * np.exp(1j * TWO_PI * ph) * (Hy[i, j] / (tt * yy * yy)), m)
    full, err = acc.result([h1, h2, hx, hx], 4)
    return full / (A * A), err / (A * A)


def _j_raw(A1: float, A2: float, e1: int, e2: int, H: TestFunctionH, nx: int, nt: int) -> tuple[complex, float]:
    a1, b1, a2, b2 = H.box
    Pmax = ((A2 * A1 * A1) ** 2 / H.floor) ** (2.0 / 3.0)
    Qmax = ((A1 * A2 * A2) ** 2 / H.floor) ** (2.0 / 3.0)
    X1 = math.sqrt(max(Pmax - 1.0, 0.0))
    X23 = math.sqrt(max(Qmax - 1.0, 0.0))
    t1, h1 = _grid(a1, b1, nt)
    t2, h2 = _grid(a2, b2, nt)
    x1v, hx1 = _grid(-X1, X1, nx)
    x2v, hx2 = _grid(-X23, X23, nx)
    x1, x2, x3 = np.meshgrid(x1v, x2v, x2v, indexing="ij")
    w = x1 * x2 - x3
    P = w * w + x1 * x1 + 1.0
    Q = x3 * x3 + x2 * x2 + 1.0
    f2 = (x1 * x3 + x2) / Q
    f1 = (x2 * w + x1) / P
    sP, sQ = np.sqrt(P), np.sqrt(Q)
    fa = sP / Q
    sa = sQ / P
    Ht = bump(t1, a1, b1)[:, None] * bump(t2, a2, b2)[None, :]
    acc = _TrapAccumulator(_even_mask(x1.shape))
    for i, u1 in enumerate(t1):
        c1 = A1 * A1 / u1
        for j, u2 in enumerate(t2):
            if Ht[i, j] == 0.0:
                continue
            c2 = A2 * A2 / u2
            amp = H(c2 * fa, c1 * sa)
            m = amp != 0.0
            if not m.any():
                continue
            ph = -e1 * x1[m] * u1 - e2 * x2[m] * u2 - c2 * f2[m] - c1 * f1[m]
            acc.add(i, j, amp[m] * np.exp(1j * TWO_PI * ph) * (Ht[i, j] / (u1 * u2)), m)
    full, err = acc.result([h1, h2, hx1, hx2, hx2], 5)
    s = 1.0 / (A1 * A2) ** 2
    return full * s, err * s


def _adaptive(raw, budget: QuadBudget) -> KernelValue:
    nx, nt = budget.nx, budget.nt
    val, err = raw(nx, nt)
    k = 0
    while True:
        scale = max(abs(val), 1e-300) if budget.relative else 1.0
        if err <= budget.tol * scale:
            return KernelValue(val, err, nx)
        if k >= budget.max_doublings:
            raise BudgetExceeded(f"error estimate {err:.2e} above tolerance after {k} doublings (nx={nx})")
        nx, nt, k = 2 * nx, 2 * nt, k + 1
        val, err = raw(nx, nt)


def kernel_Jtilde(
    A: float, eps: int = 1, H: TestFunctionH | None = None, budget: QuadBudget | None = None
) -> KernelValue:
    """J~_{eps;H}(A); exactly zero below the support threshold."""
    H = H or TestFunctionH()
    KernelArg((A,), (eps,))
    if A**4 < H.floor:
        return KernelValue(0j, 0.0, 0)
    return _adaptive(lambda nx, nt: _jtilde_raw(A, eps, H, nx, nt), budget or QuadBudget())


def kernel_J(
    A1: float,
    A2: float,
    eps: tuple[int, int] = (1, 1),
    H: TestFunctionH | None = None,
    budget: QuadBudget | None = None,
) -> KernelValue:
    """J_{eps;H}(A1, A2); exactly zero unless min(A1 A2^2, A2 A1^2) >= (a1 a2)^{3/2}."""
    H = H or TestFunctionH()
    KernelArg((A1, A2), tuple(eps))
    if not j_support_holds(A1, A2, H):
        return KernelValue(0j, 0.0, 0)
    e1, e2 = eps
    return _adaptive(lambda nx, nt: _j_raw(A1, A2, e1, e2, H, nx, nt), budget or QuadBudget(nx=48, nt=12))


def j_support_holds(A1: float, A2: float, H: TestFunctionH | None = None) -> bool:
    H = H or TestFunctionH()
    lim = math.sqrt(H.floor)
    return A1 * A2 * A2 >= lim and A2 * A1 * A1 >= lim


def jtilde_support_threshold(
    H: TestFunctionH | None = None, grid=None, rel: float = 1e-3, budget: QuadBudget | None = None
) -> tuple[float, np.ndarray, np.ndarray]:
    """Smallest grid A with |J~(A)| above rel * peak; returns (threshold, grid, |J~| values)."""
    H = H or TestFunctionH()
    grid = np.geomspace(0.05, 4.0, 25) if grid is None else np.asarray(grid, dtype=float)
    vals = np.array([abs(kernel_Jtilde(float(a), 1, H, budget).value) for a in grid])
    peak = vals.max()
    above = np.nonzero(vals > rel * peak)[0]
    thr = float(grid[above[0]]) if len(above) else math.inf
    return thr, grid, vals


@dataclass(frozen=True)
class RatioReport:
    A: tuple[float, float]
    i: int
    j: int
    derivative: complex
    ratio: float
    ratio_half_step: float


def _fd(f, x0: float, h: float, order: int) -> complex:
    if order == 0:
        return f(x0)
    if order == 1:
        return (f(x0 + h) - f(x0 - h)) / (2 * h)
    return (f(x0 + h) - 2 * f(x0) + f(x0 - h)) / (h * h)


def _richardson(f, x0: float, h: float, order: int) -> complex:
    return (4 * _fd(f, x0, h / 2, order) - _fd(f, x0, h, order)) / 3


def derivative_ratio_probe(
    A1: float,
    A2: float,
    i: int,
    j: int,
    eps: tuple[int, int] = (1, 1),
    H: TestFunctionH | None = None,
    h: float = 0.1,
    budget: QuadBudget | None = None,
) -> RatioReport:
    """|d^i/dA1^i d^j/dA2^j J| divided by (A1^{1/3} A2^{2/3})^i (A1^{2/3} A2^{1/3})^j.

    Mixed derivatives apply the one-dimensional Richardson stencils in turn.
    The ratio at step h/2 is reported alongside for a stability check.
    """
    if i > 2 or j > 2 or i < 0 or j < 0:
        raise ValueError("orders must lie in 0..2")
    budget = budget or QuadBudget(nx=48, nt=12, tol=math.inf)

    @lru_cache(maxsize=None)
    def J(a1: float, a2: float) -> complex:
        return kernel_J(a1, a2, eps, H, budget).value

    def deriv(step: float) -> complex:
        def g(a1: float) -> complex:
            return _richardson(lambda a2: J(round(a1, 12), round(a2, 12)), A2, step, j) if j else J(
                round(a1, 12), A2
            )

        return _richardson(g, A1, step, i) if i else g(A1)

    scale = (A1 ** (1 / 3) * A2 ** (2 / 3)) ** i * (A1 ** (2 / 3) * A2 ** (1 / 3)) ** j
    d = deriv(h)
    d2 = deriv(h / 2)
    return RatioReport((A1, A2), i, j, d, abs(d) / scale, abs(d2) / scale)


# --------------------------------------------------------------------------
# tabulated J for the off-diagonal sum

SIGN_PAIRS = ((1, 1), (1, -1), (-1, 1), (-1, -1))


@dataclass
class KernelTable:
    """J_eps for all four sign pairs on a uniform grid, interpolated bicubically.

    J oscillates in A with period about 0.4 near A = 2, so the grid step
    must stay well below that.  Points failing the support condition are
    exact zeros.
    """

    grid: np.ndarray
    values: dict[tuple[int, int], np.ndarray]
    errors: dict[tuple[int, int], float] = field(default_factory=dict)
    H: TestFunctionH = field(default_factory=TestFunctionH)

    def __post_init__(self):
        from scipy.interpolate import RectBivariateSpline

        self._splines = {}
        for key, v in self.values.items():
            self._splines[key] = (
                RectBivariateSpline(self.grid, self.grid, v.real, kx=3, ky=3),
                RectBivariateSpline(self.grid, self.grid, v.imag, kx=3, ky=3),
            )

    @property
    def a_min(self) -> float:
        return float(self.grid[0])

    @property
    def a_max(self) -> float:
        return float(self.grid[-1])

    def covers(self, A1: float, A2: float) -> bool:
        return self.a_min <= A1 <= self.a_max and self.a_min <= A2 <= self.a_max

    def __call__(self, A1: float, A2: float, eps: tuple[int, int]) -> complex:
        if not j_support_holds(A1, A2, self.H):
            return 0j
        if not self.covers(A1, A2):
            raise KeyError("argument outside the tabulated range")
        sr, si = self._splines[tuple(eps)]
        return complex(sr(A1, A2)[0, 0], si(A1, A2)[0, 0])

    def zeroed(self) -> "KernelTable":
        return KernelTable(self.grid, {k: np.zeros_like(v) for k, v in self.values.items()}, {}, self.H)

    def save(self, path) -> None:
        arrs = {f"v{e1:+d}{e2:+d}": v for (e1, e2), v in self.values.items()}
        np.savez(path, grid=self.grid, box=np.array(self.H.box), **arrs)

    @classmethod
    def load(cls, path) -> "KernelTable":
        with np.load(path) as z:
            vals = {e: z[f"v{e[0]:+d}{e[1]:+d}"] for e in SIGN_PAIRS}
            return cls(z["grid"], vals, {}, TestFunctionH(tuple(float(b) for b in z["box"])))


def _table_point(args) -> tuple[complex, float]:
    A1, A2, eps, box, nx, nt = args
    kv = kernel_J(A1, A2, eps, TestFunctionH(box), QuadBudget(nx=nx, nt=nt, tol=math.inf))
    return kv.value, kv.error


def build_kernel_table(
    a_min: float = 0.7,
    a_max: float = 2.0,
    points: int = 22,
    H: TestFunctionH | None = None,
    nx: int = 40,
    nt: int = 12,
    jobs: int = 1,
    cache_dir=None,
) -> KernelTable:
    """Tabulate J on [a_min, a_max]^2 at coarse accuracy; optionally cached as .npz in cache_dir."""
    import hashlib
    import os

    H = H or TestFunctionH()
    path = None
    if cache_dir is not None:
        key = hashlib.sha256(repr((a_min, a_max, points, H.box, nx, nt)).encode()).hexdigest()[:16]
        path = os.path.join(cache_dir, f"jtable-{key}.npz")
        if os.path.exists(path):
            return KernelTable.load(path)
    grid = np.linspace(a_min, a_max, points)
    tasks = [(float(A1), float(A2), eps, H.box, nx, nt) for eps in SIGN_PAIRS for A1 in grid for A2 in grid]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(jobs) as ex:
            res = list(ex.map(_table_point, tasks, chunksize=8))
    else:
        res = [_table_point(t) for t in tasks]
    n = points * points
    values, errors = {}, {}
    for k, eps in enumerate(SIGN_PAIRS):
        chunk = res[k * n : (k + 1) * n]
        values[eps] = np.array([v for v, _ in chunk]).reshape(points, points)
        errors[eps] = max(e for _, e in chunk)
    table = KernelTable(grid, values, errors, H)
    if path is not None:
        os.makedirs(cache_dir, exist_ok=True)
        table.save(path)
    return table
