"""Desk-scale pieces of the twisted GL(3) x GL(2) moment.

Nothing here evaluates the spectral side.  The harness computes the
diagonal contribution by two contour routes, audits the supports of the
Sigma_4 and Sigma_5 shapes against the kernel J~, checks alpha-sum
orthogonality, measures the Sigma_6 trend in q, and the additive-twist
(Wilton) exponent of the weight-12 cusp form.
"""
from __future__ import annotations

import configparser
import dataclasses
import json
import math
import os
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .analytic import ContourSpec, WeightParams, default_langlands, mollifier, weight_V, weight_Wtilde
from .arith import divisors, euler_phi, factorize, inv_mod, is_prime, mobius, primes_upto
from .coeffs import GL2Form, GL3Coeffs, InsufficientTable, delta_eigenvalues, sym_square_multiplicative
from .exp_sums import kloosterman_classical, modified_sums_batch
from .kuznetsov import (
    SIGN_PAIRS,
    KernelTable,
    QuadBudget,
    TestFunctionH,
    build_kernel_table,
    jtilde_support_threshold,
)
from .lseries import DirichletSeries, NotConverged, gl2_series, rankin_selberg_series

__all__ = [
    "SCHEMA_VERSION",
    "ConfigError",
    "MomentConfig",
    "load_config",
    "normalization_index",
    "default_forms",
    "L1_g_cross_Pi",
    "DiagonalReport",
    "diagonal_term",
    "alpha_sum",
    "alpha_sum_closed_form",
    "alpha_orthogonality_sweep",
    "AuditResult",
    "calibrated_jtilde_threshold",
    "ramanujan_sum",
    "sigma45_support_audit",
    "Sigma6Result",
    "sigma6_truncated",
    "sigma6_trend",
    "twisted_sum",
    "wilton_exponent",
    "kernel_table_for",
    "assemble_report",
    "NotConverged",
]

SCHEMA_VERSION = "1.0"
ENV_PREFIX = "GL3MOMENT_"


class ConfigError(ValueError):
    pass


# --------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class MomentConfig:
    # forms and weights
    k: int = 12
    B: int = 4
    T: float = 1000.0
    coeff_max: int = 60000
    # truncations: M = q^m_exp, N = q^n_exp, l <= L
    m_exp: float = 1.5
    n_exp: float = 1.0
    L: int = 16
    # sigma45 audit
    audit_q: int = 10000
    audit_assume_coprime: bool = True
    control_q: int = 101
    control_m_exp: float = 3.0
    d2_cap: int = 8
    k_cap: int = 64
    # sigma6
    sigma6_qs: tuple = (11, 23, 47, 97, 199)
    # kernel table
    table_a_min: float = 0.7
    table_a_max: float = 2.0
    table_points: int = 22
    table_nx: int = 40
    table_nt: int = 12
    cache_dir: str = ""
    # diagonal
    diag_scale: float = 3000.0
    diag_step: float = 0.01
    smoothing_scales: tuple = (1000.0, 10000.0)
    # alpha orthogonality
    alpha_qs: tuple = (7, 11)
    alpha_cmax: int = 12
    # wilton
    wilton_x_min: float = 1e3
    wilton_x_max: float = 1e5
    wilton_points: int = 9
    wilton_alphas: int = 200
    # stand-in for the residue of L(s, F x F~) at s = 1 in the normalization
    residue_placeholder: float = 1.0
    # bookkeeping
    tol: float = 1e-3
    seed: int = 0
    jobs: int = 1

    def to_dict(self) -> dict:
        return {f.name: (list(v) if isinstance(v := getattr(self, f.name), tuple) else v) for f in dataclasses.fields(self)}

    @classmethod
    def from_mapping(cls, data: dict) -> "MomentConfig":
        # case-insensitive: INI parsers and env names lowercase B, T and L
        known = {f.name.lower(): f.name for f in dataclasses.fields(cls)}
        kw = {}
        for key, raw in data.items():
            name = known.get(key.lower().replace("-", "_"))
            if name is None:
                raise ConfigError(f"unknown config key {key!r}")
            kw[name] = _coerce(raw, getattr(cls(), name), name)
        return cls(**kw)

    def replace(self, **kw) -> "MomentConfig":
        return dataclasses.replace(self, **kw)


def _coerce(raw, default, name: str):
    try:
        if isinstance(default, bool):
            if isinstance(raw, bool):
                return raw
            s = str(raw).strip().lower()
            if s in ("1", "true", "yes", "on"):
                return True
            if s in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
        if isinstance(default, tuple):
            items = raw if isinstance(raw, (list, tuple)) else [x for x in str(raw).replace(",", " ").split() if x]
            kind = type(default[0]) if default else float
            return tuple(kind(float(x)) if kind is int else kind(x) for x in items)
        if isinstance(default, int):
            v = float(raw)
            if v != int(v):
                raise ValueError(raw)
            return int(v)
        if isinstance(default, float):
            return float(raw)
        return str(raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad value {raw!r} for {name}") from exc


def load_config(path: str | None = None, env: dict | None = None, overrides: dict | None = None) -> MomentConfig:
    """Defaults, then a JSON or INI file, then GL3MOMENT_* environment variables, then explicit overrides."""
    data: dict = {}
    if path:
        if not os.path.exists(path):
            raise ConfigError(f"config file {path} not found")
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
        if text.lstrip().startswith("{"):
            try:
                data.update(json.loads(text))
            except json.JSONDecodeError as exc:
                raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
        else:
            cp = configparser.ConfigParser()
            try:
                cp.read_string(text if text.lstrip().startswith("[") else "[gl3moment]\n" + text)
            except configparser.Error as exc:
                raise ConfigError(f"invalid config {path}: {exc}") from exc
            for sec in cp.sections():
                data.update(cp[sec])
    env = os.environ if env is None else env
    names = {f.name.lower() for f in dataclasses.fields(MomentConfig)}
    for key, val in env.items():
        if key.startswith(ENV_PREFIX) and key[len(ENV_PREFIX) :].lower() in names:
            data[key[len(ENV_PREFIX) :].lower()] = val
    data.update(overrides or {})
    return MomentConfig.from_mapping(data)


# --------------------------------------------------------------------------
# forms


def normalization_index(q: int) -> int:
    """[SL3(Z) : Gamma_0(q)] = q^2 prod_{p | q} (1 + 1/p + 1/p^2); q^2 + q + 1 for prime q."""
    out = q * q
    for p, _ in factorize(q):
        out = out // (p * p) * (p * p + p + 1)
    return out


@lru_cache(maxsize=4)
def default_forms(n_max: int = 60000, k: int = 12) -> tuple[GL2Form, GL3Coeffs]:
    """g = the weight-12 cusp form and Pi = its symmetric square (the desk stand-in for a Maass form)."""
    if k != 12:
        raise ValueError("only the weight-12 form is tabulated")
    g = delta_eigenvalues(n_max)
    return g, sym_square_multiplicative(g, n_max)


def L1_g_cross_Pi(g: GL2Form, Pi: GL3Coeffs, scales=(1e3, 1e4), tol: float = 1e-3) -> complex:
    """L(1, g x Pi) from smoothed sums, raising NotConverged if the two scales disagree."""
    R = rankin_selberg_series(g, Pi, int(6 * max(scales)))
    return R.value(1.0, scales, tol)


# --------------------------------------------------------------------------
# diagonal term


@dataclass(frozen=True)
class DiagonalReport:
    main_term: complex  # F(0, 0) = L(1, g x Pi) L(1, g)
    L1_gxPi: complex
    L1_g: complex
    contour_value: complex  # double integral on Re u = Re v = 1/2
    shifted_remainder: complex  # the three integrals after shifting to -1/18 and -1/12
    discrepancy: float  # relative, between the two routes

    def to_dict(self) -> dict:
        c = lambda z: [float(z.real), float(z.imag)]  # noqa: E731
        return {
            "main_term": c(self.main_term),
            "L1_g_cross_Pi": c(self.L1_gxPi),
            "L1_g": c(self.L1_g),
            "contour_value": c(self.contour_value),
            "shifted_remainder": c(self.shifted_remainder),
            "residue_route": c(self.main_term + self.shifted_remainder),
            "relative_discrepancy": self.discrepancy,
        }


def _line(c: float, half: float, h: float) -> np.ndarray:
    n = int(round(half / h))
    return c + 1j * h * np.arange(-n, n + 1)


def diagonal_term(
    g: GL2Form,
    Pi: GL3Coeffs,
    B: int = 4,
    X: float = 3000.0,
    h: float = 0.01,
    G1=None,
    G2=None,
) -> DiagonalReport:
    """(1/2 pi i)^2 double integral of F(u,v) G1(u) G2(v) / (u v), F = L(1+3u, g x Pi) L(1+u+v, g).

    Route A integrates on Re u = Re v = 1/2.  Route B shifts u to -1/18 and
    v to -1/12, collecting F(0,0) and three integrals.  G1, G2 default to
    the degree-12 and degree-24 mollifiers; both decay like exp(-3 pi |t|)
    or faster, so |Im u| <= 4 and |Im v| <= 2 carry every digit.
    """
    G1 = G1 or (lambda u: mollifier(u, B, 12))
    G2 = G2 or (lambda v: mollifier(v, B, 24))
    R = rankin_selberg_series(g, Pi, int(6 * X))
    Lg = gl2_series(g, int(6 * X))

    def double(cu: float, cv: float) -> complex:
        u = _line(cu, 4.0, h)
        v = _line(cv, 2.0, h)
        fu = R.smoothed(1 + 3 * u, X) * np.asarray(G1(u)) / u
        fv = np.asarray(G2(v)) / v
        # u + v lies on a grid of step h; tabulate L(1+u+v, g) once
        n_u, n_v = (len(u) - 1) // 2, (len(v) - 1) // 2
        w = (cu + cv) + 1j * h * np.arange(-(n_u + n_v), n_u + n_v + 1)
        lw = Lg.smoothed(1 + w, X)
        iu = np.arange(len(u))[:, None] - n_u
        iv = np.arange(len(v))[None, :] - n_v
        M = lw[iu + iv + n_u + n_v]
        return complex(fu @ M @ fv) * (h / (2 * np.pi)) ** 2

    def single_u(cu: float) -> complex:
        u = _line(cu, 4.0, h)
        vals = R.smoothed(1 + 3 * u, X) * Lg.smoothed(1 + u, X) * np.asarray(G1(u)) / u
        return complex(vals.sum()) * h / (2 * np.pi)

    def single_v(cv: float) -> complex:
        v = _line(cv, 2.0, h)
        vals = Lg.smoothed(1 + v, X) * np.asarray(G2(v)) / v
        return complex(vals.sum()) * h / (2 * np.pi) * L1R

    L1R = complex(R.smoothed(1.0, X))
    L1g = complex(Lg.smoothed(1.0, X))
    g10 = complex(np.asarray(G1(np.array([0j])))[0])
    g20 = complex(np.asarray(G2(np.array([0j])))[0])
    main = L1R * L1g * g10 * g20
    route_a = double(0.5, 0.5)
    rem = g20 * single_u(-1 / 18) + g10 * single_v(-1 / 12) + double(-1 / 18, -1 / 12)
    scale = max(abs(route_a), abs(main + rem), 1e-300)
    disc = abs(route_a - (main + rem)) / scale if scale > 1e-300 else 0.0
    return DiagonalReport(main, L1R, L1g, route_a, rem, disc)


# --------------------------------------------------------------------------
# alpha-sum orthogonality


def alpha_sum(c1: int, c1p: int, c2: int, c2p: int, q: int) -> complex:
    """sum over alpha mod c2 c2' of S(alpha, qbar c1; c2) * conj S(alpha, qbar c1'; c2'), qbar per modulus."""
    a = c1 * (inv_mod(q, c2).value if c2 > 1 else 0)
    ap = c1p * (inv_mod(q, c2p).value if c2p > 1 else 0)
    M = c2 * c2p
    s1 = np.array([kloosterman_classical(al, a, c2) for al in range(c2)])
    s2 = np.array([kloosterman_classical(al, ap, c2p) for al in range(c2p)])
    idx = np.arange(M)
    return complex(np.sum(s1[idx % c2] * np.conj(s2[idx % c2p])))


def ramanujan_sum(n: int, c: int) -> int:
    g = math.gcd(n, c)
    return sum(mobius(c // d) * d for d in divisors(g))


def alpha_sum_closed_form(c1: int, c1p: int, c2: int, c2p: int, q: int) -> int:
    """Zero unless c2 = c2'; then c2^2 times the Ramanujan sum c_{c2}(qbar (c1 - c1'))."""
    if c2 != c2p:
        return 0
    qb = inv_mod(q, c2).value if c2 > 1 else 0
    return c2 * c2 * ramanujan_sum(qb * (c1 - c1p), c2)


def alpha_orthogonality_sweep(qs=(7, 11), cmax: int = 12, c1s=(1, 2, 3)) -> dict:
    """Off-diagonal maxima (scaled by c2 c2' sqrt(c2 c2')) and diagonal minima over the sweep."""
    off, diag_min, closed_err, cases = 0.0, math.inf, 0.0, 0
    for q in qs:
        cs = [c for c in range(1, cmax + 1) if math.gcd(c, q) == 1]
        for c2 in cs:
            for c2p in cs:
                for c1 in c1s:
                    for c1p in c1s:
                        v = alpha_sum(c1, c1p, c2, c2p, q)
                        cases += 1
                        closed_err = max(closed_err, abs(v - alpha_sum_closed_form(c1, c1p, c2, c2p, q)))
                        if c2 != c2p:
                            off = max(off, abs(v) / (c2 * c2p * math.sqrt(c2 * c2p)))
                        elif c1 == c1p:
                            diag_min = min(diag_min, v.real)
    return {
        "qs": list(qs),
        "cmax": cmax,
        "cases": cases,
        "max_offdiagonal_scaled": off,
        "min_diagonal": diag_min,
        "max_closed_form_error": closed_err,
    }


# --------------------------------------------------------------------------
# Sigma_4 / Sigma_5 support audit


@dataclass(frozen=True)
class AuditResult:
    q: int
    threshold: float
    cutoffs: dict
    shapes_audited: int
    above_threshold: list  # (kind, D1, D2, max argument)
    max_argument: float

    @property
    def count(self) -> int:
        return len(self.above_threshold)

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "threshold": self.threshold,
            "cutoffs": self.cutoffs,
            "shapes_audited": self.shapes_audited,
            "above_threshold_count": self.count,
            "above_threshold": [list(s) for s in self.above_threshold[:50]],
            "max_argument": self.max_argument,
        }


def calibrated_jtilde_threshold(H: TestFunctionH | None = None) -> float:
    """Largest scan point below the first A where |J~| exceeds 1e-3 of its peak."""
    thr, grid, vals = jtilde_support_threshold(H, budget=QuadBudget(nx=96, nt=24, tol=math.inf))
    i = int(np.searchsorted(grid, thr))
    return float(grid[i - 1]) if i > 0 else float(thr)


def sigma45_support_audit(
    q: int,
    M: float | None = None,
    N: float | None = None,
    L: int = 16,
    threshold: float = 1.0,
    assume_coprime: bool = True,
    d2_cap: int = 8,
    k_cap: int = 64,
) -> AuditResult:
    """Largest J~ argument over each Sigma_4 and Sigma_5 modulus shape.

    Sigma_4: D2 = q D2', D1 = n D2^2, argument sqrt(m l / (D1 D2)).
    Sigma_5: D1 = q k, d = m l divides D1, D2 = D1^2 / d, argument sqrt(m n l / (D1 D2)).
    A shape is flagged when its largest argument exceeds the threshold.
    """
    M = q**1.5 if M is None else M
    N = float(q) if N is None else N
    Mi, Ni = int(M), int(N)
    flagged, count, amax = [], 0, 0.0

    # Sigma_4: argument is largest at m = M, l = L
    n_int = np.arange(1, Ni + 1)
    if assume_coprime:
        n_int = n_int[np.gcd(n_int, q) == 1]
    n = n_int.astype(float)
    for d2p in range(1, d2_cap + 1):
        D2 = q * d2p
        arg = np.sqrt(Mi * L / (n * D2 * D2 * D2))
        count += len(n)
        amax = max(amax, float(arg.max(initial=0.0)))
        for i in np.nonzero(arg > threshold)[0]:
            nn = int(n[i])
            flagged.append(("sigma4", nn * D2 * D2, D2, float(arg[i])))

    # Sigma_5: argument is largest at the largest admissible n
    n_top = Ni
    while assume_coprime and n_top > 1 and math.gcd(n_top, q) != 1:
        n_top -= 1
    for kk in range(1, k_cap + 1):
        D1 = q * kk
        for d in divisors(D1):
            if d > Mi * L:
                continue
            ok = False
            for l in range(1, L + 1):
                if d % l == 0 and d // l <= Mi and not (assume_coprime and math.gcd(d // l, q) != 1):
                    ok = True
                    break
            if not ok:
                continue
            count += 1
            arg = math.sqrt(d * d * n_top / D1**3)
            amax = max(amax, arg)
            if arg > threshold:
                flagged.append(("sigma5", D1, D1 * D1 // d, arg))
    cut = {"M": M, "N": N, "L": L, "assume_coprime": assume_coprime, "d2_cap": d2_cap, "k_cap": k_cap}
    return AuditResult(q, threshold, cut, count, flagged, amax)


# --------------------------------------------------------------------------
# Sigma_6


@dataclass(frozen=True)
class Sigma6Result:
    q: int
    value: complex
    terms: int
    dropped: int  # support-satisfying terms outside the kernel table
    truncation: dict

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "re": self.value.real,
            "im": self.value.imag,
            "abs": abs(self.value),
            "terms": self.terms,
            "dropped_outside_table": self.dropped,
            "truncation": self.truncation,
        }


def kernel_table_for(cfg: MomentConfig) -> KernelTable:
    cache = cfg.cache_dir or os.environ.get(ENV_PREFIX + "CACHE") or os.path.join(
        os.path.expanduser("~"), ".cache", "gl3moment"
    )
    return build_kernel_table(
        cfg.table_a_min, cfg.table_a_max, cfg.table_points, None, cfg.table_nx, cfg.table_nt, cfg.jobs, cache
    )


def _weight_tables(cfg: MomentConfig, y_max: float):
    wp = WeightParams(B=cfg.B, k=cfg.k, langlands=default_langlands(cfg.T, cfg.k))
    ly = np.linspace(0.0, math.log(max(y_max, 2.0)), 600)
    V = np.asarray(weight_V(np.exp(ly), wp, ContourSpec(sigma=1.0)))
    Wt = np.asarray(weight_Wtilde(np.arange(1, cfg.L + 1, dtype=float), wp, ContourSpec(sigma=1.0)))
    return ly, V, Wt


def sigma6_truncated(
    q: int,
    cfg: MomentConfig,
    table: KernelTable,
    g: GL2Form | None = None,
    Pi: GL3Coeffs | None = None,
) -> Sigma6Result:
    """Truncated Sigma_6 with the tabulated Kuznetsov kernel.

    Summand, for each sign pair eps:
      lam_g(n) A(m,1) / sqrt(mn) * S^(1)(qbar e2, qbar e1 n, m l, 1; c1, c2) / (q c1 c2)
      * J_eps(A1, A2) * V(n m^2) * W~(l),
    A1 = sqrt(n c1 / q) / c2, A2 = sqrt(m l c2 / q) / c1, with
    c1 <= q^(1/6), c2 <= q^(1/3), m <= q^m_exp, n <= q^n_exp, l <= L, and
    (c1 c2 m n, q) = 1.
    """
    if g is None or Pi is None:
        g, Pi = default_forms(cfg.coeff_max, cfg.k)
    Mc, Nc, L = int(q**cfg.m_exp), int(q**cfg.n_exp), cfg.L
    C1, C2 = math.ceil(q ** (1 / 6)), math.ceil(q ** (1 / 3))
    if max(Mc, Nc) > g.n_max:
        raise ValueError("coefficient table too short for this q")
    ly, Vtab, Wt = _weight_tables(cfg, float(Nc) * Mc * Mc)
    lam = np.asarray(g.lam, dtype=float)
    row = np.asarray(Pi.row, dtype=float)
    ns = np.arange(1, Nc + 1)
    ns = ns[ns % q != 0]
    ms = np.arange(1, Mc + 1)
    adm_m = (ms % q != 0).astype(np.int64)
    prefix = np.concatenate([[0], np.cumsum(adm_m)])
    floor = math.sqrt(table.H.floor)
    splines = {eps: table._splines[eps] for eps in SIGN_PAIRS}
    total, terms, dropped = 0j, 0, 0
    for c1 in range(1, C1 + 1):
        for c2 in range(1, C2 + 1):
            if math.gcd(c1 * c2, q) != 1:
                continue
            Mod = c1 * c2
            qb = inv_mod(q, Mod).value if Mod > 1 else 0
            A1_all = np.sqrt(ns * c1 / q) / c2
            for l in range(1, L + 1):
                # support: A2 >= max(floor/A1^2, sqrt(floor/A1))
                need = np.maximum(floor / A1_all**2, np.sqrt(floor / A1_all))
                m_sup = np.ceil((need * c1) ** 2 * q / (l * c2) - 1e-12).astype(np.int64)
                m_sup = np.clip(m_sup, 1, Mc + 1)
                m_lo = math.ceil((table.a_min * c1) ** 2 * q / (l * c2) - 1e-12)
                m_hi = min(Mc, math.floor((table.a_max * c1) ** 2 * q / (l * c2) + 1e-12))
                in_n = (A1_all >= table.a_min) & (A1_all <= table.a_max)
                supp = prefix[Mc] - prefix[m_sup - 1]
                if m_lo <= m_hi:
                    lo = np.maximum(m_sup, m_lo)
                    cov = np.where(in_n & (lo <= m_hi), prefix[m_hi] - prefix[np.minimum(lo, m_hi + 1) - 1], 0)
                else:
                    cov = np.zeros_like(supp)
                dropped += int(np.sum(supp - cov)) * len(SIGN_PAIRS)
                if m_lo > m_hi or not in_n.any():
                    continue
                nsel = ns[in_n]
                msel = ms[m_lo - 1 : m_hi]
                msel = msel[msel % q != 0]
                if not len(msel):
                    continue
                A1 = np.sqrt(nsel * c1 / q) / c2
                A2 = np.sqrt(msel * l * c2 / q) / c1
                supp2 = (A1[:, None] * A2[None, :] ** 2 >= floor) & (A2[None, :] * A1[:, None] ** 2 >= floor)
                if not supp2.any():
                    continue
                amp_n = lam[nsel] / np.sqrt(nsel)
                amp_m = row[msel] / np.sqrt(msel)
                y = nsel[:, None].astype(float) * msel[None, :].astype(float) ** 2
                Vy = np.interp(np.log(y), ly, Vtab.real) + 1j * np.interp(np.log(y), ly, Vtab.imag)
                base = amp_n[:, None] * amp_m[None, :] * Vy * Wt[l - 1] / (q * c1 * c2)
                base = np.where(supp2, base, 0)
                rn = nsel % Mod
                rml = (msel * l) % Mod
                terms += int(supp2.sum()) * len(SIGN_PAIRS)
                for e1, e2 in SIGN_PAIRS:
                    freqs = [((qb * e2) % Mod, (qb * e1 * a) % Mod, b, 1) for a in range(Mod) for b in range(Mod)]
                    S = modified_sums_batch(c1, c2, 1, freqs).reshape(Mod, Mod)
                    sr, si = splines[(e1, e2)]
                    J = sr(A1, A2) + 1j * si(A1, A2)
                    total += complex(np.sum(base * S[rn[:, None], rml[None, :]] * J))
    trunc = {"M": Mc, "N": Nc, "L": L, "c1_max": C1, "c2_max": C2}
    return Sigma6Result(q, total, terms, dropped, trunc)


def sigma6_trend(cfg: MomentConfig, table: KernelTable | None = None, qs=None) -> dict:
    """Least-squares slope of log|Sigma_6| against log q, with its standard error."""
    from scipy.stats import linregress

    table = table or kernel_table_for(cfg)
    qs = tuple(qs or cfg.sigma6_qs)
    for q in qs:
        if not is_prime(q):
            raise ConfigError(f"sigma6 q={q} is not prime")
    res = [sigma6_truncated(q, cfg, table) for q in qs]
    mags = np.array([abs(r.value) for r in res])
    out = {"qs": list(qs), "points": [r.to_dict() for r in res], "reference_slope": -1 / 6}
    if np.all(mags > 0):
        fit = linregress(np.log(qs), np.log(mags))
        out.update(slope=float(fit.slope), stderr=float(fit.stderr), intercept=float(fit.intercept))
    else:
        out.update(slope=None, stderr=None, intercept=None)
    return out


# --------------------------------------------------------------------------
# Wilton exponent


def _h_bump(t: np.ndarray) -> np.ndarray:
    out = np.zeros_like(t)
    inside = (t > 1) & (t < 2)
    u = 2 * t[inside] - 3
    out[inside] = np.exp(1 - 1 / (1 - u * u))
    return out


def twisted_sum(lam: np.ndarray, X: float, alphas) -> np.ndarray:
    """sum_n lam(n) e(n alpha) h(n/X) for each alpha, with h the bump on [1, 2]."""
    n = np.arange(max(1, int(X)), int(2 * X) + 2)
    if n[-1] >= len(lam):
        raise InsufficientTable(f"need {n[-1]} coefficients, have {len(lam) - 1}")
    w = np.asarray(lam, dtype=float)[n] * _h_bump(n / X)
    al = np.atleast_1d(np.asarray(alphas, dtype=float))
    out = np.empty(len(al), dtype=np.complex128)
    for i0 in range(0, len(al), 16):
        out[i0 : i0 + 16] = np.exp(2j * np.pi * np.outer(al[i0 : i0 + 16], n.astype(float))) @ w
    return out


def wilton_exponent(
    g: GL2Form | None = None,
    x_min: float = 1e3,
    x_max: float = 1e5,
    points: int = 9,
    alphas: int = 200,
) -> dict:
    """Slope of log sup_alpha |sum_n lam(n) e(n alpha) h(n/X)| against log X, h a bump on [1, 2].

    alpha runs over frac((j + 1/2) * golden ratio), j < alphas, a deterministic
    equidistributed grid.
    """
    from scipy.stats import linregress

    need = int(2 * x_max) + 1
    g = g if g is not None and g.n_max >= need else delta_eigenvalues(max(need, 1000))
    golden = (1 + math.sqrt(5)) / 2
    al = np.mod((np.arange(alphas) + 0.5) * golden, 1.0)
    Xs = np.geomspace(x_min, x_max, points)
    sups = [float(np.abs(twisted_sum(g.lam, X, al)).max()) for X in Xs]
    fit = linregress(np.log(Xs), np.log(sups))
    return {
        "X": Xs.tolist(),
        "sup": sups,
        "exponent": float(fit.slope),
        "stderr": float(fit.stderr),
        "alphas": alphas,
    }


# --------------------------------------------------------------------------
# report


def assemble_report(cfg: MomentConfig, table: KernelTable | None = None, sections=None) -> dict:
    """All desk-scale sections plus the normalization index; the spectral side is not computed."""
    sections = set(sections or ("diagonal", "sigma45_audit", "alpha_orthogonality", "sigma6_trend", "wilton"))
    g, Pi = default_forms(cfg.coeff_max, cfg.k)
    rep: dict = {"schema_version": SCHEMA_VERSION, "spectral_side": "NOT computed"}
    diag = None
    if "diagonal" in sections:
        diag = diagonal_term(g, Pi, cfg.B, cfg.diag_scale, cfg.diag_step)
        d = diag.to_dict()
        try:
            L1_g_cross_Pi(g, Pi, cfg.smoothing_scales, cfg.tol)
            d["smoothing_converged"] = True
        except NotConverged:
            d["smoothing_converged"] = False
        rep["diagonal"] = d
    if "sigma45_audit" in sections:
        thr = calibrated_jtilde_threshold()
        q = cfg.audit_q
        main = sigma45_support_audit(
            q, q**cfg.m_exp, q**cfg.n_exp, cfg.L, thr, cfg.audit_assume_coprime, cfg.d2_cap, cfg.k_cap
        )
        qc = cfg.control_q
        ctrl = sigma45_support_audit(qc, qc**cfg.control_m_exp, qc**cfg.n_exp, cfg.L, thr, True, cfg.d2_cap, cfg.k_cap)
        rep["sigma45_audit"] = {"threshold": thr, "audit": main.to_dict(), "negative_control": ctrl.to_dict()}
    if "alpha_orthogonality" in sections:
        rep["alpha_orthogonality"] = alpha_orthogonality_sweep(cfg.alpha_qs, cfg.alpha_cmax)
    trend = None
    if "sigma6_trend" in sections:
        trend = sigma6_trend(cfg, table)
        rep["sigma6_trend"] = trend
    if "wilton" in sections:
        rep["wilton"] = wilton_exponent(
            g if g.n_max >= 2 * cfg.wilton_x_max + 1 else None,
            cfg.wilton_x_min,
            cfg.wilton_x_max,
            cfg.wilton_points,
            cfg.wilton_alphas,
        )
    qs = tuple(cfg.sigma6_qs)
    rep["normalization"] = {
        "index": {str(q): normalization_index(q) for q in qs},
        "residue_placeholder": cfg.residue_placeholder,
        "factor": {str(q): normalization_index(q) * cfg.residue_placeholder for q in qs},
    }
    if diag is not None and trend is not None:
        last = trend["points"][-1]
        val = diag.main_term + complex(last["re"], last["im"])
        rep["desk_analog"] = {
            "q": last["q"],
            "label": "diagonal main term plus truncated Sigma_6; spectral side NOT computed",
            "value": [val.real, val.imag],
        }
    rep["config"] = cfg.to_dict()
    return rep
