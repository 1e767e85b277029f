"""Numerical checks of the spectral identities and estimates.

Each check returns a :class:`CheckResult`.  Identity checks compare a
residual with a tolerance; inequality checks record ``(index, lhs, rhs)``
triples and pass when ``lhs <= rhs`` everywhere, with ``residual`` the
largest excess ``lhs - rhs`` and ``bound = 0``.  Checks whose constants are
proven are hard: a failure makes the run exit nonzero.  Checks of
existence-only constants report empirical ratios and are judged on their
stability under amplitude doubling.
"""

from __future__ import annotations

import json
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .actions import QUAD_RTOL, ActionSpectrum, F_on_band, action_levels, action_norm, birkhoff_norm
from .corpus import CorpusMember
from .hierarchy import DEFAULT_MAX_LEVEL, hamiltonians, s_recursion
from .hill import (
    DEFAULT_ODE_TOL,
    PeriodicSpectrum,
    discriminant_at_frequency,
    periodic_spectrum,
    weighted_gap_sums,
)
from .potential import Potential, Weight, sobolev_norm, tail_norm, weighted_norm

__all__ = [
    "PASS",
    "FAIL",
    "INFO",
    "SUITES",
    "CheckResult",
    "Analysis",
    "VerificationReport",
    "analyze",
    "default_n_max",
    "tail_estimate",
    "check_parseval",
    "check_trace_formula",
    "check_localization",
    "check_action_gap",
    "check_InJn",
    "check_mean_value",
    "check_gap_estimate",
    "check_weighted_estimate",
    "check_discriminant_asymptotics",
    "check_F_expansion",
    "check_S_vanishing",
    "check_sobolev_estimates",
    "check_birkhoff_estimate",
    "verify_potential",
    "verify_corpus",
]

PASS, FAIL, INFO = "pass", "fail", "informational"
PARSEVAL_BOUND = 1e-6
FLOOR = 1e-13
ASYMPTOTIC_RANGE = (8, 64)
ASYMPTOTIC_ODE_TOL = 1e-14
STABILITY_FACTOR = 2.0

# weights and exponents r used by the weighted checks
DEFAULT_WEIGHTS = (
    (Weight.sobolev(0.0), 0.0),
    (Weight.sobolev(0.25), 0.25),
    (Weight.abel(0.0, 0.1), 0.0),
    (Weight.gevrey(0.0, 0.1, 0.5), 0.0),
)

SUITES = (
    "parseval",
    "trace",
    "localization",
    "action-gap",
    "injn",
    "mean-value",
    "gap-estimate",
    "weighted",
    "asymptotics",
    "f-expansion",
    "s-vanishing",
    "sobolev",
    "birkhoff",
)
CORPUS_SUITES = ("sobolev", "birkhoff")


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str
    residual: float
    bound: float
    details: tuple = ()
    hard: bool = True

    @property
    def failed(self) -> bool:
        return self.hard and self.status == FAIL

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "hard": self.hard,
            "residual": _clean(self.residual),
            "bound": _clean(self.bound),
            "details": [_clean(d) for d in self.details],
        }


def _clean(x):
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else None
    return x


def _inequality(name, records, hard=True, extra=()):
    """Pass iff lhs <= rhs for every record."""
    excess = [r["lhs"] - r["rhs"] for r in records]
    residual = max(excess) if excess else 0.0
    status = PASS if residual <= 0.0 else FAIL
    return CheckResult(name, status, residual, 0.0, tuple(records) + tuple(extra), hard)


# -- shared inputs -----------------------------------------------------------

def default_n_max(p: Potential) -> int:
    return 4 * p.max_mode + 32


@dataclass(frozen=True)
class Analysis:
    """Spectrum, actions and Hamiltonians of one potential, computed once."""

    potential: Potential
    spectrum: PeriodicSpectrum
    actions: dict
    H: np.ndarray
    quad_rtol: float
    ode_tol: float


def analyze(p: Potential, n_max: int | None = None, levels: Iterable[int] = range(DEFAULT_MAX_LEVEL + 1),
            quad_rtol: float = QUAD_RTOL, ode_tol: float = DEFAULT_ODE_TOL,
            max_level: int = DEFAULT_MAX_LEVEL) -> Analysis:
    n_max = default_n_max(p) if n_max is None else int(n_max)
    spec = periodic_spectrum(p, n_max, ode_tol)
    acts = action_levels(p, spec, tuple(set(levels) | {0}), rtol=quad_rtol, tol=ode_tol)
    return Analysis(p, spec, acts, hamiltonians(p, max_level), quad_rtol, ode_tol)


def tail_estimate(terms: np.ndarray, window: int = 10) -> float:
    """Geometric extrapolation of ``sum_{n > n_max} t_n`` from the last ``window`` terms.

    Exactly zero terms at the end of the sequence (collapsed gaps) give a zero
    tail; a non-decaying window gives ``inf``.
    """
    t = np.asarray(terms, dtype=float)[-window:]
    if t.size == 0 or t[-1] == 0.0:
        return 0.0
    nz = np.flatnonzero(t > 0)
    first = int(nz[0])
    span = t.size - 1 - first
    if span == 0:
        return math.inf
    rho = (t[-1] / t[first]) ** (1.0 / span)
    if not rho < 1.0:
        return math.inf
    return float(t[-1] * rho / (1.0 - rho))


def _n(spec_or_acts) -> np.ndarray:
    return np.arange(1, spec_or_acts.n_max + 1)


# -- identities --------------------------------------------------------------

def _identity(name, lhs, rhs, bound, tail_terms):
    scale = max(1.0, abs(rhs))
    residual = abs(lhs - rhs) / scale
    tail = tail_estimate(tail_terms) / scale
    if residual <= bound:
        status = PASS
    elif tail > bound:
        # truncation at n_max, not the identity, explains the mismatch
        status = INFO
    else:
        status = FAIL
    details = ({"lhs": lhs, "rhs": rhs, "tail_estimate": tail},)
    return CheckResult(name, status, residual, bound, details, hard=status != INFO)


def check_parseval(p: Potential, spec: PeriodicSpectrum, acts: ActionSpectrum,
                   H0: float | None = None) -> CheckResult:
    """``sum (2 n pi) I_n = H_0 = ||q||_0^2 / 2``."""
    if H0 is None:
        H0 = 0.5 * sobolev_norm(p, 0) ** 2
    terms = 2.0 * np.pi * _n(acts) * acts.values
    return _identity("parseval", float(np.sum(terms)), H0, PARSEVAL_BOUND, terms)


def trace_rhs(H: np.ndarray, m: int) -> float:
    corr = sum(H[m - 2 - k] * H[k] for k in range(m - 1))
    return float(4.0 ** -m * H[m] - 2.0 * 4.0 ** -m * corr)


def trace_bound(m: int) -> float:
    return 1e-6 if m <= 2 else 1e-4


def check_trace_formula(p: Potential, spec: PeriodicSpectrum, m: int,
                        acts: ActionSpectrum | None = None, H: np.ndarray | None = None) -> CheckResult:
    """``sum (2 n pi) J_{n,m} = 4^-m H_m - 2 4^-m sum_k H_{m-2-k} H_k``."""
    if not 1 <= m <= DEFAULT_MAX_LEVEL:
        raise ValueError(f"trace formula checked for 1 <= m <= {DEFAULT_MAX_LEVEL}")
    if acts is None:
        acts = action_levels(p, spec, (m,))[m]
    if H is None:
        H = hamiltonians(p, m)
    terms = 2.0 * np.pi * _n(acts) * acts.values
    return _identity(f"trace-m{m}", float(np.sum(terms)), trace_rhs(H, m), trace_bound(m), np.abs(terms))


# -- proven inequalities -----------------------------------------------------

def check_localization(p: Potential, spec: PeriodicSpectrum) -> CheckResult:
    """Eigenvalue localization and the ground-state lower bound."""
    q0 = sobolev_norm(p, 0)
    recs = [{"n": 0, "kind": "lower-bound", "lhs": -(1.0 + q0) * q0, "rhs": spec.lambda0_plus}]
    for n in range(1, spec.n_max + 1):
        lm, lp = spec.pair(n)
        if n >= 4.0 * q0:
            dev = max(abs(lm - (n * math.pi) ** 2), abs(lp - (n * math.pi) ** 2))
            recs.append({"n": n, "kind": "disk", "lhs": dev, "rhs": 4.0 * q0})
        else:
            recs.append({"n": n, "kind": "upper", "lhs": lp, "rhs": 256.0 * q0 ** 2})
    if not 4.0 * q0 <= 1.0:
        recs.append({"n": 0, "kind": "upper", "lhs": spec.lambda0_plus, "rhs": 256.0 * q0 ** 2})
    return _inequality("localization", recs)


def check_action_gap(p: Potential, spec: PeriodicSpectrum, acts: ActionSpectrum, s: float) -> CheckResult:
    """``(2 n pi) I_n <= 48 (1 + ||q||_s)^(3/2 - s) gamma_n^2`` for ``n > 8 ||q||_s^(3/2 - s)``.

    The ratio ``8 n pi I_n / gamma_n^2`` of every open gap is attached as
    informational ``ratio`` entries; it tends to 1.
    """
    if not 0.0 <= s <= 0.5:
        raise ValueError("s must lie in [0, 1/2]")
    qs = sobolev_norm(p, s)
    e = 1.5 - s
    gap = spec.gap
    recs, ratios = [], []
    for n in range(1, acts.n_max + 1):
        I = acts.values[n - 1]
        if n > 8.0 * qs ** e:
            recs.append({"n": n, "lhs": 2.0 * n * math.pi * I, "rhs": 48.0 * (1.0 + qs) ** e * gap[n - 1] ** 2})
        if I > 0:
            ratios.append({"n": n, "ratio": 8.0 * n * math.pi * I / gap[n - 1] ** 2})
    return _inequality(f"action-gap-s{s:g}", recs, extra=ratios)


def check_InJn(p: Potential, spec: PeriodicSpectrum, acts_by_level: dict, max_level: int = 3) -> CheckResult:
    """Two-sided bounds of ``J_{n,m}`` by ``I_n`` for ``1 <= m <= max_level``."""
    q0 = sobolev_norm(p, 0)
    I = acts_by_level[0].values
    recs = []
    for m in range(1, max_level + 1):
        if m not in acts_by_level:
            continue
        J = acts_by_level[m].values
        for n in range(1, len(J) + 1):
            In, Jn = I[n - 1], J[n - 1]
            if n >= 4.0 * q0:
                c = (n * math.pi) ** (2 * m)
                lo, hi = 2.0 ** -m * c * In, 2.0 ** m * c * In
            else:
                lo, hi = -(5.0 ** m) * q0 ** (2 * m) * In, 256.0 ** m * q0 ** (2 * m) * In
            recs.append({"n": n, "m": m, "side": "lower", "lhs": lo, "rhs": Jn})
            recs.append({"n": n, "m": m, "side": "upper", "lhs": Jn, "rhs": hi})
    return _inequality("InJn", recs)


def check_mean_value(spec: PeriodicSpectrum, acts_by_level: dict, max_level: int = 3) -> CheckResult:
    """``J_{n,m} / I_n`` lies in the image of the gap under ``lam -> lam^m``."""
    I = acts_by_level[0].values
    eps = 4.0 * np.finfo(float).eps
    recs = []
    for m in range(1, max_level + 1):
        if m not in acts_by_level:
            continue
        J = acts_by_level[m].values
        for n in range(1, len(J) + 1):
            if not I[n - 1] > 0:
                continue
            lm, lp = spec.pair(n)
            img = [lm ** m, lp ** m] + ([0.0] if lm < 0 < lp else [])
            slack = eps * max(abs(v) for v in img)
            z = J[n - 1] / I[n - 1]
            recs.append({"n": n, "m": m, "side": "lower", "lhs": min(img) - slack, "rhs": z})
            recs.append({"n": n, "m": m, "side": "upper", "lhs": z, "rhs": max(img) + slack})
    return _inequality("mean-value", recs)


def check_gap_estimate(p: Potential, spec: PeriodicSpectrum, w: Weight) -> CheckResult:
    """Weighted tail and sup bounds of the gap lengths for ``N = ceil(4 ||q||_w)``.

    The tail projection ``R_N q`` keeps the Fourier modes ``|n| >= N``.
    """
    qw = weighted_norm(p, w)
    N = max(1, math.ceil(4.0 * qw))
    name = f"gap-estimate[{w.describe()}]"
    if N > spec.n_max:
        return CheckResult(name, INFO, math.nan, math.nan, ({"N": N, "note": "N beyond n_max"},), hard=False)
    tail, sup = weighted_gap_sums(spec, w, N)
    recs = [
        {"N": N, "kind": "tail", "lhs": tail, "rhs": 9.0 * tail_norm(p, w, N) ** 2 + 576.0 / N * qw ** 4},
        {"N": N, "kind": "sup", "lhs": sup, "rhs": 6.0 * qw},
    ]
    return _inequality(name, recs)


def check_weighted_estimate(p: Potential, spec: PeriodicSpectrum, acts: ActionSpectrum,
                            w: Weight, r: float) -> CheckResult:
    """``sum w_{2n}^2 (2 n pi) I_n <= (2^12 (1+||q||_w)^2 + w(16 ||q||_w^(3/2-r))^2) ||q||_w^2``."""
    if not 0.0 <= r <= 0.5:
        raise ValueError("r must lie in [0, 1/2]")
    qw = weighted_norm(p, w)
    n = _n(acts)
    lhs = float(np.sum(np.asarray(w.at_integer(2 * n)) ** 2 * 2.0 * np.pi * n * acts.values))
    rhs = (2.0 ** 12 * (1.0 + qw) ** 2 + w(16.0 * qw ** (1.5 - r)) ** 2) * qw ** 2
    return _inequality(f"weighted[{w.describe()}, r={r:g}]", [{"lhs": lhs, "rhs": rhs}])


def check_S_vanishing(p: Potential, max_level: int = DEFAULT_MAX_LEVEL) -> CheckResult:
    """``|S_2m| <= 1e-10 (1 + ||q||_0)^(2m)`` for ``1 <= m <= max_level``."""
    data = s_recursion(p, 2 * max_level)
    q0 = sobolev_norm(p, 0)
    recs = [{"m": m, "lhs": abs(data.S_values[2 * m - 1]), "rhs": 1e-10 * (1.0 + q0) ** (2 * m)}
            for m in range(1, max_level + 1)]
    return _inequality("S-vanishing", recs)


# -- asymptotic orders -------------------------------------------------------

def _slope_fit(name, nu, err, target, floor=FLOOR):
    keep = err > floor
    recs = [{"n": int(round(v / math.pi - 0.5)), "nu": v, "error": e, "used": bool(k)}
            for v, e, k in zip(nu, err, keep)]
    if np.count_nonzero(keep) < 3:
        return CheckResult(name, INFO, math.nan, target, tuple(recs), hard=False)
    slope = float(np.polyfit(np.log(nu[keep]), np.log(err[keep]), 1)[0])
    return CheckResult(name, PASS if slope <= target else FAIL, slope, target, tuple(recs))


def _frequencies(n_range):
    n = np.arange(n_range[0], n_range[1] + 1)
    return (n + 0.5) * np.pi


def check_discriminant_asymptotics(p: Potential, N: int, n_range=ASYMPTOTIC_RANGE,
                                   tol: float = ASYMPTOTIC_ODE_TOL) -> CheckResult:
    """Slope of ``|Delta(nu^2) - 2 cos Theta_N(nu)|`` against ``nu`` at ``nu = (n + 1/2) pi``."""
    nu = _frequencies(n_range)
    M = max((N - 3) // 2, 0)
    H = hamiltonians(p, M)
    err = np.empty(len(nu))
    for i, v in enumerate(nu):
        d = sum(H[m] / (4.0 ** (m + 1) * v ** (2 * m + 3)) for m in range((N - 3) // 2 + 1)) if N >= 3 else 0.0
        # cos(nu - d) expanded so that nu itself is never rounded against d
        ref = 2.0 * (math.cos(v) * math.cos(d) + math.sin(v) * math.sin(d))
        err[i] = abs(discriminant_at_frequency(p, v, tol).delta - ref)
    return _slope_fit(f"discriminant-asymptotics-N{N}", nu, err, -(N + 1) + 0.5)


def check_F_expansion(p: Potential, spec: PeriodicSpectrum, K: int, n_range=ASYMPTOTIC_RANGE,
                      tol: float = ASYMPTOTIC_ODE_TOL) -> CheckResult:
    """Slope of ``|F(nu^2) + i nu - i sum_k H_k / (4^(k+1) nu^(2k+3))|`` at ``nu = (n + 1/2) pi``."""
    if spec.n_max < n_range[1] + 1:
        spec = periodic_spectrum(p, n_range[1] + 1)
    nu = _frequencies(n_range)
    H = hamiltonians(p, K)
    err = np.empty(len(nu))
    for i, v in enumerate(nu):
        F = F_on_band(p, spec, v, tol)
        expansion = sum(H[k] / (4.0 ** (k + 1) * v ** (2 * k + 3)) for k in range(K + 1))
        # Im F + nu = nu - (n + 1/2) pi - asin_term
        err[i] = abs(v - (F.band_index + 0.5) * math.pi - F.asin_term - expansion)
    return _slope_fit(f"F-expansion-K{K}", nu, err, -(2 * K + 5) + 0.5)


# -- existence constants -----------------------------------------------------

def _sobolev_ratios(a: Analysis, m: int):
    p, I = a.potential, a.actions[0]
    qm, qm1 = sobolev_norm(p, m), sobolev_norm(p, m - 1)
    Ih, Il = action_norm(I, 2 * m + 1), action_norm(I, 2 * m - 1)
    r1 = Ih / (qm ** 2 + (1.0 + qm1) ** (2 * m) * qm1 ** 2)
    r2 = qm ** 2 / (Ih + (1.0 + Il) ** m * Il)
    return r1, r2, qm


def _birkhoff_ratios(a: Analysis, m: int):
    p, I = a.potential, a.actions[0]
    qm, qm1 = sobolev_norm(p, m), sobolev_norm(p, m - 1)
    Om, Om1 = birkhoff_norm(I, m), birkhoff_norm(I, m - 1)
    r1 = Om / (qm + (1.0 + qm1) ** m * qm1)
    r2 = qm / (Om + (1.0 + Om1) ** m * Om1)
    return r1, r2, qm


def _stability(name, corpus, m, ratios, factor, cache):
    recs = []
    base, doubled = [], []
    for member in corpus:
        if member.potential.is_zero:
            continue
        a0 = _cached(cache, member.potential)
        a1 = _cached(cache, member.potential.scaled(factor))
        r0, r1 = ratios(a0, m), ratios(a1, m)
        base.append(r0[:2])
        doubled.append(r1[:2])
        recs.append({"member": member.name, "r1": r0[0], "r2": r0[1], "norm_m": r0[2],
                     "r1_scaled": r1[0], "r2_scaled": r1[1], "norm_m_scaled": r1[2]})
    if not base:
        return CheckResult(name, INFO, math.nan, STABILITY_FACTOR, tuple(recs), hard=False)
    b, d = np.max(base, axis=0), np.max(doubled, axis=0)
    change = np.maximum(d / b, b / d)
    residual = float(np.max(change))
    finite = bool(np.all(np.isfinite(b)) and np.all(np.isfinite(d)))
    status = PASS if finite and residual < STABILITY_FACTOR else FAIL
    summary = {"max_r1": b[0], "max_r2": b[1], "max_r1_scaled": d[0], "max_r2_scaled": d[1],
               "scale_factor": factor}
    return CheckResult(name, status, residual, STABILITY_FACTOR, (summary,) + tuple(recs))


def _cached(cache, p):
    if cache is None:
        return analyze(p, levels=(0,))
    if p not in cache:
        cache[p] = analyze(p, levels=(0,))
    return cache[p]


def check_sobolev_estimates(corpus: Sequence[CorpusMember], m: int, factor: float = 2.0,
                            cache: dict | None = None) -> CheckResult:
    """Ratios of the action/Sobolev two-sided estimates and their stability under scaling."""
    if m < 1:
        raise ValueError("m must be >= 1")
    return _stability(f"sobolev-estimates-m{m}", corpus, m, _sobolev_ratios, factor, cache)


def check_birkhoff_estimate(corpus: Sequence[CorpusMember], m: int, factor: float = 2.0,
                            cache: dict | None = None) -> CheckResult:
    """Same protocol as :func:`check_sobolev_estimates` with Birkhoff-coordinate norms."""
    if m < 1:
        raise ValueError("m must be >= 1")
    return _stability(f"birkhoff-estimate-m{m}", corpus, m, _birkhoff_ratios, factor, cache)


# -- reports -----------------------------------------------------------------

SUMMARY_WEIGHTS = (Weight.sobolev(0.5), Weight.abel(0.0, 0.1), Weight.gevrey(0.0, 0.1, 0.5))


def potential_summary(p: Potential) -> dict:
    return {
        "modes": p.to_json_dict(),
        "max_mode": p.max_mode,
        "sobolev_norms": [sobolev_norm(p, m) for m in range(4)],
        "weighted_norms": {w.describe(): weighted_norm(p, w) for w in SUMMARY_WEIGHTS},
    }


@dataclass
class VerificationReport:
    potential: dict
    checks: list = field(default_factory=list)
    config: dict = field(default_factory=dict)

    @property
    def failed(self) -> list:
        return [c for c in self.checks if c.failed]

    @property
    def exit_code(self) -> int:
        return 1 if self.failed else 0

    def to_dict(self) -> dict:
        return {
            "potential": _clean(self.potential),
            "checks": [c.to_dict() for c in self.checks],
            "config": _clean(self.config),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, allow_nan=False) + "\n"


def _suites(selected) -> tuple:
    selected = ("all",) if not selected else tuple(selected)
    if "all" in selected:
        return SUITES
    unknown = set(selected) - set(SUITES)
    if unknown:
        raise ValueError(f"unknown suite(s): {sorted(unknown)}; choose from {', '.join(SUITES)}")
    return tuple(s for s in SUITES if s in selected)


def _potential_checks(a: Analysis, suites, prefix=""):
    p, spec, acts = a.potential, a.spectrum, a.actions
    out = []
    if "parseval" in suites:
        out.append(check_parseval(p, spec, acts[0], float(a.H[0])))
    if "trace" in suites:
        for m in range(1, len(a.H)):
            if m in acts:
                out.append(check_trace_formula(p, spec, m, acts[m], a.H))
    if "localization" in suites:
        out.append(check_localization(p, spec))
    if "action-gap" in suites:
        out.extend(check_action_gap(p, spec, acts[0], s) for s in (0.0, 0.5))
    if "injn" in suites:
        out.append(check_InJn(p, spec, acts))
    if "mean-value" in suites:
        out.append(check_mean_value(spec, acts))
    if "gap-estimate" in suites:
        out.extend(check_gap_estimate(p, spec, w) for w, _ in DEFAULT_WEIGHTS)
    if "weighted" in suites:
        out.extend(check_weighted_estimate(p, spec, acts[0], w, r) for w, r in DEFAULT_WEIGHTS)
    if "asymptotics" in suites:
        out.extend(check_discriminant_asymptotics(p, N) for N in (3, 5))
    if "f-expansion" in suites:
        out.extend(check_F_expansion(p, spec, K) for K in (0, 1))
    if "s-vanishing" in suites:
        out.append(check_S_vanishing(p))
    if prefix:
        out = [CheckResult(prefix + c.name, c.status, c.residual, c.bound, c.details, c.hard) for c in out]
    return out


def _config(n_max, suites, quad_rtol, ode_tol, extra=None):
    cfg = {
        "version": __version__,
        "n_max": n_max,
        "suites": list(suites),
        "quad_rtol": quad_rtol,
        "ode_tol": ode_tol,
        "asymptotic_ode_tol": ASYMPTOTIC_ODE_TOL,
        "asymptotic_range": list(ASYMPTOTIC_RANGE),
        "hierarchy_max_level": DEFAULT_MAX_LEVEL,
    }
    cfg.update(extra or {})
    return cfg


def verify_potential(p: Potential, suites=("all",), n_max: int | None = None,
                     quad_rtol: float = QUAD_RTOL, ode_tol: float = DEFAULT_ODE_TOL) -> VerificationReport:
    """Run the per-potential suites; corpus-only suites are skipped."""
    suites = _suites(suites)
    n_max = default_n_max(p) if n_max is None else int(n_max)
    a = analyze(p, n_max, quad_rtol=quad_rtol, ode_tol=ode_tol)
    checks = _potential_checks(a, suites)
    cfg = _config(n_max, [s for s in suites if s not in CORPUS_SUITES], quad_rtol, ode_tol)
    return VerificationReport(potential_summary(p), checks, cfg)


def verify_corpus(corpus: Sequence[CorpusMember], suites=("all",), n_max: int | None = None,
                  quad_rtol: float = QUAD_RTOL, ode_tol: float = DEFAULT_ODE_TOL,
                  seed: int | None = None) -> VerificationReport:
    """Per-member suites for every corpus member, then the corpus-level sweeps.

    ``n_max`` defaults to ``4 * bandwidth + 32`` for each member.
    """
    suites = _suites(suites)
    cache: dict = {}
    checks = []
    for member in corpus:
        p = member.potential
        nm = default_n_max(p) if n_max is None else int(n_max)
        a = analyze(p, nm, quad_rtol=quad_rtol, ode_tol=ode_tol)
        cache[p] = a
        checks.extend(_potential_checks(a, suites, prefix=member.name + "/"))
    for m in (1, 2):
        if "sobolev" in suites:
            checks.append(check_sobolev_estimates(corpus, m, cache=cache))
        if "birkhoff" in suites:
            checks.append(check_birkhoff_estimate(corpus, m, cache=cache))
    summary = {"corpus": [{"name": m.name, **potential_summary(m.potential)} for m in corpus]}
    cfg = _config(n_max if n_max is not None else "4*bandwidth+32", suites, quad_rtol, ode_tol,
                  {"seed": seed})
    return VerificationReport(summary, checks, cfg)
