"""KdV action variables as real integrals over the spectral gaps.

For a real potential the level-m action of the n-th gap is

    J_{n,m} = (2/pi) * integral over [lam_n^-, lam_n^+] of lam^m f_n(lam) d lam,
    f_n(lam) = arccosh((-1)^n Delta(lam) / 2),

and ``I_n = J_{n,0}``.  The substitution ``lam = tau_n + (gamma_n/2) sin(theta)``
removes the square-root behaviour of ``f_n`` at the gap edges, after which
Gauss-Legendre in ``theta`` converges spectrally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .hill import (
    DEFAULT_ODE_TOL,
    PeriodicSpectrum,
    discriminant,
    discriminant_at_frequency,
    discriminant_many,
)
from .potential import Potential

__all__ = [
    "QUAD_RTOL",
    "ActionSpectrum",
    "BandFunctionValue",
    "GapError",
    "f_on_gap",
    "gap_actions",
    "action",
    "all_actions",
    "action_levels",
    "action_norm",
    "birkhoff_norm",
    "F_on_band",
]

QUAD_RTOL = 1e-10
FIRST_NODES = 32
MAX_NODES = 512


class GapError(ValueError):
    """Argument outside the gap or band where a quantity is defined."""


@dataclass(frozen=True)
class ActionSpectrum:
    """Actions ``J_{n,m}`` for ``n = 1..n_max`` at a single level ``m`` (index ``n - 1``)."""

    level: int
    values: np.ndarray
    quad_error: np.ndarray
    converged: np.ndarray

    @property
    def n_max(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class BandFunctionValue:
    """``value = -i ((n + 1/2) pi + asin_term)`` with ``n = band_index``.

    ``asin_term`` is kept separately so that ``F + i nu`` can be formed
    without cancelling two numbers of size ``nu``.
    """

    nu: float
    value: complex
    band_index: int
    asin_term: float


def _sign(n: int) -> float:
    return -1.0 if n % 2 else 1.0


def f_on_gap(p: Potential, spec: PeriodicSpectrum, n: int, lam: float,
             tol: float = DEFAULT_ODE_TOL) -> float:
    """``arccosh((-1)^n Delta(lam) / 2)`` for ``lam`` in the closed n-th gap."""
    lo, hi = spec.pair(n)
    if spec.collapsed[n - 1]:
        raise GapError(f"gap {n} is collapsed")
    if not lo <= lam <= hi:
        raise GapError(f"lambda={lam!r} outside gap {n} = [{lo!r}, {hi!r}]")
    d = discriminant(p, lam, tol)
    arg = 0.5 * _sign(n) * d.delta
    if arg < 1.0 - 1e-9:
        raise GapError(f"(-1)^n Delta/2 = {arg!r} < 1 inside gap {n}: inconsistent spectrum")
    # the product form keeps full relative accuracy near the edges
    return float(np.arcsinh(0.5 * math.sqrt(max(d.delta_sq_minus_4, 0.0))))


@lru_cache(maxsize=None)
def _nodes(k: int):
    x, w = np.polynomial.legendre.leggauss(k)
    theta = 0.5 * np.pi * x
    return theta, 0.5 * np.pi * w * np.cos(theta), np.sin(theta)


def _f_values(states, errs):
    y1, y1p, y2, y2p = states[:, 0], states[:, 1], states[:, 2], states[:, 3]
    g = (y1 - y2p) ** 2 + 4.0 * y1p * y2
    dg = (2.0 * np.abs(y1 - y2p) * (errs[:, 0] + errs[:, 3])
          + 4.0 * (np.abs(y1p) * errs[:, 2] + np.abs(y2) * errs[:, 1]))
    f = np.arcsinh(0.5 * np.sqrt(np.maximum(g, 0.0)))
    f_hi = np.arcsinh(0.5 * np.sqrt(np.maximum(g + dg, 0.0)))
    f_lo = np.arcsinh(0.5 * np.sqrt(np.maximum(g - dg, 0.0)))
    return f, np.maximum(f_hi - f, f - f_lo)


def gap_actions(p: Potential, spec: PeriodicSpectrum, n: int, levels=(0,),
                rtol: float = QUAD_RTOL, tol: float = DEFAULT_ODE_TOL):
    """``J_{n,m}`` for every ``m`` in ``levels`` from one set of discriminant nodes.

    Nodes are doubled from 32 until every level changes by less than
    ``rtol`` relative, or by less than the integrand noise floor propagated
    from the integrator's error estimates.  Returns ``(values, errors,
    converged)`` with one entry per level; collapsed gaps give exact zeros.
    """
    levels = tuple(int(m) for m in levels)
    if spec.collapsed[n - 1]:
        z = np.zeros(len(levels))
        return z, z.copy(), True
    lo, hi = spec.pair(n)
    tau, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    powers = np.array(levels)
    prev = None
    k = FIRST_NODES
    while True:
        theta, w, s = _nodes(k)
        lam = tau + half * s
        states, errs = discriminant_many(p, lam, tol)
        delta = states[:, 0] + states[:, 3]
        if np.any(_sign(n) * delta < 2.0 - 2e-9):
            raise GapError(f"(-1)^n Delta < 2 inside gap {n}: inconsistent spectrum")
        f, df = _f_values(states, errs)
        lam_pow = lam[None, :] ** powers[:, None]
        cur = (2.0 / np.pi) * half * (lam_pow @ (w * f))
        noise = (2.0 / np.pi) * half * (np.abs(lam_pow) @ (w * df))
        if prev is not None:
            change = np.abs(cur - prev)
            if np.all(change <= rtol * np.abs(cur) + noise):
                return cur, change, True
        if k >= MAX_NODES:
            return cur, change, False
        prev = cur
        k *= 2


def action(p: Potential, spec: PeriodicSpectrum, n: int, m: int,
           rtol: float = QUAD_RTOL, tol: float = DEFAULT_ODE_TOL) -> float:
    """``J_{n,m}``; ``m = 0`` gives the action ``I_n``."""
    if not 1 <= n <= spec.n_max:
        raise IndexError(f"n={n} outside 1..{spec.n_max}")
    vals, _, _ = gap_actions(p, spec, n, (m,), rtol, tol)
    return float(vals[0])


def action_levels(p: Potential, spec: PeriodicSpectrum, levels=(0,), n_max: int | None = None,
                  rtol: float = QUAD_RTOL, tol: float = DEFAULT_ODE_TOL) -> dict[int, ActionSpectrum]:
    """Action spectra for several levels, sharing the discriminant evaluations."""
    n_max = spec.n_max if n_max is None else int(n_max)
    if not 1 <= n_max <= spec.n_max:
        raise ValueError(f"n_max={n_max} outside 1..{spec.n_max}")
    levels = tuple(sorted(set(int(m) for m in levels)))
    if any(m < 0 for m in levels):
        raise ValueError("levels must be nonnegative")
    vals = np.zeros((len(levels), n_max))
    errs = np.zeros((len(levels), n_max))
    conv = np.ones(n_max, dtype=bool)
    for n in range(1, n_max + 1):
        v, e, c = gap_actions(p, spec, n, levels, rtol, tol)
        vals[:, n - 1], errs[:, n - 1], conv[n - 1] = v, e, c
    return {m: ActionSpectrum(m, vals[i], errs[i], conv.copy()) for i, m in enumerate(levels)}


def all_actions(p: Potential, spec: PeriodicSpectrum, m: int = 0, n_max: int | None = None,
                rtol: float = QUAD_RTOL, tol: float = DEFAULT_ODE_TOL) -> ActionSpectrum:
    return action_levels(p, spec, (m,), n_max, rtol, tol)[m]


def action_norm(acts: ActionSpectrum, s: float) -> float:
    """``sum_n (2 n pi)^s I_n`` over the computed entries."""
    if acts.level != 0:
        raise ValueError("action norms are defined on level 0")
    n = np.arange(1, acts.n_max + 1)
    return float(np.sum((2.0 * np.pi * n) ** s * acts.values))


def birkhoff_norm(acts: ActionSpectrum, m: int) -> float:
    """Weighted norm of the Birkhoff coordinates, computed from the actions alone."""
    return math.sqrt(2.0 * action_norm(acts, 2 * m + 1))


def F_on_band(p: Potential, spec: PeriodicSpectrum, nu: float,
              tol: float = DEFAULT_ODE_TOL) -> BandFunctionValue:
    """``-i (n + 1/2) pi - i asin((-1)^(n+1) Delta(nu^2) / 2)`` for ``nu^2`` in the n-th band.

    ``Delta`` is evaluated in the rotating frame, which is accurate at large ``nu``.
    """
    if not nu > 0:
        raise ValueError("nu must be positive")
    lam = nu * nu
    edges = spec.edges()
    # band n is [lam_n^+, lam_{n+1}^-]: edges[2n], edges[2n+1]
    band = None
    for n in range(spec.n_max):
        if edges[2 * n] <= lam <= edges[2 * n + 1]:
            band = n
            break
    if band is None:
        if lam > edges[-1]:
            raise GapError(f"nu^2={lam!r} beyond the resolved spectrum (n_max={spec.n_max})")
        raise GapError(f"nu^2={lam!r} is not in a band")
    d = discriminant_at_frequency(p, nu, tol)
    arg = min(1.0, max(-1.0, -_sign(band) * 0.5 * d.delta))
    phase = math.asin(arg)
    value = complex(0.0, -(band + 0.5) * math.pi - phase)
    return BandFunctionValue(float(nu), value, band, phase)
