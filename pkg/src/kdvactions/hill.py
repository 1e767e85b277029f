"""Floquet discriminant and periodic spectrum of the Hill operator -d^2/dx^2 + q.

The discriminant is ``Delta(lam) = y1(1) + y2'(1)`` where ``y1, y2`` are the
fundamental solutions of ``-y'' + q y = lam y``.  The periodic spectrum of the
operator on [0, 2] is the zero set of ``Delta^2 - 4``.  Two independent routes
are provided: root finding on the integrated discriminant and eigenvalues of
a Fourier truncation of the operator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh
from scipy.optimize import brentq

from . import _ode
from .potential import Potential, Weight, sobolev_norm

__all__ = [
    "DEFAULT_ODE_TOL",
    "BracketError",
    "IntegrationError",
    "DiscriminantValue",
    "MatrixSpectrum",
    "PeriodicSpectrum",
    "discriminant",
    "discriminant_many",
    "discriminant_at_frequency",
    "matrix_spectrum",
    "periodic_spectrum",
    "spectrum_from_matrix",
    "weighted_gap_sums",
]

# rtol of the integrator; atol is a tenth of it
DEFAULT_ODE_TOL = 1e-13
MIN_ODE_TOL = 1e-14
COLLAPSE_FACTOR = 1e-9


class IntegrationError(RuntimeError):
    """The adaptive integrator did not reach x = 1."""

    def __init__(self, lam, x_reached, reason):
        self.lam = lam
        self.x_reached = x_reached
        super().__init__(f"integration at lambda={lam!r} stopped at x={x_reached!r}: {reason}")


class BracketError(RuntimeError):
    """Sign conditions for a spectral bracket are violated."""

    def __init__(self, n, message):
        self.n = n
        super().__init__(f"n={n}: {message}")


@dataclass(frozen=True)
class DiscriminantValue:
    lam: float
    delta: float
    delta_dot: float
    est_error: float
    delta_dot_error: float
    monodromy: tuple[float, float, float, float]  # y1, y1', y2, y2' at x = 1

    @property
    def wronskian(self) -> float:
        y1, y1p, y2, y2p = self.monodromy
        return y1 * y2p - y1p * y2

    @property
    def delta_sq_minus_4(self) -> float:
        """``Delta^2 - 4`` in the cancellation-free form ``(y1 - y2')^2 + 4 y1' y2``.

        Equal to ``Delta^2 - 4`` because the Wronskian is one.
        """
        y1, y1p, y2, y2p = self.monodromy
        return (y1 - y2p) ** 2 + 4.0 * y1p * y2


def _arrays(p: Potential):
    return (
        np.ascontiguousarray(p.mode_index, dtype=np.int64),
        np.ascontiguousarray(p.cos_coeffs, dtype=float),
        np.ascontiguousarray(p.sin_coeffs, dtype=float),
    )


def _check_tol(tol):
    if not tol >= MIN_ODE_TOL:
        raise ValueError(f"integrator tolerance must be >= {MIN_ODE_TOL:g}")


def _raise_status(lam, x, status):
    reason = "step size underflow" if status == _ode.STEP_UNDERFLOW else "step budget exhausted"
    raise IntegrationError(lam, x, reason)


def discriminant(p: Potential, lam: float, tol: float = DEFAULT_ODE_TOL) -> DiscriminantValue:
    """Evaluate ``Delta`` and ``d Delta / d lam`` at ``lam``.

    ``est_error`` is the accumulated local error estimate of ``y1 + y2'``.
    """
    _check_tol(tol)
    lam = float(lam)
    y, err, x, _, status = _ode.monodromy(lam, *_arrays(p), tol, 0.1 * tol)
    if status != _ode.OK:
        _raise_status(lam, x, status)
    return DiscriminantValue(
        lam=lam,
        delta=float(y[0] + y[3]),
        delta_dot=float(y[4] + y[7]),
        est_error=float(err[0] + err[3]),
        delta_dot_error=float(err[4] + err[7]),
        monodromy=(float(y[0]), float(y[1]), float(y[2]), float(y[3])),
    )


def discriminant_many(p: Potential, lams, tol: float = DEFAULT_ODE_TOL):
    """Vectorized evaluation; returns ``(states, errors)`` arrays of shape (len, 8)."""
    _check_tol(tol)
    lams = np.ascontiguousarray(lams, dtype=float)
    states, errs, reached, status = _ode.monodromy_batch(lams, *_arrays(p), tol, 0.1 * tol)
    bad = np.flatnonzero(status)
    if bad.size:
        i = int(bad[0])
        _raise_status(float(lams[i]), float(reached[i]), int(status[i]))
    return states, errs


def discriminant_at_frequency(p: Potential, nu: float, tol: float = DEFAULT_ODE_TOL) -> DiscriminantValue:
    """``Delta(nu^2)`` for ``nu > 0`` from the rotating-frame formulation.

    The spectral parameter enters only through ``nu`` itself, so there is no
    rounding of ``nu^2``, and the integration error scales with ``|q| / nu``
    instead of growing with the number of oscillations.  Intended for large
    ``nu``; ``delta_dot`` is not available and set to NaN.
    """
    _check_tol(tol)
    nu = float(nu)
    if not nu > 0:
        raise ValueError("nu must be positive")
    y, err, x, _, status = _ode.monodromy_rotating(nu, *_arrays(p), tol, 0.1 * tol)
    if status != _ode.OK:
        _raise_status(nu * nu, x, status)
    return DiscriminantValue(
        lam=nu * nu,
        delta=float(y[0] + y[3]),
        delta_dot=math.nan,
        est_error=float(err[0] + err[3]),
        delta_dot_error=math.nan,
        monodromy=(float(y[0]), float(y[1]), float(y[2]), float(y[3])),
    )


# -- matrix oracle ---------------------------------------------------------

@dataclass(frozen=True)
class MatrixSpectrum:
    eigenvalues: np.ndarray
    reliable: np.ndarray
    K: int

    def band_mid(self, k: int) -> float:
        """Midpoint between ``lam_k^+`` and ``lam_{k+1}^-``."""
        return 0.5 * (self.eigenvalues[2 * k] + self.eigenvalues[2 * k + 1])


def matrix_spectrum(p: Potential, K: int) -> MatrixSpectrum:
    """Eigenvalues of the truncation to ``exp(i pi k x)``, ``|k| <= K``.

    The Hermitian matrix is rotated to the real cos/sin basis and handed to a
    dense symmetric eigensolver.  The top quarter by index is flagged
    unreliable.
    """
    K = int(K)
    if K < 1 or K < 4 * p.max_mode:
        raise ValueError(f"K={K} too small: need K >= 4*max_mode = {4 * p.max_mode} and K >= 1")
    size = 2 * K + 1
    ks = np.arange(-K, K + 1)
    H = np.diag((ks * np.pi) ** 2).astype(complex)
    c = p.fourier()
    B = (len(c) - 1) // 2
    for m in range(1, B + 1):
        u = c[B + m]
        if u == 0:
            continue
        # entry (k, j) with k - j = 2m
        idx = np.arange(size - 2 * m)
        H[idx + 2 * m, idx] = u
        H[idx, idx + 2 * m] = np.conj(u)
    # columns: e_0, then (e_k + e_-k)/sqrt2 and (e_k - e_-k)/(i sqrt2)
    U = np.zeros((size, size), dtype=complex)
    U[K, 0] = 1.0
    r = 1.0 / math.sqrt(2.0)
    for k in range(1, K + 1):
        U[K + k, 2 * k - 1] = r
        U[K - k, 2 * k - 1] = r
        U[K + k, 2 * k] = -1j * r
        U[K - k, 2 * k] = 1j * r
    M = (U.conj().T @ H @ U).real
    M = 0.5 * (M + M.T)
    ev = eigh(M, eigvals_only=True)
    reliable = np.arange(size) < size - size // 4
    ev.setflags(write=False)
    reliable.setflags(write=False)
    return MatrixSpectrum(ev, reliable, K)


# -- periodic spectrum -----------------------------------------------------

@dataclass(frozen=True)
class PeriodicSpectrum:
    """``lam_0^+`` and pairs ``(lam_n^-, lam_n^+)`` for ``n = 1..n_max``.

    Arrays are indexed by ``n - 1``.  ``lambda_dot`` holds the zeros of
    ``d Delta / d lam``; it is NaN for spectra taken from the matrix oracle.
    """

    lambda0_plus: float
    lambda_minus: np.ndarray
    lambda_plus: np.ndarray
    lambda_dot: np.ndarray
    collapsed: np.ndarray
    norm0: float
    method: str = "ode"
    ode_tol: float = DEFAULT_ODE_TOL

    @property
    def n_max(self) -> int:
        return len(self.lambda_minus)

    @property
    def gap(self) -> np.ndarray:
        return self.lambda_plus - self.lambda_minus

    @property
    def tau(self) -> np.ndarray:
        return 0.5 * (self.lambda_plus + self.lambda_minus)

    @property
    def collapse_threshold(self) -> float:
        return COLLAPSE_FACTOR * max(1.0, self.norm0)

    def pair(self, n: int) -> tuple[float, float]:
        if not 1 <= n <= self.n_max:
            raise IndexError(f"n={n} outside 1..{self.n_max}")
        return float(self.lambda_minus[n - 1]), float(self.lambda_plus[n - 1])

    def edges(self) -> np.ndarray:
        """All band edges in increasing order, starting with ``lam_0^+``."""
        out = np.empty(2 * self.n_max + 1)
        out[0] = self.lambda0_plus
        out[1::2] = self.lambda_minus
        out[2::2] = self.lambda_plus
        return out

    def rows(self):
        """Tuples ``(n, lambda_minus, lambda_plus, lambda_dot, gap, tau)``; row 0 is the ground state."""
        yield (0, math.nan, self.lambda0_plus, math.nan, math.nan, math.nan)
        for n in range(1, self.n_max + 1):
            lm, lp = self.lambda_minus[n - 1], self.lambda_plus[n - 1]
            yield (n, lm, lp, self.lambda_dot[n - 1], lp - lm, 0.5 * (lm + lp))


def _oracle_size(p: Potential, n_top: int) -> int:
    # eigenvalue index 2*n_top + 1 has to lie in the reliable three quarters
    return max(4 * p.max_mode, 2 * n_top + 16, 16)


def spectrum_from_matrix(p: Potential, n_max: int, K: int | None = None) -> PeriodicSpectrum:
    """Periodic spectrum read off the matrix oracle."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    K = _oracle_size(p, n_max) if K is None else int(K)
    ms = matrix_spectrum(p, K)
    if not ms.reliable[2 * n_max]:
        raise ValueError(f"K={K} too small to resolve n_max={n_max}")
    ev = np.array(ms.eigenvalues[: 2 * n_max + 1])
    norm0 = sobolev_norm(p, 0)
    gap = ev[2::2] - ev[1::2]
    return PeriodicSpectrum(
        lambda0_plus=float(ev[0]),
        lambda_minus=ev[1::2].copy(),
        lambda_plus=ev[2::2].copy(),
        lambda_dot=np.full(n_max, math.nan),
        collapsed=gap < COLLAPSE_FACTOR * max(1.0, norm0),
        norm0=norm0,
        method="matrix",
        ode_tol=math.nan,
    )


class _Evaluator:
    """Memoized discriminant evaluations for root finding."""

    def __init__(self, p: Potential, tol: float):
        self.arrays = _arrays(p)
        self.tol = tol
        self.cache: dict[float, np.ndarray] = {}

    def state(self, lam: float) -> np.ndarray:
        y = self.cache.get(lam)
        if y is None:
            y, _, x, _, status = _ode.monodromy(lam, *self.arrays, self.tol, 0.1 * self.tol)
            if status != _ode.OK:
                _raise_status(lam, x, status)
            self.cache[lam] = y
        return y

    def g(self, lam: float) -> float:
        y = self.state(lam)
        return (y[0] - y[3]) ** 2 + 4.0 * y[1] * y[2]

    def ddot(self, lam: float) -> float:
        y = self.state(lam)
        return y[4] + y[7]


def _root(f, lo, hi):
    return brentq(f, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)


def periodic_spectrum(p: Potential, n_max: int, tol: float = DEFAULT_ODE_TOL) -> PeriodicSpectrum:
    """Band edges ``lam_0^+`` and ``lam_n^pm``, ``1 <= n <= n_max``, by root finding.

    For ``n >= 4||q||_0`` the roots are bracketed in ``|lam - n^2 pi^2| <= 4||q||_0``;
    below that index the brackets are midpoints of bands taken from the
    matrix oracle.  Inside each bracket the zero of ``d Delta / d lam`` is
    located first; the edges are the zeros of ``Delta^2 - 4`` on either side.
    ``tol`` is the integrator's relative tolerance.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    _check_tol(tol)
    norm0 = sobolev_norm(p, 0)
    if p.is_zero:
        free = (np.arange(1, n_max + 1) * math.pi) ** 2
        return PeriodicSpectrum(0.0, free.copy(), free.copy(), free.copy(),
                                np.ones(n_max, dtype=bool), 0.0, "ode", tol)
    ev = _Evaluator(p, tol)
    n0 = math.ceil(4.0 * norm0)
    radius = max(4.0 * norm0, 1e-3)
    oracle = matrix_spectrum(p, _oracle_size(p, n0 + 1)) if n0 > 1 else None

    lo0 = -(1.0 + norm0) * norm0 - 1.0
    hi0 = oracle.band_mid(0) if oracle is not None else 0.5 * (math.pi ** 2 - 4.0 * norm0)
    if not (ev.g(lo0) > 0 and ev.g(hi0) < 0):
        raise BracketError(0, "ground state not bracketed")
    lam0 = _root(ev.g, lo0, hi0)

    lm = np.empty(n_max)
    lp = np.empty(n_max)
    ld = np.empty(n_max)
    for n in range(1, n_max + 1):
        if n >= n0:
            c = (n * math.pi) ** 2
            lo, hi = c - radius, c + radius
        else:
            lo, hi = oracle.band_mid(n - 1), oracle.band_mid(n)
        d_lo, d_hi = ev.ddot(lo), ev.ddot(hi)
        if not d_lo * d_hi < 0:
            raise BracketError(n, f"d Delta/d lambda has no sign change on [{lo!r}, {hi!r}]")
        dot = _root(ev.ddot, lo, hi)
        g_lo, g_hi = ev.g(lo), ev.g(hi)
        if not (g_lo < 0 and g_hi < 0):
            raise BracketError(n, f"bracket ends [{lo!r}, {hi!r}] are not inside bands")
        if ev.g(dot) <= 0.0:
            lm[n - 1] = lp[n - 1] = dot
        else:
            lm[n - 1] = _root(ev.g, lo, dot)
            lp[n - 1] = _root(ev.g, dot, hi)
        ld[n - 1] = dot
    gap = lp - lm
    return PeriodicSpectrum(
        lambda0_plus=lam0,
        lambda_minus=lm,
        lambda_plus=lp,
        lambda_dot=ld,
        collapsed=gap < COLLAPSE_FACTOR * max(1.0, norm0),
        norm0=norm0,
        method="ode",
        ode_tol=tol,
    )


def weighted_gap_sums(spec: PeriodicSpectrum, w: Weight, N: int) -> tuple[float, float]:
    """``sum_{n>=N} w_{2n}^2 gamma_n^2`` and ``max_{n>=N} w_{2n} gamma_n`` over resolved gaps."""
    if not 1 <= N <= spec.n_max:
        raise ValueError(f"N={N} outside 1..{spec.n_max}")
    n = np.arange(N, spec.n_max + 1)
    terms = np.asarray(w.at_integer(2 * n), dtype=float) * spec.gap[N - 1:]
    return float(np.sum(terms ** 2)), float(np.max(terms))
