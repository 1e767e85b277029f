"""KdV hierarchy Hamiltonians from the s_n recursion.

    s_1 = q,  s_2 = -q',  s_{n+1} = -s_n' - sum_{k=1}^{n-1} s_{n-k} s_k,

all in exact Fourier-coefficient arithmetic.  With ``S_n`` the mean of ``s_n``
over one period, ``H_m = (-1)^(m+1) S_{2m+3} / 2``.

The means of high members are small differences of very large coefficient
products, so the recursion runs in 40-digit arithmetic and is rounded to
double precision at the end.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np

from .potential import Potential

__all__ = [
    "DEFAULT_MAX_LEVEL",
    "HierarchyData",
    "s_recursion",
    "hamiltonian",
    "hamiltonians",
    "hamiltonian_direct",
    "theta",
]

DEFAULT_MAX_LEVEL = 5
WORKING_DIGITS = 40


@dataclass(frozen=True)
class HierarchyData:
    """``s_series[n-1]`` holds the centred coefficients of ``s_n``.

    ``S_scale[n-1]`` is the sum of all coefficients of the same recursion run
    on absolute values; it bounds every coefficient of ``s_n`` and sets the
    size of the cancellations behind ``S_values``.
    """

    s_series: list
    S_values: np.ndarray
    S_scale: np.ndarray

    @property
    def count(self) -> int:
        return len(self.s_series)

    @property
    def H_values(self) -> np.ndarray:
        M = (self.count - 3) // 2
        if M < 0:
            return np.zeros(0)
        m = np.arange(M + 1)
        return np.where(m % 2 == 0, -0.5, 0.5) * self.S_values[2 * m + 2]


def _pad(c: np.ndarray, B: int) -> np.ndarray:
    b = (len(c) - 1) // 2
    if b == B:
        return c
    out = np.zeros(2 * B + 1, dtype=c.dtype)
    if c.dtype == object:
        out[:] = 0
    out[B - b:B + b + 1] = c
    return out


def _dx(c: np.ndarray) -> np.ndarray:
    B = (len(c) - 1) // 2
    return c * (2j * np.pi * np.arange(-B, B + 1))


def _wavenumbers(c: np.ndarray, two_pi) -> np.ndarray:
    B = (len(c) - 1) // 2
    return np.array([two_pi * k for k in range(-B, B + 1)], dtype=object)


def s_recursion(p: Potential, count: int) -> HierarchyData:
    """``s_1 .. s_count`` with their means."""
    if count < 1:
        raise ValueError("count must be >= 1")
    return _s_recursion(p, int(count))


@lru_cache(maxsize=64)
def _s_recursion(p: Potential, count: int) -> HierarchyData:
    c = p.fourier() if p.max_mode else np.zeros(1, dtype=complex)
    B = (len(c) - 1) // 2
    with mpmath.workdps(WORKING_DIGITS):
        two_pi_i = mpmath.mpc(0, 2 * mpmath.pi)
        two_pi = 2 * mpmath.pi
        q = np.array([mpmath.mpc(z.real, z.imag) for z in c], dtype=object)
        s = [q]
        a = [np.array([abs(z) for z in q], dtype=object)]
        if count >= 2:
            s.append(-q * _wavenumbers(q, two_pi_i))
            a.append(a[0] * np.abs(_wavenumbers(q, two_pi)))
        for n in range(2, count):
            Bn = (len(s[-1]) - 1) // 2 + B
            acc = _pad(-s[n - 1] * _wavenumbers(s[n - 1], two_pi_i), Bn)
            maj = _pad(a[n - 1] * np.abs(_wavenumbers(a[n - 1], two_pi)), Bn)
            for k in range(1, n):
                acc = acc - _pad(np.convolve(s[n - k - 1], s[k - 1]), Bn)
                maj = maj + _pad(np.convolve(a[n - k - 1], a[k - 1]), Bn)
            s.append(acc)
            a.append(maj)
        S = np.array([float(x[(len(x) - 1) // 2].real) for x in s])
        scale = np.array([float(mpmath.fsum(x)) for x in a])
        series = [np.array([complex(z) for z in x]) for x in s]
    for x in series:
        x.setflags(write=False)
    S.setflags(write=False)
    scale.setflags(write=False)
    return HierarchyData(series, S, scale)


def hamiltonians(p: Potential, M: int = DEFAULT_MAX_LEVEL) -> np.ndarray:
    """``H_0 .. H_M`` from the recursion."""
    if M < 0:
        raise ValueError("M must be >= 0")
    return s_recursion(p, 2 * M + 3).H_values


def hamiltonian(p: Potential, m: int) -> float:
    return float(hamiltonians(p, m)[m])


def hamiltonian_direct(p: Potential, m: int) -> float:
    """``H_0 = 1/2 int q^2`` and ``H_1 = 1/2 int (q_x^2 + 2 q^3)`` from coefficient sums."""
    if m not in (0, 1):
        raise ValueError("closed forms exist for m = 0 and m = 1 only")
    if p.is_zero:
        return 0.0
    c = p.fourier()
    if m == 0:
        return 0.5 * float(np.sum(np.abs(c) ** 2))
    dq2 = float(np.sum(np.abs(_dx(c)) ** 2))
    cube = np.convolve(np.convolve(c, c), c)
    q3 = cube[(len(cube) - 1) // 2].real
    return 0.5 * (dq2 + 2.0 * q3)


def theta(p: Potential, nu: float, N: int, H: np.ndarray | None = None) -> float:
    """``nu - sum_{3 <= 2m+3 <= N} H_m / (4^(m+1) nu^(2m+3))``."""
    if not nu > 0:
        raise ValueError("nu must be positive")
    M = (N - 3) // 2
    if M < 0:
        return float(nu)
    if H is None:
        H = hamiltonians(p, M)
    out = float(nu)
    for m in range(M + 1):
        out -= H[m] / (4.0 ** (m + 1) * nu ** (2 * m + 3))
    return out
