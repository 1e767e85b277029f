"""Band-limited real zero-mean potentials and the norms used on them.

A potential is stored as the finite trigonometric sum

    q(x) = sum_n a_n cos(2 pi n x) + b_n sin(2 pi n x),   n >= 1,

so the mean vanishes by construction.  The complex Fourier coefficients are
``u_n = (a_n - i b_n) / 2`` and ``u_{-n} = conj(u_n)``.
"""

from __future__ import annotations

import json
import math
from collections.abc import Mapping
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "Potential",
    "PotentialFormatError",
    "Weight",
    "from_spec",
    "sobolev_norm",
    "weighted_norm",
    "tail_norm",
    "derivative",
    "load_potential",
]


class PotentialFormatError(ValueError):
    """Raised for malformed potential data or files."""


class Potential:
    """Real, 1-periodic, zero-mean trigonometric polynomial.

    Instances are immutable; all arrays are read-only.
    """

    __slots__ = ("_n", "_a", "_b")

    def __init__(self, modes: Mapping[int, tuple[float, float]] | None = None):
        modes = {} if modes is None else modes
        items = []
        for key, pair in modes.items():
            n = _as_mode(key)
            try:
                a, b = (float(v) for v in pair)
            except (TypeError, ValueError) as exc:
                raise PotentialFormatError(f"mode {key}: expected a pair (a, b)") from exc
            if not (math.isfinite(a) and math.isfinite(b)):
                raise PotentialFormatError(f"mode {n}: non-finite amplitude")
            items.append((n, a, b))
        items.sort()
        n = np.array([it[0] for it in items], dtype=np.int64)
        if len(set(n.tolist())) != len(n):
            raise PotentialFormatError("duplicate mode index")
        a = np.array([it[1] for it in items], dtype=float)
        b = np.array([it[2] for it in items], dtype=float)
        for arr in (n, a, b):
            arr.setflags(write=False)
        self._n, self._a, self._b = n, a, b

    # -- data access -------------------------------------------------------
    @property
    def mode_index(self) -> np.ndarray:
        return self._n

    @property
    def cos_coeffs(self) -> np.ndarray:
        return self._a

    @property
    def sin_coeffs(self) -> np.ndarray:
        return self._b

    @property
    def modes(self) -> dict[int, tuple[float, float]]:
        return {int(n): (float(a), float(b)) for n, a, b in zip(self._n, self._a, self._b)}

    @property
    def max_mode(self) -> int:
        nz = self._n[(self._a != 0.0) | (self._b != 0.0)]
        return int(nz.max()) if nz.size else 0

    @property
    def is_zero(self) -> bool:
        return self.max_mode == 0

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        arg = 2.0 * np.pi * np.multiply.outer(x, self._n)
        return np.cos(arg) @ self._a + np.sin(arg) @ self._b

    def fourier(self, bandwidth: int | None = None) -> np.ndarray:
        """Complex coefficients ``u_k`` for ``k = -B..B`` (index ``k + B``)."""
        B = self.max_mode if bandwidth is None else int(bandwidth)
        if B < self.max_mode:
            raise ValueError("bandwidth smaller than max_mode")
        c = np.zeros(2 * B + 1, dtype=complex)
        for n, a, b in zip(self._n, self._a, self._b):
            if n <= B:
                u = 0.5 * (a - 1j * b)
                c[B + n] = u
                c[B - n] = np.conj(u)
        return c

    @classmethod
    def from_fourier(cls, coeffs: np.ndarray) -> "Potential":
        """Inverse of :meth:`fourier`; the imaginary part of real data is dropped."""
        coeffs = np.asarray(coeffs)
        B = (len(coeffs) - 1) // 2
        modes = {}
        for n in range(1, B + 1):
            u = coeffs[B + n]
            if u != 0:
                modes[n] = (2.0 * u.real, -2.0 * u.imag)
        return cls(modes)

    # -- transformations ---------------------------------------------------
    def scaled(self, eps: float) -> "Potential":
        return Potential({n: (eps * a, eps * b) for n, (a, b) in self.modes.items()})

    def shifted(self, theta: float) -> "Potential":
        """The potential ``x -> q(x + theta)``."""
        out = {}
        for n, (a, b) in self.modes.items():
            c, s = math.cos(2 * math.pi * n * theta), math.sin(2 * math.pi * n * theta)
            out[n] = (a * c + b * s, b * c - a * s)
        return Potential(out)

    def reflected(self) -> "Potential":
        """The potential ``x -> q(-x)``."""
        return Potential({n: (a, -b) for n, (a, b) in self.modes.items()})

    # -- serialization -----------------------------------------------------
    def to_json_dict(self) -> dict:
        cos = {str(n): a for n, (a, b) in self.modes.items() if a != 0.0}
        sin = {str(n): b for n, (a, b) in self.modes.items() if b != 0.0}
        return {"cosine": cos, "sine": sin}

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "Potential":
        if not isinstance(data, Mapping):
            raise PotentialFormatError("top level must be an object")
        unknown = set(data) - {"cosine", "sine"}
        if unknown:
            raise PotentialFormatError(f"unknown field(s): {sorted(unknown)}")
        modes: dict[int, list[float]] = {}
        for field, slot in (("cosine", 0), ("sine", 1)):
            table = data.get(field, {})
            if not isinstance(table, Mapping):
                raise PotentialFormatError(f"field '{field}' must be an object")
            for key, value in table.items():
                try:
                    n = int(key, 10)
                except (TypeError, ValueError) as exc:
                    raise PotentialFormatError(f"field '{field}': bad mode key {key!r}") from exc
                if n < 1:
                    raise PotentialFormatError(
                        f"field '{field}': mode {n} is not allowed (keys must be >= 1)"
                    )
                if isinstance(value, bool) or not isinstance(value, (int, float)):
                    raise PotentialFormatError(f"field '{field}', mode {n}: amplitude must be a number")
                modes.setdefault(n, [0.0, 0.0])[slot] = float(value)
        return cls({n: tuple(v) for n, v in modes.items()})

    def __eq__(self, other):
        if not isinstance(other, Potential):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def _key(self):
        # all-zero modes do not change the function
        return tuple((n, ab) for n, ab in sorted(self.modes.items()) if ab != (0.0, 0.0))

    def __repr__(self):
        return f"Potential({self.modes!r})"


def _as_mode(key) -> int:
    if isinstance(key, bool):
        raise PotentialFormatError(f"bad mode key {key!r}")
    try:
        n = int(key)
    except (TypeError, ValueError) as exc:
        raise PotentialFormatError(f"bad mode key {key!r}") from exc
    if n != key and not isinstance(key, str):
        raise PotentialFormatError(f"bad mode key {key!r}")
    if n < 1:
        raise PotentialFormatError(f"mode {n} is not allowed: potentials have zero mean, keys must be >= 1")
    return n


def from_spec(modes: Mapping[int, tuple[float, float]]) -> Potential:
    return Potential(modes)


def load_potential(path) -> Potential:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PotentialFormatError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    try:
        return Potential.from_json_dict(data)
    except PotentialFormatError as exc:
        raise PotentialFormatError(f"{path}: {exc}") from exc


@dataclass(frozen=True)
class Weight:
    """Normalized, symmetric, submultiplicative, monotone weight on the integers.

    Families (all with ``<t> = 1 + |t|``):

    * ``sobolev(s)``:        ``<n pi>^s``
    * ``abel(s, a)``:        ``<n pi>^s exp(a |n|)``
    * ``gevrey(s, a, sigma)``: ``<n pi>^s exp(a |n|^sigma)``
    * ``custom(table)``:     ``table[|n|]`` for ``|n| < len(table)``

    Non-integer arguments are evaluated on the piecewise linear interpolant.
    """

    kind: str
    s: float = 0.0
    a: float = 0.0
    sigma: float = 1.0
    table: tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind not in ("sobolev", "abel", "gevrey", "custom"):
            raise ValueError(f"unknown weight kind {self.kind!r}")
        if self.s < 0:
            raise ValueError("weight exponent s must be >= 0")
        if self.kind in ("abel", "gevrey") and not self.a > 0:
            raise ValueError("weight rate a must be > 0")
        if self.kind == "gevrey" and not 0 < self.sigma < 1:
            raise ValueError("gevrey sigma must lie in (0, 1)")
        if self.kind == "custom" and not self.table:
            raise ValueError("custom weight needs a non-empty table")

    @classmethod
    def sobolev(cls, s: float) -> "Weight":
        return cls("sobolev", s=float(s))

    @classmethod
    def abel(cls, s: float, a: float) -> "Weight":
        return cls("abel", s=float(s), a=float(a))

    @classmethod
    def gevrey(cls, s: float, a: float, sigma: float) -> "Weight":
        return cls("gevrey", s=float(s), a=float(a), sigma=float(sigma))

    @classmethod
    def custom(cls, table) -> "Weight":
        return cls("custom", table=tuple(float(v) for v in table))

    def at_integer(self, n):
        n = np.abs(np.asarray(n))
        if self.kind == "custom":
            if np.any(n >= len(self.table)):
                raise ValueError("custom weight table too short")
            return np.asarray(self.table)[n.astype(int)]
        base = (1.0 + np.pi * n) ** self.s
        if self.kind == "abel":
            base = base * np.exp(self.a * n)
        elif self.kind == "gevrey":
            base = base * np.exp(self.a * n ** self.sigma)
        return base

    def __call__(self, t):
        t = np.abs(np.asarray(t, dtype=float))
        lo = np.floor(t)
        frac = t - lo
        w_lo = self.at_integer(lo.astype(np.int64))
        w_hi = self.at_integer(lo.astype(np.int64) + 1) if np.any(frac > 0) else w_lo
        out = w_lo + frac * (w_hi - w_lo)
        return float(out) if out.ndim == 0 else out

    def describe(self) -> str:
        if self.kind == "sobolev":
            return f"sobolev(s={self.s:g})"
        if self.kind == "abel":
            return f"abel(s={self.s:g}, a={self.a:g})"
        if self.kind == "gevrey":
            return f"gevrey(s={self.s:g}, a={self.a:g}, sigma={self.sigma:g})"
        return f"custom(len={len(self.table)})"


def _mode_power(p: Potential) -> np.ndarray:
    # |u_n|^2 + |u_{-n}|^2 for each stored mode
    return 0.5 * (p.cos_coeffs ** 2 + p.sin_coeffs ** 2)


def sobolev_norm(p: Potential, m: float) -> float:
    """``||u||_m`` with weights ``<2 n pi>^m``; real orders are accepted."""
    if m < 0:
        raise ValueError("order must be nonnegative")
    w2 = (1.0 + 2.0 * np.pi * p.mode_index) ** (2.0 * m)
    return float(np.sqrt(np.sum(w2 * _mode_power(p))))


def weighted_norm(p: Potential, w: Weight) -> float:
    """``||u||_w`` with weights ``w_{2n}``."""
    if p.mode_index.size == 0:
        return 0.0
    wn = np.asarray(w.at_integer(2 * p.mode_index), dtype=float)
    return float(np.sqrt(np.sum(wn ** 2 * _mode_power(p))))


def tail_norm(p: Potential, w: Weight, N: int) -> float:
    """Weighted norm of the Fourier tail projection onto modes ``|n| >= N``."""
    keep = p.mode_index >= N
    if not np.any(keep):
        return 0.0
    wn = np.asarray(w.at_integer(2 * p.mode_index[keep]), dtype=float)
    return float(np.sqrt(np.sum(wn ** 2 * _mode_power(p)[keep])))


def derivative(p: Potential, k: int) -> Potential:
    """The ``k``-th x-derivative, exact on the finite band."""
    if k < 0:
        raise ValueError("derivative order must be nonnegative")
    c = p.fourier()
    if c.size == 0 or k == 0:
        return p
    B = (len(c) - 1) // 2
    ks = np.arange(-B, B + 1)
    return Potential.from_fourier(c * (2j * np.pi * ks) ** k)
