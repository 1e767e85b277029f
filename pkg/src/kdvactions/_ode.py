"""Compiled DOP853 integration of Hill's equation over one period.

Two formulations share the stepper.

``monodromy`` integrates the state

    (y1, y1', y2, y2', d y1, d y1', d y2, d y2')

where ``d`` is the derivative with respect to the spectral parameter.  The
fundamental pair solves ``y'' = (q - lam) y`` with identity initial data, the
variational part solves ``(dy)'' = (q - lam) dy - y`` with zero initial data.

``monodromy_rotating`` is for ``lam = omega^2 > 0``.  It writes the
fundamental matrix as ``Y = Phi0 Z`` with ``Phi0`` the free propagator at
frequency ``omega`` and integrates ``Z' = Phi0^-1 Q Phi0 Z``, which stays
close to the identity and changes at rate ``|q| / omega``.  Rounding in the
state therefore no longer grows with the number of oscillations.
"""

import numpy as np
from numba import njit
from scipy.integrate._ivp import dop853_coefficients as _dop

N_STAGES = _dop.N_STAGES
_A = np.ascontiguousarray(_dop.A[:N_STAGES, :N_STAGES])
_B = np.ascontiguousarray(_dop.B)
_C = np.ascontiguousarray(_dop.C[:N_STAGES])
_E3 = np.ascontiguousarray(_dop.E3)
_E5 = np.ascontiguousarray(_dop.E5)

TWO_PI = 2.0 * np.pi

# status codes of monodromy()
OK = 0
STEP_UNDERFLOW = 1
TOO_MANY_STEPS = 2

MAX_STEPS = 2_000_000


@njit(cache=True)
def _potential(x, modes, a, b):
    s = 0.0
    for i in range(modes.shape[0]):
        arg = TWO_PI * modes[i] * x
        s += a[i] * np.cos(arg) + b[i] * np.sin(arg)
    return s


@njit(cache=True)
def _rhs(kind, x, y, lam, modes, a, b, out):
    if kind == 1:
        _rhs_rotating(x, y, lam, modes, a, b, out)
        return
    v = _potential(x, modes, a, b) - lam
    out[0] = y[1]
    out[1] = v * y[0]
    out[2] = y[3]
    out[3] = v * y[2]
    out[4] = y[5]
    out[5] = v * y[4] - y[0]
    out[6] = y[7]
    out[7] = v * y[6] - y[2]


@njit(cache=True)
def _rhs_rotating(x, z, om, modes, a, b, out):
    # z = (Z11, Z21, Z12, Z22); Phi0^-1 Q Phi0 = q [[-sc/om, -s^2/om^2], [c^2, sc/om]]
    qv = _potential(x, modes, a, b)
    c = np.cos(om * x)
    s = np.sin(om * x)
    al = -s * c / om
    be = -s * s / (om * om)
    ga = c * c
    de = s * c / om
    out[0] = qv * (al * z[0] + be * z[1])
    out[1] = qv * (ga * z[0] + de * z[1])
    out[2] = qv * (al * z[2] + be * z[3])
    out[3] = qv * (ga * z[2] + de * z[3])


@njit(cache=True)
def monodromy(lam, modes, a, b, rtol, atol):
    """Integrate over one period; returns (state, accumulated error, x, steps, status).

    The error control uses per-component absolute tolerances scaled by the
    natural amplitude of each component for the free equation, with
    ``omega = sqrt(1 + |lam|)``.
    """
    y = np.zeros(8)
    y[0] = 1.0
    y[3] = 1.0
    om = np.sqrt(1.0 + abs(lam))
    amp = np.empty(8)
    amp[0] = 1.0
    amp[1] = om
    amp[2] = 1.0 / om
    amp[3] = 1.0
    amp[4] = 1.0 / om
    amp[5] = 1.0
    amp[6] = 1.0 / (om * om)
    amp[7] = 1.0 / om
    return _integrate(0, lam, y, amp, min(1.0, 0.05 / om), modes, a, b, rtol, atol)


@njit(cache=True)
def monodromy_rotating(om, modes, a, b, rtol, atol):
    """Rotating-frame integration at ``lam = om^2``; returns (y, err, x, steps, status).

    ``y`` is the monodromy ``(y1, y1', y2, y2')`` at x = 1 and ``err`` the
    accumulated error estimate mapped through the free propagator.
    """
    z = np.zeros(4)
    z[0] = 1.0
    z[3] = 1.0
    amp = np.empty(4)
    amp[0] = 1.0
    amp[1] = om
    amp[2] = 1.0 / om
    amp[3] = 1.0
    h0 = min(1.0, 0.05 / max(om, 1.0))
    zf, ez, x, steps, status = _integrate(1, om, z, amp, h0, modes, a, b, rtol, atol)
    c = np.cos(om)
    s = np.sin(om)
    y = np.empty(4)
    # columns of Phi0(1) Z(1); Phi0 = [[c, s/om], [-om s, c]]
    y[0] = c * zf[0] + s / om * zf[1]
    y[1] = -om * s * zf[0] + c * zf[1]
    y[2] = c * zf[2] + s / om * zf[3]
    y[3] = -om * s * zf[2] + c * zf[3]
    e = np.empty(4)
    e[0] = abs(c) * ez[0] + abs(s) / om * ez[1]
    e[1] = om * abs(s) * ez[0] + abs(c) * ez[1]
    e[2] = abs(c) * ez[2] + abs(s) / om * ez[3]
    e[3] = om * abs(s) * ez[2] + abs(c) * ez[3]
    return y, e, x, steps, status


@njit(cache=True)
def _integrate(kind, lam, y, amp, h, modes, a, b, rtol, atol):
    n = y.shape[0]
    comp = np.zeros(n)
    acc_err = np.zeros(n)
    K = np.zeros((N_STAGES + 1, n))
    f = np.zeros(n)
    ytmp = np.zeros(n)
    ynew = np.zeros(n)
    fnew = np.zeros(n)
    incr = np.zeros(n)
    err5 = np.zeros(n)
    err3 = np.zeros(n)

    _rhs(kind, 0.0, y, lam, modes, a, b, f)
    x = 0.0
    steps = 0
    status = OK
    while x < 1.0:
        if steps >= MAX_STEPS:
            status = TOO_MANY_STEPS
            break
        if h < 1e-14:
            status = STEP_UNDERFLOW
            break
        last = False
        if x + h >= 1.0:
            h = 1.0 - x
            last = True
        for j in range(n):
            K[0, j] = f[j]
        for s in range(1, N_STAGES):
            for j in range(n):
                acc = 0.0
                for r in range(s):
                    acc += _A[s, r] * K[r, j]
                ytmp[j] = y[j] + h * acc
            _rhs(kind, x + _C[s] * h, ytmp, lam, modes, a, b, K[s])
        for j in range(n):
            acc = 0.0
            for r in range(N_STAGES):
                acc += _B[r] * K[r, j]
            incr[j] = h * acc
            ynew[j] = y[j] + incr[j]
        _rhs(kind, x + h, ynew, lam, modes, a, b, fnew)
        for j in range(n):
            K[N_STAGES, j] = fnew[j]

        e5n = 0.0
        e3n = 0.0
        for j in range(n):
            s5 = 0.0
            s3 = 0.0
            for r in range(N_STAGES + 1):
                s5 += _E5[r] * K[r, j]
                s3 += _E3[r] * K[r, j]
            err5[j] = s5
            err3[j] = s3
            sc = atol * amp[j] + rtol * max(abs(y[j]), abs(ynew[j]))
            e5n += (s5 / sc) ** 2
            e3n += (s3 / sc) ** 2
        if e5n == 0.0 and e3n == 0.0:
            err = 0.0
        else:
            err = h * e5n / np.sqrt((e5n + 0.01 * e3n) * n)

        if err <= 1.0:
            # accept; Kahan-compensated state update
            for j in range(n):
                yk = incr[j] - comp[j]
                t = y[j] + yk
                comp[j] = (t - y[j]) - yk
                y[j] = t
                f[j] = fnew[j]
                d5 = abs(err5[j])
                den = np.hypot(d5, 0.1 * abs(err3[j]))
                corr = d5 / den if den > 0.0 else 1.0
                acc_err[j] += h * d5 * corr
            x = 1.0 if last else x + h
            steps += 1
            if err == 0.0:
                fac = 10.0
            else:
                fac = min(10.0, max(0.2, 0.9 * err ** (-1.0 / 8.0)))
            h = h * fac
        else:
            fac = max(0.2, 0.9 * err ** (-1.0 / 8.0))
            h = h * fac
    return y, acc_err, x, steps, status


@njit(cache=True)
def monodromy_batch(lams, modes, a, b, rtol, atol):
    m = lams.shape[0]
    states = np.zeros((m, 8))
    errs = np.zeros((m, 8))
    status = np.zeros(m, dtype=np.int64)
    reached = np.zeros(m)
    for i in range(m):
        y, e, x, _, st = monodromy(lams[i], modes, a, b, rtol, atol)
        states[i] = y
        errs[i] = e
        status[i] = st
        reached[i] = x
    return states, errs, reached, status
