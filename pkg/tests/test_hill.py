import math

import numpy as np
import pytest

from kdvactions.hill import (
    MIN_ODE_TOL,
    discriminant,
    discriminant_at_frequency,
    discriminant_many,
    matrix_spectrum,
    periodic_spectrum,
    spectrum_from_matrix,
    weighted_gap_sums,
)
from kdvactions.potential import Potential, Weight, sobolev_norm


def free_delta(lam):
    if lam > 0:
        return 2 * math.cos(math.sqrt(lam))
    if lam < 0:
        return 2 * math.cosh(math.sqrt(-lam))
    return 2.0


@pytest.mark.parametrize("lam", [-50.0, -1.0, 0.0, math.pi ** 2 / 4, 10.0, 400.0, 4000.0])
def test_free_discriminant(lam):
    d = discriminant(Potential(), lam)
    assert d.delta == pytest.approx(free_delta(lam), abs=1e-10 * max(1, abs(free_delta(lam))))
    assert abs(d.wronskian - 1) < 1e-10 * max(1, abs(free_delta(lam)) ** 2)


def test_free_discriminant_derivative():
    assert discriminant(Potential(), 0.0).delta_dot == pytest.approx(-1.0, abs=1e-12)
    lam = 30.0
    s = math.sqrt(lam)
    assert discriminant(Potential(), lam).delta_dot == pytest.approx(-math.sin(s) / s, abs=1e-12)


def test_discriminant_matches_oracle(oracles):
    ref = oracles["delta_cos1_lam10"]
    d = discriminant(Potential({1: (1.0, 0.0)}), 10.0)
    assert d.delta == pytest.approx(ref["delta"], abs=1e-10)
    assert d.delta_dot == pytest.approx(ref["delta_dot"], abs=1e-10)


def test_rotating_frame_agrees_with_direct(mixed):
    for nu in (3.0, 7.5, 20.0, 60.0):
        a = discriminant(mixed, nu * nu)
        b = discriminant_at_frequency(mixed, nu)
        assert b.delta == pytest.approx(a.delta, abs=1e-10)
        assert math.isnan(b.delta_dot)


def test_wronskian_is_one(mixed):
    lams = np.linspace(-20, 3000, 41)
    states, _ = discriminant_many(mixed, lams)
    w = states[:, 0] * states[:, 3] - states[:, 1] * states[:, 2]
    assert np.max(np.abs(w - 1)) < 1e-10


def test_delta_squared_form_matches_naive(mixed):
    for lam in (-5.0, 2.0, 55.0):
        d = discriminant(mixed, lam)
        assert d.delta_sq_minus_4 == pytest.approx(d.delta ** 2 - 4, abs=1e-9 * max(1, d.delta ** 2))


def test_tolerance_floor():
    with pytest.raises(ValueError, match="tolerance"):
        discriminant(Potential(), 1.0, tol=MIN_ODE_TOL / 10)


def test_matrix_spectrum_zero_potential():
    ms = matrix_spectrum(Potential(), 8)
    expected = np.sort(np.concatenate([[0.0], np.repeat((np.arange(1, 9) * np.pi) ** 2, 2)]))
    assert np.allclose(ms.eigenvalues, expected, atol=1e-11)
    assert ms.reliable.sum() == 17 - 17 // 4


def test_matrix_spectrum_too_small():
    with pytest.raises(ValueError, match="too small"):
        matrix_spectrum(Potential({5: (1.0, 0.0)}), 12)


def test_matrix_truncation_stability(mathieu):
    a = matrix_spectrum(mathieu, 64).eigenvalues[:81]
    b = matrix_spectrum(mathieu, 96).eigenvalues[:81]
    assert np.max(np.abs(a - b)) < 1e-10 * max(1.0, float(np.max(np.abs(b))))


def test_zero_potential_spectrum_is_exact():
    s = periodic_spectrum(Potential(), 10)
    assert s.lambda0_plus == 0.0
    assert np.array_equal(s.lambda_minus, (np.arange(1, 11) * np.pi) ** 2)
    assert np.all(s.gap == 0) and np.all(s.collapsed)


def test_mathieu_edges_against_high_precision(mathieu_spec, oracles):
    mp = oracles["edges_mathieu_mp"]
    assert mathieu_spec.lambda0_plus == pytest.approx(mp[0], abs=1e-13)
    assert mathieu_spec.pair(1) == pytest.approx(mp[1:], abs=1e-12)


@pytest.mark.parametrize("name", ["mathieu", "mixed"])
def test_edges_against_matrix_oracle(name, request, oracles):
    spec = request.getfixturevalue(f"{name}_spec")
    ref = np.array(oracles[f"edges_{name}"])
    assert np.max(np.abs(spec.edges() - ref)) < 1e-8


def test_first_gap_of_small_cosine(mathieu_spec):
    assert 0.18 <= mathieu_spec.gap[0] <= 0.22


def test_spectrum_structure(mixed, mixed_spec):
    e = mixed_spec.edges()
    assert np.all(np.diff(e) >= 0)
    lm, lp, ld = mixed_spec.lambda_minus, mixed_spec.lambda_plus, mixed_spec.lambda_dot
    assert np.all((lm <= ld) & (ld <= lp))
    for n in (1, 2, 5, 17):
        for lam in mixed_spec.pair(n):
            assert abs(abs(discriminant(mixed, lam).delta) - 2) < 1e-8
        d = discriminant(mixed, ld[n - 1]).delta
        assert (-1) ** n * d >= 2 - 1e-9


def test_localization_of_large_index_edges():
    q = Potential({1: (2.0, 0.0)})
    assert sobolev_norm(q, 0) == pytest.approx(math.sqrt(2))
    spec = periodic_spectrum(q, 24)
    n = np.arange(6, 25)
    for edge in (spec.lambda_minus, spec.lambda_plus):
        assert np.all(np.abs(edge[5:] - (n * np.pi) ** 2) <= 4 * math.sqrt(2))


@pytest.mark.parametrize("theta", [0.1, 0.37, 0.5])
def test_translation_and_reflection_invariance(mixed, mixed_spec, theta):
    shifted = periodic_spectrum(mixed.shifted(theta), 20)
    assert np.max(np.abs(shifted.edges() - mixed_spec.edges()[:41])) < 1e-8
    if theta == 0.5:
        refl = periodic_spectrum(mixed.reflected(), 20)
        assert np.max(np.abs(refl.edges() - mixed_spec.edges()[:41])) < 1e-8


def test_dual_method_agreement(mixed, mixed_spec):
    m = spectrum_from_matrix(mixed, 40)
    assert m.method == "matrix" and np.all(np.isnan(m.lambda_dot))
    assert np.max(np.abs(m.edges() - mixed_spec.edges())) < 1e-8


def test_rows_layout(mathieu_spec):
    rows = list(mathieu_spec.rows())
    assert len(rows) == 41
    assert rows[0][0] == 0 and math.isnan(rows[0][1])
    n, lm, lp, ld, gap, tau = rows[1]
    assert gap == pytest.approx(lp - lm) and tau == pytest.approx(0.5 * (lm + lp))
    with pytest.raises(IndexError):
        mathieu_spec.pair(41)


def test_weighted_gap_sums(mathieu_spec):
    w = Weight.sobolev(0)
    total, peak = weighted_gap_sums(mathieu_spec, w, 1)
    assert total == pytest.approx(float(np.sum(mathieu_spec.gap ** 2)))
    assert peak == pytest.approx(mathieu_spec.gap[0])
    with pytest.raises(ValueError):
        weighted_gap_sums(mathieu_spec, w, 0)
