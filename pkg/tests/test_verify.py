import json
import math

import numpy as np
import pytest

from kdvactions.hill import periodic_spectrum
from kdvactions.potential import Potential, Weight
from kdvactions.verify import (
    FAIL,
    INFO,
    PASS,
    CheckResult,
    VerificationReport,
    analyze,
    check_action_gap,
    check_birkhoff_estimate,
    check_discriminant_asymptotics,
    check_F_expansion,
    check_gap_estimate,
    check_InJn,
    check_localization,
    check_mean_value,
    check_parseval,
    check_S_vanishing,
    check_sobolev_estimates,
    check_trace_formula,
    check_weighted_estimate,
    default_n_max,
    tail_estimate,
    verify_potential,
)


@pytest.fixture(scope="module")
def mixed_analysis(mixed):
    return analyze(mixed)


def test_default_n_max():
    assert default_n_max(Potential({3: (1.0, 0.0)})) == 44


def test_tail_estimate():
    t = 0.5 ** np.arange(1, 21)
    assert tail_estimate(t) == pytest.approx(0.5 ** 20, rel=1e-12)
    assert tail_estimate(np.array([1.0, 0.0])) == 0.0
    assert tail_estimate(np.ones(5)) == math.inf
    assert tail_estimate(np.array([0.0, 0.0, 1.0])) == math.inf


def test_parseval_and_trace_pass(mixed, mixed_analysis):
    a = mixed_analysis
    c = check_parseval(mixed, a.spectrum, a.actions[0], float(a.H[0]))
    assert c.status == PASS and c.residual < 1e-12
    for m in range(1, 6):
        c = check_trace_formula(mixed, a.spectrum, m, a.actions[m], a.H)
        assert c.status == PASS, c
        assert c.residual < 1e-10


def test_trace_formula_validation(mixed, mixed_analysis):
    with pytest.raises(ValueError):
        check_trace_formula(mixed, mixed_analysis.spectrum, 0)


def test_under_truncation_is_informational(mixed):
    a = analyze(mixed, n_max=2, levels=(0,))
    c = check_parseval(mixed, a.spectrum, a.actions[0])
    assert c.residual > c.bound
    assert c.status == INFO and not c.failed and not c.hard


def test_wrong_identity_fails(mixed, mixed_analysis):
    a = mixed_analysis
    c = check_parseval(mixed, a.spectrum, a.actions[0], 1.1 * float(a.H[0]))
    assert c.status == FAIL and c.failed


@pytest.mark.parametrize("check", ["localization", "injn", "mean-value", "action-gap", "s-vanishing"])
def test_proven_inequalities_pass(mixed, mixed_analysis, check):
    a = mixed_analysis
    results = {
        "localization": [check_localization(mixed, a.spectrum)],
        "injn": [check_InJn(mixed, a.spectrum, a.actions)],
        "mean-value": [check_mean_value(a.spectrum, a.actions)],
        "action-gap": [check_action_gap(mixed, a.spectrum, a.actions[0], s) for s in (0.0, 0.5)],
        "s-vanishing": [check_S_vanishing(mixed)],
    }[check]
    for c in results:
        assert c.status == PASS, c.name
        assert c.residual <= 0 and c.bound == 0


def test_inequality_failure_reports_excess():
    p = Potential({1: (0.2, 0.0)})
    spec = periodic_spectrum(p, 4)
    bogus = type(spec)(1.0, spec.lambda_minus, spec.lambda_plus, spec.lambda_dot,
                       spec.collapsed, spec.norm0)
    c = check_localization(p, bogus)
    # lambda_0^+ = 1 violates the upper record only when it exceeds 256 ||q||^2 = 5.12; it does not
    assert c.status == PASS
    bogus = type(spec)(-5.0, spec.lambda_minus, spec.lambda_plus, spec.lambda_dot,
                       spec.collapsed, spec.norm0)
    c = check_localization(p, bogus)
    assert c.status == FAIL and c.residual > 4.5


def test_action_gap_ratios_tend_to_one(mathieu, mathieu_spec):
    from kdvactions.actions import all_actions

    acts = all_actions(mathieu, mathieu_spec, n_max=3)
    c = check_action_gap(mathieu, mathieu_spec, acts, 0.0)
    ratios = [d["ratio"] for d in c.details if "ratio" in d]
    assert ratios[0] == pytest.approx(1.0, abs=1e-4)
    with pytest.raises(ValueError):
        check_action_gap(mathieu, mathieu_spec, acts, 0.75)


@pytest.mark.parametrize("w,r", [(Weight.sobolev(0), 0.0), (Weight.sobolev(0.25), 0.25),
                                 (Weight.abel(0, 0.1), 0.0), (Weight.gevrey(0, 0.1, 0.5), 0.0)])
def test_weighted_checks_pass(mixed, mixed_analysis, w, r):
    a = mixed_analysis
    assert check_gap_estimate(mixed, a.spectrum, w).status == PASS
    assert check_weighted_estimate(mixed, a.spectrum, a.actions[0], w, r).status == PASS


def test_gap_estimate_beyond_resolution_is_informational():
    p = Potential({1: (4.0, 0.0)})
    spec = periodic_spectrum(p, 4)
    c = check_gap_estimate(p, spec, Weight.sobolev(0))
    assert c.status == INFO and not c.hard


@pytest.mark.parametrize("N", [3, 5])
def test_discriminant_asymptotic_slopes(mixed, N):
    c = check_discriminant_asymptotics(mixed, N)
    assert c.status == PASS
    assert c.residual <= -(N + 1) + 0.5


@pytest.mark.parametrize("K", [0, 1])
def test_F_expansion_slopes(mixed, mixed_spec, K):
    c = check_F_expansion(mixed, mixed_spec, K)
    assert c.status == PASS
    assert c.residual <= -(2 * K + 5) + 0.5


def test_slope_below_floor_is_informational():
    c = check_discriminant_asymptotics(Potential(), 3)
    assert c.status == INFO and not c.failed


def test_corpus_stability_checks(corpus_members):
    sub = corpus_members[2:5]
    cache = {}
    for m in (1, 2):
        for check in (check_sobolev_estimates, check_birkhoff_estimate):
            c = check(sub, m, cache=cache)
            assert c.status == PASS and c.residual < 2.0
            assert all(math.isfinite(v) for v in c.details[0].values())
    assert len(cache) == 6
    with pytest.raises(ValueError):
        check_sobolev_estimates(sub, 0)


def test_report_json_is_deterministic(mathieu):
    a = verify_potential(mathieu, ("parseval", "localization", "trace"))
    b = verify_potential(mathieu, ("parseval", "localization", "trace"))
    assert a.to_json() == b.to_json()
    doc = json.loads(a.to_json())
    assert set(doc) == {"potential", "checks", "config"}
    assert {c["name"] for c in doc["checks"]} >= {"parseval", "localization", "trace-m1"}
    assert a.exit_code == 0
    with pytest.raises(ValueError, match="unknown"):
        verify_potential(mathieu, ("nope",))


def test_report_exit_code_and_nan():
    bad = CheckResult("x", FAIL, math.nan, 0.0)
    soft = CheckResult("y", FAIL, 1.0, 0.0, hard=False)
    r = VerificationReport({}, [soft])
    assert r.exit_code == 0
    r.checks.append(bad)
    assert r.exit_code == 1
    assert json.loads(r.to_json())["checks"][1]["residual"] is None


@pytest.mark.parametrize("scale", [1.0, 5.0, 10.0])
def test_localization_under_scaling(mathieu, scale):
    p = mathieu.scaled(scale)
    c = check_localization(p, periodic_spectrum(p, 24))
    assert c.status == PASS
    kinds = {d["kind"] for d in c.details}
    assert ("upper" in kinds) == (4 * 0.2 * scale / math.sqrt(2) > 1)


def test_InJn_low_index_branch():
    p = Potential({1: (2.0, 0.0)})
    a = analyze(p, n_max=12, levels=(0, 1, 2, 3))
    c = check_InJn(p, a.spectrum, a.actions)
    assert c.status == PASS
    assert any(d["n"] < 4 * math.sqrt(2) for d in c.details)


@pytest.mark.parametrize("w,r", [(Weight.sobolev(0), 0.0), (Weight.sobolev(0.25), 0.25),
                                 (Weight.gevrey(0, 0.1, 0.5), 0.0)])
def test_weighted_estimate_small_cosine(mathieu, mathieu_spec, w, r):
    from kdvactions.actions import all_actions

    acts = all_actions(mathieu, mathieu_spec, n_max=20)
    assert check_weighted_estimate(mathieu, mathieu_spec, acts, w, r).status == PASS
    assert check_gap_estimate(mathieu, mathieu_spec, w).status == PASS


def test_zero_potential_checks_are_vacuous():
    p = Potential()
    a = analyze(p, n_max=8, levels=(0, 1))
    assert check_parseval(p, a.spectrum, a.actions[0]).status == PASS
    assert check_weighted_estimate(p, a.spectrum, a.actions[0], Weight.sobolev(0), 0).status == PASS
    assert check_InJn(p, a.spectrum, a.actions).status == PASS
    assert check_localization(p, a.spectrum).status == PASS
