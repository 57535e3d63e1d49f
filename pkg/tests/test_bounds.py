"""Exact bounds: frozen values, closed-form agreement, certificates, slack."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coarseiv.bounds import (
    BoundsSolver,
    CapExceeded,
    InfeasibleDistribution,
    closed_form_classic,
    closed_form_single_level,
    closed_form_ternary_contrast,
    merge_columns,
    numeric_bounds,
)
from coarseiv.data import Estimand, ExposureLevel, ObservedDistribution, Scenario
from coarseiv.datasets import (
    homocysteine_distribution,
    homocysteine_scenario,
    peanut_distribution,
    peanut_risk_distribution,
    peanut_risk_scenario,
    peanut_scenario,
    scenario_preset,
)
from coarseiv.oracle import sample_scm
from coarseiv.response import build_constraint_system


# -- frozen exact values (independently recomputed; see decisions ledger) ----------

PEANUT_INTERVAL = (Fraction(-5073, 31720), Fraction(10, 61))
PEANUT_RISK_INTERVAL = (Fraction(48, 319), Fraction(64, 319))
HOMOCYSTEINE_INTERVAL = (Fraction(-70877, 114380), Fraction(28753, 35604))


def _bounds(preset: str):
    dist, scenario = scenario_preset(preset)
    return numeric_bounds(build_constraint_system(scenario), dist)


def test_peanut_ternary_exact_value():
    res = _bounds("peanut-ternary")
    assert res.interval == PEANUT_INTERVAL


def test_peanut_risk_exact_value():
    res = _bounds("peanut-risk")
    assert res.interval == PEANUT_RISK_INTERVAL


def test_homocysteine_exact_value_all_coarsenings_and_variants():
    assert _bounds("homocysteine-3").interval == HOMOCYSTEINE_INTERVAL
    assert _bounds("homocysteine-4").interval == HOMOCYSTEINE_INTERVAL
    for n_levels in (3, 4):
        dist = homocysteine_distribution(n_levels)
        for variant in ("ill-defining", "contaminated"):
            scn = homocysteine_scenario(n_levels, variant)
            # The four-level variants demote two levels, which multiplies the
            # outcome-response enumeration past the default variable cap.
            res = numeric_bounds(
                build_constraint_system(scn), dist, max_variables=20000
            )
            assert res.interval == HOMOCYSTEINE_INTERVAL


def test_peanut_flag_variants_give_identical_bounds():
    dist = peanut_distribution()
    results = {
        variant: numeric_bounds(
            build_constraint_system(peanut_scenario(variant)), dist
        ).interval
        for variant in ("ill-defining", "contaminated")
    }
    assert results["ill-defining"] == results["contaminated"]


# -- closed forms agree with the LP -------------------------------------------------


def test_ternary_closed_form_matches_lp_on_peanut():
    dist = peanut_distribution()
    cf = closed_form_ternary_contrast(dist, x=">=6g", x_prime="<0.2g", x_other="0.2-6g")
    assert cf.method == "closed-form"
    assert cf.interval == PEANUT_INTERVAL


def test_classic_closed_form_contains_ternary_on_peanut():
    dist = peanut_distribution()
    classic = closed_form_classic(dist, x=">=6g", x_prime="<0.2g")
    assert classic.lower <= PEANUT_INTERVAL[0]
    assert classic.upper >= PEANUT_INTERVAL[1]


def test_single_level_closed_form_matches_lp_on_peanut_risk():
    dist = peanut_risk_distribution()
    cf = closed_form_single_level(dist, x="<0.2g")
    assert cf.interval == PEANUT_RISK_INTERVAL


# -- certificates -------------------------------------------------------------------


def _check_certificate(system, dist, certificate, target):
    """The certificate is a feasible response-type distribution attaining target."""
    b = system.rhs(dist)
    acc = [Fraction(0)] * system.n_rows
    value = Fraction(0)
    for j, q in certificate.items():
        assert q >= 0
        for r, coef in system.columns[j]:
            acc[r] += coef * q
        value += system.objective[j] * q
    assert acc == list(b)
    assert value == target


def test_bound_certificates_attain_the_bounds():
    for preset in ("peanut-ternary", "peanut-risk", "homocysteine-3"):
        dist, scenario = scenario_preset(preset)
        system = build_constraint_system(scenario)
        res = numeric_bounds(system, dist)
        _check_certificate(system, dist, res.lower_certificate, res.lower)
        _check_certificate(system, dist, res.upper_certificate, res.upper)


# -- infeasibility, slack, crossed closed forms -------------------------------------


def _two_level_dist(cells):
    return ObservedDistribution.from_probs(("z0", "z1"), ("a", "b"), cells)


INFEASIBLE_DIST = _two_level_dist(
    {("z0", "a", 0): Fraction(1), ("z1", "a", 1): Fraction(1)}
)
TWO_CLEAN = Scenario(
    instrument_levels=("z0", "z1"),
    levels=(ExposureLevel("a"), ExposureLevel("b")),
    estimand=Estimand("risk_difference", x="a", x_prime="b"),
)


def test_infeasible_distribution_raises_with_checkable_certificate():
    system = build_constraint_system(TWO_CLEAN)
    with pytest.raises(InfeasibleDistribution) as exc:
        numeric_bounds(system, INFEASIBLE_DIST)
    cert, violation = exc.value.certificate, exc.value.violation
    assert violation > 0
    b = system.rhs(INFEASIBLE_DIST)
    row_index = {key: i for i, key in enumerate(system.row_keys)}
    assert sum(coef * b[row_index[k]] for k, coef in cert.items()) == violation
    # Every response-type column must have nonpositive inner product with it.
    pi = [Fraction(0)] * system.n_rows
    for k, coef in cert.items():
        pi[row_index[k]] = coef
    for col in system.columns:
        assert sum(coef * pi[r] for r, coef in col) <= 0


def test_slack_mode_recovers_bounds_with_warning_note():
    system = build_constraint_system(TWO_CLEAN)
    res = numeric_bounds(system, INFEASIBLE_DIST, slack=True)
    assert res.lower <= res.upper
    assert res.diagnostics["slack_total"] > 0
    assert any("SLACK PROJECTION APPLIED" in note for note in res.notes)


def test_crossed_closed_form_interval_is_flagged():
    res = closed_form_classic(INFEASIBLE_DIST, x="a", x_prime="b")
    assert res.lower > res.upper
    assert any("CROSSED INTERVAL" in note for note in res.notes)


# -- caps ---------------------------------------------------------------------------


def test_caps_raise_before_solving():
    dist, scenario = scenario_preset("peanut-ternary")
    system = build_constraint_system(scenario)
    with pytest.raises(CapExceeded):
        numeric_bounds(system, dist, max_variables=10)
    with pytest.raises(CapExceeded):
        numeric_bounds(system, dist, max_rows=5)


# -- presolve -----------------------------------------------------------------------


def test_merged_columns_partition_the_variables():
    for preset in ("peanut-ternary", "peanut-risk", "homocysteine-4"):
        _, scenario = scenario_preset(preset)
        system = build_constraint_system(scenario)
        merged = merge_columns(system)
        seen = sorted(j for group in merged.members for j in group)
        assert seen == list(range(system.n_variables))
        for g, group in enumerate(merged.members):
            costs = [system.objective[j] for j in group]
            assert merged.min_costs[g] == min(costs)
            assert merged.max_costs[g] == max(costs)
            assert system.objective[merged.min_reps[g]] == min(costs)
            assert system.objective[merged.max_reps[g]] == max(costs)


def test_ill_defining_ternary_merge_is_stable():
    # Regression pin: 144 response types collapse to 32 distinct columns.
    system = build_constraint_system(peanut_scenario("ill-defining"))
    assert system.n_variables == 144
    assert len(merge_columns(system).columns) == 32


# -- containment property ------------------------------------------------------------


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_bounds_contain_the_generating_truth(seed):
    scenario = peanut_scenario("ill-defining")
    scm = sample_scm(scenario, seed)
    res = numeric_bounds(build_constraint_system(scenario), scm.dist)
    assert res.lower <= scm.true_value <= res.upper


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_warm_solver_matches_fresh_solver(seed):
    scenario = peanut_scenario("contaminated")
    system = build_constraint_system(scenario)
    shared = BoundsSolver(system)
    for offset in range(3):
        scm = sample_scm(scenario, seed + offset)
        warm = shared.solve(scm.dist)
        cold = BoundsSolver(system).solve(scm.dist)
        assert (warm.lower, warm.upper) == (cold.lower, cold.upper)
