"""Bootstrap confidence intervals for bound endpoints.

Three resampling schemes share one engine:

* ``percentile_ci`` — nonparametric bootstrap for contrast estimands,
  resampling records with replacement within each instrument stratum.
* ``m_out_of_n_ci`` — m-out-of-n bootstrap for boundary-prone single-risk
  estimands; by default m = ceil(n**power) (power 0.75), optionally the
  consecutive-interval-distance grid rule (rho, J).
* ``parametric_multinomial_ci`` — parametric bootstrap for summary-only data,
  drawing cell counts from per-stratum multinomials at the observed
  probabilities.

Every replicate recomputes the bounds through the exact LP solver (warm
restarts across replicates), never through a shortcut estimator.  Replicates
whose resampled table is incompatible with the scenario are retried under the
L1-slack projection and counted; if more than ``max_infeasible_fraction`` of
replicates need rescue the run aborts.

Stratified resampling of records is realized by drawing per-stratum
multinomial counts at the exact empirical cell probabilities — the two
procedures induce identical distributions on the resampled tables, and all
analyses depend on data only through the tables.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import ceil
from typing import Sequence

import numpy as np

from .bounds import BoundsSolver, InfeasibleDistribution
from .data import (
    InputError,
    ObservedDistribution,
    RawRecord,
    Scenario,
    tabulate,
    validate,
)
from .response import build_constraint_system

__all__ = [
    "BootstrapSpec",
    "ExcessiveInfeasibility",
    "IntervalResult",
    "m_out_of_n_ci",
    "parametric_multinomial_ci",
    "percentile_ci",
]


class ExcessiveInfeasibility(RuntimeError):
    """Too many replicates violated the scenario's implied constraints."""

    def __init__(self, n_infeasible: int, replicates: int, threshold: Fraction):
        self.n_infeasible = n_infeasible
        self.replicates = replicates
        self.threshold = threshold
        super().__init__(
            f"{n_infeasible} of {replicates} bootstrap replicates were "
            f"incompatible with the scenario (threshold {float(threshold):.0%}); "
            "the scenario's assumptions are likely violated by the data"
        )


@dataclass(frozen=True)
class BootstrapSpec:
    """Resampling configuration shared by all bootstrap methods."""

    method: str  # "percentile" | "m-out-of-n" | "parametric-multinomial"
    replicates: int = 2000
    level: float | Fraction = 0.95
    seed: int | None = None
    rho: float = 0.75  # m-grid ratio (grid rule)
    grid: int = 8  # m-grid length J (grid rule)
    m_rule: str = "power"  # "power" | "grid"
    power: float = 0.75  # m = ceil(n**power) under the power rule
    tail_mode: str = "pointwise"  # "pointwise" | "symmetric"
    max_infeasible_fraction: float = 0.10

    def __post_init__(self):
        if self.method not in ("percentile", "m-out-of-n", "parametric-multinomial"):
            raise InputError(f"unknown bootstrap method {self.method!r}")
        if self.replicates < 1:
            raise InputError("bootstrap needs at least one replicate")
        if not 0 < self._level_fraction() < 1:
            raise InputError(f"confidence level must be in (0,1), got {self.level}")
        if self.seed is None:
            raise InputError("bootstrap requires an explicit seed")
        if not 0 < self.rho < 1:
            raise InputError(f"grid ratio rho must be in (0,1), got {self.rho}")
        if self.grid < 2:
            raise InputError("m-grid needs at least two points")
        if self.m_rule not in ("power", "grid"):
            raise InputError(f"unknown m rule {self.m_rule!r}")
        if not 0 < self.power <= 1:
            raise InputError(f"power must be in (0,1], got {self.power}")
        if self.tail_mode not in ("pointwise", "symmetric"):
            raise InputError(f"unknown tail mode {self.tail_mode!r}")
        if not 0 <= self.max_infeasible_fraction <= 1:
            raise InputError("infeasibility threshold must be in [0,1]")

    def _level_fraction(self) -> Fraction:
        lv = self.level
        return lv if isinstance(lv, Fraction) else Fraction(str(lv))


@dataclass(frozen=True)
class IntervalResult:
    """Point bounds plus a bootstrap confidence interval for the endpoints."""

    method: str
    point_lower: Fraction
    point_upper: Fraction
    ci_lower: Fraction
    ci_upper: Fraction
    level: Fraction
    replicates: int
    seed: int
    tail_mode: str
    m: int | None = None  # m-out-of-n only: total resample size
    m_per_stratum: dict[str, int] | None = None
    grid_intervals: tuple[tuple[int, Fraction, Fraction], ...] | None = None
    n_infeasible: int = 0
    warnings: tuple[str, ...] = ()
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.ci_lower > self.ci_upper:
            raise AssertionError("crossed confidence interval")


def _exact_quantile(values: list[Fraction], q: Fraction) -> Fraction:
    """Linear-interpolation quantile, exact over rationals."""
    v = sorted(values)
    if len(v) == 1:
        return v[0]
    h = q * (len(v) - 1)
    lo = int(h)  # floor: h >= 0
    frac = h - lo
    if frac == 0:
        return v[lo]
    return v[lo] + frac * (v[lo + 1] - v[lo])


def _tails(spec: BootstrapSpec) -> tuple[Fraction, Fraction]:
    level = spec._level_fraction()
    alpha = 1 - level
    if spec.tail_mode == "pointwise":
        return alpha, 1 - alpha
    return alpha / 2, 1 - alpha / 2


def _proportional_allocation(n_per_z: dict[str, int], m: int) -> dict[str, int]:
    """Largest-remainder split of m across strata, every stratum >= 1."""
    n = sum(n_per_z.values())
    shares = {z: Fraction(m * nz, n) for z, nz in n_per_z.items()}
    alloc = {z: max(1, int(s)) for z, s in shares.items()}
    remaining = m - sum(alloc.values())
    if remaining > 0:
        order = sorted(
            n_per_z, key=lambda z: (shares[z] - int(shares[z]), n_per_z[z]), reverse=True
        )
        for i in range(remaining):
            alloc[order[i % len(order)]] += 1
    return alloc


class _Resampler:
    """Shared engine: draw per-stratum tables, solve bounds, collect endpoints."""

    def __init__(self, scenario: Scenario, dist: ObservedDistribution):
        scenario, dist = validate(scenario, dist)
        self.scenario = scenario
        self.dist = dist
        self.system = build_constraint_system(scenario)
        self.solver = BoundsSolver(self.system)
        self.cells = [
            (x, y) for x in scenario.level_labels() for y in (0, 1)
        ]
        self.pvals = {
            z: np.array(
                [float(dist.prob(z, x, y)) for (x, y) in self.cells], dtype=float
            )
            for z in scenario.instrument_levels
        }

    def point_bounds(self) -> tuple[Fraction, Fraction, list[str]]:
        warnings: list[str] = []
        try:
            res = self.solver.solve_b(self.system.rhs(self.dist))
        except InfeasibleDistribution:
            res = self.solver.solve_b(self.system.rhs(self.dist), slack=True)
            warnings.extend(res.notes)
        return res.lower, res.upper, warnings

    def replicate_endpoints(
        self,
        seeds: Sequence[np.random.SeedSequence],
        sizes: dict[str, int],
    ) -> tuple[list[Fraction], list[Fraction], int]:
        lowers: list[Fraction] = []
        uppers: list[Fraction] = []
        n_infeasible = 0
        row_keys = self.system.row_keys
        for child in seeds:
            rng = np.random.Generator(np.random.PCG64(child))
            draw: dict[tuple[str, str, int], int] = {}
            for z in self.scenario.instrument_levels:
                counts = rng.multinomial(sizes[z], self.pvals[z])
                for (x, y), c in zip(self.cells, counts):
                    draw[(z, x, y)] = int(c)
            b = [
                Fraction(1)
                if key == "normalization"
                else Fraction(draw[key], sizes[key[0]])
                for key in row_keys
            ]
            try:
                res = self.solver.solve_b(b)
            except InfeasibleDistribution:
                n_infeasible += 1
                res = self.solver.solve_b(b, slack=True)
            lowers.append(res.lower)
            uppers.append(res.upper)
        return lowers, uppers, n_infeasible


def _check_infeasible(n_infeasible: int, total: int, spec: BootstrapSpec) -> None:
    threshold = Fraction(str(spec.max_infeasible_fraction))
    if total and Fraction(n_infeasible, total) > threshold:
        raise ExcessiveInfeasibility(n_infeasible, total, threshold)


def _ci_from_endpoints(
    lowers: list[Fraction], uppers: list[Fraction], spec: BootstrapSpec
) -> tuple[Fraction, Fraction]:
    q_lo, q_hi = _tails(spec)
    return _exact_quantile(lowers, q_lo), _exact_quantile(uppers, q_hi)


def _records_distribution(
    records: Sequence[RawRecord], scenario: Scenario
) -> ObservedDistribution:
    return tabulate(
        records,
        instrument_levels=scenario.instrument_levels,
        exposure_levels=scenario.level_labels(),
    )


def percentile_ci(
    records: Sequence[RawRecord], scenario: Scenario, spec: BootstrapSpec
) -> IntervalResult:
    """Stratified nonparametric percentile bootstrap for a contrast estimand."""
    if scenario.estimand is None or scenario.estimand.kind != "risk_difference":
        raise InputError(
            "percentile bootstrap is intended for contrast estimands; use the "
            "m-out-of-n bootstrap for single counterfactual risks"
        )
    spec = replace(spec, method="percentile")
    engine = _Resampler(scenario, _records_distribution(records, scenario))
    point_lower, point_upper, warnings = engine.point_bounds()
    seeds = np.random.SeedSequence(spec.seed).spawn(spec.replicates)
    lowers, uppers, n_infeasible = engine.replicate_endpoints(
        seeds, dict(engine.dist.n_per_z)
    )
    _check_infeasible(n_infeasible, spec.replicates, spec)
    ci_lower, ci_upper = _ci_from_endpoints(lowers, uppers, spec)
    return IntervalResult(
        method="percentile",
        point_lower=point_lower,
        point_upper=point_upper,
        ci_lower=ci_lower,
        ci_upper=ci_upper,
        level=spec._level_fraction(),
        replicates=spec.replicates,
        seed=spec.seed,
        tail_mode=spec.tail_mode,
        n_infeasible=n_infeasible,
        warnings=tuple(warnings),
        diagnostics={"n_per_stratum": dict(engine.dist.n_per_z)},
    )


def m_out_of_n_ci(
    records: Sequence[RawRecord],
    scenario: Scenario,
    spec: BootstrapSpec,
    *,
    force: bool = False,
) -> IntervalResult:
    """m-out-of-n bootstrap for boundary-prone single-risk estimands.

    m defaults to ceil(n**power); the grid rule (m_rule="grid") instead
    resamples at m_j = ceil(rho**j * n), j = 0..J-1, and picks the j whose
    interval is closest (max endpoint difference) to its successor's.
    Falls back to the plain percentile bootstrap with a warning when n is too
    small for distinct resample sizes.
    """
    if scenario.estimand is None:
        raise InputError("scenario carries no estimand")
    if scenario.estimand.kind != "counterfactual_risk" and not force:
        raise InputError(
            "m-out-of-n bootstrap targets single counterfactual risks; pass "
            "force=True to apply it to a contrast anyway"
        )
    spec = replace(spec, method="m-out-of-n")
    engine = _Resampler(scenario, _records_distribution(records, scenario))
    point_lower, point_upper, warnings = engine.point_bounds()
    warnings = list(warnings)
    n_per_z = dict(engine.dist.n_per_z)
    n = sum(n_per_z.values())
    level = spec._level_fraction()

    def run_m(m: int, seeds) -> tuple[tuple[Fraction, Fraction], int, dict[str, int]]:
        sizes = _proportional_allocation(n_per_z, m)
        lowers, uppers, bad = engine.replicate_endpoints(seeds, sizes)
        return _ci_from_endpoints(lowers, uppers, spec), bad, sizes

    if spec.m_rule == "power":
        m = ceil(n**spec.power)
        if m >= n:
            warnings.append(
                f"sample size {n} too small for an m-out-of-n resample "
                f"(rule gives m={m}); falling back to the percentile bootstrap"
            )
            m = n
        seeds = np.random.SeedSequence(spec.seed).spawn(spec.replicates)
        (ci_lower, ci_upper), n_infeasible, sizes = run_m(m, seeds)
        _check_infeasible(n_infeasible, spec.replicates, spec)
        grid_info = None
    else:
        m_grid = [min(n, ceil(spec.rho**j * n)) for j in range(spec.grid)]
        if len(set(m_grid)) == 1:
            warnings.append(
                f"sample size {n} too small for the m grid (all sizes equal "
                f"{m_grid[0]}); falling back to the percentile bootstrap"
            )
            m_grid = [n]
        all_seeds = np.random.SeedSequence(spec.seed).spawn(
            spec.replicates * len(m_grid)
        )
        intervals: list[tuple[Fraction, Fraction]] = []
        sizes_by_j: list[dict[str, int]] = []
        n_infeasible = 0
        for j, mj in enumerate(m_grid):
            ci, bad, sizes_j = run_m(
                mj, all_seeds[j * spec.replicates : (j + 1) * spec.replicates]
            )
            intervals.append(ci)
            sizes_by_j.append(sizes_j)
            n_infeasible += bad
        _check_infeasible(n_infeasible, spec.replicates * len(m_grid), spec)
        if len(m_grid) == 1:
            best = 0
        else:
            dist_j = [
                max(abs(a[0] - b[0]), abs(a[1] - b[1]))
                for a, b in zip(intervals, intervals[1:])
            ]
            best = min(range(len(dist_j)), key=lambda j: (dist_j[j], j))
        m = m_grid[best]
        sizes = sizes_by_j[best]
        ci_lower, ci_upper = intervals[best]
        grid_info = tuple(
            (mj, ci[0], ci[1]) for mj, ci in zip(m_grid, intervals)
        )

    return IntervalResult(
        method="m-out-of-n",
        point_lower=point_lower,
        point_upper=point_upper,
        ci_lower=ci_lower,
        ci_upper=ci_upper,
        level=level,
        replicates=spec.replicates,
        seed=spec.seed,
        tail_mode=spec.tail_mode,
        m=m,
        m_per_stratum=sizes,
        grid_intervals=grid_info,
        n_infeasible=n_infeasible,
        warnings=tuple(warnings),
        diagnostics={"n_per_stratum": n_per_z, "m_rule": spec.m_rule},
    )


def parametric_multinomial_ci(
    dist: ObservedDistribution, scenario: Scenario, spec: BootstrapSpec
) -> IntervalResult:
    """Parametric bootstrap from per-stratum multinomials at the observed p."""
    if not dist.has_counts:
        raise InputError(
            "parametric multinomial bootstrap needs stratum sample sizes "
            "(summary counts), not bare probabilities"
        )
    spec = replace(spec, method="parametric-multinomial")
    engine = _Resampler(scenario, dist)
    point_lower, point_upper, warnings = engine.point_bounds()
    seeds = np.random.SeedSequence(spec.seed).spawn(spec.replicates)
    lowers, uppers, n_infeasible = engine.replicate_endpoints(
        seeds, dict(dist.n_per_z)
    )
    _check_infeasible(n_infeasible, spec.replicates, spec)
    ci_lower, ci_upper = _ci_from_endpoints(lowers, uppers, spec)
    return IntervalResult(
        method="parametric-multinomial",
        point_lower=point_lower,
        point_upper=point_upper,
        ci_lower=ci_lower,
        ci_upper=ci_upper,
        level=spec._level_fraction(),
        replicates=spec.replicates,
        seed=spec.seed,
        tail_mode=spec.tail_mode,
        n_infeasible=n_infeasible,
        warnings=tuple(warnings),
        diagnostics={"n_per_stratum": dict(dist.n_per_z)},
    )
