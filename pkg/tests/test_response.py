"""Response-type enumeration and constraint-system construction."""

from fractions import Fraction

import pytest

from coarseiv.data import (
    Estimand,
    ExposureLevel,
    InputError,
    ObservedDistribution,
    Scenario,
)
from coarseiv.response import (
    build_constraint_system,
    enumerate_exposure_types,
    enumerate_outcome_types,
)


def _scenario(extra=None):
    levels = [ExposureLevel("x"), ExposureLevel("xp")]
    if extra is not None:
        levels.append(extra)
    return Scenario(
        instrument_levels=("z0", "z1"),
        levels=tuple(levels),
        estimand=Estimand("risk_difference", x="x", x_prime="xp"),
    )


def test_exposure_type_count_and_order():
    types = enumerate_exposure_types(_scenario())
    assert len(types) == 4  # 2 levels ^ 2 instruments
    assert [t.assignment for t in types[:3]] == [(0, 0), (0, 1), (1, 0)]


def test_outcome_type_count_clean_only():
    types = enumerate_outcome_types(_scenario())
    assert len(types) == 4  # 2 clean bits
    assert all(t.zdep_bits == () for t in types)


def test_outcome_type_count_with_zdep_level():
    scn = _scenario(ExposureLevel("m", well_defining=False, z_dependent=True))
    types = enumerate_outcome_types(scn)
    # 2 clean bits x one z-indexed bit pair for m: 4 * 4.
    assert len(types) == 16
    assert types[0].clean_bits == (0, 0) and types[0].zdep_bits == ((0, 0),)


def test_system_shape_and_row_order():
    scn = _scenario(ExposureLevel("m", well_defining=False, z_dependent=True))
    system = build_constraint_system(scn)
    assert system.n_variables == 9 * 16  # 3^2 exposure maps x 16 outcome types
    assert system.n_rows == 2 * 3 * 2 + 1
    assert system.row_keys[0] == ("z0", "x", 0)
    assert system.row_keys[1] == ("z0", "x", 1)
    assert system.row_keys[6] == ("z1", "x", 0)
    assert system.row_keys[-1] == "normalization"


def test_each_column_hits_one_cell_per_stratum_plus_normalization():
    system = build_constraint_system(_scenario())
    norm_row = system.n_rows - 1
    for col in system.columns:
        rows = [r for r, _ in col]
        assert rows.count(norm_row) == 1
        assert len(rows) == 3  # one cell in each of two strata + normalization
        assert all(coef == 1 for _, coef in col)
        z_of = {r // 4 for r in rows if r != norm_row}  # 4 cell rows per stratum
        assert z_of == {0, 1}


def test_objective_is_contrast_of_clean_bits():
    system = build_constraint_system(_scenario())
    # theta = psi_{xp} - psi_x: +1 when bit(xp)=1,bit(x)=0; -1 reversed; else 0.
    for j in range(system.n_variables):
        _, otype = system.variable_pair(j)
        bx, bxp = otype.clean_bits
        assert system.objective[j] == bxp - bx


def test_counterfactual_risk_objective():
    scn = Scenario(
        instrument_levels=("z0", "z1"),
        levels=(ExposureLevel("x"), ExposureLevel("xp")),
        estimand=Estimand("counterfactual_risk", x="xp"),
    )
    system = build_constraint_system(scn)
    for j in range(system.n_variables):
        _, otype = system.variable_pair(j)
        assert system.objective[j] == otype.clean_bits[1]


def test_rhs_alignment():
    scn = _scenario()
    probs = {
        ("z0", "x", 0): Fraction(1, 2),
        ("z0", "xp", 1): Fraction(1, 2),
        ("z1", "x", 1): Fraction(1, 4),
        ("z1", "xp", 0): Fraction(3, 4),
    }
    dist = ObservedDistribution.from_probs(("z0", "z1"), ("x", "xp"), probs)
    b = scn and build_constraint_system(scn).rhs(dist)
    assert b[0] == Fraction(1, 2)  # (z0, x, 0)
    assert b[1] == 0  # (z0, x, 1)
    assert b[-1] == 1


def test_ill_defining_and_contaminated_systems_bit_identical():
    ill = _scenario(ExposureLevel("m", well_defining=False, z_dependent=True))
    con = _scenario(ExposureLevel("m", well_defining=True, z_dependent=True))
    sys_ill = build_constraint_system(ill)
    sys_con = build_constraint_system(con)
    assert sys_ill.lp_payload() == sys_con.lp_payload()
    # The reporting layer still distinguishes the scenarios.
    assert sys_ill.scenario.levels != sys_con.scenario.levels


def test_build_requires_estimand():
    scn = Scenario(("z0", "z1"), (ExposureLevel("x"), ExposureLevel("xp")))
    with pytest.raises(InputError):
        build_constraint_system(scn)
    est = Estimand("risk_difference", x="x", x_prime="xp")
    assert build_constraint_system(scn, est).estimand == est


def test_to_document_is_json_ready():
    import json

    doc = build_constraint_system(_scenario()).to_document()
    assert doc["schema"] == "coarseiv/lp/1"
    assert doc["rows"][-1] == "normalization"
    json.dumps(doc)  # must not raise


def test_mass_conservation_identity():
    # Column sums within each stratum block equal the normalization column:
    # every type realizes exactly one cell per stratum.
    system = build_constraint_system(
        _scenario(ExposureLevel("m", well_defining=False, z_dependent=True))
    )
    norm_row = system.n_rows - 1
    cells_per_z = 3 * 2
    for col in system.columns:
        for z_pos in (0, 1):
            block = [
                r
                for r, _ in col
                if r != norm_row and z_pos * cells_per_z <= r < (z_pos + 1) * cells_per_z
            ]
            assert len(block) == 1
