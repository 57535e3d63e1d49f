"""Command-line interface: output schema, exit codes, determinism."""

import json

import pytest

from coarseiv.cli import main

PEANUT_LOWER = "-5073/31720"
PEANUT_UPPER = "10/61"


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run_cli(capsys, *argv)
    assert code == 0, f"exit {code}, stderr: {err}"
    return json.loads(out)


# -- bounds ---------------------------------------------------------------------------


def test_bounds_peanut_document(capsys):
    doc = run_json(capsys, "bounds", "--preset", "peanut-ternary")
    assert doc["schema"] == "coarseiv/run/1"
    assert doc["config_echo"]["subcommand"] == "bounds"
    assert doc["config_echo"]["preset"] == "peanut-ternary"
    lp = doc["results"]["lp"]
    assert lp["lower"]["exact"] == PEANUT_LOWER
    assert lp["upper"]["exact"] == PEANUT_UPPER
    assert lp["lower"]["display"] == "-0.16"
    assert lp["upper"]["display"] == "0.16"
    cf = doc["results"]["closed_form"]
    assert cf["form"] == "ten-term"
    assert cf["expected_tight"] is True
    assert doc["results"]["agreement"] is True


def test_bounds_homocysteine_display(capsys):
    doc = run_json(capsys, "bounds", "--preset", "homocysteine-3")
    lp = doc["results"]["lp"]
    assert lp["lower"]["display"] == "-0.62"
    assert lp["upper"]["display"] == "0.81"


def test_bounds_output_is_byte_deterministic(capsys):
    _, first, _ = run_cli(capsys, "bounds", "--preset", "peanut-ternary")
    _, second, _ = run_cli(capsys, "bounds", "--preset", "peanut-ternary")
    assert first == second


def test_bounds_estimand_override(capsys):
    doc = run_json(
        capsys,
        "bounds",
        "--preset",
        "peanut-ternary",
        "--estimand",
        "counterfactual_risk",
        "--x",
        "<0.2g",
    )
    assert doc["results"]["estimand"] == "P(Y(<0.2g)=1)"


# -- file inputs ----------------------------------------------------------------------


SCENARIO_AB = """\
schema: coarseiv/scenario/1
instrument_levels: [z0, z1]
levels:
  - {label: lo}
  - {label: hi}
estimand: {kind: risk_difference, x: lo, x_prime: hi}
"""

RECORDS_NUMERIC = """\
z,x_star,y
z0,1.0,0
z0,1.5,0
z0,2.0,1
z0,7.0,1
z1,1.0,0
z1,7.0,0
z1,8.0,1
z1,9.0,1
"""

COARSEN_AT_FIVE = """\
schema: coarseiv/coarsening/1
kind: interval
entries:
  - {label: lo, upper: 5}
  - {label: hi, lower: 5}
"""

INFEASIBLE_SUMMARY = """\
schema: coarseiv/summary/1
instrument_levels: [z0, z1]
exposure_levels: [lo, hi]
counts:
  - {z: z0, x: lo, y: 0, n: 10}
  - {z: z1, x: lo, y: 1, n: 10}
"""


@pytest.fixture
def input_files(tmp_path):
    paths = {}
    for name, text in [
        ("scenario.yaml", SCENARIO_AB),
        ("records.csv", RECORDS_NUMERIC),
        ("coarsen.yaml", COARSEN_AT_FIVE),
        ("bad_summary.yaml", INFEASIBLE_SUMMARY),
    ]:
        p = tmp_path / name
        p.write_text(text, encoding="utf-8")
        paths[name] = str(p)
    return paths


def test_bounds_from_records_with_coarsening(capsys, input_files):
    doc = run_json(
        capsys,
        "bounds",
        "--scenario",
        input_files["scenario.yaml"],
        "--records",
        input_files["records.csv"],
        "--coarsening",
        input_files["coarsen.yaml"],
    )
    assert doc["results"]["closed_form"]["form"] == "eight-term"
    assert doc["results"]["agreement"] is True
    echo = doc["config_echo"]
    assert len(echo["records_file"]["sha256"]) == 64
    assert len(echo["scenario_file"]["sha256"]) == 64
    lp = doc["results"]["lp"]
    assert lp["lower"]["exact"] != lp["upper"]["exact"]


def test_infeasible_summary_exits_3_with_certificate(capsys, input_files):
    code, out, err = run_cli(
        capsys,
        "bounds",
        "--scenario",
        input_files["scenario.yaml"],
        "--summary",
        input_files["bad_summary.yaml"],
    )
    assert code == 3
    assert "infeasibility certificate" in err


def test_slack_flag_rescues_infeasible_summary(capsys, input_files):
    doc = run_json(
        capsys,
        "bounds",
        "--scenario",
        input_files["scenario.yaml"],
        "--summary",
        input_files["bad_summary.yaml"],
        "--slack",
    )
    notes = doc["results"]["lp"]["notes"]
    assert any("SLACK PROJECTION APPLIED" in n for n in notes)


# -- exit codes ------------------------------------------------------------------------


def test_conflicting_inputs_exit_2(capsys, input_files):
    code, _, err = run_cli(
        capsys,
        "bounds",
        "--preset",
        "peanut-ternary",
        "--scenario",
        input_files["scenario.yaml"],
    )
    assert code == 2
    assert "error:" in err


def test_missing_inputs_exit_2(capsys):
    code, _, err = run_cli(capsys, "bounds")
    assert code == 2
    assert "need --preset or --scenario" in err


def test_cap_exit_4(capsys):
    code, _, err = run_cli(
        capsys, "bounds", "--preset", "peanut-ternary", "--max-variables", "1"
    )
    assert code == 4
    assert "exceed" in err


def test_ci_requires_seed_via_argparse(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["ci", "--preset", "peanut-ternary", "--method", "percentile"])
    assert exc.value.code == 2


def test_unknown_reproduce_example_rejected(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["reproduce", "lipids"])
    assert exc.value.code == 2


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert "coarseiv" in capsys.readouterr().out


# -- ci -------------------------------------------------------------------------------


def test_ci_percentile_document_and_determinism(capsys):
    argv = (
        "ci", "--preset", "peanut-ternary", "--method", "percentile",
        "--bootstrap", "25", "--seed", "31",
    )
    doc = run_json(capsys, *argv)
    res = doc["results"]
    assert res["method"] == "percentile"
    assert res["point"]["lower"]["exact"] == PEANUT_LOWER
    assert res["point"]["upper"]["exact"] == PEANUT_UPPER
    assert res["replicates"] == 25
    assert res["seed"] == 31
    assert res["tail_mode"] == "pointwise"
    _, first, _ = run_cli(capsys, *argv)
    _, second, _ = run_cli(capsys, *argv)
    assert first == second


def test_ci_m_out_of_n_reports_resample_size(capsys):
    doc = run_json(
        capsys,
        "ci", "--preset", "peanut-risk", "--method", "mn",
        "--bootstrap", "20", "--seed", "8",
    )
    res = doc["results"]
    assert res["method"] == "m-out-of-n"
    assert res["m"] == 128
    assert res["m_per_stratum"] == {"avoid": 64, "consume": 64}


def test_ci_multinomial_on_summary_preset(capsys):
    doc = run_json(
        capsys,
        "ci", "--preset", "homocysteine-3", "--method", "multinomial",
        "--bootstrap", "20", "--seed", "9",
    )
    assert doc["results"]["method"] == "parametric-multinomial"


# -- derive ---------------------------------------------------------------------------


def test_derive_text_latex_json(capsys):
    code, out, _ = run_cli(capsys, "derive", "--preset", "peanut-ternary")
    assert code == 0
    assert out.startswith("lower bound = max of 10 terms:")
    assert "min of 10 terms" in out

    code, out, _ = run_cli(
        capsys, "derive", "--preset", "peanut-ternary", "--format", "latex"
    )
    assert code == 0
    assert "\\cdot" in out

    doc = run_json(
        capsys, "derive", "--preset", "peanut-ternary", "--format", "json"
    )
    lower = doc["results"]["lower"]["terms"]
    assert len(lower) == 10
    assert {"constant", "cells", "rendered"} <= set(lower[0])


# -- verify ---------------------------------------------------------------------------


def test_verify_validity_suite_quick(capsys):
    doc = run_json(
        capsys,
        "verify", "--preset", "peanut-ternary", "--suite", "validity",
        "--trials", "5", "--seed", "14",
    )
    assert doc["results"]["validity"]["passed"] is True
    assert doc["results"]["passed"] is True


def test_verify_collapse_suite(capsys):
    doc = run_json(
        capsys,
        "verify", "--preset", "peanut-ternary", "--suite", "collapse",
        "--trials", "1", "--seed", "1",
    )
    rows = doc["results"]["collapse"]["rows"]
    assert rows[-1]["ternary"]["lower"]["exact"] == "0/1"
    assert rows[-1]["ternary"]["upper"]["exact"] == "0/1"
    assert doc["results"]["passed"] is True


# -- dump-lp --------------------------------------------------------------------------


def test_dump_lp_document(capsys):
    doc = run_json(capsys, "dump-lp", "--preset", "peanut-ternary")
    lp = doc["results"]["lp"]
    assert lp["rows"][-1] == "normalization"
    assert doc["diagnostics"]["n_rows"] == 13
    assert doc["results"]["rhs"] is not None
    assert len(doc["results"]["rhs"]) == 13
