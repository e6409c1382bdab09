import importlib
import json
from argparse import ArgumentTypeError

import pytest

from qharm.enums import case_insensitive_enum, enum_choices
from qharm.enums.shared import ExitCode, ExponentRegion, OutputFormat, ProgressMode, QuadratureMode

ZSQUARED = {
    "n": 2,
    "components": [
        [{"exps": [2, 0], "num": 1, "den": 1}, {"exps": [0, 2], "num": -1, "den": 1}],
        [{"exps": [1, 1], "num": 2, "den": 1}],
    ],
}

SWEEP = {
    "n_values": [2],
    "K_values": [2.0],
    "samples": 64,
    "ensemble_size": 2,
    "q_grid": {"mode": "explicit", "values": [-4.0, -1.0, 0.5, 0.75, 2.0]},
}


def test_no_sub_command(run_cli):
    code, out, _ = run_cli()
    assert code == ExitCode.INVALID_INPUT.value
    assert out.startswith("usage: qharm")


def test_help_and_version(run_cli):
    code, out, _ = run_cli("--help")
    assert code == 0
    assert "thresholds" in out
    code, out, _ = run_cli("-v")
    assert code == 0
    assert out.startswith("qharm ")


@pytest.mark.parametrize(
    "argv",
    [
        ("thresholds", "--n", "2", "--K", "abc"),
        ("thresholds", "--n", "2"),
        ("verify", "-m", "identity:2", "--q", "1", "--samples", "0"),
        ("laplacian", "-m", "identity:2", "--point", "0,x", "--q", "1"),
        ("verify", "-m", "identity:2", "--q", "1", "--domain", "cube:0,0:1"),
        ("thresholds", "--n", "2", "--K", "2", "-f", "xml"),
    ],
)
def test_argument_errors(run_cli, argv):
    code, _, _ = run_cli(*argv)
    assert code == ExitCode.INVALID_INPUT.value


# thresholds


def test_thresholds_text(run_cli):
    code, out, _ = run_cli("thresholds", "--n", "2", "--K", "2")
    assert code == 0
    lines = {line.split(":")[0].strip(): line.split(":", 1)[1].strip() for line in out.splitlines()}
    assert lines["q_plus"] == "0.75"
    assert lines["q_minus"] == "-3"
    assert lines["all_positive_exponents_subharmonic"] == "false"


def test_thresholds_json_with_exponent(run_cli):
    code, out, _ = run_cli("thresholds", "--n", "3", "--K", "2", "--q", "0.5", "-f", "json")
    assert code == 0
    record = json.loads(out)
    assert record["q_plus"] == 0.5
    assert record["q_minus"] == -7.0
    assert record["gap"] == [-7.0, 0.5]
    assert record["region"] == str(ExponentRegion.SUBHARMONIC_ON_DOMAIN)
    assert record["classical_exponent"] is False


def test_thresholds_csv(run_cli):
    code, out, _ = run_cli("thresholds", "--n", "2", "--K", "2", "--format", "csv")
    assert code == 0
    header, row = out.splitlines()
    assert header == "n,K,q_plus,q_minus,gap,all_positive_exponents_subharmonic"
    assert row == "2,2,0.75,-3,-3 0.75,false"
    assert "\r" not in out


def test_thresholds_conformal_space(run_cli):
    code, out, _ = run_cli("thresholds", "--n", "3", "--K", "1", "-f", "json")
    assert code == 0
    record = json.loads(out)
    assert (record["q_plus"], record["q_minus"]) == (0.0, -1.0)
    assert record["all_positive_exponents_subharmonic"] is True


@pytest.mark.parametrize("n, K", [("1", "2"), ("2", "0.5")])
def test_thresholds_invalid_parameters(run_cli, n, K):
    code, out, err = run_cli("thresholds", "--n", n, "--K", K)
    assert code == ExitCode.INVALID_INPUT.value
    assert out == ""
    assert err


# laplacian


def test_laplacian_of_builtin_map(run_cli):
    code, out, _ = run_cli("laplacian", "-m", "stretch:2,2", "--point", "0,1", "--q", "0.5", "-f", "json")
    assert code == 0
    record = json.loads(out)
    assert record["map"] == "stretch:2,2"
    assert record["laplacian"] == pytest.approx(-0.5 * 2**-1.5, rel=1e-12)
    assert record["pointwise_threshold"] == pytest.approx(0.75, rel=1e-12)


def test_laplacian_of_map_file(run_cli, write_json):
    write_json("zsq.json", ZSQUARED)
    code, out, _ = run_cli("laplacian", "-m", "zsq.json", "--point", "1,1", "--q", "2", "-f", "json")
    assert code == 0
    record = json.loads(out)
    assert record["map"] == "zsq.json"
    assert record["laplacian"] == pytest.approx(32.0, rel=1e-12)


def test_laplacian_oracle_agrees(run_cli):
    code, out, _ = run_cli(
        "laplacian", "-m", "compress:3,2", "--point", "0.2,0.1,1", "--q", "-1.5", "--oracle", "-f", "json"
    )
    assert code == 0
    record = json.loads(out)
    assert abs(record["difference"]) <= 1e-6 * (1 + abs(record["laplacian"]))


def test_laplacian_oracle_mismatch(run_cli, monkeypatch):
    monkeypatch.setattr("qharm.commands.laplacian.ORACLE_MISMATCH_TOLERANCE", -1.0)
    code, out, _ = run_cli("laplacian", "-m", "identity:2", "--point", "0.5,0.5", "--q", "1", "--oracle")
    assert code == ExitCode.CROSS_CHECK_FAILED.value
    assert "oracle_value" in out


@pytest.mark.parametrize("step", ["0", "-1e-3", "nan"])
def test_laplacian_rejects_a_non_positive_fd_step(run_cli, step):
    code, out, err = run_cli(
        "laplacian", "-m", "identity:2", "--point", "0.5,0.5", "--q", "1", "--oracle", f"--fd-step={step}"
    )
    assert code == ExitCode.INVALID_INPUT.value
    assert out == ""
    assert "--fd-step" in err


def test_laplacian_uses_the_given_fd_step(run_cli, monkeypatch):
    steps = []

    def recording_fd_laplacian(f, x, cfg):
        steps.append(cfg.h)
        return 2**0.5, 0.0

    monkeypatch.setattr("qharm.commands.laplacian.fd_laplacian", recording_fd_laplacian)
    code, _, _ = run_cli(
        "laplacian", "-m", "identity:2", "--point", "0.5,0.5", "--q", "1", "--oracle", "--fd-step", "0.02"
    )
    assert code == 0
    assert steps == [0.02]


def test_laplacian_of_the_newtonian_kernel(run_cli):
    code, out, _ = run_cli("laplacian", "-m", "identity:3", "--point", "1,0,0", "--q", "-1", "-f", "json")
    assert code == 0
    assert abs(json.loads(out)["laplacian"]) <= 1e-9


def test_laplacian_at_a_zero(run_cli):
    code, _, err = run_cli("laplacian", "-m", "identity:2", "--point", "0,0", "--q", "0.5")
    assert code == ExitCode.INVALID_INPUT.value
    assert "Omega_0" in err


def test_laplacian_with_a_non_harmonic_map(run_cli, write_json):
    write_json(
        "bad.json",
        {"n": 2, "components": [[{"exps": [2, 0], "num": 1, "den": 1}], [{"exps": [0, 1], "num": 1, "den": 1}]]},
    )
    code, _, err = run_cli("laplacian", "-m", "bad.json", "--point", "1,1", "--q", "1")
    assert code == ExitCode.INVALID_INPUT.value
    assert "Component 1 is not harmonic" in err


def test_laplacian_with_a_missing_map(run_cli):
    code, _, err = run_cli("laplacian", "-m", "nowhere.json", "--point", "1,1", "--q", "1")
    assert code == ExitCode.INVALID_INPUT.value
    assert "nowhere.json" in err


# verify


def test_verify_pass(run_cli):
    code, out, _ = run_cli("verify", "-m", "stretch:2,2", "--q", "0.75", "--samples", "64", "-f", "json")
    assert code == 0
    record = json.loads(out)
    assert record["verdict"] == "pass"
    assert record["sampled"] == 64
    assert record["h_linear"] == pytest.approx(2.0)


def test_verify_fail(run_cli):
    code, out, _ = run_cli(
        "verify", "-m", "stretch:2,2", "--q", "0.5", "--samples", "64", "--witness-point", "0,1", "-f", "json"
    )
    assert code == ExitCode.VERIFY_FAILED.value
    record = json.loads(out)
    assert record["verdict"] == "fail"
    assert record["sampled"] == 65
    assert record["violation_count"] == 65
    assert record["guaranteed_region"] == str(ExponentRegion.GAP)


def test_verify_domain_dimension_mismatch(run_cli):
    code, _, _ = run_cli("verify", "-m", "stretch:2,2", "--q", "1", "--domain", "box:0,0,1:0.5")
    assert code == ExitCode.INVALID_INPUT.value


def test_verify_identity_from_domain_dimension(run_cli):
    code, out, _ = run_cli(
        "verify", "-m", "identity", "--q", "-1", "--domain", "ball:0,0,2:1", "--samples", "32", "-f", "json"
    )
    assert code == 0
    record = json.loads(out)
    assert record["sup_t"] == pytest.approx(-1.0)


def test_verify_is_reproducible(run_cli):
    argv = ("verify", "-m", "compress:3,2", "--q", "-2", "--samples", "128", "--seed", "9", "-f", "json")
    first = run_cli(*argv)
    assert first == run_cli(*argv)


# witness


def test_witness(run_cli):
    code, out, _ = run_cli("witness", "--n", "2", "--K", "2", "--q", "0.5", "-f", "json")
    assert code == 0
    record = json.loads(out)
    assert record["branch"] == "stretch"
    assert record["point"] == [0.0, 0.5]
    assert record["laplacian_value"] == pytest.approx(-0.5, rel=1e-12)
    assert record["axis_value"] == pytest.approx(-0.5 * 2**-1.5, rel=1e-12)


def test_witness_with_a_large_negative_exponent(run_cli):
    code, out, _ = run_cli("witness", "--n", "5", "--K", "10", "--q=-389", "-f", "json")
    assert code == 0
    record = json.loads(out)
    assert record["branch"] == "compress"
    assert record["point"] == [0.0, 0.0, 0.0, 0.0, 10.0]
    assert record["laplacian_value"] == pytest.approx(-38.9, rel=1e-9)
    assert record["axis_value"] is None


@pytest.mark.parametrize("q", ["1", "0", "-3"])
def test_no_witness_outside_the_gap(run_cli, q):
    code, out, err = run_cli("witness", "--n", "2", "--K", "2", "--q", q)
    assert code == ExitCode.NO_WITNESS.value
    assert out == ""
    assert err


# distortion


def test_distortion_at_a_point(run_cli):
    code, out, _ = run_cli("distortion", "-m", "stretch:3,2", "--point", "0,0,1", "-f", "json")
    assert code == 0
    record = json.loads(out)
    assert record["spectral"]["lambdas"] == pytest.approx([1.0, 1.0, 2.0])
    assert record["distortion"]["h_linear"] == pytest.approx(2.0)
    assert record["distortion"]["k_outer_inner"] == pytest.approx(4.0)


def test_distortion_on_a_domain(run_cli):
    code, out, _ = run_cli("distortion", "-m", "zsquared", "--domain", "box:1,1:0.5", "--samples", "128", "-f", "json")
    assert code == 0
    assert json.loads(out)["distortion"]["h_linear"] == pytest.approx(1.0, abs=1e-7)


def test_distortion_at_a_reflection(run_cli, write_json):
    write_json(
        "flip.json",
        {"n": 2, "components": [[{"exps": [1, 0], "num": 1, "den": 1}], [{"exps": [0, 1], "num": -1, "den": 1}]]},
    )
    code, _, _ = run_cli("distortion", "-m", "flip.json", "--point", "1,1")
    assert code == ExitCode.INVALID_INPUT.value


# sweep


def test_sweep_output_is_byte_identical(run_cli, write_json, tmp_path):
    write_json("sweep.json", SWEEP)
    assert run_cli("sweep", "-c", "sweep.json", "-o", "first.csv", "-p", "silent")[0] == 0
    assert run_cli("sweep", "-c", "sweep.json", "-o", "second.csv", "-p", "silent")[0] == 0
    first = (tmp_path / "first.csv").read_bytes()
    assert first == (tmp_path / "second.csv").read_bytes()
    lines = first.decode("utf-8").split("\n")
    assert lines[0] == "n,K,q,q_plus,q_minus,extremal_verdict,ensemble_verdict,witness_delta,ms"
    assert len(lines) == len(SWEEP["q_grid"]["values"]) + 2
    assert b"\r" not in first


def test_sweep_global_flags_override_the_config(run_cli, write_json):
    write_json("sweep.json", SWEEP)
    code, out, _ = run_cli("sweep", "-c", "sweep.json", "--seed", "7", "--samples", "32", "-f", "json", "-p", "silent")
    assert code == 0
    record = json.loads(out)
    assert record["config"]["seed"] == 7
    assert record["config"]["samples"] == 32
    assert record["config"]["format"] == "json"
    assert [row["extremal_verdict"] for row in record["rows"]] == ["pass", "fail", "fail", "pass", "pass"]


def test_sweep_timing_flag(run_cli, write_json):
    write_json("sweep.json", SWEEP)
    code, out, _ = run_cli("sweep", "-c", "sweep.json", "--timing", "-f", "json", "-p", "silent")
    assert code == 0
    record = json.loads(out)
    assert record["config"]["record_timing"] is True
    assert all(row["ms"] > 0 for row in record["rows"])


def test_sweep_config_errors(run_cli, write_json):
    code, _, err = run_cli("sweep", "-c", "missing.json")
    assert code == ExitCode.INVALID_INPUT.value
    assert "missing.json" in err
    write_json("bad.json", {**SWEEP, "half_width": 2})
    code, _, err = run_cli("sweep", "-c", "bad.json")
    assert code == ExitCode.INVALID_INPUT.value
    assert "half_width" in err


def test_sweep_theorem_violation(run_cli, write_json, monkeypatch):
    # pretend every exponent is outside the gap
    # the package re-exports the sweep function under the submodule name
    sweep_module = importlib.import_module("qharm.explorer.sweep")
    monkeypatch.setattr(sweep_module, "classify_exponent", lambda n, K, q: ExponentRegion.SUBHARMONIC_ON_DOMAIN)
    write_json("sweep.json", SWEEP)
    code, _, err = run_cli("sweep", "-c", "sweep.json")
    assert code == ExitCode.THEOREM_VIOLATION.value
    assert "Theorem violation" in err


# output files


def test_out_writes_the_file(run_cli, tmp_path):
    code, out, _ = run_cli("thresholds", "--n", "2", "--K", "2", "-f", "json", "-o", "results/thr.json")
    assert code == 0
    assert out == ""
    assert json.loads((tmp_path / "results" / "thr.json").read_text(encoding="utf-8"))["q_plus"] == 0.75


# enum flags


@pytest.mark.parametrize(
    "enum_class, text, expected",
    [
        (OutputFormat, "json", OutputFormat.JSON),
        (OutputFormat, "CSV", OutputFormat.CSV),
        (OutputFormat, "0", OutputFormat.TEXT),
        (ProgressMode, " Silent ", ProgressMode.SILENT),
        (QuadratureMode, "circle-trapezoid", QuadratureMode.CIRCLE_TRAPEZOID),
    ],
)
def test_enum_flag_conversion(enum_class, text, expected):
    assert case_insensitive_enum(enum_class)(text) == expected


def test_enum_flag_rejects_unknown_names():
    with pytest.raises(ArgumentTypeError, match="text, json, csv"):
        case_insensitive_enum(OutputFormat)("xml")
    assert enum_choices(OutputFormat) == "{TEXT[0],JSON[1],CSV[2]}"
