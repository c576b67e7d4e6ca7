import json

import pytest
from click.testing import CliRunner

from fibrelattice import conductrix as cx
from fibrelattice.cli import cli, main


@pytest.fixture
def runner():
    return CliRunner()


def test_help_lists_subcommands(runner):
    result = runner.invoke(cli, ["--help"])
    assert result.exit_code == 0
    for name in ("weights", "tables", "verify", "lattice", "flips", "census"):
        assert name in result.output


def test_weights_json_matches_library(runner):
    from fibrelattice.dynkin_core import build_diagram
    from fibrelattice.weightings import enumerate_admissible

    result = runner.invoke(cli, ["weights", "--diagram", "E~6", "--fibre-weight", "0", "--format", "json"])
    assert result.exit_code == 0
    data = json.loads(result.output)
    lib = enumerate_admissible(build_diagram("E~", 6), 0)
    assert data["count"] == len(lib)
    assert [w["weighting"] for w in data["weightings"]] == [list(w) for w, _c in lib]


def test_weights_d4_double_fibre(runner):
    result = runner.invoke(cli, ["weights", "--diagram", "D~4", "--fibre-weight", "2", "--format", "json"])
    assert result.exit_code == 0
    data = json.loads(result.output)
    assert [-1, 1, 1, 1, 1] in [w["weighting"] for w in data["weightings"]]


def test_weights_a3_fibre_weight_one_is_empty(runner):
    result = runner.invoke(cli, ["weights", "--diagram", "A~3", "--fibre-weight", "1"])
    assert result.exit_code == 0
    assert "0 admissible" in result.output


@pytest.mark.parametrize("args", [
    ["weights", "--diagram", "X~3"],
    ["weights", "--diagram", "E~6", "--bound", "-1"],
    ["weights"],
    ["census", "--surface", "T7"],
    ["census", "--surface", "T6"],
    ["flips", "--mw-rank", "3"],
    ["verify", "--claim", "nonsense"],
    ["tables", "--kind", "parabolic"],
])
def test_usage_errors_exit_2(runner, args):
    assert runner.invoke(cli, args).exit_code == 2


def test_tables_quasi_elliptic(runner):
    result = runner.invoke(cli, ["tables", "--kind", "quasi-elliptic"])
    assert result.exit_code == 0
    assert "12 rows; golden 12; matched 12; missing 0; extra 0" in result.output


def test_tables_elliptic_reports_extras(runner):
    result = runner.invoke(cli, ["tables", "--kind", "elliptic", "--format", "json"])
    data = json.loads(result.output)
    assert result.exit_code == (0 if data["diff_empty"] else 1)
    assert data["diff"]["matched"] == 25 and data["diff"]["missing"] == []


def test_tables_tampered_golden_fails(runner, tmp_path):
    data = json.loads(cx.golden_path(cx.QUASI_ELLIPTIC).read_text())
    data["rows"].pop()
    bad = tmp_path / "tampered.json"
    bad.write_text(json.dumps(data))
    result = runner.invoke(cli, ["tables", "--kind", "quasi-elliptic", "--golden", str(bad)])
    assert result.exit_code == 1
    assert "EXTRA" in result.output


def test_tables_unreadable_golden_fails(runner, tmp_path):
    result = runner.invoke(cli, ["tables", "--kind", "quasi-elliptic", "--golden", str(tmp_path / "none.json")])
    assert result.exit_code == 1


def test_tables_golden_env_override(runner, tmp_path, monkeypatch):
    data = json.loads(cx.golden_path(cx.QUASI_ELLIPTIC).read_text())
    data["rows"] = data["rows"][:3]
    (tmp_path / "golden_quasi_elliptic.json").write_text(json.dumps(data))
    monkeypatch.setenv(cx.GOLDEN_ENV, str(tmp_path))
    result = runner.invoke(cli, ["tables", "--kind", "quasi-elliptic"])
    assert result.exit_code == 1


@pytest.mark.parametrize("claim", ["flip-table", "discriminants", "maximality", "sigma-relations",
                                   "candidates", "t333-torsor", "flip-graph", "census"])
def test_verify_single_claims_pass(runner, claim):
    result = runner.invoke(cli, ["verify", "--claim", claim, "--format", "json"])
    data = json.loads(result.output)
    assert data["claims"][claim]["ok"], data
    assert result.exit_code == 0


def test_verify_discriminant_values(runner):
    result = runner.invoke(cli, ["verify", "--claim", "discriminants", "--format", "json"])
    detail = json.loads(result.output)["claims"]["discriminants"]["detail"]
    assert detail["Q"] == -16 and abs(detail["Q''"]) == 1


def test_verify_text_has_one_line_per_claim(runner):
    result = runner.invoke(cli, ["verify", "--claim", "candidates", "--claim", "discriminants"])
    lines = result.output.strip().splitlines()
    assert len(lines) == 2 and all(line.startswith(("PASS", "FAIL")) for line in lines)


def test_lattice_json(runner):
    result = runner.invoke(cli, ["lattice", "--format", "json"])
    assert result.exit_code == 0
    data = json.loads(result.output)
    assert data["discriminants"]["Q444"] == -16
    assert data["f"]["1"] == ["-1/2", "0", "1/2", "1", "1", "1", "1", "1/2", "0", "-1/2"]


def test_flips_outputs(runner):
    text = runner.invoke(cli, ["flips", "--mw-rank", "1", "--radius", "3"])
    assert text.exit_code == 0 and "7 nodes" in text.output
    dot = runner.invoke(cli, ["flips", "--mw-rank", "2", "--radius", "1", "--format", "dot"])
    assert dot.output.count("--") == 3
    js = runner.invoke(cli, ["flips", "--mw-rank", "2", "--radius", "2", "--format", "json"])
    assert len(json.loads(js.output)["nodes"]) == 10


def test_census_outputs(runner):
    result = runner.invoke(cli, ["census", "--surface", "T6", "--mw-rank", "0", "--format", "json"])
    data = json.loads(result.output)
    assert len(data["quasi_elliptic_classes"]) == 3 and data["elliptic_count"] == 1
    result = runner.invoke(cli, ["census", "--surface", "T7", "--second-fibre", "simple"])
    assert "quasi-elliptic 3" in result.output


def test_output_is_deterministic(runner):
    args = ["census", "--surface", "T6", "--mw-rank", "2", "--radius", "2", "--format", "json"]
    assert runner.invoke(cli, args).output == runner.invoke(cli, args).output
    args = ["weights", "--diagram", "E~8", "--format", "json"]
    assert runner.invoke(cli, args).output == runner.invoke(cli, args).output


def test_main_entry_point(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--claim", "candidates"])
    assert exc.value.code == 0
    assert "PASS" in capsys.readouterr().out
