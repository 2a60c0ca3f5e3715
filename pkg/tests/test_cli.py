"""Command-line interface: subcommands, file ingestion, exit codes,
report schema, and determinism."""

import json
import subprocess
import sys

import pytest

from wcurv.cli import main

MINKOWSKI_TOML = """\
name = "flat"
coordinates = ["t", "x", "y", "z"]
metric = [
  ["-1", "0", "0", "0"],
  ["0", "1", "0", "0"],
  ["0", "0", "1", "0"],
  ["0", "0", "0", "1"],
]
"""


def _run(args, capsys):
    code = main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------------------------
# analyze: catalog path

def test_minkowski_all_flags_hold(capsys):
    code, out, _ = _run(["analyze", "--catalog", "minkowski"], capsys)
    assert code == 0
    report = json.loads(out)
    verdicts = {f["name"]: f["verdict"] for f in report["flags"]}
    assert verdicts["w_flat"] == "holds"
    assert verdicts["einstein"] == "holds"
    assert all(v in ("holds", "not-applicable") for v in verdicts.values())
    for rec in report["points"]:
        assert rec["riemann_scale"] == 0.0


def test_schwarzschild_with_overrides(capsys):
    code, out, _ = _run(["analyze", "--catalog", "schwarzschild",
                         "--param", "M=1", "--grid", "r=3:10:8"], capsys)
    assert code == 0
    report = json.loads(out)
    verdicts = {f["name"]: f["verdict"] for f in report["flags"]}
    assert verdicts["einstein"] == "holds"
    assert verdicts["w_flat"] == "fails"
    radii = sorted({p[1] for p in report["grid"]})
    assert radii[0] == 3.0 and radii[-1] == 10.0 and len(radii) == 8


def test_unknown_catalog_name(capsys):
    code, _, err = _run(["analyze", "--catalog", "goedel"], capsys)
    assert code == 1
    assert "unknown catalog" in err


def test_bad_param_syntax(capsys):
    code, _, err = _run(["analyze", "--catalog", "schwarzschild",
                         "--param", "M"], capsys)
    assert code == 1
    assert "name=value" in err


def test_unknown_parameter_rejected(capsys):
    code, _, err = _run(["analyze", "--catalog", "schwarzschild",
                         "--param", "Q=3"], capsys)
    assert code == 1


def test_text_format(capsys):
    code, out, _ = _run(["analyze", "--catalog", "de_sitter_static",
                         "--format", "text"], capsys)
    assert code == 0
    assert "w_flat" in out and "holds" in out


# ---------------------------------------------------------------------------
# analyze: file path

def test_metric_file_round_trip(tmp_path, capsys):
    path = tmp_path / "flat.toml"
    path.write_text(MINKOWSKI_TOML)
    code, out, _ = _run(["analyze", str(path), "--grid", "x=0:1:2"], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["input"]["name"] == "flat"
    assert {f["name"]: f["verdict"] for f in report["flags"]}["w_flat"] == "holds"


def test_asymmetric_metric_file_exits_1(tmp_path, capsys):
    path = tmp_path / "asym.toml"
    path.write_text(MINKOWSKI_TOML.replace('["-1", "0"', '["-1", "x"', 1))
    code, _, err = _run(["analyze", str(path)], capsys)
    assert code == 1
    assert "symmetry" in err


def test_domain_error_exits_2_and_names_point(tmp_path, capsys):
    path = tmp_path / "dom.toml"
    path.write_text("""\
name = "log_wall"
coordinates = ["t", "x", "y", "z"]
metric = [
  ["-1"],
  ["0", "ln(x)"],
  ["0", "0", "1"],
  ["0", "0", "0", "1"],
]
[evaluation.ranges]
x = { min = -1.0, max = 5.0, count = 3 }
""")
    code, _, err = _run(["analyze", str(path)], capsys)
    assert code == 2
    assert "-1.0" in err


def test_exclusions_remove_singular_points(tmp_path, capsys):
    path = tmp_path / "excl.toml"
    path.write_text("""\
name = "log_wall"
coordinates = ["t", "x", "y", "z"]
metric = [
  ["-1"],
  ["0", "1 + x^2"],
  ["0", "0", "1"],
  ["0", "0", "0", "1"],
]
[evaluation]
exclusions = ["x"]
[evaluation.ranges]
x = { min = -1.0, max = 1.0, count = 3 }
""")
    code, out, _ = _run(["analyze", str(path)], capsys)
    assert code == 0
    assert len(json.loads(out)["grid"]) == 2  # x = 0 excluded


def test_lower_triangle_mirrored(tmp_path, capsys):
    path = tmp_path / "tri.toml"
    path.write_text(MINKOWSKI_TOML)
    full = json.loads(_run(["analyze", str(path)], capsys)[1])
    path.write_text("""\
name = "flat"
coordinates = ["t", "x", "y", "z"]
metric = [
  ["-1"],
  ["0", "1"],
  ["0", "0", "1"],
  ["0", "0", "0", "1"],
]
""")
    tri = json.loads(_run(["analyze", str(path)], capsys)[1])
    assert tri["input"]["metric"] == full["input"]["metric"]


def test_missing_input_is_error(capsys):
    code, _, err = _run(["analyze"], capsys)
    assert code == 1


def test_nonexistent_file(capsys):
    code, _, err = _run(["analyze", "/nonexistent/metric.toml"], capsys)
    assert code == 1


# ---------------------------------------------------------------------------
# determinism and schema

@pytest.mark.parametrize("name", ["minkowski", "schwarzschild",
                                  "frw_flat_powerlaw", "reissner_nordstrom"])
def test_reports_byte_identical_across_runs(name, tmp_path):
    """Two subprocess runs must agree byte-for-byte once the wall-clock
    line is removed."""
    blobs = []
    for i in range(2):
        out = tmp_path / f"{name}-{i}.json"
        proc = subprocess.run(
            [sys.executable, "-m", "wcurv.cli", "analyze",
             "--catalog", name, "--out", str(out)],
            capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
        doc = json.loads(out.read_text())
        assert "wall_clock_seconds" in doc
        del doc["wall_clock_seconds"]
        blobs.append(json.dumps(doc, sort_keys=False))
    assert blobs[0] == blobs[1]


def test_report_schema_fields(capsys):
    _, out, _ = _run(["analyze", "--catalog", "einstein_static"], capsys)
    report = json.loads(out)
    for key in ("schema_version", "backend", "tolerance", "input", "grid",
                "points", "flags", "claims", "wall_clock_seconds"):
        assert key in report
    assert report["schema_version"] == "1"
    claims = {c["claim"]: c["status"] for c in report["claims"]}
    assert claims["radiative_case"] == "violated"


def test_out_writes_file_and_summarizes_to_stderr(tmp_path, capsys):
    out_path = tmp_path / "rep.json"
    code, out, err = _run(["analyze", "--catalog", "minkowski",
                           "--out", str(out_path)], capsys)
    assert code == 0
    assert out == ""
    assert "flags:" in err
    json.loads(out_path.read_text())


# ---------------------------------------------------------------------------
# other subcommands

def test_catalog_lists_required_entries(capsys):
    code, out, _ = _run(["catalog"], capsys)
    assert code == 0
    for name in ("minkowski", "schwarzschild", "de_sitter_static",
                 "frw_flat_powerlaw", "einstein_static",
                 "reissner_nordstrom"):
        assert name in out


def test_check_expr(capsys):
    code, out, _ = _run(["check-expr", "r^2", "--wrt", "r"], capsys)
    assert code == 0
    assert "2*r" in out.replace(" ", "").replace("r*2", "2*r")


def test_check_expr_syntax_error(capsys):
    code, _, err = _run(["check-expr", "2***x", "--wrt", "x"], capsys)
    assert code == 1
    assert "position" in err
