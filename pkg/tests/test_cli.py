import csv
import io
import json
import os

import numpy as np
import pytest

from inclab.cli import parse_shape, run
from inclab import ConfigError, Ellipse, FourierStar, Polygon


def _run(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_parse_shape_aliases():
    label, shape = parse_shape("disk")
    assert label == "disk" and shape == Ellipse(1.0, 1.0)
    label, shape = parse_shape("square")
    assert isinstance(shape, Polygon) and len(shape.vertices) == 4
    label, shape = parse_shape("star")
    assert isinstance(shape, FourierStar)
    _, kite = parse_shape("kite")
    assert isinstance(kite, Polygon)


def test_parse_shape_inline_forms():
    assert parse_shape("ellipse:2,1")[1] == Ellipse(2.0, 1.0)
    assert parse_shape("star:1,3,0.2,0")[1] == FourierStar(1.0, ((3, 0.2, 0.0),))
    poly = parse_shape("polygon:0,0,2,0,0,1")[1]
    assert isinstance(poly, Polygon) and len(poly.vertices) == 3


def test_parse_shape_rejects_malformed():
    with pytest.raises(ConfigError):
        parse_shape("ellipse:2")
    with pytest.raises(ConfigError):
        parse_shape("ellipse:2,zebra")
    with pytest.raises(ConfigError):
        parse_shape("heptagram:1")


def test_parse_shape_from_json_file(tmp_path):
    path = tmp_path / "shape.json"
    path.write_text('{"type": "ellipse", "a": 3.0, "b": 1.5}')
    label, shape = parse_shape(f"@{path}")
    assert shape == Ellipse(3.0, 1.5)
    assert label == "shape.json"
    bad = tmp_path / "bad.json"
    bad.write_text('{"type": "ellipse", "a": 3.0}')
    with pytest.raises(ConfigError):
        parse_shape(f"@{bad}")


def test_pt_passes_on_ellipse(capsys):
    code, out, _ = _run(capsys, "pt", "--shape", "ellipse:2,1", "--k", "3")
    assert code == 0
    report = json.loads(out)
    assert report["passed"] is True
    assert report["closed_form_deviation"] <= 1e-6
    M = np.asarray(report["M"])
    assert M.shape == (2, 2)


def test_pt_output_deterministic(capsys):
    _, out1, _ = _run(capsys, "pt", "--shape", "disk", "--k", "2")
    _, out2, _ = _run(capsys, "pt", "--shape", "disk", "--k", "2")
    assert out1 == out2


def test_config_error_exit_2(capsys):
    code, _, err = _run(capsys, "pt", "--shape", "disk", "--k", "1")
    assert code == 2
    assert "k" in err
    code, _, err = _run(capsys, "pt", "--shape", "nonagon:1", "--k", "2")
    assert code == 2
    assert "--shape" in err


def test_numerical_failure_exit_1(capsys):
    # the square is genuinely non-uniform, so the uniformity check fails
    code, out, _ = _run(capsys, "eshelby", "--shape", "square", "--k", "2", "--n", "128")
    assert code == 1
    lines = [l for l in out.strip().splitlines() if l]
    assert lines[0] == "shape,k,direction,mean_gx,mean_gy,delta"
    assert len(lines) == 3


def test_eshelby_passes_on_ellipse(capsys):
    code, out, _ = _run(
        capsys, "eshelby", "--shape", "ellipse:2,1", "--k", "0.5,2", "--n", "128"
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 5
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["shape", "k", "direction", "mean_gx", "mean_gy", "delta"]
    assert rows[1][0] == "ellipse:2,1"
    assert all(float(row[-1]) <= 1e-6 for row in rows[1:])


def test_eshelby_label_quoting(capsys):
    # shape labels containing commas must be quoted in the CSV
    code, out, _ = _run(
        capsys, "eshelby", "--shape", "ellipse:2,1", "--k", "0.5,2", "--n", "128"
    )
    assert code == 0
    assert out.splitlines()[1].startswith('"ellipse:2,1"')


def test_bounds_json_fields(capsys):
    code, out, _ = _run(capsys, "bounds", "--shape", "star", "--k", "3", "--n", "192")
    assert code == 0
    rep = json.loads(out)
    assert rep["slack2"] >= 1e-3
    assert rep["saturated2"] is False
    assert rep["form"] == "direct"
    assert "slack_floor" in rep and "saturation_tol" in rep


def test_newtonian_cube_fails_quadratic_check(capsys):
    code, out, _ = _run(capsys, "newtonian", "--shape", "box:0.5,0.5,0.5")
    assert code == 1
    rep = json.loads(out)
    assert rep["quadratic_fit"]["rms_residual"] >= 1e-3
    assert rep["passed"] is False


def test_newtonian_ellipse_reports_factors(capsys):
    code, out, _ = _run(capsys, "newtonian", "--shape", "ellipse:2,1")
    assert code == 0
    rep = json.loads(out)
    assert rep["depolarization_factors"] == pytest.approx([1 / 3, 2 / 3], rel=1e-10)


def test_hodograph_requires_ellipse(capsys):
    code, _, err = _run(capsys, "hodograph", "--shape", "square")
    assert code == 2
    assert "ellipse" in err


def test_hodograph_runs(capsys):
    code, out, _ = _run(capsys, "hodograph", "--shape", "ellipse:2,1")
    assert code == 0
    rep = json.loads(out)
    assert rep["univalent"] is True
    assert rep["slit_endpoint_error"] <= 1e-10


def test_elastic_identity_runs(capsys):
    code, out, _ = _run(capsys, "elastic-identity", "--lame", "2,1,1,0.5")
    assert code == 0
    rep = json.loads(out)
    assert rep["residual_matrix_phase"] <= 1e-6
    assert rep["residual_inverse_distance"] <= 1e-6


def test_elastic_identity_coarse_grid_fails_honestly(capsys):
    # on a deliberately coarse grid the evaluation points sit closer to the
    # boundary than the quadrature guard allows; that must surface as a
    # numerical failure, not a silent pass
    code, _, err = _run(capsys, "elastic-identity", "--lame", "2,1,1,0.5", "--n", "32")
    assert code == 1
    assert "numerical failure" in err


def test_elastic_identity_rejects_bad_lame(capsys):
    code, _, err = _run(capsys, "elastic-identity", "--lame", "2,-1,1,0.5")
    assert code == 2
    assert "mu" in err


def test_out_directory_written(capsys, tmp_path):
    out_dir = str(tmp_path / "artifacts")
    code, out, _ = _run(
        capsys, "pt", "--shape", "disk", "--k", "2", "--out", out_dir
    )
    assert code == 0
    path = os.path.join(out_dir, "pt.json")
    with open(path, "r", encoding="utf-8") as fh:
        assert fh.read() == out
