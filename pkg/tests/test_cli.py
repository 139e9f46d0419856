import json
import subprocess
import sys

import pytest

from pancake import cli
from pancake import io as pio


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_zone_inside_and_outside(capsys):
    code, out, _ = run(capsys, "zone", "--center", "0,0", "--radius", 1000, "--metric", "l2", "--point", "764,490")
    assert (code, out.strip()) == (0, "l2=907.63 l1=1254.00 INSIDE")
    code, out, _ = run(capsys, "zone", "--center", "0,0", "--radius", 1000, "--metric", "l1", "--point", "764,490")
    assert (code, out.strip()) == (1, "l2=907.63 l1=1254.00 OUTSIDE")


@pytest.mark.parametrize("argv", [
    ["zone", "--center", "0,0", "--radius", "-5", "--point", "1,1"],
    ["zone", "--center", "0,0", "--radius", "5"],
    ["zone", "--center", "0;0", "--radius", "5", "--point", "1,1"],
    ["zone", "--center", "0,0", "--radius", "5", "--point", "1,1", "--metric", "l3"],
    [],
])
def test_usage_errors_exit_two(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert "usage" in err or "error" in err


def test_cut(capsys, tmp_path, data_dir):
    code, out, _ = run(capsys, "cut", "--points", data_dir / "demo100.csv", "--out", tmp_path / "c.json")
    assert code == 0 and "total 50/50 subpop 20/20 BALANCED" in out
    doc = json.loads((tmp_path / "c.json").read_text())
    assert doc["positive"] == {"total": 50, "subpop": 20}


def test_missing_input_names_path(capsys, tmp_path):
    code, _, err = run(capsys, "cut", "--points", tmp_path / "absent.csv")
    assert code == 2 and "absent.csv" in err


def district(capsys, out_dir, *extra, data_dir):
    return run(capsys, "district", "--points", data_dir / "demo100.csv",
               "--region", data_dir / "rectangle.geojson", "--out-dir", out_dir, *extra)


def test_district_outputs(capsys, tmp_path, data_dir):
    code, out, _ = district(capsys, tmp_path, "--depth", 3, "--districts", 3, data_dir=data_dir)
    assert code == 0 and "WITHIN BOUND" in out
    plan = pio.load_json(tmp_path / "district.geojson")
    audit = pio.load_json(tmp_path / "district_audit.json")
    assert pio.geojson_problems(plan) == []
    assert [f["properties"]["a_count"] for f in plan["features"]] == [37, 38, 25]
    assert audit["deviation"]["within_bound"] is True
    assert audit["leaf_deviation"]["below_one"] is True
    assert all("connected" in d for d in audit["districts"])
    svg = (tmp_path / "district.svg").read_text()
    assert svg.lstrip().startswith("<?xml") and "<svg" in svg and "stroke-dasharray" in svg


def test_single_district(capsys, tmp_path, data_dir):
    code, out, _ = district(capsys, tmp_path, "--depth", 0, "--districts", 1, data_dir=data_dir)
    assert code == 0
    audit = pio.load_json(tmp_path / "district_audit.json")
    assert audit["deviation"]["total"]["max_abs"] == 0
    assert audit["deviation"]["subpop"]["max_abs"] == 0


def test_too_many_districts_exit_two(capsys, tmp_path, data_dir):
    code, _, err = district(capsys, tmp_path, "--depth", 3, "--districts", 9, data_dir=data_dir)
    assert code == 2 and "2**depth" in err
    assert not (tmp_path / "district.geojson").exists()


def test_district_byte_identical_and_round_trip(capsys, tmp_path, data_dir):
    args = ["--random", 400, "--seed", 12345, "--depth", 5, "--districts", 6, "--strategy", "greedy"]
    for d in ("a", "b"):
        code, _, _ = run(capsys, "district", "--region", data_dir / "u_region.geojson",
                         "--out-dir", tmp_path / d, *args)
        assert code == 0
    for name in ("district.geojson", "district_audit.json", "district.svg"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    members = pio.read_plan_members(tmp_path / "a" / "district.geojson")
    assert sorted(k for m in members for k in m) == list(range(400))


def test_config_file_and_env_out_dir(capsys, tmp_path, data_dir, monkeypatch):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"points": str(data_dir / "demo100.csv"), "depth": 2,
                               "districts": 4, "strategy": "exhaustive"}))
    monkeypatch.setenv(cli.OUT_DIR_ENV, str(tmp_path / "env"))
    code, out, _ = run(capsys, "district", "--config", cfg)
    assert code == 0 and "sizes=[1, 1, 1, 1]" in out
    assert (tmp_path / "env" / "district.geojson").exists()
    code, out, _ = run(capsys, "district", "--config", cfg, "--districts", 3, "--name", "three")
    assert code == 0 and (tmp_path / "env" / "three.geojson").exists()


def test_config_unknown_key(capsys, tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"colour": "red"}))
    code, _, err = run(capsys, "zone", "--config", cfg)
    assert code == 2 and "colour" in err


def test_invariant_violation_exit_four(capsys, tmp_path, data_dir, monkeypatch):
    def broken(tree):
        return {"total": 5.0, "subpop": 0.0, "below_one": False}
    monkeypatch.setattr(cli, "_leaf_check", broken)
    code, _, err = district(capsys, tmp_path, "--depth", 2, "--districts", 2, data_dir=data_dir)
    assert code == 4 and "invariant" in err


def test_contiguous_search(capsys, tmp_path, data_dir):
    code, out, _ = run(capsys, "district", "--points", data_dir / "u_points.csv",
                       "--region", data_dir / "u_region.geojson", "--depth", 3, "--districts", 3,
                       "--contiguous", "--out-dir", tmp_path)
    assert code == 0 and "smallest contiguous depth: 2" in out
    code, out, _ = run(capsys, "district", "--points", data_dir / "u_points.csv",
                       "--region", data_dir / "u_region.geojson", "--depth", 3, "--districts", 3,
                       "--contiguous", "--deviation-cap", 0.4, "--out-dir", tmp_path)
    assert code == 1 and "no contiguous plan" in out


def test_enumerate(capsys, tmp_path, data_dir):
    code, out, _ = run(capsys, "enumerate", "--points", data_dir / "two_points.csv", "--depth", 1, "--districts", 2)
    assert (code, out.strip()) == (0, "1 outcome")
    dump = tmp_path / "plans.json"
    code, out, _ = run(capsys, "enumerate", "--points", data_dir / "square_corners.csv",
                       "--depth", 2, "--districts", 3, "--dump", dump)
    assert (code, out.strip()) == (0, "6 outcomes")
    doc = json.loads(dump.read_text())
    assert doc["count"] == 6 and len(doc["outcomes"]) == 6


def test_enumerate_caps_exit_three(capsys, data_dir):
    code, _, err = run(capsys, "enumerate", "--points", data_dir / "demo100.csv", "--depth", 1, "--districts", 2)
    assert code == 3 and "16 points" in err
    code, _, err = run(capsys, "enumerate", "--points", data_dir / "demo8.csv", "--depth", 4, "--districts", 2)
    assert code == 3


def test_project_continents(capsys, tmp_path, data_dir):
    code, out, _ = run(capsys, "project", "--input", data_dir / "continents.geojson", "--out-dir", tmp_path)
    assert code == 0
    assert "gall-peters area ratio Africa/Europe = 2.617" in out
    assert "mercator area ratio Africa/Europe = 0.903" in out
    for kind in ("mercator", "gall-peters"):
        assert (tmp_path / f"continents_{kind}.svg").exists()
        doc = pio.load_json(tmp_path / f"continents_{kind}.geojson")
        assert pio.geojson_problems(doc) == []
        rows = (tmp_path / f"continents_{kind}_distortion.csv").read_text().splitlines()
        assert rows[0].startswith("lon_deg,lat_deg") and len(rows) > 100
    gp = (tmp_path / "continents_gall-peters_distortion.csv").read_text().splitlines()[1:]
    assert max(float(r.split(",")[3]) for r in gp) < 1e-9


def test_project_empty_collection(capsys, tmp_path):
    src = tmp_path / "empty.geojson"
    src.write_text('{"type": "FeatureCollection", "features": []}')
    code, _, _ = run(capsys, "project", "--input", src, "--out-dir", tmp_path / "o")
    assert code == 0
    for kind in ("mercator", "gall-peters"):
        doc = pio.load_json(tmp_path / "o" / f"empty_{kind}.geojson")
        assert doc == {"type": "FeatureCollection", "features": []}
        assert (tmp_path / "o" / f"empty_{kind}_distortion.csv").read_text().count("\n") == 1


def test_project_errors(capsys, tmp_path):
    bad = tmp_path / "bad.geojson"
    bad.write_text('{"type": "FeatureCollection", "features": [,]}')
    code, _, err = run(capsys, "project", "--input", bad, "--out-dir", tmp_path)
    assert code == 2 and "byte offset 43" in err
    polar = tmp_path / "polar.geojson"
    polar.write_text(json.dumps({"type": "Feature", "properties": {"name": "cap"}, "geometry": {
        "type": "Polygon", "coordinates": [[[0, 80], [10, 80], [10, 89], [0, 80]]]}}))
    code, _, err = run(capsys, "project", "--input", polar, "--kind", "mercator", "--out-dir", tmp_path)
    assert code == 2 and "vertex 2" in err and "cap" in err


def test_triangle(capsys):
    code, out, _ = run(capsys, "triangle", "--a", "0,0", "--b", "0,90", "--c", "90,0")
    assert code == 0 and out.startswith("angle sum 270.000000000 deg")
    code, _, err = run(capsys, "triangle", "--a", "0,0", "--b", "0,30", "--c", "0,60")
    assert code == 2 and "degenerate" in err


def test_module_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "pancake", "zone", "--center", "0,0", "--radius", "1000",
                          "--metric", "l1", "--point", "764,490"], capture_output=True, text=True)
    assert res.returncode == 1 and "OUTSIDE" in res.stdout
