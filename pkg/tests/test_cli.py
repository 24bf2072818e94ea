import json
import subprocess
import sys

import pytest

from corpus import lens
from hfq.cli import main
from hfq.constructions import s1s2_diagram
from hfq.covering import CoveringSpec, dump_spec
from hfq.diagram import dump, dumps, load, loads, to_json, validate
from hfq.lens_oracle import compare_with_engine


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def lens51(tmp_path, capsys):
    path = tmp_path / "lens51.json"
    code, _, _ = run(capsys, "lens", 5, 1, "--out", path)
    assert code == 0
    return path


def test_lens_writes_valid_file(lens51, capsys):
    d = load(lens51)
    assert validate(d).ok
    code, out, _ = run(capsys, "generators", lens51)
    assert code == 0 and len(out.splitlines()) == 5


def test_lens_bad_parameters(capsys):
    code, _, err = run(capsys, "lens", 4, 2)
    assert code == 1 and "InvalidParameters" in err


def test_lens_oracle_verdict(capsys):
    code, out, _ = run(capsys, "lens", 7, 3, "--oracle")
    assert code == 0 and out.strip().splitlines()[-1].startswith("AGREE")


def test_lens_without_out_prints_diagram(capsys):
    code, out, _ = run(capsys, "lens", 3, 1)
    assert code == 0 and json.loads(out) == to_json(lens(3, 1))


def test_validate_exit_codes(lens51, tmp_path, capsys):
    assert run(capsys, "validate", lens51)[0] == 0
    text = lens51.read_text()
    bad = tmp_path / "trunc.json"
    bad.write_text(text[: len(text) // 3])
    code, _, err = run(capsys, "validate", bad)
    assert code == 2 and "line" in err
    data = json.loads(text)
    data["regions"][1]["euler_char"] = 0
    broken = tmp_path / "euler.json"
    broken.write_text(json.dumps(data))
    code, out, _ = run(capsys, "validate", broken)
    assert code == 1 and "euler" in out
    code, out, _ = run(capsys, "validate", broken, "--json")
    report = json.loads(out)
    assert code == 1 and report["schema"] == "hfq-1" and not report["valid"]
    assert run(capsys, "validate", tmp_path / "missing.json")[0] == 2


def test_grade_pairs(lens51, capsys):
    assert run(capsys, "grade", lens51, "--pair", "x1", "x0")[1].strip() == "4/5"
    assert run(capsys, "grade", lens51, "--pair", "x0", "x0")[1].strip() == "0"
    assert run(capsys, "grade", lens51, "--pair", "g1", "g0")[1].strip() == "4/5"
    assert run(capsys, "grade", lens51, "--pair", "x9", "x0")[0] == 1
    assert run(capsys, "grade", lens51, "--pair", "zz", "x0")[0] == 1


def test_grade_table_matches_oracle(tmp_path, capsys):
    path = tmp_path / "lens53.json"
    run(capsys, "lens", 5, 3, "--out", path)
    code, out, _ = run(capsys, "grade", path, "--json")
    data = json.loads(out)
    assert code == 0 and data["schema"] == "hfq-1"
    assert compare_with_engine(5, 3).agree
    from hfq.lens_oracle import os_absolute_grading

    v = os_absolute_grading(5, 3)
    gens = data["generators"]
    assert len(data["Gr"]) == 25 and not data["flags"]
    for entry in data["Gr"]:
        a, b = gens[entry["x"]][0], gens[entry["y"]][0]
        assert entry["Gr"] == str(v[a] - v[b])


def test_spinc_command(lens51, capsys):
    code, out, _ = run(capsys, "spinc", lens51, "--json")
    data = json.loads(out)
    assert code == 0 and len(data["classes"]) == 5
    assert all(c["torsion"] for c in data["classes"])


def test_cover_auto(lens51, capsys):
    code, out, _ = run(capsys, "cover", lens51, "--auto", "x1", "x0")
    assert code == 0
    assert "downstairs 4/5, upstairs gr 4, n=5 PASS" in out
    assert out.strip().splitlines()[-1] == "PASS"


def test_cover_specs(lens51, tmp_path, capsys):
    zero = tmp_path / "zero.json"
    dump_spec(CoveringSpec(1), zero)
    out_path = tmp_path / "cover.json"
    code, out, _ = run(capsys, "cover", lens51, "--spec", zero, "--out", out_path)
    assert code == 0 and out.strip().endswith("PASS")
    assert load(out_path) == load(lens51)

    s1s2 = tmp_path / "s1s2.json"
    dump(s1s2_diagram(), s1s2)
    deg2 = tmp_path / "deg2.json"
    deg2.write_text(json.dumps({"n": 2, "region_shifts": {"0": [1]}}))
    code, out, _ = run(capsys, "cover", s1s2, "--spec", deg2, "--pair", "g0", "g1", "--json")
    data = json.loads(out)
    assert code == 0 and data["passed"]
    assert data["checks"][0]["upstairs"] == "2" and data["checks"][0]["downstairs"] == "1"

    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"n": 5, "cocycle": {"5": 1}}))
    assert run(capsys, "cover", lens51, "--spec", bad)[0] == 1
    disconnected = tmp_path / "disc.json"
    disconnected.write_text(json.dumps({"n": 3}))
    code, _, err = run(capsys, "cover", lens51, "--spec", disconnected)
    assert code == 1 and "DisconnectedCover" in err


def test_sum_and_merge(lens51, tmp_path, capsys):
    s1s2 = tmp_path / "s1s2.json"
    dump(s1s2_diagram(), s1s2)
    total = tmp_path / "sum.json"
    assert run(capsys, "sum", lens51, s1s2, "--out", total)[0] == 0
    assert validate(load(total)).ok
    code, out, _ = run(capsys, "generators", total, "--json")
    assert len(json.loads(out)["generators"]) == 10
    code, _, err = run(capsys, "merge", total, 0, 1)
    assert code == 1 and "BadIndex" in err

    deg2 = tmp_path / "deg2.json"
    deg2.write_text(json.dumps({"n": 2, "region_shifts": {"0": [1]}}))
    up = tmp_path / "up.json"
    run(capsys, "cover", s1s2, "--spec", deg2, "--out", up)
    code, out, _ = run(capsys, "merge", up, 0, 1)
    assert code == 0 and validate(loads(out)).ok


def test_written_diagrams_round_trip(tmp_path, capsys):
    path = tmp_path / "l.json"
    run(capsys, "lens", 7, 2, "--out", path)
    assert load(path) == lens(7, 2)
    assert path.read_text() == dumps(lens(7, 2)) + "\n"


def test_generator_limit(lens51, capsys):
    code, _, err = run(capsys, "generators", lens51, "--limit", 3)
    assert code == 1 and "LimitExceeded" in err


def test_output_is_deterministic(lens51):
    cmd = [sys.executable, "-m", "hfq.cli", "grade", str(lens51), "--json"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second and first
    cmd = [sys.executable, "-m", "hfq.cli", "cover", str(lens51), "--auto", "x2", "x0"]
    assert subprocess.run(cmd, capture_output=True).stdout == subprocess.run(cmd, capture_output=True).stdout
