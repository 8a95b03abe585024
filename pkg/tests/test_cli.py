import json
import os

from floqcliff.cli import RunConfig, main, run, validate


def read(path):
    with open(path) as fh:
        return fh.read()


def test_validate_fatal_cases():
    fatal, _ = validate(RunConfig("sff", samples=0, L=16))
    assert any("samples" in m for m in fatal)
    fatal, _ = validate(RunConfig("entropy", L=7))
    assert any("even" in m for m in fatal)
    fatal, _ = validate(RunConfig("spread2d", dim=1))
    assert fatal
    fatal, _ = validate(RunConfig("walls", penetration=2))
    assert any("penetration" in m for m in fatal)


def test_validate_warns_on_small_sff_sample():
    _, warnings = validate(RunConfig("sff", samples=100, L=4))
    assert any("heavy-tail" in w for w in warnings)


def test_config_error_exit_code(tmp_path, capsys):
    code = main(["entropy", "--L", "7", "--out", str(tmp_path / "e.csv")])
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_perc_bound_output(tmp_path):
    out = tmp_path / "bound.json"
    code = main(["perc-bound", "--out", str(out)])
    assert code == 0
    doc = json.loads(read(out))
    assert abs(doc["q"] - 0.251475) < 1e-6
    assert 0.555 <= doc["no_path_bound"] <= 0.57
    assert round(doc["path_lower_bound"], 2) == 0.44
    assert doc["config"]["subcommand"] == "perc-bound"
    assert os.path.exists(str(out) + ".meta.json")


def test_perc_walls_output(tmp_path):
    out = tmp_path / "walls.json"
    code = main(["perc-walls", "--depth", "6", "--out", str(out)])
    assert code == 0
    doc = json.loads(read(out))
    assert doc["enumerated"]["2"] == 1
    assert doc["enumerated"]["3"] == 2
    assert doc["published_table"]["6"] == 18


def test_sff_determinism_bitwise(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["sff", "--dim", "1", "--L", "4", "--tmax", "3", "--samples", "25", "--seed", "7"]
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b), "--threads", "2"]) == 0
    assert read(a) == read(b)


def test_sff_with_reference_columns(tmp_path):
    out = tmp_path / "sff.csv"
    code = main([
        "sff", "--dim", "1", "--L", "4", "--tmax", "2", "--samples", "20",
        "--seed", "3", "--out", str(out), "--with-references",
    ])
    assert code == 0
    lines = read(out).splitlines()
    assert lines[0].startswith("# config:")
    assert lines[2].split(",")[:2] == ["t", "K"]
    assert "Kbar" in lines[2] and "rmt" in lines[2]
    assert lines[3].split(",")[1] == repr(float(4**4))


def test_spread1d_output_and_fit(tmp_path):
    out = tmp_path / "spread.csv"
    code = main([
        "spread1d", "--tmax", "30", "--samples", "400", "--seed", "9",
        "--out", str(out), "--threads", "2",
    ])
    assert code == 0
    meta = json.loads(read(str(out) + ".meta.json"))
    assert "localization_fit" in meta
    assert meta["config"]["samples"] == 400
    header = read(out).splitlines()[2].split(",")
    assert header == ["t", "x", "mean", "stderr"]


def test_entropy_output(tmp_path):
    out = tmp_path / "entropy.csv"
    code = main([
        "entropy", "--dim", "2", "--L", "16", "--tmax", "6", "--samples", "30",
        "--seed", "5", "--out", str(out),
    ])
    assert code == 0
    rows = [l.split(",") for l in read(out).splitlines()[3:]]
    assert rows[0][:2] == ["0", "16"]
    assert float(rows[0][2]) == 0.0
    assert float(rows[-1][2]) > 0.0


def test_perc_mc_output(tmp_path):
    out = tmp_path / "survival.csv"
    code = main([
        "perc-mc", "--depth", "30", "--mode", "independent", "--samples", "2000",
        "--seed", "11", "--out", str(out),
    ])
    assert code == 0
    rows = [l.split(",") for l in read(out).splitlines()[3:]]
    assert len(rows) == 30
    estimates = [float(r[2]) for r in rows]
    assert all(a >= b for a, b in zip(estimates, estimates[1:]))


def test_rerun_from_embedded_config_reproduces_file(tmp_path):
    out = tmp_path / "sff.csv"
    args = ["sff", "--dim", "1", "--L", "4", "--tmax", "2", "--samples", "30",
            "--seed", "21", "--out", str(out)]
    assert main(args) == 0
    first = read(out)
    embedded = json.loads(first.splitlines()[0].removeprefix("# config: "))
    out2 = tmp_path / "replay.csv"
    config = RunConfig(out=str(out2), threads=2, **embedded)
    assert run(config) == 0
    assert read(out2) == first


def test_walls_output(tmp_path):
    out = tmp_path / "walls.csv"
    code = main([
        "walls", "--samples", "4000", "--seed", "13", "--out", str(out),
    ])
    assert code == 0
    meta = json.loads(read(str(out) + ".meta.json"))
    assert abs(meta["prob_wall"] - 0.12) < 0.03
    assert meta["mu"] > 0


def test_curve_json_format(tmp_path):
    out = tmp_path / "entropy.json"
    code = main([
        "entropy", "--dim", "1", "--L", "8", "--tmax", "3", "--samples", "10",
        "--seed", "2", "--format", "json", "--out", str(out),
    ])
    assert code == 0
    doc = json.loads(read(out))
    assert doc["columns"] == ["t", "L", "mean", "stderr"]
    assert len(doc["rows"]) == 4
    assert doc["config"]["format"] == "json"
