import json

import numpy as np
import pytest

from lowcross.cli import main
from lowcross.formats import load_system, points_from_csv


def run_cli(*args):
    return main([str(a) for a in args])


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        run_cli("match")  # missing system argument
    assert exc.value.code == 1


def test_data_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{oops", encoding="utf-8")
    assert run_cli("match", bad, "--params", "1,0,0.5") == 2
    err = capsys.readouterr().err
    assert "line 1" in err


def test_gen_points_and_system(tmp_path):
    pts_path = tmp_path / "pts.csv"
    assert run_cli("gen", "points", "--n", 32, "--dim", 2, "--seed", 5, "-o", pts_path) == 0
    pts = points_from_csv(pts_path)
    assert pts.shape == (32, 2)

    ranges_path = tmp_path / "ranges.json"
    assert run_cli(
        "gen", "ranges", "--kind", "halfspace-testset", "--points", pts_path,
        "--t", 4, "--seed", 5, "-o", ranges_path,
    ) == 0
    sys_path = tmp_path / "sys.json"
    assert run_cli(
        "gen", "system", "--points", pts_path, "--ranges", ranges_path, "-o", sys_path
    ) == 0
    system = load_system(sys_path)
    assert system.n == 32 and system.m >= 1


def test_gen_grid(tmp_path):
    out = tmp_path / "grid.json"
    assert run_cli("gen", "grid", "--n0", 16, "--dim", 2, "-o", out) == 0
    system = load_system(out)
    assert system.n == 16 and system.m == 6


def test_match_color_approx_pipeline(tmp_path):
    sys_path = tmp_path / "sys.json"
    assert run_cli(
        "gen", "system", "--kind", "halfspace-testset", "--n", 64, "--dim", 2,
        "--seed", 3, "-o", sys_path,
    ) == 0

    match_path = tmp_path / "match.json"
    assert run_cli(
        "match", sys_path, "--dual-shatter", "118.2,2", "--seed", 11, "-o", match_path
    ) == 0
    obj = json.loads(match_path.read_text(encoding="utf-8"))
    assert len(obj["edges"]) == 32
    assert obj["seed"] == 11 and obj["incidence_calls"] > 0

    color_path = tmp_path / "color.json"
    assert run_cli(
        "color", sys_path, "--dual-shatter", "118.2,2", "--seed", 11, "-o", color_path
    ) == 0
    cobj = json.loads(color_path.read_text(encoding="utf-8"))
    assert sorted(set(cobj["signs"])) == [-1, 1]

    approx_path = tmp_path / "approx.json"
    assert run_cli(
        "approx", sys_path, "--eps", 0.5, "--dual-shatter", "118.2,2",
        "--seed", 2, "-o", approx_path,
    ) == 0
    aobj = json.loads(approx_path.read_text(encoding="utf-8"))
    assert aobj["eps_measured"] <= 1.0


def test_eval_round_trips(tmp_path, capsys):
    sys_path = tmp_path / "sys.json"
    run_cli("gen", "system", "--kind", "halfspace-testset", "--n", 48, "--dim", 2,
            "--seed", 3, "-o", sys_path)
    match_path = tmp_path / "match.json"
    run_cli("match", sys_path, "--dual-shatter", "118.2,2", "--seed", 1, "-o", match_path)
    stored = json.loads(match_path.read_text(encoding="utf-8"))["crossing_number"]
    capsys.readouterr()
    assert run_cli("eval", "crossing", match_path, sys_path) == 0
    assert int(capsys.readouterr().out.strip()) == stored


def test_eval_disc_example(tmp_path, capsys):
    sys_path = tmp_path / "sys.json"
    sys_path.write_text(json.dumps({"n": 5, "ranges": [[0, 1, 2, 3, 4]]}), encoding="utf-8")
    coloring_path = tmp_path / "col.json"
    coloring_path.write_text(json.dumps({"signs": [1, 1, 1, 1, 1]}), encoding="utf-8")
    assert run_cli("eval", "disc", coloring_path, sys_path) == 0
    assert capsys.readouterr().out.strip() == "5"


def test_presample_commands(tmp_path):
    sys_path = tmp_path / "sys.json"
    run_cli("gen", "system", "--kind", "halfspace-testset", "--n", 64, "--dim", 2,
            "--seed", 3, "-o", sys_path)
    out = tmp_path / "pm.json"
    assert run_cli(
        "presample-match", sys_path, "--alpha", 0.5, "--dual-shatter", "118.2,2",
        "--seed", 4, "-o", out,
    ) == 0
    obj = json.loads(out.read_text(encoding="utf-8"))
    assert obj["alpha"] == 0.5 and len(obj["edges"]) == 32
    assert run_cli(
        "presample-color", sys_path, "--alpha", 0.5, "--dual-shatter", "118.2,2",
        "--seed", 4, "-o", tmp_path / "pc.json",
    ) == 0


def test_bench_commands(tmp_path):
    out = tmp_path / "bench.csv"
    assert run_cli(
        "bench", "disc-vs-random", "--dims", "2", "--n-grid", "64", "--trials", 3,
        "--seed", 1, "-o", out,
    ) == 0
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "n,dim,mean_disc_ours,sd_disc_ours,mean_disc_random,sd_disc_random,trials"
    assert len(lines) == 2

    out2 = tmp_path / "tradeoff.csv"
    assert run_cli(
        "bench", "tradeoff", "--alphas", "0.5,1.0", "--n", 64, "--dim", 2,
        "--trials", 2, "--seed", 1, "-o", out2,
    ) == 0
    lines2 = out2.read_text(encoding="utf-8").splitlines()
    assert lines2[0] == "alpha,n,mean_crossing,mean_disc,mean_incidence_calls,trials"
    assert len(lines2) == 3


def test_plot_matching(tmp_path):
    pts_path = tmp_path / "pts.csv"
    run_cli("gen", "points", "--n", 16, "--dim", 2, "--seed", 5, "-o", pts_path)
    sys_path = tmp_path / "sys.json"
    run_cli("gen", "system", "--kind", "halfspace-testset", "--n", 16, "--dim", 2,
            "--seed", 5, "-o", sys_path)
    match_path = tmp_path / "match.json"
    run_cli("match", sys_path, "--params", "2,1,0.5", "--seed", 1, "-o", match_path)
    svg_path = tmp_path / "m.svg"
    assert run_cli("plot", "matching", pts_path, match_path, "-o", svg_path) == 0
    assert svg_path.read_text(encoding="utf-8").startswith("<svg")


def test_match_dual_shatter_on_grid(tmp_path):
    sys_path = tmp_path / "grid.json"
    assert run_cli("gen", "grid", "--n0", 1024, "--dim", 2, "-o", sys_path) == 0
    out = tmp_path / "match.json"
    assert run_cli("match", sys_path, "--dual-shatter", "1,2", "--seed", 2, "-o", out) == 0
    obj = json.loads(out.read_text(encoding="utf-8"))
    assert len(obj["edges"]) == 512
    ends = sorted(x for e in obj["edges"] for x in e)
    assert ends == list(range(1024))  # perfect matching of the 32x32 grid
    assert obj["crossing_number"] >= 1 and obj["incidence_calls"] > 0


def test_seed_reproducibility(tmp_path):
    sys_path = tmp_path / "sys.json"
    run_cli("gen", "system", "--kind", "halfspace-testset", "--n", 32, "--dim", 2,
            "--seed", 3, "-o", sys_path)
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    run_cli("match", sys_path, "--params", "2,1,0.5", "--seed", 9, "-o", a)
    run_cli("match", sys_path, "--params", "2,1,0.5", "--seed", 9, "-o", b)
    assert a.read_bytes() == b.read_bytes()


def test_params_required(tmp_path, capsys):
    sys_path = tmp_path / "sys.json"
    run_cli("gen", "system", "--kind", "halfspace-testset", "--n", 16, "--dim", 2,
            "--seed", 3, "-o", sys_path)
    assert run_cli("match", sys_path) == 2
    assert "--params" in capsys.readouterr().err
