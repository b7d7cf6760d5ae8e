import json

import pytest

from inhomdim.cli import main, parse_t_grid
from inhomdim.condensation import MethodSchedule
from inhomdim.cubes import CoveringProfile, DyadicCubeSet, dim_estimates

THIRDS = {"d": 1, "mode": "real", "maps": [
    {"ratio": "1/3", "translation": [f"{i}/3"]} for i in range(3)]}
GOLDEN = {"d": 1, "mode": "dyadic", "maps": [
    {"ratio": "1/2^1", "translation": ["0/2^1"]}, {"ratio": "1/2^2", "translation": ["2/2^2"]}]}
QUADRANT = {"d": 2, "mode": "dyadic", "maps": [
    {"ratio": "1/2^1", "translation": [f"{x}/2^1", f"{y}/2^1"]} for x in (0, 1) for y in (0, 1)]}


def write_json(path, data):
    path.write_text(json.dumps(data))
    return str(path)


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_t_grid():
    grid = parse_t_grid("1:2:0.25")
    assert len(grid) == 5
    assert grid[0] == pytest.approx(1 + 1e-9, abs=0) and grid[-1] == pytest.approx(2 - 1e-9, abs=0)
    for bad in ("1:2", "2:1:0.1", "1:2:0"):
        with pytest.raises(ValueError):
            parse_t_grid(bad)


@pytest.mark.parametrize("data, expected", [
    (THIRDS, "s = 1.000000000000"),
    ({"d": 1, "mode": "dyadic", "maps": [{"ratio": "1/2^1", "translation": ["0/2^1"]},
                                         {"ratio": "1/2^1", "translation": ["1/2^1"]}]},
     "s = 1.000000000000"),
    (GOLDEN, "s = 0.694241913631"),
])
def test_simdim(tmp_path, capsys, data, expected):
    code, out, _ = run(["simdim", write_json(tmp_path / "ifs.json", data)], capsys)
    assert code == 0 and out.strip() == expected


def test_simdim_invalid(tmp_path, capsys):
    bad = {"d": 1, "maps": [{"ratio": "3/2^1", "translation": ["0"]}]}
    code, _, err = run(["simdim", write_json(tmp_path / "bad.json", bad)], capsys)
    assert code == 2 and "error" in err
    code, _, _ = run(["simdim", tmp_path / "missing.json"], capsys)
    assert code == 2


def test_schedule_oscillating_roundtrip(tmp_path, capsys):
    out = tmp_path / "osc.txt"
    code, text, _ = run(["schedule", "--kind", "oscillating", "--d", 5, "--b", 1, "--B", 4.5,
                         "--depth", 100000, "--out", out, "--profile", tmp_path / "p.csv"], capsys)
    assert code == 0
    sched = MethodSchedule.load(out)
    side = json.loads((tmp_path / "osc.txt.json").read_text())
    assert side["switches"] and side["kind"] == "oscillating"
    lo, hi = dim_estimates(CoveringProfile.load(tmp_path / "p.csv", 5))
    assert abs(lo - 1) <= 0.05 and abs(hi - 4.5) <= 0.05
    assert sched.depth == 100000


def test_schedule_unreachable(tmp_path, capsys):
    code, _, err = run(["schedule", "--kind", "oscillating", "--d", 5, "--b", 1, "--B", 5,
                        "--depth", 100, "--out", tmp_path / "x"], capsys)
    assert code == 2 and "unreachable-threshold" in err


def test_schedule_sparse(tmp_path, capsys):
    code, out, _ = run(["schedule", "--kind", "sparse", "--d", 2, "--b", "1/2", "--B", "3/2",
                        "--depth", 5000, "--windows", "4,20", "--out", tmp_path / "s"], capsys)
    assert code == 0
    lines = [ln for ln in out.splitlines() if ln.startswith("window")]
    assert lines and all("holds" in ln for ln in lines)


def test_schedule_rejects_bad_targets(tmp_path, capsys):
    code, _, err = run(["schedule", "--kind", "oscillating", "--d", 2, "--b", 2, "--B", 1,
                        "--depth", 100, "--out", tmp_path / "x"], capsys)
    assert code == 2 and "0 < b < B" in err


def test_realize_profile_and_plot(tmp_path, capsys):
    run(["schedule", "--kind", "oscillating", "--d", 2, "--b", 0.5, "--B", 1.5, "--depth", 10,
         "--out", tmp_path / "s"], capsys)
    for seed in (1, 2):
        code, _, _ = run(["realize", tmp_path / "s", "--rule", "seeded", "--seed", seed,
                          "--out", tmp_path / f"c{seed}"], capsys)
        assert code == 0
    a = DyadicCubeSet.load(tmp_path / "c1")
    code, out1, _ = run(["profile", tmp_path / "c1", "--out", tmp_path / "p1.csv"], capsys)
    code, out2, _ = run(["profile", tmp_path / "s"], capsys)
    assert code == 0 and out1 == out2
    assert (tmp_path / "p1.csv").read_text().startswith("k,log2M")
    assert a.depth == 10
    code, _, _ = run(["plot", "profile", tmp_path / "p1.csv", "--d", 2, "--out",
                      tmp_path / "p.svg"], capsys)
    assert code == 0 and (tmp_path / "p.svg").read_text().startswith("<svg")


def test_profile_csv_needs_d(tmp_path, capsys):
    (tmp_path / "p.csv").write_text("k,log2M\n0,0\n1,1\n")
    code, _, err = run(["profile", tmp_path / "p.csv"], capsys)
    assert code == 2 and "--d" in err


def test_cre_and_plot(tmp_path, capsys):
    run(["schedule", "--kind", "oscillating", "--d", 5, "--b", 1, "--B", 4.5, "--depth", 20000,
         "--out", tmp_path / "s"], capsys)
    code, out, _ = run(["cre", tmp_path / "s", "--t-grid", "1.5:4:0.5"], capsys)
    assert code == 0
    rows = out.splitlines()
    assert rows[0] == "t,p_estimate,k_min,k_max,slack" and len(rows) == 7
    run(["cre", tmp_path / "s", "--t-grid", "1.5:4:0.5", "--out", tmp_path / "c.csv"], capsys)
    assert (tmp_path / "c.csv").read_text() == out
    code, _, _ = run(["plot", "cre", tmp_path / "c.csv", "--out", tmp_path / "c.svg"], capsys)
    assert code == 0


@pytest.mark.parametrize("s, B, supL, infU", [(1.5, 4.5, 1.756, 2.2), (1.0, 2.0, 1.375, 1.8)])
def test_bounds_analytic(tmp_path, capsys, s, B, supL, infU):
    code, _, _ = run(["bounds", "--s", s, "--analytic", 5, 1, B, "--out", tmp_path / "b.json",
                      "--svg", tmp_path / "b.svg"], capsys)
    assert code == 0
    rep = json.loads((tmp_path / "b.json").read_text())
    assert abs(rep["supL"] - supL) <= 1e-3 and abs(rep["infU"] - infU) <= 1e-3
    assert "<polyline" in (tmp_path / "b.svg").read_text()


def test_bounds_zero_source(capsys):
    code, out, _ = run(["bounds", "--s", 1, "--zero", 0.5, 1.5], capsys)
    assert code == 0 and "supL = 1.000000" in out


def test_outputs_are_byte_identical(tmp_path, capsys):
    for n in (1, 2):
        run(["bounds", "--s", 1.5, "--analytic", 5, 1, 4.5, "--out", tmp_path / f"b{n}.json",
             "--svg", tmp_path / f"b{n}.svg"], capsys)
        run(["schedule", "--kind", "sparse", "--d", 2, "--b", 0.5, "--B", 1.5, "--depth", 3000,
             "--out", tmp_path / f"s{n}"], capsys)
        run(["schedule", "--kind", "oscillating", "--d", 2, "--b", 0.5, "--B", 1.5, "--depth",
             10, "--out", tmp_path / f"o{n}"], capsys)
        run(["realize", tmp_path / f"o{n}", "--rule", "seeded", "--seed", 5, "--out",
             tmp_path / f"c{n}"], capsys)
    for name in ("b{}.json", "b{}.svg", "s{}", "s{}.json", "c{}"):
        assert (tmp_path / name.format(1)).read_bytes() == (tmp_path / name.format(2)).read_bytes()


def test_orbital(tmp_path, capsys):
    ifs = write_json(tmp_path / "q.json", QUADRANT)
    (tmp_path / "c").write_text("2 8\n0 0\n")
    code, out, _ = run(["orbital", ifs, tmp_path / "c", "--K", 8, "--out", tmp_path / "o",
                        "--pgm", tmp_path / "o.pgm", "--svg", tmp_path / "o.svg"], capsys)
    assert code == 0 and "cubes = 65536" in out
    assert (tmp_path / "o.pgm").read_bytes().startswith(b"P5")
    assert DyadicCubeSet.load(tmp_path / "o").depth == 8


def test_verify_suite(capsys):
    code, out, _ = run(["verify", "figure3"], capsys)
    assert code == 0 and out.splitlines()[-1].startswith("figure3: PASS")


def test_verify_failure_exit_code(capsys, monkeypatch):
    from inhomdim import verify
    monkeypatch.setitem(verify.SUITES, "figure3", lambda: [verify.Check("x", False)])
    code, out, _ = run(["verify", "figure3"], capsys)
    assert code == 1 and "FAIL" in out


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "nonsense"])
    assert exc.value.code == 2
