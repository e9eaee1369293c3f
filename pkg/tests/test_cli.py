from __future__ import annotations

import pytest

from tripack.cli import main


def test_bounds_subcommand(capsys):
    assert main(["bounds", "--d", "3/10"]) == 0
    out = capsys.readouterr().out
    assert "0.375000" in out
    assert main(["bounds", "--d", "2"]) == 2


def test_gen_and_pack_roundtrip(tmp_path, capsys):
    path = tmp_path / "g.txt"
    rc = main(["gen", "--family", "circulant", "--n", "30", "--d", "1/5",
               "--p", "0.4", "--seed", "3", "--out", str(path)])
    assert rc == 0
    assert path.exists()

    out_pack = tmp_path / "p.txt"
    rc = main(["pack", "--in", str(path), "--method", "ls", "--seed", "1",
               "--out", str(out_pack)])
    assert rc == 0
    lines = out_pack.read_text().splitlines()
    assert lines[0].startswith("# triangles=")
    for line in lines[1:]:
        i, j, k = map(int, line.split())
        assert i < j < k


def test_gen_rejects_infeasible(tmp_path):
    rc = main(["gen", "--family", "circulant", "--n", "31", "--d", "1/5",
               "--out", str(tmp_path / "x.txt")])
    assert rc == 2


def test_pack_missing_file():
    assert main(["pack", "--in", "/nonexistent/graph.txt"]) == 2


def test_pack_lp_method(tmp_path, capsys):
    path = tmp_path / "k5.txt"
    main(["gen", "--family", "circulant", "--n", "5", "--d", "4/5",
          "--seed", "0", "--out", str(path)])
    rc = main(["pack", "--in", str(path), "--method", "lp"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "fractional value=3.333333" in out


def test_verify_subcommand(capsys):
    assert main(["verify", "--n", "8", "--n-min", "5", "--trials", "3",
                 "--seed", "2"]) == 0
    assert "PASS" in capsys.readouterr().out


def test_sweep_subcommand(tmp_path, capsys):
    out = tmp_path / "rows.csv"
    rc = main(["sweep", "--d", "3/10", "--family", "circulant", "--n", "30",
               "--p-grid", "1/4,1/2", "--reps", "1", "--method", "greedy",
               "--seed", "4", "--out", str(out)])
    assert rc == 0
    assert len(out.read_text().splitlines()) == 3

    cfgfile = tmp_path / "sweep.cfg"
    cfgfile.write_text("d = 3/10\nfamily = circulant\nn = 30\np_grid = 1/4\n"
                       "method = greedy\nbase_seed = 4\n")
    out2 = tmp_path / "rows2.csv"
    assert main(["sweep", "--config", str(cfgfile), "--out", str(out2)]) == 0


def test_sweep_needs_config_or_flags(tmp_path):
    assert main(["sweep", "--out", str(tmp_path / "x.csv")]) == 2


def test_check_subcommand(capsys):
    rc = main(["check", "--d", "3/10", "--p", "1/5", "--n", "60", "--seed", "2"])
    assert rc == 0
    assert "bound_respected" in capsys.readouterr().out


def test_check_infeasible_params():
    assert main(["check", "--d", "1/3", "--p", "1/5", "--n", "50", "--seed", "0"]) == 2
