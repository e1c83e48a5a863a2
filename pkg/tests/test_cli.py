import json
import subprocess
import sys

import pytest

from gencospark.cli import main, run_sweep, sweep_densities
from gencospark.pattern import (
    dense_pattern,
    from_entries,
    identity_pattern,
    load_pattern,
    random_pattern,
    write_pattern,
)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_compute_identity(capsys, tmp_mtx):
    path = tmp_mtx(write_pattern(identity_pattern(5)))
    code, out, _ = run(capsys, "compute", str(path))
    assert code == 0
    assert "spcospark = 1" in out
    assert "|X_f| = 4" in out
    assert "X_f = 2 3 4 5" in out


def test_compute_dense_20x5(capsys, tmp_mtx):
    path = tmp_mtx(write_pattern(dense_pattern(20, 5)))
    code, out, _ = run(capsys, "compute", str(path))
    assert code == 0 and "spcospark = 16" in out


def test_compute_empty_column(capsys, tmp_mtx):
    path = tmp_mtx(write_pattern(from_entries(3, 2, [(0, 0), (1, 0)])))
    code, out, _ = run(capsys, "compute", str(path))
    assert code == 0 and "spcospark = 0 (deficient)" in out
    code, out, _ = run(capsys, "compute", str(path), "--json")
    assert json.loads(out) == {"m": 3, "n": 2, "nnz": 2, "spcospark": 0, "x_f": [], "deficient": True}


def test_compute_json_and_diagnostics(capsys, tmp_mtx):
    path = tmp_mtx(write_pattern(identity_pattern(3)))
    code, out, _ = run(capsys, "compute", str(path), "--json", "--diagnostics")
    data = json.loads(out)
    assert code == 0
    assert data["spcospark"] == 1 and data["x_f"] == [2, 3] and data["deficient"] is False
    assert [d["excluded_col"] for d in data["per_w"]] == [1, 2, 3]
    code, out, _ = run(capsys, "compute", str(path), "--diagnostics", "--order-seed", "4")
    assert "|X_W bar|" in out


def test_compute_parse_error(capsys, tmp_mtx):
    path = tmp_mtx("%%MatrixMarket matrix coordinate pattern general\n2 2 3\n1 1\n")
    code, _, err = run(capsys, "compute", str(path))
    assert code == 2 and "line 3" in err


def test_compute_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "compute", str(tmp_path / "nope.mtx"))
    assert code == 2 and "error" in err


def test_gen(capsys, tmp_path):
    out1, out2 = tmp_path / "a.mtx", tmp_path / "b.mtx"
    assert run(capsys, "gen", "--rows", "20", "--cols", "5", "--density", "0.5", "--seed", "7", "--out", str(out1))[0] == 0
    assert run(capsys, "gen", "--rows", "20", "--cols", "5", "--density", "0.5", "--seed", "7", "--out", str(out2))[0] == 0
    assert out1.read_bytes() == out2.read_bytes()
    assert load_pattern(out1) == random_pattern(20, 5, 0.5, 7)

    code, out, _ = run(capsys, "gen", "--rows", "20", "--cols", "5", "--density", "0", "--seed", "7", "--out", str(out1))
    assert code == 0 and "nnz = 0" in out
    code, out, _ = run(capsys, "gen", "--rows", "4", "--cols", "4", "--density", "1", "--seed", "1", "--out", str(out1))
    assert code == 0 and "nnz = 16" in out


def test_gen_errors(capsys, tmp_path):
    code, _, _ = run(capsys, "gen", "--rows", "4", "--cols", "4", "--density", "2", "--seed", "1", "--out", str(tmp_path / "x"))
    assert code == 2
    code, _, _ = run(capsys, "gen", "--rows", "4", "--cols", "4", "--density", "0.5", "--seed", "1", "--out", str(tmp_path / "no" / "dir" / "x"))
    assert code == 2


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as info:
        main(["gen", "--rows", "4"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(["verify", "--rows", "0", "--cols", "2", "--density", "0.5", "--trials", "1", "--seed", "1"])
    assert info.value.code == 2


def test_verify_agreement(capsys):
    code, out, _ = run(capsys, "verify", "--rows", "12", "--cols", "4", "--density", "0.4", "--trials", "20", "--seed", "11")
    assert code == 0 and "agreement: 20/20" in out


def test_verify_dense_square(capsys):
    code, out, _ = run(capsys, "verify", "--rows", "5", "--cols", "5", "--density", "1.0", "--trials", "1", "--seed", "1", "--json")
    data = json.loads(out)
    assert code == 0
    (t,) = data["trials"]
    assert (t["spcospark"], t["brute_spcospark"], t["cospark"]) == (1, 1, 1)


def test_verify_sparse_mostly_deficient(capsys):
    code, out, _ = run(capsys, "verify", "--rows", "8", "--cols", "4", "--density", "0.05", "--trials", "10", "--seed", "2", "--json")
    data = json.loads(out)
    assert code == 0 and data["disagree"] == 0
    deficient = [t for t in data["trials"] if t["deficient"]]
    assert len(deficient) >= 8
    assert all((t["spcospark"], t["brute_spcospark"], t["cospark"]) == (0, 0, 0) for t in deficient)


def test_verify_size_guard(capsys):
    code, _, err = run(capsys, "verify", "--rows", "23", "--cols", "4", "--density", "0.4", "--trials", "1", "--seed", "1")
    assert code == 3 and "limit" in err


def test_verify_exit_status_tracks_disagreement(monkeypatch, capsys):
    import gencospark.cli as cli

    monkeypatch.setattr(cli, "brute_spcospark", lambda p: (-1, frozenset()))
    code, out, _ = run(capsys, "verify", "--rows", "6", "--cols", "3", "--density", "0.8", "--trials", "2", "--seed", "1")
    assert code == 1 and "FAIL" in out


def test_sweep_densities():
    assert sweep_densities(10) == [k / 11 for k in range(1, 11)]
    assert sweep_densities(1) == [0.5]


def test_sweep_forced_dense(capsys):
    code, out, _ = run(capsys, "sweep", "--levels", "1", "--per-level", "1", "--densities", "1.0", "--seed", "3", "--json")
    data = json.loads(out)
    assert code == 0
    (level,) = data["levels"]
    assert level["trials"] == 1 and level["matches"] == 1 and level["mean_spcospark"] == "16"


def test_sweep_empty(capsys):
    code, out, _ = run(capsys, "sweep", "--per-level", "0", "--seed", "1", "--json")
    data = json.loads(out)
    assert code == 0 and data["total_trials"] == 0
    assert all(lv["trials"] == 0 and lv["mean_spcospark"] is None for lv in data["levels"])


def test_sweep_small_counts_and_reproducible(capsys):
    argv = ["sweep", "--rows", "10", "--cols", "3", "--levels", "3", "--per-level", "6", "--seed", "5", "--no-timing"]
    code, text1, _ = run(capsys, *argv)
    _, text2, _ = run(capsys, *argv)
    assert code == 0 and text1 == text2
    _, js1, _ = run(capsys, *argv, "--json")
    _, js2, _ = run(capsys, *argv, "--json")
    assert js1 == js2
    data = json.loads(js1)
    for lv in data["levels"]:
        assert lv["matches"] + lv["mismatches"] + lv["deficient_skips"] + lv["unchecked"] == lv["trials"] == 6
        assert "mean_runtime_s" not in lv
        # Table and JSON report the same numbers.
        row = f"{lv['density']:>8.4f} {lv['trials']:>6} {lv['matches']:>6} {lv['mismatches']:>8}"
        assert row in text1
        assert lv["mean_spcospark"] in text1


def test_sweep_no_oracle_and_guard(capsys):
    code, out, _ = run(capsys, "sweep", "--rows", "40", "--cols", "5", "--levels", "2", "--per-level", "3", "--seed", "1", "--no-oracle", "--json")
    data = json.loads(out)
    assert code == 0
    assert all(lv["matches"] == 0 and lv["unchecked"] + lv["deficient_skips"] == 3 for lv in data["levels"])
    assert "mean_runtime_s" in data["levels"][0]
    code, _, _ = run(capsys, "sweep", "--rows", "40", "--cols", "5", "--seed", "1")
    assert code == 3


def test_run_sweep_records_are_ordered():
    levels = run_sweep(8, 3, [0.3, 0.6], 4, seed=2)
    assert [lv.density for lv in levels] == [0.3, 0.6]


def test_module_entry_point(tmp_path):
    path = tmp_path / "i.mtx"
    path.write_text(write_pattern(identity_pattern(2)))
    proc = subprocess.run(
        [sys.executable, "-m", "gencospark", "compute", str(path)], capture_output=True, text=True
    )
    assert proc.returncode == 0 and "spcospark = 1" in proc.stdout
