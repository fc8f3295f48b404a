import json
import shutil
import subprocess

import pytest

from coxext.cli import main, parse_n_list


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_pmf_exact_csv(capsys):
    code, out, _ = run(capsys, "pmf", "A2", "--stat", "inv", "--exact", "--format", "csv")
    assert code == 0
    rows = [line.split(",")[:2] for line in out.splitlines()[1:]]
    assert rows == [["0", "1"], ["1", "2"], ["2", "2"], ["3", "1"]]


def test_pmf_json_des(capsys):
    code, out, _ = run(capsys, "pmf", "B2", "--stat", "des", "--exact", "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["counts"] == ["1", "6", "1"] and d["stat"] == "des"


def test_describe(capsys):
    code, out, _ = run(capsys, "describe", "I2(5)", "--format", "json")
    d = json.loads(out)
    assert code == 0
    assert (d["rank"], d["order"], d["degrees"]) == (2, "10", [2, 5])


def test_oracle_verify(capsys):
    code, out, _ = run(capsys, "oracle-verify", "B2")
    assert code == 0 and "False" not in out


def test_oracle_verify_cap(capsys):
    code, _, err = run(capsys, "oracle-verify", "A9")
    assert code == 2 and "cap" in err


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as info:
        main(["pmf"])
    assert info.value.code == 2
    code, _, err = run(capsys, "describe", "A0")
    assert code == 2 and "A requires" in err
    with pytest.raises(SystemExit) as info:
        main(["converge", "--seq", "A@n", "--n-list", "1e2..x", "--stat", "des"])
    assert info.value.code == 2
    capsys.readouterr()


def test_moments_roots_norms(capsys):
    code, out, _ = run(capsys, "moments", "I2(5)", "--stat", "inv")
    assert code == 0 and ",5/2,9/4," in out
    code, out, _ = run(capsys, "roots", "A2")
    assert code == 0 and len(out.splitlines()) == 3
    code, out, _ = run(capsys, "norms", "--seq", "A@n", "--n", "100", "--format", "json")
    assert json.loads(out)[0]["s"] == pytest.approx(170.4039, abs=1e-4)


def test_converge_and_grid(capsys):
    code, out, _ = run(capsys, "converge", "--seq", "A@n", "--stat", "des", "--n-list",
                       "10,100", "--grid=-2:5:0.5")
    assert code == 0
    assert out.splitlines()[0] == "n,N_n,a,b,sup_error,argmax_x"
    assert len(out.splitlines()) == 3


def test_tailratio_warns(capsys):
    code, out, err = run(capsys, "tailratio", "A3", "--x-list", "1,9")
    assert code == 0 and "warning" in err


def test_simulate_seed_env(capsys, monkeypatch):
    monkeypatch.setenv("COXEXT_SEED", "11")
    code, a, _ = run(capsys, "simulate", "--seq", "A@n", "--stat", "des", "--n-list", "20",
                     "--replicates", "4")
    code2, b, _ = run(capsys, "simulate", "--seq", "A@n", "--stat", "des", "--n-list", "20",
                      "--replicates", "4", "--seed", "11")
    assert code == code2 == 0 and a == b
    assert a.splitlines()[0] == "n,replicate,value"


def test_simulate_needs_seed(capsys, monkeypatch):
    monkeypatch.delenv("COXEXT_SEED", raising=False)
    code, _, err = run(capsys, "simulate", "--seq", "A@n", "--n-list", "5")
    assert code == 2 and "seed" in err


def test_check(capsys):
    code, out, err = run(capsys, "check", "--seq", "A@n", "--condition", "rank_growth",
                         "--n-list", "1e2..1e5x10")
    assert code == 0
    assert out.splitlines()[1].endswith("satisfied")
    assert "rank_growth: satisfied" in err


def test_output_file(capsys, tmp_path):
    path = tmp_path / "out.csv"
    code, out, _ = run(capsys, "pmf", "A1", "--output", str(path))
    assert code == 0 and out == ""
    assert path.read_text().startswith("k,mass")


def test_n_list():
    assert parse_n_list("1e2..1e4x10") == [100, 1000, 10000]
    assert parse_n_list("5,10,2e3") == [5, 10, 2000]
    assert parse_n_list("1..16x2") == [1, 2, 4, 8, 16]


@pytest.mark.skipif(shutil.which("coxext") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["coxext", "describe", "A3"], capture_output=True, text=True)
    assert proc.returncode == 0 and "order,24" in proc.stdout
