import csv

import numpy as np
import pytest

from taulsd import io
from taulsd.cli import main


def _data_rows(path):
    return [line for line in open(path) if not line.startswith("#")]


def test_simulate_tau_spectrum_pipeline(tmp_path):
    data = tmp_path / "x.csv"
    assert main(["simulate", "--model", "example1", "--p", "5", "--n", "40", "--seed", "3",
                 "--out", str(data)]) == 0
    meta = io.read_meta(data)
    assert {"version", "config_hash", "seed"} <= set(meta) and meta["seed"] == "3"
    X = io.read_matrix_csv(data)
    assert X.shape == (5, 40)
    tau = tmp_path / "t.csv"
    assert main(["tau", "--input", str(data), "--out", str(tau)]) == 0
    T = io.read_matrix_csv(tau)
    assert np.array_equal(T, T.T)
    spec = tmp_path / "s.csv"
    assert main(["spectrum", "--input", str(data), "--from-data", "--out", str(spec),
                 "--svg"]) == 0
    eig_rows = list(csv.reader(_data_rows(tmp_path / "s_eigs.csv")))
    assert eig_rows[0] == ["eigenvalue"] and len(eig_rows) == 6
    ecdf_rows = list(csv.reader(_data_rows(tmp_path / "s_ecdf.csv")))
    assert ecdf_rows[0] == ["x", "F"] and float(ecdf_rows[-1][1]) == 1.0
    assert (tmp_path / "s.svg").read_text().startswith("<svg")


def test_outputs_bit_identical(tmp_path):
    for name in ("a.csv", "b.csv"):
        main(["simulate", "--model", "exampleA", "--p", "4", "--n", "10", "--seed", "7",
              "--out", str(tmp_path / name)])
    a = (tmp_path / "a.csv").read_text().replace("a.csv", "")
    b = (tmp_path / "b.csv").read_text().replace("b.csv", "")
    assert _data_rows(tmp_path / "a.csv") == _data_rows(tmp_path / "b.csv")
    assert a.count("\n") == b.count("\n")


def test_tau_single_row(tmp_path):
    data = tmp_path / "x.csv"
    data.write_text("1,1,2,3\n")
    out = tmp_path / "t.csv"
    assert main(["tau", "--input", str(data), "--out", str(out)]) == 0
    assert io.read_matrix_csv(out) == pytest.approx(np.array([[5 / 6]]))


def test_limit_moments(capsys, tmp_path):
    assert main(["limit-moments", "--model", "continuous-iid", "--scale", "1.5"]) == 0
    vals = [float(v) for v in capsys.readouterr().out.split()]
    assert vals == pytest.approx([0, 1, 0, 2, 0, 5, 0, 14], abs=1e-12)
    out = tmp_path / "m.json"
    assert main(["limit-moments", "--model", "exampleA", "--scale", "1.5", "--rmax", "3",
                 "--out", str(out)]) == 0
    import json
    obj = json.loads(out.read_text())
    assert obj["provenance"]["evaluator"] == "structured" and "config_hash" in obj["meta"]


def test_verify(tmp_path):
    out = tmp_path / "v.json"
    assert main(["verify", "--model", "example1", "--p", "6", "--n", "20", "--strict",
                 "--g1-grid", "16,64", "--out", str(out)]) == 0
    import json
    obj = json.loads(out.read_text())
    assert obj["assumption2"]["ok"] and len(obj["g1_rate"]) == 2


def test_independence_and_cluster(tmp_path):
    out = tmp_path / "it.json"
    assert main(["independence-test", "--model", "table4", "--p", "7", "--n", "49",
                 "--reps", "20", "--cal-reps", "20", "--alphas", "0,1", "--out", str(out)]) == 0
    rows = list(csv.reader(_data_rows(tmp_path / "it.csv")))
    assert rows[0] == ["phase", "alpha", "rep", "distance"] and len(rows) == 61
    data = tmp_path / "x.csv"
    main(["simulate", "--model", "example1", "--p", "30", "--n", "20", "--out", str(data)])
    cv = tmp_path / "c.json"
    assert main(["cluster-verify", "--input", str(data), "--out", str(cv)]) == 0
    labels = tmp_path / "c.labels.csv"
    assert main(["cluster-verify", "--input", str(data), "--labels", str(labels)]) == 0


def test_reproduce_outputs_three_way_comparison(tmp_path):
    out = tmp_path / "t2.csv"
    code = main(["reproduce", "table2", "--p", "8", "--n", "60", "--out", str(out)])
    assert code == 0
    rows = list(csv.DictReader(_data_rows(out)))
    assert {"target", "computed", "delta"} <= set(rows[0])
    first = rows[0]
    assert first["target"].endswith("[published]")
    assert abs(float(first["computed"]) - 1.0) == float(first["delta"])


def test_reproduce_strict_exit_code(tmp_path):
    assert main(["reproduce", "table1", "--p", "6", "--n", "30", "--strict"]) == 3


def test_fig5(tmp_path):
    out = tmp_path / "f.csv"
    assert main(["reproduce", "fig5", "--svg", "--out", str(out)]) == 0
    assert (tmp_path / "f_alpha0.svg").exists() and (tmp_path / "f_alpha2.svg").exists()


def test_errors(tmp_path, capsys):
    assert main(["no-such-command"]) == 1
    bad = tmp_path / "bad.csv"
    bad.write_text("1,2,3\n4,x,6\n")
    assert main(["tau", "--input", str(bad), "--out", str(tmp_path / "o.csv")]) == 2
    assert ":2:" in capsys.readouterr().err
    ragged = tmp_path / "r.csv"
    ragged.write_text("# c\n1,2,3\n4,5\n")
    with pytest.raises(io.FormatError, match=":3:"):
        io.read_matrix_csv(ragged)
    assert main(["tau", "--input", str(tmp_path / "missing.csv"), "--out", "o.csv"]) == 2
    assert main(["simulate", "--out", str(tmp_path / "o.csv")]) == 1
