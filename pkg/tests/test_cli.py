import json
import math
import subprocess
import sys

import numpy as np
import pytest

from symplectica import gstate as gs
from symplectica import io as sio
from symplectica.cli import main
from symplectica.engineer import Circuit, CircuitElement
from symplectica.errors import DimensionMismatch, UnphysicalState
from symplectica.symplectic import to_blocked


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gen_then_check_pure(tmp_path, capsys):
    path = tmp_path / "s.json"
    code, _, _ = run(capsys, "gen", "tmss", "--r", "0.8", "--out", str(path))
    assert code == 0
    code, out, _ = run(capsys, "check", str(path), "--pure")
    assert code == 0
    report = json.loads(out)
    assert report["pure"] is True
    assert report["purity_residual"] <= 1e-12


def test_check_not_pure(tmp_path, capsys):
    path = tmp_path / "t.json"
    run(capsys, "gen", "thermal", "--nu", "2,1", "--out", str(path))
    code, _, err = run(capsys, "check", str(path), "--pure")
    assert code == 1
    assert "not pure" in err


def test_check_unphysical(tmp_path, capsys):
    path = tmp_path / "bad.json"
    sio.write_atomic(path, sio.dumps(sio.matrix_payload(np.diag([0.5, 0.5]))))
    code, out, _ = run(capsys, "check", str(path))
    assert code == 1
    assert json.loads(out)["valid"] is False


def test_dof(capsys):
    code, out, _ = run(capsys, "dof", "--n", "3")
    assert code == 0
    assert json.loads(out)["pure_invariant"] == 3
    code, out, _ = run(capsys, "dof", "--n", "2", "--m", "1")
    assert json.loads(out)["schmidt_invariant"] == 1


def test_experiment_csv_rows(capsys):
    code, out, _ = run(capsys, "experiment", "--n", "4..6", "--samples", "20",
                       "--energy-per-mode", "5", "--seed", "7", "--csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "n,ensemble,samples,energy,mean_entropy,stddev,stderr"
    assert len(lines) == 7


def test_experiment_files_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert run(capsys, "experiment", "--n", "3,4", "--samples", "15", "--seed", "2",
                   "--csv", "--out", str(path))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    meta = json.loads((tmp_path / "a.csv.meta.json").read_text())
    assert meta["seed"] == 2 and meta["entropy_base"] == "e"


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["experiment", "--n", "4", "--samples", "10"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["dof", "--n", "3", "--bogus"])
    assert exc.value.code == 2
    code, _, _ = run(capsys, "gen", "tmss")
    assert code == 2
    code, _, _ = run(capsys, "experiment", "--n", "a..b", "--seed", "1")
    assert code == 2


def test_pipeline_commands(tmp_path, capsys):
    state = tmp_path / "r.json"
    assert run(capsys, "gen", "random", "--n", "3", "--seed", "4", "--out", str(state))[0] == 0

    code, out, _ = run(capsys, "spectrum", str(state))
    assert code == 0
    np.testing.assert_allclose(json.loads(out)["symplectic_eigenvalues"], 1.0, atol=1e-8)

    code, out, _ = run(capsys, "williamson", str(state))
    assert json.loads(out)["reconstruction_residual"] <= 1e-8 * 100

    code, out, _ = run(capsys, "blocks", str(state))
    assert code == 0 and len(json.loads(out)["sigma_x"]) == 3

    code, out, _ = run(capsys, "standard-form", str(state), "--three-mode")
    assert code == 0 and json.loads(out)["xp_norm"] <= 1e-7

    code, out, _ = run(capsys, "schmidt", str(state), "--modes", "1")
    res = json.loads(out)
    assert code == 0 and res["reconstruction_residual"] <= 1e-7
    assert res["entropy"] == pytest.approx(gs.entanglement_entropy(sio.read_cm(state), [1]), abs=1e-9)


def test_standard_form_two_mode(tmp_path, capsys):
    path = tmp_path / "t.json"
    run(capsys, "gen", "tmss", "--r", "1.1", "--out", str(path))
    code, out, _ = run(capsys, "standard-form", str(path), "--pure-two-mode")
    assert code == 0
    assert json.loads(out)["r"] == pytest.approx(1.1, abs=1e-10)


def test_engineer_and_euler(tmp_path, capsys):
    circ = tmp_path / "c.json"
    code, out, _ = run(capsys, "engineer", "--n", "4", "--seed", "3", "--circuit-out", str(circ))
    res = json.loads(out)
    assert code == 0 and res["parameter_count"] == 8
    assert res["purity_residual"] <= 1e-9
    code, out, _ = run(capsys, "euler", str(circ))
    res = json.loads(out)
    assert code == 0
    assert res["orthogonality_residual"] <= 1e-10
    assert all(z >= 1 for z in res["z"])


def test_engineer_params_file(tmp_path, capsys):
    params = tmp_path / "p.json"
    sio.write_atomic(params, json.dumps({"n": 2, "s": math.exp(0.3)}))
    code, out, _ = run(capsys, "engineer", "--params", str(params))
    sigma = sio.parse_matrix(json.loads(out)["state"])
    assert gs.entanglement_entropy(sigma, [1]) == pytest.approx(
        gs.von_neumann_entropy(gs.thermal([math.cosh(0.6)])), abs=1e-10)


def test_sample_csv(capsys):
    code, out, _ = run(capsys, "sample", "--n", "3", "--count", "4", "--seed", "1", "--csv")
    assert code == 0
    assert len(out.strip().splitlines()) == 5


def test_blocked_ordering_reader(tmp_path):
    sigma = gs.two_mode_squeezed(0.5)
    path = tmp_path / "b.json"
    sio.write_atomic(path, json.dumps({"n": 2, "ordering": "blocked",
                                       "matrix": to_blocked(sigma).tolist()}))
    np.testing.assert_allclose(sio.read_cm(path), sigma)


def test_io_errors(tmp_path):
    with pytest.raises(DimensionMismatch):
        sio.parse_matrix({"n": 2, "matrix": [[1, 0], [0, 1]]})
    with pytest.raises(DimensionMismatch):
        sio.parse_matrix({"matrix": [[1, 0, 0]]})
    with pytest.raises(ValueError):
        sio.parse_matrix({"matrix": [[1, 0], [0, 1]], "ordering": "sideways"})
    bad = tmp_path / "bad.json"
    sio.write_cm(bad, np.eye(2))
    payload = json.loads(bad.read_text())
    payload["matrix"] = [[0.5, 0], [0, 0.5]]
    bad.write_text(json.dumps(payload))
    with pytest.raises(UnphysicalState):
        sio.read_cm(bad)


def test_circuit_file_round_trip(tmp_path):
    c = Circuit(3, (CircuitElement("squeezer", (1,), 2.0), CircuitElement("seraphique", (1, 3), 0.4)))
    path = tmp_path / "c.json"
    sio.write_circuit(path, c)
    assert sio.read_circuit(path) == c
    assert not [p for p in tmp_path.iterdir() if p.name.startswith(".tmp-")]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "symplectica", "dof", "--n", "4"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["pure_invariant"] == 8
    proc = subprocess.run([sys.executable, "-m", "symplectica", "sample", "--n", "2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 2
