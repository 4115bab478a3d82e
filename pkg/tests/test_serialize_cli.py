"""Wire-format round trips, schema sync, and CLI behavior (exit codes,
reproducibility metadata)."""

import json
import pathlib

import pytest

from abdyn import serialize
from abdyn.cli import main
from abdyn.errors import SchemaError
from abdyn.exactalg import IntMatrix, IntPolynomial
from abdyn.schemas import ALL_SCHEMAS
from abdyn.toroidal import delaunay_fan, nakamura_data

REPO = pathlib.Path(__file__).resolve().parents[1]


def test_schema_files_in_sync():
    for name, schema in ALL_SCHEMAS.items():
        path = REPO / "schemas" / f"{name}.schema.json"
        assert path.exists(), f"missing schema file {path}"
        assert json.loads(path.read_text()) == schema


def test_matrix_round_trip():
    M = IntMatrix.from_rows([[10 ** 30, -1], [0, 7]])
    doc = serialize.matrix_to_json(M)
    assert doc[0][0] == str(10 ** 30)  # decimal string, arbitrary precision
    assert serialize.matrix_from_json(doc) == M
    # plain ints accepted on input
    assert serialize.matrix_from_json([[2, 1], [1, 1]]).rows == 2
    with pytest.raises(SchemaError):
        serialize.matrix_from_json([[1], [1, 2]])  # ragged
    with pytest.raises(SchemaError):
        serialize.matrix_from_json([["x"]])


def test_poly_round_trip():
    p = IntPolynomial([1, -3, 1])
    assert serialize.poly_from_json(serialize.poly_to_json(p)) == p


def test_fan_round_trip():
    gd = nakamura_data(IntMatrix.from_rows([[1, 3], [0, 1]]))
    fan = delaunay_fan(gd)
    doc = serialize.fan_to_json(fan)
    back = serialize.fan_from_json(doc)
    assert set(back.cones) == set(fan.cones)
    assert back.gamma == fan.gamma
    assert back.metric == fan.metric


def test_lattice_round_trip():
    doc = {"g": 1, "basis": [[[1.0, 0.0]], [[0.0, 1.0]]]}
    lat = serialize.lattice_from_json(doc)
    assert lat.g == 1 and lat.basis[1][0] == 1j
    assert serialize.lattice_to_json(lat)["basis"] == doc["basis"]


def run_cli(args, stdin_text=None, capsys=None, monkeypatch=None, tmp=None):
    import io
    import sys
    if stdin_text is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin_text))
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_analyze_matrix(capsys, monkeypatch):
    code, out, _ = run_cli(["analyze"], "[[2,1],[1,1]]", capsys, monkeypatch)
    assert code == 0
    doc = json.loads(out)
    lam = doc["result"]["degrees"]["lambdas"]
    assert abs(lam[1] - 2.6180339887) < 1e-8
    # reproducibility metadata embedded
    assert doc["options"]["tol"] == 1e-9 and doc["options"]["n_max"] == 25
    assert doc["input"]["matrix"] == [[2, 1], [1, 1]]


def test_cli_analyze_identity(capsys, monkeypatch):
    code, out, _ = run_cli(["analyze"], "[[1,0],[0,1]]", capsys, monkeypatch)
    assert code == 0
    lam = json.loads(out)["result"]["degrees"]["lambdas"]
    assert all(x == 1.0 for x in lam)


def test_cli_malformed_json_exit_2(capsys, monkeypatch):
    code, _, err = run_cli(["analyze"], "not json", capsys, monkeypatch)
    assert code == 2 and "schema" in err


def test_cli_contract_error_exit_3(capsys, monkeypatch):
    code, _, err = run_cli(
        ["decide"], '{"g": 2, "charpoly": [1,0,0,0,1], "r": 7}',
        capsys, monkeypatch)
    assert code == 3


def test_cli_decide_examples(capsys, monkeypatch):
    cases = [
        ({"g": 2, "charpoly": [1, -4, 6, -4, 1], "r": 1, "k": 1},
         "NotRegularizable"),
        ({"g": 2, "charpoly": [1, -3, 1, -3, 1], "r": 0}, "Regularizable"),
        ({"g": 2, "charpoly": [1, -4, 6, -4, 1], "r": 2, "k": 1},
         "Undetermined"),
    ]
    for payload, expected in cases:
        code, out, _ = run_cli(["decide"], json.dumps(payload),
                               capsys, monkeypatch)
        assert code == 0
        assert json.loads(out)["result"]["status"] == expected


def test_cli_fan_pipeline(tmp_path, capsys, monkeypatch):
    fan_file = tmp_path / "fan.json"
    code, out, _ = run_cli(["fan", "build", "--B", "[[2]]",
                            "--out", str(fan_file)], None, capsys, monkeypatch)
    assert code == 0 and fan_file.exists()
    code, out, _ = run_cli(["fan", "validate", str(fan_file)],
                           None, capsys, monkeypatch)
    assert code == 0
    doc = json.loads(out)["result"]
    assert doc["ok"] and doc["central_fiber"] == {"vertices": 2,
                                                  "maximal_cells": 2}
    code, out, _ = run_cli(["fan", "extends", "--nphi", "[3]", str(fan_file)],
                           None, capsys, monkeypatch)
    assert code == 0
    doc = json.loads(out)["result"]
    assert doc["extends"] and doc["regularizing_power"] == 2


def test_cli_fan_build_random_metric_reproducible(capsys, monkeypatch):
    outs = []
    for _ in range(2):
        code, out, _ = run_cli(["fan", "build", "--B", "[[1,0],[0,1]]",
                                "--metric", "random", "--seed", "11"],
                               None, capsys, monkeypatch)
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1]
    assert json.loads(outs[0])["options"]["seed"] == 11


def test_cli_orbit_analyze(capsys, monkeypatch):
    code, out, _ = run_cli(
        ["orbit", "analyze",
         "--lattice", '{"g":1,"basis":[[[1,0]],[[0,1]]]}',
         "--alpha", "[[1.4142135623730951,0]]"],
        None, capsys, monkeypatch)
    assert code == 0
    doc = json.loads(out)
    assert (doc["result"]["h"], doc["result"]["s"]) == (1, 0)
    assert doc["options"] == {"height": 50, "tol": 1e-10}


def test_cli_catalog_and_end_to_end(capsys, monkeypatch):
    code, out, _ = run_cli(["catalog", "list", "--g", "4"],
                           None, capsys, monkeypatch)
    assert code == 0
    assert [c["m"] for c in json.loads(out)["result"]] \
        == [1, 2, 4, 2, 4, 6, 2, 3]
    code, out, _ = run_cli(["end-to-end", "--case", "2.2", "--d", "2",
                            "--r", "1"], None, capsys, monkeypatch)
    assert code == 0
    doc = json.loads(out)["result"]
    assert doc["verdict"]["status"] == "NotRegularizable"
    assert doc["m"] == 2
    code, out, _ = run_cli(["end-to-end", "--case", "5.5"],
                           None, capsys, monkeypatch)
    assert code == 0
    assert json.loads(out)["result"]["m"] == 5
