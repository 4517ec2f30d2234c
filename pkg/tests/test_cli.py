import json
from pathlib import Path

import pytest

from ssr.cli import main

REPO = Path(__file__).resolve().parent.parent
FIXTURES = REPO / "fixtures"


@pytest.fixture()
def cubics_file(tmp_path):
    path = tmp_path / "cubics.json"
    assert main(["construct", "binary_cubics", "--field", "Q",
                 "--out", str(path)]) == 0
    return path


def run_json(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out) if out else None


def test_construct_matches_golden_fixture(tmp_path):
    for name in ("binary_cubics", "tautological", "j_commutant", "hom_ef"):
        path = tmp_path / f"{name}.json"
        assert main(["construct", name, "--field", "Q", "--out", str(path)]) == 0
        assert path.read_bytes() == (FIXTURES / f"{name}.json").read_bytes()


def test_construct_is_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert main(["construct", "three_forms6", "--field", "Fp:7",
                     "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_construct_name_variants(tmp_path):
    path = tmp_path / "x.json"
    assert main(["construct", "BinaryCubics", "--field", "Q",
                 "--out", str(path)]) == 0
    assert json.loads(path.read_text())["name"] == "binary_cubics"


def test_construct_unknown_name(capsys):
    assert main(["construct", "nope", "--field", "Q"]) == 1
    assert "unknown construction" in capsys.readouterr().err


def test_verify(capsys, cubics_file):
    code, obj = run_json(capsys, ["verify", "--ssr", str(cubics_file)])
    assert code == 0
    assert obj["report"]["passed"]


def test_verify_rejects_corrupt_data(tmp_path, capsys, cubics_file):
    obj = json.loads(cubics_file.read_text())
    obj["bmu"][0][0][0] = "7/1"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(obj))
    code = main(["verify", "--ssr", str(bad)])
    assert code == 2
    err = capsys.readouterr().err
    assert "verification failed" in err


def test_decompose_example(capsys, cubics_file):
    code, obj = run_json(
        capsys, ["decompose", "--ssr", str(cubics_file), "--vector", "[1,0,0,1]"]
    )
    assert code == 0
    d = obj["decomposition"]
    assert {tuple(d["summand_b"]), tuple(d["summand_c"])} == {
        ("1/1", "0/1", "0/1", "0/1"),
        ("0/1", "0/1", "0/1", "1/1"),
    }
    assert d["q"] in ("3/1", "-3/1")


def test_decompose_validation_exit(capsys, cubics_file):
    assert main(["decompose", "--ssr", str(cubics_file),
                 "--vector", "[1,0,0,0]"]) == 1
    assert "ZeroQuartic" in capsys.readouterr().err


def test_decompose_with_extension(capsys, tmp_path):
    path = tmp_path / "c5.json"
    assert main(["construct", "binary_cubics", "--field", "Fp:5",
                 "--out", str(path)]) == 0
    # this cubic has invariant 2, a nonsquare mod 5
    code, obj = run_json(
        capsys,
        ["decompose", "--ssr", str(path), "--vector", "[0,1,0,2]",
         "--lambda", '"2"'],
    )
    assert code == 0
    assert obj["decomposition"]["lambda_class"] == {"mod": 5, "val": 2}
    # the summands live over the quadratic extension
    assert "im" in obj["decomposition"]["summand_b"][0]


def test_covariants(capsys, cubics_file):
    code, obj = run_json(
        capsys,
        ["covariants", "--ssr", str(cubics_file), "--vector", "[1,0,0,1]"],
    )
    assert code == 0
    assert obj["covariants"]["q"] == "9/1"


def test_fiber(capsys, cubics_file):
    code, obj = run_json(
        capsys,
        ["fiber", "--ssr", str(cubics_file), "--vector", "[1,0,0,1]",
         "--samples", "4"],
    )
    assert code == 0
    assert obj["q"] == "9/1"
    assert len(obj["points"]) == 4


def test_syzygy(capsys, cubics_file):
    code, obj = run_json(
        capsys,
        ["syzygy", "--ssr", str(cubics_file), "--samples", "25", "--seed", "1"],
    )
    assert code == 0
    assert obj["matrix_syzygy_checked"] == 25
    assert obj["scalar_syzygy_checked"] == 25


def test_lie_build(capsys, cubics_file):
    code, obj = run_json(capsys, ["lie-build", "--ssr", str(cubics_file)])
    assert code == 0
    assert obj["lie"]["dim"] == 14
    assert obj["heisenberg"]
    assert obj["jacobi_counterexample"] is None


def test_chart_round_trip(capsys, cubics_file):
    code, obj = run_json(
        capsys,
        ["chart", "alpha", "--ssr", str(cubics_file), "--lambda", '"1"',
         "--point", '{"p": ["1", "0", "0", "1"], "z": "3"}'],
    )
    assert code == 0
    assert obj["h"] == "1/1"
    code, back = run_json(
        capsys,
        ["chart", "beta", "--ssr", str(cubics_file), "--lambda", '"1"',
         "--point", json.dumps({"v": obj["v"]})],
    )
    assert code == 0
    assert back["p"] == ["1/1", "0/1", "0/1", "1/1"]
    assert back["z"] == "3/1"


def test_chart_act(capsys, cubics_file):
    code, obj = run_json(
        capsys,
        ["chart", "act", "--ssr", str(cubics_file), "--lambda", '"1"',
         "--point", '{"p": ["1", "0", "0", "1"], "z": "3"}',
         "--scalar", '["2", "0"]'],
    )
    assert code == 0
    assert obj["p"] == ["2/1", "0/1", "0/1", "2/1"]
    assert obj["z"] == "12/1"


def test_chart_invalid_point(capsys, cubics_file):
    assert main(
        ["chart", "alpha", "--ssr", str(cubics_file), "--lambda", '"1"',
         "--point", '{"p": ["1", "0", "0", "1"], "z": "2"}']
    ) == 1
    assert "InvalidHatPoint" in capsys.readouterr().err


def test_selftest(capsys):
    code, obj = run_json(
        capsys, ["selftest", "--field", "Fp:7", "--seed", "42", "--samples", "3"]
    )
    assert code == 0
    assert all(all(v.values()) for v in obj["constructions"].values())


def test_selftest_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert main(["selftest", "--field", "Fp:5", "--seed", "7",
                     "--samples", "2", "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()
