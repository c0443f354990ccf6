import json
import subprocess
import sys

import pytest

from jrcommute import serialization as ser
from jrcommute.cli import EXIT_FAIL, EXIT_INPUT, EXIT_OK, main


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_fixtures(fixtures_dir, capsys):
    code, out, _ = run(["check", fixtures_dir / "zero_model.json"], capsys)
    assert code == EXIT_OK
    assert json.loads(out)["scalars"]["classification"]["variant"] == "Einstein"
    code, out, _ = run(["check", fixtures_dir / "neutral_example_s1.json"], capsys)
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["scalars"]["classification"] == {"variant": "SimpleComplex", "a1": "0", "a2_squared": "4"}
    assert data["scalars"]["signature"] == [2, 2]


def test_invalid_tensor_exit_code_and_message(fixtures_dir, capsys):
    code, _, err = run(["check", fixtures_dir / "broken_bianchi.json"], capsys)
    assert code == EXIT_INPUT
    assert "broken_bianchi.json" in err and "(1, 2, 3, 4)" in err


def test_missing_file_and_bad_json(tmp_path, capsys):
    code, _, _ = run(["check", tmp_path / "nope.json"], capsys)
    assert code == EXIT_INPUT
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    code, _, err = run(["check", bad], capsys)
    assert code == EXIT_INPUT and "line 1" in err


def test_construct_then_decompose_round_trip(fixtures_dir, tmp_path, capsys):
    for name in ("seed_p2_constant", "seed_p2_kaehler", "seed_p3_constant"):
        model_path = tmp_path / f"{name}.model.json"
        seed_path = tmp_path / f"{name}.back.json"
        code, _, err = run(["construct", fixtures_dir / f"{name}.json", "--verify", "-o", model_path], capsys)
        assert code == EXIT_OK, err
        assert "[PASS] neutral_signature" in err
        code, out, _ = run(["decompose", model_path, "-o", seed_path], capsys)
        assert code == EXIT_OK
        assert max(json.loads(out)["residuals"].values()) <= 1e-9
        original = ser.seed_from_json(ser.load(fixtures_dir / f"{name}.json"))
        back = ser.seed_from_json(ser.load(seed_path))
        assert abs(float(back.a1) - float(original.a1)) < 1e-9
        assert abs(float(back.a2) - float(original.a2)) < 1e-9


def test_decompose_refuses_einstein(fixtures_dir, capsys):
    code, _, err = run(["decompose", fixtures_dir / "zero_model.json"], capsys)
    assert code == EXIT_INPUT and "NotSimpleComplex" in err


def test_equiv_apply_routes_agree(fixtures_dir, capsys):
    args = ["equiv-apply", fixtures_dir / "seed_p2_kaehler.json", "--T", fixtures_dir / "T_p2.json"]
    _, a, _ = run(args + ["--route", "pullback"], capsys)
    _, b, _ = run(args + ["--route", "expansion"], capsys)
    assert a == b


def test_equiv_verify(fixtures_dir, tmp_path, capsys):
    seed = fixtures_dir / "seed_p2_kaehler.json"
    code, out, _ = run(["equiv-verify", seed, seed, "--witness", fixtures_dir / "witness_identity_p2.json"], capsys)
    assert code == EXIT_OK and json.loads(out) == {"isomorphic_via_witness": True}
    other = fixtures_dir / "seed_p2_constant.json"
    code, out, _ = run(["equiv-verify", seed, other, "--witness", fixtures_dir / "witness_identity_p2.json"], capsys)
    assert code == EXIT_FAIL


def test_example22_matches_golden(golden_dir, capsys):
    code, out, _ = run(["example22", "--s", "1"], capsys)
    assert code == EXIT_OK
    assert out == (golden_dir / "example22_s1.json").read_text(encoding="utf-8")


@pytest.mark.parametrize("s", ["3/2", "-2"])
def test_example22_other_parameters(s, capsys):
    code, out, _ = run(["example22", "--s", s, "--point", "1,-2,5,1/3", "--point", "0,0,0,0"], capsys)
    assert code == EXIT_OK
    assert json.loads(out)["report"]["ok"] is True


def test_curvature_command(fixtures_dir, capsys):
    code, out, _ = run(["curvature", fixtures_dir / "neutral_metric_s1.json", "--point", "1,2,3,4", "--symmetric"],
                       capsys)
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["locally_symmetric"] is True
    assert len(data["model"]["components"]) == 4


def test_random_einstein_is_deterministic(capsys):
    _, a, _ = run(["random-einstein", "--dim", "4", "--kind", "kaehler", "--rng-seed", "7"], capsys)
    _, b, _ = run(["random-einstein", "--dim", "4", "--kind", "kaehler", "--rng-seed", "7"], capsys)
    assert a == b
    assert json.loads(a)["einstein_constant"] == "1"


def test_module_entry_point(fixtures_dir):
    proc = subprocess.run([sys.executable, "-m", "jrcommute", "check", str(fixtures_dir / "zero_model.json")],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["ok"] is True
