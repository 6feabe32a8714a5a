import json
from fractions import Fraction

import pytest

from funceq.cli import main


def run_main(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_solve(capsys):
    code, out, _ = run_main(capsys, "solve", "--prime", 5)
    doc = json.loads(out)
    assert code == 0
    assert doc["details"]["dimension"] == 3 and doc["p"] == 5 and doc["pass"] is True
    assert "elapsed_ms" not in doc


def test_solve_p2_matches_brute(capsys):
    _, out, _ = run_main(capsys, "solve", "--prime", 2)
    dim = json.loads(out)["details"]["dimension"]
    _, out, _ = run_main(capsys, "brute", "--prime", 2)
    brute = json.loads(out)
    assert brute["details"]["count"] == 2 ** dim
    assert brute["pass"]


def test_not_prime(capsys):
    code, out, err = run_main(capsys, "solve", "--prime", 4)
    assert code == 2 and out == "" and "not prime" in err


def test_verify_pass(capsys):
    code, out, _ = run_main(capsys, "verify", "--prime", 7)
    doc = json.loads(out)
    assert code == 0 and doc["pass"]
    assert doc["pass"] == all(doc["details"]["checks"].values())


def test_verify_oracle(capsys):
    code, out, _ = run_main(capsys, "verify", "--prime", 5, "--oracle")
    doc = json.loads(out)
    assert code == 0
    assert doc["details"]["checks"]["oracle_equivalence"]
    assert doc["details"]["oracle"]["count"] == 125


def test_verify_small_prime_informational(capsys):
    code, out, _ = run_main(capsys, "verify", "--prime", 3)
    doc = json.loads(out)
    assert code == 0
    assert doc["details"]["scope"] == "theorem scope: brute force only"


def test_alien(capsys):
    code, out, _ = run_main(capsys, "alien", "--prime", 5)
    assert code == 0
    d = json.loads(out)["details"]
    assert {k: d[k] for k in ("p", "lemma_L", "equivalence", "alien_count")} == {
        "p": 5, "lemma_L": True, "equivalence": True, "alien_count": 5}


def test_brute_limit(capsys):
    code, _, err = run_main(capsys, "brute", "--prime", 7)
    assert code == 2 and "p <= 5" in err


def test_cocycle(capsys):
    code, out, _ = run_main(capsys, "cocycle", "--prime", 7, "--seed", 1, "--samples", 50)
    assert code == 0
    assert json.loads(out)["details"]["failures"] == 0
    code, out, _ = run_main(capsys, "cocycle", "--prime", 3, "--exhaustive")
    assert json.loads(out)["details"]["count"] == 27


def write(tmp_path, doc):
    path = tmp_path / "spec.json"
    path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return path


def test_ineq_known_solution(capsys, tmp_path):
    xs = [Fraction(k, 8) for k in range(-32, 33)]
    g = {"table": [str(x * x - abs(x)) for x in xs]}
    code, out, _ = run_main(capsys, "ineq", write(tmp_path, {"grid": {"m": 3, "K": 4}, "f": "linear:1", "g": g}))
    assert code == 0 and json.loads(out)["pass"]


def test_ineq_failure(capsys, tmp_path):
    code, out, _ = run_main(capsys, "ineq", write(tmp_path, {"grid": {"m": 3, "K": 4}, "f": "linear:1", "g": "zero"}))
    doc = json.loads(out)
    assert code == 1 and not doc["pass"]
    assert ["1", "1", "0", "2"] in doc["details"]["violations"]


@pytest.mark.parametrize("doc", [{"f": "linear:1", "g": "zero"}, "{not json", {"grid": {"m": 1, "K": 1}, "f": "nope:1", "g": "zero"}])
def test_ineq_bad_input(capsys, tmp_path, doc):
    code, out, err = run_main(capsys, "ineq", write(tmp_path, doc))
    assert code == 2 and out == "" and err


def test_json_out_has_timing(capsys, tmp_path):
    path = tmp_path / "v.json"
    code, out, _ = run_main(capsys, "solve", "--prime", 7, "--json-out", path)
    saved = json.loads(path.read_text())
    assert "elapsed_ms" in saved
    saved.pop("elapsed_ms")
    assert saved == json.loads(out)


def test_env_cap(run_cli):
    res = run_cli("solve", "--prime", 11, env={"FUNCEQ_MAX_P": "7", "PATH": ""})
    assert res.returncode == 2 and "cap" in res.stderr


def test_module_entry_point_is_deterministic(run_cli):
    a = run_cli("solve", "--prime", 13)
    b = run_cli("solve", "--prime", 13)
    assert a.returncode == 0 and a.stdout == b.stdout
    assert len(a.stdout.strip().splitlines()) == 1
