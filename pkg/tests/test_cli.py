import json

import pytest

from clusteralg.cli import main
from conftest import SEEDS_DIR

A2 = str(SEEDS_DIR / "a2.json")
A3 = str(SEEDS_DIR / "a3.json")
MARKOV = str(SEEDS_DIR / "markov.json")
KRONECKER = str(SEEDS_DIR / "kronecker.json")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_explore_a2(capsys):
    code, out, _ = run(capsys, "explore", A2, "--max-depth", "10")
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "closed, 5 seeds, 5 variables"
    assert "(x1 + x2 + 1)/(x1*x2)" in lines


def test_explore_kronecker_not_closed(capsys):
    code, out, _ = run(capsys, "explore", KRONECKER, "--max-depth", "6", "--json")
    report = json.loads(out)
    assert code == 0 and report["closed"] is False


def test_mutate_is_one_based(capsys):
    code, out, _ = run(capsys, "mutate", A2, "--at", "1")
    assert code == 0
    assert "x: (x2 + 1)/x1, x2" in out
    code, _, err = run(capsys, "mutate", A2, "--at", "0")
    assert code == 2 and "out of range" in err


def test_cover(capsys):
    code, out, _ = run(capsys, "cover", A2)
    assert code == 0
    assert out.splitlines() == ["freeze{x2}  P[x1] = x2 + 1", "freeze{x1}  P[x2] = x1 + 1"]


def test_cover_cyclic_is_error(capsys):
    code, _, err = run(capsys, "cover", MARKOV)
    assert code == 2 and err.startswith("error:")


def test_is_acyclic(capsys):
    assert run(capsys, "is-acyclic", A2)[0] == 0
    assert run(capsys, "is-acyclic", MARKOV)[0] == 1


def test_member(capsys):
    code, out, _ = run(capsys, "member", A2, "--element", "x1^-1", "--in", "A")
    assert code == 1
    assert "witness: freeze{x2}" in out
    code, out, _ = run(capsys, "member", A2, "--element", "(x1+x2+1)/(x1*x2)", "--in", "U", "--json")
    report = json.loads(out)
    assert code == 0 and report["member"] and report["exhaustive"]


def test_member_bad_element(capsys):
    code, _, err = run(capsys, "member", A2, "--element", "(x1+1)/(x1+2)", "--in", "A")
    assert code == 2 and "not a monomial" in err


def test_freeze(capsys):
    code, out, _ = run(capsys, "freeze", A2, "--at", "x2")
    assert code == 0
    assert out.splitlines()[0] == "freeze{x2}"
    assert "(x2 + 1)/x1" in out
    assert run(capsys, "freeze", A2, "--at", "u9")[0] == 2


def test_check_au_and_audit(capsys):
    code, out, _ = run(capsys, "check-au", A2, "--samples", "20")
    assert code == 0 and out.startswith("agree 20/20")
    code, out, _ = run(capsys, "laurent-audit", KRONECKER, "--depth", "4", "--random", "10")
    assert code == 0 and out.startswith("passed")


def test_validate_and_errors(capsys, tmp_path):
    assert run(capsys, "validate", A3)[0] == 0
    bad = tmp_path / "bad.json"
    bad.write_text('{"mutable": ["x1", "x2"], "B": [[0, 1], [1, 0]]}')
    code, _, err = run(capsys, "validate", str(bad))
    assert code == 2 and "error:" in err
    assert run(capsys, "validate", str(tmp_path / "missing.json"))[0] == 2


def test_usage_error_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["member", A2])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["explore", A2, "--max-depth", "-1"])
    assert exc.value.code == 2


def test_deterministic_output(capsys):
    first = run(capsys, "explore", A3, "--json")[1]
    second = run(capsys, "explore", A3, "--json")[1]
    assert first == second
    assert json.loads(first)["seeds"] == 14
