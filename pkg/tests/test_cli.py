from __future__ import annotations

import json
import subprocess
import sys

import pytest

from assocpell.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_seq(capsys):
    assert run(capsys, "seq", "q", "10") == (0, "3363\n")


def test_repdigit(capsys):
    assert run(capsys, "repdigit", "decompose", "8119") == (0, "8x1 1x2 9x1\n")


def test_cfrac(capsys):
    code, out = run(capsys, "cfrac", "sqrt(2)", "--terms", "4", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["quotients"] == [1, 2, 2, 2] and doc["convergents"][-1]["q"] == 12
    code, out = run(capsys, "cfrac", "log(10)/log(alpha)", "--terms", "69")
    assert "27232938992914655197439992935676" in out


def test_bound_matveev(capsys):
    spec = {"degree": 1, "D": 1, "terms": [{"A": 1}]}
    code, out = run(capsys, "bound", "matveev", "--spec", json.dumps(spec))
    doc = json.loads(out)
    assert code == 0 and float(doc["bound"]["lo"]) <= 1134000 <= float(doc["bound"]["hi"])
    spec = {"degree": 2, "terms": [{"A": "log(alpha)", "gamma": "alpha"}, {"A": "2*log(10)", "gamma": 10}, {"A": 10.18, "gamma": "9/2"}]}
    code, out = run(capsys, "bound", "matveev", "--spec", json.dumps(spec))
    assert float(json.loads(out)["coefficient"]["hi"]) == pytest.approx(4.00690833337e13)


def test_bound_matveev_rejects_small_A(capsys):
    spec = {"degree": 2, "terms": [{"A": 0.1, "gamma": "alpha"}]}
    assert main(["bound", "matveev", "--spec", json.dumps(spec)]) == 2


def test_bound_logsolve(capsys):
    code, out = run(capsys, "bound", "logsolve", "-r", "2", "-H", "1.9e26/log(alpha)")
    assert code == 0 and 3.1e30 < float(json.loads(out)["bound"]["hi"]) < 3.2e30


def test_reduce(capsys):
    mus = [f"log({2 * d}/9)/log(alpha)" for d in range(1, 10)]
    code, out = run(capsys, "reduce", "--tau", "log(10)/log(alpha)", "--mu", *mus, "-A", "21", "-B", "alpha", "-M", "3.2e30")
    doc = json.loads(out)
    assert code == 0 and doc["convergentIndex"] == 69 and doc["wBound"] == 91
    assert doc["rejectedConvergents"][0]["index"] == 68
    assert len(doc["epsilonPerCase"]) == 9


def test_reduce_exclude_and_failure(capsys):
    code, out = run(capsys, "reduce", "--tau", "log(10)/log(alpha)", "--mu", "log(2/9)/log(alpha)", "0", "-A", "21", "-B", "alpha", "-M", "100", "--exclude", "1")
    doc = json.loads(out)
    assert code == 0 and doc["excluded"][0]["case"] == 1


def test_search(capsys):
    code, out = run(capsys, "search", "eq3", "--nmax", "95", "--json")
    assert [tuple(s.values()) for s in json.loads(out)["solutions"]][-1] == (7, 4, 2, 3)
    code, out = run(capsys, "search", "eq4", "--nmax", "50")
    assert out.split("\n")[:3] == ["q_7 = 239", "q_10 = 3363", "q_11 = 8119"]
    code, out = run(capsys, "search", "eq5", "--kmax", "50", "--json")
    doc = json.loads(out)["solutions"]
    assert doc["values"] == [1, 3, 7, 17, 41] and doc["strictValues"] == [3, 7, 17, 41]


def test_prove_thm3_exit_code(capsys):
    code, out = run(capsys, "prove", "thm3", "--json")
    doc = json.loads(out)
    assert code == (0 if doc["ok"] else 1)
    assert len(doc["finalSolutions"]) == 6


def test_bad_expression(capsys):
    assert main(["cfrac", "foo(2)"]) == 2


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "assocpell", "seq", "q", "7"], capture_output=True, text=True, check=True)
    assert out.stdout == "239\n"
