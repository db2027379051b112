import json
import shutil
import subprocess

import pytest

from cayleycliques import cli
from cayleycliques.suite import SuiteResult, claims, run_suite


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_graph_descriptor(capsys):
    code, out, _ = run(capsys, "graph", "--family", "gp", "-p", "13", "-d", "2")
    assert code == 0
    d = json.loads(out)
    assert d["vertices"] == 13 and d["degree"] == 6 and d["field"]["generator_index"] == 2


def test_graph_export(capsys, tmp_path):
    path = tmp_path / "pe81.dimacs"
    code, _, _ = run(capsys, "graph", "--family", "peisert", "-p", "3", "-s", "4",
                     "--export", "dimacs", "-o", str(path))
    assert code == 0
    assert path.read_text().splitlines()[0] == "p edge 81 1620"


def test_parameter_errors(capsys):
    assert run(capsys, "graph", "--family", "gp", "-p", "11", "-d", "2")[0] == 2
    assert run(capsys, "graph", "--family", "peisert", "-p", "5", "-s", "2")[0] == 2
    assert run(capsys, "omega", "--family", "gp", "-p", "9", "-d", "2")[0] == 2
    assert run(capsys, "graph", "--family", "custom", "-p", "13", "-m", "4", "--classes", "0")[0] == 2


def test_omega(capsys):
    code, out, _ = run(capsys, "omega", "--family", "peisert", "-p", "3", "-s", "4")
    d = json.loads(out)
    assert code == 0 and d["omega"] == 9 and d["status"] == "maximum"
    code, out, _ = run(capsys, "omega", "--family", "gp", "-p", "5", "-d", "2")
    assert json.loads(out)["omega"] == 2


def test_omega_time_limit_exit_code(capsys):
    code, out, _ = run(capsys, "omega", "--family", "peisert", "-p", "7", "-s", "4", "--time-limit", "0")
    d = json.loads(out)
    assert code == 3 and not d["complete"] and d["omega"] is None


def test_resource_limit_exit_code(capsys, monkeypatch):
    monkeypatch.setenv("CAYLEYCLIQUES_MATERIALIZE_CAP", "50")
    assert run(capsys, "omega", "--family", "peisert", "-p", "3", "-s", "4")[0] == 3


def test_omega_output_deterministic(capsys):
    outs = []
    for threads in ("1", "4", "1"):
        _, out, _ = run(capsys, "omega", "--family", "peisert", "-p", "7", "-s", "2", "--threads", threads)
        d = json.loads(out)
        d.pop("elapsed_ms")
        d.pop("nodes_explored")
        outs.append(json.dumps(d, sort_keys=True))
    assert len(set(outs)) == 1


def test_maximal(capsys):
    code, out, _ = run(capsys, "maximal", "--family", "peisert", "-p", "3", "-s", "4", "--subfield", "1")
    d = json.loads(out)
    assert code == 0 and d["verdict"] == "not maximal" and d["dichotomy"]["outcome"] == "extended"
    code, out, _ = run(capsys, "maximal", "--family", "peisert", "-p", "7", "-s", "4", "--subfield", "1")
    assert json.loads(out)["verdict"] == "maximal"
    code, out, _ = run(capsys, "maximal", "--family", "gp", "-p", "5", "-s", "6", "-d", "3",
                       "--subfield", "1", "--grow")
    d = json.loads(out)
    assert d["verdict"] == "not maximal" and d["growth"]["subspace"]["span_size"] == 125


def test_bounds(capsys):
    code, out, _ = run(capsys, "bounds", "-p", "3", "-s", "4", "-d", "4")
    d = json.loads(out)
    assert code == 0 and d["best"] == 8 and d["best_source"] == "lucas"
    assert run(capsys, "bounds", "-p", "3", "-s", "3", "-d", "2")[0] == 2


def test_suite_fast_and_ledger(capsys, tmp_path):
    ledger = tmp_path / "ledger.jsonl"
    code, out, err = run(capsys, "suite", "--ledger", str(ledger))
    assert code == 0
    lines = ledger.read_text().splitlines()
    records = [SuiteResult.from_json(line) for line in lines]
    assert [r.to_json() for r in records] == lines
    assert len(records) == len([c for c in claims() if c.tier == "fast"])
    assert all(r.passed is not False for r in records)
    assert "FAIL" not in err
    assert [json.loads(line) for line in out.splitlines()] == [json.loads(line) for line in lines]


def test_suite_alias(capsys, monkeypatch):
    monkeypatch.setattr(cli, "run_suite", lambda tier, ledger=None, on_result=None: [])
    assert run(capsys, "paper-suite")[0] == 0


def test_suite_failure_exit_code(capsys, monkeypatch):
    bad = SuiteResult("x", {}, 1, "derived: test", 2, False, 0.0)
    monkeypatch.setattr(cli, "run_suite", lambda tier, ledger=None, on_result=None: [bad])
    assert run(capsys, "suite")[0] == 4


def test_suite_reruns_agree():
    def strip(results):
        return [{k: v for k, v in vars(r).items() if k != "elapsed_ms"} for r in results]

    select = {"omega_peisert_81", "quadruple_81_sqrt_refuted", "peisert_49_sum_decomposition"}
    assert strip(run_suite(select=select)) == strip(run_suite(select=select))


def test_conjecture_records_are_non_blocking():
    results = run_suite(select={"conjecture_evidence_q7", "conjecture_evidence_q9", "conjecture_evidence_q11"})
    assert len(results) == 3
    assert all(r.passed is None and r.computed in ("maximal", "extended") for r in results)


@pytest.mark.skipif(shutil.which("cayleycliques") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["cayleycliques", "bounds", "-p", "7", "-s", "4", "-d", "4"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["best"] == 48
