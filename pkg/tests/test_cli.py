import csv
import io
import json
import subprocess
import sys

import pytest

from symtract import cli
from symtract.complexity import exact_antisymmetric_count_detailed


def run(tmp_path, command, cfg, fmt="csv", name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    out = tmp_path / f"{command}.{fmt}"
    code = cli.main([command, "--config", str(path), "--out", str(out), "--format", fmt])
    text = out.read_text() if out.exists() else ""
    return code, text


def rows_of(text):
    return list(csv.DictReader(io.StringIO(text)))


FINITE = {"mode": "rational", "lambda": {"family": "finite_rank", "values": [1, 1, 1]},
          "schedule": "fully_antisymmetric", "d": [1, 2, 3], "eps": ["1/2"]}


def test_complexity_methods_agree(tmp_path):
    code, text = run(tmp_path, "complexity", FINITE)
    assert code == 0
    rows = rows_of(text)
    assert {r["method"] for r in rows} == {"count", "recursion", "closed_form"}
    by_d = {r["d"]: r["n"] for r in rows if r["method"] == "count"}
    assert by_d == {"1": "3", "2": "3", "3": "1"}
    assert all(r["agreement"] == "true" for r in rows)
    assert all(r["mode"] == "rational" and r["config_hash"] == cli.config_hash(FINITE) for r in rows)


def test_complexity_json_format(tmp_path):
    code, text = run(tmp_path, "complexity", FINITE, fmt="json")
    assert code == 0
    recs = [json.loads(line) for line in text.splitlines()]
    assert len(recs) == 9 and all("config_hash" in r for r in recs)


def test_infinite_count_exit_code(tmp_path):
    cfg = {"lambda": {"family": "shifted_power", "beta": 0}, "schedule": "fully_symmetric", "d": [2],
           "eps": [0.5]}
    code, text = run(tmp_path, "complexity", cfg)
    assert code == 3
    assert rows_of(text)[0]["n"] == "inf"


def test_disagreement_exit_code(tmp_path, monkeypatch):
    def broken(seq, d, eps, horizon=None):
        res = exact_antisymmetric_count_detailed(seq, d, eps)
        return type(res)(res.count + 1, res.ties)

    monkeypatch.setattr(cli, "exact_antisymmetric_count_detailed", broken)
    code, text = run(tmp_path, "complexity", FINITE)
    assert code == 1
    assert any(r["agreement"] == "false" for r in rows_of(text))


@pytest.mark.parametrize("cfg", [
    {"lambda": {"family": "nope"}, "schedule": "entire", "d": [2], "eps": [0.5]},
    {"lambda": {"family": "power_decay"}, "schedule": "entire", "d": [2], "eps": [0.5]},
    {"lambda": {"family": "power_decay", "alpha": 1}, "schedule": "unknown", "d": [2], "eps": [0.5]},
    {"lambda": {"family": "power_decay", "alpha": 1}, "schedule": "entire", "d": [0], "eps": [0.5]},
    {"lambda": {"family": "explicit", "values": [0.5, 1.0]}, "schedule": "entire", "d": [2], "eps": [0.5]},
    {"mode": "complex", "lambda": {"family": "power_decay", "alpha": 1}},
])
def test_config_errors(tmp_path, cfg):
    code, _ = run(tmp_path, "complexity", cfg)
    assert code == 2


def test_missing_config_file(tmp_path):
    assert cli.main(["errors", "--config", str(tmp_path / "missing.json")]) == 2


def test_errors_command(tmp_path):
    cfg = {"lambda": {"family": "power_decay", "alpha": 1}, "schedule": "fully_antisymmetric", "d": [2, 3],
           "n": [0, 1]}
    code, text = run(tmp_path, "errors", cfg)
    assert code == 0
    rows = rows_of(text)
    d2 = {r["n"]: float(r["error"]) for r in rows if r["d"] == "2"}
    assert d2["0"] == pytest.approx(0.5) and d2["1"] == pytest.approx(1 / 3)
    assert float(rows[-1]["initial_error"]) == pytest.approx(1 / 6)


def test_classify_command(tmp_path):
    cfg = {"lambda": {"family": "finite_rank", "values": [1, 1]}, "schedule": "entire",
           "criterion": ["absolute", "normalized"]}
    code, text = run(tmp_path, "classify", cfg)
    assert code == 0
    rows = rows_of(text)
    assert [r["verdict"] for r in rows] == ["Curse", "Curse"]
    assert json.loads(rows[0]["report"])["verdict"] == "Curse"


def test_classify_schedule_with_params(tmp_path):
    cfg = {"lambda": {"family": "power_decay", "alpha": 2}, "schedule": {"name": "fixed_free", "b": 2,
                                                                            "kind": "symmetric"}}
    code, text = run(tmp_path, "classify", cfg)
    assert code == 0 and rows_of(text)[0]["verdict"] == "StrongPolyTract"


def test_simulate_command(tmp_path):
    cfg = {"lambda": {"family": "power_decay", "alpha": 1}, "schedule": "fully_antisymmetric", "d": [2],
           "n": [0, 3], "trials": 200, "seed": 7}
    code, text = run(tmp_path, "simulate", cfg)
    assert code == 0
    rows = rows_of(text)
    assert all(r["bounded"] == "true" for r in rows)
    assert rows[0]["witness"] == "(1,2)"
    assert float(rows[1]["witness_error"]) == pytest.approx(float(rows[1]["error"]))


def test_project_command(tmp_path):
    cfg = {"mode": "rational", "structure": {"d": 2, "groups": [{"indices": [1, 2], "kind": "antisymmetric"}]},
           "indices": [[1, 2]]}
    code, text = run(tmp_path, "project", cfg)
    assert code == 0
    rows = rows_of(text)
    assert {(r["j"], r["coefficient"]) for r in rows} == {("(1,2)", "1/2"), ("(2,1)", "-1/2")}
    assert rows[0]["factor_sq"] == "2"
    bad = dict(cfg, indices=[[2, 1]])
    assert run(tmp_path, "project", bad, name="bad.json")[0] == 2


def test_verify_command(tmp_path):
    code, text = run(tmp_path, "verify", {})
    assert code == 0
    rows = rows_of(text)
    assert len(rows) > 100 and all(r["status"] == "pass" for r in rows)
    suites = {r["suite"] for r in rows}
    assert {"brute_vs_count", "recursion_vs_count", "projector_idempotent", "appendix_inequality",
            "constructor_rejection", "float_tie_flag"} <= suites


def test_output_is_deterministic_across_threads(tmp_path, monkeypatch):
    cfg = {"lambda": {"family": "power_decay", "alpha": 1}, "schedule": "fully_antisymmetric",
           "d": [1, 2, 3, 4], "eps": [0.3, 0.1, 0.05]}
    monkeypatch.setenv("SYMTRACT_THREADS", "1")
    _, one = run(tmp_path, "complexity", cfg, name="a.json")
    monkeypatch.setenv("SYMTRACT_THREADS", "4")
    _, four = run(tmp_path, "complexity", cfg, name="b.json")
    assert one == four


def test_console_entry_point(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(FINITE))
    proc = subprocess.run([sys.executable, "-m", "symtract.cli", "complexity", "--config", str(path)],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.startswith("d,eps,criterion,n,method")
