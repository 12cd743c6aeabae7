import csv
import io as _io
import json

import pytest

from fixtures import fix_a, fix_b, modular
from submod_pricing import Instance
from submod_pricing.cli import CSV_COMPARE_HEADER, CSV_SWEEP_HEADER, main
from submod_pricing.io import save_instance


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def fix_a_file(tmp_path):
    path = tmp_path / "fix_a.json"
    save_instance(Instance.of([fix_a()]), path)
    return path


@pytest.fixture
def fix_b_file(tmp_path):
    path = tmp_path / "fix_b.json"
    save_instance(Instance.of(list(fix_b()), mode="collaborating"), path)
    return path


def test_gen_uniform_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        code, _, _ = run(capsys, "gen", "--kind", "uniform", "--v", 4, "--w", 10, "--d", 2,
                         "--qmax", 0.3, "--seed", 7, "--out", path)
        assert code == 0
    assert a.read_bytes() == b.read_bytes()
    doc = json.loads(a.read_text(encoding="utf-8"))
    assert len(doc["buyers"][0]["valuation"]["edges"]) == 20


def test_gen_other_kinds(tmp_path, capsys):
    code, out, _ = run(capsys, "gen", "--kind", "harmonic", "--v", 5)
    assert code == 0 and json.loads(out)["buyers"][0]["valuation"]["type"] == "explicit"

    clauses = tmp_path / "clauses.txt"
    clauses.write_text("1 2 3\n1 2 4\n", encoding="utf-8")
    code, _, _ = run(capsys, "gen", "--kind", "3sat", "--clauses", clauses, "--out", tmp_path / "s.json")
    assert code == 0

    code, _, _ = run(capsys, "gen", "--kind", "3sat", "--v", 6, "--w", 4, "--planted",
                     "--out", tmp_path / "p.json")
    cert = json.loads((tmp_path / "p.cert.json").read_text(encoding="utf-8"))
    assert code == 0 and cert["max_profit"] == 4

    triples = tmp_path / "triples.txt"
    triples.write_text("0 1 2\n", encoding="utf-8")
    code, _, _ = run(capsys, "gen", "--kind", "x3c", "--universe", 3, "--triples", triples,
                     "--out", tmp_path / "x.json")
    assert code == 0 and (tmp_path / "x.cert.json").exists()

    code, _, _ = run(capsys, "gen", "--kind", "partition", "--values", "1,1,2", "--out", tmp_path / "q.json")
    assert code == 0
    code, _, _ = run(capsys, "gen", "--kind", "hidden", "--v", 4, "--hidden", "0,1", "--out", tmp_path / "h.json")
    assert code == 0


def test_gen_usage_errors(capsys):
    code, _, err = run(capsys, "gen", "--kind", "uniform", "--v", 4)
    assert code == 2 and "required" in err
    code, _, _ = run(capsys, "gen", "--kind", "partition", "--values", "1,2")
    assert code == 2
    with pytest.raises(SystemExit) as exc:
        main(["gen", "--kind", "nonsense"])
    assert exc.value.code == 2


def test_solve_fix_a(fix_a_file, capsys):
    code, out, _ = run(capsys, "solve", fix_a_file, "--mode", "single", "--verify")
    doc = json.loads(out)
    assert code == 0
    assert doc["profit"] == pytest.approx(0.9, abs=1e-12)
    assert doc["assignment"] == ["u"] and doc["prices"]["v"] == "inf"
    assert doc["verification"]["pass"] is True
    code, out, _ = run(capsys, "solve", fix_a_file, "--algo", "sellall")
    assert json.loads(out)["profit"] == pytest.approx(0.18, abs=1e-12)
    code, out, _ = run(capsys, "solve", fix_a_file, "--budget", 0.5, "--verify")
    doc = json.loads(out)
    assert doc["profit"] == pytest.approx(0.5) and doc["verification"]["pass"]


def test_solve_fix_b_collab(fix_b_file, capsys):
    code, out, _ = run(capsys, "solve", fix_b_file, "--algo", "bruteforce")
    assert code == 0 and json.loads(out)["profit"] == pytest.approx(4.0)
    code, out, _ = run(capsys, "solve", fix_b_file, "--verify")
    doc = json.loads(out)
    assert doc["profit"] == pytest.approx(2.0) and doc["verification"]["pass"]
    code, out, _ = run(capsys, "solve", fix_b_file, "--budget", 1)
    assert json.loads(out)["profit"] == pytest.approx(1.0)


def test_solve_multi_budget_unsupported(fix_b_file, capsys):
    code, _, err = run(capsys, "solve", fix_b_file, "--mode", "multi", "--budget", 1)
    assert code == 2 and "not supported" in err


def test_solve_multi_verify(fix_b_file, capsys):
    code, out, _ = run(capsys, "solve", fix_b_file, "--mode", "multi", "--verify")
    doc = json.loads(out)
    assert code == 0 and isinstance(doc["assignment"][0], list)
    assert doc["verification"]["alpha"] >= doc["alpha"] - 1e-9


def _rows(text):
    return list(csv.reader(_io.StringIO(text)))


def test_compare_fix_a(fix_a_file, capsys):
    code, out, _ = run(capsys, "compare", fix_a_file)
    rows = _rows(out)
    assert code == 0 and rows[0] == CSV_COMPARE_HEADER
    row = dict(zip(rows[0], rows[1]))
    assert row["proposed"] == "1.0000" and row["sellall"] == "0.2000"


def test_compare_modular_and_seeded(tmp_path, capsys):
    path = tmp_path / "mod.json"
    save_instance(Instance.of([modular([3, 2, 1])]), path)
    _, out, _ = run(capsys, "compare", path, "--seed", 3)
    row = dict(zip(*_rows(out)[:2]))
    for col in ("proposed", "sellall", "scaled", "ascending"):
        assert row[col] == "1.0000"
    _, again, _ = run(capsys, "compare", path, "--seed", 3)
    assert again == out


def test_compare_threads_keep_order(tmp_path, capsys, monkeypatch):
    args = ["compare", "--generate", 4, "--v", 10, "--w", 100, "--d", 3]
    _, serial, _ = run(capsys, *args)
    monkeypatch.setenv("SUBMOD_PRICING_THREADS", "4")
    _, parallel, _ = run(capsys, *args)
    assert serial == parallel
    assert [r[0] for r in _rows(serial)[1:]] == [f"uniform-{k}" for k in range(4)]


def test_sweep_qmax(capsys):
    code, out, _ = run(capsys, "sweep", "--param", "qmax", "--values", "0.1,0.5,0.9",
                       "--v", 10, "--w", 200, "--d", 3, "--repeats", 1)
    rows = _rows(out)
    assert code == 0 and rows[0] == CSV_SWEEP_HEADER
    assert [r[1] for r in rows[1:]] == ["0.1", "0.5", "0.9"]
    assert all(r[2] == "single" for r in rows[1:])


def test_sweep_buyers(capsys):
    _, out, _ = run(capsys, "sweep", "--param", "buyers", "--values", "1,2",
                    "--v", 8, "--w", 100, "--d", 3, "--repeats", 1)
    rows = _rows(out)[1:]
    assert [r[2] for r in rows] == ["multi", "collab", "multi", "collab"]


def test_verify_commands(fix_a_file, fix_b_file, tmp_path, capsys):
    sol = tmp_path / "sol.json"
    run(capsys, "solve", fix_a_file, "--out", sol)
    code, out, _ = run(capsys, "verify", "--check", "stable", "--instance", fix_a_file, "--solution", sol)
    assert code == 0 and json.loads(out)["pass"]

    code, out, _ = run(capsys, "verify", "--check", "submodular", "--instance", fix_b_file)
    doc = json.loads(out)
    assert code == 1 and not doc["pass"]
    assert doc["reports"]["aggregate"]["witness"]["X"] == ["a", "b"]

    code, out, _ = run(capsys, "verify", "--check", "curvature", "--instance", fix_a_file)
    assert code == 0 and json.loads(out)["pass"]
    code, out, _ = run(capsys, "verify", "--check", "gap", "--instance", fix_a_file)
    assert code == 0


def test_verify_capacity_refusal(tmp_path, capsys):
    path = tmp_path / "big.json"
    save_instance(Instance.of([modular([1.0] * 15)]), path)
    code, _, err = run(capsys, "verify", "--check", "submodular", "--instance", path)
    assert code == 2 and "limit" in err
