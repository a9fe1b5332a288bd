import json
import subprocess
import sys

import pytest

from burau4.cli import EXIT_BUDGET, EXIT_OK, EXIT_PARSE, EXIT_SWEEP, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    assert code == EXIT_OK
    return json.loads(out)


def test_normalize(capsys):
    code, out, _ = run(capsys, "normalize", "2 1 2")
    assert code == 0 and "minimal: 1 2 1" in out and "k=0" in out
    data = run_json(capsys, "normalize", "1 2 3 1 2 1")
    assert data["garside"]["k"] == 1 and data["garside"]["tail"] == []
    code, out, _ = run(capsys, "normalize")
    assert code == 0 and out.startswith("identity")


def test_normalize_reads_file(capsys, tmp_path):
    f = tmp_path / "w.txt"
    f.write_text("2 1 2\n")
    data = run_json(capsys, "normalize", "--file", str(f))
    assert data["minimal"] == [1, 2, 1]


def test_parse_error_exit_code(capsys):
    code, _, err = run(capsys, "normalize", "1 4")
    assert code == EXIT_PARSE and "error" in err


def test_burau_generator(capsys):
    data = run_json(capsys, "burau", "1")
    assert data["matrix"] == [[[[1, 1]], [], []], [[[1, -1]], [[0, 1]], []], [[], [], [[0, 1]]]]


def test_burau_at_rational(capsys):
    data = run_json(capsys, "burau", "--at", "2", "-1")
    assert data["at"] == "2"
    assert data["matrix"] == [["1/2", "0", "0"], ["1", "1", "0"], ["0", "0", "1"]]
    data = run_json(capsys, "burau", "--at", "1/2", "1")
    assert data["matrix"][0][0] == "1/2"


def test_burau_mod(capsys):
    data = run_json(capsys, "burau", "--mod", "5", "1 2 3 1 2 1")
    assert data["mod"] == 5
    assert data["matrix"][1][1] == [[2, 4]]


def test_burau_bad_options(capsys):
    assert run(capsys, "burau", "--mod", "6", "1")[0] == EXIT_PARSE
    assert run(capsys, "burau", "--mod", "5", "--at", "2", "1")[0] == EXIT_PARSE
    assert run(capsys, "burau", "--at", "x", "1")[0] == EXIT_PARSE


def test_paths(capsys):
    data = run_json(capsys, "paths", "1 2 1", "-r", "2", "-s", "1")
    assert len(data["paths"]) == 3
    assert sum(p["admissible"] for p in data["paths"]) == 1
    assert data["weighted_count"] == [[2, -1]]
    code, out, _ = run(capsys, "paths", "1 2 1", "-r", "2", "-s", "1")
    assert "eta" in out and "admissible count: -1*q^2" in out


def test_paths_rejects_inverse(capsys):
    assert run(capsys, "paths", "1 -2", "-r", "1", "-s", "1")[0] == EXIT_PARSE
    assert run(capsys, "paths", "1", "-r", "4", "-s", "1")[0] == EXIT_PARSE


def test_decompose(capsys):
    data = run_json(capsys, "decompose", "1 1 1 2 1 1")
    assert data["pieces"][0]["class"] == "initial"
    code, out, _ = run(capsys, "decompose", "2 2 2 3 2 2")
    assert "3-block (generic)" in out


def test_classify(capsys):
    data = run_json(capsys, "classify", "1 1 2 3 2 2")
    assert data["normal"]["normal"] is False and data["delta_divisible"] is False
    word = "1 1 1 1 1 2 1 1 2 2 1 1 2 2 1"
    assert run_json(capsys, "classify", word)["weak"]["weakly_normal"] is True
    assert run_json(capsys, "classify", word, "--include-initial")["weak"]["weakly_normal"] is False


def test_check(capsys):
    data = run_json(capsys, "check", "1 2 3 1 2 1 1 2 3 1 2 1")
    assert data["status"] == "not_in_kernel"
    assert run_json(capsys, "check")["status"] == "trivial"
    code, out, _ = run(capsys, "check", "1 -2", "--primes", "5,7")
    assert code == 0 and "mainstronger" in out


def test_check_budget(capsys):
    code, out, _ = run(capsys, "check", "1 2 " * 10, "--budget", "3")
    assert code == EXIT_BUDGET and "unknown" in out


def test_check_bad_primes(capsys):
    assert run(capsys, "check", "1", "--primes", "5,9")[0] == EXIT_PARSE


def test_scan(capsys):
    code, out, _ = run(capsys, "scan", "--max-len", "5")
    assert code == EXIT_OK and "failures: 0" in out
    code, out, _ = run(capsys, "scan", "--max-len", "3", "--json")
    lines = [json.loads(x) for x in out.splitlines()]
    assert "summary" in lines[-1] and all("class" in x for x in lines[:-1])


def test_scan_budget_and_usage(capsys):
    assert run(capsys, "scan", "--max-len", "9", "--budget", "4")[0] == EXIT_BUDGET
    assert run(capsys, "scan")[0] == EXIT_PARSE


def test_scan_failure_exit_code(capsys, monkeypatch):
    import burau4.cli as cli
    from burau4.kernel import SweepStatistics

    def fake(max_len, primes, on_record=None):
        st = SweepStatistics(max_len, tuple(primes), {1: {"total": 1, "normal": 1, "weakly_normal": 0, "neither": 0}})
        st.failures.append({"word": [1], "class": "normal", "primes": [5]})
        return st

    monkeypatch.setattr(cli, "verify_theorem_sweep", fake)
    assert run(capsys, "scan", "--max-len", "1")[0] == EXIT_SWEEP


def test_diagram_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    assert run(capsys, "diagram", "1 2 1", "-r", "2", "-s", "1", "--svg", str(a))[0] == 0
    assert run(capsys, "diagram", "1 2 1", "-r", "2", "-s", "1", "--svg", str(b))[0] == 0
    text = a.read_text()
    assert text == b.read_text()
    assert text.startswith("<svg") and "stroke-dasharray" in text


def test_diagram_identity(capsys):
    code, out, _ = run(capsys, "diagram", "-r", "1", "-s", "1")
    assert code == 0 and out.startswith("<svg")


def test_diagram_budget(capsys):
    code, _, err = run(capsys, "diagram", "1 2 " * 8, "-r", "1", "-s", "1", "--budget", "2")
    assert code == EXIT_BUDGET and "budget" in err


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "burau4", "normalize", "2 1 2", "--json"],
                         capture_output=True, text=True, check=True)
    assert json.loads(res.stdout)["minimal"] == [1, 2, 1]


def test_console_script_help():
    res = subprocess.run([sys.executable, "-m", "burau4", "--help"], capture_output=True, text=True)
    assert res.returncode == 0
    for name in ("normalize", "burau", "paths", "decompose", "classify", "check", "scan", "diagram"):
        assert name in res.stdout


def test_missing_subcommand():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2
