import json
import subprocess
import sys

import pytest

from misforge.cli import main


def run_cli(*argv, capsys=None):
    return main(list(argv))


def test_gen_dup_and_verify(tmp_path, capsys):
    out = tmp_path / "g.dupg"
    assert main(["gen-dup", "--ell", "2", "--d", "2", "--k", "1", "--out", str(out)]) == 0
    assert main(["verify", "--in", str(out)]) == 0
    text = capsys.readouterr().out
    assert "PASS unique_paths" in text
    header = out.read_text().splitlines()[0].split()
    assert header[0] == "dupg"
    assert int(header[4]) == 2 and int(header[5]) == 4  # p=2, q=4


def test_gen_dup_too_small(tmp_path):
    assert main(["gen-dup", "--n", "5", "--k", "1", "--out", str(tmp_path / "x")]) == 2


def test_gen_dup_minimal(tmp_path):
    out = tmp_path / "m.dupg"
    assert main(["gen-dup", "--ell", "1", "--d", "1", "--k", "1", "--out", str(out)]) == 0
    assert main(["verify", "--in", str(out)]) == 0


def test_verify_catches_mutation(tmp_path, capsys):
    out = tmp_path / "g.dupg"
    main(["gen-dup", "--ell", "2", "--d", "1", "--k", "1", "--out", str(out)])
    lines = out.read_text().splitlines()
    vals = lines[1].split()
    vals[-1] = str(int(vals[-1]) + 1)  # bend one path endpoint
    lines[1] = " ".join(vals)
    bad = tmp_path / "bad.dupg"
    bad.write_text("\n".join(lines) + "\n")
    rc = main(["verify", "--in", str(bad)])
    text = capsys.readouterr().out
    assert rc in (1, 2)
    if rc == 1:
        assert "FAIL" in text


def test_verify_budget_exceeded(tmp_path, monkeypatch):
    out = tmp_path / "g.dupg"
    main(["gen-dup", "--ell", "2", "--d", "2", "--k", "1", "--out", str(out)])
    monkeypatch.setenv("MISFORGE_BUDGET", "4")
    assert main(["verify", "--in", str(out)]) == 3


def test_gen_instance_deterministic(tmp_path):
    a, b = tmp_path / "a.misr", tmp_path / "b.misr"
    args = ["gen-instance", "--r", "1", "--n0", "4", "--toy", "2,1", "--seed", "7"]
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_gen_instance_subprocess_matches_inprocess(tmp_path):
    out1 = tmp_path / "sub.misr"
    out2 = tmp_path / "inp.misr"
    args = ["gen-instance", "--r", "1", "--n0", "4", "--toy", "1,1", "--seed", "5"]
    proc = subprocess.run(
        [sys.executable, "-m", "misforge.cli"] + args + ["--out", str(out1)],
        capture_output=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert main(args + ["--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_gen_instance_formula_too_small(tmp_path):
    rc = main(["gen-instance", "--r", "2", "--n", "100", "--n0", "4",
               "--seed", "1", "--out", str(tmp_path / "x")])
    assert rc == 2


def test_gen_instance_base(tmp_path, capsys):
    out = tmp_path / "b.misr"
    assert main(["gen-instance", "--r", "0", "--n0", "4", "--seed", "3",
                 "--out", str(out)]) == 0
    assert main(["check-instance", "--in", str(out)]) == 0
    meta = json.loads(out.read_text().splitlines()[1])
    assert meta["r"] == 0 and meta["mode"] == "base"


def test_check_instance_roundtrip(tmp_path):
    out = tmp_path / "t.misr"
    main(["gen-instance", "--r", "1", "--n0", "4", "--toy", "2,1",
          "--seed", "9", "--out", str(out)])
    assert main(["check-instance", "--in", str(out)]) == 0


def test_check_instance_flags_tampering(tmp_path, capsys):
    out = tmp_path / "t.misr"
    main(["gen-instance", "--r", "1", "--n0", "4", "--toy", "1,1",
          "--seed", "9", "--out", str(out)])
    lines = out.read_text().splitlines()
    idx = next(i for i, ln in enumerate(lines)
               if ln and ln.split()[0].isdigit())
    u, v = map(int, lines[idx].split())
    lines[idx] = f"{u} {v - 1 if v - 1 > u else v + 1}"
    bad = tmp_path / "bad.misr"
    bad.write_text("\n".join(lines) + "\n")
    assert main(["check-instance", "--in", str(bad)]) == 1
    assert "FAIL stored_sections_match" in capsys.readouterr().out


def test_predicate_eval_and_cross_check(tmp_path, capsys):
    out = tmp_path / "t.misr"
    main(["gen-instance", "--r", "1", "--n0", "4", "--toy", "1,1",
          "--seed", "7", "--out", str(out)])
    assert main(["predicate", "--in", str(out), "--K", "1"]) == 0
    bits = capsys.readouterr().out.strip()
    assert len(bits) == 2 and set(bits) <= {"0", "1"}
    assert main(["predicate", "--in", str(out), "--cross-check"]) == 0
    assert "0 mismatches" in capsys.readouterr().out


def test_predicate_k_out_of_range(tmp_path):
    out = tmp_path / "t.misr"
    main(["gen-instance", "--r", "1", "--n0", "4", "--toy", "1,1",
          "--seed", "7", "--out", str(out)])
    assert main(["predicate", "--in", str(out), "--K", "5"]) == 2


def test_bench_row_count(tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({
        "instances": [{"kind": "gnp", "n": 24, "p": 0.25, "graph_seed": 0}],
        "algorithms": ["luby", "greedy", "residual:b=4"],
        "seeds": [1, 2, 3, 4, 5],
    }))
    out = tmp_path / "rows.csv"
    assert main(["bench", "--spec", str(spec), "--out", str(out)]) == 0
    lines = out.read_text().strip().splitlines()
    assert len(lines) == 16  # header + 3 algorithms x 5 seeds


def test_missing_file_is_invalid_input():
    assert main(["verify", "--in", "/nonexistent/x.dupg"]) == 2


def test_bad_bench_spec(tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text("{not json")
    assert main(["bench", "--spec", str(spec), "--out", str(tmp_path / "o.csv")]) == 2
