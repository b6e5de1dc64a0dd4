import json

import pytest

from commitcap.cli import main
from commitcap.report import Report


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_channel_info_v(capsys):
    code, out, _ = run(capsys, "channel", "info", "--channel", "V", "--json")
    assert code == 0
    cap = json.loads(out)["sections"]["capacity"][0]
    assert cap["C"] == pytest.approx(0.3219, abs=1e-3)
    assert cap["C_com"] == pytest.approx(0.6942, abs=1e-3)


def test_channel_info_t_and_identity(capsys, tmp_path):
    code, out, _ = run(capsys, "channel", "info", "--channel", "T", "--json")
    cap = json.loads(out)["sections"]["capacity"][0]
    assert code == 0 and cap["trivial"] is True and cap["C_com"] == 0
    path = tmp_path / "id.json"
    path.write_text(json.dumps({"input": ["0", "1"], "output": ["0", "1"], "matrix": [[1, 0], [0, 1]]}))
    code, out, _ = run(capsys, "channel", "info", "--channel", str(path), "--json")
    cap = json.loads(out)["sections"]["capacity"][0]
    assert cap["C_com"] == 0 and cap["C"] == pytest.approx(1.0, abs=1e-9)


def test_input_errors_exit_2(capsys, tmp_path):
    assert run(capsys, "channel", "info", "--channel", "missing")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"input": ["a"], "output": ["0"], "matrix": [[0.5]]}')
    assert run(capsys, "channel", "info", "--channel", str(bad))[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["nonsense"])
    assert exc.value.code == 2


def test_infeasible_codebook_hint(capsys):
    code, _, err = run(capsys, "codebook", "build", "--channel", "bsc_0.1", "--n", "4", "--sigma", "0.49",
                       "--K", "16", "--L", "16", "--max-attempts", "3")
    assert code == 2 and "hint" in err


def test_codebook_protocol_determinism(capsys, tmp_path):
    cb = tmp_path / "cb.json"
    code, _, _ = run(capsys, "codebook", "build", "--channel", "bsc_0.1", "--n", "200", "--sigma", "0.1",
                     "--K", "2", "--L", "2", "--seed", "5", "--out", str(cb))
    assert code == 0
    t1, t2 = tmp_path / "t1.jsonl", tmp_path / "t2.jsonl"
    for t in (t1, t2):
        code, _, _ = run(capsys, "protocol", "run", "--codebook", str(cb), "--trials", "30", "--seed", "9",
                         "--out", str(t))
        assert code == 0
    assert t1.read_bytes() == t2.read_bytes()
    first = json.loads(t1.read_text().splitlines()[0])
    assert set(first) == {"a", "mu", "sent", "received", "revealed", "verdict", "seed"}


def test_attack_remark_f_row(capsys):
    code, out, _ = run(capsys, "attack", "binding", "--scheme", "remark-f", "--strategy", "exhaustive")
    assert code == 0
    assert "delta_bind (reference)" in out and "1/2" in out


def test_audit_and_concealing_remark_f(capsys):
    assert run(capsys, "audit", "converse", "--scheme", "remark-f")[0] == 0
    code, out, _ = run(capsys, "attack", "concealing", "--scheme", "remark-f", "--json")
    assert code == 0 and json.loads(out)["sections"]["security"][0]["value"] == 0.0


def test_bounds_typicality_reports_stated_constant(capsys):
    code, out, _ = run(capsys, "bounds", "typicality", "--channel", "bsc_0.1", "--grid", "50:0.1",
                       "--trials", "2000", "--json")
    checks = json.loads(out)["checks"]
    failed = [k for k, ok in checks.items() if not ok]
    # only the max-over-inputs constant fails; its summed version holds
    assert failed == ["c-typ:value@n=50,eps=0.1"]
    assert checks["c-typ:value[sum]@n=50,eps=0.1"]
    assert code == 1


def test_bounds_chernoff(capsys):
    code, out, _ = run(capsys, "bounds", "chernoff", "--p", "0.5", "--eta", "0.2", "--N", "100",
                       "--trials", "10000")
    assert code == 0 and "PASS  chernoff" in out


def test_report_roundtrip_and_render(capsys, tmp_path):
    rp = tmp_path / "r.json"
    code, text, _ = run(capsys, "capacity", "--channel", "V", "--report", str(rp))
    assert code == 0
    rep = Report.from_json(rp.read_text())
    assert rep.to_json() == rp.read_text()
    code, rendered, _ = run(capsys, "report", "render", str(rp))
    assert rendered == text
    value = rep.sections["capacity"][0]["value"]
    assert f"{value:.6g}" in rendered


def test_params_theory_crossover(capsys):
    code, out, _ = run(capsys, "params", "--channel", "bsc_0.1", "--n", "1000000", "--sigma", "0.05",
                       "--mode", "theory", "--json")
    rows = {r["name"]: r["value"] for r in json.loads(out)["sections"]["parameters"]}
    assert rows["tau"] == pytest.approx(3.125e-8)
    assert rows["crossover_n_epsilon"] > 4e8
    assert rows["analytic_bounds_apply"] is True
