import json
import os
import subprocess
import sys

from qrr.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_all_text(capsys):
    code, out, _ = run(capsys, "verify", "--all", "--order", "100")
    lines = [l for l in out.splitlines() if " pass " in l]
    assert code == 0 and len(lines) >= 45
    assert out.splitlines()[-1].endswith("0 failed, 1 skipped, 0 errors")


def test_verify_json_round_trip(capsys):
    code, out, _ = run(capsys, "verify", "--ids", "RR_MAIN_G,RTF_C", "--order", "30", "--json")
    objs = [json.loads(l) for l in out.splitlines()]
    assert code == 0
    assert {o["status"] for o in objs} == {"pass", "skipped-inadmissible"}
    for o in objs:
        assert {"id", "instantiation", "order", "status", "first_mismatch", "millis"} <= set(o)
        assert o["order"] == 30
    verdict = 1 if any(o["status"] in ("fail", "error") for o in objs) else 0
    assert verdict == code


def test_text_and_json_agree(capsys):
    _, text, _ = run(capsys, "verify", "--ids", "DXH", "--order", "20")
    _, js, _ = run(capsys, "verify", "--ids", "DXH", "--order", "20", "--json")
    j = [json.loads(l)["status"] for l in js.splitlines()]
    assert len(j) == 5 and all(s == "pass" for s in j)
    assert sum(1 for l in text.splitlines() if " pass " in l) == len(j)


def test_unknown_id_is_usage_error(capsys):
    code, out, err = run(capsys, "verify", "--ids", "RR_MAIN_G,NOPE")
    assert code == 2 and "NOPE" in err and out == ""


def test_bad_flags(capsys):
    assert run(capsys, "verify", "--order", "0")[0] == 2
    assert run(capsys, "coeffs", "--upto", "-3")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2


def test_coeffs(capsys):
    code, out, _ = run(capsys, "coeffs", "--series", "G", "--upto", "6")
    assert code == 0 and out.strip() == "1 1 1 1 2 2 3"
    code, out, _ = run(capsys, "coeffs", "--series", "F", "--upto", "4", "--json")
    assert json.loads(out)["coeffs"] == [1, 0, 1, 0, 2]


def test_recursion(capsys):
    code, out, _ = run(capsys, "recursion", "--upto", "1")
    assert code == 0
    assert out.splitlines() == ["g: 1 1", "h: 1 0", "status ok"]
    code, out, _ = run(capsys, "recursion", "--upto", "200", "--json")
    obj = json.loads(out)
    assert code == 0 and obj["status"] == "ok" and len(obj["g"]) == 201


def test_partitions(capsys):
    code, out, _ = run(capsys, "partitions", "--class", "NOT_DIV_4", "--upto", "5")
    assert code == 0 and out.strip() == "NOT_DIV_4: 1 1 2 3 4 6"
    code, out, _ = run(capsys, "partitions", "--upto", "40", "--json")
    objs = [json.loads(l) for l in out.splitlines()]
    assert code == 0 and len(objs) == 5 and all(o["oracles_agree"] for o in objs)


def test_list(capsys):
    code, out, _ = run(capsys, "list")
    assert code == 0 and len(out.splitlines()) >= 45


def test_failure_exit_code(capsys, monkeypatch):
    from qrr import cli
    from qrr.registry import corrupted

    monkeypatch.setattr(cli, "registry", lambda: [corrupted()])
    code, out, _ = run(capsys, "verify", "--all", "--order", "20", "--json")
    obj = json.loads(out.splitlines()[0])
    assert code == 1 and obj["status"] == "fail" and obj["first_mismatch"]["exponent"] == "7"


def test_arithmetic_fault_exit_code(capsys, monkeypatch):
    from qrr import cli
    from qrr.errors import IntegralityError

    def boom(*a, **k):
        raise IntegralityError("inexact division")

    monkeypatch.setattr(cli, "verify_one", boom)
    code, out, _ = run(capsys, "verify", "--ids", "RH")
    assert code == 3 and "RH" in out and "IntegralityError" in out


def test_env_default_order(monkeypatch, capsys):
    monkeypatch.setenv("QRR_DEFAULT_ORDER", "12")
    code, out, _ = run(capsys, "verify", "--ids", "RR_MAIN_H", "--json")
    assert json.loads(out)["order"] == 12


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "qrr", "coeffs", "--series", "H", "--upto", "6"],
                         capture_output=True, text=True, env=dict(os.environ))
    assert out.returncode == 0 and out.stdout.strip() == "1 0 1 1 1 1 2"
