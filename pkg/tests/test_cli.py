import csv
import io
import json

import pytest

from alcovekit.cli import run
from alcovekit.exactalg import LaurentPoly


def invoke(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_kostant_json(capsys):
    code, out, _ = invoke(capsys, "kostant", "--type", "A2", "--alpha", "1,1")
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == "alcovekit.kostant/v1"
    assert doc["poly"] == "t^-1+t^-2" and doc["count"] == 2
    assert doc["conventions"]["reflection_side"] == "right"
    assert doc["config"]["type"] == "A2"


def test_kostant_csv(capsys):
    code, out, _ = invoke(capsys, "kostant", "--type", "A1", "--alpha-max", "3", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["poly"] for r in rows] == ["1", "t^-1", "t^-2", "t^-3"]


def test_output_is_deterministic(capsys):
    argv = ("generic-kl", "--type", "A2", "--word", "121", "--chi", "0,0", "--depth", "3")
    _, first, _ = invoke(capsys, *argv)
    _, second, _ = invoke(capsys, *argv)
    assert first == second


def test_polynomials_round_trip(capsys):
    _, out, _ = invoke(capsys, "generic-kl", "--type", "A1", "--word", "1", "--chi", "0", "--depth", "4")
    doc = json.loads(out)
    assert any(r["qbar"] == "v^-3" for r in doc["rows"])
    for r in doc["rows"]:
        assert str(LaurentPoly.parse(r["qbar"], "v")) == r["qbar"]
        assert 1 <= r["stabilized_at_k"] <= 6 or r["qbar"] == "0"


def test_poincare_rows(capsys):
    code, out, _ = invoke(capsys, "poincare", "--type", "A1", "--alpha-max", "3")
    assert code == 0
    rows = json.loads(out)["rows"]
    assert len(rows) == 4
    assert all(r["palindromic"] and r["parity_ok"] for r in rows)


def test_alcove_order_dot(capsys):
    code, out, _ = invoke(capsys, "alcove-order", "--type", "A1", "--word", "1", "--chi", "0", "--depth", "2", "--format", "dot")
    assert code == 0
    assert out.startswith("digraph") and '"e@0" -> "1@0"' in out


def test_kl_and_stalks(capsys):
    code, out, _ = invoke(capsys, "kl", "--type", "A1", "--word", "01")
    assert code == 0
    rows = {r["y"]: r["h_poly"] for r in json.loads(out)["rows"]}
    assert rows["e"] == "v^-2"
    code, out, _ = invoke(capsys, "stalks", "--type", "A2", "--alpha", "1,1")
    assert code == 0
    assert "t^-1+t^-2" in out


def test_roots(capsys):
    code, out, _ = invoke(capsys, "roots", "--type", "G2")
    doc = json.loads(out)
    assert code == 0 and doc["weyl_group_order"] == 12 and len(doc["positive_coroots"]) == 6


def test_verify_exit_zero(capsys):
    code, out, _ = invoke(capsys, "verify", "--type", "A1", "--depth", "4")
    assert code == 0
    assert json.loads(out)["passed"]


def test_bad_flags_exit_two(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["kostant", "--type", "A2", "--alpha", "1,-1"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        run(["kostant", "--type", "E8"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        run(["verify", "--depth", "-1"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_non_convergence_exit_one(capsys):
    code, _, err = invoke(
        capsys, "generic-kl", "--type", "A1", "--word", "1", "--chi", "0", "--depth", "3", "--k-max", "2", "--confirm"
    )
    assert code == 1
    record = json.loads(err.strip().splitlines()[-1])
    assert record["error"] == "ConvergenceError"


def test_output_locations(tmp_path, monkeypatch, capsys):
    target = tmp_path / "k.json"
    assert run(["kostant", "--type", "A1", "--alpha", "2", "-o", str(target)]) == 0
    assert json.loads(target.read_text())["poly"] == "t^-2"
    monkeypatch.setenv("ALCOVEKIT_OUTPUT_DIR", str(tmp_path / "out"))
    assert run(["roots", "--type", "A1"]) == 0
    assert json.loads((tmp_path / "out" / "roots.json").read_text())["type"] == "A1"
    assert capsys.readouterr().out == ""
