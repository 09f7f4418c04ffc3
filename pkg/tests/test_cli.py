import json

import pytest

from newton_filtrations.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main
from conftest import GOLDEN


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_analyze_golden(capsys):
    code, out = run(capsys, "analyze", GOLDEN)
    rep = json.loads(out)
    assert code == EXIT_OK and rep["schema"] == "newton-filt/1" and rep["seed"] == 0
    res = rep["result"]
    assert res["gate"]["passed"] and res["levels"] == [14, 42, 126]
    assert [n["normal"] for n in res["dual_graph"]["nodes"]] == [[3, 2, 2], [7, 7, 6], [14, 35, 18]]
    assert res["intersection"]["self_intersections"][0] == {"num": "-7", "den": "2"}


def test_analyze_non_convenient(capsys):
    code, out = run(capsys, "analyze", "x^2*y+y^5+z^3")
    assert code == EXIT_OK and json.loads(out)["result"]["convenient"] is False


@pytest.mark.parametrize("argv", [["analyze", "x^^2"], ["frobnicate"], ["member", GOLDEN, "x", "--k", "1,2"],
                                  ["wt", GOLDEN, "x", "--format", "dot"]])
def test_usage_errors(capsys, argv):
    assert main(argv) == EXIT_USAGE


def test_dot_and_text(capsys):
    code, out = run(capsys, "analyze", GOLDEN, "--format", "dot")
    assert out.startswith("graph G {") and "alpha=21" in out
    code, out = run(capsys, "hilbert", GOLDEN, "--k", "1,1,1", "--format", "text")
    assert "result.value: 1" in out


def test_member_and_lift(capsys):
    _, out = run(capsys, "member", GOLDEN, "x", "--k", "14,42,126")
    m = json.loads(out)["result"]["membership"]
    assert [m[w]["member"] for w in "FGI"] == [False, False, False]
    code, out = run(capsys, "lift", GOLDEN, "x^20+(1+y)*(" + GOLDEN + ")", "--k", "28,84,252")
    assert code == EXIT_USAGE  # parentheses are not part of the input grammar
    g = "x^20+" + GOLDEN
    code, out = run(capsys, "lift", GOLDEN, g, "--k", "28,84,252")
    res = json.loads(out)["result"]
    assert code == EXIT_OK and res["ok"] and res["steps"] == 1
    assert res["representative"] == "x^20"


def test_series_empty_box_and_zeta(capsys):
    code, out = run(capsys, "series", "zeta", GOLDEN, "--box=-1,*,*")
    assert json.loads(out)["result"]["series"]["terms"] == []
    code, out = run(capsys, "series", "zeta", GOLDEN, "--box=20,*,*")
    assert json.loads(out)["result"]["matches_closed_form"] is True


def test_series_PI_matches_oracle(capsys):
    _, out = run(capsys, "series", "PI", "x^2+y^3+z^7", "--box", "44")
    terms = {t["exponent"][0]: int(t["coefficient"]) for t in json.loads(out)["result"]["series"]["terms"]}
    # (1 - t^42) / ((1 - t^21)(1 - t^14)(1 - t^6)) up to degree 44
    ref = {}
    for a in range(3):
        for b in range(4):
            for c in range(8):
                e = 21 * a + 14 * b + 6 * c
                if e <= 44:
                    ref[e] = ref.get(e, 0) + 1
    ref[42] -= 1
    assert terms == {e: c for e, c in ref.items() if c}


def test_suspension_order_and_determinism(capsys):
    _, out = run(capsys, "suspension", "order", GOLDEN)
    res = json.loads(out)["result"]
    assert res["group_order"] == res["h_order"] == 21952 and res["literal_group_order"] == 153664
    a = run(capsys, "suspension", "fuzz", "--count", "3", "--seed", "4", "--bound", "15")
    b = run(capsys, "suspension", "fuzz", "--count", "3", "--seed", "4", "--bound", "15")
    assert a == b and a[0] == EXIT_OK


def test_verify_susp(capsys):
    code, out = run(capsys, "verify", GOLDEN, "--suite", "susp", "--seed", "3")
    assert code == EXIT_OK and json.loads(out)["result"]["passed"]
    code, _ = run(capsys, "verify", "x^4+y^6+z^4+x*y*z", "--suite", "susp")
    assert code == EXIT_USAGE  # not a suspension


def test_cone_commands(capsys):
    _, out = run(capsys, "cone", "check", GOLDEN, "--k", "1,1,1")
    cert = json.loads(out)["result"]["certificate"]
    assert cert["verdict"] is False and cert["clause"] in (1, 2)
    _, out = run(capsys, "cone", "sample", GOLDEN, "--count", "2")
    assert json.loads(out)["result"]["integral_points"] == [[1, 3, 8], [1, 3, 9]]
