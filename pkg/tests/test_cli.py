import json
import subprocess
import sys
from fractions import Fraction

import pytest

from dworkhg.cli import (
    _root_of_unity_factor,
    cmd_count,
    cmd_dwork_ratio,
    cmd_ell_k3_regulator,
    cmd_eta_ap,
    cmd_k3_regulator,
    cmd_log_hg,
    cmd_unit_root_check,
    congruence_case,
    default_precision,
    main,
    render,
)
from dworkhg.errors import BadHasse, DworkHGError
from dworkhg.hypergeom import eval_log_hg

h = Fraction(1, 2)


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def test_default_precision():
    assert default_precision(5) == 4
    assert default_precision(13) == 4
    assert default_precision(101) == 2
    assert default_precision(10007) == 1


def test_ross_coefficients():
    p, N = 13, 3
    c, _ = _root_of_unity_factor([1, 1, 1], [2, 2, 2], p, N)
    assert c.residue == 8
    # (1 - zeta_n)(1 - zeta_n^-1) = 3, 2, 1 for n = 3, 4, 6
    for n, val in [(3, 3), (4, 2), (6, 1)]:
        c, _ = _root_of_unity_factor([1, n - 1], [n, n], p, N)
        assert c.residue == val


def test_log_hg_report_with_indices():
    rep = cmd_log_hg(None, "2", 11, 2, ([1, 1, 1], [2, 2, 2]))
    assert rep["a"] == ["1/2", "1/2", "1/2"]
    assert rep["stamp"]["agree"]
    v = eval_log_hg((h, h, h), 2, 11, 2)
    assert rep["regulator"]["residue"] == (8 * v).residue


def test_k3_regulator_reports():
    rep = cmd_k3_regulator("4", 13, 2)
    assert rep["stamp"]["agree"]
    assert rep["eigenform"]["label"] == "C"
    assert rep["regulator"]["residue"] == (8 * eval_log_hg((h, h, h), 4, 13, 2)).residue
    one = cmd_k3_regulator("1", 13, 2)
    assert one["frobenius"]["c"] == "1" and one["eigenform"]["label"] == "A"
    assert one["stamp"]["agree"]


def test_k3_regulator_euler_factor():
    rep = cmd_k3_regulator("-8", 5, 2)
    block = rep["eigenform"]
    assert block["a_p"] == -6 and block["ordinary"]
    assert block["alpha_p"]["residue"] == 19
    # 1 - p^2/alpha is ≡ 1 mod p^2
    assert block["euler_factor"]["unit"][:2] == [1, 0]


def test_k3_regulator_lvalue_candidate():
    rep = cmd_k3_regulator("-8", 5, 2, lvalue="3/7")
    cand = rep["eigenform"]["constant_candidate"]
    assert cand["status"] in ("unasserted", "product vanishes at this precision")


def test_k3_regulator_not_modular_and_bad_hasse():
    rep = cmd_k3_regulator("2", 13, 2)
    assert "note" in rep["eigenform"]
    with pytest.raises(BadHasse):
        cmd_k3_regulator("-8", 7, 2)
    with pytest.raises(BadHasse):
        cmd_k3_regulator("-1", 5, 2)


def test_ell_k3_regulator():
    rep = cmd_ell_k3_regulator(3, 2, 7, 2)
    assert rep["coefficient"] == 12 and rep["stamp"]["agree"]
    assert cmd_ell_k3_regulator(6, 2, 13, 2)["coefficient"] == 4
    with pytest.raises(DworkHGError):
        cmd_ell_k3_regulator(5, 2, 7, 2)


def test_unit_root_check_p5():
    rep = cmd_unit_root_check(5)
    assert rep["stamp"]["agree"] and rep["sign"] in (1, -1)
    assert [r["a_hat"] for r in rep["rows"]] == [2, 3]


def test_congruence_case():
    row = congruence_case("1/2,1/2", 5, 6, 2)
    assert row["dwork_ok"] and row["log_ok"] and row["constant_ok"]
    assert row["window"] == 125


def test_eta_ap():
    rep = cmd_eta_ap("A", 30)
    assert rep["ap"]["5"] == -6 and rep["ap"]["13"] == 10 and rep["ap"]["17"] == -30
    assert rep["stamp"]["agree"]
    assert cmd_eta_ap("-1", 20)["form"] == "B(x)chi_-4"


def test_count_and_dwork_ratio():
    rep = cmd_count([2, 2, 2], "3", 5)
    assert rep["count"] == 8 and rep["stamp"]["agree"]
    rep = cmd_dwork_ratio("1/2,1/2", 5, 1, 5)
    assert rep["coefficients"] == [1, 4, 1, 0, 0] and rep["stamp"]["agree"]


def test_main_json_is_deterministic(capsys):
    argv = ["dwork-ratio", "--a", "1/2,1/2", "--prime", "5", "--prec", "2"]
    c1, o1 = run(argv, capsys)
    c2, o2 = run(argv, capsys)
    assert c1 == c2 == 0 and o1 == o2
    data = json.loads(o1)
    assert list(data) == sorted(data)


def test_main_error_exit(capsys):
    code, out = run(["k3-regulator", "--param", "-1", "--prime", "5", "--prec", "2"], capsys)
    assert code == 2 and json.loads(out)["error"] == "BadHasse"


def test_main_csv(capsys):
    code, out = run(["count", "--n", "2,2", "--param", "1", "--prime", "3", "--csv"], capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "key,value" and "count,1" in lines


def test_render_csv_flattens_nested():
    text = render({"a": {"b": 1}, "c": [1, 2]}, "csv")
    assert "a.b,1" in text and 'c,"[1, 2]"' in text


def test_console_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "dworkhg.cli", "eta-ap", "--form", "D", "--bound", "20"],
        capture_output=True,
        text=True,
        check=True,
    )
    assert json.loads(out.stdout)["stamp"]["agree"]
