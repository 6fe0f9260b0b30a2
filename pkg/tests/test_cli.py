import json
import subprocess
import sys

import pytest

from milnorfibre.cli import EXIT_DOMAIN, EXIT_OK, EXIT_VERIFY, run
from milnorfibre.motives import BetaPoly
from milnorfibre.polycore import parse_poly


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_milnor_json(capsys):
    code, out, _ = call(capsys, "milnor", "x*y")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["S"]["+1"] == "-u + 1"
    assert data["chi_tilde"] == {"+1": 2, "-1": 2, "neg": -2, "pos": -2}
    assert data["mu"] == 1


def test_non_isolated_milnor_reports_null_mu(capsys):
    code, out, _ = call(capsys, "milnor", "x^2*y")
    assert code == EXIT_OK and json.loads(out)["mu"] is None


@pytest.mark.parametrize("argv", [
    ("resolve", "y^2 - x^3"),
    ("zeta", "y^2 - x^3", "--symbol", "pos", "--max-order", "7"),
    ("acampo", "y^2 - x^3", "--iterates", "0", "1", "6"),
    ("naive-zeta", "--monomial", "2", "3", "--max-order", "8"),
    ("family", "--family", "x^2 - t*y^2", "--range", "-2", "2", "--samples", "9"),
    ("fibre", "x*y", "--symbol", "pos"),
])
def test_deterministic_output(capsys, argv):
    first = call(capsys, *argv)
    second = call(capsys, *argv)
    assert first[0] == EXIT_OK
    assert first[1] == second[1]


def _beta_strings(obj):
    if isinstance(obj, dict):
        if obj and all(k.startswith("u^") for k in obj):
            yield BetaPoly.from_json(obj)
            return
        for v in obj.values():
            yield from _beta_strings(v)
    elif isinstance(obj, list):
        for v in obj:
            yield from _beta_strings(v)


def test_roundtrip_of_emitted_values(capsys):
    _, out, _ = call(capsys, "zeta", "y^2 - x^3", "--max-order", "6")
    for b in _beta_strings(json.loads(out)):
        assert BetaPoly.parse(str(b)) == b
    _, out, _ = call(capsys, "milnor", "y^3 - x^5")
    for text in json.loads(out)["S"].values():
        assert str(BetaPoly.parse(text)) == text
    _, out, _ = call(capsys, "resolve", "x^2 - y^2")
    for ch in json.loads(out)["charts"]:
        for part in ch["map"].split(", "):
            rhs = part.split(" = ")[1]
            assert str(parse_poly(rhs, ("a", "b"))) == rhs


def test_acampo_values(capsys):
    _, out, _ = call(capsys, "acampo", "y^2 - x^3", "--iterates", "0", "1", "2", "--variant", "single")
    assert json.loads(out)["lefschetz"] == {"0": -1, "1": 0, "2": 2}


def test_syntax_error_exit_and_caret(capsys):
    code, out, err = call(capsys, "milnor", "x + * y")
    assert code == EXIT_DOMAIN and out == ""
    assert "PolySyntaxError" in err
    assert err.splitlines()[-1] == "      ^"


def test_domain_errors(capsys):
    assert call(capsys, "milnor", "x + 1")[0] == EXIT_DOMAIN
    assert call(capsys, "resolve", "x*z")[0] == EXIT_DOMAIN
    assert call(capsys, "fibre", "x^2*y")[0] == EXIT_DOMAIN
    assert call(capsys, "--format", "csv", "milnor", "x*y")[0] == EXIT_DOMAIN


def test_check_passes_and_fails(capsys):
    assert call(capsys, "check", "x^2+y^2", "y^2-x^3")[0] == EXIT_OK
    # one grid refinement cannot stabilize, so verification fails
    assert call(capsys, "check", "x*y", "--max-grid", "32")[0] == EXIT_VERIFY


def test_family_csv_and_output_file(tmp_path, capsys):
    target = tmp_path / "scan.csv"
    code, out, _ = call(capsys, "--format", "csv", "--output", str(target),
                        "family", "--family", "x^2 - t*y^2", "--range", "-1", "1", "--samples", "5")
    assert code == EXIT_OK and out == ""
    lines = target.read_text().splitlines()
    assert lines[0] == "t,beta,status" and "0,,not-isolated" in lines


def test_pretty_output(capsys):
    code, out, _ = call(capsys, "--format", "pretty", "milnor", "x^2+y^2")
    assert code == EXIT_OK
    assert "pos: u^2 - 1" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "milnorfibre", "milnor", "x^2+y^2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["S"]["+1"] == "u + 1"
