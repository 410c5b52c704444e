import io
from fractions import Fraction
import json
import shutil
import subprocess
import sys
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from derivedmw.errors import ParseError, ScenarioError, UndeclaredIdentifierError
from derivedmw.parser import MAX_EXPONENT, parse_poly
from derivedmw.polycore import PolyRing
from derivedmw.scenario_io import (CORPUS_DIR, SCHEMA_VERSION, build_report, corpus_files, dumps, golden_path,
                                   load_scenario, masked, run_cli, run_corpus_entry, scenario_from_dict)

R = PolyRing(["q", "p"])
q, p = R.gens

GM = """
name = "tmp"
variables = ["q", "p"]
omega = [["0", "-1"], ["1", "0"]]
mu = ["0"]
[lie]
basis = ["t"]
[action]
t = ["q", "-p"]
[moment]
t = "q*p"
"""


def write(tmp_path, text, name="s.toml"):
    f = tmp_path / name
    f.write_text(text, encoding="utf-8")
    return str(f)


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_cli(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


# parser

def test_parse_examples():
    f = parse_poly("2*q*p - 1/3*q^2", R)
    assert f == q * p * 2 - q ** 2 * Fraction(1, 3)
    with pytest.raises(ParseError) as exc:
        parse_poly("q +* p", R)
    assert exc.value.offset == 3
    with pytest.raises(UndeclaredIdentifierError) as exc:
        parse_poly("q*z", R)
    assert exc.value.name == "z" and exc.value.offset == 2


@pytest.mark.parametrize("text,offset", [("2q", 1), ("q/2", 1), ("(q + p", 6), ("", 0), ("q ^ -1", 4),
                                         ("q^1/2", 2), ("1/0", 0), ("q $ p", 2)])
def test_parse_errors(text, offset):
    with pytest.raises(ParseError) as exc:
        parse_poly(text, R)
    assert exc.value.offset == offset


def test_parse_precedence_and_limits():
    assert parse_poly("-q^2", R) == -(q ** 2)
    assert parse_poly("2^3^2*q", R) == q * 512
    assert parse_poly("(q + p)^2 - q*p*2", R) == q ** 2 + p ** 2
    assert parse_poly("q^1000", R) == q ** MAX_EXPONENT
    with pytest.raises(ParseError):
        parse_poly("q^1001", R)
    with pytest.raises(ParseError):
        parse_poly("(" * 500 + "q" + ")" * 500, R)


def test_byte_offsets_count_utf8():
    with pytest.raises(ParseError) as exc:
        parse_poly("q + é", R)
    assert exc.value.offset == 4
    with pytest.raises(ParseError) as exc:
        parse_poly("é + ?", R)
    assert exc.value.offset == 0


@settings(max_examples=300, deadline=None)
@given(st.text(alphabet="qpz0123/^*+-() é\t", max_size=30))
def test_parser_totality(text):
    try:
        parse_poly(text, R)
    except ParseError as e:
        assert 0 <= e.offset <= len(text.encode("utf-8"))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(-5, 5), st.integers(1, 4)),
                max_size=4))
def test_print_parse_round_trip(terms):
    f = R.zero()
    for a, b, n, d in terms:
        f = f + R.monomial((a, b), Fraction(n, d))
    assert parse_poly(f.to_str(), R) == f


# loading

def test_load_corpus_example():
    sc = load_scenario(CORPUS_DIR / "gm_tstar_c.toml")
    H = sc.space()
    assert (H.n, H.r) == (2, 1)


def test_load_errors(tmp_path):
    bad_omega = GM.replace('omega = [["0", "-1"], ["1", "0"]]', 'omega = [["0", "-1", "0"], ["1", "0", "0"]]')
    with pytest.raises(ScenarioError, match="omega must be 2x2"):
        load_scenario(write(tmp_path, bad_omega))
    both = GM.replace('[lie]', '[orbit]\ncoordinates = ["y"]\nideal = ["y"]\nform = [["0"]]\n[lie]')
    with pytest.raises(ScenarioError, match="exactly one"):
        load_scenario(write(tmp_path, both))
    neither = GM.replace('mu = ["0"]\n', "")
    with pytest.raises(ScenarioError, match="exactly one"):
        load_scenario(write(tmp_path, neither))
    anti = GM.replace('basis = ["t"]', 'basis = ["a", "b"]\nbrackets = { "a,b" = "a", "b,a" = "a" }')
    with pytest.raises(ScenarioError, match="not antisymmetric"):
        load_scenario(write(tmp_path, anti))
    undeclared = GM.replace('t = "q*p"', 't = "q*z"')
    with pytest.raises(ScenarioError, match="undeclared"):
        load_scenario(write(tmp_path, undeclared))
    with pytest.raises(ScenarioError, match="missing key"):
        load_scenario(write(tmp_path, GM.replace('variables = ["q", "p"]\n', "")))
    with pytest.raises(ScenarioError, match="cannot read"):
        load_scenario(tmp_path / "absent.toml")
    with pytest.raises(ScenarioError):
        load_scenario(write(tmp_path, "name = \n"))
    with pytest.raises(ScenarioError, match="unknown option"):
        load_scenario(write(tmp_path, GM + "[options]\nspeed = 3\n"))
    with pytest.raises(ScenarioError, match="keys must be the basis labels"):
        load_scenario(write(tmp_path, GM.replace("[action]\nt =", "[action]\ns =")))


def test_brackets_mirrored():
    sc = load_scenario(CORPUS_DIR / "sl2_cotangent_lift.toml")
    assert sc.lie.validate().ok
    assert sc.lie.c[0][1] == [-2, 0, 0]


# reports and CLI

def test_report_schema():
    rep = build_report(load_scenario(CORPUS_DIR / "trivial_action.toml"))
    assert rep["schema_version"] == SCHEMA_VERSION
    assert rep["assumptions"]["reductive_declared"] is True
    assert rep["tor"][1]["is_zero"] is False
    assert rep["tor"][1]["graded_dimensions"][:3] == [1, 2, 3]
    assert "timing" in rep and "timing" not in masked(rep)
    assert set(rep["certificates"]) >= {"symplectic", "action", "hamiltonian", "theta_squares", "quasi_iso",
                                        "strictly_closed", "invariant", "kks", "classical_consistency"}


def test_cli_check():
    code, out, _ = cli("check", str(CORPUS_DIR / "gm_tstar_c.toml"))
    assert code == 0
    assert "quasi_iso              true" in out
    code, out, _ = cli("check", str(CORPUS_DIR / "mutated_nonhamiltonian.toml"))
    assert code == 1
    assert "witness[hamiltonian]" in out


def test_cli_report(tmp_path):
    out_file = tmp_path / "r.json"
    code, out, _ = cli("report", str(CORPUS_DIR / "trivial_action.toml"), "-o", str(out_file))
    assert code == 0 and out_file.exists()
    rep = json.loads(out_file.read_text())
    assert rep["tor"][1]["is_zero"] is False


def test_cli_tor_and_flags():
    code, out, _ = cli("tor", str(CORPUS_DIR / "trivial_action.toml"), "--max-degree", "2")
    assert code == 0
    assert "tor1 zero=false dims[0..2]: 1 2 3" in out
    code, out, _ = cli("--cross-check", "check", str(CORPUS_DIR / "gm_tstar_c.toml"))
    assert code == 0 and "cross_check" in out
    code, out, _ = cli("check", str(CORPUS_DIR / "gm_tstar_c.toml"), "--order", "lex", "--cross-check")
    assert code == 0 and "cross_check" in out


def test_cli_input_errors(tmp_path):
    assert cli("check", str(tmp_path / "missing.toml"))[0] == 2
    assert cli("frobnicate")[0] == 2
    assert cli()[0] == 2
    assert cli("check", str(CORPUS_DIR / "gm_tstar_c.toml"), "--truncate-weight", "1")[0] == 2
    bad = write(tmp_path, GM.replace('t = "q*p"', 't = "q +* p"'))
    code, _, err = cli("check", bad)
    assert code == 2 and "offset 3" in err
    # a level moved by the coadjoint action is an input error, not a failed certificate
    sl2 = (CORPUS_DIR / "sl2_cotangent_lift.toml").read_text().replace('mu = ["0", "0", "0"]', 'mu = ["1", "0", "0"]')
    assert 'mu = ["1", "0", "0"]' in sl2
    assert cli("check", write(tmp_path, sl2, "moved.toml"))[0] == 2


def test_never_zero_with_failed_certificate():
    for path in corpus_files():
        code, out, _ = cli("check", str(path))
        rep = build_report(load_scenario(path))
        failed = [k for k, v in rep["certificates"].items() if v is False]
        assert (code == 0) == (not failed)


@pytest.mark.parametrize("path", corpus_files(), ids=lambda p: p.stem)
def test_golden_round_trip(path):
    res = run_corpus_entry(str(path))
    assert res["has_golden"]
    assert res["golden_match"], f"{path.stem} differs from {golden_path(path)}"
    assert res["exit"] == res["expected_exit"]
    assert res["failing"] == res["expected_failing"]


def test_corpus_deterministic_across_jobs(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert cli("corpus", "--report-dir", str(a))[0] == 0
    assert cli("corpus", "--jobs", "3", "--report-dir", str(b))[0] == 0
    names = sorted(f.name for f in a.iterdir())
    assert names == sorted(f.name for f in b.iterdir()) and len(names) == len(corpus_files())
    for n in names:
        assert (a / n).read_bytes() == (b / n).read_bytes()


def test_corpus_detects_golden_drift(tmp_path):
    d = tmp_path / "corpus"
    shutil.copytree(CORPUS_DIR, d, ignore=shutil.ignore_patterns("__pycache__"))
    g = d / "golden" / "gm_tstar_c.json"
    g.write_text(g.read_text().replace('"virtual_dimension": 0', '"virtual_dimension": 7'))
    code, out, _ = cli("corpus", "--dir", str(d))
    assert code == 1
    assert "FAIL gm_tstar_c: golden mismatch" in out


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "derivedmw", "check", str(CORPUS_DIR / "gm_tstar_c.toml")],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
