import io
from contextlib import redirect_stdout
from fractions import Fraction

import pytest

from rabinowitz import Generator, ScenarioError, parse_scenario
from rabinowitz.cli import main
from rabinowitz.scenario import parse_fraction, parse_generator

from conftest import scenario_path

G = Generator


MINIMAL = """
[bundle]
dim_M = 2
sphericity = spherical
nu = 1
c = 2
tau = 1/2
crit (q0, 0, 1/10)
crit (q2, 2, 1/5)
"""


def run_cli(*argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(list(argv))
    return code, buf.getvalue()


# --- parsing -------------------------------------------------------------------


def test_parse_minimal():
    sc = parse_scenario(MINIMAL)
    assert sc.bundle.dim_m == 2 and sc.bundle.c == 2
    assert sc.bundle.crit("q2").value == Fraction(1, 5)
    assert sc.entries == () and sc.cycles == {} and sc.seed == 0


def test_parse_full_scenario_file(cp1):
    assert cp1.seed == 7
    assert len(cp1.entries) == 3
    assert cp1.cycles["xi0"].terms == {G("q0", 0, 0, "+")}


def test_parse_generator_and_fraction():
    assert parse_generator("(q0, -3, 2, -)") == G("q0", -3, 2, "-")
    assert parse_fraction("7/3") == Fraction(7, 3)
    with pytest.raises(ScenarioError):
        parse_generator("(q0, x, 2, -)")


def test_parse_zero_denominator_reports_line():
    bad = MINIMAL.replace("tau = 1/2", "tau = 1/0")
    with pytest.raises(ScenarioError, match="line 7"):
        parse_scenario(bad)


def test_parse_unknown_key_reports_line():
    bad = MINIMAL + "volume = 3\n"
    with pytest.raises(ScenarioError, match="unknown bundle key"):
        parse_scenario(bad)


def test_parse_aspherical_rejects_nu():
    bad = MINIMAL.replace("sphericity = spherical", "sphericity = aspherical")
    with pytest.raises(ScenarioError, match="omitted"):
        parse_scenario(bad)


def test_parse_rejects_invalid_bundle():
    bad = MINIMAL.replace("dim_M = 2", "dim_M = 3")
    with pytest.raises(ScenarioError, match="dim_M odd"):
        parse_scenario(bad)


def test_parse_cycle_degree_mismatch_rejected():
    bad = MINIMAL + "\n[cycles]\ncycle x degree 5 floor -1 (q0,0,0,+)\n"
    with pytest.raises(ScenarioError, match="cycle 'x'"):
        parse_scenario(bad)


def test_parse_content_before_section():
    with pytest.raises(ScenarioError, match="before any section"):
        parse_scenario("dim_M = 2\n")


# --- commands -------------------------------------------------------------------


def test_cmd_validate_ok():
    code, out = run_cli("validate", "--scenario", str(scenario_path("cp1")))
    assert code == 0
    assert "bundle: valid" in out
    assert "case=c-nonnegative ((c-1)*tau < 1: yes)" in out
    assert "semi-positive=yes (monotone total space (c = 2 > 1))" in out
    assert "N_E=1" in out
    assert "differentials: 3 entries valid" in out


def test_cmd_validate_rejects_bad_table(tmp_path):
    text = scenario_path("cp1").read_text().replace(
        "entry 4 (q0,0,0,-) -> (q0,0,-1,+)",
        "entry 4 (q0,0,0,-) -> (q0,1,-1,+)",
    )
    bad = tmp_path / "bad.scn"
    bad.write_text(text)
    code, out = run_cli("validate", "--scenario", str(bad))
    assert code == 2
    assert "rejected" in out


def test_cmd_validate_parse_error(tmp_path):
    bad = tmp_path / "broken.scn"
    bad.write_text(MINIMAL.replace("tau = 1/2", "tau = 1/0"))
    code, out = run_cli("validate", "--scenario", str(bad))
    assert code == 4
    assert "parse error" in out and "line 7" in out


def test_cmd_validate_missing_file():
    code, out = run_cli("validate", "--scenario", "/nonexistent.scn")
    assert code == 4


def test_cmd_enumerate_golden_row():
    code, out = run_cli(
        "enumerate",
        "--scenario", str(scenario_path("cp1")),
        "--degree", "5",
        "--floor", "0",
        "--window=-10:10",
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "generator | action | twice_mu | level | eta"
    assert "(q0,1,0,-) | 7/20 | 5 | 1 | 9/10" in lines


def test_cmd_enumerate_empty_window_header_only():
    code, out = run_cli(
        "enumerate",
        "--scenario", str(scenario_path("cp1")),
        "--degree", "5",
        "--floor", "0",
        "--window=4:-4",
    )
    assert code == 0
    assert out.strip() == "generator | action | twice_mu | level | eta"


def test_cmd_enumerate_aspherical_sphere_column_zero():
    code, out = run_cli(
        "enumerate",
        "--scenario", str(scenario_path("aspherical4")),
        "--degree", "5",
        "--floor", "-100",
        "--window=-2:2",
    )
    assert code == 0
    rows = [l for l in out.splitlines()[1:] if l]
    assert rows
    assert all(",0," in row.split(" | ")[0] for row in rows)


def test_cmd_enumerate_infinite_slice_rejected():
    code, out = run_cli(
        "enumerate",
        "--scenario", str(scenario_path("c0")),
        "--degree", "3",
        "--floor", "0",
        "--window=-1:1",
    )
    assert code == 2
    assert "infinite slice" in out


def test_cmd_diff_golden():
    code, out = run_cli(
        "diff", "--scenario", str(scenario_path("cp1")), "--cycle", "notclosed"
    )
    assert code == 0
    assert "differential: degree=3 floor=-1 terms: (q0,0,0,+) (q2,1,0,+)" in out


def test_cmd_diff_unknown_cycle():
    code, out = run_cli(
        "diff", "--scenario", str(scenario_path("cp1")), "--cycle", "ghost"
    )
    assert code == 2
    assert "unknown cycle" in out


def test_cmd_primitive_golden():
    code, out = run_cli(
        "primitive", "--scenario", str(scenario_path("cp1")), "--cycle", "xi0"
    )
    assert code == 0
    assert "theta: degree=5 floor=-1/2 terms: (q0,1,0,-) (q2,2,0,-)" in out
    assert "residual: degree=3 floor=-1 terms: 0" in out
    assert "verification OK" in out


def test_cmd_primitive_rejects_non_closed():
    code, out = run_cli(
        "primitive", "--scenario", str(scenario_path("cp1")), "--cycle", "notclosed"
    )
    assert code == 2
    assert "not closed" in out
    assert "(q0,0,0,+) (q2,1,0,+)" in out


def test_cmd_primitive_deterministic_with_seed():
    args = (
        "primitive",
        "--scenario", str(scenario_path("neg2")),
        "--cycle", "xi0",
        "--random-table",
        "--seed", "5",
    )
    first = run_cli(*args)
    second = run_cli(*args)
    assert first == second and first[0] == 0
    other = run_cli(*args[:-1], "6")
    assert other[1] != first[1]


def test_cmd_check_all_scenarios():
    for name in ("cp1", "aspherical4", "neg2", "neg4", "c0", "c1"):
        code, out = run_cli("check", "--scenario", str(scenario_path(name)))
        assert code == 0, out
        assert "FAIL" not in out
