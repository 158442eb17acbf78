import pytest

from quasiarr.cli import main
from quasiarr.report import Report


def test_group_text(capsys):
    assert main(["group", "G3_1_2"]) == 0
    out = capsys.readouterr().out
    assert "order: 18" in out
    assert "orbit_sizes: (2, 3)" in out


def test_group_structured(capsys):
    assert main(["group", "B", "--rank", "2", "--format", "structured"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "report=group B2"
    assert "order=8" in out


def test_dihedral_orbits(capsys):
    assert main(["group", "I2", "--k", "6"]) == 0
    assert "orbit_sizes: (3, 3)" in capsys.readouterr().out


def test_coned_fixture_fails(capsys):
    assert main(["free", "fixture-deconing", "--module", "cone"]) == 1
    out = capsys.readouterr().out
    assert "verdict: PASS" in out
    assert "verdict: FAIL" in out
    assert "residual: x3" in out


def test_free_dm(capsys):
    assert main(["free", "G3_1_2", "--m", "1", "--module", "Dm", "--cutoff", "10"]) == 0
    out = capsys.readouterr().out
    assert "exponents: (7, 10)" in out
    assert "verdict: PASS" in out


def test_thread_count_does_not_change_output(capsys):
    args = ["quasi", "G3_1_2", "--kind", "isotypic", "--cutoff", "8", "--bases", "--format", "structured"]
    assert main(args + ["--threads", "1"]) == 0
    serial = capsys.readouterr().out
    assert main(args + ["--threads", "2"]) == 0
    assert capsys.readouterr().out == serial
    assert "first_nonzero.degree=7" in serial


def test_quasi_plain_checks(capsys):
    assert main(["quasi", "B2", "--m", "2,1", "--cutoff", "6", "--seed", "3"]) == 0
    out = capsys.readouterr().out
    assert "c_V: 6" in out
    assert "ring_closure_spot_check: yes" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["group", "Q7"],
        ["quasi", "B2", "--m", "1,2,3"],
        ["free", "A2", "--module", "BCCat"],
    ],
)
def test_errors_exit_2(argv, capsys):
    assert main(argv) == 2
    assert capsys.readouterr().err.startswith("error:")


def test_report_rendering():
    rep = Report("demo").add("a", 1).section("s").add("b", (1, 2)).add("ok", True)
    assert rep.render() == "demo\n====\na: 1\n[s]\n  b: (1, 2)\n  ok: yes\n"
    assert rep.render("structured") == "report=demo\na=1\ns.b=(1, 2)\ns.ok=yes\n"


@pytest.mark.slow
def test_reproduce_all(capsys):
    assert main(["reproduce", "all"]) == 0
    assert "FAIL" not in capsys.readouterr().out
