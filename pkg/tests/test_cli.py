import json

import pytest
from click.testing import CliRunner

from sqorient import __version__, config
from sqorient.main import cli


@pytest.fixture
def run():
    runner = CliRunner()

    def invoke(*args):
        return runner.invoke(cli, list(args))

    return invoke


def payload(result):
    return json.loads(result.stdout)


def test_version(run):
    result = run("--version")
    assert result.exit_code == 0
    assert __version__ in result.output


def test_basis_all(run):
    result = run("basis", "CP2", "--all")
    assert result.exit_code == 0
    report = payload(result)
    assert report["schema"] == 1
    assert report["command"] == "basis"
    assert report["input"]["name"] == "CP2"
    assert report["result"]["betti"] == [1, 0, 1, 0, 1]


def test_basis_text(run):
    result = run("--format", "text", "basis", "CP2", "--degree", "4", "--coordinates")
    assert result.exit_code == 0
    assert "degree 4: rank 1" in result.stdout
    assert "x^2 -> (1)" in result.stdout


def test_monomials(run):
    result = run("monomials", "EIII", "--degree", "16")
    assert payload(result)["result"]["monomials"] == ["t^8", "t^4*w", "w^2"]


def test_sq_on_a_manifest(run):
    result = run("sq", str(config.CORPUS_DIR / "cp2.json"), "--class", "x", "--n", "2")
    assert result.exit_code == 0
    square = payload(result)["result"]
    assert (square["class"], square["degree"], square["value"]) == ("x", 4, "x^2")
    assert square["coordinates"] == ["1"]


def test_sq_with_parameters(run):
    result = run("sq", "EVI", "--class", "y2^12*y12*y20", "--n", "8")
    assert payload(result)["result"]["coordinates"] == ["1+b2+n2"]


def test_table_lists_the_gap(run):
    result = run("table", "EVI", "--generator", "y20")
    table = payload(result)["result"]
    assert table["missing"] == ["Sq^16 y20"]
    assert {e["generator"] for e in table["entries"]} == {"y20"}
    assert table["adem_residues"] == [] and table["constraints"] == []


def test_table_adem_check(run):
    result = run("table", "EVI", "--adem")
    assert result.exit_code == 0
    table = payload(result)["result"]
    assert {"Sq^2 Sq^2 y20", "Sq^4 Sq^4 y20"} <= set(table["adem_residues"])
    assert table["constraints"]
    assert payload(run("table", "CP2", "--adem"))["result"]["adem_residues"] == []


def test_orient_with_trailing_assignment(run):
    result = run("orient", "EIII", "--k", "3", "--set", "a=1", "b=1", "c=1,d=0")
    assert result.exit_code == 0
    report = payload(result)
    assert report["input"]["assignment"] == {"a": 1, "b": 1, "c": 1, "d": 0}
    assert report["result"]["status"] == "no"
    assert report["result"]["witness"]["degree"] == 28


def test_orient_with_named_instantiation(run):
    result = run("orient", "EIII", "--k", "2", "--instantiate", "ishitoya")
    assert payload(result)["result"]["status"] == "yes"


def test_orient_conditional_text(run):
    result = run("--format", "text", "orient", "EIII", "--k", "2")
    assert "k=2: conditional" in result.stdout
    assert "needs 1+b = 0" in result.stdout


def test_wu_sw_euler_signature_check(run):
    assert [c["value"] for c in payload(run("wu", "CP2"))["result"]] == ["1", "0", "x"]
    assert [c["value"] for c in payload(run("sw", "RP2"))["result"]] == ["1", "x", "x^2"]
    assert payload(run("euler", "EIII"))["result"]["chi"] == 27
    assert payload(run("signature", "EIII"))["result"]["signature"] == 3
    assert payload(run("check", "CP2"))["result"]["consistent"] is True


@pytest.mark.parametrize(
    "args",
    [
        ("basis", "CP2"),
        ("basis", "XP9", "--all"),
        ("orient", "EIII", "--k", "2", "--set", "b=2"),
        ("orient", "EIII", "--k", "2", "--set", "z=1"),
        ("sq", "CP2", "--class", "x + y", "--n", "1"),
        ("sq", "CP2", "--class", "x^2", "--n", "2"),
    ],
)
def test_invalid_input_exits_2(run, args):
    result = run(*args)
    assert result.exit_code == 2
    assert "error:" in result.output


@pytest.mark.parametrize(
    "args",
    [
        ("signature", "CP2"),
        ("table", "EVI", "--strict"),
    ],
)
def test_computation_limit_exits_3(run, args):
    result = run(*args)
    assert result.exit_code == 3


def test_report_is_independent_of_threads(run):
    golden = str(config.GOLDEN_DIR)
    one, four, eight = (run("--threads", n, "report", "EIII", "--golden", golden) for n in ("1", "4", "8"))
    assert one.exit_code == four.exit_code == eight.exit_code == 0
    assert one.stdout == four.stdout == eight.stdout
    assert all(g["ok"] for g in payload(one)["result"]["goldens"])


def test_report_golden_mismatch_exits_4(run, tmp_path):
    doc = {
        "schema": 1,
        "entry": "CP2",
        "fixtures": [{"id": "CP2.euler.off", "kind": "euler", "expected": 4, "source": "off by one"}],
    }
    (tmp_path / "cp2.json").write_text(json.dumps(doc), encoding="utf-8")
    result = run("report", "CP2", "--golden", str(tmp_path))
    assert result.exit_code == 4
    assert "CP2.euler.off" in result.output
    assert payload(result)["result"]["goldens"][0]["actual"] == 3
