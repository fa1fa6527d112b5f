import json
import subprocess
import sys

import pytest

from metaplectic_su21.cli import main
from metaplectic_su21.group import matrix_to_json, random_gamma_element, weyl


@pytest.fixture
def files(tmp_path):
    def write(name, data):
        path = tmp_path / name
        path.write_text(json.dumps(data))
        return str(path)

    return {
        "id": write("identity.json", [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]),
        "w": write("w.json", matrix_to_json(weyl())),
        "gamma": write("gamma.json", matrix_to_json(random_gamma_element(4))),
        "bad": write("bad.json", [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "2"]]),
        "garbage": write("garbage.json", {"not": "a matrix"}),
    }


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out.strip(), out.err


def test_hilbert(capsys):
    assert run(capsys, "hilbert", "2", "3", "--p", "3")[:2] == (0, "-1")
    assert run(capsys, "hilbert", "-1", "-1", "--place", "real")[:2] == (0, "-1")
    code, out, _ = run(capsys, "hilbert", "2", "3", "--p", "3", "--json")
    assert json.loads(out) == {"value": -1, "place": "3", "inputs": {"a": "2", "b": "3"}}


def test_classify(capsys):
    assert run(capsys, "classify", "2", "--d", "7")[:2] == (0, "split")
    assert run(capsys, "classify", "3")[:2] == (0, "inert")


def test_multiplier_identity(capsys, files):
    assert run(capsys, "multiplier", files["id"], "--tau", "-1,0,0,0")[:2] == (0, "1+0i")
    code, out, _ = run(capsys, "multiplier", files["id"], "--tau", "-1,0,0,0", "--json")
    assert code == 0 and json.loads(out)["value"] == "1+0i" and json.loads(out)["place"] == "real"


def test_phi_and_sigma_and_kappa(capsys, files):
    code, out, _ = run(capsys, "phi", files["w"], "--tau", "-1,0,0,0")
    assert code == 0 and out.endswith("i")
    code, out, _ = run(capsys, "sigma", files["w"], files["w"], "--json")
    assert code == 0 and json.loads(out)["place"] == "all" and "real" in json.loads(out)["value"]
    assert run(capsys, "sigma", files["w"], files["w"], "--p", "3")[0] == 0
    assert run(capsys, "kappa-local", files["gamma"], "--p", "11")[0] == 0
    code, out, _ = run(capsys, "kappa-global", files["gamma"])
    assert code == 0 and out in ("1", "-1")


def exit_code(argv):
    try:
        return main(argv)
    except SystemExit as exc:  # argparse rejects unknown choices itself
        return exc.code


@pytest.mark.parametrize(
    "argv",
    [
        ["hilbert", "2", "x", "--p", "3"],
        ["hilbert", "0", "3", "--p", "3"],
        ["hilbert", "2", "3"],
        ["classify", "4"],
        ["classify", "2", "--d", "4"],
        ["kappa-global", "{bad}"],
        ["kappa-global", "{garbage}"],
        ["kappa-global", "/nonexistent.json"],
        ["kappa-global", "{w}"],
        ["phi", "{id}", "--tau", "1,0,0,0"],
        ["phi", "{id}", "--tau", "1,0"],
        ["verify", "multiplier", "--d", "5"],
        ["verify", "nosuchsuite"],
    ],
)
def test_usage_errors_exit_2(capsys, files, argv):
    assert exit_code([a.format(**files) for a in argv]) == 2


def test_verify_is_deterministic(capsys):
    first = run(capsys, "verify", "cocycle", "--seed", "7", "--trials", "3", "--json")
    second = run(capsys, "verify", "cocycle", "--seed", "7", "--trials", "3", "--json")
    assert first[0] == 0 and first[1] == second[1]
    report = json.loads(first[1])
    assert report["failures"] == [] and report["trials"] > 0


def test_verify_all_small(capsys):
    code, out, _ = run(capsys, "verify", "all", "--seed", "42", "--trials", "2")
    assert code == 0 and out.startswith("all:")


def test_verify_all_skips_global_suites_when_two_does_not_split(capsys):
    assert run(capsys, "verify", "all", "--d", "5", "--trials", "1")[0] == 0


def test_module_entry_point(files):
    proc = subprocess.run(
        [sys.executable, "-m", "metaplectic_su21", "multiplier", files["id"], "--tau", "-1,0,0,0"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and proc.stdout.strip() == "1+0i"
