import json
import os
import subprocess
import sys

import pytest

from solgraph.cli import main

DATA = os.path.join(os.path.dirname(__file__), "..", "demos", "data")


def data(name):
    return os.path.join(DATA, name)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_classify_nae(capsys):
    code, out, _ = run(capsys, "classify", "--relations", data("nae.rels"))
    assert code == 0
    assert out.strip() == ("non-tight; Sat NP-complete; st-Conn PSPACE-complete; "
                           "Conn PSPACE-complete; diameter 2^Ω(√n)")


def test_stconn_r13_disconnected(capsys):
    code, out, _ = run(capsys, "stconn", "--formula", data("r13.csp"), "--s", "100", "--t", "010")
    assert code == 1 and out.splitlines()[0] == "disconnected"
    code, out, _ = run(capsys, "stconn", "--formula", data("r13.csp"), "--s", "100", "--t", "010", "--oracle")
    assert code == 1


def test_stconn_path(capsys):
    code, out, _ = run(capsys, "stconn", "--formula", data("ihsb.csp"), "--s", "0000", "--t", "1001")
    assert code == 0 and "path" in out


def test_gen_longpath_odd_is_usage_error(capsys):
    code, _, err = run(capsys, "gen-longpath", "--n", "3")
    assert code == 2 and "even" in err


def test_gen_longpath_and_diameter(capsys, tmp_path):
    out_file = str(tmp_path / "lp.csp")
    assert run(capsys, "gen-longpath", "--n", "8", "--out", out_file)[0] == 0
    code, out, _ = run(capsys, "diameter", "--formula", out_file, "--oracle")
    assert code == 0 and out.startswith("diameter 30 ")
    code, _, err = run(capsys, "diameter", "--formula", out_file)
    assert code == 2


def test_conn_methods(capsys):
    assert run(capsys, "conn", "--formula", data("ihsb.csp"))[0] == 0
    assert run(capsys, "conn", "--formula", data("ihsb.csp"), "--method", "ihsb-")[0] == 0
    assert run(capsys, "conn", "--formula", data("ihsb.csp"), "--method", "oracle")[0] == 0
    # Horn but not componentwise IHSB-: no licensed algorithm
    code, _, err = run(capsys, "conn", "--formula", data("horn.csp"))
    assert code == 2 and "coNP" in err
    code, _, err = run(capsys, "conn", "--formula", data("r13.csp"))
    assert code == 2 and "coNP-complete" in err
    assert run(capsys, "conn", "--formula", data("r13.csp"), "--oracle")[0] == 1
    code, _, err = run(capsys, "conn", "--formula", data("r13.csp"), "--method", "affine")
    assert code == 2


def test_unsatisfiable_exit_code(capsys, tmp_path):
    f = tmp_path / "unsat.csp"
    f.write_text("vars 1\nrelation ONE 1 : 1\nrelation ZERO 1 : 0\nclause ONE x1\nclause ZERO x1\n")
    assert run(capsys, "conn", "--formula", str(f), "--method", "bijunctive")[0] == 4
    assert run(capsys, "conn", "--formula", str(f), "--oracle")[0] == 4


def test_cap_exit_code(capsys, tmp_path):
    out_file = str(tmp_path / "lp.csp")
    run(capsys, "gen-longpath", "--n", "8", "--out", out_file)
    assert run(capsys, "conn", "--formula", out_file, "--oracle", "--cap", "4")[0] == 3


def test_parse_error_exit_code(capsys, tmp_path):
    f = tmp_path / "bad.csp"
    f.write_text("vars 2\nclause NOPE x1 x2\n")
    code, _, err = run(capsys, "conn", "--formula", str(f))
    assert code == 2 and "line 2" in err
    assert run(capsys, "conn", "--formula", str(tmp_path / "missing.csp"))[0] == 2


def test_json_is_stable(capsys):
    argv = ["classify", "--relations", data("nae.rels"), "--json", "--seed", "7"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b
    rep = json.loads(a)
    assert rep["seed"] == 7 and rep["verdict"] == "non_tight"


def test_express_verify(capsys, tmp_path):
    code, out, _ = run(capsys, "express", "--relations", data("nae.rels"), "--verify",
                       "--out", str(tmp_path))
    assert code == 0 and out.count("faithful") == 16
    assert (tmp_path / "D0.csp").exists()
    assert run(capsys, "express", "--relations", data("r13.rels"), "--verify")[0] == 2


def test_compile_tm_tiny(capsys, tmp_path):
    out_file = str(tmp_path / "acc.csp")
    code, out, _ = run(capsys, "compile-tm", "--machine", data("accepter.tm"), "--n", "2",
                       "--tiny", "--out", out_file)
    assert code == 0 and "clock 2 cells" in out
    code, _, _ = run(capsys, "conn", "--formula", out_file, "--oracle", "--strategy", "search")
    assert code == 0
    assert run(capsys, "conn", "--formula", out_file, "--oracle")[0] == 3


def test_dot_export(capsys, tmp_path):
    dot = tmp_path / "g.dot"
    run(capsys, "conn", "--formula", data("r13.csp"), "--oracle", "--dot", str(dot))
    assert dot.read_text().startswith("graph G {")


def test_console_script_entry_point():
    r = subprocess.run([sys.executable, "-m", "solgraph.cli", "gen-longpath", "--n", "2"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "vars 2" in r.stdout


@pytest.mark.parametrize("argv", [[], ["bogus"], ["conn"]])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2
