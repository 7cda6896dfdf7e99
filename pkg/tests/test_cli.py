import json
import subprocess
import sys

import pytest

from cdlattice import cli
from cdlattice import constructions as cons
from cdlattice.cd_engine import cd_lattice
from cdlattice.class2 import cd_lattice_class2
from cdlattice.lattice import find_isomorphism, from_subgroup_family
from cdlattice.report import (
    ReportError,
    cd_report,
    lattice_from_report,
    parse_int,
    render_int,
    to_dot,
    validate_report,
)


def run(*argv):
    return cli.main([str(a) for a in argv])


def dot_counts(text):
    nodes = sum(1 for line in text.splitlines() if "[label=" in line)
    edges = sum(1 for line in text.splitlines() if "->" in line)
    return nodes, edges


def test_render_int():
    assert render_int(16, 2) == "2^4"
    assert render_int(12, 2) == 12
    assert render_int(144, None) == 144
    assert parse_int("3^12") == 3**12 and parse_int(7) == 7


def test_cd_dihedral(tmp_path, capsys):
    out = tmp_path / "d8.json"
    assert run("cd", "dihedral:8", "--output", out) == 0
    data = json.loads(out.read_text())
    assert len(data["members"]) == 5
    assert data["max_measure"] == "2^4" and parse_int(data["max_measure"]) == 16
    assert data["engine"] == "brute"


def test_cd_stdout_and_class2(capsys):
    assert run("cd", "builtin:paper_Gn?p=2&n=2") == 0
    data = json.loads(capsys.readouterr().out)
    assert len(data["members"]) == 5 and data["max_measure"] == "2^12"
    assert all("basis" in m for m in data["members"])


def test_plain_integer_measures(capsys):
    assert run("cd", "cyclic:12") == 0
    data = json.loads(capsys.readouterr().out)
    assert data["max_measure"] == 144 and data["order"] == 12


def test_malformed_table_exit_2(tmp_path, capsys):
    spec = tmp_path / "bad.json"
    spec.write_text(json.dumps({"kind": "cayley", "order": 3, "table": [[0, 1, 2], [1, 1, 0], [2, 0, 1]]}))
    assert run("cd", spec) == 2
    assert "row 1" in capsys.readouterr().err


@pytest.mark.parametrize("payload", [
    {"kind": "cayley", "order": 2, "table": [[0, 1]]},
    {"kind": "cayley", "order": 2, "table": [[0, 1], [1]]},
    {"kind": "class2", "p": 2, "r": 2, "s": 1, "commutators": [[0, 5, [1]]]},
    {"kind": "class2", "p": 4, "r": 1, "s": 0},
    {"kind": "class2", "p": 2, "r": 2},
    {"kind": "builtin", "name": "dihedral", "params": {"n": 7}},
    {"kind": "weird"},
    [1, 2, 3],
])
def test_bad_group_specs(tmp_path, payload):
    spec = tmp_path / "bad.json"
    spec.write_text(json.dumps(payload))
    assert run("cd", spec) == 2


def test_bad_refs():
    assert run("cd", "nosuch:3") == 2
    assert run("cd", "symmetric3:4") == 2
    assert run("cd", "missing.json") == 2
    assert run("cd", "symmetric3", "--engine", "class2") == 2
    assert run("cd", "cyclic:300") == 2
    assert run("cd", "paper_Gn?p=2&n=2", "--budget", "10") == 2
    assert run("nosuchcommand") == 2


def test_group_spec_files(tmp_path, capsys):
    cay = tmp_path / "c3.json"
    cay.write_text(json.dumps({"kind": "cayley", "order": 3, "table": [[0, 1, 2], [1, 2, 0], [2, 0, 1]]}))
    assert run("cd", cay) == 0
    assert json.loads(capsys.readouterr().out)["max_measure"] == "3^2"
    heis = tmp_path / "heis.json"
    heis.write_text(json.dumps({"kind": "class2", "p": 3, "r": 2, "s": 1, "commutators": [[1, 0, [1]]]}))
    assert run("cd", heis) == 0
    data = json.loads(capsys.readouterr().out)
    assert len(data["members"]) == 6 and data["max_measure"] == "3^4"
    assert run("cd", heis, "--engine", "brute") == 0
    brute = json.loads(capsys.readouterr().out)
    assert len(brute["members"]) == 6 and brute["max_measure"] == "3^4"
    built = tmp_path / "b.json"
    built.write_text(json.dumps({"kind": "builtin", "name": "quaternion", "params": {"n": 8}}))
    assert run("cd", built) == 0
    assert len(json.loads(capsys.readouterr().out)["members"]) == 5


@pytest.mark.parametrize("ref,nodes,edges", [
    ("dihedral:8", 5, 6),
    ("paper_P:2", 2, 1),
    ("paper_Gn?p=3&n=2", 6, 8),
])
def test_export_dot_counts(tmp_path, capsys, ref, nodes, edges):
    rep = tmp_path / "r.json"
    assert run("cd", ref, "-o", rep) == 0
    assert run("export", rep, "--format", "dot") == 0
    text = capsys.readouterr().out
    assert dot_counts(text) == (nodes, edges)
    assert text.startswith("digraph CD {")
    assert "order=" in text and "m=" in text


def test_export_is_byte_stable(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run("cd", "extraspecial?p=2&n=2&kind=minus", "-o", a) == 0
    assert run("cd", "extraspecial?p=2&n=2&kind=minus", "-o", b) == 0
    assert a.read_bytes() == b.read_bytes()
    da, db = tmp_path / "a.dot", tmp_path / "b.dot"
    assert run("export", a, "-o", da) == 0 and run("export", b, "-o", db) == 0
    assert da.read_bytes() == db.read_bytes()


def test_export_malformed(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"group": "G", "max_measure": 1, "members": [{"id": 0, "order": 1}], "covers": [[0, 3]]}')
    assert run("export", bad) == 2
    bad.write_text("not json")
    assert run("export", bad) == 2
    with pytest.raises(ReportError):
        validate_report({"group": "G"})


def test_figures(tmp_path):
    rep, fig = tmp_path / "g.json", tmp_path / "g.png"
    assert run("cd", "paper_Gn?p=3&n=2", "-o", rep, "--figure", fig) == 0
    assert fig.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
    svg = tmp_path / "g.svg"
    assert run("export", rep, "--format", "svg", "-o", svg) == 0
    assert b"<svg" in svg.read_bytes()[:400]
    assert run("export", rep, "--format", "png") == 0
    assert (tmp_path / "g.png").exists()


@pytest.mark.parametrize("cd", [
    lambda: cd_lattice(cons.dihedral(8)),
    lambda: cd_lattice(cons.extraspecial(2, 2, "plus")),
    lambda: cd_lattice_class2(cons.paper_Gn(3, 2)),
])
def test_round_trip(cd):
    result = cd()
    data = json.loads(json.dumps(cd_report(result)))
    rebuilt = lattice_from_report(data)
    direct = from_subgroup_family(result.subgroups)
    assert rebuilt.size == direct.size
    iso = find_isomorphism(rebuilt, direct)
    assert iso is not None and list(iso.mapping) == list(range(direct.size))
    assert to_dot(data) == to_dot(json.loads(json.dumps(data)))


def test_verify_commands(tmp_path, capsys):
    assert run("verify", "theorem-b", "--p", "3", "--n", "2") == 0
    out = capsys.readouterr().out
    assert out.startswith("PASS  theorem-b")
    assert run("verify", "scalar-matrix-lemma", "--n", "2", "--p", "2") == 0
    assert capsys.readouterr().out.startswith("N/A")
    assert run("verify", "nosuch") == 2
    js = tmp_path / "v.json"
    assert run("verify", "duality", "basic-properties", "--corpus", "dihedral:8", "paper_P:3", "--json", js) == 0
    reports = json.loads(js.read_text())
    assert len(reports) == 4 and all(r["status"] == "pass" for r in reports)


def test_verify_all_default_corpus(capsys):
    assert run("verify", "all") == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[-1].endswith("0 failed")
    assert not any(line.startswith("FAIL") for line in lines)
    names = {line.split()[1] for line in lines[:-1]}
    assert names == set(cli.vf.CHECK_NAMES)


def test_entry_point_subprocess(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "cdlattice.cli", "cd", "quaternion:8"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["max_measure"] == "2^4"
