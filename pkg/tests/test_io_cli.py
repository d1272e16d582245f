from __future__ import annotations

import json
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from malcev_lab.algebra import FiniteAlgebra, OperationTable
from malcev_lab.cli import main
from malcev_lab.errors import ParseError, UsageError
from malcev_lab.io import (
    CORPUS_NAMES,
    algebra_to_json,
    corpus_algebra,
    format_algebra,
    format_function,
    parse_algebra,
    parse_function,
)
from malcev_lab.partial import PartialFunction


@pytest.mark.parametrize("name", CORPUS_NAMES)
def test_corpus_round_trips(name):
    A = corpus_algebra(name)
    assert parse_algebra(format_algebra(A)) == A
    assert parse_algebra(algebra_to_json(A)) == A


@settings(max_examples=50, deadline=None)
@given(st.data())
def test_random_algebra_round_trip(data):
    n = data.draw(st.integers(1, 4))
    ops = []
    for i in range(data.draw(st.integers(0, 3))):
        r = data.draw(st.integers(0, 2))
        table = data.draw(st.lists(st.integers(0, n - 1), min_size=n**r, max_size=n**r))
        ops.append(OperationTable(f"f{i}", r, tuple(table)))
    A = FiniteAlgebra("r", n, tuple(ops))
    assert parse_algebra(format_algebra(A)) == A
    assert parse_algebra(algebra_to_json(A)) == A


@pytest.mark.parametrize(
    "text,line",
    [
        ("algebra a\nsize 2\nop f 1\n0 2\n", 4),
        ("algebra a\nsize 2\nop f 2\n0 1\n1\nop g 1 0 1\n", 6),
        ("algebra a\nsize x\n", 2),
        ("algebra a\nsize 2\n# comment\nfoo\n", 4),
        ("algebra a\nsize 2\nop f 1\n0 1\nop f 1\n0 1\n", 5),
        ("thing a\n", 1),
    ],
)
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(ParseError) as e:
        parse_algebra(text, "x.alg")
    assert e.value.line == line


def test_function_format():
    f = PartialFunction(2, ((0, 0), (1, 0)), (0, 1))
    assert parse_function(format_function(f)) == f
    assert parse_function("fn 1\n0 -> 0\n0 -> 0 # repeated\n").domain == ((0,),)
    with pytest.raises(ParseError) as e:
        parse_function("fn 1\n0 -> 0\n0 -> 1\n")
    assert e.value.line == 3
    with pytest.raises(ParseError):
        parse_function("fn 2\n0 -> 1\n")


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_exit_codes(tmp_path, capsys):
    assert run(["decide", "z2sq", "--k", "1"], capsys)[0] == 0
    assert run(["decide", "z2sq", "--k", "2"], capsys)[0] == 1
    assert run(["sc1", "z4"], capsys)[0] == 1
    assert run(["lattice", str(tmp_path / "missing.alg")], capsys)[0] == 2
    bad = tmp_path / "bad.alg"
    bad.write_text("algebra a\nsize 2\nop f 1\n0 7\n")
    code, out, err = run(["--json", "lattice", str(bad)], capsys)
    assert code == 2 and json.loads(out)["error"]["line"] == 4
    assert run(["module-decide", "--q", "6", "--n", "1", "--m", "1", "--k", "1"], capsys)[0] == 2
    assert run(["nonsense"], capsys)[0] == 2


def test_cli_interpolate(tmp_path, capsys):
    fn = tmp_path / "f.fn"
    fn.write_text("fn 1\n0 -> 0\n2 -> 1\n")
    code, out, _ = run(["interpolate", "z4", str(fn), "--json"], capsys)
    rep = json.loads(out)
    assert code == 1 and rep["results"]["interpolable"] is False
    assert rep["inputs"][1]["path"] == str(fn)
    assert run(["check-tp", "z4", str(fn)], capsys)[0] == 1


def test_cli_module_counterexample_emits_function(tmp_path, capsys):
    out_file = tmp_path / "cx.fn"
    code, out, _ = run(
        ["module-counterexample", "--q", "2", "--n", "1", "--m", "1", "--k", "4", "--verify", "--emit", str(out_file), "--json"],
        capsys,
    )
    rep = json.loads(out)
    assert code == 0 and rep["results"]["case"] == 6
    f = parse_function(out_file.read_text())
    assert f.arity == 4


def test_json_is_deterministic(capsys):
    for argv in (["--json", "types", "s3"], ["--json", "brute", "z5", "--k", "2", "--max-domain", "4", "--count", "50", "--seed", "1"]):
        first = run(argv, capsys)[1]
        second = run(argv, capsys)[1]
        assert first == second and json.loads(first)["command"] == argv[1]


def test_console_script():
    proc = subprocess.run(
        [sys.executable, "-m", "malcev_lab.cli", "--json", "module-decide", "--q", "2", "--n", "1", "--m", "1", "--k", "3"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["results"]["strictly_rich"] is True
