"""Reading and writing algebras (text and JSON) and partial functions."""

from __future__ import annotations

import hashlib
import json
from importlib import resources
from pathlib import Path

from .algebra import FiniteAlgebra, OperationTable
from .errors import ParseError, UsageError
from .partial import PartialFunction

CORPUS_NAMES = (
    "z2",
    "z3",
    "z4",
    "z5",
    "z2sq",
    "z3sq",
    "s3",
    "m2z2-mod",
    "m3z2-mod",
    "m2z3-mod",
    "lattice2",
)


def _tokens(text: str):
    """(line number, token) pairs with comments removed."""
    for no, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0]
        for tok in line.split():
            yield no, tok


def _int(tok: str, no: int, source: str | None, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"expected an integer for {what}, got {tok!r}", no, source) from None


def parse_algebra_text(text: str, source: str | None = None) -> FiniteAlgebra:
    toks = list(_tokens(text))
    pos = 0

    def take(what: str) -> tuple[int, str]:
        nonlocal pos
        if pos >= len(toks):
            last = toks[-1][0] if toks else 1
            raise ParseError(f"unexpected end of input, expected {what}", last, source)
        pos += 1
        return toks[pos - 1]

    no, kw = take("'algebra'")
    if kw != "algebra":
        raise ParseError(f"expected 'algebra', got {kw!r}", no, source)
    no, name = take("an algebra name")
    if name in ("size", "op"):
        raise ParseError("missing algebra name", no, source)
    no, kw = take("'size'")
    if kw != "size":
        raise ParseError(f"expected 'size', got {kw!r}", no, source)
    no, tok = take("the universe size")
    size = _int(tok, no, source, "size")
    if size < 1:
        raise ParseError("size must be positive", no, source)
    ops = []
    names = set()
    while pos < len(toks):
        no, kw = take("'op'")
        if kw != "op":
            raise ParseError(f"expected 'op', got {kw!r}", no, source)
        no, opname = take("an operation name")
        if opname in names:
            raise ParseError(f"duplicate operation name {opname!r}", no, source)
        names.add(opname)
        no, tok = take("an arity")
        arity = _int(tok, no, source, "arity")
        if arity < 0:
            raise ParseError("arity must be non-negative", no, source)
        table = []
        for _ in range(size**arity):
            no, tok = take(f"table entries for {opname!r}")
            if tok == "op":
                raise ParseError(f"operation {opname!r} needs {size ** arity} entries, got {len(table)}", no, source)
            v = _int(tok, no, source, f"an entry of {opname!r}")
            if not 0 <= v < size:
                raise ParseError(f"entry {v} of {opname!r} outside 0..{size - 1}", no, source)
            table.append(v)
        ops.append(OperationTable(opname, arity, tuple(table)))
    return FiniteAlgebra(name, size, tuple(ops))


def parse_algebra_json(text: str, source: str | None = None) -> FiniteAlgebra:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", e.lineno, source) from None
    try:
        name, size = str(data["name"]), int(data["size"])
        ops = tuple(OperationTable(str(o["name"]), int(o["arity"]), tuple(o["table"])) for o in data.get("ops", []))
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"malformed algebra JSON: {e}", None, source) from None
    try:
        return FiniteAlgebra(name, size, ops)
    except UsageError as e:
        raise ParseError(str(e), None, source) from None


def parse_algebra(text: str, source: str | None = None) -> FiniteAlgebra:
    """Either format; JSON is recognized by a leading brace."""
    if text.lstrip().startswith("{"):
        return parse_algebra_json(text, source)
    return parse_algebra_text(text, source)


def format_algebra(alg: FiniteAlgebra) -> str:
    lines = [f"algebra {alg.name}", f"size {alg.size}"]
    for op in alg.ops:
        lines.append(f"op {op.name} {op.arity}")
        row = max(alg.size, 1)
        t = op.table
        for i in range(0, len(t), row):
            lines.append(" ".join(str(v) for v in t[i : i + row]))
    return "\n".join(lines) + "\n"


def algebra_to_json(alg: FiniteAlgebra) -> str:
    data = {
        "name": alg.name,
        "size": alg.size,
        "ops": [{"name": o.name, "arity": o.arity, "table": list(o.table)} for o in alg.ops],
    }
    return json.dumps(data, sort_keys=True)


def parse_function(text: str, source: str | None = None) -> PartialFunction:
    """``fn <k>`` followed by lines ``x1 ... xk -> v``."""
    lines = [(no, line.split("#", 1)[0].strip()) for no, line in enumerate(text.splitlines(), start=1)]
    lines = [(no, line) for no, line in lines if line]
    if not lines:
        raise ParseError("empty function file", 1, source)
    no, head = lines[0]
    parts = head.split()
    if len(parts) != 2 or parts[0] != "fn":
        raise ParseError("expected 'fn <k>'", no, source)
    k = _int(parts[1], no, source, "arity")
    if k < 0:
        raise ParseError("arity must be non-negative", no, source)
    seen: dict[tuple[int, ...], int] = {}
    for no, line in lines[1:]:
        if "->" not in line:
            raise ParseError("expected 'x1 ... xk -> v'", no, source)
        lhs, rhs = line.split("->", 1)
        args = tuple(_int(t, no, source, "an argument") for t in lhs.split())
        if len(args) != k:
            raise ParseError(f"expected {k} arguments, got {len(args)}", no, source)
        vals = rhs.split()
        if len(vals) != 1:
            raise ParseError("expected a single value after '->'", no, source)
        v = _int(vals[0], no, source, "the value")
        if args in seen and seen[args] != v:
            raise ParseError(f"conflicting values {seen[args]} and {v} for {args}", no, source)
        seen[args] = v
    return PartialFunction(k, tuple(seen), tuple(seen.values()))


def format_function(f: PartialFunction) -> str:
    lines = [f"fn {f.arity}"]
    for t, v in zip(f.domain, f.values):
        lines.append(f"{' '.join(str(x) for x in t)} -> {v}")
    return "\n".join(lines) + "\n"


def read_bytes(path: str | Path) -> bytes:
    try:
        return Path(path).read_bytes()
    except FileNotFoundError:
        raise UsageError(f"no such file: {path}") from None
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def load_algebra(path: str | Path) -> FiniteAlgebra:
    data = read_bytes(path)
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError:
        raise ParseError("file is not UTF-8 text", None, str(path)) from None
    return parse_algebra(text, str(path))


def load_function(path: str | Path) -> PartialFunction:
    data = read_bytes(path)
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError:
        raise ParseError("file is not UTF-8 text", None, str(path)) from None
    return parse_function(text, str(path))


def corpus_path(name: str) -> Path:
    """Path of a bundled algebra, by name with or without the .alg suffix."""
    stem = name[:-4] if name.endswith(".alg") else name
    if stem not in CORPUS_NAMES:
        raise UsageError(f"unknown corpus algebra {name!r}; available: {', '.join(CORPUS_NAMES)}")
    return Path(str(resources.files("malcev_lab").joinpath("corpus", f"{stem}.alg")))


def corpus_algebra(name: str) -> FiniteAlgebra:
    return load_algebra(corpus_path(name))


def corpus() -> dict[str, FiniteAlgebra]:
    return {n: corpus_algebra(n) for n in CORPUS_NAMES}


__all__ = [
    "CORPUS_NAMES",
    "parse_algebra",
    "parse_algebra_text",
    "parse_algebra_json",
    "format_algebra",
    "algebra_to_json",
    "parse_function",
    "format_function",
    "load_algebra",
    "load_function",
    "corpus_path",
    "corpus_algebra",
    "corpus",
    "sha256",
    "read_bytes",
]
