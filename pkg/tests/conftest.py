from __future__ import annotations

import pytest

from malcev_lab.io import CORPUS_NAMES, corpus_algebra

MALCEV_NAMES = tuple(n for n in CORPUS_NAMES if n != "lattice2")


@pytest.fixture(scope="session")
def alg():
    cache = {}

    def get(name: str):
        if name not in cache:
            cache[name] = corpus_algebra(name)
        return cache[name]

    return get


def random_expansion(base, unaries) -> "FiniteAlgebra":
    """``base`` with extra unary operations; arbitrary unary maps keep a group Mal'cev."""
    from malcev_lab.algebra import FiniteAlgebra, OperationTable

    ops = tuple(base.ops) + tuple(OperationTable(f"u{i}", 1, tuple(t)) for i, t in enumerate(unaries))
    return FiniteAlgebra(base.name + "+u", base.size, ops)


def random_module_signature(rng, size: int = 4):
    """A 4-element group ((Z4,+) or (Z2^2,+)) with random endomorphisms, translations and
    arbitrary unary maps, as a Mal'cev algebra."""
    from malcev_lab.algebra import FiniteAlgebra, make_operation

    if rng.random() < 0.5:
        add = make_operation("+", 2, 4, lambda x, y: (x + y) % 4)
        endos = [[(k * x) % 4 for x in range(4)] for k in range(4)]
    else:
        add = make_operation("+", 2, 4, lambda x, y: x ^ y)
        endos = []
        for a, b in ((a, b) for a in range(4) for b in range(4)):
            endos.append([(a if x & 1 else 0) ^ (b if x & 2 else 0) for x in range(4)])
    unaries = []
    for _ in range(rng.integers(0, 3)):
        kind = rng.integers(0, 3)
        if kind == 0:
            unaries.append(endos[rng.integers(len(endos))])
        elif kind == 1:
            e, c = endos[rng.integers(len(endos))], int(rng.integers(4))
            unaries.append([int(add.table[v * 4 + c]) for v in e])
        else:
            unaries.append([int(v) for v in rng.integers(0, 4, size=4)])
    return random_expansion(FiniteAlgebra("g4", 4, (add,)), unaries)


ACCEPTANCE_LINES: dict[int, str] = {}


def record_acceptance(number: int, passed: bool, detail: str) -> None:
    ACCEPTANCE_LINES[number] = f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])
