from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from malcev_lab.algebra import FiniteAlgebra, OperationTable, is_compatible
from malcev_lab.congruence import (
    Congruence,
    congruence_lattice,
    find_malcev_polynomial,
    generate_congruence,
    interval,
    lattice_queries,
    principal_congruence,
    relation_compose,
)
from malcev_lab.errors import UsageError
from malcev_lab.modules import module_algebra

from conftest import MALCEV_NAMES

EVEN = ((0, 3, 4), (1, 2, 5))


def blocks(theta: Congruence) -> set[frozenset[int]]:
    return {frozenset(c) for c in theta.classes()}


def test_principal_congruences(alg):
    assert blocks(principal_congruence(alg("z4"), 0, 2)) == {frozenset({0, 2}), frozenset({1, 3})}
    for name in ("z4", "s3", "lattice2"):
        A = alg(name)
        for a in range(A.size):
            assert principal_congruence(A, a, a).is_identity
    assert blocks(principal_congruence(alg("s3"), 2, 5)) == set(map(frozenset, EVEN))


def test_principal_congruence_of_s3_by_normal_closure(alg):
    s3 = alg("s3")
    star = np.array(s3.ops[0].table).reshape(6, 6)
    inv = [int(np.nonzero(star[x] == 0)[0][0]) for x in range(6)]
    for a, b in itertools.combinations(range(6), 2):
        # the normal subgroup generated by a^-1 b, closed by conjugation and products
        N = {0, int(star[inv[a], b])}
        while True:
            grown = N | {int(star[star[g, x], inv[g]]) for g in range(6) for x in N} | {int(star[x, y]) for x in N for y in N}
            if grown == N:
                break
            N = grown
        cosets = {frozenset(int(star[g, x]) for x in N) for g in range(6)}
        assert blocks(principal_congruence(s3, a, b)) == cosets


@pytest.mark.parametrize(
    "name,size,height",
    [("z4", 3, 2), ("z2sq", 5, 2), ("s3", 3, 2), ("z2", 2, 1), ("z3sq", 6, 2), ("lattice2", 2, 1)],
)
def test_lattice_shapes(alg, name, size, height):
    L = congruence_lattice(alg(name))
    assert L.size == size
    assert L.lattice.height() == height


def test_lattice_queries_chain_and_m3(alg):
    L = congruence_lattice(alg("z4"))
    mid = L.index_of(Congruence.from_classes(4, [[0, 2], [1, 3]]))
    q = lattice_queries(L)
    assert set(L.lattice.strictly_meet_irreducibles()) == {L.bottom, mid}
    assert set(L.lattice.join_irreducibles()) == {mid, L.top}
    assert q["covers"]
    M3 = congruence_lattice(alg("z2sq"))
    atoms = set(M3.lattice.upper_covers(M3.bottom))
    assert len(atoms) == 3
    assert set(M3.lattice.strictly_meet_irreducibles()) == atoms
    assert M3.lattice.height(M3.bottom, M3.top) == 2
    with pytest.raises(UsageError):
        interval(M3, sorted(atoms)[0], sorted(atoms)[1])


def test_s3_lattice_is_three_chain(alg):
    L = congruence_lattice(alg("s3"))
    nu = L.index_of(Congruence.from_classes(6, EVEN))
    assert L.leq(L.bottom, nu) and L.leq(nu, L.top)
    assert set(L.covers) == {(L.bottom, nu), (nu, L.top)}


@pytest.mark.parametrize("name", MALCEV_NAMES + ("lattice2",))
def test_lattice_closed_and_compatible(alg, name):
    A = alg(name)
    L = congruence_lattice(A)
    for theta in L.elements:
        assert is_compatible(A, theta.blocks)
    for i, j in itertools.product(range(L.size), repeat=2):
        assert L[L.join(i, j)].blocks == L[i].join(L[j]).blocks
        assert L[L.meet(i, j)].blocks == L[i].meet(L[j]).blocks


def test_malcev_witnesses(alg):
    d = find_malcev_polynomial(alg("z4"))
    assert d is not None
    table = d.full_table()
    for a, b in itertools.product(range(4), repeat=2):
        assert table[a, b, b] == a and table[b, b, a] == a
    assert find_malcev_polynomial(alg("lattice2")) is None
    trivial = FiniteAlgebra("one", 1, (OperationTable("+", 2, (0,)),))
    assert find_malcev_polynomial(trivial) is not None


def test_closure_route_matches_group_route(alg):
    A = alg("s3")
    by_group = find_malcev_polynomial(A, method="group")
    by_closure = find_malcev_polynomial(A, method="closure")
    for d in (by_group, by_closure):
        t = d.full_table()
        for a, b in itertools.product(range(6), repeat=2):
            assert t[a, b, b] == a and t[b, b, a] == a


@pytest.mark.parametrize("name", MALCEV_NAMES)
def test_malcev_implies_permutable_and_modular(alg, name):
    A = alg(name)
    L = congruence_lattice(A)
    assert L.is_modular()
    for i, j in itertools.combinations(range(L.size), 2):
        assert np.array_equal(relation_compose(L[i], L[j]), relation_compose(L[j], L[i]))


def _random_unary_algebra(data) -> FiniteAlgebra:
    n = data.draw(st.integers(2, 5))
    ops = []
    for i in range(data.draw(st.integers(1, 2))):
        table = data.draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n))
        ops.append(OperationTable(f"f{i}", 1, tuple(table)))
    return FiniteAlgebra("rand", n, tuple(ops))


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_principal_congruence_laws(data):
    A = _random_unary_algebra(data)
    a, b = data.draw(st.integers(0, A.size - 1)), data.draw(st.integers(0, A.size - 1))
    ab = principal_congruence(A, a, b)
    assert ab.blocks == principal_congruence(A, b, a).blocks
    assert ab.relates(a, b)
    assert is_compatible(A, ab.blocks)
    for c, d in itertools.combinations(range(A.size), 2):
        if ab.relates(c, d):
            assert principal_congruence(A, c, d).leq(ab)


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_join_is_recompatible_for_non_malcev_inputs(data):
    A = _random_unary_algebra(data)
    L = congruence_lattice(A)
    for theta in L.elements:
        assert is_compatible(A, theta.blocks)
    pairs = data.draw(st.lists(st.tuples(st.integers(0, A.size - 1), st.integers(0, A.size - 1)), max_size=3))
    g = generate_congruence(A, pairs)
    assert L.index_of(g) >= 0


def test_module_lattices():
    L = congruence_lattice(module_algebra(2, 2, 1))
    assert L.size == 2
    L = congruence_lattice(module_algebra(3, 1, 2))
    assert L.size == 6
    assert len(L.lattice.upper_covers(L.bottom)) == 4


@pytest.mark.parametrize("name", ["z4", "s3", "z2sq", "m2z2-mod", "lattice2"])
def test_translation_route_matches_polynomial_route(alg, name):
    from malcev_lab.closure import unary_polynomial_array
    from malcev_lab.congruence import congruence_from_polynomials

    A = alg(name)
    pol1 = unary_polynomial_array(A)
    for a, b in itertools.combinations(range(A.size), 2):
        assert principal_congruence(A, a, b).blocks == congruence_from_polynomials(A, [(a, b)], pol1).blocks
