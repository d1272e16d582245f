from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from malcev_lab.algebra import FiniteAlgebra, OperationTable, evaluate, make_operation, quotient_algebra
from malcev_lab.closure import restricted_clone, unary_polynomials
from malcev_lab.congruence import Congruence, congruence_lattice
from malcev_lab.errors import InvalidCongruenceError, ResourceError, UsageError
from malcev_lab.modules import module_algebra


def cyclic(n: int) -> FiniteAlgebra:
    return FiniteAlgebra(f"z{n}", n, (make_operation("+", 2, n, lambda x, y: (x + y) % n),))


S3_ID, S3_TRANSPOSITIONS = 0, (1, 2, 5)


def test_evaluate_group_tables(alg):
    z4 = alg("z4")
    assert evaluate(z4, 0, (1, 3)) == 0
    assert evaluate(z4, 0, (0, 0)) == 0
    s3 = alg("s3")
    for t in S3_TRANSPOSITIONS:
        assert evaluate(s3, 0, (t, t)) == S3_ID


def test_evaluate_rejects_bad_input(alg):
    z4 = alg("z4")
    with pytest.raises(UsageError):
        evaluate(z4, 0, (1,))
    with pytest.raises(UsageError):
        evaluate(z4, 7, (1, 1))
    with pytest.raises(UsageError):
        evaluate(z4, 0, (1, 4))


def test_table_validation():
    with pytest.raises(UsageError):
        FiniteAlgebra("bad", 2, (OperationTable("f", 1, (0, 2)),))
    with pytest.raises(UsageError):
        FiniteAlgebra("bad", 2, (OperationTable("f", 2, (0, 1, 1)),))
    with pytest.raises(UsageError):
        FiniteAlgebra("bad", 2, (OperationTable("c", 0, (0, 1)),))


def test_unary_polynomials_small(alg):
    assert set(unary_polynomials(alg("z2"))) == {(0, 1), (1, 0), (0, 0), (1, 1)}
    trivial = FiniteAlgebra("one", 1, (OperationTable("+", 2, (0,)),))
    assert len(unary_polynomials(trivial)) == 1
    z4 = unary_polynomials(alg("z4"))
    assert set(z4) == {tuple((k * x + c) % 4 for x in range(4)) for k in range(4) for c in range(4)}


@pytest.mark.parametrize("name", ["z4", "s3", "m2z2-mod", "z2sq", "lattice2"])
def test_unary_polynomials_form_a_monoid(alg, name):
    A = alg(name)
    pol = set(unary_polynomials(A))
    assert tuple(range(A.size)) in pol
    for f, g in itertools.product(pol, repeat=2):
        assert tuple(f[g[x]] for x in range(A.size)) in pol


@pytest.mark.parametrize("name", ["z4", "s3", "z2sq", "m2z2-mod"])
def test_closure_engines_agree(alg, name):
    A = alg(name)
    T = [(0, 1), (1, 2), (2, 3), (3, 0)]
    generic = restricted_clone(A, T, engine="generic")
    auto = restricted_clone(A, T)
    assert generic.as_tuples() == auto.as_tuples()


def test_restricted_clone_z4_unary():
    clo = restricted_clone(cyclic(4), [(0,), (2,)])
    assert (0, 1) not in clo
    assert set(clo.as_tuples()) == {(c, (c + 2 * k) % 4) for c in range(4) for k in range(4)}


def test_restricted_clone_affine_binary(alg):
    clo = restricted_clone(alg("z2"), list(itertools.product(range(2), repeat=2)))
    assert len(clo) == 8


def test_restricted_clone_single_tuple(alg):
    A = alg("s3")
    clo = restricted_clone(A, [(3, 4)])
    assert set(clo.as_tuples()) == {(a,) for a in range(A.size)}


def test_restricted_clone_cap(alg):
    with pytest.raises(ResourceError):
        restricted_clone(alg("s3"), [(a,) for a in range(6)], cap=10, engine="generic")


def test_quotients(alg):
    z4 = alg("z4")
    Q, surj = quotient_algebra(z4, Congruence.from_classes(4, [[0, 2], [1, 3]]))
    assert Q.size == 2 and surj == (0, 1, 0, 1)
    assert Q.ops[0].table == (0, 1, 1, 0)
    I, surj = quotient_algebra(z4, Congruence.identity(4))
    assert I.ops == z4.ops and surj == (0, 1, 2, 3)
    s3 = alg("s3")
    even = Congruence.from_classes(6, [[0, 3, 4], [1, 2, 5]])
    Q, _ = quotient_algebra(s3, even)
    assert Q.size == 2 and Q.ops[0].table == (0, 1, 1, 0)
    with pytest.raises(InvalidCongruenceError):
        quotient_algebra(z4, Congruence.from_classes(4, [[0, 1], [2, 3]]))


@pytest.mark.parametrize("name", ["z2sq", "s3", "m2z2-mod"])
def test_quotient_of_quotient_is_quotient_by_join(alg, name):
    A = alg(name)
    L = congruence_lattice(A)
    for i, j in itertools.product(range(L.size), repeat=2):
        if not L.leq(i, j):
            continue
        Q1, s1 = quotient_algebra(A, L[i])
        image = Congruence.from_labels([L[j].blocks[s1.index(c)] for c in range(Q1.size)])
        Q2, s2 = quotient_algebra(Q1, image)
        direct, s = quotient_algebra(A, L[j])
        assert Q2.size == direct.size
        composite = tuple(s2[s1[a]] for a in range(A.size))
        assert Congruence.from_labels(composite).blocks == Congruence.from_labels(s).blocks
        assert Q2.ops == direct.ops


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_clone_rows_contain_constants_and_projections(data):
    A = module_algebra(3, 1, 1) if data.draw(st.booleans()) else cyclic(4)
    k = data.draw(st.integers(1, 2))
    cells = list(itertools.product(range(A.size), repeat=k))
    T = data.draw(st.lists(st.sampled_from(cells), min_size=1, max_size=5, unique=True))
    rows = set(restricted_clone(A, T).as_tuples())
    for c in range(A.size):
        assert (c,) * len(T) in rows
    for i in range(k):
        assert tuple(t[i] for t in T) in rows


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_clone_projection_onto_subdomain(data):
    A = cyclic(4) if data.draw(st.booleans()) else FiniteAlgebra(
        "s3like", 6, (make_operation("o", 2, 6, lambda x, y: _S3[x][y]),)
    )
    cells = list(itertools.product(range(A.size), repeat=2))
    T = data.draw(st.lists(st.sampled_from(cells), min_size=2, max_size=5, unique=True))
    sub = data.draw(st.lists(st.sampled_from(range(len(T))), min_size=1, unique=True))
    full = restricted_clone(A, T).rows
    projected = {tuple(r) for r in np.asarray(full)[:, sub].tolist()}
    direct = set(restricted_clone(A, [T[i] for i in sub]).as_tuples())
    assert projected == direct


def _s3_table():
    perms = sorted(itertools.permutations(range(3)))
    idx = {p: i for i, p in enumerate(perms)}
    return [[idx[tuple(p[q[i]] for i in range(3))] for q in perms] for p in perms]


_S3 = _s3_table()
