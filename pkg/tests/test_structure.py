from __future__ import annotations

import itertools

import numpy as np
import pytest

from malcev_lab.congruence import Congruence, congruence_lattice
from malcev_lab.errors import UsageError
from malcev_lab.partial import interpolate, is_congruence_preserving, is_type_preserving
from malcev_lab.structure import (
    HomogeneousSeries,
    check_sc1,
    classify_ct,
    decide_hereditary_richness,
    failure_witness_triples,
    homogeneous_elements,
    homogeneous_series,
    is_congruence_neutral,
    is_congruence_regular,
    is_homogeneous,
    phi_and_star,
    projective_prime_classes,
    sc1_failure_witness,
)

from conftest import MALCEV_NAMES

EVEN = ((0, 3, 4), (1, 2, 5))


def relative_phi_star(L, lo, mu):
    """Phi(mu) and mu* computed inside the interval [lo, top]."""
    phi = mu
    for c in L.lattice.lower_covers(mu):
        if L.leq(lo, c):
            phi = L.meet(phi, c)
    star = lo
    for a in range(L.size):
        if L.leq(lo, a) and L.meet(a, mu) == lo:
            star = L.join(star, a)
    return phi, star


def test_projectivity_classes(alg):
    L = congruence_lattice(alg("z2sq"))
    classes = projective_prime_classes(L)
    assert len(classes) == 1 and len(classes[0]) == 6
    L = congruence_lattice(alg("z4"))
    assert len(projective_prime_classes(L)) == 2


def test_homogeneous_elements(alg):
    L = congruence_lattice(alg("z2sq"))
    assert homogeneous_elements(L) == (L.top,)
    L = congruence_lattice(alg("s3"))
    nu = L.index_of(Congruence.from_classes(6, EVEN))
    assert is_homogeneous(L, nu) and not is_homogeneous(L, L.top) and not is_homogeneous(L, L.bottom)
    L = congruence_lattice(alg("z4"))
    assert homogeneous_elements(L) == (L.index_of(Congruence.from_classes(4, [[0, 2], [1, 3]])),)


def test_phi_and_star(alg):
    L = congruence_lattice(alg("z2sq"))
    assert phi_and_star(L, L.top) == (L.bottom, L.bottom)
    atom = L.lattice.upper_covers(L.bottom)[0]
    phi, star = phi_and_star(L, atom)
    assert phi == L.bottom and star == L.top


def test_sc1_on_z4(alg):
    rep = check_sc1(alg("z4"))
    assert not rep.holds and rep.agree
    assert rep.violations == ((0, 1, 2),)
    assert rep.failure_pairs == ((1, 2),)


@pytest.mark.parametrize("name", MALCEV_NAMES)
def test_sc1_characterizations_agree(alg, name):
    assert check_sc1(alg(name)).agree


def test_sc1_failure_witness(alg):
    z4 = alg("z4")
    triples = failure_witness_triples(z4, (1, 2))
    assert triples
    w = sc1_failure_witness(z4, (1, 2), *triples[0])
    assert is_congruence_preserving(z4, w.function)
    assert is_type_preserving(z4, w.function)
    assert not interpolate(z4, w.function).interpolable
    with pytest.raises(UsageError):
        sc1_failure_witness(z4, (2, 1), *triples[0])


def test_series(alg):
    s3 = alg("s3")
    res = homogeneous_series(s3)
    L = congruence_lattice(s3)
    nu = L.index_of(Congruence.from_classes(6, EVEN))
    assert [s.chain for s in res.series] == [(L.bottom, nu, L.top)]
    z4 = homogeneous_series(alg("z4"))
    assert z4.series == () and "SC1" in z4.diagnostic
    assert len(homogeneous_series(alg("z2sq")).series) == 1


@pytest.mark.parametrize("name", [n for n in MALCEV_NAMES if n != "z4"])
def test_series_invariants(alg, name):
    A = alg(name)
    L = congruence_lattice(A)
    res = homogeneous_series(A)
    assert res.series
    for s in res.series:
        for lo, mu in s.quotients():
            phi, star = relative_phi_star(L, lo, mu)
            assert phi == lo
            assert L.meet(mu, star) == lo
            assert L.lattice.interval(lo, mu).is_simple_complemented_modular()
        if s.chain[1] != L.top:
            assert phi_and_star(L, s.chain[1])[0] == L.bottom
        rep = classify_ct(A, s)
        for q in rep.quotients:
            assert (not q.ct3 or q.ct2) and (not q.ct2 or q.ct1)


def test_s3_ct_report(alg):
    s3 = alg("s3")
    (s,) = homogeneous_series(s3).series
    rep = classify_ct(s3, s)
    low, high = rep.quotients
    assert (low.type, low.subtype, low.clauses) == (2, 3, ("1c", "1d", "2b"))
    assert (high.type, high.subtype, high.clauses) == (2, 2, ("1b", "1d", "2b", "3b"))
    assert rep.holds(1) and rep.holds(2) and not rep.holds(3)


def test_classify_rejects_bad_series(alg):
    A = alg("z4")
    L = congruence_lattice(A)
    with pytest.raises(UsageError):
        classify_ct(A, HomogeneousSeries((L.bottom, L.top)))


def test_regular_and_neutral(alg):
    assert is_congruence_regular(alg("z4"))
    assert is_congruence_regular(alg("s3"))
    assert not is_congruence_neutral(alg("s3"))
    assert not is_congruence_neutral(alg("z2"))


@pytest.mark.parametrize(
    "name,verdicts",
    [
        ("z2", "yyyn"),
        ("z3", "yynn"),
        ("z5", "ynnn"),
        ("z2sq", "ynnn"),
        ("z3sq", "ynnn"),
        ("s3", "yynn"),
        ("z4", "nnnn"),
        ("m2z2-mod", "ynnn"),
        ("m3z2-mod", "ynnn"),
        ("m2z3-mod", "ynnn"),
    ],
)
def test_decisions(alg, name, verdicts):
    A = alg(name)
    got = "".join(decide_hereditary_richness(A, k).verdict[0] for k in (1, 2, 3, 4))
    assert got == verdicts


def test_decision_rejects_bad_k(alg):
    with pytest.raises(UsageError):
        decide_hereditary_richness(alg("z2"), 0)
