from __future__ import annotations

import itertools

import numpy as np
import pytest

from malcev_lab.fields import galois_field
from malcev_lab.lemmas import (
    check_distinct_mod_A,
    check_extension_terms,
    check_first_column_spread,
    check_gf2_three_term,
    check_independent_cover,
    check_scalar_uniformity,
    check_small_prime_terms,
    check_three_by_m,
    check_two_by_m,
    verify_lemma_corpus,
)
from malcev_lab.modules import subspaces


@pytest.mark.parametrize(
    "check,args",
    [
        (check_first_column_spread, (2, 2, 2)),
        (check_first_column_spread, (4, 2, 1)),
        (check_distinct_mod_A, (3, 2, 1)),
        (check_distinct_mod_A, (2, 3, 2)),
        (check_gf2_three_term, (4, 1)),
        (check_small_prime_terms, (3, 3, 1)),
        (check_small_prime_terms, (5, 2, 1)),
        (check_small_prime_terms, (7, 2, 1)),
        (check_extension_terms, (4, 2, 1)),
        (check_extension_terms, (9, 2, 1)),
        (check_two_by_m, (2, 2)),
        (check_two_by_m, (2, 3)),
        (check_three_by_m, (2, 2)),
        (check_scalar_uniformity, (3, 1)),
        (check_scalar_uniformity, (5, 1)),
        (check_scalar_uniformity, (3, 2)),
        (check_independent_cover, (2, 2)),
    ],
)
def test_lemma_checks_hold(check, args):
    c = check(*args)
    assert c.instances > 0
    assert c.ok, c.violations


def test_two_row_separation_fails_over_gf3():
    # W = span((1, 2)) in GF(3)^2. The matrix 2 E11 + 2 E22 - (E^1 + E^2) = [[1, 2], [2, 1]]
    # has both rows in W, so the submodule of matrices with rows in W contains it.
    F = galois_field(3)
    W = {(0, 0), (1, 2), (2, 1)}
    X = np.array([[2, 0], [0, 2]]) - np.ones((2, 2), dtype=int)
    X %= 3
    assert {tuple(r) for r in X.tolist()} <= W
    c = check_two_by_m(3, 2)
    assert not c.ok
    v = c.violations[0]
    assert (v["item"], v["a"], v["b"]) == (2, 2, 2)
    mask = subspaces(F, 2)[v["subspace"]]
    assert {divmod(int(i), 3) for i in np.nonzero(mask)[0]} == W
    assert not check_three_by_m(3, 2).ok


def test_corpus_report_shape():
    rep = verify_lemma_corpus(qs=(2,), n_max=2, m_max=2)
    assert rep.ok
    summary = rep.summary()
    assert summary["two-row-separation"]["parameter_sets"] == 1
    assert all(s["violations"] == 0 for s in summary.values())
    with pytest.raises(ValueError):
        verify_lemma_corpus(qs=(6,))
