"""Exhaustive checks of the submodule lemmata behind the module classification.

Submodules of the M_n(D)-module D^(n x m) are the sets {X : every row of X
lies in W} for subspaces W of D^m, so every check below ranges over the
subspace masks produced by ``modules.subspaces``. Matrices are numpy arrays
of field elements of shape (n, m).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations, product
from typing import Callable, Iterable

import numpy as np

from .fields import GaloisField, galois_field, prime_power
from .modules import subspaces


@dataclass
class LemmaCheck:
    lemma: str
    params: dict
    instances: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass
class LemmaReport:
    checks: list[LemmaCheck]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def violations(self) -> list:
        return [(c.lemma, c.params, v) for c in self.checks for v in c.violations]

    def summary(self) -> dict[str, dict]:
        out: dict[str, dict] = {}
        for c in self.checks:
            s = out.setdefault(c.lemma, {"parameter_sets": 0, "instances": 0, "violations": 0})
            s["parameter_sets"] += 1
            s["instances"] += c.instances
            s["violations"] += len(c.violations)
        return out


class _Space:
    """Matrix arithmetic over GF(q) plus submodule membership via row subspaces."""

    def __init__(self, F: GaloisField, n: int, m: int):
        self.F, self.n, self.m = F, n, m
        self.w = F.q ** np.arange(m - 1, -1, -1, dtype=np.int64)
        self.subs = subspaces(F, m)

    def zero(self) -> np.ndarray:
        return np.zeros((self.n, self.m), dtype=np.int64)

    def E(self, i: int, j: int, c: int = 1) -> np.ndarray:
        X = self.zero()
        X[i - 1, j - 1] = c
        return X

    def E_col(self, a, j: int) -> np.ndarray:
        X = self.zero()
        X[:, j - 1] = a
        return X

    def ones(self, c: int = 1) -> np.ndarray:
        return np.full(self.n, c, dtype=np.int64)

    def add(self, X, Y):
        return self.F.add[X, Y]

    def sub(self, X, Y):
        return self.F.add[X, self.F.neg[Y]]

    def scale(self, c: int, X):
        return self.F.mul[c][X]

    def comb(self, *terms):
        """Sum of c * X over (c, X) pairs."""
        out = self.zero()
        for c, X in terms:
            out = self.add(out, self.scale(c, X))
        return out

    def row_codes(self, X) -> np.ndarray:
        return np.asarray(X, dtype=np.int64).reshape(-1, self.m) @ self.w

    def member(self, W: np.ndarray, X) -> bool:
        return bool(W[self.row_codes(X)].all())

    def distinct(self, X, Y) -> bool:
        return not np.array_equal(X, Y)


def _params(**kw) -> dict:
    return dict(kw)


# --------------------------------------------------------------------------
# Individual lemmata


def check_first_column_spread(q: int, n: int, m: int) -> LemmaCheck:
    """A submodule containing a nonzero first-column matrix E_a^1 contains every E_b^1."""
    S = _Space(galois_field(q), n, m)
    chk = LemmaCheck("first-column-spread", _params(q=q, n=n, m=m))
    vecs = list(product(range(q), repeat=n))
    cols = [S.E_col(np.array(a), 1) for a in vecs]
    for wi, W in enumerate(S.subs):
        present = [S.member(W, X) for X in cols]
        for a, hit in zip(vecs, present):
            if any(a) and hit:
                chk.instances += 1
                if not all(present):
                    chk.violations.append({"subspace": wi, "a": a})
                break
        else:
            chk.instances += 1
    return chk


def _unit_column_domain(S: _Space, special: np.ndarray) -> list[np.ndarray]:
    return [S.zero()] + [S.E(i, 1) for i in range(1, S.n + 1)] + [special]


def check_distinct_mod_A(q: int, n: int, m: int) -> LemmaCheck:
    """For T = {0, E_{i,1}, E_{b.1_n}^1}: two distinct members congruent mod A force E_{1,1} in A."""
    F = galois_field(q)
    S = _Space(F, n, m)
    chk = LemmaCheck("distinct-mod-A", _params(q=q, n=n, m=m))
    for b in range(1, q):
        T = _unit_column_domain(S, S.E_col(S.ones(b), 1))
        for wi, W in enumerate(S.subs):
            e11 = S.member(W, S.E(1, 1))
            for X, Y in combinations(T, 2):
                if not S.distinct(X, Y):
                    continue
                chk.instances += 1
                if S.member(W, S.sub(X, Y)) and not e11:
                    chk.violations.append({"b": b, "subspace": wi})
                    break
    return chk


def _three_term_conditions(S: _Space, T: list[np.ndarray], special: np.ndarray, with_two_term: bool):
    """Yield (label, matrix) for the differences that must lie in A under each hypothesis.

    M1 - M2 + M3 = special (pairwise distinct), and when requested
    M1 + M2 = 2 special and 2 M1 - M2 = special (distinct M1, M2).
    """
    rest = [X for X in T if S.distinct(X, special)]
    for X, Y, Z in permutations(rest, 3):
        yield "x-y+z", S.sub(S.add(S.sub(X, Y), Z), special)
    if with_two_term:
        for X, Y in permutations(rest, 2):
            yield "x+y", S.sub(S.add(X, Y), S.scale(2 % S.F.p, special))
            yield "2x-y", S.sub(S.sub(S.scale(2 % S.F.p, X), Y), special)


def _check_conditions(chk: LemmaCheck, S: _Space, T, special, conclusion, with_two_term: bool, three_term_conclusion=None):
    for wi, W in enumerate(S.subs):
        concl = S.member(W, conclusion)
        concl3 = concl if three_term_conclusion is None else S.member(W, three_term_conclusion)
        for label, D in _three_term_conditions(S, T, special, with_two_term):
            chk.instances += 1
            if S.member(W, D):
                ok = concl3 if label == "x-y+z" else concl
                if not ok:
                    chk.violations.append({"subspace": wi, "condition": label})
                    break


def check_gf2_three_term(n: int, m: int) -> LemmaCheck:
    """GF(2), n >= 4: M1 - M2 + M3 = E_{1_n}^1 mod A forces E_{1_n}^1 in A."""
    S = _Space(galois_field(2), n, m)
    chk = LemmaCheck("gf2-three-term", _params(q=2, n=n, m=m))
    special = S.E_col(S.ones(), 1)
    T = _unit_column_domain(S, special)
    _check_conditions(chk, S, T, special, special, with_two_term=False)
    return chk


def check_small_prime_terms(q: int, n: int, m: int) -> LemmaCheck:
    """GF(3) with n >= 3 (special 2.E_{1_n}^1), GF(5) with n >= 2 (special 4.E_{1_n}^1),
    GF(p), p >= 7 (special E_{(p-2)1_n}^1): each hypothesis forces E_{1,1} in A."""
    F = galois_field(q)
    S = _Space(F, n, m)
    b = {3: 2, 5: 4}.get(q, q - 2)
    name = {3: "gf3-terms", 5: "gf5-terms"}.get(q, "gfp-terms")
    chk = LemmaCheck(name, _params(q=q, n=n, m=m, b=b))
    special = S.E_col(S.ones(b), 1)
    T = _unit_column_domain(S, special)
    _check_conditions(chk, S, T, special, S.E(1, 1), with_two_term=True)
    return chk


def check_extension_terms(q: int, n: int, m: int) -> LemmaCheck:
    """GF(p^a), a > 1, b outside the prime subfield: the three-term hypothesis forces
    E_{1_n}^1 in A; for odd p the two-term hypotheses force E_{1,1} in A."""
    F = galois_field(q)
    S = _Space(F, n, m)
    chk = LemmaCheck("extension-terms", _params(q=q, n=n, m=m))
    for b in range(F.p, q):
        special = S.E_col(S.ones(b), 1)
        T = _unit_column_domain(S, special)
        sub = LemmaCheck(chk.lemma, {})
        _check_conditions(
            sub, S, T, special, S.E(1, 1), with_two_term=F.p != 2, three_term_conclusion=S.E_col(S.ones(), 1)
        )
        chk.instances += sub.instances
        chk.violations.extend({"b": b, **v} for v in sub.violations)
    return chk


def check_two_by_m(q: int, m: int) -> LemmaCheck:
    """n = 2, m >= 2, A avoiding {E11, E22, E^1+E^2}: no a E11 = b E22 and no a E11 + b E22 = E^1+E^2 mod A."""
    S = _Space(galois_field(q), 2, m)
    chk = LemmaCheck("two-row-separation", _params(q=q, n=2, m=m))
    both = S.add(S.E_col(S.ones(), 1), S.E_col(S.ones(), 2))
    Tp = [S.E(1, 1), S.E(2, 2), both]
    for wi, W in enumerate(S.subs):
        if any(S.member(W, X) for X in Tp):
            continue
        for a, b in product(range(q), repeat=2):
            if (a, b) != (0, 0):
                chk.instances += 1
                if S.member(W, S.comb((a, S.E(1, 1)), (S.F.neg[b], S.E(2, 2)))):
                    chk.violations.append({"subspace": wi, "item": 1, "a": a, "b": b})
            chk.instances += 1
            if S.member(W, S.sub(S.comb((a, S.E(1, 1)), (b, S.E(2, 2))), both)):
                chk.violations.append({"subspace": wi, "item": 2, "a": a, "b": b})
    return chk


def check_three_by_m(q: int, m: int, third=(3, 2)) -> LemmaCheck:
    """n = 3, m >= 2, A avoiding T' = {E11, E21, E32, E^1+E^2}.

    Item 1: a M1 = b M2 mod A never holds for distinct M1, M2 in T' and (a, b) != 0.
    Item 2: a E11 + b E21 + c E_third = E^1+E^2 mod A never holds; ``third`` is the
    third matrix unit, (3, 2) by default, matching the domain of the construction.
    """
    S = _Space(galois_field(q), 3, m)
    chk = LemmaCheck("three-row-separation", _params(q=q, n=3, m=m, third=list(third)))
    both = S.add(S.E_col(S.ones(), 1), S.E_col(S.ones(), 2))
    Tp = [S.E(1, 1), S.E(2, 1), S.E(3, 2), both]
    for wi, W in enumerate(S.subs):
        if any(S.member(W, X) for X in Tp):
            continue
        for X, Y in combinations(Tp, 2):
            for a, b in product(range(q), repeat=2):
                if (a, b) == (0, 0):
                    continue
                chk.instances += 1
                if S.member(W, S.comb((a, X), (S.F.neg[b], Y))):
                    chk.violations.append({"subspace": wi, "item": 1, "a": a, "b": b})
        for a, b, c in product(range(q), repeat=3):
            chk.instances += 1
            lhs = S.comb((a, S.E(1, 1)), (b, S.E(2, 1)), (c, S.E(*third)))
            if S.member(W, S.sub(lhs, both)):
                chk.violations.append({"subspace": wi, "item": 2, "a": a, "b": b, "c": c})
    return chk


def check_scalar_uniformity(q: int, m: int, full: bool | None = None) -> LemmaCheck:
    """Z_q^(1 x m), q in {3, 5}: a type-preserving c on {0, a, b} with c(0) = 0,
    c(a) = r1 a, c(b) = r2 b has r1 = r2.

    Type preservation is tested in module form: c(x) - c(y) lies in every
    submodule containing x - y, and c preserves rho(A, B) for every pair of
    submodules A < B of codimension one. With ``full`` false, a is fixed to
    the first unit vector (GL_m acts transitively on nonzero vectors and
    preserves both the hypothesis and the conclusion); by default the full
    enumeration is used when q^m <= 25.
    """
    F = galois_field(q)
    S = _Space(F, 1, m)
    N = q**m
    full = (N <= 25) if full is None else full
    chk = LemmaCheck("scalar-uniformity", _params(q=q, m=m, all_a=full))
    vecs = (np.arange(N)[:, None] // S.w[None, :]) % q
    masks = np.array(S.subs)  # (s, N)
    dims = np.array([int(round(np.log(mk.sum()) / np.log(q))) for mk in masks])
    sub_of = (masks[:, None, :] & ~masks[None, :, :]).any(axis=2) == False  # i <= j
    covers = [(i, j) for i in range(len(masks)) for j in range(len(masks)) if sub_of[i, j] and dims[j] == dims[i] + 1]
    cA = np.array([i for i, _ in covers])
    cB = np.array([j for _, j in covers])

    def code(v):
        return v @ S.w

    def lin(c, v):
        return F.mul[c][v]

    quads = np.indices((3, 3, 3, 3)).reshape(4, -1).T  # positions in (0, a, b)
    pairs = np.indices((3, 3)).reshape(2, -1).T
    rs = np.array(list(product(range(q), repeat=2)))  # (r1, r2)
    a_range = [1 * q ** (m - 1)] if not full else range(1, N)
    for a in a_range:
        for b in range(1, N):
            pts = np.stack([vecs[0], vecs[a], vecs[b]])  # 3 x m
            imgs = np.zeros((len(rs), 3, m), dtype=np.int64)
            imgs[:, 1] = F.mul[rs[:, 0][:, None], vecs[a][None, :]]
            imgs[:, 2] = F.mul[rs[:, 1][:, None], vecs[b][None, :]]
            if a == b:
                # c must be a function: r1 a = r2 a
                consistent = np.all(imgs[:, 1] == imgs[:, 2], axis=1)
            else:
                consistent = np.ones(len(rs), dtype=bool)
            # congruence preservation
            dx = code(F.add[pts[pairs[:, 0]], F.neg[pts[pairs[:, 1]]]])  # (9,)
            dy = code(F.add[imgs[:, pairs[:, 0]], F.neg[imgs[:, pairs[:, 1]]]])  # (r, 9)
            prem = masks[:, dx]  # (s, 9)
            conc = masks[:, dy]  # (s, r, 9)
            cong_ok = ~np.any(prem[:, None, :] & ~conc, axis=(0, 2))
            # rho(A, B)
            def rho_mask(P):
                x1, x2, x3, x4 = (P[..., quads[:, i], :] for i in range(4))
                s = code(F.add[F.add[x1, F.neg[x2]], F.add[x3, F.neg[x4]]])
                d1 = code(F.add[x1, F.neg[x2]])
                d2 = code(F.add[x2, F.neg[x3]])
                return s, d1, d2

            s0, d10, d20 = rho_mask(pts)
            s1, d11, d21 = rho_mask(imgs)
            premise = masks[cA][:, s0] & masks[cB][:, d10] & masks[cB][:, d20]  # (c, 81)
            concl = masks[cA][:, s1] & masks[cB][:, d11] & masks[cB][:, d21]  # (c, r, 81)
            rho_ok = ~np.any(premise[:, None, :] & ~concl, axis=(0, 2))
            tp = consistent & cong_ok & rho_ok
            chk.instances += int(len(rs))
            bad = tp & (rs[:, 0] != rs[:, 1])
            for r1, r2 in rs[bad].tolist():
                chk.violations.append({"a": vecs[a].tolist(), "b": vecs[b].tolist(), "r1": r1, "r2": r2})
    return chk


def check_independent_cover(q: int, n: int) -> LemmaCheck:
    """(q = 2, n <= 3) or (q = 3, n <= 2): every T in GF(q)^n has a linearly independent
    S within T with each t in T equal to x1 - x2 + x3 for some x_i in S + {0}."""
    F = galois_field(q)
    N = q**n
    w = q ** np.arange(n - 1, -1, -1, dtype=np.int64)
    vecs = (np.arange(N)[:, None] // w[None, :]) % q
    chk = LemmaCheck("independent-cover", _params(q=q, n=n))

    def independent(idx) -> bool:
        span = {0}
        for v in idx:
            if v in span:
                return False
            span = {int(F.add[vecs[s], F.mul[c][vecs[v]]] @ w) for s in span for c in range(q)}
        return True

    def reach(idx) -> set[int]:
        pool = [0] + list(idx)
        return {
            int(F.add[F.add[vecs[x], F.neg[vecs[y]]], vecs[z]] @ w) for x in pool for y in pool for z in pool
        }

    for mask in range(1 << N):
        T = [v for v in range(N) if mask >> v & 1]
        chk.instances += 1
        ok = False
        for size in range(0, min(n, len(T)) + 1):
            for S_ in combinations([t for t in T if t != 0], size):
                if independent(S_) and set(T) <= reach(S_):
                    ok = True
                    break
            if ok:
                break
        if not ok:
            chk.violations.append({"T": [vecs[t].tolist() for t in T]})
    return chk


# --------------------------------------------------------------------------
# Corpus driver


DEFAULT_QS = (2, 3, 4, 5, 7, 8, 9)


def verify_lemma_corpus(qs: Iterable[int] = DEFAULT_QS, n_max: int = 4, m_max: int = 3) -> LemmaReport:
    """Run every lemma check over all admissible (q, n, m) with q in ``qs``, n <= n_max, m <= m_max."""
    qs = sorted(set(qs))
    for q in qs:
        if prime_power(q) is None:
            raise ValueError(f"{q} is not a prime power")
    checks: list[LemmaCheck] = []
    ns = range(1, n_max + 1)
    ms = range(1, m_max + 1)
    for q in qs:
        F = galois_field(q)
        for n in ns:
            for m in ms:
                checks.append(check_first_column_spread(q, n, m))
                checks.append(check_distinct_mod_A(q, n, m))
                if q == 2 and n >= 4:
                    checks.append(check_gf2_three_term(n, m))
                if (q == 3 and n >= 3) or (q == 5 and n >= 2) or (F.degree == 1 and F.p >= 7):
                    checks.append(check_small_prime_terms(q, n, m))
                if F.degree > 1:
                    checks.append(check_extension_terms(q, n, m))
                if q in (2, 3) and n == 2 and m >= 2:
                    checks.append(check_two_by_m(q, m))
                if q in (2, 3) and n == 3 and m >= 2:
                    checks.append(check_three_by_m(q, m))
        if q in (3, 5):
            for m in ms:
                checks.append(check_scalar_uniformity(q, m))
        if q == 2:
            for n in range(1, min(3, n_max) + 1):
                checks.append(check_independent_cover(2, n))
        if q == 3:
            for n in range(1, min(2, n_max) + 1):
                checks.append(check_independent_cover(3, n))
    return LemmaReport(checks)
