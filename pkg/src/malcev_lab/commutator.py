"""Term-condition commutator, centralizers, types, rho relations and local modules."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .algebra import FiniteAlgebra, quotient_algebra
from .closure import DEFAULT_CAP, _cached, monoid_structure, restricted_clone, _linear_membership
from .congruence import (
    Congruence,
    CongruenceLattice,
    MalcevWitness,
    check_congruence,
    congruence_lattice,
    find_malcev_polynomial,
    malcev_pattern,
)
from .errors import ResourceError, UnsupportedAlgebraError, UsageError
from .lattice import components


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p**0.5) + 1))


def require_malcev(alg: FiniteAlgebra) -> MalcevWitness:
    d = find_malcev_polynomial(alg)
    if d is None:
        raise UnsupportedAlgebraError(f"algebra {alg.name!r} has no Mal'cev polynomial")
    return d


# --------------------------------------------------------------------------
# Commutator


def _pair_translations(alg: FiniteAlgebra, P: np.ndarray, idx: np.ndarray) -> np.ndarray:
    """Basic translations of the subalgebra of A^2 with universe P (rows of pairs)."""
    m = P.shape[0]
    rows = [np.arange(m, dtype=np.int64)]
    for arr in alg.arrays:
        r = arr.ndim
        if r == 0:
            continue
        if m ** (r - 1) * m > 50_000_000:
            raise ResourceError("pair algebra translations exceed the working limit", cap=50_000_000)
        # choices for the other places
        consts = np.indices((m,) * (r - 1)).reshape(r - 1, -1).T if r > 1 else np.zeros((1, 0), dtype=np.int64)
        for pos in range(r):
            left = []
            right = []
            for place in range(r):
                if place == pos:
                    left.append(P[None, :, 0])
                    right.append(P[None, :, 1])
                else:
                    c = consts[:, place if place < pos else place - 1]
                    left.append(P[c, 0][:, None])
                    right.append(P[c, 1][:, None])
            a = arr[tuple(np.broadcast_arrays(*left))]
            b = arr[tuple(np.broadcast_arrays(*right))]
            rows.append(idx[a, b])
    return np.unique(np.vstack(rows), axis=0)


def _commutator_raw(alg: FiniteAlgebra, alpha: Congruence, beta: Congruence) -> Congruence:
    n = alg.size
    lb = beta.array
    xs, ys = np.nonzero(lb[:, None] == lb[None, :])
    P = np.stack([xs, ys], axis=1)
    idx = -np.ones((n, n), dtype=np.int64)
    idx[xs, ys] = np.arange(P.shape[0])
    tr = _pair_translations(alg, P, idx)
    la = alpha.array
    ga, gb = np.nonzero(la[:, None] == la[None, :])
    m = P.shape[0]
    lab = components(m, idx[ga, ga], idx[gb, gb])
    while True:
        movers = np.nonzero(lab != np.arange(m))[0]
        if movers.size == 0:
            break
        eu = tr[:, movers].ravel()
        ev = tr[:, lab[movers]].ravel()
        new = components(m, np.concatenate([np.arange(m), eu]), np.concatenate([lab, ev]))
        if np.array_equal(new, lab):
            break
        lab = new
    # (x, y) in [alpha, beta] iff (x, y) Delta (x, x)
    diag = idx[P[:, 0], P[:, 0]]
    rel = lab == lab[diag]
    u, v = P[rel, 0], P[rel, 1]
    from .congruence import generate_congruence

    return generate_congruence(alg, list(zip(u.tolist(), v.tolist())))


def is_module_expansion(alg: FiniteAlgebra) -> bool:
    """An abelian group whose other operations are sums of endomorphisms (plus constants).

    Such an algebra is polynomially equivalent to a module, hence abelian.
    """

    def test():
        ms = monoid_structure(alg)
        return bool(ms is not None and ms.is_group and np.array_equal(ms.star, ms.star.T))

    return _cached(alg, "_module_expansion", test)


def commutator(alg: FiniteAlgebra, alpha: Congruence, beta: Congruence, method: str = "auto") -> Congruence:
    """[alpha, beta] via the congruence Delta generated on the pair algebra beta.

    ``method="auto"`` returns 0_A directly for module expansions, where every
    commutator vanishes; ``method="delta"`` always runs the generation.
    """
    if method not in ("auto", "delta"):
        raise UsageError(f"unknown commutator method {method!r}")
    check_congruence(alg, alpha)
    check_congruence(alg, beta)
    if method == "delta":
        return _commutator_raw(alg, alpha, beta)
    cache = _cached(alg, "_commutators", dict)
    key = (alpha.blocks, beta.blocks)
    if key not in cache:
        if is_module_expansion(alg):
            cache[key] = Congruence.identity(alg.size)
        else:
            cache[key] = _commutator_raw(alg, alpha, beta)
    return cache[key]


def commutator_index(L: CongruenceLattice, i: int, j: int) -> int:
    return L.index_of(commutator(L.alg, L[i], L[j]))


def centralizer(alg: FiniteAlgebra, alpha: Congruence, beta: Congruence) -> Congruence:
    """(alpha : beta), the largest gamma with [gamma, beta] <= alpha."""
    L = congruence_lattice(alg)
    a = L.index_of(alpha)
    b = L.index_of(beta)
    return L[centralizer_index(L, a, b)]


def centralizer_index(L: CongruenceLattice, a: int, b: int) -> int:
    cache = L.__dict__.setdefault("_centralizers", {})
    if (a, b) not in cache:
        if L.leq(commutator_index(L, L.top, b), a):
            cache[(a, b)] = L.top
        else:
            acc = L.bottom
            for g in range(L.size):
                if L.leq(g, acc):
                    continue
                if L.leq(commutator_index(L, g, b), a):
                    acc = L.join(acc, g)
            cache[(a, b)] = acc
    return cache[(a, b)]


def _check_cover(L: CongruenceLattice, a: int, b: int):
    if not L.lattice.covers_matrix[a, b]:
        raise UsageError(f"{L[a].describe()} is not covered by {L[b].describe()}")


def tct_type(alg: FiniteAlgebra, alpha: Congruence, beta: Congruence) -> int:
    """2 if [beta, beta] <= alpha, else 3 (for covers of a Mal'cev algebra)."""
    require_malcev(alg)
    L = congruence_lattice(alg)
    a, b = L.index_of(alpha), L.index_of(beta)
    _check_cover(L, a, b)
    return cover_type(L, a, b)


def cover_type(L: CongruenceLattice, a: int, b: int) -> int:
    # [1,1] <= a already forces [b,b] <= a by monotonicity
    if L.leq(commutator_index(L, L.top, L.top), a):
        return 2
    return 2 if L.leq(commutator_index(L, b, b), a) else 3


def cover_types(L: CongruenceLattice) -> dict[tuple[int, int], int]:
    require_malcev(L.alg)
    return {c: cover_type(L, *c) for c in L.covers}


# --------------------------------------------------------------------------
# rho relations


def rho_contains(d: MalcevWitness, alpha: Congruence, beta: Congruence, quads) -> np.ndarray:
    """Membership of 4-tuples (rows of ``quads``) in rho(alpha, beta)."""
    q = np.asarray(quads, dtype=np.int64).reshape(-1, 4)
    la, lb = alpha.array, beta.array
    ok = (lb[q[:, 0]] == lb[q[:, 1]]) & (lb[q[:, 1]] == lb[q[:, 2]])
    return ok & (la[d(q[:, 0], q[:, 1], q[:, 2])] == la[q[:, 3]])


def rho_table(d: MalcevWitness, alpha: Congruence, beta: Congruence) -> np.ndarray:
    """rho(alpha, beta) as a boolean array of shape (n, n, n, n)."""
    n = alpha.size
    g = np.indices((n, n, n)).reshape(3, -1)
    la, lb = alpha.array, beta.array
    ok = (lb[g[0]] == lb[g[1]]) & (lb[g[1]] == lb[g[2]])
    dv = la[d(g[0], g[1], g[2])]
    return (ok[:, None] & (dv[:, None] == la[None, :])).reshape(n, n, n, n)


def rho_relation(alg: FiniteAlgebra, d: MalcevWitness | None, alpha: Congruence, beta: Congruence):
    """rho(alpha, beta) as a sorted tuple of 4-tuples; needs a type-2 cover."""
    d = d or require_malcev(alg)
    L = congruence_lattice(alg)
    a, b = L.index_of(alpha), L.index_of(beta)
    _check_cover(L, a, b)
    if cover_type(L, a, b) != 2:
        raise UsageError("rho is only defined for covers of type 2")
    t = rho_table(d, alpha, beta)
    return tuple(tuple(int(v) for v in row) for row in np.argwhere(t))


def rho_independence_check(
    alg: FiniteAlgebra, alpha: Congruence, beta: Congruence, limit: int = 64, cap: int = 200_000
) -> bool:
    """Compare rho(alpha, beta) over several Mal'cev polynomials.

    Candidates: the found witness, its reversal d(z, y, x), and up to
    ``limit`` rows of Pol_3 on all of A^3 that satisfy the Mal'cev identities
    (when that closure fits under ``cap``).
    """
    d = require_malcev(alg)
    n = alg.size
    base = d.full_table()
    tables = [base, np.transpose(base, (2, 1, 0))]
    grid = [tuple(t) for t in np.indices((n, n, n)).reshape(3, -1).T.tolist()]
    try:
        clo = restricted_clone(alg, grid, cap=cap)
    except ResourceError:
        clo = None
    if clo is not None:
        pattern, target = malcev_pattern(n)
        pos = [a * n * n + b * n + c for a, b, c in pattern]
        hits = np.nonzero(np.all(clo.rows[:, pos] == np.array(target), axis=1))[0]
        for h in hits[:limit]:
            tables.append(clo.rows[h].astype(np.int64).reshape(n, n, n))
    ref = None
    for t in tables:
        w = MalcevWitness(d.pattern, d.row, "table", table=t)
        rel = rho_table(w, alpha, beta)
        if ref is None:
            ref = rel
        elif not np.array_equal(ref, rel):
            return False
    return True


# --------------------------------------------------------------------------
# (ABp)


def check_ABp(alg: FiniteAlgebra, gamma: Congruence, p: int) -> bool:
    if not _is_prime(p):
        raise UsageError(f"{p} is not a prime")
    L = congruence_lattice(alg)
    return check_ABp_index(L, L.index_of(gamma), p)


def check_ABp_index(L: CongruenceLattice, g: int, p: int) -> bool:
    for a, b in L.covers:
        if not L.leq(b, g):
            continue
        if cover_type(L, a, b) != 2:
            continue
        counts = L.class_counts(a, b)
        if not np.all((counts == 1) | (counts == p)):
            return False
    return True


# --------------------------------------------------------------------------
# Local modules


@dataclass(frozen=True)
class LocalModule:
    """Coordinatization data of an abelian congruence at a base point.

    ``plus``/``minus`` are tables indexed by positions in ``elements``.
    ``ring`` holds unary maps on o/mu (as tuples of positions); when
    ``ring_complete`` is false it is an F_p-spanning set of R_o rather than
    all of it.
    """

    o: int
    mu: Congruence
    atom: Congruence
    elements: tuple[int, ...]
    plus: np.ndarray
    minus: np.ndarray
    ring: tuple[tuple[int, ...], ...]
    ring_complete: bool
    q: int
    n: int
    h: int
    route: str = "enumerate"
    notes: tuple[str, ...] = field(default_factory=tuple)


class LocalModuleError(UsageError):
    """A precondition of the local coordinatization failed; ``reason`` names it."""

    def __init__(self, reason: str, message: str):
        self.reason = reason
        super().__init__(message)


def _int_log(x: int, base: int) -> int | None:
    if base < 2:
        return None
    k = 0
    while x % base == 0 and x > 1:
        x //= base
        k += 1
    return k if x == 1 else None


def local_module(alg: FiniteAlgebra, o: int, mu: Congruence, cap: int = DEFAULT_CAP) -> LocalModule:
    d = find_malcev_polynomial(alg)
    if d is None:
        raise LocalModuleError("no-malcev", "the algebra has no Mal'cev polynomial")
    L = congruence_lattice(alg)
    m = L.index_of(mu)
    if not 0 <= o < alg.size:
        raise UsageError(f"base point {o} outside the universe")
    if commutator_index(L, m, m) != L.bottom:
        raise LocalModuleError("not-abelian", "[mu, mu] is not 0")
    sub = L.lattice.interval(L.bottom, m)
    if sub.size < 2 or not sub.is_simple_complemented_modular():
        raise LocalModuleError("interval", "I[0, mu] is not a simple complemented modular lattice")
    cls = tuple(x for x in range(alg.size) if mu.relates(x, o))
    if len(cls) < 2:
        raise LocalModuleError("trivial-class", f"the mu-class of {o} is a singleton")
    atoms = [int(sub.labels[j]) for j in sub.upper_covers(0)]
    atom_i = min(atoms, key=lambda i: L[i].blocks)
    atom = L[atom_i]
    h = sub.height()
    pos = {x: i for i, x in enumerate(cls)}
    c = np.array(cls)
    ov = np.full(len(cls), o)
    P = len(cls)
    plus = np.array([[pos[int(v)] for v in d(np.full(P, x), ov, c)] for x in cls], dtype=np.int64)
    minus = np.array([[pos[int(v)] for v in d(np.full(P, x), c, ov)] for x in cls], dtype=np.int64)
    zero = pos[o]
    _verify_group(plus, minus, zero)
    sub_cls = tuple(x for x in cls if atom.relates(x, o))
    ms = monoid_structure(alg)
    notes: list[str] = []
    if ms is not None and ms.group is not None and not any(anti for _, anti in ms.maps):
        ring, q, route = _local_linear(alg, ms, cls, sub_cls, o, pos)
        complete = False
    else:
        ring, q = _local_enumerate(alg, cls, sub_cls, o, pos, plus, zero, cap)
        route, complete = "enumerate", True
    for r in ring:
        ra = np.array(r)
        if ra[zero] != zero:
            raise AssertionError("a member of R_o does not fix o")
        if not np.array_equal(ra[plus], plus[ra][:, ra]):
            raise AssertionError("a member of R_o is not additive")
    n = _int_log(len(sub_cls), q)
    if n is None:
        raise LocalModuleError("dimension", f"|o/alpha| = {len(sub_cls)} is not a power of |D| = {q}")
    if q ** (n * h) != len(cls):
        notes.append(f"|o/mu| = {len(cls)} differs from q^(n*h) = {q ** (n * h)}")
    return LocalModule(o, mu, atom, cls, plus, minus, tuple(ring), complete, q, n, h, route, tuple(notes))


def _verify_group(plus: np.ndarray, minus: np.ndarray, zero: int):
    P = plus.shape[0]
    ar = np.arange(P)
    if not np.array_equal(plus, plus.T):
        raise AssertionError("+_o is not commutative")
    if not np.array_equal(plus[plus, :], plus[:, plus]):
        raise AssertionError("+_o is not associative")
    if not np.array_equal(plus[zero], ar):
        raise AssertionError("o is not neutral for +_o")
    if not np.array_equal(plus[minus, ar[None, :]], np.broadcast_to(ar[:, None], (P, P))):
        raise AssertionError("-_o does not invert +_o")


def _local_enumerate(alg, cls, sub_cls, o, pos, plus, zero, cap):
    clo = restricted_clone(alg, [(x,) for x in cls], cap=cap)
    rows = clo.rows.astype(np.int64)
    o_at = cls.index(o)
    fix = rows[rows[:, o_at] == o]
    to_pos = np.full(alg.size, -1, dtype=np.int64)
    for x, i in pos.items():
        to_pos[x] = i
    ring_rows = np.unique(to_pos[fix], axis=0)
    ring = [tuple(int(v) for v in r) for r in ring_rows]
    # endomorphisms of (o/alpha, +_o) commuting with R_o restricted to o/alpha
    sub_pos = [pos[x] for x in sub_cls]
    sub_set = set(sub_pos)
    gens: list[int] = []
    span = {zero}
    while len(span) < len(sub_pos):
        g = min(x for x in sub_pos if x not in span)
        gens.append(g)
        frontier = list(span)
        while frontier:
            nxt = []
            for x in frontier:
                for y in gens:
                    z = int(plus[x, y])
                    if z not in span:
                        span.add(z)
                        nxt.append(z)
            frontier = nxt
    restricted = np.unique(ring_rows[:, sub_pos], axis=0)
    local_index = {x: i for i, x in enumerate(sub_pos)}
    count = 0
    for images in product(sub_pos, repeat=len(gens)):
        delta = _extend_hom(plus, zero, gens, images, sub_pos)
        if delta is None:
            continue
        ok = True
        for r in restricted:
            rmap = dict(zip(sub_pos, r.tolist()))
            for x in sub_pos:
                if delta[rmap[x]] != rmap[delta[x]]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            count += 1
    del local_index, sub_set
    return ring, count


def _extend_hom(plus, zero, gens, images, domain):
    """The additive map sending gens to images, or None if inconsistent."""
    delta = {zero: zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for x in frontier:
            for g, im in zip(gens, images):
                y = int(plus[x, g])
                v = int(plus[delta[x], im])
                if y in delta:
                    if delta[y] != v:
                        return None
                else:
                    delta[y] = v
                    nxt.append(y)
        frontier = nxt
    if len(delta) != len(domain):
        return None
    for x in domain:
        for y in domain:
            if delta[int(plus[x, y])] != plus[delta[x], delta[y]]:
                return None
    return delta


def _nullspace_mod_p(M: np.ndarray, p: int) -> int:
    """Dimension of the nullspace of M over GF(p)."""
    M = M.copy() % p
    rows, cols = M.shape
    r = 0
    for c in range(cols):
        piv = None
        for i in range(r, rows):
            if M[i, c]:
                piv = i
                break
        if piv is None:
            continue
        M[[r, piv]] = M[[piv, r]]
        M[r] = M[r] * pow(int(M[r, c]), p - 2, p) % p
        others = np.nonzero(M[:, c])[0]
        for i in others:
            if i != r:
                M[i] = (M[i] - M[i, c] * M[r]) % p
        r += 1
        if r == rows:
            break
    return cols - r


def _local_linear(alg, ms, cls, sub_cls, o, pos):
    """R_o spanning set and |D| when A is an elementary abelian group with linear operations."""
    g = ms.group
    p, dim = g.p, g.dim
    dom = [(x,) for x in cls]
    # basis of the F_p-span of Pol_1 restricted to o/mu, from the linear engine
    basis_rows = _span_rows(alg, ms, dom)
    o_at = cls.index(o)
    vecs = g.coords[basis_rows]  # B x P x dim
    B = vecs.shape[0]
    # rows vanishing at o: kernel of v -> v(o)
    at_o = vecs[:, o_at, :]  # B x dim
    kernel = _kernel_combinations(at_o, p)  # K x B
    v0 = np.einsum("kb,bpd->kpd", kernel, vecs) % p  # K x P x dim
    oc = g.coords[o]
    ring_elems = g.decode(((v0 + oc) % p).reshape(-1, dim)).reshape(v0.shape[0], len(cls))
    to_pos = np.full(alg.size, -1, dtype=np.int64)
    for x, i in pos.items():
        to_pos[x] = i
    ring = [tuple(int(v) for v in to_pos[r]) for r in ring_elems]
    # linear maps on W = o/alpha - o
    W = (g.coords[np.array(sub_cls)] - oc) % p  # s x dim (all vectors of W)
    Wb = _row_basis(W, p)  # w x dim
    w = Wb.shape[0]
    sub_idx = [cls.index(x) for x in sub_cls]
    coords_in_W = {}
    for x in sub_cls:
        coords_in_W[x] = _solve_in_basis(Wb, (g.coords[x] - oc) % p, p)
    eqs = []
    for k in range(v0.shape[0]):
        # matrix of y -> v(o + y) on W in basis Wb
        Lk = np.zeros((w, w), dtype=np.int64)
        for i in range(w):
            x = int(g.decode(((Wb[i] + oc) % p)[None, :])[0])
            img = (v0[k, cls.index(x)]) % p  # image vector relative to o
            Lk[:, i] = _solve_in_basis(Wb, img, p)
        # lambda Lk - Lk lambda = 0 as equations on the w*w entries of lambda
        I = np.eye(w, dtype=np.int64)
        eqs.append((np.kron(I, Lk.T) - np.kron(Lk, I)) % p)
    if eqs:
        E = np.vstack(eqs)
        dimD = _nullspace_mod_p(E, p)
    else:
        dimD = w * w
    del sub_idx, coords_in_W
    return ring, p**dimD, "linear"


def _span_rows(alg, ms, dom):
    """Rows (as elements) forming a basis of the span of Pol_k restricted to dom."""
    g = ms.group
    node, rank, deriv = _linear_membership(alg, ms, dom, np.full(len(dom), ms.identity), DEFAULT_CAP)
    pts = np.array(dom, dtype=np.int64)
    rows = []
    for i, nd in enumerate(deriv.nodes):
        if nd[0] in ("proj", "const", "map"):
            rows.append(deriv.evaluate(i, pts))
    R = np.array(rows, dtype=np.int64)
    V = g.coords[R].reshape(R.shape[0], -1)
    keep = _independent_rows(V, g.p)
    return R[keep]


def _independent_rows(V: np.ndarray, p: int) -> list[int]:
    basis: list[np.ndarray] = []
    pivots: list[int] = []
    keep = []
    for i, v in enumerate(V % p):
        v = v.copy()
        for b, pc in zip(basis, pivots):
            if v[pc]:
                v = (v - v[pc] * b) % p
        nz = np.nonzero(v)[0]
        if nz.size:
            pc = int(nz[0])
            v = v * pow(int(v[pc]), p - 2, p) % p
            for j, b in enumerate(basis):
                if b[pc]:
                    basis[j] = (b - b[pc] * v) % p
            basis.append(v)
            pivots.append(pc)
            keep.append(i)
    return keep


def _row_basis(V: np.ndarray, p: int) -> np.ndarray:
    keep = _independent_rows(V, p)
    return V[keep] % p


def _kernel_combinations(M: np.ndarray, p: int) -> np.ndarray:
    """Basis (as rows) of {c : c @ M = 0 mod p}."""
    B = M.shape[0]
    aug = np.concatenate([M % p, np.eye(B, dtype=np.int64)], axis=1)
    cols = M.shape[1]
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, B) if aug[i, c]), None)
        if piv is None:
            continue
        aug[[r, piv]] = aug[[piv, r]]
        aug[r] = aug[r] * pow(int(aug[r, c]), p - 2, p) % p
        for i in range(B):
            if i != r and aug[i, c]:
                aug[i] = (aug[i] - aug[i, c] * aug[r]) % p
        r += 1
    return aug[r:, cols:] % p


def _solve_in_basis(Wb: np.ndarray, v: np.ndarray, p: int) -> np.ndarray:
    """Coordinates of v in the row basis Wb (which must span v)."""
    w = Wb.shape[0]
    aug = np.concatenate([Wb.T % p, (v % p)[:, None]], axis=1)  # dim x (w+1)
    rows = aug.shape[0]
    r = 0
    piv_cols = []
    for c in range(w):
        piv = next((i for i in range(r, rows) if aug[i, c]), None)
        if piv is None:
            continue
        aug[[r, piv]] = aug[[piv, r]]
        aug[r] = aug[r] * pow(int(aug[r, c]), p - 2, p) % p
        for i in range(rows):
            if i != r and aug[i, c]:
                aug[i] = (aug[i] - aug[i, c] * aug[r]) % p
        piv_cols.append(c)
        r += 1
    if np.any(aug[r:, w] % p):
        raise AssertionError("vector outside the span")
    out = np.zeros(w, dtype=np.int64)
    for i, c in enumerate(piv_cols):
        out[c] = aug[i, w]
    return out


# --------------------------------------------------------------------------
# Labelled lattice


@dataclass(frozen=True)
class CoverLabel:
    lower: int
    upper: int
    type: int
    subtype: int | None = None
    n: int | None = None
    h: int | None = None


def labelled_lattice(alg: FiniteAlgebra, with_subtypes: bool = True) -> tuple[CongruenceLattice, tuple[CoverLabel, ...]]:
    """Types of all covers; subtypes computed once per projectivity class on A/alpha."""
    require_malcev(alg)
    L = congruence_lattice(alg)
    types = cover_types(L)
    labels = []
    by_class: dict[int, tuple[int, int, int]] = {}
    proj = L.lattice.projectivity_labels if L.is_modular() else np.arange(len(L.covers))
    for ci, (a, b) in enumerate(L.covers):
        t = types[(a, b)]
        if t == 2 and with_subtypes:
            key = int(proj[ci])
            if key not in by_class:
                by_class[key] = cover_subtype(alg, L[a], L[b])
            q, n, h = by_class[key]
            labels.append(CoverLabel(a, b, t, q, n, h))
        else:
            labels.append(CoverLabel(a, b, t))
    return L, tuple(labels)


def cover_subtype(alg: FiniteAlgebra, alpha: Congruence, beta: Congruence) -> tuple[int, int, int]:
    """(q, n, h) of the abelian interval [alpha, beta], computed on A/alpha."""
    Q, surj = quotient_algebra(alg, alpha)
    top = Congruence.from_labels([beta.blocks[surj.index(c)] for c in range(Q.size)])
    o = next(x for x in range(Q.size) if sum(1 for y in range(Q.size) if top.relates(x, y)) > 1)
    lm = local_module(Q, o, top)
    return lm.q, lm.n, lm.h
