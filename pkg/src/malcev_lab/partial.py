"""Partial functions, relation preservation, interpolation and brute-force richness search."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Callable, Iterable, Sequence

import numpy as np

from .algebra import FiniteAlgebra
from .closure import DEFAULT_CAP, _cached, find_in_closure, normalize_domain, restricted_clone
from .commutator import cover_type, require_malcev, rho_contains, rho_table
from .congruence import Congruence, congruence_lattice, find_malcev_polynomial, principal_index_table
from .errors import ResourceError, UsageError


@dataclass(frozen=True)
class PartialFunction:
    """A k-ary function given by its value on an explicit list of distinct tuples."""

    arity: int
    domain: tuple[tuple[int, ...], ...]
    values: tuple[int, ...]

    def __post_init__(self):
        dom = tuple(tuple(int(x) for x in t) for t in self.domain)
        vals = tuple(int(v) for v in self.values)
        object.__setattr__(self, "domain", dom)
        object.__setattr__(self, "values", vals)
        if self.arity < 0:
            raise UsageError("negative arity")
        if len(dom) != len(vals):
            raise UsageError(f"{len(dom)} domain tuples but {len(vals)} values")
        for t in dom:
            if len(t) != self.arity:
                raise UsageError(f"tuple {t} does not have arity {self.arity}")
        if len(set(dom)) != len(dom):
            raise UsageError("domain tuples must be distinct")

    @classmethod
    def from_pairs(cls, arity: int, pairs: Iterable[tuple[Sequence[int], int]]) -> "PartialFunction":
        """Build from (tuple, value) pairs; repeated tuples must agree on their value."""
        seen: dict[tuple[int, ...], int] = {}
        for t, v in pairs:
            t = tuple(int(x) for x in t)
            if t in seen and seen[t] != int(v):
                raise UsageError(f"conflicting values {seen[t]} and {v} at {t}")
            seen.setdefault(t, int(v))
        return cls(arity, tuple(seen), tuple(seen.values()))

    def __len__(self) -> int:
        return len(self.domain)

    def __call__(self, *args: int) -> int:
        try:
            return self.values[self.domain.index(tuple(args))]
        except ValueError:
            raise UsageError(f"{args} is not in the domain") from None

    def check_range(self, size: int) -> None:
        for t in self.domain:
            if any(not 0 <= x < size for x in t):
                raise UsageError(f"domain tuple {t} has entries outside 0..{size - 1}")
        if any(not 0 <= v < size for v in self.values):
            raise UsageError(f"values must lie in 0..{size - 1}")

    def points(self) -> np.ndarray:
        return np.asarray(self.domain, dtype=np.int64).reshape(len(self.domain), self.arity)


@dataclass(frozen=True)
class Relation:
    """An r-ary relation on {0..size-1}, tuples kept sorted."""

    size: int
    arity: int
    tuples: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        tups = tuple(sorted(set(tuple(int(x) for x in t) for t in self.tuples)))
        for t in tups:
            if len(t) != self.arity or any(not 0 <= x < self.size for x in t):
                raise UsageError(f"tuple {t} does not fit a {self.arity}-ary relation on {self.size} elements")
        object.__setattr__(self, "tuples", tups)

    @classmethod
    def from_mask(cls, mask: np.ndarray) -> "Relation":
        mask = np.asarray(mask, dtype=bool)
        return cls(mask.shape[0] if mask.ndim else 1, mask.ndim, tuple(map(tuple, np.argwhere(mask).tolist())))

    @classmethod
    def from_congruence(cls, theta: Congruence) -> "Relation":
        lab = theta.array
        return cls.from_mask(lab[:, None] == lab[None, :])

    def __len__(self) -> int:
        return len(self.tuples)

    @property
    def mask(self) -> np.ndarray:
        m = self.__dict__.get("_mask")
        if m is None:
            m = np.zeros((self.size,) * self.arity, dtype=bool)
            if self.tuples:
                m[tuple(np.array(self.tuples).T)] = True
            m.setflags(write=False)
            object.__setattr__(self, "_mask", m)
        return m

    def contains(self, rows: np.ndarray) -> np.ndarray:
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, self.arity)
        return self.mask[tuple(rows.T)]


# --------------------------------------------------------------------------
# Preservation


def _selections(m: int, r: int, chunk: int = 1 << 16):
    """All index tuples in {0..m-1}^r, in lexicographic chunks."""
    total = m**r
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        yield np.stack(np.unravel_index(idx, (m,) * r), axis=1) if r else idx[:, None]


def preserves_predicate(f: PartialFunction, r: int, contains: Callable[[np.ndarray], np.ndarray]) -> bool:
    """Does f preserve the r-ary relation whose membership test is ``contains``?

    For every choice of r domain tuples whose k columns all lie in the
    relation, the r values must lie in it too.
    """
    if len(f) == 0:
        return True
    P = f.points()
    vals = np.asarray(f.values, dtype=np.int64)
    for sel in _selections(len(f), r):
        ok = np.ones(sel.shape[0], dtype=bool)
        for i in range(f.arity):
            ok &= contains(P[sel, i])
            if not ok.any():
                break
        if ok.any() and not contains(vals[sel[ok]]).all():
            return False
    return True


def preserves(f: PartialFunction, B: Relation) -> bool:
    return preserves_predicate(f, B.arity, B.contains)


def is_congruence_preserving(alg: FiniteAlgebra, f: PartialFunction) -> bool:
    """f preserves every congruence of ``alg`` (checked one congruence at a time)."""
    f.check_range(alg.size)
    L = congruence_lattice(alg)
    if len(f) < 2:
        return True
    P = f.points()
    vals = np.asarray(f.values, dtype=np.int64)
    i, j = np.triu_indices(len(f), 1)
    for theta in L.elements:
        lab = theta.array
        related = np.all(lab[P[i]] == lab[P[j]], axis=1)
        if np.any(related & (lab[vals[i]] != lab[vals[j]])):
            return False
    return True


def type2_covers(alg: FiniteAlgebra) -> tuple[tuple[Congruence, Congruence], ...]:
    def build():
        require_malcev(alg)
        L = congruence_lattice(alg)
        return tuple((L[a], L[b]) for a, b in L.covers if cover_type(L, a, b) == 2)

    return _cached(alg, "_type2_covers", build)


def is_type_preserving(alg: FiniteAlgebra, f: PartialFunction) -> bool:
    """Congruence preserving and preserving rho(alpha, beta) for every type-2 cover."""
    d = require_malcev(alg)
    if not is_congruence_preserving(alg, f):
        return False
    for alpha, beta in type2_covers(alg):
        if not preserves_predicate(f, 4, lambda q, a=alpha, b=beta: rho_contains(d, a, b, q)):
            return False
    return True


@dataclass(frozen=True)
class InterpolationResult:
    interpolable: bool
    witness: tuple[int, ...] | None  # the matching closure row


def interpolate(alg: FiniteAlgebra, f: PartialFunction, cap: int = DEFAULT_CAP) -> InterpolationResult:
    """Is f the restriction of a k-ary polynomial of ``alg`` to its domain?"""
    f.check_range(alg.size)
    if len(f) == 0:
        return InterpolationResult(True, ())
    w = find_in_closure(alg, f.domain, f.values, cap=cap)
    if w is None:
        return InterpolationResult(False, None)
    return InterpolationResult(True, tuple(w.row))


# --------------------------------------------------------------------------
# Near-unanimity functions


def near_unanimity(size: int, k: int) -> PartialFunction:
    """u_k on the tuples with at most one entry differing from the rest."""
    if k < 3:
        raise UsageError("near-unanimity functions need arity at least 3")
    if size < 1:
        raise UsageError("universe size must be positive")
    pairs = []
    for x in range(size):
        pairs.append(((x,) * k, x))
        for pos in range(k):
            for y in range(size):
                if y != x:
                    t = [x] * k
                    t[pos] = y
                    pairs.append((tuple(t), x))
    pairs.sort()
    return PartialFunction(k, tuple(t for t, _ in pairs), tuple(v for _, v in pairs))


def nu_violation(size: int, k: int, B: Relation) -> tuple[tuple[int, ...], ...] | None:
    """Search for r tuples of U_k (r = arity of B) whose columns lie in B but whose majorities do not.

    A selection is described by majorities m_j, dissent positions d_j in
    {none, 1..k} and dissent values v_j != m_j. Patterns d are enumerated
    exhaustively; if some coordinate carries no dissenter, its column is the
    majority vector itself and the pattern cannot produce a violation.
    Otherwise all (m, v) for the pattern are enumerated.
    """
    if k < 3:
        raise UsageError("near-unanimity functions need arity at least 3")
    n, r = size, B.arity
    mask = B.mask
    outside = np.argwhere(~mask) if r else np.zeros((0, 0), dtype=np.int64)
    if outside.shape[0] == 0:
        return None
    for d in product(range(k + 1), repeat=r):
        used = {x for x in d if x}
        if len(used) < k:
            continue
        dissenters = [j for j in range(r) if d[j]]
        for m in outside:
            for vs in product(range(n), repeat=len(dissenters)):
                if any(v == m[j] for v, j in zip(vs, dissenters)):
                    continue
                cols_ok = True
                for i in range(1, k + 1):
                    col = m.copy()
                    for v, j in zip(vs, dissenters):
                        if d[j] == i:
                            col[j] = v
                    if not mask[tuple(col)]:
                        cols_ok = False
                        break
                if cols_ok:
                    sel = []
                    for j in range(r):
                        t = [int(m[j])] * k
                        if d[j]:
                            t[d[j] - 1] = vs[dissenters.index(j)]
                        sel.append(tuple(t))
                    return tuple(sel)
    return None


def check_nu_preservation(alg: FiniteAlgebra, k: int, relations: Sequence[Relation]) -> bool:
    """u_k preserves each relation (all of arity < k)."""
    for B in relations:
        if B.size != alg.size:
            raise UsageError("relation universe does not match the algebra")
        if B.arity >= k:
            raise UsageError(f"relation arity {B.arity} is not below k = {k}")
        if nu_violation(alg.size, k, B) is not None:
            return False
    return True


def stored_relations(alg: FiniteAlgebra) -> tuple[Relation, ...]:
    """All congruences as binary relations, plus rho of every type-2 cover.

    Without a Mal'cev polynomial there are no rho relations and only the
    congruences are returned.
    """
    L = congruence_lattice(alg)
    rels = [Relation.from_congruence(t) for t in L.elements]
    d = find_malcev_polynomial(alg)
    if d is None:
        return tuple(rels)
    for alpha, beta in type2_covers(alg):
        rels.append(Relation.from_mask(rho_table(d, alpha, beta)))
    return tuple(rels)


# --------------------------------------------------------------------------
# Brute-force search for non-interpolable type-preserving functions


CANDIDATE_CHUNK = 1 << 20
FUNCTION_ROW_LIMIT = 1 << 22


class _TPContext:
    """Incremental type-preservation filter for functions on subsets of A^k.

    Congruence preservation of a pair (s, t) is tested against
    kappa(s, t) = join_i Cg(s_i, t_i), the least congruence relating s and t
    coordinatewise; rho relations are tested on the 4-tuples that involve
    the newly added point.
    """

    def __init__(self, alg: FiniteAlgebra, k: int):
        self.alg = alg
        self.n = alg.size
        self.k = k
        self.d = require_malcev(alg)
        self.L = congruence_lattice(alg)
        self.P = principal_index_table(alg)
        self.labels = np.array([c.array for c in self.L.elements], dtype=np.int64)
        self.covers = type2_covers(alg)
        self.rho = [rho_table(self.d, a, b) for a, b in self.covers] if self.n**4 <= 1 << 22 else None
        self._kappa: dict[tuple[int, ...], int] = {}

    def kappa(self, s: np.ndarray, t: np.ndarray) -> np.ndarray:
        key = tuple(sorted(set(int(self.P[a, b]) for a, b in zip(s.tolist(), t.tolist()))))
        idx = self._kappa.get(key)
        if idx is None:
            idx = 0
            for c in key:
                idx = self.L.join(idx, c)
            self._kappa[key] = idx
        return self.labels[idx]

    def _rho_ok(self, c: int, quads: np.ndarray) -> np.ndarray:
        if self.rho is not None:
            return self.rho[c][quads[..., 0], quads[..., 1], quads[..., 2], quads[..., 3]]
        a, b = self.covers[c]
        shape = quads.shape[:-1]
        return rho_contains(self.d, a, b, quads.reshape(-1, 4)).reshape(shape)

    def extend(self, P: np.ndarray, F: np.ndarray, t: np.ndarray) -> np.ndarray:
        """Type-preserving extensions to P + [t] of the functions F (rows) on P."""
        step = max(1, CANDIDATE_CHUNK // self.n)
        if F.shape[0] <= step:
            return self._extend(P, F, t)
        parts, total = [], 0
        for lo in range(0, F.shape[0], step):
            part = self._extend(P, F[lo : lo + step], t)
            total += part.shape[0]
            if total > FUNCTION_ROW_LIMIT:
                raise ResourceError(
                    f"more than {FUNCTION_ROW_LIMIT} type-preserving functions on a domain of size {P.shape[0] + 1}",
                    cap=FUNCTION_ROW_LIMIT,
                )
            parts.append(part)
        return np.concatenate(parts, axis=0)

    def _extend(self, P: np.ndarray, F: np.ndarray, t: np.ndarray) -> np.ndarray:
        n, m = self.n, P.shape[0]
        cand = np.concatenate(
            [np.repeat(F, n, axis=0), np.tile(np.arange(n, dtype=F.dtype), F.shape[0])[:, None]], axis=1
        )
        new = cand[:, m]
        for s in range(m):
            lab = self.kappa(P[s], t)
            keep = lab[new] == lab[cand[:, s]]
            cand, new = cand[keep], new[keep]
            if cand.shape[0] == 0:
                return cand
        P2 = np.vstack([P, t[None, :]])
        quads = _quads_with(m)
        for c in range(len(self.covers)):
            ok = np.ones(quads.shape[0], dtype=bool)
            for i in range(self.k):
                ok &= self._rho_ok(c, P2[quads, i])
            rel = quads[ok]
            if rel.shape[0] == 0:
                continue
            good = self._rho_ok(c, cand[:, rel]).all(axis=1)
            cand = cand[good]
            if cand.shape[0] == 0:
                return cand
        return cand

    def functions_on(self, points: np.ndarray) -> np.ndarray:
        """All type-preserving functions on the given points (rows), built point by point."""
        F = np.arange(self.n, dtype=np.int64)[:, None]
        for j in range(1, points.shape[0]):
            F = self.extend(points[:j], F, points[j])
        return F


def _quads_with(m: int) -> np.ndarray:
    """Index 4-tuples over {0..m} that use the last index m at least once."""
    cache = _quads_with.__dict__.setdefault("cache", {})
    if m not in cache:
        g = np.indices((m + 1,) * 4).reshape(4, -1).T
        cache[m] = g[(g == m).any(axis=1)]
    return cache[m]


@dataclass(frozen=True)
class BruteForceReport:
    verdict: str  # "rich-up-to-bound", "counterexample" or "partial"
    counterexample: PartialFunction | None
    mode: str
    k: int
    max_domain_size: int
    domains_checked: int
    type_preserving_functions: int
    candidates: int
    budget: int
    seed: int | None = None
    count: int | None = None
    notes: tuple[str, ...] = field(default_factory=tuple)


EXHAUSTIVE_CELL_LIMIT = 16


def _row_keys(rows: np.ndarray, n: int) -> np.ndarray:
    rows = np.asarray(rows)
    if rows.shape[1] * np.log2(max(n, 2)) < 62:
        w = n ** np.arange(rows.shape[1] - 1, -1, -1, dtype=np.int64)
        return rows.astype(np.int64) @ w
    return np.array([r.tobytes() for r in rows.astype(np.int16)], dtype=object)


def brute_force_strictly_k_rich(
    alg: FiniteAlgebra,
    k: int,
    max_domain_size: int,
    mode: str = "exhaustive",
    seed: int | None = None,
    count: int | None = None,
    seed_domains: Sequence[Sequence[Sequence[int]]] = (),
    budget: int = 10**9,
    cap: int = DEFAULT_CAP,
) -> BruteForceReport:
    """Look for a k-ary type-preserving partial function that no polynomial interpolates.

    ``mode="exhaustive"`` walks all domains T of A^k with |T| <= max_domain_size
    in lexicographic order (only for |A|^k <= 16 cells). ``mode="random"``
    draws ``count`` domains with a seeded generator; ``seed_domains`` are
    always examined as well. The reported counterexample is the least one
    found, ordered by (|T|, T, values).
    """
    if k < 1:
        raise UsageError("k must be positive")
    if max_domain_size < 1:
        raise UsageError("max_domain_size must be positive")
    ctx = _TPContext(alg, k)
    n = alg.size
    cells = n**k
    stats = {"domains": 0, "tp": 0, "cand": 0}
    best: list = [None]  # (key, PartialFunction)

    def consider(points: np.ndarray, F: np.ndarray, closure_rows: np.ndarray):
        stats["domains"] += 1
        stats["tp"] += F.shape[0]
        if F.shape[0] == 0:
            return
        bad = ~np.isin(_row_keys(F, n), _row_keys(closure_rows, n))
        if not bad.any():
            return
        rows = F[bad]
        row = rows[np.lexsort(rows.T[::-1])[0]]
        dom = tuple(tuple(int(x) for x in p) for p in points)
        key = (len(dom), dom, tuple(int(v) for v in row))
        if best[0] is None or key < best[0][0]:
            best[0] = (key, PartialFunction(k, dom, key[2]))

    notes = []
    exhausted = False
    if mode == "exhaustive":
        if cells > EXHAUSTIVE_CELL_LIMIT:
            raise UsageError(f"exhaustive mode needs |A|^k <= {EXHAUSTIVE_CELL_LIMIT}, got {cells}")
        grid = np.indices((n,) * k).reshape(k, -1).T.astype(np.int64)
        pol = restricted_clone(alg, [tuple(p) for p in grid.tolist()], cap=cap).rows.astype(np.int64)
        limit = [max_domain_size]

        def dfs(idx: list[int], F: np.ndarray):
            for t in range(idx[-1] + 1 if idx else 0, cells):
                if len(idx) + 1 > limit[0]:
                    return
                if stats["cand"] > budget:
                    raise _BudgetExceeded
                idx2 = idx + [t]
                if idx:
                    stats["cand"] += F.shape[0] * n
                    F2 = ctx.extend(grid[idx], F, grid[t])
                else:
                    F2 = np.arange(n, dtype=np.int64)[:, None]
                before = best[0]
                consider(grid[idx2], F2, pol[:, idx2])
                if best[0] is not before:
                    limit[0] = len(idx2) - 1
                    continue
                if F2.shape[0]:
                    dfs(idx2, F2)

        try:
            dfs([], np.zeros((1, 0), dtype=np.int64))
        except _BudgetExceeded:
            exhausted = True
    elif mode == "random":
        if seed is None or count is None:
            raise UsageError("random mode needs a seed and a count")
        rng = np.random.default_rng(seed)
        sizes = min(max_domain_size, cells)
        domains = []
        for _ in range(count):
            s = int(rng.integers(1, sizes + 1))
            idx = np.sort(rng.choice(cells, size=s, replace=False))
            domains.append(idx)
        try:
            for dom in list(seed_domains):
                _examine(ctx, alg, k, np.asarray(dom, dtype=np.int64).reshape(-1, k), consider, stats, budget, cap)
            for idx in domains:
                pts = np.stack(np.unravel_index(idx, (n,) * k), axis=1).astype(np.int64)
                _examine(ctx, alg, k, pts, consider, stats, budget, cap)
        except _BudgetExceeded:
            exhausted = True
    elif mode == "seeded":
        if not seed_domains:
            raise UsageError("seeded mode needs at least one domain")
        try:
            for dom in seed_domains:
                _examine(ctx, alg, k, np.asarray(dom, dtype=np.int64).reshape(-1, k), consider, stats, budget, cap)
        except _BudgetExceeded:
            exhausted = True
    else:
        raise UsageError(f"unknown brute-force mode {mode!r}")

    if best[0] is not None:
        verdict = "counterexample"
    elif exhausted:
        verdict = "partial"
        notes.append("enumeration budget exhausted before the search finished")
    else:
        verdict = "rich-up-to-bound"
    return BruteForceReport(
        verdict,
        best[0][1] if best[0] is not None else None,
        mode,
        k,
        max_domain_size,
        stats["domains"],
        stats["tp"],
        stats["cand"],
        budget,
        seed if mode == "random" else None,
        count if mode == "random" else None,
        tuple(notes),
    )


class _BudgetExceeded(Exception):
    pass


def _examine(ctx: _TPContext, alg, k, points: np.ndarray, consider, stats, budget, cap):
    # canonical order: lexicographic, duplicates dropped
    pts = np.unique(points, axis=0)
    F = np.arange(ctx.n, dtype=np.int64)[:, None]
    for j in range(1, pts.shape[0]):
        stats["cand"] += F.shape[0] * ctx.n
        if stats["cand"] > budget:
            raise _BudgetExceeded
        F = ctx.extend(pts[:j], F, pts[j])
        if F.shape[0] == 0:
            break
    rows = restricted_clone(alg, [tuple(p) for p in pts.tolist()], cap=cap).rows.astype(np.int64)
    consider(pts, F, rows)


__all__ = [
    "PartialFunction",
    "Relation",
    "preserves",
    "preserves_predicate",
    "is_congruence_preserving",
    "is_type_preserving",
    "type2_covers",
    "interpolate",
    "InterpolationResult",
    "near_unanimity",
    "nu_violation",
    "check_nu_preservation",
    "stored_relations",
    "brute_force_strictly_k_rich",
    "BruteForceReport",
    "EXHAUSTIVE_CELL_LIMIT",
]
