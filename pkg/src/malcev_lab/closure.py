"""Closure engines for polynomial clones restricted to finite domains.

The subuniverse of ``A^L`` generated by coordinate rows and constant rows is
computed by one of three engines:

* ``generic``: semi-naive saturation under every basic operation.
* ``monoid``: applies when one binary operation is a monoid multiplication and
  every other operation is a (anti-)homomorphism of it, or a homomorphism from
  a finite power. The closure is then the submonoid generated by a small set
  of generators closed under the unary components of those homomorphisms.
* ``linear``: the monoid case where the multiplication is an elementary
  abelian p-group. The closure is an F_p-subspace; only membership is
  decided, by Gaussian elimination, without enumerating the subspace.

Every engine records how each row arose, so a membership witness can be
re-evaluated on arbitrary argument tuples (``Derivation.evaluate``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .algebra import FiniteAlgebra
from .errors import ResourceError, UsageError

DEFAULT_CAP = 5_000_000
_BATCH = 1 << 18


# --------------------------------------------------------------------------
# Derivations


@dataclass
class Derivation:
    """Append-only DAG describing how closure rows were produced.

    Node kinds: ``("proj", j)``, ``("const", c)``, ``("op", i, children)``,
    ``("map", t, child)`` with ``t`` an index into ``maps``,
    ``("mul", left, right)`` and ``("lin", ((coef, child), ...))``.
    """

    alg: FiniteAlgebra
    arity: int
    maps: list[np.ndarray] = field(default_factory=list)
    nodes: list[tuple] = field(default_factory=list)
    monoid: "MonoidStructure | None" = None

    def add(self, node: tuple) -> int:
        self.nodes.append(node)
        return len(self.nodes) - 1

    def _needed(self, root: int) -> list[int]:
        seen = {root}
        stack = [root]
        while stack:
            v = stack.pop()
            for c in _children(self.nodes[v]):
                if c not in seen:
                    seen.add(c)
                    stack.append(c)
        return sorted(seen)

    def evaluate(self, root: int, points) -> np.ndarray:
        """Values of the polynomial behind node ``root`` on the given k-tuples."""
        pts = np.asarray(points, dtype=np.int64).reshape(-1, self.arity)
        m = pts.shape[0]
        vals: dict[int, np.ndarray] = {}
        arrays = self.alg.arrays
        for v in self._needed(root):
            node = self.nodes[v]
            kind = node[0]
            if kind == "proj":
                out = pts[:, node[1]]
            elif kind == "const":
                out = np.full(m, node[1], dtype=np.int64)
            elif kind == "op":
                arr = arrays[node[1]]
                out = arr[tuple(vals[c] for c in node[2])] if node[2] else np.full(m, arr[()], dtype=np.int64)
            elif kind == "map":
                out = self.maps[node[1]][vals[node[2]]]
            elif kind == "mul":
                out = self.monoid.star[vals[node[1]], vals[node[2]]]
            elif kind == "lin":
                g = self.monoid.group
                acc = np.zeros((m, g.dim), dtype=np.int64)
                for coef, c in node[1]:
                    acc = (acc + coef * g.coords[vals[c]]) % g.p
                out = g.decode(acc)
            else:  # pragma: no cover - internal invariant
                raise AssertionError(kind)
            vals[v] = np.asarray(out, dtype=np.int64)
        return vals[root]


def _children(node: tuple) -> Iterable[int]:
    kind = node[0]
    if kind == "op":
        return node[2]
    if kind == "map":
        return (node[2],)
    if kind == "mul":
        return (node[1], node[2])
    if kind == "lin":
        return tuple(c for _, c in node[1])
    return ()


@dataclass(frozen=True)
class Witness:
    """A closure row together with the derivation that produced it."""

    row: tuple[int, ...]
    derivation: Derivation
    node: int

    def evaluate(self, points) -> tuple[int, ...]:
        return tuple(int(v) for v in self.derivation.evaluate(self.node, points))


# --------------------------------------------------------------------------
# Signature analysis


@dataclass(frozen=True)
class ElementaryAbelian:
    """Coordinates identifying (A, *) with GF(p)^dim."""

    p: int
    dim: int
    coords: np.ndarray  # size x dim
    lookup: np.ndarray  # flat index (base p, first coordinate most significant) -> element

    def decode(self, vecs: np.ndarray) -> np.ndarray:
        vecs = np.asarray(vecs, dtype=np.int64)
        weights = self.p ** np.arange(self.dim - 1, -1, -1, dtype=np.int64)
        return self.lookup[vecs @ weights]


@dataclass(frozen=True)
class MonoidStructure:
    """A monoid operation with homomorphic companions.

    ``maps`` holds unary tables with a flag ``True`` for anti-homomorphisms.
    Every basic operation of arity r >= 2 other than the multiplication is a
    homomorphism from the r-th power and is recorded by its r unary
    components, whose product reproduces it.
    """

    op_index: int
    identity: int
    star: np.ndarray
    maps: tuple[tuple[np.ndarray, bool], ...]
    group: ElementaryAbelian | None
    is_group: bool
    inverse: np.ndarray | None


def _cached(alg: FiniteAlgebra, key: str, fn):
    d = alg.__dict__
    if key not in d:
        d[key] = fn()
    return d[key]


def monoid_structure(alg: FiniteAlgebra) -> MonoidStructure | None:
    return _cached(alg, "_monoid_structure", lambda: _find_monoid(alg))


def _identity_of(star: np.ndarray) -> int | None:
    n = star.shape[0]
    ar = np.arange(n)
    for e in range(n):
        if np.array_equal(star[e], ar) and np.array_equal(star[:, e], ar):
            return e
    return None


def _magma_generators(star: np.ndarray) -> list[int]:
    """A generating set of the magma (A, *), chosen greedily by least element."""
    n = star.shape[0]
    inside = np.zeros(n, dtype=bool)
    gens: list[int] = []
    members: list[int] = []
    while not inside.all():
        g = int(np.argmin(inside))
        gens.append(g)
        new = [g]
        inside[g] = True
        while new:
            old = np.array(members, dtype=np.int64)
            nw = np.array(new, dtype=np.int64)
            members.extend(new)
            allm = np.array(members, dtype=np.int64)
            prods = np.concatenate(
                [star[np.ix_(nw, allm)].ravel(), star[np.ix_(old, nw)].ravel()] if old.size else [star[np.ix_(nw, allm)].ravel()]
            )
            prods = np.unique(prods)
            fresh = prods[~inside[prods]]
            inside[fresh] = True
            new = fresh.tolist()
    return gens


def _is_associative(star: np.ndarray) -> bool:
    n = star.shape[0]
    if n <= 48:
        return bool(np.array_equal(star[star, :], star[:, star]))
    # Light's test: checking the identity against magma generators suffices.
    for g in _magma_generators(star):
        left = star[star[:, g]][:, :]  # (x*g)*y
        right = star[:, star[g]]  # x*(g*y)
        if not np.array_equal(left, right):
            return False
    return True


def _monoid_generators(star: np.ndarray, e: int) -> list[int]:
    n = star.shape[0]
    inside = np.zeros(n, dtype=bool)
    inside[e] = True
    members = [e]
    gens: list[int] = []
    while not inside.all():
        g = int(np.argmin(inside))
        gens.append(g)
        frontier = np.array(members, dtype=np.int64)
        while frontier.size:
            prods = np.unique(star[np.ix_(frontier, np.array(gens))].ravel())
            fresh = prods[~inside[prods]]
            inside[fresh] = True
            members.extend(fresh.tolist())
            frontier = fresh
    return gens


def _find_monoid(alg: FiniteAlgebra) -> MonoidStructure | None:
    n = alg.size
    for idx, op in enumerate(alg.ops):
        if op.arity != 2:
            continue
        star = alg.arrays[idx]
        e = _identity_of(star)
        if e is None or not _is_associative(star):
            continue
        gens = _monoid_generators(star, e)
        maps = _companion_maps(alg, idx, star, e, gens)
        if maps is None:
            continue
        inverse = None
        is_group = bool(np.all((star == e).any(axis=1)))
        if is_group:
            inverse = np.argmax(star == e, axis=1).astype(np.int64)
        group = _elementary_abelian(star, e) if is_group else None
        return MonoidStructure(idx, e, star, tuple(maps), group, is_group, inverse)
    return None


def _companion_maps(alg, idx, star, e, gens) -> list[tuple[np.ndarray, bool]] | None:
    n = alg.size
    ar = np.arange(n)
    g = np.array(gens, dtype=np.int64)
    out: list[tuple[np.ndarray, bool]] = []
    for j, (op, arr) in enumerate(zip(alg.ops, alg.arrays)):
        if j == idx or op.arity == 0:
            continue
        if op.arity == 1:
            h = arr
            if h[e] != e and n > 1:
                return None
            # h(x*g) = h(x)*h(g) for all x and generators g
            if g.size == 0 or np.array_equal(h[star[:, g]], star[np.ix_(h, h[g])]):
                out.append((h, False))
            elif np.array_equal(h[star[:, g]], star[np.ix_(h[g], h)].T):
                out.append((h, True))
            else:
                return None
            continue
        r = op.arity
        comps = []
        for i in range(r):
            index = [e] * r
            index[i] = slice(None)
            comps.append(np.asarray(arr[tuple(index)], dtype=np.int64))
        # f(x) must equal the product of its components on every tuple
        if n ** r > 4_000_000:
            return None
        prod = comps[0]
        grids = np.indices((n,) * r)
        prod = comps[0][grids[0]]
        for i in range(1, r):
            prod = star[prod, comps[i][grids[i]]]
        if not np.array_equal(prod, arr):
            return None
        for c in comps:
            if g.size and not np.array_equal(c[star[:, g]], star[np.ix_(c, c[g])]):
                return None
            if c[e] != e:
                return None
            out.append((c, False))
    return out


def _elementary_abelian(star: np.ndarray, e: int) -> ElementaryAbelian | None:
    n = star.shape[0]
    if not np.array_equal(star, star.T):
        return None
    if n == 1:
        return ElementaryAbelian(2, 0, np.zeros((1, 0), dtype=np.int64), np.zeros(1, dtype=np.int64))
    # order of the least non-identity element fixes p
    a = 1 if e != 1 else 0
    x, p = a, 1
    while x != e:
        x = int(star[x, a])
        p += 1
    if any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
        return None
    powers = np.full(n, e, dtype=np.int64)
    ar = np.arange(n)
    for _ in range(p):
        powers = star[powers, ar]
    if not np.all(powers == e):
        return None
    coords = np.full((n, 0), 0, dtype=np.int64)
    span = [e]
    vec = {e: ()}
    while len(span) < n:
        b = min(set(range(n)) - set(span))
        new_span = []
        new_vec = {}
        for x in span:
            y = x
            for c in range(p):
                new_vec[y] = vec[x] + (c,)
                new_span.append(y)
                y = int(star[y, b])
        span, vec = new_span, new_vec
    dim = len(next(iter(vec.values())))
    if len(vec) != n:
        return None
    coords = np.array([vec[x] for x in range(n)], dtype=np.int64)
    weights = p ** np.arange(dim - 1, -1, -1, dtype=np.int64)
    lookup = np.empty(p**dim, dtype=np.int64)
    lookup[coords @ weights] = np.arange(n)
    return ElementaryAbelian(p, dim, coords, lookup)


# --------------------------------------------------------------------------
# Domains


def normalize_domain(alg: FiniteAlgebra, T: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    """Validate and deduplicate a domain, preserving first occurrences."""
    if len(T) == 0:
        raise UsageError("domain must be nonempty")
    out: list[tuple[int, ...]] = []
    seen = set()
    k = None
    for t in T:
        t = tuple(int(v) for v in t)
        if k is None:
            k = len(t)
        elif len(t) != k:
            raise UsageError("domain tuples must share one arity")
        if any(not 0 <= v < alg.size for v in t):
            raise UsageError(f"domain tuple {t} has entries outside the universe")
        if t not in seen:
            seen.add(t)
            out.append(t)
    return tuple(out)


def _row_dtype(n: int):
    return np.uint8 if n <= 256 else np.uint16


# --------------------------------------------------------------------------
# Generic engine


class _RowStore:
    def __init__(self, width: int, dtype, cap: int):
        self.width = width
        self.dtype = dtype
        self.cap = cap
        self.index: dict[bytes, int] = {}
        self.chunks: list[np.ndarray] = []
        self.nodes: list[int] = []
        self._array = np.zeros((0, width), dtype=dtype)

    def __len__(self):
        return len(self.nodes)

    def array(self) -> np.ndarray:
        if self.chunks:
            self._array = np.concatenate([self._array] + self.chunks)
            self.chunks = []
        return self._array

    def add_batch(self, rows: np.ndarray, make_node) -> np.ndarray:
        """Insert unseen rows; returns positions (within ``rows``) that were new."""
        rows = np.ascontiguousarray(rows.astype(self.dtype, copy=False))
        if rows.shape[0] == 0:
            return np.zeros(0, dtype=np.int64)
        if rows.shape[0] > 1:
            _, first = np.unique(rows.view(np.dtype((np.void, rows.dtype.itemsize * self.width))).ravel(), return_index=True)
            first.sort()
        else:
            first = np.zeros(1, dtype=np.int64)
        fresh = []
        idx = self.index
        for pos in first.tolist():
            key = rows[pos].tobytes()
            if key not in idx:
                idx[key] = len(self.nodes)
                self.nodes.append(make_node(pos))
                fresh.append(pos)
                if len(self.nodes) > self.cap:
                    raise ResourceError(f"closure exceeded the cap of {self.cap} rows", cap=self.cap)
        if fresh:
            self.chunks.append(rows[fresh])
        return np.array(fresh, dtype=np.int64)

    def lookup(self, row) -> int | None:
        key = np.asarray(row, dtype=self.dtype).tobytes()
        return self.index.get(key)


def _seed_rows(alg: FiniteAlgebra, dom: tuple[tuple[int, ...], ...]):
    pts = np.array(dom, dtype=np.int64)
    k = pts.shape[1]
    L = pts.shape[0]
    seeds = []
    for j in range(k):
        seeds.append((pts[:, j], ("proj", j)))
    for c in range(alg.size):
        seeds.append((np.full(L, c, dtype=np.int64), ("const", c)))
    return seeds


def _generic(alg, dom, cap, target=None):
    n = alg.size
    k = len(dom[0])
    L = len(dom)
    deriv = Derivation(alg, k)
    store = _RowStore(L, _row_dtype(n), cap)
    tgt_key = None if target is None else np.asarray(target, dtype=store.dtype).tobytes()

    seeds = _seed_rows(alg, dom)
    batch = np.array([s for s, _ in seeds])
    store.add_batch(batch, lambda pos: deriv.add(seeds[pos][1]))
    for op_i, (op, arr) in enumerate(zip(alg.ops, alg.arrays)):
        if op.arity == 0:
            c = int(arr[()])
            store.add_batch(np.full((1, L), c), lambda pos, c=c: deriv.add(("const", c)))
    if tgt_key is not None and tgt_key in store.index:
        return store, deriv
    done = 0
    flat_tables = [np.asarray(arr, dtype=np.int64).ravel() for arr in alg.arrays]
    while True:
        rows = store.array()
        total = rows.shape[0]
        if done == total:
            break
        rows64 = rows.astype(np.int64)
        for op_i, op in enumerate(alg.ops):
            r = op.arity
            if r == 0:
                continue
            table = flat_tables[op_i]
            for i in range(r):
                # args before i are old, arg i is new, args after i are any
                dims = [done] * i + [total - done] + [total] * (r - 1 - i)
                count = int(np.prod(dims, dtype=object))
                if count == 0:
                    continue
                if count > 1 << 62:
                    raise ResourceError(f"closure step needs {count} combinations", cap=cap)
                offsets = [0] * i + [done] + [0] * (r - 1 - i)
                for start in range(0, count, _BATCH):
                    stop = min(count, start + _BATCH)
                    lin = np.arange(start, stop, dtype=np.int64)
                    args = np.unravel_index(lin, dims)
                    args = [a + o for a, o in zip(args, offsets)]
                    flat = np.zeros((stop - start, L), dtype=np.int64)
                    for a in args:
                        flat = flat * n + rows64[a]
                    vals = table[flat]

                    def make(pos, args=args, op_i=op_i):
                        return deriv.add(("op", op_i, tuple(int(store.nodes[a[pos]]) for a in args)))

                    store.add_batch(vals, make)
                    if tgt_key is not None and tgt_key in store.index:
                        return store, deriv
        done = total
    return store, deriv


# --------------------------------------------------------------------------
# Monoid engine


def _monoid(alg, ms: MonoidStructure, dom, cap, target=None):
    n = alg.size
    k = len(dom[0])
    L = len(dom)
    deriv = Derivation(alg, k, monoid=ms)
    deriv.maps = [m for m, _ in ms.maps]
    store = _RowStore(L, _row_dtype(n), cap)
    tgt_key = None if target is None else np.asarray(target, dtype=store.dtype).tobytes()
    star = ms.star
    e = ms.identity
    store.add_batch(np.full((1, L), e), lambda pos: deriv.add(("const", e)))

    gens: list[np.ndarray] = []
    gen_nodes: list[int] = []
    pending: list[tuple[np.ndarray, tuple]] = []
    pts = np.array(dom, dtype=np.int64)
    for j in range(k):
        pending.append((pts[:, j], ("proj", j)))
    for c in range(n):
        pending.append((np.full(L, c, dtype=np.int64), ("const", c)))

    def found():
        return tgt_key is not None and tgt_key in store.index

    while pending:
        row, node_spec = pending.pop(0)
        if store.lookup(row) is not None:
            continue
        g_node = deriv.add(node_spec if node_spec[0] != "map_of" else ("map", node_spec[1], node_spec[2]))
        gens.append(row.astype(np.int64))
        gen_nodes.append(g_node)
        gi = len(gens) - 1
        rows = store.array().astype(np.int64)
        prods = star[rows, row[None, :]]
        new_pos = store.add_batch(prods, lambda pos, gi=gi: deriv.add(("mul", store.nodes[pos], gen_nodes[gi])))
        if found():
            return store, deriv
        frontier_start = rows.shape[0]
        while True:
            allrows = store.array()
            if frontier_start == allrows.shape[0]:
                break
            block = allrows[frontier_start:].astype(np.int64)
            base = frontier_start
            frontier_start = allrows.shape[0]
            for gj, grow in enumerate(gens):
                prods = star[block, grow[None, :]]
                store.add_batch(
                    prods, lambda pos, gj=gj, base=base: deriv.add(("mul", store.nodes[base + pos], gen_nodes[gj]))
                )
                if found():
                    return store, deriv
        for t, (h, _anti) in enumerate(ms.maps):
            pending.append((h[row], ("map_of", t, g_node)))
    return store, deriv


# --------------------------------------------------------------------------
# Linear engine (membership only)


def _linear_membership(alg, ms: MonoidStructure, dom, target, cap):
    g = ms.group
    p, d = g.p, g.dim
    k = len(dom[0])
    L = len(dom)
    deriv = Derivation(alg, k, monoid=ms)
    deriv.maps = [m for m, _ in ms.maps]
    mats = []
    for h, _ in ms.maps:
        # h as a d x d matrix acting on coordinate row vectors
        basis_imgs = []
        for i in range(d):
            v = np.zeros(d, dtype=np.int64)
            v[i] = 1
            basis_imgs.append(g.coords[h[g.decode(v[None, :])[0]]])
        mats.append(np.array(basis_imgs, dtype=np.int64))

    def vec(row):
        return g.coords[np.asarray(row, dtype=np.int64)].reshape(-1)

    width = L * d
    pivots: list[int] = []
    basis = np.zeros((0, width), dtype=np.int64)
    combos = np.zeros((0, 0), dtype=np.int64)  # basis rows as combinations of raw vectors
    raw_nodes: list[int] = []
    raw_vecs: list[np.ndarray] = []
    inv = [0] + [pow(a, p - 2, p) for a in range(1, p)]

    def reduce(v):
        v = v.copy() % p
        coef = np.zeros(combos.shape[1], dtype=np.int64)
        for bi, pc in enumerate(pivots):
            c = v[pc]
            if c:
                v = (v - c * basis[bi]) % p
                coef = (coef + c * combos[bi]) % p
        return v, coef

    queue: list[int] = []

    def push(raw_vec, node):
        nonlocal basis, combos
        raw_nodes.append(node)
        raw_vecs.append(raw_vec)
        combos = np.pad(combos, ((0, 0), (0, 1)))
        v, coef = reduce(raw_vec)
        nz = np.nonzero(v)[0]
        if nz.size == 0:
            return False
        pc = int(nz[0])
        scale = inv[int(v[pc])]
        v = v * scale % p
        # new basis row = scale * (raw - coef . basis-combos)
        own = np.zeros(combos.shape[1], dtype=np.int64)
        own[-1] = 1
        crow = (own - coef) * scale % p
        # keep basis reduced at the new pivot
        for bi in range(len(pivots)):
            c = basis[bi, pc]
            if c:
                basis[bi] = (basis[bi] - c * v) % p
                combos[bi] = (combos[bi] - c * crow) % p
        basis = np.vstack([basis, v[None, :]])
        combos = np.vstack([combos, crow[None, :]])
        pivots.append(pc)
        return True

    pts = np.array(dom, dtype=np.int64)
    for j in range(k):
        if push(vec(pts[:, j]), deriv.add(("proj", j))):
            queue.append(len(raw_vecs) - 1)
    for i in range(d):
        unit = np.zeros(d, dtype=np.int64)
        unit[i] = 1
        c = int(g.decode(unit[None, :])[0])
        if push(vec(np.full(L, c)), deriv.add(("const", c))):
            queue.append(len(raw_vecs) - 1)
    while queue:
        ri = queue.pop(0)
        rv = raw_vecs[ri].reshape(L, d)
        for t, m in enumerate(mats):
            img = (rv @ m % p).reshape(-1)
            if push(img, deriv.add(("map", t, raw_nodes[ri]))):
                queue.append(len(raw_vecs) - 1)
    rank = len(pivots)
    tv = vec(target)
    v, coef = reduce(tv)
    if np.any(v):
        return None, rank, deriv
    terms = tuple((int(c), raw_nodes[i]) for i, c in enumerate(coef.tolist()) if c)
    e = ms.identity
    node = deriv.add(("lin", terms)) if terms else deriv.add(("const", e))
    return node, rank, deriv


# --------------------------------------------------------------------------
# Public API


@dataclass(frozen=True)
class RowClosure:
    """The restriction of Pol_k(A) to a domain, rows sorted lexicographically."""

    domain: tuple[tuple[int, ...], ...]
    rows: np.ndarray
    engine: str

    def __len__(self) -> int:
        return int(self.rows.shape[0])

    def __contains__(self, row) -> bool:
        row = np.asarray(row, dtype=self.rows.dtype)
        if row.shape != (self.rows.shape[1],):
            return False
        lo, hi = 0, self.rows.shape[0]
        # binary search on lexicographically sorted rows
        key = tuple(int(v) for v in row)
        while lo < hi:
            mid = (lo + hi) // 2
            cur = tuple(int(v) for v in self.rows[mid])
            if cur < key:
                lo = mid + 1
            else:
                hi = mid
        return lo < self.rows.shape[0] and tuple(int(v) for v in self.rows[lo]) == key

    def as_tuples(self) -> list[tuple[int, ...]]:
        return [tuple(int(v) for v in r) for r in self.rows]


def _sort_rows(rows: np.ndarray) -> np.ndarray:
    if rows.shape[0] == 0:
        return rows
    order = np.lexsort(rows.T[::-1])
    out = rows[order]
    out.setflags(write=False)
    return out


def choose_engine(alg: FiniteAlgebra, engine: str = "auto") -> str:
    if engine not in ("auto", "generic", "monoid", "linear"):
        raise UsageError(f"unknown engine {engine!r}")
    ms = monoid_structure(alg)
    if engine == "auto":
        return "monoid" if ms is not None else "generic"
    if engine in ("monoid", "linear") and ms is None:
        raise UsageError(f"engine {engine!r} does not apply to {alg.name!r}")
    if engine == "linear" and ms.group is None:
        raise UsageError("engine 'linear' needs an elementary abelian multiplication")
    return engine


def _closure_store(alg, dom, cap, engine, target=None):
    eng = choose_engine(alg, engine)
    if eng == "linear":
        eng = "monoid"
    if eng == "monoid":
        ms = monoid_structure(alg)
        if ms.group is not None:
            # the closure is a subspace; refuse before enumerating if it is too large
            _, rank, _ = _linear_membership(alg, ms, dom, np.zeros(len(dom), dtype=np.int64), cap)
            if ms.group.p ** rank > cap:
                raise ResourceError(
                    f"closure has {ms.group.p}^{rank} rows, above the cap of {cap}", cap=cap
                )
        store, deriv = _monoid(alg, ms, dom, cap, target)
    else:
        store, deriv = _generic(alg, dom, cap, target)
    return store, deriv, eng


def restricted_clone(
    alg: FiniteAlgebra, T: Sequence[Sequence[int]], cap: int = DEFAULT_CAP, engine: str = "auto"
) -> RowClosure:
    """All rows ``(p(t))_{t in T}`` for k-ary polynomials p of ``alg``."""
    dom = normalize_domain(alg, T)
    store, _, eng = _closure_store(alg, dom, cap, engine)
    return RowClosure(dom, _sort_rows(store.array()), eng)


def unary_polynomials(alg: FiniteAlgebra, cap: int = DEFAULT_CAP, engine: str = "auto") -> tuple[tuple[int, ...], ...]:
    """Pol_1(A) as function tables, sorted lexicographically."""
    clo = restricted_clone(alg, [(a,) for a in range(alg.size)], cap=cap, engine=engine)
    return tuple(clo.as_tuples())


def unary_polynomial_array(alg: FiniteAlgebra, cap: int = DEFAULT_CAP) -> np.ndarray:
    """Pol_1(A) as an array of shape (|Pol_1|, |A|), cached per algebra."""
    return _cached(
        alg,
        f"_pol1_{cap}",
        lambda: restricted_clone(alg, [(a,) for a in range(alg.size)], cap=cap).rows,
    )


def find_in_closure(
    alg: FiniteAlgebra,
    T: Sequence[Sequence[int]],
    target: Sequence[int],
    cap: int = DEFAULT_CAP,
    engine: str = "auto",
) -> Witness | None:
    """Decide whether ``target`` is the restriction of a polynomial to ``T``.

    Returns a witness whose derivation can be replayed on other points, or
    ``None`` when no polynomial matches.
    """
    dom = normalize_domain(alg, T)
    target = tuple(int(v) for v in target)
    if len(target) != len(dom):
        raise UsageError("target row length differs from the domain size")
    if any(not 0 <= v < alg.size for v in target):
        raise UsageError("target row has entries outside the universe")
    eng = choose_engine(alg, engine)
    ms = monoid_structure(alg)
    if engine == "auto" and ms is not None and ms.group is not None:
        eng = "linear"
    if eng == "linear":
        node, _, deriv = _linear_membership(alg, ms, dom, np.array(target), cap)
        if node is None:
            return None
        return Witness(target, deriv, node)
    store, deriv, _ = _closure_store(alg, dom, cap, eng, target=target)
    pos = store.lookup(target)
    if pos is None:
        return None
    return Witness(target, deriv, store.nodes[pos])
