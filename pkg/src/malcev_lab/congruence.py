"""Congruences, congruence lattices and Mal'cev polynomials."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Sequence

import numpy as np

from .algebra import FiniteAlgebra, canonical_labels, first_representatives, is_compatible
from .closure import DEFAULT_CAP, Witness, _cached, find_in_closure, monoid_structure
from .errors import InvalidCongruenceError, UsageError
from .lattice import FiniteLattice, components


@dataclass(frozen=True, order=True)
class Congruence:
    """A partition of {0..n-1} as a canonical (first-occurrence) block vector."""

    blocks: tuple[int, ...]

    def __post_init__(self):
        if canonical_labels(self.blocks) != tuple(self.blocks):
            object.__setattr__(self, "blocks", canonical_labels(self.blocks))

    @classmethod
    def from_labels(cls, labels) -> "Congruence":
        return cls(canonical_labels(np.asarray(labels).tolist()))

    @classmethod
    def identity(cls, n: int) -> "Congruence":
        return cls(tuple(range(n)))

    @classmethod
    def total(cls, n: int) -> "Congruence":
        return cls((0,) * n)

    @classmethod
    def from_classes(cls, n: int, classes: Sequence[Sequence[int]]) -> "Congruence":
        lab = list(range(n))
        for cl in classes:
            cl = list(cl)
            for x in cl:
                lab[x] = cl[0]
        return cls.from_labels(components(n, np.arange(n), np.array(lab)))

    @property
    def size(self) -> int:
        return len(self.blocks)

    @property
    def num_blocks(self) -> int:
        return max(self.blocks) + 1 if self.blocks else 0

    @cached_property
    def array(self) -> np.ndarray:
        arr = np.asarray(self.blocks, dtype=np.int64)
        arr.setflags(write=False)
        return arr

    def relates(self, a: int, b: int) -> bool:
        return self.blocks[a] == self.blocks[b]

    def classes(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.num_blocks)]
        for x, b in enumerate(self.blocks):
            out[b].append(x)
        return tuple(tuple(c) for c in out)

    def class_of(self, a: int) -> tuple[int, ...]:
        b = self.blocks[a]
        return tuple(x for x, c in enumerate(self.blocks) if c == b)

    def leq(self, other: "Congruence") -> bool:
        lab = other.array
        return bool(np.array_equal(lab, lab[first_representatives(self.array)]))

    def join(self, other: "Congruence") -> "Congruence":
        n = self.size
        u = np.concatenate([np.arange(n), np.arange(n)])
        v = np.concatenate([first_representatives(self.array), first_representatives(other.array)])
        return Congruence.from_labels(components(n, u, v))

    def meet(self, other: "Congruence") -> "Congruence":
        return Congruence.from_labels(self.array * (other.num_blocks) + other.array)

    def pairs(self) -> np.ndarray:
        """All related pairs (x, y), sorted."""
        lab = self.array
        x, y = np.nonzero(lab[:, None] == lab[None, :])
        return np.stack([x, y], axis=1)

    def is_identity(self) -> bool:
        return self.num_blocks == self.size

    def is_total(self) -> bool:
        return self.num_blocks <= 1

    def describe(self) -> str:
        return "|".join(",".join(str(x) for x in c) for c in self.classes())


def relation_compose(alpha: Congruence, beta: Congruence) -> np.ndarray:
    """Boolean matrix of alpha o beta = {(x, z) : x alpha y beta z}."""
    a = (alpha.array[:, None] == alpha.array[None, :]).astype(np.int32)
    b = (beta.array[:, None] == beta.array[None, :]).astype(np.int32)
    return (a @ b) > 0


# --------------------------------------------------------------------------
# Generation


def basic_translations(alg: FiniteAlgebra) -> np.ndarray:
    """All maps x -> f(c_1, .., x, .., c_r) for basic f, as rows of an array."""

    def build():
        n = alg.size
        rows = [np.arange(n, dtype=np.int64)]
        for arr in alg.arrays:
            r = arr.ndim
            for pos in range(r):
                moved = np.moveaxis(arr, pos, -1).reshape(-1, n)
                rows.append(moved)
        out = np.unique(np.vstack(rows), axis=0)
        out.setflags(write=False)
        return out

    return _cached(alg, "_translations", build)


def generate_congruence(alg: FiniteAlgebra, pairs: Sequence[tuple[int, int]]) -> Congruence:
    """The least congruence containing the given pairs (closure under basic translations)."""
    n = alg.size
    pairs = [(int(a), int(b)) for a, b in pairs]
    for a, b in pairs:
        if not (0 <= a < n and 0 <= b < n):
            raise UsageError(f"pair ({a}, {b}) outside the universe")
    tr = basic_translations(alg)
    if pairs:
        u = np.array([a for a, _ in pairs])
        v = np.array([b for _, b in pairs])
    else:
        u = v = np.zeros(0, dtype=np.int64)
    lab = components(n, u, v)
    while True:
        movers = np.nonzero(lab != np.arange(n))[0]
        if movers.size == 0:
            break
        eu = tr[:, movers].ravel()
        ev = tr[:, lab[movers]].ravel()
        new = components(n, np.concatenate([np.arange(n), eu]), np.concatenate([lab, ev]))
        if np.array_equal(new, lab):
            break
        lab = new
    return Congruence.from_labels(lab)


def principal_congruence(alg: FiniteAlgebra, a: int, b: int) -> Congruence:
    """Cg(a, b)."""
    return generate_congruence(alg, [(a, b)])


def congruence_from_polynomials(alg: FiniteAlgebra, pairs: Sequence[tuple[int, int]], pol1: np.ndarray) -> Congruence:
    """Equivalence closure of {(p(a), p(b)) : p in Pol_1}; reference route for small algebras."""
    n = alg.size
    u = np.concatenate([pol1[:, a] for a, _ in pairs]) if pairs else np.zeros(0, dtype=np.int64)
    v = np.concatenate([pol1[:, b] for _, b in pairs]) if pairs else np.zeros(0, dtype=np.int64)
    return Congruence.from_labels(components(n, u, v))


def check_congruence(alg: FiniteAlgebra, theta: Congruence) -> Congruence:
    if theta.size != alg.size:
        raise UsageError("partition size does not match the algebra")
    if not is_compatible(alg, theta.blocks):
        raise InvalidCongruenceError(f"partition {theta.describe()} is not a congruence")
    return theta


# --------------------------------------------------------------------------
# Lattice


@dataclass(eq=False)
class CongruenceLattice:
    """Con(A) with elements sorted by decreasing block count, then block vector."""

    alg: FiniteAlgebra
    elements: tuple[Congruence, ...]
    lattice: FiniteLattice

    @property
    def size(self) -> int:
        return len(self.elements)

    @cached_property
    def index(self) -> dict[tuple[int, ...], int]:
        return {c.blocks: i for i, c in enumerate(self.elements)}

    def index_of(self, theta: Congruence | Sequence[int]) -> int:
        blocks = theta.blocks if isinstance(theta, Congruence) else canonical_labels(theta)
        try:
            return self.index[tuple(blocks)]
        except KeyError:
            raise InvalidCongruenceError("partition is not a congruence of this algebra") from None

    def __getitem__(self, i: int) -> Congruence:
        return self.elements[i]

    @property
    def bottom(self) -> int:
        return 0

    @property
    def top(self) -> int:
        return self.size - 1

    def leq(self, i: int, j: int) -> bool:
        return bool(self.lattice.leq[i, j])

    def join(self, i: int, j: int) -> int:
        return int(self.lattice.join[i, j])

    def meet(self, i: int, j: int) -> int:
        return int(self.lattice.meet[i, j])

    @property
    def covers(self) -> tuple[tuple[int, int], ...]:
        return self.lattice.covers

    def class_counts(self, i: int, j: int) -> np.ndarray:
        """For each a: the number of elements_i-classes inside the elements_j-class of a (i <= j)."""
        cache = self.__dict__.setdefault("_class_counts", {})
        if (i, j) not in cache:
            if not self.lattice.leq[i, j]:
                raise UsageError(f"congruence {i} is not below congruence {j}")
            n = self.alg.size
            li, lj = self.elements[i].array, self.elements[j].array
            pairs = np.unique(lj * n + li)
            per_block = np.bincount(pairs // n, minlength=n)
            cache[(i, j)] = per_block[lj]
        return cache[(i, j)]

    def is_modular(self) -> bool:
        return self.lattice.is_modular()


def _principal_table(alg: FiniteAlgebra) -> dict[tuple[int, int], Congruence]:
    n = alg.size
    ms = monoid_structure(alg)
    out: dict[tuple[int, int], Congruence] = {}
    if ms is not None and ms.is_group:
        # Cg(a, b) = Cg(a * b^-1, e) in any expansion of a group
        by_elem = {x: principal_congruence(alg, x, ms.identity) for x in range(n)}
        for a in range(n):
            for b in range(a + 1, n):
                out[(a, b)] = by_elem[int(ms.star[a, ms.inverse[b]])]
        return out
    for a in range(n):
        for b in range(a + 1, n):
            out[(a, b)] = principal_congruence(alg, a, b)
    return out


def congruence_lattice(alg: FiniteAlgebra) -> CongruenceLattice:
    return _cached(alg, "_con_lattice", lambda: _build_lattice(alg))


def principal_index_table(alg: FiniteAlgebra) -> np.ndarray:
    """``P[a, b]`` is the lattice index of Cg(a, b)."""

    def build():
        L = congruence_lattice(alg)
        n = alg.size
        P = np.zeros((n, n), dtype=np.int64)
        for (a, b), c in _principal_table(alg).items():
            P[a, b] = P[b, a] = L.index_of(c)
        P.setflags(write=False)
        return P

    return _cached(alg, "_principal_index", build)


def _build_lattice(alg: FiniteAlgebra) -> CongruenceLattice:
    n = alg.size
    principals = sorted(set(_principal_table(alg).values()))
    found = {Congruence.identity(n)} | set(principals)
    queue = list(principals)
    while queue:
        x = queue.pop()
        for p in principals:
            j = x.join(p)
            if j not in found:
                found.add(j)
                queue.append(j)
    elements = tuple(sorted(found, key=lambda c: (-c.num_blocks, c.blocks)))
    L = len(elements)
    labs = np.array([c.array for c in elements], dtype=np.int64)  # L x n
    reps = np.array([first_representatives(c.array) for c in elements], dtype=np.int64)
    # i <= j iff labels of j are constant on blocks of i
    leq = np.empty((L, L), dtype=bool)
    for i in range(L):
        leq[i] = np.all(labs[:, reps[i]] == labs, axis=1)
    return CongruenceLattice(alg, elements, FiniteLattice(leq, np.arange(L)))


def lattice_queries(L: CongruenceLattice) -> dict:
    lat = L.lattice
    return {
        "size": L.size,
        "congruences": [c.describe() for c in L.elements],
        "covers": [list(c) for c in lat.covers],
        "join_irreducibles": [
            {"element": j, "lower_cover": lat.unique_lower_cover(j)} for j in lat.join_irreducibles()
        ],
        "strictly_meet_irreducibles": [
            {"element": m, "upper_cover": lat.unique_upper_cover(m)} for m in lat.strictly_meet_irreducibles()
        ],
        "height": lat.height(),
        "modular": lat.is_modular(),
    }


def interval(L: CongruenceLattice, alpha: int, beta: int) -> FiniteLattice:
    """I[alpha, beta] as a sublattice whose labels are indices into L."""
    return L.lattice.interval(alpha, beta)


# --------------------------------------------------------------------------
# Mal'cev polynomials


@dataclass(frozen=True)
class MalcevWitness:
    """A ternary polynomial d with d(a,b,b) = d(b,b,a) = a.

    ``pattern`` lists the tuples (a,b,b) and (b,b,a) in the order used by
    ``row``. With ``method="closure"`` the full table of d on A^3 comes from
    re-evaluating the derivation behind the closure row; with
    ``method="group"`` d(x,y,z) = x * y^-1 * z is evaluated from the
    multiplication table.
    """

    pattern: tuple[tuple[int, int, int], ...]
    row: tuple[int, ...]
    method: str
    table: np.ndarray | None = None
    star: np.ndarray | None = None
    inverse: np.ndarray | None = None

    def __call__(self, x, y, z) -> np.ndarray:
        x, y, z = (np.asarray(v, dtype=np.int64) for v in (x, y, z))
        if self.table is not None:
            return self.table[x, y, z]
        return self.star[self.star[x, self.inverse[y]], z]

    def full_table(self) -> np.ndarray:
        if self.table is not None:
            return self.table
        n = self.star.shape[0]
        g = np.indices((n, n, n))
        return self(g[0], g[1], g[2])


def malcev_pattern(n: int) -> tuple[tuple[tuple[int, int, int], ...], tuple[int, ...]]:
    pts: list[tuple[int, int, int]] = []
    vals: list[int] = []
    seen: dict[tuple[int, int, int], int] = {}
    for a, b in product(range(n), repeat=2):
        for t in ((a, b, b), (b, b, a)):
            if t not in seen:
                seen[t] = a
                pts.append(t)
                vals.append(a)
    return tuple(pts), tuple(vals)


def find_malcev_polynomial(alg: FiniteAlgebra, cap: int = DEFAULT_CAP, method: str = "auto") -> MalcevWitness | None:
    """Search Pol_3 restricted to the Mal'cev pattern for the identity-satisfying row.

    On the pattern set every value of a Mal'cev operation is forced, so the
    search is one membership query. ``method="group"`` (used by ``auto`` when
    a basic binary operation is a group multiplication) takes d = x * y^-1 * z
    directly; that operation is a polynomial because y^-1 is a power of y.
    """
    if method not in ("auto", "group", "closure"):
        raise UsageError(f"unknown method {method!r}")
    key = f"_malcev_{method}_{cap}"
    return _cached(alg, key, lambda: _find_malcev(alg, cap, method))


def _find_malcev(alg, cap, method):
    n = alg.size
    pattern, target = malcev_pattern(n)
    ms = monoid_structure(alg)
    if method in ("auto", "group") and ms is not None and ms.is_group:
        return MalcevWitness(pattern, target, "group", star=ms.star, inverse=ms.inverse)
    if method == "group":
        raise UsageError("no basic operation is a group multiplication")
    w = find_in_closure(alg, pattern, target, cap=cap)
    if w is None:
        return None
    grid = np.indices((n, n, n)).reshape(3, -1).T
    table = np.asarray(w.evaluate(grid), dtype=np.int64).reshape(n, n, n)
    table.setflags(write=False)
    return MalcevWitness(pattern, target, "closure", table=table)


def is_malcev_table(table: np.ndarray) -> bool:
    n = table.shape[0]
    a = np.arange(n)[:, None]
    b = np.arange(n)[None, :]
    return bool(np.all(table[a, b, b] == a) and np.all(table[b, b, a] == a))
