"""Finite lattices stored extensionally by their order matrix."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import UsageError


def components(n: int, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Labels of the connected components of a graph, each labelled by its least vertex."""
    u = np.asarray(u, dtype=np.int64).ravel()
    v = np.asarray(v, dtype=np.int64).ravel()
    g = coo_matrix((np.ones(u.size, dtype=np.int8), (u, v)), shape=(n, n))
    _, lab = connected_components(g, directed=False)
    least = np.full(lab.max() + 1 if n else 0, n, dtype=np.int64)
    np.minimum.at(least, lab, np.arange(n))
    return least[lab]


@dataclass(eq=False)
class FiniteLattice:
    """A finite lattice whose elements 0..L-1 are listed in a linear extension of <=.

    ``labels`` maps local indices to indices of an ambient lattice (identity
    for a top-level lattice), so interval sublattices can report results in
    the coordinates of the lattice they were cut from.
    """

    leq: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        self.leq = np.asarray(self.leq, dtype=bool)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        L = self.leq.shape[0]
        if L == 0:
            raise UsageError("a lattice needs at least one element")
        # linear extension: i <= j implies i comes first
        if np.any(np.tril(self.leq, -1)):
            raise UsageError("elements are not listed in a linear extension of the order")

    @property
    def size(self) -> int:
        return int(self.leq.shape[0])

    bottom = 0

    @property
    def top(self) -> int:
        return self.size - 1

    @cached_property
    def join(self) -> np.ndarray:
        L = self.size
        out = np.empty((L, L), dtype=np.int64)
        for i in range(L):
            ub = self.leq[i][None, :] & self.leq  # row j: common upper bounds of i and j
            out[i] = np.argmax(ub, axis=1)
        return out

    @cached_property
    def meet(self) -> np.ndarray:
        L = self.size
        out = np.empty((L, L), dtype=np.int64)
        geq = self.leq.T
        for i in range(L):
            lb = geq[i][None, :] & geq
            out[i] = L - 1 - np.argmax(lb[:, ::-1], axis=1)
        return out

    @cached_property
    def covers_matrix(self) -> np.ndarray:
        strict = self.leq & ~np.eye(self.size, dtype=bool)
        s = strict.astype(np.int32)
        return strict & ~((s @ s) > 0)

    @cached_property
    def covers(self) -> tuple[tuple[int, int], ...]:
        i, j = np.nonzero(self.covers_matrix)
        return tuple(sorted(zip(i.tolist(), j.tolist())))

    def upper_covers(self, i: int) -> tuple[int, ...]:
        return tuple(np.nonzero(self.covers_matrix[i])[0].tolist())

    def lower_covers(self, i: int) -> tuple[int, ...]:
        return tuple(np.nonzero(self.covers_matrix[:, i])[0].tolist())

    def join_irreducibles(self) -> tuple[int, ...]:
        """Elements with exactly one lower cover."""
        cnt = self.covers_matrix.sum(axis=0)
        return tuple(np.nonzero(cnt == 1)[0].tolist())

    def strictly_meet_irreducibles(self) -> tuple[int, ...]:
        """Elements with exactly one upper cover."""
        cnt = self.covers_matrix.sum(axis=1)
        return tuple(np.nonzero(cnt == 1)[0].tolist())

    def unique_upper_cover(self, i: int) -> int:
        ups = self.upper_covers(i)
        if len(ups) != 1:
            raise UsageError(f"element {i} has {len(ups)} upper covers")
        return ups[0]

    def unique_lower_cover(self, i: int) -> int:
        downs = self.lower_covers(i)
        if len(downs) != 1:
            raise UsageError(f"element {i} has {len(downs)} lower covers")
        return downs[0]

    @cached_property
    def rank(self) -> np.ndarray:
        """Length of the longest chain from the bottom to each element."""
        r = np.zeros(self.size, dtype=np.int64)
        cov = self.covers_matrix
        for j in range(self.size):
            below = np.nonzero(cov[:, j])[0]
            if below.size:
                r[j] = r[below].max() + 1
        return r

    def height(self, i: int | None = None, j: int | None = None) -> int:
        """Length of the longest chain in the interval [i, j] (whole lattice by default)."""
        i = self.bottom if i is None else i
        j = self.top if j is None else j
        if not self.leq[i, j]:
            raise UsageError(f"element {i} is not below element {j}")
        inside = self.leq[i] & self.leq[:, j]
        idx = np.nonzero(inside)[0]
        best = {int(idx[0]): 0}
        cov = self.covers_matrix
        for v in idx[1:].tolist():
            preds = [int(u) for u in np.nonzero(cov[:, v] & inside)[0]]
            best[v] = max(best[u] for u in preds) + 1
        return best[j]

    def interval(self, i: int, j: int) -> "FiniteLattice":
        if not self.leq[i, j]:
            raise UsageError(f"element {i} is not below element {j}")
        idx = np.nonzero(self.leq[i] & self.leq[:, j])[0]
        return FiniteLattice(self.leq[np.ix_(idx, idx)], self.labels[idx])

    def local(self, label: int) -> int:
        """Local index of an ambient label."""
        hits = np.nonzero(self.labels == label)[0]
        if hits.size == 0:
            raise UsageError(f"element {label} is not in this lattice")
        return int(hits[0])

    # --- structural predicates ------------------------------------------------

    def is_modular(self) -> bool:
        """x <= z implies x v (y ^ z) = (x v y) ^ z."""
        J, M, leq = self.join, self.meet, self.leq
        for x in range(self.size):
            zs = np.nonzero(leq[x])[0]
            lhs = J[x][M[:, zs]]  # [y, z]
            rhs = M[J[x]][:, zs]
            if not np.array_equal(lhs, rhs):
                return False
        return True

    def is_complemented(self) -> bool:
        J, M = self.join, self.meet
        ok = (J == self.top) & (M == self.bottom)
        return bool(ok.any(axis=1).all())

    @cached_property
    def transposes_up(self) -> np.ndarray:
        """``T[c, d]`` is true when cover c transposes up onto cover d.

        For covers c = (a, b) and d = (g, h): b v g = h and b ^ g = a.
        """
        cov = np.array(self.covers, dtype=np.int64).reshape(-1, 2)
        a, b = cov[:, 0], cov[:, 1]
        g, h = cov[:, 0], cov[:, 1]
        J = self.join[np.ix_(b, g)]
        M = self.meet[np.ix_(b, g)]
        return (J == h[None, :]) & (M == a[:, None])

    @cached_property
    def projectivity_labels(self) -> np.ndarray:
        """Projectivity class of each cover (index into ``covers``), labelled by least member."""
        T = self.transposes_up
        u, v = np.nonzero(T)
        return components(len(self.covers), u, v)

    def projectivity_classes(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        lab = self.projectivity_labels
        classes: dict[int, list[tuple[int, int]]] = {}
        for c, l in zip(self.covers, lab.tolist()):
            classes.setdefault(l, []).append(c)
        return tuple(tuple(v) for _, v in sorted(classes.items()))

    def is_simple(self) -> bool:
        """Simple as a lattice: the only lattice congruences are the trivial ones."""
        L = self.size
        if L <= 2:
            return True
        if self.is_modular():
            # in a finite modular lattice, collapsing a prime interval collapses
            # exactly its projectivity class
            return len(set(self.projectivity_labels.tolist())) == 1
        for a, b in self.covers:
            lab = self.lattice_congruence(a, b)
            if np.any(lab != 0):
                return False
        return True

    def lattice_congruence(self, a: int, b: int) -> np.ndarray:
        """Block labels (least member) of the lattice congruence generated by (a, b)."""
        L = self.size
        lab = components(L, np.array([a]), np.array([b]))
        J, M = self.join, self.meet
        while True:
            movers = np.nonzero(lab != np.arange(L))[0]
            reps = lab[movers]
            us = [np.arange(L), J[movers].ravel(), M[movers].ravel()]
            vs = [lab, J[reps].ravel(), M[reps].ravel()]
            new = components(L, np.concatenate(us), np.concatenate(vs))
            if np.array_equal(new, lab):
                return lab
            lab = new

    def is_simple_complemented_modular(self) -> bool:
        return self.is_modular() and self.is_complemented() and self.is_simple()
