"""The M_n(D)-modules D^(n x m) over finite fields, as finite algebras.

Encoding: an n x m matrix over GF(q) is the integer whose base-q digits are
its entries read row by row, the (1,1) entry most significant. A row vector
of length m is encoded the same way, so a matrix code is the concatenation
of its row codes. Indices in constructor helpers are 1-based, as in the usual
matrix notation; E(i, j) is the matrix unit of D^(n x m), E_col(a, j) is the
matrix whose j-th column is the vector a.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product

import numpy as np

from .algebra import FiniteAlgebra, OperationTable
from .errors import ResourceError, UsageError
from .fields import GaloisField, galois_field
from .partial import PartialFunction

UNIVERSE_BOUND = 4096


@dataclass(frozen=True)
class MatrixModuleSpec:
    q: int
    n: int
    m: int

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise UsageError("n and m must be positive")
        galois_field(self.q)  # validates q

    @property
    def field(self) -> GaloisField:
        return galois_field(self.q)

    @property
    def size(self) -> int:
        return self.q ** (self.n * self.m)

    @property
    def name(self) -> str:
        return f"GF{self.q}^({self.n}x{self.m})"

    @cached_property
    def weights(self) -> np.ndarray:
        return self.q ** np.arange(self.n * self.m - 1, -1, -1, dtype=np.int64)

    def encode(self, matrix) -> int:
        a = np.asarray(matrix, dtype=np.int64).reshape(self.n * self.m)
        if np.any((a < 0) | (a >= self.q)):
            raise UsageError("matrix entries must be field elements")
        return int(a @ self.weights)

    def decode(self, code: int) -> np.ndarray:
        if not 0 <= code < self.size:
            raise UsageError(f"code {code} outside 0..{self.size - 1}")
        return self.decode_all(np.array([code]))[0]

    def decode_all(self, codes: np.ndarray) -> np.ndarray:
        """Array of shape (len(codes), n, m)."""
        codes = np.asarray(codes, dtype=np.int64)
        digits = (codes[:, None] // self.weights[None, :]) % self.q
        return digits.reshape(-1, self.n, self.m)

    def encode_all(self, mats: np.ndarray) -> np.ndarray:
        mats = np.asarray(mats, dtype=np.int64).reshape(-1, self.n * self.m)
        return mats @ self.weights

    # --- constructors -------------------------------------------------------

    def zero(self) -> int:
        return 0

    def E(self, i: int, j: int, c: int = 1) -> int:
        """c times the matrix unit with a 1 at (i, j)."""
        M = np.zeros((self.n, self.m), dtype=np.int64)
        M[i - 1, j - 1] = c
        return self.encode(M)

    def E_col(self, a, j: int) -> int:
        """The matrix whose j-th column is the vector a."""
        M = np.zeros((self.n, self.m), dtype=np.int64)
        M[:, j - 1] = np.asarray(a, dtype=np.int64)
        return self.encode(M)

    def ones(self, c: int = 1) -> np.ndarray:
        """c times the all-ones vector of length n."""
        return np.full(self.n, c, dtype=np.int64)

    def add(self, x: int, y: int) -> int:
        F = self.field
        return self.encode(F.add[self.decode(x), self.decode(y)])

    def scale(self, c: int, x: int) -> int:
        return self.encode(self.field.mul[c][self.decode(x)])

    def left_mul(self, R, x: int) -> int:
        """R . X for an n x n matrix R over the field."""
        return int(self.left_mul_all(np.asarray(R), np.array([x]))[0])

    def left_mul_all(self, R: np.ndarray, codes: np.ndarray) -> np.ndarray:
        F = self.field
        X = self.decode_all(codes)
        R = np.asarray(R, dtype=np.int64).reshape(self.n, self.n)
        out = np.zeros_like(X)
        for i in range(self.n):
            for l in range(self.n):
                out[:, i, :] = F.add[out[:, i, :], F.mul[R[i, l]][X[:, l, :]]]
        return self.encode_all(out)


def build_module_algebra(spec: MatrixModuleSpec, bound: int = UNIVERSE_BOUND) -> FiniteAlgebra:
    """D^(n x m) with +, -, left multiplication by each matrix unit, and by x.I for extension fields."""
    N = spec.size
    if N > bound:
        raise ResourceError(f"universe {spec.name} has {N} elements, above the bound {bound}", cap=bound)
    F = spec.field
    X = spec.decode_all(np.arange(N))
    flat = X.reshape(N, -1)
    plus = F.add[flat[:, None, :], flat[None, :, :]].reshape(N * N, -1) @ spec.weights
    minus = F.add[flat[:, None, :], F.neg[flat][None, :, :]].reshape(N * N, -1) @ spec.weights
    ops = [OperationTable("+", 2, tuple(plus.tolist())), OperationTable("-", 2, tuple(minus.tolist()))]
    for i in range(1, spec.n + 1):
        for j in range(1, spec.n + 1):
            out = np.zeros_like(X)
            out[:, i - 1, :] = X[:, j - 1, :]
            ops.append(OperationTable(f"M{i}{j}" if spec.n < 10 else f"M{i}_{j}", 1, tuple(spec.encode_all(out).tolist())))
    if F.degree > 1:
        scaled = F.mul[F.generator][X]
        ops.append(OperationTable("xi", 1, tuple(spec.encode_all(scaled).tolist())))
    return FiniteAlgebra(spec.name, N, tuple(ops))


def module_algebra(q: int, n: int, m: int) -> FiniteAlgebra:
    return build_module_algebra(MatrixModuleSpec(q, n, m))


# --------------------------------------------------------------------------
# Classification


def decide_module_richness(q: int, n: int, m: int, k: int) -> bool:
    """Is the M_n(GF(q))-module GF(q)^(n x m) strictly k-polynomially rich?"""
    galois_field(q)
    if min(n, m, k) < 1:
        raise UsageError("n, m and k must be positive")
    return (
        (q in (2, 3, 5) and n == 1 and k == 1)
        or (m == 1 and q == 2 and n in (2, 3) and k == 1)
        or (m == 1 and q == 3 and n == 2 and k == 1)
        or (m == 1 and q == 2 and n == 1 and k in (2, 3))
        or (m == 1 and q == 3 and n == 1 and k == 2)
    )


def counterexample_case(q: int, n: int, m: int, k: int) -> int:
    """Which of the eight non-richness constructions applies (per the q = 2, 3, 5 tables)."""
    if decide_module_richness(q, n, m, k):
        raise UsageError(f"GF({q})^({n}x{m}) is strictly {k}-polynomially rich; no counterexample exists")
    if q not in (2, 3, 5):
        return 1
    if q == 5:
        return 1 if n >= 2 else 8
    if q == 3:
        if n >= 3:
            return 1
        if n == 2:
            return 2 if m >= 2 else 4
        return 5 if m >= 2 else 7
    if n >= 4:
        return 1
    if n in (2, 3):
        if m >= 2:
            return 2 if n == 2 else 3
        return 4
    return 5 if m >= 2 else 6


def case1_b(F: GaloisField, n: int) -> int:
    """The field element b used by the first construction."""
    if F.degree > 1:
        return F.p  # least element outside the prime subfield
    if F.q == 2:
        return 1
    if F.q == 3:
        return 2
    if F.q == 5:
        return 4
    return F.p - 2


@dataclass(frozen=True)
class ModuleCounterexample:
    case_id: int
    spec: MatrixModuleSpec
    k: int
    function: PartialFunction
    lifted_from: int  # arity of the construction before zero padding
    b: int | None = None
    notes: tuple[str, ...] = ()


def _pad(points: list[tuple[int, ...]], k: int) -> list[tuple[int, ...]]:
    return [tuple(p) + (0,) * (k - len(p)) for p in points]


def counterexample_function(q: int, n: int, m: int, k: int) -> ModuleCounterexample:
    """The type-preserving, non-interpolable partial function of the applicable case.

    Constructions defined for a smaller arity k0 (cases 1, 2, 3 with k0 = 1,
    case 5 with k0 = 2) are lifted to arity k by padding every domain tuple
    with zeros; a polynomial interpolating the lift would give one of arity
    k0 by fixing the extra arguments at 0.
    """
    case = counterexample_case(q, n, m, k)
    spec = MatrixModuleSpec(q, n, m)
    F = spec.field
    b = None
    notes: tuple[str, ...] = ()
    if case == 1:
        b = case1_b(F, n)
        Eb = spec.E_col(spec.ones(b), 1)
        pts = [(0,)] + [(spec.E(i, 1),) for i in range(1, n + 1)] + [(Eb,)]
        vals = [0] * (n + 1) + [Eb]
        k0 = 1
    elif case == 2 and q == 3:
        # Over GF(3) the function 0, E11, E22 -> 0, E^1+E^2 -> E^1+E^2 is not
        # type-preserving: with W = span(1, 2, 0, ..) the submodule A avoids
        # T' but contains 2 E11 + 2 E22 - (E^1+E^2). This domain works instead:
        # R E22 = 0 kills the second column of R, so R (E12 + E21) = E21 is
        # impossible.
        pts = [(0,), (spec.E(2, 2),), (spec.add(spec.E(1, 2), spec.E(2, 1)),)]
        vals = [0, 0, spec.E(2, 1)]
        k0 = 1
        notes = ("GF(3) replacement domain {0, E22, E12 + E21}; the two-row domain is not type-preserving here",)
    elif case in (2, 3):
        both = spec.add(spec.E_col(spec.ones(), 1), spec.E_col(spec.ones(), 2))
        if case == 2:
            mids = [spec.E(1, 1), spec.E(2, 2)]
        else:
            mids = [spec.E(1, 1), spec.E(2, 1), spec.E(3, 2)]
        pts = [(0,)] + [(x,) for x in mids] + [(both,)]
        vals = [0] * (len(mids) + 1) + [both]
        k0 = 1
    elif case == 4:
        # tuples of column vectors: one coordinate a unit vector, the rest zero
        pts = [(0,) * k]
        for j in range(k):
            for i in range(1, n + 1):
                t = [0] * k
                t[j] = spec.E(i, 1)
                pts.append(tuple(t))
        one = spec.E_col(spec.ones(), 1)
        pts.append((one,) * k)
        vals = [0] * (len(pts) - 1) + [one]
        k0 = k
    elif case == 5:
        t1, t2 = spec.E(1, 1), spec.E(1, 2)
        pts = [(0, 0), (t1, 0), (t2, t1)]
        vals = [0, 0, t2]
        k0 = 2
    else:
        c = {6: 1, 7: 2, 8: 4}[case]
        e = spec.E(1, 1)
        pts = [(0,) * k]
        for j in range(k):
            t = [0] * k
            t[j] = e
            pts.append(tuple(t))
        ce = spec.E(1, 1, c)
        pts.append((ce,) * k)
        vals = [0] * (len(pts) - 1) + [ce]
        k0 = k
    pts = _pad(pts, k)
    f = PartialFunction(k, tuple(pts), tuple(vals))
    if k0 < k:
        notes += (f"lifted from arity {k0} by padding with zeros",)
    return ModuleCounterexample(case, spec, k, f, k0, b, notes)


# --------------------------------------------------------------------------
# Submodules


def subspaces(F: GaloisField, m: int) -> tuple[np.ndarray, ...]:
    """All subspaces of GF(q)^m as boolean masks over row-vector codes, by dimension then codes."""
    q = F.q
    N = q**m
    w = q ** np.arange(m - 1, -1, -1, dtype=np.int64)
    vecs = (np.arange(N)[:, None] // w[None, :]) % q

    def span_with(mask: np.ndarray, v: int) -> np.ndarray:
        members = vecs[mask]
        out = np.zeros(N, dtype=bool)
        for c in range(q):
            sv = F.mul[c][vecs[v]]
            out[F.add[members, sv[None, :]] @ w] = True
        return out

    zero = np.zeros(N, dtype=bool)
    zero[0] = True
    found = {zero.tobytes(): zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for mask in frontier:
            for v in range(1, N):
                if mask[v]:
                    continue
                s = span_with(mask, v)
                key = s.tobytes()
                if key not in found:
                    found[key] = s
                    nxt.append(s)
        frontier = nxt
    masks = list(found.values())
    masks.sort(key=lambda s: (int(s.sum()), tuple(np.nonzero(s)[0].tolist())))
    return tuple(masks)


def submodule_count(q: int, n: int, m: int) -> int:
    """Number of M_n(GF(q))-submodules of GF(q)^(n x m): they correspond to subspaces of GF(q)^m."""
    return len(subspaces(galois_field(q), m))


__all__ = [
    "MatrixModuleSpec",
    "build_module_algebra",
    "module_algebra",
    "decide_module_richness",
    "counterexample_case",
    "counterexample_function",
    "ModuleCounterexample",
    "case1_b",
    "subspaces",
    "submodule_count",
    "UNIVERSE_BOUND",
]
