"""Finite algebras given by operation tables."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidCongruenceError, UsageError


@dataclass(frozen=True)
class OperationTable:
    """A finitary operation stored as a flat table.

    Entry ``table[i]`` is the value at the argument tuple whose base-``size``
    digits (leftmost argument most significant) spell ``i``.
    """

    name: str
    arity: int
    table: tuple[int, ...]

    def __post_init__(self):
        if self.arity < 0:
            raise UsageError(f"operation {self.name!r}: negative arity")
        object.__setattr__(self, "table", tuple(int(v) for v in self.table))


@dataclass(frozen=True)
class FiniteAlgebra:
    name: str
    size: int
    ops: tuple[OperationTable, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.size < 1:
            raise UsageError("algebra size must be positive")
        object.__setattr__(self, "ops", tuple(self.ops))
        for op in self.ops:
            expected = self.size ** op.arity
            if len(op.table) != expected:
                raise UsageError(
                    f"operation {op.name!r} of arity {op.arity} needs {expected} entries, got {len(op.table)}"
                )
            for v in op.table:
                if not 0 <= v < self.size:
                    raise UsageError(f"operation {op.name!r}: entry {v} outside 0..{self.size - 1}")

    @cached_property
    def arrays(self) -> tuple[np.ndarray, ...]:
        """Operation tables reshaped to ``(size,) * arity`` numpy arrays."""
        out = []
        for op in self.ops:
            arr = np.asarray(op.table, dtype=np.int64).reshape((self.size,) * op.arity)
            arr.setflags(write=False)
            out.append(arr)
        return tuple(out)

    @property
    def universe(self) -> range:
        return range(self.size)

    def op_index(self, name: str) -> int:
        for i, op in enumerate(self.ops):
            if op.name == name:
                return i
        raise UsageError(f"algebra {self.name!r} has no operation {name!r}")

    def signature(self) -> tuple[tuple[str, int], ...]:
        return tuple((op.name, op.arity) for op in self.ops)

    def with_operation(self, op: OperationTable, name: str | None = None) -> "FiniteAlgebra":
        """The expansion A+f by one more table."""
        return FiniteAlgebra(name or f"{self.name}+{op.name}", self.size, self.ops + (op,))


def make_operation(name: str, arity: int, size: int, func) -> OperationTable:
    """Tabulate ``func`` over ``{0..size-1}^arity`` in lexicographic order."""
    if arity == 0:
        return OperationTable(name, 0, (int(func()),))
    grids = np.indices((size,) * arity).reshape(arity, -1)
    values = [int(func(*args)) for args in zip(*grids.tolist())]
    return OperationTable(name, arity, tuple(values))


def evaluate(alg: FiniteAlgebra, op_index: int, args: Sequence[int]) -> int:
    if not 0 <= op_index < len(alg.ops):
        raise UsageError(f"operation index {op_index} out of range")
    op = alg.ops[op_index]
    if len(args) != op.arity:
        raise UsageError(f"operation {op.name!r} has arity {op.arity}, got {len(args)} arguments")
    pos = 0
    for a in args:
        if not 0 <= a < alg.size:
            raise UsageError(f"argument {a} outside the universe")
        pos = pos * alg.size + a
    return op.table[pos]


def canonical_labels(labels: Iterable[int]) -> tuple[int, ...]:
    """Relabel blocks in first-occurrence order."""
    seen: dict[int, int] = {}
    out = []
    for x in labels:
        x = int(x)
        if x not in seen:
            seen[x] = len(seen)
        out.append(seen[x])
    return tuple(out)


def is_compatible(alg: FiniteAlgebra, labels: Sequence[int]) -> bool:
    """Exhaustive compatibility test of a partition (given by block labels)."""
    lab = np.asarray(labels, dtype=np.int64)
    n = alg.size
    reps = first_representatives(lab)
    movers = np.nonzero(reps != np.arange(n))[0]
    if movers.size == 0:
        return True
    for arr in alg.arrays:
        r = arr.ndim
        for pos in range(r):
            moved = np.moveaxis(arr, pos, 0).reshape(n, -1)
            if not np.array_equal(lab[moved[movers]], lab[moved[reps[movers]]]):
                return False
    return True


def first_representatives(lab: np.ndarray) -> np.ndarray:
    """For each element, the least element of its block."""
    lab = np.asarray(lab)
    n = lab.shape[0]
    first = {}
    out = np.empty(n, dtype=np.int64)
    for i, b in enumerate(lab.tolist()):
        out[i] = first.setdefault(b, i)
    return out


def quotient_algebra(alg: FiniteAlgebra, theta) -> tuple[FiniteAlgebra, tuple[int, ...]]:
    """A/theta together with the canonical surjection A -> A/theta.

    ``theta`` is a Congruence or a block-label sequence. Classes are numbered
    in first-occurrence order, so the surjection is the canonical label vector.
    """
    labels = canonical_labels(getattr(theta, "blocks", theta))
    if len(labels) != alg.size:
        raise UsageError("partition size does not match the algebra")
    if not is_compatible(alg, labels):
        raise InvalidCongruenceError("partition is not compatible with the operations")
    lab = np.asarray(labels, dtype=np.int64)
    k = int(lab.max()) + 1
    reps = np.array([labels.index(c) for c in range(k)], dtype=np.int64)
    ops = []
    for op, arr in zip(alg.ops, alg.arrays):
        if op.arity == 0:
            ops.append(OperationTable(op.name, 0, (int(lab[arr[()]]),)))
            continue
        sub = arr[np.ix_(*([reps] * op.arity))]
        ops.append(OperationTable(op.name, op.arity, tuple(lab[sub].ravel().tolist())))
    return FiniteAlgebra(f"{alg.name}/theta", k, tuple(ops)), labels
