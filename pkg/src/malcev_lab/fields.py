"""Finite fields GF(q) as explicit addition and multiplication tables.

An element of GF(p^a) is the integer whose base-p digits are the coefficients
of a polynomial of degree < a, constant term least significant. The prime
subfield is therefore {0, .., p-1}, and the element ``p`` is the class of x.
The modulus is the least monic irreducible polynomial of degree a under the
same integer encoding, which gives x^2+x+1 for GF(4), x^3+x+1 for GF(8) and
x^2+1 for GF(9).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import UsageError


def prime_power(q: int) -> tuple[int, int] | None:
    """(p, a) with q = p^a for a prime p, or None."""
    if q < 2:
        return None
    p = next(d for d in range(2, q + 1) if q % d == 0)
    a, r = 0, q
    while r % p == 0:
        r //= p
        a += 1
    return (p, a) if r == 1 else None


def _digits(x: int, p: int, width: int) -> list[int]:
    out = []
    for _ in range(width):
        out.append(x % p)
        x //= p
    return out


def _poly_mod(coeffs: list[int], modulus: list[int], p: int) -> list[int]:
    """Remainder of a coefficient list (constant first) modulo a monic polynomial."""
    c = list(coeffs)
    deg = len(modulus) - 1
    for top in range(len(c) - 1, deg - 1, -1):
        lead = c[top] % p
        if lead:
            for i, m in enumerate(modulus):
                c[top - deg + i] = (c[top - deg + i] - lead * m) % p
    return [v % p for v in c[:deg]] + [0] * max(0, deg - len(c))


def _is_irreducible(modulus: list[int], p: int) -> bool:
    deg = len(modulus) - 1
    # a reducible polynomial has a monic factor of degree <= deg // 2
    for d in range(1, deg // 2 + 1):
        for low in range(p**d):
            factor = _digits(low, p, d) + [1]
            if not any(_poly_mod(modulus, factor, p)):
                return False
    return True


def least_irreducible(p: int, a: int) -> int:
    """Integer code of the least monic irreducible polynomial of degree ``a`` over GF(p)."""
    for low in range(p**a):
        modulus = _digits(low, p, a) + [1]
        if _is_irreducible(modulus, p):
            return low + p**a
    raise AssertionError("irreducible polynomials exist in every degree")


@dataclass(frozen=True, eq=False)
class GaloisField:
    q: int
    p: int
    degree: int
    modulus: int  # integer code of the defining polynomial (1 for prime fields)
    add: np.ndarray
    mul: np.ndarray
    neg: np.ndarray
    inv: np.ndarray  # inv[0] is 0 by convention

    zero = 0
    one = 1

    @property
    def sub(self) -> np.ndarray:
        return self.add[:, self.neg]

    @property
    def generator(self) -> int:
        """The element x (or 1 for a prime field): it generates GF(q) over GF(p)."""
        return self.p if self.degree > 1 else 1

    def prime_subfield(self) -> tuple[int, ...]:
        return tuple(range(self.p))

    def describe_modulus(self) -> str:
        if self.degree == 1:
            return f"GF({self.p})"
        coeffs = _digits(self.modulus, self.p, self.degree + 1)
        terms = []
        for i in range(self.degree, -1, -1):
            c = coeffs[i]
            if not c:
                continue
            mono = "1" if i == 0 else ("x" if i == 1 else f"x^{i}")
            terms.append(mono if c == 1 and i else (str(c) if i == 0 else f"{c}{mono}"))
        return " + ".join(terms)

    def scalar_mul(self, c: int, x: np.ndarray) -> np.ndarray:
        return self.mul[c][x]

    def check_axioms(self) -> bool:
        """Exhaustive field-axiom check on the tables."""
        q, A, M = self.q, self.add, self.mul
        e = np.arange(q)
        if not (np.array_equal(A, A.T) and np.array_equal(M, M.T)):
            return False
        if not (np.array_equal(A[0], e) and np.array_equal(M[1], e)):
            return False
        assoc_add = A[A[:, :, None], e[None, None, :]] == A[e[:, None, None], A[None, :, :]]
        assoc_mul = M[M[:, :, None], e[None, None, :]] == M[e[:, None, None], M[None, :, :]]
        dist = M[e[:, None, None], A[None, :, :]] == A[M[:, :, None], M[:, None, :]]
        if not (assoc_add.all() and assoc_mul.all() and dist.all()):
            return False
        if not np.all(A[e, self.neg] == 0):
            return False
        return bool(np.all(M[e[1:], self.inv[1:]] == 1))


@lru_cache(maxsize=None)
def galois_field(q: int) -> GaloisField:
    pa = prime_power(q)
    if pa is None:
        raise UsageError(f"{q} is not a prime power")
    p, a = pa
    digits = np.array([_digits(x, p, a) for x in range(q)], dtype=np.int64)  # [x, i]
    weights = p ** np.arange(a, dtype=np.int64)
    add = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
    if a == 1:
        modulus = 1
        mul = np.outer(np.arange(q), np.arange(q)) % p
    else:
        modulus = least_irreducible(p, a)
        mod_coeffs = _digits(modulus, p, a + 1)
        mul = np.zeros((q, q), dtype=np.int64)
        for x in range(q):
            for y in range(x, q):
                prod = [0] * (2 * a - 1)
                for i, cx in enumerate(digits[x].tolist()):
                    if cx:
                        for j, cy in enumerate(digits[y].tolist()):
                            prod[i + j] += cx * cy
                r = _poly_mod(prod, mod_coeffs, p)
                mul[x, y] = mul[y, x] = int(np.dot(r, weights))
    add = add.astype(np.int64)
    neg = np.argmax(add == 0, axis=1)
    inv = np.zeros(q, dtype=np.int64)
    inv[1:] = np.argmax(mul[1:] == 1, axis=1)
    for arr in (add, mul, neg, inv):
        arr.setflags(write=False)
    return GaloisField(q, p, a, modulus, add, mul, neg, inv)
