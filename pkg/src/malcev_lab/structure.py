"""Projectivity, homogeneous series, (SC1), completeness types and the hereditary richness decisions."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import FiniteAlgebra
from .commutator import (
    LocalModuleError,
    centralizer_index,
    commutator_index,
    cover_subtype,
    cover_type,
    require_malcev,
)
from .congruence import Congruence, CongruenceLattice, congruence_lattice, principal_index_table
from .errors import ResourceError, UsageError
from .lattice import FiniteLattice
from .partial import PartialFunction

SERIES_CAP = 10_000


# --------------------------------------------------------------------------
# Projectivity and homogeneity


def _lattice(L: CongruenceLattice | FiniteLattice) -> FiniteLattice:
    return L.lattice if isinstance(L, CongruenceLattice) else L


def projective_prime_classes(L: CongruenceLattice | FiniteLattice) -> tuple[tuple[tuple[int, int], ...], ...]:
    """Prime intervals grouped into projectivity classes, each class sorted, classes by least member.

    Indices are those of ``L`` (ambient labels for interval sublattices).
    """
    lat = _lattice(L)
    lab = lat.labels
    return tuple(tuple((int(lab[a]), int(lab[b])) for a, b in cls) for cls in lat.projectivity_classes())


def is_homogeneous(L: CongruenceLattice | FiniteLattice, mu: int) -> bool:
    """Homogeneity of ``mu`` (an index of ``L``; an ambient label when ``L`` is an interval sublattice)."""
    lat = _lattice(L)
    m = lat.local(mu) if isinstance(L, FiniteLattice) else mu
    if m == lat.bottom:
        return False
    proj = lat.projectivity_labels
    leq = lat.leq
    below = {int(proj[i]) for i, (a, b) in enumerate(lat.covers) if leq[b, m]}
    if len(below) != 1:
        return False
    above = {int(proj[i]) for i, (a, b) in enumerate(lat.covers) if leq[m, a]}
    return not (below & above)


def homogeneous_elements(L: CongruenceLattice | FiniteLattice) -> tuple[int, ...]:
    lat = _lattice(L)
    return tuple(int(lat.labels[i]) for i in range(lat.size) if is_homogeneous(lat, int(lat.labels[i])))


def phi_and_star(L: CongruenceLattice, mu: int) -> tuple[int, int]:
    """(Phi(mu), mu*): mu met with all its lower covers, and the join of everything meeting mu in 0."""
    phi = mu
    for c in L.lattice.lower_covers(mu):
        phi = L.meet(phi, c)
    star = L.bottom
    for a in range(L.size):
        if L.meet(a, mu) == L.bottom:
            star = L.join(star, a)
    return phi, star


@dataclass(frozen=True)
class HomogeneousSeries:
    chain: tuple[int, ...]  # lattice indices, 0 first and top last

    def quotients(self) -> tuple[tuple[int, int], ...]:
        return tuple(zip(self.chain[:-1], self.chain[1:]))


@dataclass(frozen=True)
class SeriesResult:
    series: tuple[HomogeneousSeries, ...]
    diagnostic: str | None = None


def homogeneous_series(alg: FiniteAlgebra, cap: int = SERIES_CAP) -> SeriesResult:
    """All homogeneous series of Con(alg), in lexicographic order of their index chains.

    Each element is homogeneous in the interval above its predecessor. If the
    algebra fails (SC1) the result is empty with a diagnostic.
    """
    sc1 = check_sc1(alg)
    if not sc1.holds:
        return SeriesResult((), "the algebra does not satisfy (SC1)")
    L = congruence_lattice(alg)
    if L.size == 1:
        return SeriesResult((HomogeneousSeries((0,)),))
    if not L.is_modular():
        return SeriesResult((), "the congruence lattice is not modular")
    out: list[HomogeneousSeries] = []

    def walk(chain: list[int]):
        last = chain[-1]
        if last == L.top:
            if len(out) >= cap:
                raise ResourceError(f"more than {cap} homogeneous series", cap=cap)
            out.append(HomogeneousSeries(tuple(chain)))
            return
        sub = L.lattice.interval(last, L.top)
        for mu in homogeneous_elements(sub):
            walk(chain + [mu])

    walk([L.bottom])
    return SeriesResult(tuple(out))


# --------------------------------------------------------------------------
# (SC1)


@dataclass(frozen=True)
class SC1Report:
    holds: bool
    violations: tuple[tuple[int, int, int], ...]  # (mu, mu+, (mu : mu+))
    failure_pairs: tuple[tuple[int, int], ...]  # join irreducible (alpha, beta)

    @property
    def agree(self) -> bool:
        return (not self.violations) == (not self.failure_pairs)


def check_sc1(alg: FiniteAlgebra) -> SC1Report:
    """(SC1) via strictly meet irreducible congruences, and independently via failure pairs."""
    require_malcev(alg)
    L = congruence_lattice(alg)
    lat = L.lattice
    violations = []
    for mu in lat.strictly_meet_irreducibles():
        plus = lat.unique_upper_cover(mu)
        c = centralizer_index(L, mu, plus)
        if not L.leq(c, plus):
            violations.append((mu, plus, c))
    pairs = []
    jis = lat.join_irreducibles()
    for a in jis:
        am = lat.unique_lower_cover(a)
        for b in jis:
            bm = lat.unique_lower_cover(b)
            if L.leq(a, bm) and L.leq(commutator_index(L, a, b), am):
                pairs.append((a, b))
    return SC1Report(not violations, tuple(violations), tuple(pairs))


@dataclass(frozen=True)
class SC1Witness:
    function: PartialFunction
    a: int
    o: int
    b: int
    failure: tuple[int, int]


def sc1_failure_witness(alg: FiniteAlgebra, failure: tuple[int, int], a: int, o: int, b: int) -> SC1Witness:
    """The partial function {a, o, b} -> o, d(a, o, b) -> a for a failure (alpha, beta) with
    Cg(o, a) = alpha and Cg(o, b) = beta."""
    d = require_malcev(alg)
    L = congruence_lattice(alg)
    al, be = failure
    P = principal_index_table(alg)
    if (al, be) not in check_sc1(alg).failure_pairs:
        raise UsageError(f"({L[al].describe()}, {L[be].describe()}) is not a failure of (SC1)")
    if P[o, a] != al or P[o, b] != be:
        raise UsageError("the elements do not generate the failure pair: need Cg(o, a) = alpha and Cg(o, b) = beta")
    t = int(d(np.array([a]), np.array([o]), np.array([b]))[0])
    pairs = {a: o, o: o, b: o}
    if t in pairs and pairs[t] != a:
        raise UsageError("d(a, o, b) coincides with a point mapped to o")
    pairs[t] = a
    pts = sorted(pairs)
    f = PartialFunction(1, tuple((x,) for x in pts), tuple(pairs[x] for x in pts))
    return SC1Witness(f, a, o, b, failure)


def failure_witness_triples(alg: FiniteAlgebra, failure: tuple[int, int]) -> list[tuple[int, int, int]]:
    """All (a, o, b) with Cg(o, a) = alpha and Cg(o, b) = beta, lexicographically by (a, o, b)."""
    P = principal_index_table(alg)
    al, be = failure
    out = []
    for o in range(alg.size):
        As = np.nonzero(P[o] == al)[0]
        Bs = np.nonzero(P[o] == be)[0]
        out.extend((int(x), o, int(y)) for x in As for y in Bs)
    return sorted(out)


# --------------------------------------------------------------------------
# Completeness types


def is_abp_interval(L: CongruenceLattice, lo: int, hi: int, p: int) -> bool:
    """(A/lo, hi/lo) has (ABp): every abelian prime quotient inside I[lo, hi] has class counts in {1, p}."""
    for a, b in L.covers:
        if not (L.leq(lo, a) and L.leq(b, hi)):
            continue
        if not L.leq(commutator_index(L, b, b), a):
            continue
        counts = L.class_counts(a, b)
        if not np.all((counts == 1) | (counts == p)):
            return False
    return True


@dataclass(frozen=True)
class QuotientCT:
    lower: int
    upper: int
    type: int
    subtype: int | None
    n: int | None
    height: int
    class_sizes: tuple[int, ...]
    ab: tuple[int, ...]  # primes p in {2, 3, 5} for which (ABp) holds
    ct1: bool
    ct2: bool
    ct3: bool
    clauses: tuple[str, ...]
    notes: tuple[str, ...] = ()


@dataclass(frozen=True)
class CTReport:
    series: HomogeneousSeries
    quotients: tuple[QuotientCT, ...]

    def holds(self, k: int) -> bool:
        return all((q.ct1, q.ct2, q.ct3)[k - 1] for q in self.quotients)


def _classify_quotient(alg: FiniteAlgebra, L: CongruenceLattice, lo: int, hi: int) -> QuotientCT:
    m = L.lattice.height(lo, hi)
    sizes = tuple(sorted(set(L.class_counts(lo, hi).tolist())))
    ab = tuple(p for p in (2, 3, 5) if is_abp_interval(L, lo, hi, p))
    if not L.leq(commutator_index(L, hi, hi), lo):
        return QuotientCT(lo, hi, 3, None, None, m, sizes, ab, True, True, True, ("1a", "2a", "3a"))
    notes: list[str] = []
    try:
        q, n, _h = cover_subtype(alg, L[lo], L[hi])
    except LocalModuleError as e:
        notes.append(f"subtype undefined: {e}")
        return QuotientCT(lo, hi, 2, None, None, m, sizes, ab, False, False, False, (), tuple(notes))
    clauses = []
    if q == 2 and m == 1 and set(sizes) <= {1, 2, 4, 8}:
        clauses.append("1b")
    if q == 3 and m == 1 and set(sizes) <= {1, 3, 9}:
        clauses.append("1c")
    if q in (2, 3, 5) and q in ab:
        clauses.append("1d")
    if q in (2, 3) and m == 1 and q in ab:
        clauses.append("2b")
    if q == 2 and m == 1 and 2 in ab:
        clauses.append("3b")
    ct1 = any(c.startswith("1") for c in clauses)
    ct2 = "2b" in clauses
    ct3 = "3b" in clauses
    return QuotientCT(lo, hi, 2, q, n, m, sizes, ab, ct1, ct2, ct3, tuple(clauses), tuple(notes))


def classify_ct(alg: FiniteAlgebra, series: HomogeneousSeries) -> CTReport:
    require_malcev(alg)
    L = congruence_lattice(alg)
    chain = series.chain
    if chain[0] != L.bottom or chain[-1] != L.top:
        raise UsageError("a series runs from the bottom to the top congruence")
    for lo, hi in series.quotients():
        if not (L.leq(lo, hi) and lo != hi):
            raise UsageError("series elements must be strictly increasing")
        if not L.lattice.interval(lo, hi).is_simple_complemented_modular():
            raise UsageError(f"I[{L[lo].describe()}, {L[hi].describe()}] is not simple complemented modular")
    return CTReport(series, tuple(_classify_quotient(alg, L, lo, hi) for lo, hi in series.quotients()))


# --------------------------------------------------------------------------
# Decisions


def is_congruence_regular(alg: FiniteAlgebra) -> bool:
    """a/alpha = a/beta for some a forces alpha = beta."""
    L = congruence_lattice(alg)
    labels = np.array([c.array for c in L.elements])  # (congruences, elements)
    for a in range(alg.size):
        classes = labels == labels[:, a : a + 1]
        if len({row.tobytes() for row in classes}) != L.size:
            return False
    return True


def is_congruence_neutral(alg: FiniteAlgebra) -> bool:
    """[alpha, beta] = alpha ^ beta for all congruences."""
    require_malcev(alg)
    L = congruence_lattice(alg)
    return all(commutator_index(L, i, j) == L.meet(i, j) for i in range(L.size) for j in range(i, L.size))


@dataclass(frozen=True)
class Decision:
    verdict: str  # "yes", "no" or "unsupported"
    basis: str
    k: int
    details: dict = field(default_factory=dict)


def decide_hereditary_richness(alg: FiniteAlgebra, k: int) -> Decision:
    """Is every homomorphic image of ``alg`` strictly k-polynomially rich?"""
    if k < 1:
        raise UsageError("k must be positive")
    require_malcev(alg)
    if k >= 4:
        neutral = is_congruence_neutral(alg)
        return Decision("yes" if neutral else "no", "k >= 4: congruence neutrality", k, {"congruence_neutral": neutral})
    if k == 1 and not is_congruence_regular(alg):
        return Decision("unsupported", "k = 1 needs a congruence regular algebra", k, {"congruence_regular": False})
    sc1 = check_sc1(alg)
    if not sc1.holds:
        return Decision("no", "(SC1) fails", k, {"sc1": False})
    res = homogeneous_series(alg)
    failing = []
    for s in res.series:
        if not classify_ct(alg, s).holds(k):
            failing.append(list(s.chain))
    details = {"sc1": True, "series": [list(s.chain) for s in res.series], "failing_series": failing}
    if failing:
        return Decision("no", f"a homogeneous series is not (CT{k})", k, details)
    return Decision("yes", f"(SC1) and every homogeneous series is (CT{k})", k, details)


__all__ = [
    "projective_prime_classes",
    "is_homogeneous",
    "homogeneous_elements",
    "phi_and_star",
    "HomogeneousSeries",
    "SeriesResult",
    "homogeneous_series",
    "SC1Report",
    "check_sc1",
    "SC1Witness",
    "sc1_failure_witness",
    "failure_witness_triples",
    "is_abp_interval",
    "QuotientCT",
    "CTReport",
    "classify_ct",
    "is_congruence_regular",
    "is_congruence_neutral",
    "Decision",
    "decide_hereditary_richness",
    "SERIES_CAP",
]
