"""The ten acceptance criteria. Each test records one PASS/FAIL line, printed at the end of the run."""

from __future__ import annotations

import itertools
import json
import os
import subprocess
import sys
import time

import numpy as np
import pytest

from malcev_lab.commutator import centralizer, commutator, labelled_lattice
from malcev_lab.congruence import congruence_lattice, find_malcev_polynomial
from malcev_lab.fields import prime_power
from malcev_lab.io import CORPUS_NAMES, corpus_algebra
from malcev_lab.lemmas import verify_lemma_corpus
from malcev_lab.modules import (
    counterexample_case,
    counterexample_function,
    decide_module_richness,
    module_algebra,
)
from malcev_lab.partial import (
    PartialFunction,
    Relation,
    brute_force_strictly_k_rich,
    check_nu_preservation,
    interpolate,
    is_type_preserving,
    near_unanimity,
    preserves,
    stored_relations,
)
from malcev_lab.structure import (
    check_sc1,
    classify_ct,
    decide_hereditary_richness,
    homogeneous_series,
    phi_and_star,
)

from conftest import random_module_signature, record_acceptance

EXHAUSTIVE_CELLS = 16
RANDOM_DOMAINS = 10_000
SEED = 20240601


def _run(number: int, body):
    """Run ``body`` (returning a detail string); record the outcome and re-raise failures."""
    start = time.perf_counter()
    try:
        detail = body()
    except AssertionError as e:
        msg = str(e).splitlines()[0] if str(e) else "assertion failed"
        record_acceptance(number, False, f"{msg} [{time.perf_counter() - start:.1f}s]")
        raise
    record_acceptance(number, True, f"{detail} [{time.perf_counter() - start:.1f}s]")


# 1 ------------------------------------------------------------------------


def test_criterion_01_intro_witnesses():
    def body():
        start = time.perf_counter()
        z4 = corpus_algebra("z4")
        unary = PartialFunction(1, ((0,), (2,)), (0, 1))
        binary = PartialFunction(2, ((0, 0), (1, 0), (0, 1), (1, 1)), (0, 0, 0, 1))
        diff2 = Relation(4, 2, tuple((x, y) for x in range(4) for y in range(4) if (x - y) % 4 == 2))
        parallel = Relation(
            4, 4, tuple(t for t in itertools.product(range(4), repeat=4) if (t[0] - t[1]) % 4 == (t[2] - t[3]) % 4)
        )
        assert not interpolate(z4, unary).interpolable, "unary witness interpolated"
        assert not interpolate(z4, binary).interpolable, "binary witness interpolated"
        assert not preserves(unary, diff2), "unary witness preserves x - y = 2"
        assert not preserves(binary, parallel), "binary witness preserves x1 - x2 = x3 - x4"
        assert (0, 0, 0, 1) not in set(parallel.tuples)
        elapsed = time.perf_counter() - start
        assert elapsed < 1.0, f"took {elapsed:.2f}s"
        return "both (Z4,+) witnesses rejected by interpolate and by their relations"

    _run(1, body)


# 2 ------------------------------------------------------------------------

RICH = [
    (2, 1, 1, 1), (2, 1, 1, 2), (2, 1, 1, 3), (3, 1, 1, 1), (3, 1, 1, 2), (5, 1, 1, 1),
    (2, 2, 1, 1), (2, 3, 1, 1), (3, 2, 1, 1), (2, 1, 2, 1), (3, 1, 2, 1),
]


def test_criterion_02_rich_modules():
    def body():
        modes = []
        for q, n, m, k in RICH:
            assert decide_module_richness(q, n, m, k), f"{(q, n, m, k)} not classified rich"
            A = module_algebra(q, n, m)
            cells = A.size**k
            if cells <= EXHAUSTIVE_CELLS:
                rep = brute_force_strictly_k_rich(A, k, cells)
            else:
                rep = brute_force_strictly_k_rich(A, k, 6, mode="random", seed=SEED, count=RANDOM_DOMAINS)
            assert rep.verdict == "rich-up-to-bound", f"{(q, n, m, k)}: {rep.verdict}"
            modes.append(rep.mode)
        return f"{len(RICH)} combinations rich up to bound ({modes.count('exhaustive')} exhaustive)"

    _run(2, body)


# 3 ------------------------------------------------------------------------

LISTED_NON_RICH = [
    (7, 1, 1, 1), (4, 1, 1, 1), (2, 4, 1, 1), (3, 3, 1, 1), (5, 2, 1, 1), (2, 2, 2, 1), (2, 3, 2, 1),
    (3, 1, 2, 2), (2, 2, 1, 2), (3, 2, 1, 2), (2, 1, 1, 4), (3, 1, 1, 3), (5, 1, 1, 2),
]


def non_rich_combinations():
    combos = set(LISTED_NON_RICH)
    for q in range(2, 33):
        if prime_power(q) is None:
            continue
        for n, m in itertools.product(range(1, 6), repeat=2):
            if q ** (n * m) > 32:
                continue
            for k in range(1, 5):
                if not decide_module_richness(q, n, m, k):
                    combos.add((q, n, m, k))
    return sorted(combos)


def test_criterion_03_non_rich_modules():
    def body():
        combos = non_rich_combinations()
        cases = set()
        for q, n, m, k in combos:
            cx = counterexample_function(q, n, m, k)
            A = module_algebra(q, n, m)
            assert is_type_preserving(A, cx.function), f"{(q, n, m, k)}: case {cx.case_id} not type-preserving"
            assert not interpolate(A, cx.function).interpolable, f"{(q, n, m, k)}: case {cx.case_id} interpolable"
            cases.add(cx.case_id)
        assert cases == set(range(1, 9)), f"cases covered: {sorted(cases)}"
        return f"{len(combos)} combinations, cases {sorted(cases)} all type-preserving and non-interpolable"

    _run(3, body)


# 4 ------------------------------------------------------------------------


def test_criterion_04_lemma_corpus():
    def body():
        rep = verify_lemma_corpus(qs=(2, 3, 4, 5, 7, 8, 9), n_max=4, m_max=3)
        summary = rep.summary()
        bad = {name: s["violations"] for name, s in summary.items() if s["violations"]}
        checks = sum(s["parameter_sets"] for s in summary.values())
        first = rep.violations[:1]
        assert not bad, f"violations {bad} over {checks} parameter sets; first {first}"
        return f"{checks} parameter sets, zero violations"

    _run(4, body)


# 5 ------------------------------------------------------------------------


def test_criterion_05_near_unanimity():
    def body():
        total = 0
        literal = 0
        for name in CORPUS_NAMES:
            A = corpus_algebra(name)
            rels = stored_relations(A)
            for k in (3, 4, 5):
                small = [r for r in rels if r.arity < k]
                assert check_nu_preservation(A, k, small), f"{name}, k={k}"
                total += len(small)
                if A.size <= 4 and k == 3:
                    # the literal definition of preservation as a second route
                    u = near_unanimity(A.size, k)
                    for r in small:
                        assert preserves(u, r), f"{name}, k={k}: literal check"
                        literal += 1
        return f"{total} (relation, k) pairs preserved, {literal} also by the literal check"

    _run(5, body)


# 6 ------------------------------------------------------------------------

DECISIONS = {
    "z2sq": {1: "yes", 2: "no", 3: "no"},
    "z3sq": {1: "yes", 2: "no"},
    "z5": {1: "yes", 2: "no"},
    "s3": {1: "yes", 2: "yes", 3: "no", 4: "no"},
    "z4": {1: "no", 2: "no", 3: "no", 4: "no"},
}


def test_criterion_06_structural_decisions():
    def body():
        spots = 0
        for name, expected in DECISIONS.items():
            A = corpus_algebra(name)
            for k, verdict in expected.items():
                got = decide_hereditary_richness(A, k)
                assert got.verdict == verdict, f"{name} k={k}: {got.verdict} ({got.basis})"
                if k <= 2 and A.size <= 6:
                    cells = A.size**k
                    if cells <= EXHAUSTIVE_CELLS:
                        rep = brute_force_strictly_k_rich(A, k, cells)
                    else:
                        rep = brute_force_strictly_k_rich(A, k, 6, mode="random", seed=SEED, count=1000)
                    found = rep.verdict == "counterexample"
                    assert rep.verdict != "partial", f"{name} k={k}: brute force incomplete"
                    assert found == (verdict == "no"), f"{name} k={k}: brute force says {rep.verdict}"
                    spots += 1
        return f"all verdicts match; {spots} brute-force spot checks agree"

    _run(6, body)


# 7 ------------------------------------------------------------------------


def test_criterion_07_commutator_laws_and_types():
    def body():
        for name in CORPUS_NAMES:
            A = corpus_algebra(name)
            if find_malcev_polynomial(A) is None:
                continue
            L = congruence_lattice(A)
            C = L.elements
            comm = {(i, j): L.index_of(commutator(A, C[i], C[j])) for i in range(L.size) for j in range(L.size)}
            for (i, j), c in comm.items():
                assert L.leq(c, L.meet(i, j)), f"{name}: [a,b] not below a^b"
                assert c == comm[j, i], f"{name}: not symmetric"
            for i, j, i2, j2 in itertools.product(range(L.size), repeat=4):
                if L.leq(i, i2) and L.leq(j, j2):
                    assert L.leq(comm[i, j], comm[i2, j2]), f"{name}: not monotone"
            for a, b in itertools.product(range(L.size), repeat=2):
                z = L.index_of(centralizer(A, C[a], C[b]))
                for g in range(L.size):
                    assert L.leq(comm[g, b], a) == L.leq(g, z), f"{name}: residuation fails"
        L, labels = labelled_lattice(corpus_algebra("s3"))
        assert [lab.type for lab in labels] == [2, 2], "S3 types"
        for name, q in (("m3z2-mod", 2), ("m2z3-mod", 3)):
            L, labels = labelled_lattice(corpus_algebra(name))
            assert L.size == 2, f"{name} not simple"
            assert [(lab.type, lab.subtype) for lab in labels] == [(2, q)], f"{name}: {labels}"
        return "laws hold on every Mal'cev corpus algebra; S3 types 2/2; subtypes 2 and 3"

    _run(7, body)


# 8 ------------------------------------------------------------------------


def test_criterion_08_sc1_agreement():
    def body():
        corpus_count = 0
        for name in CORPUS_NAMES:
            A = corpus_algebra(name)
            if find_malcev_polynomial(A) is None:
                continue
            assert check_sc1(A).agree, name
            corpus_count += 1
        rng = np.random.default_rng(SEED)
        holds = 0
        for i in range(100):
            A = random_module_signature(rng)
            rep = check_sc1(A)
            assert rep.agree, f"random algebra {i}: {A.ops}"
            holds += rep.holds
        return f"agree on {corpus_count} corpus algebras and 100 random ones ({holds} satisfy SC1)"

    _run(8, body)


# 9 ------------------------------------------------------------------------


def test_criterion_09_series_invariants():
    def body():
        n_series = 0
        for name in CORPUS_NAMES:
            A = corpus_algebra(name)
            if find_malcev_polynomial(A) is None or not check_sc1(A).holds:
                continue
            L = congruence_lattice(A)
            for s in homogeneous_series(A).series:
                n_series += 1
                for lo, mu in s.quotients():
                    phi, star = _relative_phi_star(L, lo, mu)
                    assert L.meet(mu, star) == lo, f"{name}: mu ^ mu* above the previous element"
                    assert phi == lo, f"{name}: Phi(mu) above the previous element"
                    assert L.lattice.interval(lo, mu).is_simple_complemented_modular(), f"{name}: interval"
                mu = s.chain[1]
                phi, star = phi_and_star(L, mu)
                assert L.meet(mu, star) == L.bottom and phi == L.bottom, f"{name}: first element"
                for q in classify_ct(A, s).quotients:
                    assert (not q.ct3 or q.ct2) and (not q.ct2 or q.ct1), f"{name}: CT chain"
        return f"{n_series} series checked"

    _run(9, body)


def _relative_phi_star(L, lo, mu):
    phi = mu
    for c in L.lattice.lower_covers(mu):
        if L.leq(lo, c):
            phi = L.meet(phi, c)
    star = lo
    for a in range(L.size):
        if L.leq(lo, a) and L.meet(a, mu) == lo:
            star = L.join(star, a)
    return phi, star


# 10 -----------------------------------------------------------------------

_DRIVER = r"""
import contextlib, io, sys
from malcev_lab.cli import main
from malcev_lab.io import CORPUS_NAMES
fn_dir = sys.argv[1]
runs = []
for name in CORPUS_NAMES:
    for cmd in (["lattice"], ["types"], ["sc1"], ["series"], ["ct"], ["decide", "--k", "1"], ["decide", "--k", "2"]):
        runs.append(["--json", cmd[0], name, *cmd[1:]])
    runs.append(["--json", "interpolate", name, fn_dir + "/f.fn"])
    runs.append(["--json", "check-tp", name, fn_dir + "/f.fn"])
    runs.append(["--json", "brute", name, "--k", "1", "--max-domain", "3", "--mode", "random", "--count", "30", "--seed", "5"])
runs += [
    ["--json", "module", "--q", "3", "--n", "1", "--m", "2"],
    ["--json", "module-decide", "--q", "2", "--n", "1", "--m", "1", "--k", "3"],
    ["--json", "module-counterexample", "--q", "3", "--n", "2", "--m", "2", "--k", "1", "--verify"],
    ["--json", "verify-lemmas", "--qs", "2,3", "--n-max", "2", "--m-max", "2"],
]
for argv in runs:
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf), contextlib.redirect_stderr(io.StringIO()):
        code = main(argv)
    sys.stdout.write(f"== {' '.join(argv)} -> {code}\n{buf.getvalue()}")
"""


def test_criterion_10_cli_determinism(tmp_path):
    def body():
        (tmp_path / "f.fn").write_text("fn 1\n0 -> 0\n1 -> 1\n")
        outputs = []
        for hash_seed in ("0", "12345"):
            env = {**os.environ, "PYTHONHASHSEED": hash_seed}
            proc = subprocess.run(
                [sys.executable, "-c", _DRIVER, str(tmp_path)], capture_output=True, env=env, check=False
            )
            assert proc.returncode == 0, proc.stderr.decode()[-500:]
            outputs.append(proc.stdout)
        assert outputs[0] == outputs[1], "JSON output differs between runs"
        blocks = outputs[0].decode().split("== ")[1:]
        for block in blocks:
            body_text = block.split("\n", 1)[1]
            json.loads(body_text)
        return f"{len(blocks)} command runs byte-identical across two processes"

    _run(10, body)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
