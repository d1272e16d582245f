"""Search random domains for a type-preserving partial function that is not a polynomial."""

from malcev_lab import brute_force_strictly_k_rich, corpus_algebra

for name, k in (("z5", 1), ("z5", 2), ("z2sq", 2)):
    A = corpus_algebra(name)
    rep = brute_force_strictly_k_rich(A, k, 5, mode="random", seed=1, count=500)
    print(f"{name}, k={k}: {rep.verdict} after {rep.domains_checked} domains")
    if rep.counterexample is not None:
        f = rep.counterexample
        print("   ", ", ".join(f"{t} -> {v}" for t, v in zip(f.domain, f.values)))
