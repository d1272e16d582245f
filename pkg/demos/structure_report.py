"""Congruence structure of S3 and Z4: types, (SC1), homogeneous series and the richness decision."""

from malcev_lab import check_sc1, classify_ct, congruence_lattice, corpus_algebra, decide_hereditary_richness
from malcev_lab import homogeneous_series, labelled_lattice, sc1_failure_witness
from malcev_lab.structure import failure_witness_triples

for name in ("s3", "z4"):
    A = corpus_algebra(name)
    L, labels = labelled_lattice(A)
    print(f"== {name}: {L.size} congruences")
    for lab in labels:
        print(f"  {L[lab.lower].describe()} < {L[lab.upper].describe()}: type {lab.type}, subtype {lab.subtype}")
    sc1 = check_sc1(A)
    print(f"  (SC1) holds: {sc1.holds}; failure pairs {sc1.failure_pairs}")
    if sc1.holds:
        for s in homogeneous_series(A).series:
            rep = classify_ct(A, s)
            print(f"  series {s.chain}: CT1 {rep.holds(1)}, CT2 {rep.holds(2)}, CT3 {rep.holds(3)}")
    else:
        pair = sc1.failure_pairs[0]
        w = sc1_failure_witness(A, pair, *failure_witness_triples(A, pair)[0])
        print(f"  witness function: {dict(zip(w.function.domain, w.function.values))}")
    print("  hereditarily rich for k = 1..4:", [decide_hereditary_richness(A, k).verdict for k in (1, 2, 3, 4)])
