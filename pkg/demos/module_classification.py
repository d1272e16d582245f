"""Richness of GF(q)^(n x m) for small parameters, with a verified witness for every negative answer."""

from malcev_lab import counterexample_function, decide_module_richness, interpolate, is_type_preserving, module_algebra

rows = []
for q in (2, 3, 4, 5, 7):
    for n in (1, 2, 3):
        for m in (1, 2):
            if q ** (n * m) > 64:
                continue
            verdicts = []
            for k in (1, 2, 3, 4):
                if decide_module_richness(q, n, m, k):
                    verdicts.append("rich")
                    continue
                cx = counterexample_function(q, n, m, k)
                A = module_algebra(q, n, m)
                ok = is_type_preserving(A, cx.function) and not interpolate(A, cx.function).interpolable
                verdicts.append(f"case {cx.case_id}{'' if ok else ' (!)'}")
            rows.append((f"GF({q})^({n}x{m})", *verdicts))

print(f"{'module':16} {'k=1':10} {'k=2':10} {'k=3':10} {'k=4':10}")
for r in rows:
    print(" ".join(f"{c:10}" if i else f"{c:16}" for i, c in enumerate(r)))
