"""Command-line front end: ``malcev-lab <command> ...``.

Exit codes: 0 positive verdict, 1 negative verdict, 2 usage error or
unsupported input, 3 a resource cap was hit.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Callable, Sequence

from . import __version__
from .algebra import FiniteAlgebra
from .closure import DEFAULT_CAP
from .commutator import labelled_lattice, require_malcev, rho_relation
from .congruence import congruence_lattice, lattice_queries
from .errors import MalcevLabError, ParseError, ResourceError, UsageError
from .io import (
    CORPUS_NAMES,
    corpus_path,
    format_algebra,
    format_function,
    load_algebra,
    load_function,
    read_bytes,
    sha256,
)
from .lemmas import DEFAULT_QS, verify_lemma_corpus
from .modules import (
    MatrixModuleSpec,
    build_module_algebra,
    counterexample_case,
    counterexample_function,
    decide_module_richness,
    submodule_count,
)
from .partial import (
    EXHAUSTIVE_CELL_LIMIT,
    brute_force_strictly_k_rich,
    interpolate,
    is_congruence_preserving,
    is_type_preserving,
)
from .structure import check_sc1, classify_ct, decide_hereditary_richness, homogeneous_series

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3
DEFAULT_BUDGET = 10**9
DEFAULT_SEED = 0
DEFAULT_COUNT = 1000


class _Context:
    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.inputs: list[dict] = []
        self.counters: dict[str, int] = {}

    def algebra(self, ref: str) -> FiniteAlgebra:
        """A file path, or the name of a bundled algebra when no such file exists."""
        path = Path(ref)
        if not path.exists():
            stem = ref[:-4] if ref.endswith(".alg") else ref
            if stem in CORPUS_NAMES and path.parent == Path("."):
                path = corpus_path(stem)
        data = read_bytes(path)
        self.inputs.append({"path": ref, "sha256": sha256(data)})
        return load_algebra(path)

    def function(self, ref: str):
        data = read_bytes(ref)
        self.inputs.append({"path": ref, "sha256": sha256(data)})
        return load_function(ref)


def _congruence_block(L, i: int) -> dict:
    return {"index": i, "classes": [list(c) for c in L[i].classes()]}


# --------------------------------------------------------------------------
# Commands. Each returns (exit code, results dict, human-readable text).


def cmd_lattice(ctx: _Context):
    A = ctx.algebra(ctx.args.algebra)
    L = congruence_lattice(A)
    q = lattice_queries(L)
    res = {
        "algebra": A.name,
        "size": A.size,
        "congruences": [_congruence_block(L, i) for i in range(L.size)],
        "covers": q["covers"],
        "join_irreducibles": q["join_irreducibles"],
        "strictly_meet_irreducibles": q["strictly_meet_irreducibles"],
        "height": q["height"],
        "modular": q["modular"],
    }
    lines = [f"{A.name}: {L.size} congruences, height {q['height']}, modular {q['modular']}"]
    lines += [f"  {i}: {L[i].describe()}" for i in range(L.size)]
    lines.append("covers: " + ", ".join(f"{a}<{b}" for a, b in q["covers"]))
    return EXIT_OK, res, "\n".join(lines)


def cmd_types(ctx: _Context):
    A = ctx.algebra(ctx.args.algebra)
    L, labels = labelled_lattice(A)
    covers = []
    lines = [f"{A.name}: {L.size} congruences"]
    lines += [f"  {i}: {L[i].describe()}" for i in range(L.size)]
    for lab in labels:
        covers.append(
            {"lower": lab.lower, "upper": lab.upper, "type": lab.type, "subtype": lab.subtype, "n": lab.n, "h": lab.h}
        )
        extra = f" subtype {lab.subtype} n {lab.n} h {lab.h}" if lab.subtype is not None else ""
        lines.append(f"  {lab.lower} < {lab.upper}: type {lab.type}{extra}")
    res: dict[str, Any] = {"algebra": A.name, "covers": covers}
    if ctx.args.rho is not None:
        a, b = ctx.args.rho
        for x in (a, b):
            if not 0 <= x < L.size:
                raise UsageError(f"congruence index {x} outside 0..{L.size - 1}")
        rel = rho_relation(A, require_malcev(A), L[a], L[b])
        res["rho"] = {"lower": a, "upper": b, "tuples": [list(t) for t in rel]}
        lines.append(f"rho({a}, {b}): {len(rel)} tuples")
        lines += ["  " + " ".join(map(str, t)) for t in rel]
    return EXIT_OK, res, "\n".join(lines)


def cmd_sc1(ctx: _Context):
    A = ctx.algebra(ctx.args.algebra)
    r = check_sc1(A)
    res = {
        "holds": r.holds,
        "violations": [{"mu": m, "mu_plus": p, "centralizer": c} for m, p, c in r.violations],
        "failure_pairs": [list(p) for p in r.failure_pairs],
        "characterizations_agree": r.agree,
    }
    text = f"(SC1) {'holds' if r.holds else 'fails'}"
    for m, p, c in r.violations:
        text += f"\n  mu {m}, mu+ {p}: (mu:mu+) = {c} is not below mu+"
    for a, b in r.failure_pairs:
        text += f"\n  failure pair ({a}, {b})"
    return (EXIT_OK if r.holds else EXIT_NEGATIVE), res, text


def cmd_series(ctx: _Context):
    A = ctx.algebra(ctx.args.algebra)
    r = homogeneous_series(A, cap=ctx.args.series_cap)
    res = {"series": [list(s.chain) for s in r.series], "diagnostic": r.diagnostic}
    text = "\n".join(" < ".join(map(str, s.chain)) for s in r.series) or f"no series: {r.diagnostic}"
    return (EXIT_OK if r.series else EXIT_NEGATIVE), res, text


def cmd_ct(ctx: _Context):
    A = ctx.algebra(ctx.args.algebra)
    r = homogeneous_series(A, cap=ctx.args.series_cap)
    reports = []
    lines = []
    for s in r.series:
        rep = classify_ct(A, s)
        qs = []
        lines.append("series " + " < ".join(map(str, s.chain)))
        for q in rep.quotients:
            qs.append(
                {
                    "lower": q.lower,
                    "upper": q.upper,
                    "type": q.type,
                    "subtype": q.subtype,
                    "n": q.n,
                    "height": q.height,
                    "class_sizes": list(q.class_sizes),
                    "ABp": list(q.ab),
                    "CT1": q.ct1,
                    "CT2": q.ct2,
                    "CT3": q.ct3,
                    "clauses": list(q.clauses),
                    "notes": list(q.notes),
                }
            )
            lines.append(
                f"  <{q.lower},{q.upper}>: type {q.type} subtype {q.subtype} height {q.height} "
                f"CT1 {q.ct1} CT2 {q.ct2} CT3 {q.ct3} clauses {','.join(q.clauses) or '-'}"
            )
        reports.append({"series": list(s.chain), "quotients": qs, "CT1": rep.holds(1), "CT2": rep.holds(2), "CT3": rep.holds(3)})
    res = {"reports": reports, "diagnostic": r.diagnostic}
    if not r.series:
        return EXIT_NEGATIVE, res, f"no series: {r.diagnostic}"
    return EXIT_OK, res, "\n".join(lines)


def cmd_decide(ctx: _Context):
    A = ctx.algebra(ctx.args.algebra)
    d = decide_hereditary_richness(A, ctx.args.k)
    res = {"k": d.k, "verdict": d.verdict, "basis": d.basis, "details": d.details}
    code = {"yes": EXIT_OK, "no": EXIT_NEGATIVE, "unsupported": EXIT_USAGE}[d.verdict]
    return code, res, f"k={d.k}: {d.verdict} ({d.basis})"


def cmd_interpolate(ctx: _Context):
    A = ctx.algebra(ctx.args.algebra)
    f = ctx.function(ctx.args.function)
    r = interpolate(A, f, cap=ctx.args.cap)
    res = {"interpolable": r.interpolable, "witness_row": list(r.witness) if r.witness is not None else None}
    if r.interpolable:
        return EXIT_OK, res, "interpolable by a polynomial"
    return EXIT_NEGATIVE, res, "not interpolable"


def cmd_check_tp(ctx: _Context):
    A = ctx.algebra(ctx.args.algebra)
    f = ctx.function(ctx.args.function)
    f.check_range(A.size)
    cp = is_congruence_preserving(A, f)
    tp = cp and is_type_preserving(A, f)
    res = {"congruence_preserving": cp, "type_preserving": tp}
    return (EXIT_OK if tp else EXIT_NEGATIVE), res, f"congruence preserving: {cp}\ntype preserving: {tp}"


def _brute_report(r) -> dict:
    ce = r.counterexample
    return {
        "verdict": r.verdict,
        "mode": r.mode,
        "k": r.k,
        "max_domain_size": r.max_domain_size,
        "counterexample": None if ce is None else {"domain": [list(t) for t in ce.domain], "values": list(ce.values)},
        "notes": list(r.notes),
    }


def cmd_brute(ctx: _Context):
    A = ctx.algebra(ctx.args.algebra)
    a = ctx.args
    cells = A.size**a.k
    mode = a.mode or ("exhaustive" if cells <= EXHAUSTIVE_CELL_LIMIT and a.count is None else "random")
    seed = a.seed if a.seed is not None else DEFAULT_SEED
    count = a.count if a.count is not None else DEFAULT_COUNT
    r = brute_force_strictly_k_rich(
        A, a.k, a.max_domain, mode=mode, seed=seed, count=count, budget=a.budget, cap=a.cap
    )
    ctx.counters.update(domains=r.domains_checked, type_preserving_functions=r.type_preserving_functions, candidates=r.candidates)
    res = _brute_report(r)
    if mode == "random":
        res.update(seed=seed, count=count)
    code = {"rich-up-to-bound": EXIT_OK, "counterexample": EXIT_NEGATIVE, "partial": EXIT_RESOURCE}[r.verdict]
    text = f"{r.verdict} ({mode}, {r.domains_checked} domains)"
    if r.counterexample is not None:
        text += "\n" + format_function(r.counterexample).rstrip()
    return code, res, text


def _spec(a) -> MatrixModuleSpec:
    return MatrixModuleSpec(a.q, a.n, a.m)


def cmd_module(ctx: _Context):
    a = ctx.args
    spec = _spec(a)
    A = build_module_algebra(spec)
    F = spec.field
    res = {
        "name": spec.name,
        "q": a.q,
        "n": a.n,
        "m": a.m,
        "size": A.size,
        "field_modulus": F.describe_modulus(),
        "operations": [[op.name, op.arity] for op in A.ops],
        "submodules": submodule_count(a.q, a.n, a.m),
    }
    if a.emit:
        Path(a.emit).write_text(format_algebra(A))
        res["emitted"] = a.emit
    text = f"{spec.name}: {A.size} elements, {res['submodules']} submodules, field {res['field_modulus']}"
    return EXIT_OK, res, text


def cmd_module_decide(ctx: _Context):
    a = ctx.args
    rich = decide_module_richness(a.q, a.n, a.m, a.k)
    res = {"q": a.q, "n": a.n, "m": a.m, "k": a.k, "strictly_rich": rich}
    if not rich:
        res["case"] = counterexample_case(a.q, a.n, a.m, a.k)
    word = "strictly" if rich else "not strictly"
    return (EXIT_OK if rich else EXIT_NEGATIVE), res, f"GF({a.q})^({a.n}x{a.m}) is {word} {a.k}-polynomially rich"


def cmd_module_counterexample(ctx: _Context):
    a = ctx.args
    if decide_module_richness(a.q, a.n, a.m, a.k):
        res = {"q": a.q, "n": a.n, "m": a.m, "k": a.k, "strictly_rich": True, "counterexample": None}
        return EXIT_NEGATIVE, res, "strictly rich: no counterexample exists"
    ce = counterexample_function(a.q, a.n, a.m, a.k)
    f = ce.function
    res = {
        "q": a.q,
        "n": a.n,
        "m": a.m,
        "k": a.k,
        "case": ce.case_id,
        "lifted_from_arity": ce.lifted_from,
        "b": ce.b,
        "domain": [list(t) for t in f.domain],
        "values": list(f.values),
        "notes": list(ce.notes),
    }
    if a.verify:
        A = build_module_algebra(ce.spec)
        res["type_preserving"] = is_type_preserving(A, f)
        res["interpolable"] = interpolate(A, f, cap=a.cap).interpolable
    if a.emit:
        Path(a.emit).write_text(format_function(f))
        res["emitted"] = a.emit
    text = f"case {ce.case_id}\n" + format_function(f).rstrip()
    return EXIT_OK, res, text


def _int_list(s: str) -> list[int]:
    try:
        return [int(x) for x in s.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {s!r}") from None


def cmd_verify_lemmas(ctx: _Context):
    a = ctx.args
    if any(q > 9 for q in a.qs) or a.n_max > 4 or a.m_max > 3:
        raise UsageError("lemma ranges are limited to q <= 9, n <= 4, m <= 3")
    r = verify_lemma_corpus(a.qs, a.n_max, a.m_max)
    summary = r.summary()
    res = {
        "ranges": {"q": list(a.qs), "n_max": a.n_max, "m_max": a.m_max},
        "ok": r.ok,
        "lemmas": summary,
        "violations": [{"lemma": l, "params": p, "violation": v} for l, p, v in r.violations],
    }
    ctx.counters["instances"] = sum(s["instances"] for s in summary.values())
    lines = [f"{name}: {s['instances']} instances, {s['violations']} violations" for name, s in summary.items()]
    return (EXIT_OK if r.ok else EXIT_NEGATIVE), res, "\n".join(lines)


# --------------------------------------------------------------------------
# Parser


def _global_flags(p: argparse.ArgumentParser, suppress: bool):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--json", action="store_true", default=d(False), help="emit a JSON report")
    p.add_argument("--cap", type=int, default=d(DEFAULT_CAP), help="closure row cap")
    p.add_argument("--budget", type=int, default=d(DEFAULT_BUDGET), help="brute-force candidate budget")
    p.add_argument("--seed", type=int, default=d(None), help="random seed (brute force)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="malcev-lab", description="Polynomial richness of finite Mal'cev algebras")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _global_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, fn: Callable, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help)
        p.set_defaults(func=fn)
        return p

    p = add("lattice", cmd_lattice, "congruence lattice")
    p.add_argument("algebra")
    p = add("types", cmd_types, "types and subtypes of prime quotients")
    p.add_argument("algebra")
    p.add_argument("--rho", type=int, nargs=2, metavar=("ALPHA", "BETA"), help="dump rho(alpha, beta)")
    p = add("sc1", cmd_sc1, "check (SC1)")
    p.add_argument("algebra")
    for name, fn, h in (("series", cmd_series, "homogeneous series"), ("ct", cmd_ct, "completeness types")):
        p = add(name, fn, h)
        p.add_argument("algebra")
        p.add_argument("--series-cap", type=int, default=10_000)
    p = add("decide", cmd_decide, "hereditary strict k-polynomial richness")
    p.add_argument("algebra")
    p.add_argument("--k", type=int, required=True)
    p = add("interpolate", cmd_interpolate, "interpolate a partial function")
    p.add_argument("algebra")
    p.add_argument("function")
    p = add("check-tp", cmd_check_tp, "type preservation of a partial function")
    p.add_argument("algebra")
    p.add_argument("function")
    p = add("brute", cmd_brute, "brute-force search for a non-interpolable type-preserving function")
    p.add_argument("algebra")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--max-domain", type=int, required=True)
    p.add_argument("--count", type=int, default=None, help="number of random domains")
    p.add_argument("--mode", choices=("exhaustive", "random"), default=None)
    for name, fn, h in (
        ("module", cmd_module, "build GF(q)^(n x m)"),
        ("module-decide", cmd_module_decide, "richness of GF(q)^(n x m)"),
        ("module-counterexample", cmd_module_counterexample, "non-interpolable type-preserving function"),
    ):
        p = add(name, fn, h)
        p.add_argument("--q", type=int, required=True)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--m", type=int, required=True)
        if name != "module":
            p.add_argument("--k", type=int, required=True)
        if name != "module-decide":
            p.add_argument("--emit", default=None, help="write the algebra or function to this file")
        if name == "module-counterexample":
            p.add_argument("--verify", action="store_true", help="check type preservation and interpolation")
    p = add("verify-lemmas", cmd_verify_lemmas, "check the submodule lemmata exhaustively")
    p.add_argument("--qs", type=_int_list, default=list(DEFAULT_QS), help="field sizes, e.g. 2,3,4")
    p.add_argument("--n-max", type=int, default=4)
    p.add_argument("--m-max", type=int, default=3)
    return parser


def _settings(args) -> dict:
    return {"cap": args.cap, "budget": args.budget, "seed": args.seed}


def _emit(args, payload: dict, text: str | None, stream=None):
    stream = stream or sys.stdout
    if args is not None and getattr(args, "json", False):
        stream.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    elif text:
        stream.write(text + "\n")


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE
    ctx = _Context(args)
    base = {"command": args.command, "version": __version__, "settings": _settings(args)}
    try:
        code, results, text = args.func(ctx)
    except ResourceError as e:
        payload = {**base, "inputs": ctx.inputs, "error": {"kind": "resource", "message": str(e), "cap": e.cap}}
        _emit(args, payload, None)
        print(f"malcev-lab: resource limit: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except (UsageError, MalcevLabError) as e:
        kind = "parse" if isinstance(e, ParseError) else "usage"
        err = {"kind": kind, "message": str(e)}
        if isinstance(e, ParseError):
            err["line"] = e.line
        _emit(args, {**base, "inputs": ctx.inputs, "error": err}, None)
        print(f"malcev-lab: {e}", file=sys.stderr)
        return EXIT_USAGE
    payload = {**base, "inputs": ctx.inputs, "results": results, "timing": ctx.counters, "exit_code": code}
    _emit(args, payload, text)
    return code


if __name__ == "__main__":
    sys.exit(main())
