"""Command-line front end.

Exit codes: 0 ok, 1 hard-check failure, 2 usage error, 3 cap exceeded.
All commands are deterministic for fixed inputs and seeds; --threads (or
HIENERGY_THREADS) is accepted for interface stability and output does not
depend on it.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

import numpy as np

from . import checks, extract, genset, groups, moments, setops, spectrum
from .gset import GSet, SetFileError, dumps_set, loads_set, read_set, write_set
from .setops import CapExceededError, Caps

USAGE_EXIT = 2
CAP_EXIT = 3
FAIL_EXIT = 1


def _load_sets(args) -> list[GSet]:
    out = []
    for path in getattr(args, "set", None) or []:
        out.append(read_set(path))
    for rec in getattr(args, "recipe", None) or []:
        out.append(genset.gen(genset.parse_recipe(rec)))
    return out


def _caps(args) -> Caps:
    caps = Caps()
    if getattr(args, "cap_tuples", None):
        caps.tuples = args.cap_tuples
    if getattr(args, "cap_subsets", None):
        caps.subsets = args.cap_subsets
    return caps


def _apply_global_caps(args) -> None:
    # checks and pipelines consult the shared default caps object
    if getattr(args, "cap_tuples", None):
        setops.DEFAULT_CAPS.tuples = args.cap_tuples
    if getattr(args, "cap_subsets", None):
        setops.DEFAULT_CAPS.subsets = args.cap_subsets


def _emit(args, payload: dict, text_lines: list[str]) -> None:
    if getattr(args, "json", False):
        body = json.dumps(payload, indent=2, sort_keys=True, default=str)
    elif getattr(args, "csv", False) and "csv" in payload:
        body = payload["csv"]
    else:
        body = "\n".join(text_lines)
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(body if body.endswith("\n") else body + "\n")
        print(args.out)
    else:
        print(body)


def cmd_compute(args) -> int:
    sets = _load_sets(args)
    if not sets:
        print("compute needs --set or --recipe", file=sys.stderr)
        return USAGE_EXIT
    a = sets[0]
    b = sets[1] if len(sets) > 1 else a
    if args.b:
        b = read_set(args.b)
    if getattr(args, "pre", "none") == "diff":
        a = setops.diffset(a, a)
    elif getattr(args, "pre", "none") == "sum":
        a = setops.sumset(a, a)
    caps = _caps(args)
    q = args.quantity
    k = args.k
    if k is not None and float(k).is_integer():
        k = int(k)
    payload: dict = {"quantity": q, "set_size": len(a), "group": str(a.group)}
    lines: list[str] = []
    if q == "Ek":
        v = moments.energy_k(a, k if k is not None else 2)
        payload["value"] = v
        lines = [f"E_{k if k is not None else 2}(A) = {v}"]
    elif q == "Tk":
        v = moments.t_k(a, int(k or 2))
        payload["value"] = v
        lines = [f"T_{int(k or 2)}(A) = {v}"]
    elif q == "sigmak":
        v = moments.sigma_k(a, int(k or 2))
        payload["value"] = v
        lines = [f"sigma_{int(k or 2)}(A) = {v}"]
    elif q == "Dk":
        v = setops.d_k(a, int(k or 2), caps)
        payload["value"] = v
        lines = [f"D_{int(k or 2)}(A) = {v}"]
    elif q == "Sk":
        v = setops.s_k(a, int(k or 2), caps)
        payload["value"] = v
        lines = [f"S_{int(k or 2)}(A) = {v}"]
    elif q == "spectrum":
        table = spectrum.dft(a)
        payload["csv"] = table.to_csv()
        payload["values"] = [[str(xi), abs(table.value(xi))] for xi in groups.enumerate_elements(a.group)]
        lines = payload["csv"].splitlines()
    elif q == "Ralpha":
        r = spectrum.large_spectrum(a, args.alpha)
        payload["value"] = [list(e) for e in r.elems]
        payload["size"] = len(r)
        lines = [f"R_{args.alpha}(A): size {len(r)}", dumps_set(r).rstrip()]
    elif q == "dim":
        v = spectrum.dim_greedy(a) if args.greedy else spectrum.dim_exact(a)
        payload["value"] = v
        lines = [f"dim(A) = {v}" + (" (greedy lower bound)" if args.greedy else "")]
    elif q == "mag":
        r, z = setops.magnification(a, b, caps)
        payload["value"] = str(r)
        payload["witness"] = [list(e) for e in z.elems]
        lines = [f"R_B[A] = {r} (= {float(r)}), witness |Z| = {len(z)}"]
    elif q == "magk":
        r, z = setops.magnification_k(a, b, int(k or 1), caps)
        payload["value"] = str(r)
        payload["witness"] = [list(e) for e in z.elems]
        lines = [f"R^({int(k or 1)})_B[A] = {r} (= {float(r)}), witness |Z| = {len(z)}"]
    elif q == "levels":
        v = moments.level_sequence(a)
        payload["value"] = v
        payload["csv"] = "rank,value\n" + "\n".join(f"{i+1},{x}" for i, x in enumerate(v)) + "\n"
        lines = [" ".join(map(str, v))]
    elif q == "multE":
        v = moments.mult_energy_k(a, int(k or 2))
        payload["value"] = v
        payload["prodset"] = moments.prodset_size(a)
        payload["quotset"] = moments.quotset_size(a)
        lines = [f"E^x_{int(k or 2)}(A) = {v} (|AA| = {payload['prodset']}, |A/A| = {payload['quotset']})"]
    else:
        print(f"unknown quantity {q!r}", file=sys.stderr)
        return USAGE_EXIT
    _emit(args, payload, lines)
    return 0


def cmd_gen(args) -> int:
    a = genset.gen(genset.parse_recipe(args.recipe))
    body = dumps_set(a)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(body)
        print(args.out)
    else:
        print(body, end="")
    return 0


def cmd_verify(args) -> int:
    ids = [c.strip() for c in args.checks.split(",") if c.strip()]
    for cid in ids:
        if cid.replace("'", "p") not in checks.REGISTRY:
            print(f"unknown check id {cid!r}", file=sys.stderr)
            return USAGE_EXIT
    instances = []
    for i, a in enumerate(_load_sets(args)):
        kind = "set"
        if not a.group.is_cyclic and a.group.dim == 1 and args.intset:
            kind = "intset"
        instances.append(checks.Instance(kind, f"cli{i}", a))
    for spec_txt in args.subgroup or []:
        p, t = (int(x) for x in spec_txt.split(","))
        gamma = genset.mult_subgroup(p, t)
        instances.append(checks.Instance("subgroup", f"G(p={p},t={t})", gamma,
                                         {"p": p, "t": t}))
    if not instances:
        print("verify needs --set, --recipe or --subgroup", file=sys.stderr)
        return USAGE_EXIT
    report = checks.run_suite(instances, ids)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(report.to_json())
        print(args.report)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(report.to_csv())
    for line in report.to_csv().splitlines():
        print(line)
    cap_errors = [e for e in report.errors if str(e.get("error", "")).startswith("cap")]
    other_errors = [e for e in report.errors if not str(e.get("error", "")).startswith("cap")]
    for e in report.errors:
        print(f"error: {e}", file=sys.stderr)
    if report.hard_failures or other_errors:
        for r in report.hard_failures:
            print(f"HARD FAIL {r.check_id}: lhs={r.lhs} rhs={r.rhs} inputs={r.inputs}",
                  file=sys.stderr)
        return FAIL_EXIT
    if cap_errors:
        return CAP_EXIT
    return 0


def cmd_extract(args) -> int:
    sets = _load_sets(args)
    if not sets:
        print("extract needs --set or --recipe", file=sys.stderr)
        return USAGE_EXIT
    a = sets[0]
    b = read_set(args.b) if args.b else (sets[1] if len(sets) > 1 else a)
    p = args.pipeline
    if p == "bsg1":
        rep = extract.bsg_extract(a, args.eps)
    elif p == "bsg2":
        nm = [tuple(int(x) for x in pair.split(",")) for pair in (args.nm or ["1,1"])]
        rep = extract.bsg_extract_v2(a, args.eps, nm=nm, seed=args.seed)
    elif p == "smallT4":
        rep = extract.small_t4_extract(a)
    elif p == "cs":
        rep = extract.cs_period_search(a, b, args.k or 4, trials=args.trials, seed=args.seed)
    elif p == "config":
        coeffs = [int(x) for x in (args.c or "0,1,2").split(",")]
        found = extract.find_configuration(a, coeffs, args.sign)
        if found is None:
            print("none")
        else:
            print(f"x={','.join(map(str, found[0]))} d={','.join(map(str, found[1]))}")
        return 0
    elif p == "cover":
        n = extract.nb_cover(a, cap=args.cap or 64)
        print("none" if n is None else str(n))
        return 0
    else:
        print(f"unknown pipeline {p!r}", file=sys.stderr)
        return USAGE_EXIT
    body = rep.to_json()
    out = args.out or f"extract_{p}.json"
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(body)
    summary = {"pipeline": rep.pipeline, "claimed": rep.claimed, "measured": rep.measured,
               "ratio": rep.ratio, "ok": rep.ok}
    print(json.dumps(summary, sort_keys=True))
    print(out)
    return 0 if rep.ok else FAIL_EXIT


def cmd_suite(args) -> int:
    ids = ([c.strip() for c in args.checks.split(",") if c.strip()]
           if args.checks else sorted(checks.REGISTRY))
    instances = []
    if args.standard:
        instances += checks.standard_corpus(seed=args.seed,
                                            cyclic_count=args.count,
                                            lattice_count=max(2, args.count // 10))
        instances += checks.basis_instances()
        instances += checks.subgroup_instances()
        instances += checks.intset_instances()
    for i, a in enumerate(_load_sets(args)):
        instances.append(checks.Instance("set", f"cli{i}", a))
    if not instances:
        print("suite needs --standard, --set or --recipe", file=sys.stderr)
        return USAGE_EXIT
    report = checks.run_suite(instances, ids)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(report.to_json())
        print(args.report)
    print(report.to_csv(), end="")
    if report.hard_failures:
        for r in report.hard_failures[:20]:
            print(f"HARD FAIL {r.check_id}: {r.inputs}", file=sys.stderr)
        return FAIL_EXIT
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hienergy",
                                 description="exact convolution-moment laboratory")
    ap.add_argument("--threads", type=int,
                    default=int(os.environ.get("HIENERGY_THREADS", "1")),
                    help="accepted for interface stability; results identical for all values")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_set_sources(p):
        p.add_argument("--set", action="append", help="set file (repeatable)")
        p.add_argument("--recipe", action="append", help="recipe literal (repeatable)")

    def add_caps(p):
        p.add_argument("--cap-tuples", type=int,
                       help="materialized-tuple work bound (default 10^7)")
        p.add_argument("--cap-subsets", type=int,
                       help="exhaustive-subset size bound (default 20)")

    pc = sub.add_parser("compute", help="compute one quantity of a set")
    pc.add_argument("quantity", choices=["Ek", "Tk", "sigmak", "Dk", "Sk", "spectrum",
                                         "Ralpha", "dim", "mag", "magk", "levels", "multE"])
    add_set_sources(pc)
    pc.add_argument("--b", help="second set file (mag/magk)")
    pc.add_argument("--k", type=float)
    pc.add_argument("--alpha", type=float, default=0.5)
    pc.add_argument("--greedy", action="store_true")
    pc.add_argument("--pre", choices=["none", "diff", "sum"], default="none",
                    help="replace A by A-A or A+A before computing")
    pc.add_argument("--json", action="store_true")
    pc.add_argument("--csv", action="store_true")
    pc.add_argument("--out")
    add_caps(pc)
    pc.set_defaults(fn=cmd_compute)

    pg = sub.add_parser("gen", help="generate a set from a recipe literal")
    pg.add_argument("recipe")
    pg.add_argument("--out")
    pg.set_defaults(fn=cmd_gen)

    pv = sub.add_parser("verify", help="run registered checks")
    pv.add_argument("--checks", required=True, help="comma-separated check ids")
    add_set_sources(pv)
    pv.add_argument("--subgroup", action="append", help="p,t pair (repeatable)")
    pv.add_argument("--intset", action="store_true",
                    help="treat lattice sets as integer-set instances")
    pv.add_argument("--report", help="JSON report path")
    pv.add_argument("--csv", help="CSV summary path")
    add_caps(pv)
    pv.set_defaults(fn=cmd_verify)

    pe = sub.add_parser("extract", help="run an extraction pipeline")
    pe.add_argument("pipeline", choices=["bsg1", "bsg2", "smallT4", "cs", "config", "cover"])
    add_set_sources(pe)
    pe.add_argument("--b")
    pe.add_argument("--eps", type=float, default=1.0)
    pe.add_argument("--k", type=int)
    pe.add_argument("--trials", type=int, default=200)
    pe.add_argument("--seed", type=int, default=1)
    pe.add_argument("--nm", action="append", help="n,m pair (repeatable)")
    pe.add_argument("--c", help="configuration coefficients, comma-separated")
    pe.add_argument("--sign", choices=["-", "+"], default="-")
    pe.add_argument("--cap", type=int)
    pe.add_argument("--out")
    add_caps(pe)
    pe.set_defaults(fn=cmd_extract)

    ps = sub.add_parser("suite", help="sweep families of sets through checks")
    ps.add_argument("--checks")
    add_set_sources(ps)
    ps.add_argument("--standard", action="store_true", help="use the standard corpora")
    ps.add_argument("--seed", type=int, default=2024)
    ps.add_argument("--count", type=int, default=30)
    ps.add_argument("--report")
    add_caps(ps)
    ps.set_defaults(fn=cmd_suite)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return USAGE_EXIT if exc.code not in (0, None) else 0
    _apply_global_caps(args)
    try:
        return args.fn(args)
    except SetFileError as exc:
        print(f"set file error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except CapExceededError as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return CAP_EXIT
    except (ValueError, KeyError, groups.GroupError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_EXIT


if __name__ == "__main__":
    sys.exit(main())
