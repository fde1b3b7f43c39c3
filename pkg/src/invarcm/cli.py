"""Command line front end.

Subcommands: ``run`` executes the non-Cohen-Macaulay detector on a module
given by a definition file or a registered example, ``invariants`` prints a
degree-wise invariant basis, ``cocycle`` classifies the cocycle attached to
an invariant basis vector, ``corpus`` replays a tier of registered examples
against their expected outcomes, and ``list-examples`` shows the registry.

The environment variable ``CM_GROEBNER_BUDGET`` caps the number of S-pair
reductions any single Groebner basis run may spend; ``--budget`` overrides
it per invocation.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .cmcheck import CMReport, is_not_cohen_macaulay
from .cohomology import check_cocycle, cocycle_from_invariant, is_coboundary
from .gmodule import Representation
from .invariants import invariant_basis
from .polyalg import BudgetExceeded
from .registry import (
    DefinitionError,
    ModuleDefinition,
    build_representation,
    compare_report,
    examples_in_tier,
    get_example,
    parse_definition,
)

__all__ = ["main"]


def _budget(args) -> int | None:
    if getattr(args, "budget", None) is not None:
        return args.budget
    env = os.environ.get("CM_GROEBNER_BUDGET")
    return int(env) if env else None


def _load(args):
    """(name, definition, record-or-None) from a file path or --example."""
    if getattr(args, "example", None):
        try:
            rec = get_example(args.example)
        except KeyError as e:
            raise SystemExit(f"error: {e.args[0]}")
        return args.example, rec.definition, rec
    if not args.file:
        raise SystemExit("error: give a definition file or --example <id>")
    path = Path(args.file)
    try:
        text = path.read_text()
    except OSError as e:
        raise SystemExit(f"error: cannot read {path}: {e.strerror}")
    try:
        defn = parse_definition(text)
    except DefinitionError as e:
        raise SystemExit(f"error: {path}: {e}")
    return path.stem, defn, None


def _resolve_weights(flag: str | None, defn: ModuleDefinition, rep: Representation):
    """Apply the --weights flag; returns the representation and use_weights."""
    if flag is None:
        return rep, defn.use_weights
    if flag == "off":
        return rep, False
    if flag == "auto":
        if rep.weights is None:
            raise SystemExit("error: no torus weights are available for this module")
        return rep, True
    try:
        ws = tuple(int(t.strip()) for t in flag.split(","))
    except ValueError:
        raise SystemExit("error: --weights takes auto, off, or a comma-separated integer vector")
    if len(ws) != rep.n:
        raise SystemExit(f"error: weight vector has length {len(ws)}, module has dimension {rep.n}")
    return Representation(rep.group, rep.n, rep.matrix, rep.basis_labels, ws), True


def _result_line(name: str, p: int, dim: int, report: CMReport) -> str:
    md = report.first_mismatch_degree
    est = report.estimated_dims[md] if md is not None else None
    act = report.actual_dims[md] if md is not None else None
    return (
        f"RESULT name={name} p={p} dim={dim} dmax={report.dmax} "
        f"verdict={'true' if report.verdict else 'false'} "
        f"mismatch_degree={md if md is not None else '-'} "
        f"estimated={est if est is not None else '-'} "
        f"actual={act if act is not None else '-'}"
    )


def _degree_summary(degrees) -> str:
    counts = Counter(degrees)
    return ", ".join(f"{d} x{counts[d]}" for d in sorted(counts))


def _print_report(name: str, rep: Representation, report: CMReport) -> None:
    print(f"module {name} over {rep.group.name} (p={rep.group.p}), dimension {rep.n}")
    if report.phsop.elements:
        print(
            f"phsop degrees {','.join(str(d) for d in report.phsop.degrees)}; "
            f"residual dimension {report.phsop.residual_dimension}"
        )
    else:
        print("phsop empty")
    print(f"module generators by degree: {_degree_summary(report.generator_degrees)}")
    print(" degree  actual  estimated")
    for d in range(report.dmax + 1):
        mark = "  <-- mismatch" if d == report.first_mismatch_degree else ""
        print(f"{d:7d} {report.actual_dims[d]:7d} {report.estimated_dims[d]:10d}{mark}")
    if report.verdict:
        d = report.first_mismatch_degree
        print(
            f"verdict: true (not Cohen-Macaulay: estimated {report.estimated_dims[d]} "
            f"> actual {report.actual_dims[d]} at degree {d})"
        )
    else:
        print(f"verdict: false (no discrepancy up to degree {report.dmax})")


def cmd_run(args) -> int:
    name, defn, rec = _load(args)
    rep = build_representation(defn)
    rep, use_weights = _resolve_weights(args.weights, defn, rep)
    dmax = args.dmax if args.dmax is not None else defn.dmax
    if dmax is None:
        raise SystemExit("error: no degree bound: give --dmax or an `option dmax=` line")
    maxdp = (
        args.max_phsop_degree if args.max_phsop_degree is not None else defn.max_phsop_degree
    )
    try:
        report = is_not_cohen_macaulay(
            rep,
            dmax,
            use_weights=use_weights,
            max_phsop_degree=maxdp,
            multi_pass=args.multi_pass,
            budget=_budget(args),
        )
    except BudgetExceeded as e:
        print(f"error: computation budget exhausted: {e}", file=sys.stderr)
        return 1
    _print_report(name, rep, report)
    print(_result_line(name, rep.group.p, rep.n, report))
    if rec is not None:
        diffs = compare_report(rec, report)
        if diffs:
            print(f"golden mismatch for {name}: " + "; ".join(diffs), file=sys.stderr)
            return 1
        print(f"golden values for {name} reproduced")
    return 0


def cmd_invariants(args) -> int:
    name, defn, rec = _load(args)
    if args.degree < 0:
        raise SystemExit("error: --degree must be nonnegative")
    rep = build_representation(defn)
    rep, use_weights = _resolve_weights(args.weights, defn, rep)
    try:
        basis = invariant_basis(rep, args.degree, use_weights=use_weights, budget=_budget(args))
    except BudgetExceeded as e:
        print(f"error: computation budget exhausted: {e}", file=sys.stderr)
        return 1
    for f in basis.elements:
        print(f)
    return 0


def cmd_cocycle(args) -> int:
    name, defn, rec = _load(args)
    rep = build_representation(defn)
    index = args.invariant_index if args.invariant_index is not None else rep.n - 1
    try:
        c = cocycle_from_invariant(rep, index)
    except ValueError as e:
        raise SystemExit(f"error: {e}")
    check = check_cocycle(c)
    if not check.passed:
        print("error: the connecting map fails the cocycle identity", file=sys.stderr)
        return 1
    witness = is_coboundary(c)
    if witness is None:
        print("cocycle: nontrivial")
    else:
        print("cocycle: trivial")
        text = ",".join(str(v) for v in witness) if any(witness) else "0"
        print(f"witness: {text}")
    return 0


def _corpus_worker(example_id: str, budget: int | None) -> dict:
    rec = get_example(example_id)
    t0 = time.perf_counter()
    try:
        rep = build_representation(rec.definition)
        report = is_not_cohen_macaulay(
            rep,
            rec.dmax,
            use_weights=rec.definition.use_weights,
            max_phsop_degree=rec.definition.max_phsop_degree,
            budget=budget,
        )
    except BudgetExceeded as e:
        return {
            "id": example_id,
            "ok": False,
            "seconds": time.perf_counter() - t0,
            "note": f"budget exhausted: {e}",
            "result": None,
        }
    diffs = compare_report(rec, report)
    return {
        "id": example_id,
        "ok": not diffs,
        "seconds": time.perf_counter() - t0,
        "note": "; ".join(diffs),
        "result": _result_line(example_id, rep.group.p, rep.n, report),
    }


def cmd_corpus(args) -> int:
    try:
        records = examples_in_tier(args.tier)
    except ValueError as e:
        raise SystemExit(f"error: {e}")
    if not records:
        print(f"corpus: no examples in tier {args.tier}, nothing to check")
        return 0
    budget = _budget(args)
    results: dict[str, dict] = {}
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            futures = {r.id: pool.submit(_corpus_worker, r.id, budget) for r in records}
            for rid, fut in futures.items():
                results[rid] = fut.result()
    else:
        for r in records:
            results[r.id] = _corpus_worker(r.id, budget)
    failed = 0
    for r in records:
        res = results[r.id]
        status = "pass" if res["ok"] else "FAIL"
        if not res["ok"]:
            failed += 1
        note = f"  ({res['note']})" if res["note"] else ""
        line = res["result"] or f"RESULT name={r.id} (not completed)"
        print(f"{status:4s} {res['seconds']:8.1f}s  {line}{note}")
    print(f"corpus: {len(records) - failed} passed, {failed} failed")
    return 1 if failed else 0


def cmd_list_examples(args) -> int:
    print(f"{'id':6s} {'tier':7s} {'group':11s} {'p':>2s} {'dmax':>4s}  expected")
    for tier in ("all",):
        for rec in examples_in_tier(tier):
            d = rec.definition
            exp = f"verdict={'true' if rec.expected_verdict else 'false'}"
            if rec.expected_mismatch is not None:
                exp += f" mismatch={rec.expected_mismatch}"
            if rec.expected_estimated is not None:
                exp += f" estimated={rec.expected_estimated} actual={rec.expected_actual}"
            print(f"{rec.id:6s} {rec.tier:7s} {d.group_name:11s} {d.p:2d} {rec.dmax:4d}  {exp}")
    return 0


def _add_input(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("file", nargs="?", help="module definition file")
    sub.add_argument("--example", help="registered example id instead of a file")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="invarcm",
        description="Detect non-Cohen-Macaulay invariant rings of algebraic groups over GF(p).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run the detector on a module")
    _add_input(p_run)
    p_run.add_argument("--dmax", type=int, help="degree bound (overrides the definition)")
    p_run.add_argument(
        "--weights",
        help="auto (use torus weights), off, or an explicit w1,...,wn vector",
    )
    p_run.add_argument("--max-phsop-degree", type=int, dest="max_phsop_degree")
    p_run.add_argument("--multi-pass", type=int, default=1, dest="multi_pass")
    p_run.add_argument("--budget", type=int, help="S-pair cap per Groebner run")
    p_run.set_defaults(func=cmd_run)

    p_inv = sub.add_parser("invariants", help="print an invariant basis in one degree")
    _add_input(p_inv)
    p_inv.add_argument("--degree", type=int, required=True)
    p_inv.add_argument("--weights", help="auto, off, or an explicit vector")
    p_inv.add_argument("--budget", type=int)
    p_inv.set_defaults(func=cmd_invariants)

    p_coc = sub.add_parser(
        "cocycle", help="classify the cocycle attached to an invariant basis vector"
    )
    _add_input(p_coc)
    p_coc.add_argument(
        "--invariant-index",
        type=int,
        dest="invariant_index",
        help="index of the invariant basis vector (default: the last one)",
    )
    p_coc.set_defaults(func=cmd_cocycle)

    p_cor = sub.add_parser("corpus", help="replay registered examples against expectations")
    p_cor.add_argument("--tier", choices=("fast", "medium", "long", "all"), default="fast")
    p_cor.add_argument("--jobs", type=int, default=1, help="run examples in parallel")
    p_cor.add_argument("--budget", type=int)
    p_cor.set_defaults(func=cmd_corpus)

    p_lst = sub.add_parser("list-examples", help="show the example registry")
    p_lst.set_defaults(func=cmd_list_examples)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SystemExit as e:
        if isinstance(e.code, str):
            print(e.code, file=sys.stderr)
            return 2
        raise
    except (ValueError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
