import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

import pandas as pd

from src.errors import AlphaSatError, ParameterError
from src.formats import (
    fingerprint,
    header_kind,
    load_formula,
    load_hypergraph,
    save_formula,
    save_hypergraph,
    write_dimacs,
    write_hypergraph,
)
from src.maximal import edge_count_summary, grow_maximal
from src.model import CnfFormula, complete_formula, metrics
from src.oracle import brute_force_sat
from src.pipeline import upper_bound_pipeline
from src.shrink import shrink_formula, shrink_hypergraph
from src.solver import lll_clause_condition, solve_alpha_intersecting
from src.storage import ResultStore
from src.thresholds import guarantee_check, threshold_bounds
from src.unsat import build_unsat

logger = logging.getLogger("src.main")

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_ERROR = 2

METRICS_COLUMNS = [
    "n", "m", "width", "alpha_measured", "i", "delta_vertex", "delta_clause",
    "L_n", "L_m", "L_i", "guaranteed_by",
]


def _emit_json(payload: Dict[str, Any]) -> None:
    print(json.dumps(payload, indent=2, sort_keys=False, default=str))


def metrics_row(
    formula: CnfFormula, k: Optional[int] = None, alpha: Optional[int] = None
) -> Dict[str, Any]:
    """Measured quantities plus the lower thresholds for (k, alpha) when they apply"""
    report = metrics(formula)
    row: Dict[str, Any] = report.to_dict()
    k = k if k is not None else report.width
    alpha = alpha if alpha is not None else max(report.alpha_measured, 1)
    row.update({"L_n": None, "L_m": None, "L_i": None, "guaranteed_by": []})
    if k and k > alpha >= 1:
        check = guarantee_check(report, k, alpha)
        bounds = check.bounds
        row.update({
            "L_n": bounds.lower_n,
            "L_m": bounds.lower_m,
            "L_i": bounds.lower_i,
            "guaranteed_by": check.to_dict()["guaranteed_by"],
        })
    row["k"] = k
    row["alpha"] = alpha
    return row


def run_gen_maximal(args: argparse.Namespace) -> int:
    build = grow_maximal(args.n, args.k, args.alpha, args.seed,
                         sample_rejections=args.sample_budget)
    save_hypergraph(args.out, build.hypergraph)
    m, bound, de_caen = edge_count_summary(build.hypergraph, args.alpha)
    _emit_json({
        "n": args.n, "k": args.k, "alpha": args.alpha, "m": m,
        "min_edges_bound": bound, "de_caen_bound": de_caen,
        "mode": build.mode, "certified_maximal": build.certified_maximal,
        "out": args.out,
    })
    return EXIT_OK


def run_shrink(args: argparse.Namespace) -> int:
    data = Path(args.input).read_bytes()
    if header_kind(data) == "cnf":
        formula = load_formula(args.input)
        shrunk = shrink_formula(formula, args.beta)
        save_formula(args.out, shrunk)
        summary = {"kind": "cnf", "m": shrunk.m, "width": shrunk.width}
    else:
        hypergraph = load_hypergraph(args.input)
        shrunk = shrink_hypergraph(hypergraph, args.beta)
        save_hypergraph(args.out, shrunk)
        summary = {"kind": "hyg", "m": shrunk.m, "width": shrunk.width}
    summary.update({"beta": args.beta, "out": args.out})
    _emit_json(summary)
    return EXIT_OK


def run_build_unsat(args: argparse.Namespace) -> int:
    hypergraph = load_hypergraph(args.input)
    result = build_unsat(hypergraph, order=args.order, seed=args.seed)
    save_formula(args.out, result.formula)
    if args.trace:
        trace = pd.DataFrame({
            "step": range(len(result.trace)),
            "uncovered": result.trace,
        })
        Path(args.trace).parent.mkdir(parents=True, exist_ok=True)
        trace.to_csv(args.trace, index=False)
    _emit_json({
        "n": hypergraph.n, "m": hypergraph.m,
        "final_uncovered": result.final_uncovered,
        "unsatisfiable": result.unsatisfiable,
        "out": args.out,
    })
    return EXIT_OK if result.unsatisfiable else EXIT_NEGATIVE


def run_pipeline(args: argparse.Namespace) -> int:
    result = upper_bound_pipeline(
        args.k, args.alpha, n=args.n, with_polarity=args.with_polarity,
        seed=args.seed, sample_rejections=args.sample_budget,
    )
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    save_hypergraph(out_dir / "H.hyg", result.hypergraph)
    save_hypergraph(out_dir / "H_shrunk.hyg", result.shrunk)
    if result.formula is not None:
        save_formula(out_dir / "F.cnf", result.formula)
        save_formula(out_dir / "F_shrunk.cnf", result.shrunk_formula)
    (out_dir / "report.json").write_text(json.dumps(result.report, indent=2, default=str))

    if args.store:
        shrunk = result.report["shrunk"]
        row = dict(shrunk)
        row.update({
            "fingerprint": fingerprint(write_hypergraph(result.shrunk)),
            "source": str(out_dir / "H_shrunk.hyg"),
            "width": args.k,
            "alpha": args.alpha,
        })
        saved = ResultStore().save_grouped([row])
        logger.info("stored pipeline row in %s", saved["files"])

    _emit_json(result.report)
    return EXIT_OK if result.checks_passed else EXIT_NEGATIVE


def run_solve(args: argparse.Namespace) -> int:
    formula = load_formula(args.input)
    if formula.m and formula.width != args.k:
        raise ParameterError(f"formula width {formula.width} does not match --k {args.k}")
    result = solve_alpha_intersecting(formula, args.alpha, seed=args.seed,
                                      max_resamples=args.max_resamples)
    payload = result.to_dict()
    if formula.m:
        clause_condition = lll_clause_condition(formula)
        payload["clause_condition"] = {
            "max_clause_degree": clause_condition.max_clause_degree,
            "limit": clause_condition.limit,
            "passes": clause_condition.passes,
        }
    _emit_json(payload)
    return EXIT_OK if result.solved else EXIT_NEGATIVE


def run_metrics(args: argparse.Namespace) -> int:
    formula = load_formula(args.input)
    row = metrics_row(formula, args.k, args.alpha)
    if args.format == "json":
        _emit_json({column: row[column] for column in METRICS_COLUMNS})
    else:
        csv_row = {column: row[column] for column in METRICS_COLUMNS}
        csv_row["guaranteed_by"] = ";".join(row["guaranteed_by"])
        pd.DataFrame([csv_row], columns=METRICS_COLUMNS).to_csv(sys.stdout, index=False)

    if args.store:
        stored = dict(row)
        stored["guaranteed_by"] = ";".join(row["guaranteed_by"])
        stored.update({
            "fingerprint": fingerprint(write_dimacs(formula)),
            "source": args.input,
            "width": row["k"] or 0,
        })
        saved = ResultStore().save_grouped([stored])
        logger.info("stored metrics row for %s in %s", args.input, saved["files"])
    return EXIT_OK


def run_thresholds(args: argparse.Namespace) -> int:
    _emit_json(threshold_bounds(args.k, args.alpha).to_dict())
    return EXIT_OK


def run_verify(args: argparse.Namespace) -> int:
    formula = load_formula(args.input)
    result = brute_force_sat(formula)
    print(result.verdict)
    if result.satisfiable:
        literals = [v + 1 if b else -(v + 1) for v, b in enumerate(result.witness.bits)]
        print("v " + " ".join(str(x) for x in literals + [0]))
        return EXIT_OK
    return EXIT_NEGATIVE


def run_complete(args: argparse.Namespace) -> int:
    formula = complete_formula(args.k)
    save_formula(args.out, formula)
    print(f"Wrote {formula.m} clauses on {formula.n} variables to {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="alphasat",
        description="Satisfiability thresholds for alpha-intersecting k-CNF formulas",
    )
    parser.add_argument("--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-maximal", help="greedy maximal alpha-intersecting hypergraph")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--alpha", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--sample-budget", type=int, default=None,
                   help="sampling mode: stop after this many consecutive rejections")
    p.set_defaults(handler=run_gen_maximal)

    p = sub.add_parser("shrink", help="beta-shrink a .hyg or .cnf file")
    p.add_argument("--beta", type=int, required=True)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=run_shrink)

    p = sub.add_parser("build-unsat", help="greedy polarity over a hypergraph")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--order", choices=["input", "shuffle"], default="input")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trace", default=None, help="CSV of uncovered counts per step")
    p.set_defaults(handler=run_build_unsat)

    p = sub.add_parser("pipeline", help="shrunk maximal construction with structural checks")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--alpha", type=int, required=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--with-polarity", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--sample-budget", type=int, default=None)
    p.add_argument("--store", action="store_true", help="append the row to the results store")
    p.set_defaults(handler=run_pipeline)

    p = sub.add_parser("solve", help="shrink then Moser-Tardos")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--alpha", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-resamples", type=int, default=None)
    p.set_defaults(handler=run_solve)

    p = sub.add_parser("metrics", help="measured quantities and lower thresholds")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--alpha", type=int, default=None)
    p.add_argument("--format", choices=["csv", "json"], default="json")
    p.add_argument("--store", action="store_true", help="append the row to the results store")
    p.set_defaults(handler=run_metrics)

    p = sub.add_parser("thresholds", help="L and U threshold families")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--alpha", type=int, required=True)
    p.set_defaults(handler=run_thresholds)

    p = sub.add_parser("verify", help="brute-force satisfiability (n <= coverage cap)")
    p.add_argument("--in", dest="input", required=True)
    p.set_defaults(handler=run_verify)

    p = sub.add_parser("complete", help="all 2^k clauses on k variables")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=run_complete)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code not in (0, None) else EXIT_OK

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.handler(args)
    except (AlphaSatError, OSError) as e:
        logger.debug("%s failed", args.command, exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
