"""Command-line surface: one process per invocation, all state on disk.

Exit status: 0 on success, 1 on semantic errors (bad formula or model,
failed fuzz run), 2 on usage errors.  ``--agents`` fixes the grand
coalition and its canonical order for everything downstream; when omitted,
it defaults to the agents the formula mentions.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import model as model_io
from .decide import ClauseOutcome, decide_sat, decide_valid
from .formula import (AgentUniverse, ParseError, agents_mentioned,
                      modal_depth, parse, pretty)
from .model import ModelError, classify, load_fixture
from .normalform import to_standard_conjunction
from .oracle import DifferentialConfig, SearchBounds, differential_run
from .semantics import PointedModel, holds


def _universe(text: str | None, formula_text: str | None = None) -> AgentUniverse:
    """Grand coalition from --agents, or (by default) from the agents the
    formula mentions; a fresh singleton when it mentions none."""
    if text is not None:
        names = tuple(a.strip() for a in text.split(",") if a.strip())
        return AgentUniverse(names)
    names = agents_mentioned(formula_text or "")
    return AgentUniverse(names or ("a",))


def _read_formula(args) -> str:
    if args.formula is not None:
        return args.formula
    with open(args.formula_file, encoding="utf-8") as fh:
        return fh.read()


def _load_model(path: str):
    try:
        return load_fixture(path)
    except ModelError:
        return model_io.load(path)


def _trace_json(trace: tuple[ClauseOutcome, ...]) -> list[dict]:
    out = []
    for entry in trace:
        out.append({
            "clause": entry.clause.render() if entry.clause else None,
            "case": entry.case,
            "pair": list(entry.pair) if entry.pair else None,
            "failed_pairs": [list(p) for p in entry.failed_pairs],
        })
    return out


def _trace_text(trace: tuple[ClauseOutcome, ...]) -> list[str]:
    lines = []
    for k, entry in enumerate(trace):
        if entry.case == "propositional":
            lines.append(f"clause {k}: settled by truth table")
            continue
        head = f"clause {k}: {entry.clause.render()}"
        if entry.case == "gamma":
            lines.append(head + "\n  valid: gamma is a tautology")
        elif entry.case == "pair":
            i, j = entry.pair
            lines.append(head + f"\n  valid: reduction of pair (ni {i}, pi {j})")
        else:
            pairs = ", ".join(f"({i},{j})" for i, j in entry.failed_pairs)
            lines.append(head + f"\n  refuted: every pair failed [{pairs}]")
    return lines


def cmd_parse(args) -> int:
    text = _read_formula(args)
    universe = _universe(args.agents, text)
    f = parse(text, universe)
    if args.format == "json":
        print(json.dumps({"formula": pretty(f), "depth": modal_depth(f)}))
    else:
        print(pretty(f))
    return 0


def cmd_depth(args) -> int:
    text = _read_formula(args)
    f = parse(text, _universe(args.agents, text))
    print(modal_depth(f))
    return 0


def cmd_nf(args) -> int:
    text = _read_formula(args)
    universe = _universe(args.agents, text)
    f = parse(text, universe)
    clauses = to_standard_conjunction(f, universe)
    if args.format == "json":
        print(json.dumps({"clauses": [c.render() for c in clauses]}))
    else:
        for c in clauses:
            print(c.render())
    return 0


def cmd_classify(args) -> int:
    m = _load_model(args.model)
    summary = classify(m)
    if args.format == "json":
        print(json.dumps({
            "is_gcgm": summary.is_gcgm,
            "is_cgm": summary.is_cgm,
            "serial": summary.serial,
            "independent": summary.independent,
            "deterministic": summary.deterministic,
            "witnesses": summary.witnesses,
        }))
    elif summary.is_cgm:
        print("CGM: serial, independent, deterministic")
    else:
        print("GCGM: " + "; ".join(summary.witnesses))
    return 0


def cmd_mc(args) -> int:
    m = _load_model(args.model)
    f = parse(_read_formula(args), m.universe)
    value = holds(PointedModel(m, args.state), f)
    if args.format == "json":
        print(json.dumps({"verdict": value}))
    else:
        print("true" if value else "false")
    return 0


def _emit_model(pm: PointedModel, path: str | None) -> str | None:
    if path is None:
        return None
    model_io.save(pm.model, path)
    return path


def cmd_valid(args) -> int:
    text = _read_formula(args)
    universe = _universe(args.agents, text)
    f = parse(text, universe)
    verdict = decide_valid(f, universe)
    path = None if verdict.valid else _emit_model(verdict.countermodel,
                                                  args.countermodel_out)
    if args.format == "json":
        print(json.dumps({
            "verdict": "valid" if verdict.valid else "invalid",
            "countermodel_path": path,
            "countermodel_state": None if verdict.valid else verdict.countermodel.state,
            "trace": _trace_json(verdict.trace),
        }))
    else:
        print("VALID" if verdict.valid else "INVALID")
        if not verdict.valid:
            print(f"countermodel state: {verdict.countermodel.state}"
                  + (f" (written to {path})" if path else ""))
        for line in _trace_text(verdict.trace):
            print(line)
    return 0


def cmd_sat(args) -> int:
    text = _read_formula(args)
    universe = _universe(args.agents, text)
    f = parse(text, universe)
    verdict = decide_sat(f, universe)
    path = _emit_model(verdict.witness, args.witness_out) \
        if verdict.satisfiable else None
    if args.format == "json":
        print(json.dumps({
            "verdict": "satisfiable" if verdict.satisfiable else "unsatisfiable",
            "countermodel_path": path,
            "witness_state": verdict.witness.state if verdict.satisfiable else None,
            "trace": _trace_json(verdict.trace),
        }))
    else:
        print("SATISFIABLE" if verdict.satisfiable else "UNSATISFIABLE")
        if verdict.satisfiable:
            print(f"witness state: {verdict.witness.state}"
                  + (f" (written to {path})" if path else ""))
    return 0


def cmd_countermodel(args) -> int:
    text = _read_formula(args)
    universe = _universe(args.agents, text)
    f = parse(text, universe)
    verdict = decide_valid(f, universe)
    if verdict.valid:
        print("formula is valid; no countermodel exists", file=sys.stderr)
        return 1
    path = _emit_model(verdict.countermodel, args.out)
    if args.format == "json":
        print(json.dumps({"countermodel_path": path,
                          "countermodel_state": verdict.countermodel.state}))
    else:
        print(f"{verdict.countermodel.state} (written to {path})")
    return 0


def cmd_fuzz(args) -> int:
    universe = _universe(args.agents)
    atoms = tuple(a.strip() for a in args.atoms.split(",") if a.strip())
    bounds = SearchBounds(
        universe=universe,
        max_states=args.max_states,
        max_actions=args.max_actions,
        atoms=atoms,
        mode="sampled",
        n_samples=args.samples,
        seed=args.seed,
    )
    config = DifferentialConfig(
        universe=universe,
        atoms=atoms,
        bounds=bounds,
        n_formulas=args.formulas,
        max_depth=args.depth,
        seed=args.seed,
        scheme_models=args.scheme_models,
    )
    report = differential_run(config)
    if args.format == "json":
        print(json.dumps(report.to_json_dict()))
    else:
        print(report.to_text())
    return 0 if report.ok else 1


_AGENTS_HELP = ("comma-separated agent names fixing the grand coalition and "
                "its canonical order (default: the agents the formula mentions)")


def _add_formula_args(sub) -> None:
    group = sub.add_mutually_exclusive_group(required=True)
    group.add_argument("--formula", help="formula text")
    group.add_argument("--formula-file", help="read the formula from a file")


def _add_format_arg(sub) -> None:
    sub.add_argument("--format", choices=("human", "json"), default="human")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mcl",
        description="Minimal coalition logic: parse, model-check, decide, refute.")
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("parse", help="echo the lowered core formula")
    sub.add_argument("--agents", help=_AGENTS_HELP)
    _add_formula_args(sub)
    _add_format_arg(sub)
    sub.set_defaults(run=cmd_parse)

    sub = subs.add_parser("depth", help="print the modal depth")
    sub.add_argument("--agents", help=_AGENTS_HELP)
    _add_formula_args(sub)
    _add_format_arg(sub)
    sub.set_defaults(run=cmd_depth)

    sub = subs.add_parser("nf", help="print the standard clauses")
    sub.add_argument("--agents", help=_AGENTS_HELP)
    _add_formula_args(sub)
    _add_format_arg(sub)
    sub.set_defaults(run=cmd_nf)

    sub = subs.add_parser("classify", help="report model properties")
    sub.add_argument("--model", required=True,
                     help="model file, or a bundled name (two_masks, one_mask)")
    _add_format_arg(sub)
    sub.set_defaults(run=cmd_classify)

    sub = subs.add_parser("mc", help="truth value at a state")
    sub.add_argument("--model", required=True)
    sub.add_argument("--state", required=True)
    _add_formula_args(sub)
    _add_format_arg(sub)
    sub.set_defaults(run=cmd_mc)

    sub = subs.add_parser("valid", help="decide validity")
    sub.add_argument("--agents", help=_AGENTS_HELP)
    _add_formula_args(sub)
    sub.add_argument("--countermodel-out", help="write the countermodel here")
    _add_format_arg(sub)
    sub.set_defaults(run=cmd_valid)

    sub = subs.add_parser("sat", help="decide satisfiability")
    sub.add_argument("--agents", help=_AGENTS_HELP)
    _add_formula_args(sub)
    sub.add_argument("--witness-out", help="write the witness model here")
    _add_format_arg(sub)
    sub.set_defaults(run=cmd_sat)

    sub = subs.add_parser("countermodel",
                          help="build a countermodel for an invalid formula")
    sub.add_argument("--agents", help=_AGENTS_HELP)
    _add_formula_args(sub)
    sub.add_argument("--out", required=True)
    _add_format_arg(sub)
    sub.set_defaults(run=cmd_countermodel)

    sub = subs.add_parser("fuzz", help="differential run: decider vs search")
    sub.add_argument("--agents", required=True,
                     help="comma-separated agent names (no formula to scan)")
    sub.add_argument("--atoms", default="p,q")
    sub.add_argument("--formulas", type=int, default=50)
    sub.add_argument("--depth", type=int, default=2)
    sub.add_argument("--max-states", type=int, default=3)
    sub.add_argument("--max-actions", type=int, default=2)
    sub.add_argument("--samples", type=int, default=200)
    sub.add_argument("--scheme-models", type=int, default=0)
    sub.add_argument("--seed", type=int, default=0)
    _add_format_arg(sub)
    sub.set_defaults(run=cmd_fuzz)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except (ParseError, ModelError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
