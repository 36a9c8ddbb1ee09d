"""Batch command line front end.

Commands:  prove <sequent-file> | consistent <kb-file>
           | subsumes <kb-file> <P> <Q> | instance <kb-file> <a> <P>

Consistency is decided by proving the KB-antecedent sequent with an
empty consequent (derivable = unsatisfiable = inconsistent); subsumption
and instance checking prove ``KB |- P sub Q`` and ``KB |- a : P``.

Exit codes: 0 the sequent was proved (valid / inconsistent KB /
subsumed / entailed), 1 a counter-model was found, 2 unknown within
budget, 3 input error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .calculus import UndefinedDdr, assemble_calculus
from .countermodel import (
    OracleLimit,
    extract_model,
    find_countermodel,
)
from .parser import (
    ParseError,
    ProfileViolation,
    parse_concept,
    parse_ddr_file,
    parse_kb,
    parse_profile,
    parse_sequent,
)
from .prover import PROVED, SATURATED, Budget, prove, tree_to_obj, tree_to_text
from .syntax import (
    ConceptAssertion,
    Gci,
    Individual,
    LanguageProfile,
    SyntaxError_,
    UnknownRra,
    show,
)

_INPUT_ERRORS = (OSError, ParseError, ProfileViolation, SyntaxError_,
                 UndefinedDdr, UnknownRra, OracleLimit, ValueError)


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--profile", metavar="FILE",
                        help="language profile file (one flag or 'ddr Name' per line)")
    common.add_argument("--ddr", metavar="FILE",
                        help="descriptive definition file")
    common.add_argument("--budget", type=int, default=10_000, metavar="N",
                        help="rule application budget (default 10000)")
    common.add_argument("--oracle", type=int, default=0, metavar="K",
                        help="cross-check counter-models by enumeration up to domain size K")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--emit", choices=("proof", "model", "both"), default="both")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    ap = argparse.ArgumentParser(prog="dlsequent", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)
    p = sub.add_parser("prove", parents=[common], help="prove a sequent file")
    p.add_argument("sequent_file")
    c = sub.add_parser("consistent", parents=[common], help="check KB consistency")
    c.add_argument("kb_file")
    s = sub.add_parser("subsumes", parents=[common],
                       help="does concept P subsume into Q under the KB")
    s.add_argument("kb_file")
    s.add_argument("concept_p")
    s.add_argument("concept_q")
    i = sub.add_parser("instance", parents=[common], help="is a an instance of P")
    i.add_argument("kb_file")
    i.add_argument("individual")
    i.add_argument("concept")
    return ap


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


_VERDICTS = {
    ("prove", PROVED): "proved",
    ("prove", SATURATED): "countermodel",
    ("consistent", PROVED): "inconsistent",
    ("consistent", SATURATED): "consistent",
    ("subsumes", PROVED): "subsumed",
    ("subsumes", SATURATED): "not subsumed",
    ("instance", PROVED): "entailed",
    ("instance", SATURATED): "not entailed",
}


def run_task(args) -> int:
    profile = parse_profile(_read(args.profile)) if args.profile else LanguageProfile()
    ddrs = parse_ddr_file(_read(args.ddr)) if args.ddr else ()
    if ddrs:
        profile = LanguageProfile(
            profile.flags, profile.ddr_names | {d.rel for d in ddrs})
    profile = profile.normalized()
    calc = assemble_calculus(profile, ddrs)

    if args.command == "prove":
        root = parse_sequent(_read(args.sequent_file), profile)
    else:
        kb = parse_kb(_read(args.kb_file), profile)
        if args.command == "consistent":
            root = kb.sequent()
        elif args.command == "subsumes":
            goal = Gci(parse_concept(args.concept_p, profile),
                       parse_concept(args.concept_q, profile))
            root = kb.sequent((goal,))
        else:
            goal = ConceptAssertion(Individual(args.individual),
                                    parse_concept(args.concept, profile))
            root = kb.sequent((goal,))

    outcome = prove(root, calc, Budget(steps=args.budget))
    report = {
        "task": args.command,
        "sequent": show(root),
        "verdict": _VERDICTS.get((args.command, outcome.verdict), "unknown"),
        "stats": {
            "steps": outcome.stats.steps,
            "branches": outcome.stats.branch_count,
            "max_branch_size": outcome.stats.max_branch_size,
        },
    }

    if outcome.verdict == PROVED:
        if args.emit in ("proof", "both"):
            report["proof"] = tree_to_obj(outcome.tree)
        _emit(args, report, proof_tree=outcome.tree)
        return 0

    if outcome.verdict == SATURATED:
        model = extract_model(outcome.branch)
        if args.emit in ("model", "both"):
            report["model"] = model.to_obj()
        if args.oracle > 0:
            found = find_countermodel(root, args.oracle, calc.ddrs)
            report["oracle"] = {
                "max_domain": args.oracle,
                "countermodel_found": found is not None,
            }
            if found is not None:
                report["oracle"]["model"] = found.to_obj()
        _emit(args, report)
        return 1

    _emit(args, report)
    return 2


def _emit(args, report, proof_tree=None):
    if args.format == "json":
        print(json.dumps(report, indent=2))
        return
    print(f"task:    {report['task']}")
    print(f"sequent: {report['sequent']}")
    print(f"verdict: {report['verdict']}")
    st = report["stats"]
    print(f"stats:   steps={st['steps']} branches={st['branches']} "
          f"max-branch-size={st['max_branch_size']}")
    if proof_tree is not None and "proof" in report:
        print("proof:")
        print(tree_to_text(proof_tree))
    if "model" in report:
        print("countermodel: " + json.dumps(report["model"]))
    if "oracle" in report:
        found = report["oracle"]["countermodel_found"]
        print(f"oracle:  countermodel {'found' if found else 'not found'} "
              f"up to domain size {report['oracle']['max_domain']}")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run_task(args)
    except _INPUT_ERRORS as e:
        print(f"error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
