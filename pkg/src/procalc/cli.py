"""Command-line front-end.

Subcommands: translate, lts, verify, export.  Exit codes are stable for
CI use: 0 pass, 1 check failure or failed operation, 2 usage or parse
error, 3 exploration budget exceeded.
"""

import argparse
import json
import os
import sys

from . import equivalence, io, mn2csp, semantics, syntax, translate

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

DEFAULT_MAX_STATES = 10000
DEFAULT_MAX_DEPTH = 64


def _default_max_states():
    value = os.environ.get("PROCALC_BUDGET")
    if value:
        try:
            return max(1, int(value))
        except ValueError:
            pass
    return DEFAULT_MAX_STATES


def build_arg_parser():
    parser = argparse.ArgumentParser(
        prog="procalc",
        description="CCS-to-CSPmn translation and bisimulation toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_budget_flags(p):
        p.add_argument("--max-states", type=int, default=None,
                       help="state budget for LTS exploration (default 10000, "
                            "or PROCALC_BUDGET)")
        p.add_argument("--max-depth", type=int, default=DEFAULT_MAX_DEPTH,
                       help="depth budget for LTS exploration (default 64)")
        p.add_argument("--strict-premise", action="store_true",
                       help="m-among-n synchronisation requires every "
                            "component to be ready")
        p.add_argument("--format", choices=["text", "json", "dot"],
                       default="text", help="output format (default text)")

    p_translate = sub.add_parser("translate", help="translate a CCS term")
    p_translate.add_argument("input", help="input file (CCS)")
    p_translate.add_argument("--pipeline", choices=["mn", "gstar", "bridge"],
                             default="mn",
                             help="mn: one sync name per CCS name; gstar: "
                                  "pair names, plain CSP; bridge: run both "
                                  "and compare")
    add_budget_flags(p_translate)

    p_lts = sub.add_parser("lts", help="build and export a transition system")
    p_lts.add_argument("input", help="input file")
    p_lts.add_argument("--calculus", choices=["ccs", "ccstau", "cspmn"],
                       default="ccs", help="input calculus (default ccs)")
    add_budget_flags(p_lts)

    p_verify = sub.add_parser("verify", help="check a translation claim")
    p_verify.add_argument("input", help="input file")
    p_verify.add_argument("--check", choices=["translation", "mn2csp", "bridge"],
                          default="translation",
                          help="translation: CCS vs its CSPmn image; mn2csp: "
                               "CSPmn vs its plain-CSP elaboration; bridge: "
                               "gstar pipeline equals mn pipeline")
    p_verify.add_argument("--bounded", type=int, default=0, metavar="K",
                          help="non-authoritative bisimulation up to depth K "
                               "instead of the exact check")
    add_budget_flags(p_verify)

    p_export = sub.add_parser("export", help="emit machine-readable CSP (CSPm)")
    p_export.add_argument("input", help="input file (.ccs or .cspmn)")
    add_budget_flags(p_export)
    return parser


def _read_input(path):
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _budget(args):
    max_states = args.max_states if args.max_states else _default_max_states()
    return semantics.ExplorationBudget(max_states=max_states,
                                       max_depth=args.max_depth)


def _emit(args, text_lines, json_doc):
    if args.format == "json":
        print(json.dumps(json_doc, indent=2, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def cmd_translate(args):
    source = io.parse_ccs(_read_input(args.input))
    if args.pipeline == "mn":
        term = syntax.canonicalise(translate.ccs2csp3(source))
        _emit(args, [io.print_proc(term)], {"pipeline": "mn",
                                            "term": io.print_proc(term)})
        return EXIT_OK
    if args.pipeline == "gstar":
        term = syntax.canonicalise(translate.ccs2csp_legacy(source))
        _emit(args, [io.print_proc(term)], {"pipeline": "gstar",
                                            "term": io.print_proc(term)})
        return EXIT_OK
    legacy = syntax.canonicalise(translate.gstar2g2(translate.ccs2csp_legacy(source)))
    direct = syntax.canonicalise(translate.ccs2csp3(source))
    equal = legacy == direct
    _emit(args, [
        "gstar2g2 o gstar: %s" % io.print_proc(legacy),
        "mn:               %s" % io.print_proc(direct),
        "terms equal: %s" % ("true" if equal else "false"),
    ], {"pipeline": "bridge", "gstar2g2": io.print_proc(legacy),
        "mn": io.print_proc(direct), "equal": equal})
    return EXIT_OK if equal else EXIT_FAIL


_PARSERS = {"ccs": io.parse_ccs, "ccstau": io.parse_ccstau, "cspmn": io.parse_cspmn}


def cmd_lts(args):
    term = _PARSERS[args.calculus](_read_input(args.input))
    lts = semantics.build_lts(term, args.calculus, _budget(args),
                              strict_premise=args.strict_premise)
    summary = "states: %d  transitions: %d  complete: %s" % (
        len(lts.states), len(lts.transitions), "true" if lts.complete else "false")
    if args.format == "text":
        print(summary)
    elif args.format == "json":
        print(io.export_lts(lts, "json"), end="")
        print(summary, file=sys.stderr)
    else:
        print(io.export_lts(lts, "dot"), end="")
        print(summary, file=sys.stderr)
    if not lts.complete:
        print("note: exploration budget hit; the system is incomplete",
              file=sys.stderr)
    return EXIT_OK


def _verify_translation(args, budget):
    source = io.parse_ccs(_read_input(args.input))
    target = translate.ccs2csp3(source)
    if args.bounded:
        res = equivalence.bounded_bisim(
            source, semantics.step_function("ccs"),
            target, semantics.step_function("cspmn", args.strict_premise),
            args.bounded)
        doc = res.to_json()
        doc["check"] = "translation"
        lines = ["check: translation (bounded, depth %d, non-authoritative)"
                 % args.bounded,
                 "verdict: %s" % ("no violation" if res.verdict else "violation")]
        if res.violation:
            lines.append("first violation at label %s" % res.violation[2])
        _emit(args, lines, doc)
        return EXIT_OK if res.verdict else EXIT_FAIL
    l1 = semantics.build_lts(source, "ccs", budget)
    l2 = semantics.build_lts(target, "cspmn", budget,
                             strict_premise=args.strict_premise)
    res = equivalence.strong_bisim(l1, l2, equivalence.IDENTITY)
    doc = res.to_json()
    doc["check"] = "translation"
    lines = ["check: translation",
             "bisimilar: %s" % ("true" if res.verdict else "false")]
    if res.counterexample is not None:
        lines.append("counterexample trace: %s" % " ".join(
            l.to_text() for l in res.counterexample.labels))
    _emit(args, lines, doc)
    return EXIT_OK if res.verdict else EXIT_FAIL


def _verify_mn2csp(args, budget):
    source = io.parse_cspmn(_read_input(args.input))
    target = mn2csp.mn2csp(source)
    src_lts = semantics.build_lts(source, "cspmn", budget,
                                  strict_premise=args.strict_premise)
    tgt_lts = semantics.build_lts(target, "cspmn", budget)
    report = equivalence.check_correspondence(src_lts, tgt_lts,
                                              equivalence.ERASE_INDICES)
    doc = report.to_json()
    doc["check"] = "mn2csp"
    lines = ["check: mn2csp correspondence",
             "passed: %s" % ("true" if report.passed else "false"),
             "checked pairs: %d" % report.checked_pairs]
    for v in report.violations[:10]:
        lines.append("violation: %s at label %s" % (v[0], v[3]))
    _emit(args, lines, doc)
    return EXIT_OK if report.passed else EXIT_FAIL


def _verify_bridge(args):
    source = io.parse_ccs(_read_input(args.input))
    legacy = syntax.canonicalise(translate.gstar2g2(translate.ccs2csp_legacy(source)))
    direct = syntax.canonicalise(translate.ccs2csp3(source))
    equal = legacy == direct
    _emit(args, ["check: bridge", "terms equal: %s" % ("true" if equal else "false")],
          {"check": "bridge", "equal": equal})
    return EXIT_OK if equal else EXIT_FAIL


def cmd_verify(args):
    budget = _budget(args)
    if args.check == "translation":
        return _verify_translation(args, budget)
    if args.check == "mn2csp":
        return _verify_mn2csp(args, budget)
    return _verify_bridge(args)


def cmd_export(args):
    text = _read_input(args.input)
    if args.input.endswith(".ccs"):
        term = translate.ccs2csp_legacy(io.parse_ccs(text))
    else:
        term = mn2csp.mn2csp(io.parse_cspmn(text))
    print(io.export_cspm(syntax.canonicalise(term)), end="")
    return EXIT_OK


_COMMANDS = {
    "translate": cmd_translate,
    "lts": cmd_lts,
    "verify": cmd_verify,
    "export": cmd_export,
}


def main(argv=None):
    parser = build_arg_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (io.ParseError, syntax.WellFormednessError, syntax.LabelError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    except equivalence.IncompleteLts as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_BUDGET
    except (translate.ParallelUnderRecursion,) as exc:
        hint = ""
        if getattr(args, "command", "") == "translate":
            hint = " (hint: --pipeline mn handles recursion with parallel)"
        print("error: %s%s" % (exc, hint), file=sys.stderr)
        return EXIT_FAIL
    except (translate.PipelineOrderError, translate.NotCspGstar,
            mn2csp.UnsupportedConstruct, io.CspmExportError,
            semantics.SemanticsError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_FAIL
    except FileNotFoundError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
