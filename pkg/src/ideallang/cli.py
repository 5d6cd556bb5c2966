"""Command-line interface: ``ideallang <command> [input] [options]``.

Exit status is 0 for success or a true verdict, 1 for a false verdict and
2 for unusable input.  Output is canonical JSON (sorted keys) unless
``--format text`` is given.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, NamedTuple

from . import automata, constructions, identities, twoway
from .classification import DEFAULT_ORACLE_LEN, PROPERTIES, brute_force_oracle, classify
from .monoid import MonoidTooLarge, green_classes, syntactic_monoid
from .monoid import to_json as monoid_to_json
from .regex import parse_regex

CONVERSIONS = ("min-dfa", "staiger-wagner", "flip-union", "weak-nfa", "bc-decomposition", "one-way")


class Outcome(NamedTuple):
    payload: Any
    verdict: bool | None = None
    quiet: Any = None
    text: str | None = None


class UsageError(ValueError):
    pass


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)


# -- input -------------------------------------------------------------------


def _load(args) -> Any:
    if (args.regex is None) == (args.input is None):
        raise UsageError("give exactly one input: a JSON file or --regex")
    if args.regex is not None:
        if not args.alphabet:
            raise UsageError("--regex needs --alphabet")
        return parse_regex(args.regex, args.alphabet)
    text = sys.stdin.read() if args.input == "-" else Path(args.input).read_text()
    obj = json.loads(text)
    if not isinstance(obj, dict):
        raise UsageError("input JSON must be an object")
    if twoway.is_two_way_json(obj):
        return twoway.from_json(obj)
    if "table" in obj:
        return constructions.sw_from_json(obj)
    return automata.from_json(obj)


def _one_way(a) -> automata.Automaton:
    if isinstance(a, twoway.TwoWayAutomaton):
        return twoway.to_one_way_dfa(a)
    if isinstance(a, constructions.StaigerWagnerAutomaton):
        return constructions.sw_to_nfa(a)
    return a


def _two_way(a) -> twoway.TwoWayAutomaton:
    if isinstance(a, twoway.TwoWayAutomaton):
        return a
    return twoway.from_dfa(automata.to_minimal_dfa(_one_way(a)))


def _source(args) -> str:
    return args.regex if args.regex is not None else str(args.input)


# -- commands ----------------------------------------------------------------


def cmd_classify(args) -> Outcome:
    lang = _one_way(_load(args))
    report = classify(lang, oracle_max_len=args.max_len, identities=not args.no_identities,
                      source=_source(args))
    payload = report.to_json()
    if args.emit_monoid:
        m, accepting, _ = syntactic_monoid(lang)
        payload["monoid"] = monoid_to_json(m, accepting, green_classes(m))
    lines = [f"{p}: {'yes' if report[p] else 'no'}" for p in PROPERTIES]
    lines.append(f"cross-checks agree: {'yes' if report.cross_checks['all_agree'] else 'NO'}")
    return Outcome(payload, None, report.verdicts, "\n".join(lines))


def cmd_convert(args) -> Outcome:
    a = _load(args)
    target = args.to
    if target == "one-way":
        if not isinstance(a, twoway.TwoWayAutomaton):
            raise UsageError("one-way conversion needs a two-way automaton")
        return Outcome(automata.to_json(twoway.to_one_way_dfa(a)))
    lang = _one_way(a)
    if target == "min-dfa":
        return Outcome(automata.to_json(automata.to_minimal_dfa(lang)))
    if target == "weak-nfa":
        return Outcome(automata.to_json(constructions.nfa_to_weak(lang)))
    if target == "staiger-wagner":
        return Outcome(constructions.sw_to_json(constructions.to_staiger_wagner(lang)))
    if target == "flip-union":
        d = lang if automata.is_deterministic(lang) else automata.to_minimal_dfa(lang)
        return Outcome(constructions.flip_union_to_json(constructions.weak_to_flip_union(d)))
    if target == "bc-decomposition":
        pairs = constructions.bc_decomposition(lang)
        return Outcome([{"upper": automata.to_json(p.upper), "strict": automata.to_json(p.strict)}
                        for p in pairs])
    raise UsageError(f"unknown conversion {target!r}")  # pragma: no cover


def cmd_check(args) -> Outcome:
    if (args.identity is None) == (args.identity_expr is None):
        raise UsageError("give exactly one of --identity and --identity-expr")
    if args.identity is not None:
        if args.identity not in identities.CATALOG:
            raise UsageError(f"unknown identity {args.identity!r}; "
                             f"choose from {', '.join(identities.CATALOG)}")
        ident = identities.CATALOG[args.identity]
    else:
        ident = identities.parse_identity(args.identity_expr)
    lang = _one_way(_load(args))
    res = identities.check_identity(lang, ident, args.mode, max_n=args.max_n,
                                    max_image=args.max_image)
    payload = {"identity": str(ident), "mode": args.mode, "holds": res.holds}
    if args.identity is not None:
        payload["name"] = args.identity
    if not res.holds:
        payload["counterexample"] = {"assignment": res.assignment, "lhs_in_language": res.lhs_in,
                                     "rhs_in_language": res.rhs_in}
        if res.n is not None:
            payload["counterexample"]["n"] = res.n
    text = f"{ident}: {'holds' if res.holds else 'fails'}"
    if not res.holds:
        text += " at " + ", ".join(f"{v}={w!r}" for v, w in sorted(res.assignment.items()))
    return Outcome(payload, res.holds, res.holds, text)


def cmd_simulate(args) -> Outcome:
    t = _two_way(_load(args))
    run = twoway.simulate(t, args.word)
    payload = {"word": args.word, "outcome": run.outcome, "state": run.state,
               "accepted": run.accepted, "trace": [list(c) for c in run.trace]}
    text = " -> ".join(f"{z}@{i}" for z, i in run.trace) + f"\n{run.outcome}"
    return Outcome(payload, run.accepted, run.outcome, text)


def cmd_ranker(args) -> Outcome:
    if (args.eval is None) == (args.compile is None):
        raise UsageError("give exactly one of --eval and --compile")
    if args.eval is not None:
        if args.word is None:
            raise UsageError("--eval needs --word")
        r = twoway.parse_ranker(args.eval)
        pos = twoway.eval_ranker(r, args.word)
        payload = {"ranker": str(r), "word": args.word, "position": pos}
        return Outcome(payload, pos is not None, pos, "undefined" if pos is None else str(pos))
    if not args.alphabet:
        raise UsageError("--compile needs --alphabet")
    r = twoway.parse_ranker(args.compile)
    return Outcome(twoway.to_json(twoway.compile_ranker(r, args.alphabet)))


def cmd_monomials(args) -> Outcome:
    if not args.extract:
        raise UsageError("monomials needs --extract")
    a = _load(args)
    if not isinstance(a, twoway.TwoWayAutomaton):
        raise UsageError("monomial extraction needs a two-way automaton")
    ms = twoway.extract_monomials(a, max_len=args.max_len)
    return Outcome([m.to_json() for m in ms], None, len(ms), "\n".join(str(m) for m in ms))


def cmd_oracle(args) -> Outcome:
    lang = _one_way(_load(args))
    res = brute_force_oracle(lang, args.property, args.max_len)
    text = "consistent" if res.consistent else f"refuted: {res.witness}"
    return Outcome(res.to_json(), res.consistent, res.consistent, text)


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--quiet", action="store_true", help="print the verdict only")

    source = argparse.ArgumentParser(add_help=False)
    source.add_argument("input", nargs="?", help="automaton JSON file, or - for stdin")
    source.add_argument("--regex", help="inline regular expression")
    source.add_argument("--alphabet", help="alphabet as a string of letters")

    parser = argparse.ArgumentParser(prog="ideallang", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common, source], help="full property report")
    p.add_argument("--max-len", type=int, default=DEFAULT_ORACLE_LEN, help="oracle word length")
    p.add_argument("--no-identities", action="store_true", help="skip identity cross-checks")
    p.add_argument("--emit-monoid", action="store_true", help="include the syntactic monoid")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("convert", parents=[common, source], help="automaton constructions")
    p.add_argument("--to", choices=CONVERSIONS, required=True)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("check", parents=[common, source], help="lattice identity check")
    p.add_argument("--identity", help="catalog name")
    p.add_argument("--identity-expr", help="identity such as 'y => yz'")
    p.add_argument("--mode", choices=("monoid", "words"), default="monoid")
    p.add_argument("--max-n", type=int, default=3)
    p.add_argument("--max-image", type=int, default=2)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("simulate", parents=[common, source], help="run a two-way automaton")
    p.add_argument("--word", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("ranker", parents=[common], help="evaluate or compile a ranker")
    p.add_argument("--eval", metavar="RANKER")
    p.add_argument("--compile", metavar="RANKER")
    p.add_argument("--word")
    p.add_argument("--alphabet")
    p.set_defaults(func=cmd_ranker)

    p = sub.add_parser("monomials", parents=[common, source], help="unambiguous monomials")
    p.add_argument("--extract", action="store_true")
    p.add_argument("--max-len", type=int, default=12)
    p.set_defaults(func=cmd_monomials)

    p = sub.add_parser("oracle", parents=[common, source], help="bounded brute-force check")
    p.add_argument("--property", choices=PROPERTIES, required=True)
    p.add_argument("--max-len", type=int, default=DEFAULT_ORACLE_LEN)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        out = args.func(args)
    except (ValueError, OSError, MonoidTooLarge, twoway.ExtractionError) as exc:
        print(f"ideallang {args.command}: error: {exc}", file=sys.stderr)
        for d in getattr(exc, "diagnostics", []):
            print(f"  {d}", file=sys.stderr)
        return 2
    if args.quiet:
        value = out.quiet if out.quiet is not None or out.verdict is not None else out.payload
        print(dumps(value))
    elif args.format == "text":
        print(out.text if out.text is not None else dumps(out.payload))
    else:
        print(dumps(out.payload))
    return 1 if out.verdict is False else 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
