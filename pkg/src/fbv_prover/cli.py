"""Command-line prover.

Reads structures (one per line; blank lines and ``#`` comments are
skipped) from a file or stdin, proves each with the guided strategy,
the exhaustive search, or both, and prints the proof in the flat
derivation format:

    oi
    ai *
    ai [-c,c]
    s  ...
    [(a,b,c),-a,-b,-c]        <- the (normalized) input, bottom line

one rule token and the structure above that rule per line, trivial
equivalence steps omitted.  Unprovable inputs print the normalized
structure and the exact line ``The structure is not provable.``

Exit code: 0 provable, 1 not provable, 2 inconclusive or limit hit,
3 parse or usage error (the worst line wins in batch runs).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, TextIO

from .oracle import (LimitExceeded, SearchConfig, Searcher, prove_exhaustive)
from .rules import Derivation, RuleName
from .strategy import Inconclusive, NotProvable, Provable, prove_strategy
from .syntax import ParseError, parse, render

NOT_PROVABLE_MESSAGE = "The structure is not provable."

EXIT_PROVABLE = 0
EXIT_NOT_PROVABLE = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 3


def proof_lines(d: Derivation) -> list[str]:
    """Text block of a proof, axiom first, conclusion last."""
    lines = ["oi"]
    body = [st for st in d.steps if st.rule is not RuleName.O_DOWN]
    for st in reversed(body):
        lines.append(f"{st.rule.token} {render(st.premise)}")
    lines.append(render(d.conclusion))
    return lines


def proof_step_records(d: Derivation) -> list[dict]:
    body = [st for st in d.steps if st.rule is not RuleName.O_DOWN]
    return [{"rule": st.rule.token, "premise": render(st.premise)}
            for st in reversed(body)]


def _emit_text(out: TextIO, normalized: str, verdict: str,
               derivation: Optional[Derivation], stats: Optional[dict]):
    if verdict == "provable":
        out.write("\n".join(proof_lines(derivation)) + "\n")
    elif verdict == "not-provable":
        out.write(normalized + "\n")
        out.write(NOT_PROVABLE_MESSAGE + "\n")
    else:
        out.write(normalized + "\n")
        out.write("Inconclusive.\n")
    if stats:
        for key, val in stats.items():
            out.write(f"{key}={val}\n")


def _emit_json(out: TextIO, raw: str, normalized: str, verdict: str,
               derivation: Optional[Derivation], stats: Optional[dict]):
    rec = {
        "input": raw,
        "normalized": normalized,
        "verdict": verdict,
        "steps": proof_step_records(derivation) if derivation else [],
    }
    if stats:
        rec["stats"] = stats
    out.write(json.dumps(rec) + "\n")


def run_line(raw: str, args, searcher: Optional[Searcher],
             out: TextIO, err: TextIO) -> int:
    try:
        s = parse(raw, allow_seq=(args.system == "bv"))
    except ParseError as exc:
        err.write(f"parse error: {exc}\n")
        return EXIT_USAGE
    normalized = render(s)

    derivation = None
    stats: Optional[dict] = None
    verdict = "inconclusive"
    diagnostic = ""

    strategy_outcome = None
    if args.mode in ("strategy", "both"):
        strategy_outcome = prove_strategy(
            s, counterexample_log=args.counterexample_log,
            max_steps=args.max_steps)
        if isinstance(strategy_outcome, Provable):
            verdict = "provable"
            derivation = strategy_outcome.derivation
        elif isinstance(strategy_outcome, NotProvable):
            verdict = "not-provable"
            diagnostic = strategy_outcome.reason
        else:
            diagnostic = f"{strategy_outcome.diagnostic}"

    if args.mode in ("oracle", "both") and (
            args.mode == "oracle" or verdict == "inconclusive"
            or args.verify):
        try:
            d, search_stats = prove_exhaustive(s, searcher=searcher)
            if args.stats:
                stats = search_stats.as_dict()
            oracle_verdict = "provable" if d else "not-provable"
            if verdict != "inconclusive" and verdict != oracle_verdict:
                err.write(f"strategy/oracle disagreement on {normalized}; "
                          f"trusting the exhaustive search\n")
                if args.counterexample_log:
                    with open(args.counterexample_log, "a",
                              encoding="utf-8") as fh:
                        fh.write(normalized + "\n")
            verdict = oracle_verdict
            if d is not None:
                # keep the strategy's derivation when it agrees
                if derivation is None:
                    derivation = d
        except LimitExceeded as exc:
            if verdict == "inconclusive":
                diagnostic = diagnostic or str(exc)
            # otherwise the strategy verdict stands unverified

    if args.stats and stats is None and derivation is not None:
        stats = {"proof_length": len(derivation.steps)}

    if verdict == "inconclusive" and diagnostic:
        err.write(f"inconclusive: {diagnostic}\n")

    if args.emit == "json":
        _emit_json(out, raw, normalized, verdict, derivation, stats)
    else:
        _emit_text(out, normalized, verdict, derivation, stats)

    return {"provable": EXIT_PROVABLE,
            "not-provable": EXIT_NOT_PROVABLE,
            "inconclusive": EXIT_INCONCLUSIVE}[verdict]


def build_arg_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="fbv-prover",
        description="Prover for the deep-inference systems FBV and BV.")
    ap.add_argument("input", nargs="?", default=None,
                    help="input file (default: stdin), one structure per line")
    ap.add_argument("--system", choices=("fbv", "bv"), default="fbv")
    ap.add_argument("--mode", choices=("strategy", "oracle", "both"),
                    default="both",
                    help="strategy: guided construction only; oracle: "
                         "exhaustive search only; both: strategy first, "
                         "oracle verification when feasible")
    ap.add_argument("--pruning", choices=("none", "is", "lis", "ps"),
                    default="none", help="switch pruning for the oracle")
    ap.add_argument("--max-visited", type=int, default=1_000_000)
    ap.add_argument("--max-steps", type=int, default=None,
                    help="strategy iteration budget override")
    ap.add_argument("--emit", choices=("text", "json"), default="text")
    ap.add_argument("--stats", action="store_true")
    ap.add_argument("--counterexample-log", default=None, metavar="PATH")
    ap.add_argument("--verify", action="store_true",
                    help="in both mode, always run the oracle even when "
                         "the strategy reached a verdict")
    return ap


def main(argv=None) -> int:
    args = build_arg_parser().parse_args(argv)
    out, err = sys.stdout, sys.stderr

    pruning = None if args.pruning == "none" else args.pruning
    try:
        config = SearchConfig(system=args.system, pruning=pruning,
                              max_visited=args.max_visited)
    except ValueError as exc:
        err.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    searcher = Searcher(config)

    if args.input is None:
        lines = sys.stdin.read().splitlines()
    else:
        try:
            with open(args.input, encoding="utf-8") as fh:
                lines = fh.read().splitlines()
        except OSError as exc:
            err.write(f"cannot read {args.input}: {exc}\n")
            return EXIT_USAGE

    worst = EXIT_PROVABLE
    saw_input = False
    for raw in lines:
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        saw_input = True
        code = run_line(line, args, searcher, out, err)
        worst = max(worst, code)
    if not saw_input:
        err.write("no input structures\n")
        return EXIT_USAGE
    return worst


if __name__ == "__main__":
    sys.exit(main())
