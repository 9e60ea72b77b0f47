"""Command line front end.

Exit codes: 0 success (for `check`: proven), 1 distinguished, 2
inconclusive, 3 usage or input error.  Every verdict-bearing command
echoes the value universe it ran with.
"""

from __future__ import annotations

import argparse
import os
import sys

from .equivalence import FULL_UPTO, PLAIN, Verdict, check_strong, check_weak
from .errors import NetprocError, ParseError
from .laws import format_report, run_laws
from .netlang import TraceEvent, explore, simulate
from .normalform import normal_process, term_key
from .semantics import (
    DEFAULT_UNIVERSE,
    action_key,
    effective_universe,
    infer_mode,
    make_universe,
    transitions,
)
from .syntax import parse, pretty, pretty_action
from .terms import Process


def _universe_from(args) -> tuple:
    text = args.values or os.environ.get("NETPROC_VALUES") or ""
    names = [part.strip() for part in text.split(",") if part.strip()]
    return make_universe(*names) if names else DEFAULT_UNIVERSE


def _parse_term(text: str) -> Process:
    return parse(text)


def _sorted_transitions(p: Process, universe):
    trs = transitions(p, mode=infer_mode(p), universe=universe)
    return sorted(trs, key=lambda tr: (action_key(tr.action), term_key(tr.target)))


def _echo_universe(universe) -> None:
    print(f"values: {','.join(a.text for a in universe)}")


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def _cmd_transitions(args) -> int:
    p = _parse_term(args.term)
    universe = effective_universe(_universe_from(args), p)
    _echo_universe(universe)
    for tr in _sorted_transitions(p, universe):
        print(f"{pretty_action(tr.action):12} {pretty(tr.target)}")
    return 0


def _cmd_lts(args) -> int:
    p = _parse_term(args.term)
    universe = effective_universe(_universe_from(args), p)
    mode = infer_mode(p)
    start = normal_process(p)
    seen = {start}
    order = [start]
    edges = []
    frontier = [start]
    truncated = False
    while frontier:
        nxt = []
        for s in frontier:
            for tr in _sorted_transitions(s, universe):
                t = normal_process(tr.target)
                edges.append((s, tr.action, t))
                if t not in seen:
                    if len(seen) >= args.max_states:
                        truncated = True
                        continue
                    seen.add(t)
                    order.append(t)
                    nxt.append(t)
        frontier = nxt
    ids = {s: i for i, s in enumerate(order)}
    edges = [(s, a, t) for s, a, t in edges if t in ids]
    if args.dot:
        print("digraph lts {")
        for s, i in ids.items():
            label = pretty(s).replace('"', '\\"')
            print(f'  n{i} [label="{label}"];')
        for s, a, t in edges:
            print(f'  n{ids[s]} -> n{ids[t]} [label="{pretty_action(a)}"];')
        print("}")
    else:
        _echo_universe(universe)
        print(f"states: {len(order)}{' (truncated)' if truncated else ''}  mode: {mode.value}")
        for s, a, t in edges:
            print(f"  {pretty(s)}  --{pretty_action(a)}-->  {pretty(t)}")
    return 0


def _cmd_check(args) -> int:
    left = _parse_term(args.left)
    right = _parse_term(args.right)
    universe = effective_universe(_universe_from(args), left, right)
    upto = PLAIN if args.no_upto else FULL_UPTO
    if args.weak:
        result = check_weak(left, right, args.tau_bound, args.max_pairs, upto=upto, universe=universe)
    else:
        result = check_strong(left, right, upto, args.max_pairs, universe=universe)
    _echo_universe(universe)
    print(f"verdict: {result.verdict.value}")
    print(f"pairs explored: {result.pairs_explored}")
    if result.bound_hit:
        print(f"bound hit: {result.bound_hit}")
    if result.trace:
        print("distinguishing play:")
        for step in result.trace:
            tail = "(no reply)" if step.defender_target is None else pretty(step.defender_target)
            print(f"  {step.side:5} {pretty_action(step.action):10} -> {pretty(step.challenger_target)}   vs {tail}")
    if args.emit_witness and result.witness is not None:
        lines = sorted(f"{pretty(l)} ~ {pretty(r)}" for l, r in result.witness)
        with open(args.emit_witness, "w") as fh:
            fh.write("\n".join(lines) + "\n")
        print(f"witness: {len(lines)} pairs -> {args.emit_witness}")
    return {Verdict.PROVEN: 0, Verdict.DISTINGUISHED: 1, Verdict.INCONCLUSIVE: 2}[result.verdict]


def _cmd_laws(args) -> int:
    only = set(args.only.split(",")) if args.only else None
    report = run_laws(only=only, universe=_universe_from(args), max_pairs=args.max_pairs)
    print(format_report(report))
    return 0 if report.passed else 1


def _parse_inject(specs) -> list[tuple[str, str]]:
    out = []
    for spec in specs or []:
        if "=" not in spec:
            raise ParseError(f"bad --inject {spec!r}, expected CHANNEL=VALUE", 1, 1)
        ch, val = spec.split("=", 1)
        if not ch or not val:
            raise ParseError(f"bad --inject {spec!r}, expected CHANNEL=VALUE", 1, 1)
        out.append((ch, val))
    return out


def _cmd_explore(args) -> int:
    p = _parse_term(args.term)
    report = explore(
        p,
        _parse_inject(args.inject),
        max_states=args.max_states,
        max_depth=args.max_depth,
        universe=_universe_from(args),
        query=args.query,
    )
    _echo_universe(report.universe)
    print(f"states: {report.states}{' (bound hit)' if report.state_bound_hit else ''}")
    print(
        f"paths: {report.complete_paths} complete, "
        f"{report.truncated_paths} truncated, {report.divergent_paths} divergent"
    )
    print(f"partial: {str(report.partial).lower()}")
    for ch, (lo, hi) in report.delivery_counts().items():
        print(f"deliveries {ch}: min={lo} max={hi}")
    for profile, count in sorted(report.delivery_profiles.items()):
        shown = " ".join(f"{ch}!{val}" for ch, val in profile) or "(none)"
        print(f"  x{count}  {shown}")
    if report.query is not None:
        print(f"query {report.query!r}: {'satisfied' if report.query_satisfied else 'unsatisfied'}")
        if report.query_witness:
            for ev in report.query_witness:
                print(f"    {ev}")
        return 0 if report.query_satisfied else 1
    return 0


def _cmd_simulate(args) -> int:
    p = _parse_term(args.term)
    events = simulate(
        p,
        _parse_inject(args.inject),
        steps=args.steps,
        seed=args.seed,
        universe=_universe_from(args),
    )
    print(f"seed: {args.seed}")
    for ev in events:
        print(ev)
    print(f"halted after {len(events)} step(s)")
    return 0


# ---------------------------------------------------------------------------
# Entry points
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="netproc", description="process calculus workbench")
    top.add_argument("--values", help="comma separated value universe (default m0,m1; env NETPROC_VALUES)")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("transitions", help="list the immediate steps of a term")
    p.add_argument("term")
    p.set_defaults(fn=_cmd_transitions)

    p = sub.add_parser("lts", help="print the reachable transition system")
    p.add_argument("term")
    p.add_argument("--max-states", type=int, default=256)
    p.add_argument("--dot", action="store_true", help="emit graphviz instead of text")
    p.set_defaults(fn=_cmd_lts)

    p = sub.add_parser("check", help="decide bisimilarity of two terms")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--weak", action="store_true", help="internal moves are unobservable")
    p.add_argument("--no-upto", action="store_true", help="disable proof-side reductions")
    p.add_argument("--max-pairs", type=int, default=512)
    p.add_argument("--tau-bound", type=int, default=8)
    p.add_argument("--emit-witness", metavar="FILE", help="write the proven pair set")
    p.set_defaults(fn=_cmd_check)

    p = sub.add_parser("laws", help="run the equational law suite")
    p.add_argument("--only", help="comma separated law ids")
    p.add_argument("--max-pairs", type=int, default=512)
    p.set_defaults(fn=_cmd_laws)

    p = sub.add_parser("explore", help="enumerate delivery behaviour of a network")
    p.add_argument("term")
    p.add_argument("--inject", action="append", metavar="CHANNEL=VALUE")
    p.add_argument("--max-states", type=int, default=512)
    p.add_argument("--max-depth", type=int, default=24)
    p.add_argument("--query", help='e.g. "r1=1,total>=2" or "distinct>=2"')
    p.set_defaults(fn=_cmd_explore)

    p = sub.add_parser("simulate", help="follow one random run of a network")
    p.add_argument("term")
    p.add_argument("--inject", action="append", metavar="CHANNEL=VALUE")
    p.add_argument("--steps", type=int, default=32)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_cmd_simulate)
    return top


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except NetprocError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


def run() -> None:
    try:
        code = main()
    except BrokenPipeError:
        # downstream consumer (head, grep -m, ...) closed the pipe
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        code = 141
    raise SystemExit(code)
