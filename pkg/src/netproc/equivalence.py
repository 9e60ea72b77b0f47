"""Bisimilarity checking by an on-the-fly game with up-to reasoning.

The checker has two independent halves:

  * a proof search that tries to close a candidate relation under the
    bisimulation game, shrinking every successor pair by behaviour-safe
    reductions (canonical rewriting, cancellation of shared context)
    before it is looked up or recorded;

  * a refutation search that plays the plain bounded game by iterative
    deepening and reports a minimal-depth distinguishing trace.

Proofs are only ever produced by the first half and refutations only by
the second, so neither inherits the other's approximations: cancelling
shared context can make a provable pair unprovable, but it can never
manufacture a refutation, and traces always replay against the plain
transition relation.

Shared-context cancellation removes a parallel component from both sides
only when it occurs the same number of times on each side.  Removing the
full multiset intersection would be unsound in effect: parallel
composition is not cancellative (a forwarder in parallel with itself is
equivalent to one copy), and over-cancelling turns true goals into false
subgoals.  The equal-multiplicity rule keeps exactly the cancellations
that the accompanying congruence argument licenses while leaving the
replicated disagreement in place.
"""

from __future__ import annotations

import sys
from collections import Counter
from dataclasses import dataclass
from enum import Enum

from .errors import ScopeError
from .normalform import (
    NormalForm,
    compose_parallel,
    normal_process,
    parallel_components,
    term_key,
)
from .semantics import (
    Action,
    Mode,
    Universe,
    action_key,
    effective_universe,
    infer_mode,
    validate_mode,
    weak_steps,
    _step,
)
from .terms import (
    Name,
    Process,
    Restrict,
    Stop,
    free_channel_names,
    fresh_channel_name,
    instantiate_channel,
    is_closed,
)


class Verdict(str, Enum):
    PROVEN = "proven-bisimilar"
    DISTINGUISHED = "distinguished"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class UpToConfig:
    """Which reductions shrink successor pairs before lookup/insertion.

    `use_congruence_rewrite` normalizes targets with the canonical-form
    rewrite system; `use_context_cancel` deletes shared parallel
    components (equal multiplicity on both sides) and shared outer
    restrictions.  `rewrite_side` limits normalization to one side, for
    the asymmetric variant; cancellation is inherently two-sided.
    """

    use_congruence_rewrite: bool = True
    use_context_cancel: bool = True
    rewrite_side: str = "both"  # "left" | "right" | "both"


FULL_UPTO = UpToConfig()
PLAIN = UpToConfig(use_congruence_rewrite=False, use_context_cancel=False)

Pair = tuple[Process, Process]


@dataclass(frozen=True)
class TraceStep:
    """One game round: a challenger move and one illustrative defender
    reply; the final step of a distinguishing trace has no reply."""

    side: str  # "left" | "right"
    action: Action
    challenger_target: Process
    defender_target: Process | None


@dataclass(frozen=True)
class CheckResult:
    verdict: Verdict
    witness: frozenset[Pair] | None
    trace: tuple[TraceStep, ...] | None
    pairs_explored: int
    bound_hit: str | None


# ---------------------------------------------------------------------------
# Pair reduction
# ---------------------------------------------------------------------------


def _rewrite(p: Process, side: str, cfg: UpToConfig) -> Process:
    if cfg.use_congruence_rewrite and cfg.rewrite_side in (side, "both"):
        return normal_process(p)
    return p


def _reduce(l: Process, r: Process, cfg: UpToConfig) -> Pair:
    """Shrink a pair by the configured behaviour-safe reductions."""
    l, r = _rewrite(l, "left", cfg), _rewrite(r, "right", cfg)
    if not cfg.use_context_cancel:
        return l, r
    while True:
        before = (l, r)
        while isinstance(l, Restrict) and isinstance(r, Restrict):
            avoid = free_channel_names(l) | free_channel_names(r)
            c = Name(fresh_channel_name(avoid))
            l = _rewrite(instantiate_channel(l.body, c), "left", cfg)
            r = _rewrite(instantiate_channel(r.body, c), "right", cfg)
        lc = [c for c in parallel_components(l) if not isinstance(c, Stop)]
        rc = [c for c in parallel_components(r) if not isinstance(c, Stop)]
        counts_l, counts_r = Counter(lc), Counter(rc)
        shared = {c for c, n in counts_l.items() if counts_r.get(c) == n}
        if shared:
            l = _rewrite(compose_parallel([c for c in lc if c not in shared]), "left", cfg)
            r = _rewrite(compose_parallel([c for c in rc if c not in shared]), "right", cfg)
        if (l, r) == before:
            return l, r


def cancel_context(p: NormalForm, q: NormalForm) -> Pair:
    """Delete shared parallel components and shared outer restrictions
    from a normalized pair, re-normalizing the leftovers."""
    return _reduce(p.process, q.process, FULL_UPTO)


def _canon(pair: Pair, cfg: UpToConfig) -> Pair:
    """Orientation-free key for symmetric configurations."""
    if cfg.rewrite_side != "both":
        return pair
    l, r = pair
    return pair if term_key(l) <= term_key(r) else (r, l)


# ---------------------------------------------------------------------------
# Proof search
# ---------------------------------------------------------------------------


class _BoundHit(Exception):
    def __init__(self, what: str) -> None:
        super().__init__(what)
        self.what = what


class _Prover:
    """Depth-first construction of a relation closed under the game.

    Pairs are assumed while their obligations are checked; a failed
    defender branch rolls back everything it added, so the surviving set
    is self-justifying and serves as the emitted witness.
    """

    def __init__(
        self,
        mode: Mode,
        universe: Universe,
        cfg: UpToConfig,
        max_pairs: int,
        weak: bool,
        tau_bound: int,
    ) -> None:
        self.mode = mode
        self.universe = universe
        self.cfg = cfg
        self.max_pairs = max_pairs
        self.weak = weak
        self.tau_bound = tau_bound
        self.assumed: set[Pair] = set()
        self.trail: list[Pair] = []
        self.explored = 0
        self.tainted = False

    def _challenger_steps(self, p: Process) -> list[tuple[Action, Process]]:
        return sorted(_step(p, self.mode, self.universe), key=lambda at: (action_key(at[0]), term_key(at[1])))

    def _defender_steps(self, p: Process) -> dict[Action, list[Process]]:
        if self.weak:
            steps, truncated = weak_steps(p, self.mode, self.universe, self.tau_bound)
            self.tainted |= truncated
        else:
            steps = _step(p, self.mode, self.universe)
        grouped: dict[Action, list[Process]] = {}
        for a, t in steps:
            grouped.setdefault(a, []).append(t)
        for opts in grouped.values():
            opts.sort(key=term_key)
        return grouped

    def _rollback(self, mark: int) -> None:
        while len(self.trail) > mark:
            self.assumed.discard(self.trail.pop())

    def close(self, l: Process, r: Process) -> bool:
        l2, r2 = _reduce(l, r, self.cfg)
        if l2 == r2:
            return True
        key = _canon((l2, r2), self.cfg)
        if key in self.assumed:
            return True
        if self.explored >= self.max_pairs:
            raise _BoundHit("max-pairs")
        self.explored += 1
        self.assumed.add(key)
        self.trail.append(key)
        mark = len(self.trail) - 1
        if self._obligations(*key):
            return True
        self._rollback(mark)
        return False

    def _obligations(self, u: Process, v: Process) -> bool:
        # weak defender relations include the zero-step reply to Tau
        goals: list[tuple[Process, list[Process], bool]] = []
        for forward in (True, False):
            chal, resp = (u, v) if forward else (v, u)
            responses = self._defender_steps(resp)
            for a, t in self._challenger_steps(chal):
                options = responses.get(a, [])
                if not options:
                    return False
                goals.append((t, options, forward))
        # forced and low-branching goals first, so unmatchable challenges
        # surface before deep speculative subtrees get built
        goals.sort(key=lambda g: len(g[1]))
        for t, options, forward in goals:
            if not self._match(t, options, forward):
                return False
        return True

    def _match(self, chal_target: Process, options: list[Process], forward: bool) -> bool:
        # Try replies whose reduced pair is already assumed before opening
        # new subgoals; keeps witnesses small and deterministic.
        def rank(opt: Process) -> tuple:
            pair = (chal_target, opt) if forward else (opt, chal_target)
            red = _reduce(*pair, self.cfg)
            known = red[0] == red[1] or _canon(red, self.cfg) in self.assumed
            return (0 if known else 1, term_key(opt))

        for opt in sorted(options, key=rank):
            pair = (chal_target, opt) if forward else (opt, chal_target)
            mark = len(self.trail)
            if self.close(*pair):
                return True
            self._rollback(mark)
        return False


# ---------------------------------------------------------------------------
# Refutation search
# ---------------------------------------------------------------------------


class _Attacker:
    """Iterative-deepening attacker for the plain (no up-to) game."""

    def __init__(
        self,
        mode: Mode,
        universe: Universe,
        weak: bool,
        tau_bound: int,
        node_budget: int,
        normalize_states: bool = True,
    ) -> None:
        self.mode = mode
        self.universe = universe
        self.weak = weak
        self.tau_bound = tau_bound
        self.budget = node_budget
        self.normalize_states = normalize_states
        self.memo: dict[tuple[Process, Process, int], tuple[TraceStep, ...] | None] = {}
        self.nodes = 0
        self.tainted = False

    def _norm(self, p: Process) -> Process:
        return normal_process(p) if self.normalize_states else p

    def _moves(self, p: Process) -> list[tuple[Action, Process]]:
        return sorted(_step(p, self.mode, self.universe), key=lambda at: (action_key(at[0]), term_key(at[1])))

    def _replies(self, p: Process, a: Action) -> list[Process]:
        if self.weak:
            steps, truncated = weak_steps(p, self.mode, self.universe, self.tau_bound)
            self.tainted |= truncated
            opts = [t for sa, t in steps if sa == a]
        else:
            opts = [self._norm(t) for sa, t in _step(p, self.mode, self.universe) if sa == a]
        return sorted(set(opts), key=term_key)

    def search(self, l: Process, r: Process, max_depth: int) -> tuple[TraceStep, ...] | None:
        l, r = self._norm(l), self._norm(r)
        for depth in range(1, max_depth + 1):
            trace = self._attack(l, r, depth)
            if trace is not None:
                return trace
        return None

    def _attack(self, l: Process, r: Process, depth: int) -> tuple[TraceStep, ...] | None:
        if depth == 0:
            return None
        key = (l, r, depth)
        if key in self.memo:
            return self.memo[key]
        self.nodes += 1
        if self.nodes > self.budget:
            raise _BoundHit("node-budget")
        result: tuple[TraceStep, ...] | None = None
        for side, chal, resp in (("left", l, r), ("right", r, l)):
            for a, t in self._moves(chal):
                tn = self._norm(t)
                replies = self._replies(resp, a)
                if not replies:
                    result = (TraceStep(side, a, tn, None),)
                    break
                if depth == 1:
                    continue
                refutations = []
                for opt in replies:
                    pair = (tn, opt) if side == "left" else (opt, tn)
                    sub = self._attack(*pair, depth - 1)
                    if sub is None:
                        refutations = None
                        break
                    refutations.append((opt, sub))
                if refutations:
                    opt, sub = refutations[0]
                    result = (TraceStep(side, a, tn, opt),) + sub
                    break
            if result is not None:
                break
        self.memo[key] = result
        return result


# ---------------------------------------------------------------------------
# Public checks
# ---------------------------------------------------------------------------


def _prepare(
    p: Process, q: Process, universe: Universe | None, mode: Mode | None
) -> tuple[Mode, Universe]:
    if not is_closed(p) or not is_closed(q):
        raise ScopeError("bisimilarity checks require closed terms")
    m = mode if mode is not None else infer_mode(p, q)
    validate_mode(p, m)
    validate_mode(q, m)
    return m, effective_universe(universe, p, q)


def check_strong(
    p: Process,
    q: Process,
    upto: UpToConfig = FULL_UPTO,
    max_pairs: int = 512,
    *,
    universe: Universe | None = None,
    mode: Mode | None = None,
    max_trace_depth: int = 8,
    node_budget: int = 40_000,
) -> CheckResult:
    """Decide strong bisimilarity of two closed terms, within bounds.

    Proven verdicts carry a self-justifying witness relation; refuted
    verdicts carry a minimal-depth trace that replays against the plain
    transition relation; everything else is reported inconclusive with
    the bound that was hit.
    """
    m, uni = _prepare(p, q, universe, mode)
    return _check(p, q, upto, max_pairs, m, uni, False, 0, max_trace_depth, node_budget)


def check_weak(
    p: Process,
    q: Process,
    tau_bound: int = 8,
    max_pairs: int = 512,
    *,
    upto: UpToConfig = FULL_UPTO,
    universe: Universe | None = None,
    mode: Mode | None = None,
    max_trace_depth: int = 6,
    node_budget: int = 40_000,
) -> CheckResult:
    """Decide weak bisimilarity: challenger moves are single steps, the
    defender may pad its reply with up to `tau_bound` internal steps on
    each side of the visible action."""
    m, uni = _prepare(p, q, universe, mode)
    return _check(p, q, upto, max_pairs, m, uni, True, tau_bound, max_trace_depth, node_budget)


def _check(
    p: Process,
    q: Process,
    upto: UpToConfig,
    max_pairs: int,
    mode: Mode,
    uni: Universe,
    weak: bool,
    tau_bound: int,
    max_trace_depth: int,
    node_budget: int,
) -> CheckResult:
    prover = _Prover(mode, uni, upto, max_pairs, weak, tau_bound)
    bound_hit: str | None = None
    # proof search recurses once per candidate pair plus matching overhead
    depth_needed = 8 * max_pairs + 500
    old_limit = sys.getrecursionlimit()
    if depth_needed > old_limit:
        sys.setrecursionlimit(depth_needed)
    try:
        proved = prover.close(p, q)
    except _BoundHit as hit:
        proved = False
        bound_hit = hit.what
    finally:
        if depth_needed > old_limit:
            sys.setrecursionlimit(old_limit)
    if proved:
        return CheckResult(Verdict.PROVEN, frozenset(prover.assumed), None, prover.explored, None)

    attacker = _Attacker(mode, uni, weak, tau_bound, node_budget)
    trace: tuple[TraceStep, ...] | None = None
    try:
        trace = attacker.search(p, q, max_trace_depth)
    except _BoundHit as hit:
        bound_hit = bound_hit or hit.what
    explored = prover.explored + attacker.nodes
    if trace is not None and not attacker.tainted:
        return CheckResult(Verdict.DISTINGUISHED, None, trace, explored, None)
    if attacker.tainted:
        bound_hit = bound_hit or "tau-bound"
    return CheckResult(Verdict.INCONCLUSIVE, None, None, explored, bound_hit or "trace-depth")


# ---------------------------------------------------------------------------
# Independent witness audit
# ---------------------------------------------------------------------------


def audit_witness(
    p: Process,
    q: Process,
    witness: frozenset[Pair],
    upto: UpToConfig = FULL_UPTO,
    *,
    weak: bool = False,
    tau_bound: int = 8,
    universe: Universe | None = None,
    mode: Mode | None = None,
) -> Pair | None:
    """Re-check a witness relation pair by pair, independently of the
    proof search.  Returns the first offending pair, or None if the
    witness is closed and contains the reduced root."""
    m, uni = _prepare(p, q, universe, mode)

    def covered(l: Process, r: Process) -> bool:
        red = _reduce(l, r, upto)
        return red[0] == red[1] or _canon(red, upto) in witness

    if not covered(p, q):
        return (p, q)
    for u, v in witness:
        for forward in (True, False):
            chal, resp = (u, v) if forward else (v, u)
            if weak:
                resp_steps, _ = weak_steps(resp, m, uni, tau_bound)
            else:
                resp_steps = _step(resp, m, uni)
            for a, t in _step(chal, m, uni):
                ok = any(
                    covered(*((t, d) if forward else (d, t)))
                    for sa, d in resp_steps
                    if sa == a
                )
                if not ok:
                    return (u, v)
    return None


def verify_witness(
    p: Process,
    q: Process,
    witness: frozenset[Pair],
    upto: UpToConfig = FULL_UPTO,
    **kwargs,
) -> bool:
    """True when the witness is closed under both game directions and
    contains the reduced initial pair."""
    return audit_witness(p, q, witness, upto, **kwargs) is None


# ---------------------------------------------------------------------------
# Trace replay
# ---------------------------------------------------------------------------


def replay_trace(
    p: Process,
    q: Process,
    trace: tuple[TraceStep, ...],
    *,
    weak: bool = False,
    tau_bound: int = 8,
    universe: Universe | None = None,
    mode: Mode | None = None,
) -> bool:
    """Check a distinguishing trace against the plain transition relation.

    Every challenger step must be an actual transition of its side and
    the final challenger action must have no reply from the other side.
    """
    m, uni = _prepare(p, q, universe, mode)
    state = {"left": normal_process(p), "right": normal_process(q)}
    for i, step in enumerate(trace):
        chal = state[step.side]
        moves = {(a, normal_process(t)) for a, t in _step(chal, m, uni)}
        if (step.action, step.challenger_target) not in moves:
            return False
        other = "right" if step.side == "left" else "left"
        if weak:
            resp_steps, _ = weak_steps(state[other], m, uni, tau_bound)
            replies = {t for a, t in resp_steps if a == step.action}
        else:
            replies = {
                normal_process(t) for a, t in _step(state[other], m, uni) if a == step.action
            }
        last = i == len(trace) - 1
        if last:
            return step.defender_target is None and not replies
        if step.defender_target is None or step.defender_target not in replies:
            return False
        state[step.side] = step.challenger_target
        state[other] = step.defender_target
    return False
