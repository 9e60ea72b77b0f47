"""Builders and analysis for the network description language.

A network is a parallel composition of links (forwarders, sinks,
duplicators) over named channels, with internal hops hidden by
restriction.  `explore` enumerates delivery behaviour after injecting
messages on input channels; `simulate` follows one random trajectory.
"""

from __future__ import annotations

import hashlib
import random
import re
from collections import Counter
from dataclasses import dataclass, field

from .errors import ArityError, DistinctnessError, ParseError
from .normalform import normal_process, term_key
from .semantics import (
    Action,
    Mode,
    SendAct,
    TAU,
    Tau,
    Universe,
    action_key,
    effective_universe,
    infer_mode,
    transitions,
)
from .syntax import pretty, pretty_action
from .terms import (
    Atom,
    Distribute,
    Name,
    Parallel,
    Process,
    Restrict,
    Send,
    STOP,
    abstract_channel,
    free_channel_names,
    fresh_channel_name,
    is_closed,
)
from .errors import ScopeError


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------


def _name(ch: str | Name) -> Name:
    return ch if isinstance(ch, Name) else Name(ch)


_ARITIES = {
    "distribute": None,
    "bridge": 2,
    "bibridge": 2,
    "loser": 1,
    "duplicator": 1,
    "duploser": 1,
}


def build(kind: str, *channels: str | Name) -> Process:
    """Construct a link by kind name; `distribute` takes source then targets."""
    if kind not in _ARITIES:
        raise ArityError(f"unknown link kind {kind!r}")
    arity = _ARITIES[kind]
    if arity is None:
        if not channels:
            raise ArityError("distribute needs a source channel")
    elif len(channels) != arity:
        raise ArityError(f"{kind} takes {arity} channel(s), got {len(channels)}")
    names = tuple(_name(c) for c in channels)
    match kind:
        case "distribute":
            return Distribute(names[0], names[1:])
        case "bridge":
            return Distribute(names[0], (names[1],))
        case "bibridge":
            return Parallel(Distribute(names[0], (names[1],)), Distribute(names[1], (names[0],)))
        case "loser":
            return Distribute(names[0], ())
        case "duplicator":
            return Distribute(names[0], (names[0], names[0]))
        case _:
            return Parallel(Distribute(names[0], ()), Distribute(names[0], (names[0], names[0])))


def distributor(source: str | Name, *targets: str | Name) -> Process:
    return build("distribute", source, *targets)


def bridge(a: str | Name, b: str | Name) -> Process:
    return build("bridge", a, b)


def bibridge(a: str | Name, b: str | Name) -> Process:
    return build("bibridge", a, b)


def loser(a: str | Name) -> Process:
    return build("loser", a)


def duplicator(a: str | Name) -> Process:
    return build("duplicator", a)


def duploser(a: str | Name) -> Process:
    return build("duploser", a)


@dataclass(frozen=True)
class NetworkSpec:
    """Declarative network: visible ports, hidden hops, and link processes."""

    free_channels: tuple[str, ...]
    local_channels: tuple[str, ...]
    links: tuple[Process, ...]

    def elaborate(self) -> Process:
        declared = set(self.free_channels) | set(self.local_channels)
        if len(declared) != len(self.free_channels) + len(self.local_channels):
            raise DistinctnessError("free and local channel names must all differ")
        body: Process = STOP
        for link in reversed(self.links):
            missing = free_channel_names(link) - declared
            if missing:
                raise ScopeError(f"link mentions undeclared channels: {sorted(missing)}")
            body = link if body is STOP else Parallel(link, body)
        for local in reversed(self.local_channels):
            body = Restrict(abstract_channel(body, Name(local)))
        return body


def _distinct(*channels: str) -> None:
    if len(set(channels)) != len(channels):
        raise DistinctnessError(f"channels must be pairwise distinct: {channels}")


def anycast3(s: str = "s", r1: str = "r1", r2: str = "r2", r3: str = "r3") -> Process:
    """One sender port fans out through a hidden hop to exactly one receiver."""
    _distinct(s, r1, r2, r3)
    t = fresh_channel_name({s, r1, r2, r3}, base="t") if "t" in {s, r1, r2, r3} else "t"
    return NetworkSpec(
        free_channels=(s, r1, r2, r3),
        local_channels=(t,),
        links=(bridge(s, t), bridge(t, r1), bridge(t, r2), bridge(t, r3)),
    ).elaborate()


def broadcast3_unreliable(s: str = "s", r1: str = "r1", r2: str = "r2", r3: str = "r3") -> Process:
    """Like anycast3 but the hop may also drop or duplicate messages."""
    _distinct(s, r1, r2, r3)
    t = fresh_channel_name({s, r1, r2, r3}, base="t") if "t" in {s, r1, r2, r3} else "t"
    return NetworkSpec(
        free_channels=(s, r1, r2, r3),
        local_channels=(t,),
        links=(bridge(s, t), duploser(t), bridge(t, r1), bridge(t, r2), bridge(t, r3)),
    ).elaborate()


# ---------------------------------------------------------------------------
# Exploration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TraceEvent:
    step: int
    action: Action
    digest: str

    def __str__(self) -> str:
        return f"{self.step:3d}  {pretty_action(self.action):12} {self.digest}"


def state_digest(p: Process) -> str:
    return hashlib.sha256(pretty(normal_process(p)).encode()).hexdigest()[:12]


Delivery = tuple[str, str]


@dataclass
class ExploreReport:
    """Run census: complete runs are counted up to (state, deliveries)
    equivalence, and delivery_profiles maps each multiset of fired
    outputs to the number of distinct complete configurations showing it."""

    start: Process
    inputs: tuple[tuple[str, str], ...]
    universe: Universe
    states: int
    state_bound_hit: bool
    complete_paths: int
    truncated_paths: int
    divergent_paths: int
    budget_exhausted: bool
    delivery_profiles: dict[tuple[Delivery, ...], int]
    query: str | None = None
    query_satisfied: bool | None = None
    query_witness: tuple[TraceEvent, ...] | None = None

    @property
    def partial(self) -> bool:
        return self.state_bound_hit or self.truncated_paths > 0 or self.budget_exhausted

    def delivery_counts(self) -> dict[str, tuple[int, int]]:
        """Per channel, the (min, max) deliveries over complete paths."""
        chans = sorted({d[0] for profile in self.delivery_profiles for d in profile})
        out: dict[str, tuple[int, int]] = {}
        for ch in chans:
            per_path = [sum(1 for d in profile if d[0] == ch) for profile in self.delivery_profiles]
            out[ch] = (min(per_path), max(per_path))
        return out


def _inject(p: Process, inputs) -> tuple[Process, tuple[tuple[str, str], ...], frozenset[str]]:
    pairs: list[tuple[str, str]] = []
    senders: list[Process] = []
    for chan, value in inputs:
        ch = chan.text if isinstance(chan, Name) else str(chan)
        val = value.text if isinstance(value, Atom) else str(value)
        pairs.append((ch, val))
        senders.append(Send(Name(ch), Atom(val)))
    start: Process = p
    for s in reversed(senders):
        start = Parallel(s, start)
    return start, tuple(pairs), frozenset(ch for ch, _ in pairs)


def _observable_steps(state: Process, mode: Mode, universe: Universe, suppressed: frozenset[str]):
    """Steps the exploration follows: internal moves plus outputs on ports
    that are not used for injection."""
    out = []
    for tr in transitions(state, mode=mode, universe=universe):
        if isinstance(tr.action, Tau):
            out.append((tr.action, tr.target))
        elif isinstance(tr.action, SendAct) and tr.action.channel.text not in suppressed:
            out.append((tr.action, tr.target))
    out.sort(key=lambda at: (action_key(at[0]), term_key(at[1])))
    return out


def explore(
    p: Process,
    inputs=(),
    max_states: int = 512,
    max_depth: int = 24,
    *,
    universe: Universe | None = None,
    mode: Mode | None = None,
    query: str | None = None,
    node_budget: int = 20000,
) -> ExploreReport:
    """Enumerate every run of the network after injecting the given messages.

    A run is complete when no internal move or deliverable output remains.
    Deliveries are the outputs fired along the run.  Runs are enumerated up
    to (state, deliveries-so-far) equivalence; a run that revisits such a
    configuration is divergent.
    """
    if not is_closed(p):
        raise ScopeError("explore needs a closed process")
    start_raw, pairs, suppressed = _inject(p, inputs)
    mode = mode or infer_mode(start_raw)
    universe = effective_universe(universe, start_raw)
    start = normal_process(start_raw)
    conds = _parse_query(query) if query else None

    seen = {start}
    frontier = [start]
    state_bound_hit = False
    for _ in range(max_depth):
        nxt = []
        for s in frontier:
            for _, t in _observable_steps(s, mode, universe, suppressed):
                tn = normal_process(t)
                if tn not in seen:
                    if len(seen) >= max_states:
                        state_bound_hit = True
                        continue
                    seen.add(tn)
                    nxt.append(tn)
        if not nxt:
            break
        frontier = nxt

    report = ExploreReport(
        start=start,
        inputs=pairs,
        universe=universe,
        states=len(seen),
        state_bound_hit=state_bound_hit,
        complete_paths=0,
        truncated_paths=0,
        divergent_paths=0,
        budget_exhausted=False,
        delivery_profiles={},
        query=query,
    )
    budget = [node_budget]
    # paths are walked up to (state, deliveries-so-far) equivalence: two
    # prefixes reaching the same configuration have identical suffixes, so
    # one expansion covers both; nodes are re-expanded only when reached at
    # a smaller depth, which can leave more room before the depth bound
    shallowest: dict[tuple[Process, tuple[Delivery, ...]], int] = {}
    completed: set[tuple[Process, tuple[Delivery, ...]]] = set()

    def walk(state: Process, depth: int, on_path: set, deliveries: list[Delivery], trail: list) -> None:
        if budget[0] <= 0:
            report.budget_exhausted = True
            return
        budget[0] -= 1
        profile = tuple(sorted(deliveries))
        key = (state, profile)
        if key in on_path:
            report.divergent_paths += 1
            return
        if shallowest.get(key, max_depth + 1) <= depth:
            return
        shallowest[key] = depth
        steps = _observable_steps(state, mode, universe, suppressed)
        if not steps:
            if key not in completed:
                completed.add(key)
                report.complete_paths += 1
                report.delivery_profiles[profile] = report.delivery_profiles.get(profile, 0) + 1
                if conds is not None and report.query_witness is None and _eval_query(conds, deliveries):
                    report.query_satisfied = True
                    report.query_witness = tuple(
                        TraceEvent(i, a, state_digest(s)) for i, (a, s) in enumerate(trail)
                    )
            return
        if depth >= max_depth:
            report.truncated_paths += 1
            return
        on_path.add(key)
        for action, target in steps:
            tn = normal_process(target)
            fired = [(action.channel.text, action.payload.text)] if isinstance(action, SendAct) else []
            deliveries.extend(fired)
            trail.append((action, tn))
            walk(tn, depth + 1, on_path, deliveries, trail)
            trail.pop()
            for _ in fired:
                deliveries.pop()
            if report.budget_exhausted:
                break
        on_path.discard(key)

    walk(start, 0, set(), [], [])
    if conds is not None and report.query_satisfied is None:
        report.query_satisfied = False
    return report


def simulate(
    p: Process,
    inputs=(),
    steps: int = 32,
    seed: int = 0,
    *,
    universe: Universe | None = None,
    mode: Mode | None = None,
) -> tuple[TraceEvent, ...]:
    """One random internal-move trajectory; deterministic for a given seed."""
    if not is_closed(p):
        raise ScopeError("simulate needs a closed process")
    start_raw, _, _ = _inject(p, inputs)
    mode = mode or infer_mode(start_raw)
    universe = effective_universe(universe, start_raw)
    rng = random.Random(seed)
    state = normal_process(start_raw)
    events: list[TraceEvent] = []
    for i in range(steps):
        taus = [
            tr.target
            for tr in sorted(
                transitions(state, mode=mode, universe=universe),
                key=lambda tr: (action_key(tr.action), term_key(tr.target)),
            )
            if isinstance(tr.action, Tau)
        ]
        if not taus:
            break
        state = normal_process(taus[rng.randrange(len(taus))])
        events.append(TraceEvent(i, TAU, state_digest(state)))
    return tuple(events)


# ---------------------------------------------------------------------------
# Delivery queries
# ---------------------------------------------------------------------------

_QUERY_RE = re.compile(r"^\s*(\w+)\s*(>=|<=|=)\s*(\d+)\s*$")


@dataclass(frozen=True)
class _Cond:
    subject: str
    op: str
    count: int


def _parse_query(text: str) -> list[_Cond]:
    """Conjunction of `chan OP n`, `total OP n`, `distinct OP n` conditions."""
    conds = []
    offset = 0
    for part in text.split(","):
        m = _QUERY_RE.match(part)
        if not m:
            col = offset + len(part) - len(part.lstrip()) + 1
            raise ParseError(f"bad query condition {part.strip()!r}", 1, col)
        conds.append(_Cond(m.group(1), m.group(2), int(m.group(3))))
        offset += len(part) + 1
    return conds


def _eval_query(conds: list[_Cond], deliveries: list[Delivery]) -> bool:
    per_chan: Counter[str] = Counter(d[0] for d in deliveries)
    by_value: dict[str, set[str]] = {}
    for ch, val in deliveries:
        by_value.setdefault(val, set()).add(ch)
    for cond in conds:
        if cond.subject == "total":
            actual = len(deliveries)
        elif cond.subject == "distinct":
            actual = max((len(chs) for chs in by_value.values()), default=0)
        else:
            actual = per_chan.get(cond.subject, 0)
        ok = {"=": actual == cond.count, ">=": actual >= cond.count, "<=": actual <= cond.count}[cond.op]
        if not ok:
            return False
    return True
