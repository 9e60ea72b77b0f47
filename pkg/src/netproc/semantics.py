"""Labeled transition semantics.

Two rule sets share one enumerator.  Base mode (`pi`) covers send, receive
and repeating-receive prefixes; network mode (`extended`) covers send and
distributor nodes.  A repeating receiver unfolds exactly one step per
transition: it receives a value and re-arms itself in parallel with the
instantiated body.  A distributor behaves the same way with its body fixed
to a row of forwarding sends.

Restriction is handled by opening the binder with one fresh channel,
enumerating underneath, discarding transitions whose action mentions the
fresh channel, and re-abstracting it in the targets.  Because transition
enumeration is uniform in channel names, one fresh instantiation decides
the quantified premise; tests cross-check this against multi-name probes.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Union

from .errors import BoundExceeded, ModeViolation
from .normalform import normal_process, term_key
from .terms import (
    Atom,
    Distribute,
    Name,
    Parallel,
    Process,
    Receive,
    RepeatReceive,
    Restrict,
    Send,
    STOP,
    Stop,
    ValVar,
    abstract_channel,
    atoms_used,
    constructs_used,
    free_channel_names,
    fresh_channel_name,
    instantiate_channel,
    instantiate_value,
)


class Mode(str, Enum):
    """Which rule set applies: the base calculus or the network language."""

    PI = "pi"
    EXTENDED = "extended"


# ---------------------------------------------------------------------------
# Actions and transitions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SendAct:
    channel: Name
    payload: Atom


@dataclass(frozen=True)
class ReceiveAct:
    channel: Name
    payload: Atom


@dataclass(frozen=True)
class Tau:
    """Internal step produced by a matching send/receive pair."""


TAU = Tau()

Action = Union[SendAct, ReceiveAct, Tau]


def action_key(a: Action) -> tuple:
    """Deterministic sort key for actions."""
    match a:
        case Tau():
            return (0,)
        case SendAct(channel=c, payload=v):
            return (1, c.text, v.text)
        case ReceiveAct(channel=c, payload=v):
            return (2, c.text, v.text)
    raise TypeError(f"not an action: {a!r}")


@dataclass(frozen=True)
class Transition:
    source: Process
    action: Action
    target: Process


Universe = tuple[Atom, ...]

DEFAULT_UNIVERSE: Universe = (Atom("m0"), Atom("m1"))


def make_universe(*names: str) -> Universe:
    return tuple(Atom(n) for n in sorted(set(names)))


def effective_universe(universe: Universe | None, *terms: Process) -> Universe:
    """Declared universe joined with every atom the terms mention."""
    names = {a.text for a in (universe if universe is not None else DEFAULT_UNIVERSE)}
    for t in terms:
        names |= atoms_used(t)
    return make_universe(*names)


# ---------------------------------------------------------------------------
# Mode discipline
# ---------------------------------------------------------------------------

_PI_ONLY = {"Receive", "RepeatReceive"}
_EXTENDED_ONLY = {"Distribute"}


def infer_mode(*terms: Process) -> Mode:
    """Pick the rule set a group of terms belongs to.

    Terms mixing receive prefixes with distributor nodes belong to neither
    language; unfold the distributors first.
    """
    used: set[str] = set()
    for t in terms:
        used |= constructs_used(t)
    has_pi = bool(used & _PI_ONLY)
    has_ext = bool(used & _EXTENDED_ONLY)
    if has_pi and has_ext:
        raise ModeViolation("term mixes receive prefixes with distributor nodes")
    return Mode.EXTENDED if has_ext else Mode.PI


def validate_mode(p: Process, mode: Mode) -> None:
    used = constructs_used(p)
    if mode is Mode.PI and used & _EXTENDED_ONLY:
        raise ModeViolation("distributor nodes must be unfolded before base-mode use")
    if mode is Mode.EXTENDED and used & _PI_ONLY:
        raise ModeViolation("receive prefixes are not part of the network language")


# ---------------------------------------------------------------------------
# Transition enumeration
# ---------------------------------------------------------------------------

_STEP_CACHE: dict[tuple[Process, Mode, Universe], frozenset[tuple[Action, Process]]] = {}


def transitions(p: Process, mode: Mode | None = None, universe: Universe = DEFAULT_UNIVERSE) -> frozenset[Transition]:
    """All single-step transitions of a closed term under the given mode.

    With mode None the rule set is inferred from the term itself.
    """
    mode = mode if mode is not None else infer_mode(p)
    validate_mode(p, mode)
    return frozenset(Transition(p, a, t) for a, t in _step(p, mode, universe))


def _step(p: Process, mode: Mode, universe: Universe) -> frozenset[tuple[Action, Process]]:
    key = (p, mode, universe)
    hit = _STEP_CACHE.get(key)
    if hit is None:
        hit = frozenset(_enumerate(p, mode, universe))
        _STEP_CACHE[key] = hit
    return hit


def _sender_row(targets: tuple, value: Atom) -> Process:
    """Forwarding row fired by a distributor: one send per target, then 0."""
    row: Process = STOP
    for t in reversed(targets):
        row = Parallel(Send(t, value), row)
    return row


def _enumerate(p: Process, mode: Mode, universe: Universe) -> Iterable[tuple[Action, Process]]:
    match p:
        case Stop():
            return
        case Send(channel=c, payload=v):
            yield SendAct(c, v), STOP
        case Receive(channel=c, body=b):
            for v in universe:
                yield ReceiveAct(c, v), instantiate_value(b, v)
        case RepeatReceive(channel=c, body=b):
            for v in universe:
                yield ReceiveAct(c, v), Parallel(instantiate_value(b, v), p)
        case Distribute(source=s, targets=ts):
            for v in universe:
                yield ReceiveAct(s, v), Parallel(_sender_row(ts, v), p)
        case Parallel(left=l, right=r):
            lsteps = _step(l, mode, universe)
            rsteps = _step(r, mode, universe)
            for a, t in lsteps:
                yield a, Parallel(t, r)
            for a, t in rsteps:
                yield a, Parallel(l, t)
            for a1, t1 in lsteps:
                for a2, t2 in rsteps:
                    if _complementary(a1, a2):
                        yield TAU, Parallel(t1, t2)
        case Restrict(body=b):
            fresh = Name(fresh_channel_name(free_channel_names(b), base="_nu"))
            opened = instantiate_channel(b, fresh)
            for a, t in _step(opened, mode, universe):
                if not isinstance(a, Tau) and a.channel == fresh:
                    continue
                yield a, Restrict(abstract_channel(t, fresh))
        case _:
            raise TypeError(f"not a process: {p!r}")


def _complementary(a1: Action, a2: Action) -> bool:
    """A send and a receive of the same value on the same channel."""
    if isinstance(a1, SendAct) and isinstance(a2, ReceiveAct):
        return a1.channel == a2.channel and a1.payload == a2.payload
    if isinstance(a1, ReceiveAct) and isinstance(a2, SendAct):
        return a1.channel == a2.channel and a1.payload == a2.payload
    return False


# ---------------------------------------------------------------------------
# Weak steps
# ---------------------------------------------------------------------------


def _tau_reach(p: Process, mode: Mode, universe: Universe, bound: int) -> tuple[frozenset[Process], bool]:
    """States reachable by at most `bound` internal steps, normalized.

    Returns the visited set and whether the frontier was still growing
    when the bound was hit.
    """
    start = normal_process(p)
    visited = {start}
    frontier = [start]
    for _ in range(bound):
        nxt = []
        for s in frontier:
            for a, t in _step(s, mode, universe):
                if isinstance(a, Tau):
                    n = normal_process(t)
                    if n not in visited:
                        visited.add(n)
                        nxt.append(n)
        if not nxt:
            return frozenset(visited), False
        frontier = nxt
    truncated = False
    for s in frontier:
        for a, t in _step(s, mode, universe):
            if isinstance(a, Tau) and normal_process(t) not in visited:
                truncated = True
                break
        if truncated:
            break
    return frozenset(visited), truncated


def tau_closure(
    p: Process,
    mode: Mode | None = None,
    universe: Universe = DEFAULT_UNIVERSE,
    bound: int = 16,
    exact: bool = False,
) -> frozenset[Process]:
    """Normalized states reachable by internal steps only, `p` included.

    With `exact` set, refuses to return a truncated answer.
    """
    mode = mode if mode is not None else infer_mode(p)
    validate_mode(p, mode)
    states, truncated = _tau_reach(p, mode, universe, bound)
    if exact and truncated:
        raise BoundExceeded(f"internal closure still growing after {bound} steps")
    return states


def weak_steps(
    p: Process, mode: Mode, universe: Universe, bound: int
) -> tuple[frozenset[tuple[Action, Process]], bool]:
    """Weak step relation as (action, normalized target) pairs plus a
    truncation flag.  The internal action includes the zero-step case.
    """
    pre, truncated = _tau_reach(p, mode, universe, bound)
    out: set[tuple[Action, Process]] = {(TAU, s) for s in pre}
    for s in pre:
        for a, t in _step(s, mode, universe):
            if isinstance(a, Tau):
                continue
            post, trunc2 = _tau_reach(t, mode, universe, bound)
            truncated |= trunc2
            out |= {(a, u) for u in post}
    return frozenset(out), truncated


def weak_transitions(
    p: Process,
    mode: Mode | None = None,
    universe: Universe = DEFAULT_UNIVERSE,
    bound: int = 16,
    exact: bool = False,
) -> frozenset[Transition]:
    """Transitions of shape (internal*, visible, internal*) or internal*."""
    mode = mode if mode is not None else infer_mode(p)
    validate_mode(p, mode)
    steps, truncated = weak_steps(p, mode, universe, bound)
    if exact and truncated:
        raise BoundExceeded(f"internal closure still growing after {bound} steps")
    return frozenset(Transition(p, a, t) for a, t in steps)


# ---------------------------------------------------------------------------
# Unfolding the network language into the base calculus
# ---------------------------------------------------------------------------


def unfold_comm(p: Process) -> Process:
    """Replace every distributor by its repeating-receiver expansion.

    The expansion receives a value and fires one send per target, ending
    in the inert process; the result uses base-mode constructs only.
    """
    match p:
        case Stop() | Send():
            return p
        case Receive(channel=c, body=b):
            return Receive(c, unfold_comm(b))
        case RepeatReceive(channel=c, body=b):
            return RepeatReceive(c, unfold_comm(b))
        case Parallel(left=l, right=r):
            return Parallel(unfold_comm(l), unfold_comm(r))
        case Restrict(body=b):
            return Restrict(unfold_comm(b))
        case Distribute(source=s, targets=ts):
            row: Process = STOP
            for t in reversed(ts):
                row = Parallel(Send(t, ValVar(0)), row)
            return RepeatReceive(s, row)
    raise TypeError(f"not a process: {p!r}")


def sorted_transitions(ts: Iterable[Transition]) -> list[Transition]:
    """Deterministic presentation order for transition sets."""
    return sorted(ts, key=lambda t: (action_key(t.action), term_key(t.target)))
