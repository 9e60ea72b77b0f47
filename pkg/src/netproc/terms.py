"""Process terms for an asynchronous channel calculus without mobility.

Channels and values are distinct sorts with independent de Bruijn index
spaces: restriction binds channels, receive prefixes bind values.  Because
the sorts never mix (a value cannot be used as a channel), crossing a
receive binder leaves channel indices untouched and vice versa.

Every node is a frozen dataclass, so terms are immutable, hashable and
comparable by structure.  All operations here are pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

from .errors import FreshnessViolation

# ---------------------------------------------------------------------------
# Channels and values
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Name:
    """Free channel, identified globally by its name."""

    text: str


@dataclass(frozen=True)
class ChanVar:
    """Channel bound by an enclosing restriction; index 0 is the nearest one."""

    index: int


Channel = Union[Name, ChanVar]


@dataclass(frozen=True)
class Atom:
    """Concrete value drawn from a finite, per-session universe."""

    text: str


@dataclass(frozen=True)
class ValVar:
    """Value bound by an enclosing receive prefix; index 0 is the nearest one."""

    index: int


Value = Union[Atom, ValVar]


# ---------------------------------------------------------------------------
# Process constructors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Stop:
    """The inert process."""


@dataclass(frozen=True)
class Send:
    """Asynchronous output of one value on one channel."""

    channel: Channel
    payload: Value


@dataclass(frozen=True)
class Receive:
    """One-shot input prefix; the body has one bound value (index 0)."""

    channel: Channel
    body: "Process"


@dataclass(frozen=True)
class RepeatReceive:
    """Input prefix that re-arms itself after every receipt.

    Kept folded as a first-class node; it only unfolds one step at a time
    during transition enumeration.
    """

    channel: Channel
    body: "Process"


@dataclass(frozen=True)
class Parallel:
    """Binary parallel composition."""

    left: "Process"
    right: "Process"


@dataclass(frozen=True)
class Restrict:
    """Channel restriction; the body has one bound channel (index 0)."""

    body: "Process"


@dataclass(frozen=True)
class Distribute:
    """Network-language forwarder: every value received on `source` is
    re-sent on each channel in `targets` (possibly none, possibly repeats).
    """

    source: Channel
    targets: tuple[Channel, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "targets", tuple(self.targets))


Process = Union[Stop, Send, Receive, RepeatReceive, Parallel, Restrict, Distribute]

STOP = Stop()


# ---------------------------------------------------------------------------
# Scope checks and queries
# ---------------------------------------------------------------------------


def well_scoped(p: Process, chan_depth: int = 0, val_depth: int = 0) -> bool:
    """True when every bound index refers to an actual enclosing binder."""

    def chan_ok(c: Channel) -> bool:
        return isinstance(c, Name) or 0 <= c.index < chan_depth

    match p:
        case Stop():
            return True
        case Send(channel=c, payload=v):
            val_ok = isinstance(v, Atom) or 0 <= v.index < val_depth
            return chan_ok(c) and val_ok
        case Receive(channel=c, body=b) | RepeatReceive(channel=c, body=b):
            return chan_ok(c) and well_scoped(b, chan_depth, val_depth + 1)
        case Parallel(left=l, right=r):
            return well_scoped(l, chan_depth, val_depth) and well_scoped(r, chan_depth, val_depth)
        case Restrict(body=b):
            return well_scoped(b, chan_depth + 1, val_depth)
        case Distribute(source=s, targets=ts):
            return chan_ok(s) and all(chan_ok(t) for t in ts)
    raise TypeError(f"not a process: {p!r}")


def is_closed(p: Process) -> bool:
    """True when the term has no dangling channel or value indices."""
    return well_scoped(p, 0, 0)


def free_channel_names(p: Process) -> frozenset[str]:
    """Names of all free channels occurring anywhere in the term."""
    out: set[str] = set()

    def chan(c: Channel) -> None:
        if isinstance(c, Name):
            out.add(c.text)

    def walk(q: Process) -> None:
        match q:
            case Stop():
                pass
            case Send(channel=c):
                chan(c)
            case Receive(channel=c, body=b) | RepeatReceive(channel=c, body=b):
                chan(c)
                walk(b)
            case Parallel(left=l, right=r):
                walk(l)
                walk(r)
            case Restrict(body=b):
                walk(b)
            case Distribute(source=s, targets=ts):
                chan(s)
                for t in ts:
                    chan(t)

    walk(p)
    return frozenset(out)


def atoms_used(p: Process) -> frozenset[str]:
    """Atom names mentioned by send payloads anywhere in the term."""
    out: set[str] = set()

    def walk(q: Process) -> None:
        match q:
            case Send(payload=Atom(text=t)):
                out.add(t)
            case Receive(body=b) | RepeatReceive(body=b) | Restrict(body=b):
                walk(b)
            case Parallel(left=l, right=r):
                walk(l)
                walk(r)
            case _:
                pass

    walk(p)
    return frozenset(out)


def constructs_used(p: Process) -> frozenset[str]:
    """Constructor names occurring in the term, for language-level checks."""
    out: set[str] = set()

    def walk(q: Process) -> None:
        out.add(type(q).__name__)
        match q:
            case Receive(body=b) | RepeatReceive(body=b) | Restrict(body=b):
                walk(b)
            case Parallel(left=l, right=r):
                walk(l)
                walk(r)
            case _:
                pass

    walk(p)
    return frozenset(out)


# ---------------------------------------------------------------------------
# Substitution machinery
#
# Each operation is a structure-preserving map over either channel or value
# occurrences.  The mapping function receives the occurrence together with
# the binder depth of its own sort at that point.
# ---------------------------------------------------------------------------


def _map_channels(p: Process, f: Callable[[Channel, int], Channel], d: int = 0) -> Process:
    match p:
        case Stop():
            return p
        case Send(channel=c, payload=v):
            return Send(f(c, d), v)
        case Receive(channel=c, body=b):
            return Receive(f(c, d), _map_channels(b, f, d))
        case RepeatReceive(channel=c, body=b):
            return RepeatReceive(f(c, d), _map_channels(b, f, d))
        case Parallel(left=l, right=r):
            return Parallel(_map_channels(l, f, d), _map_channels(r, f, d))
        case Restrict(body=b):
            return Restrict(_map_channels(b, f, d + 1))
        case Distribute(source=s, targets=ts):
            return Distribute(f(s, d), tuple(f(t, d) for t in ts))
    raise TypeError(f"not a process: {p!r}")


def _map_values(p: Process, f: Callable[[Value, int], Value], d: int = 0) -> Process:
    match p:
        case Stop() | Distribute():
            return p
        case Send(channel=c, payload=v):
            return Send(c, f(v, d))
        case Receive(channel=c, body=b):
            return Receive(c, _map_values(b, f, d + 1))
        case RepeatReceive(channel=c, body=b):
            return RepeatReceive(c, _map_values(b, f, d + 1))
        case Parallel(left=l, right=r):
            return Parallel(_map_values(l, f, d), _map_values(r, f, d))
        case Restrict(body=b):
            return Restrict(_map_values(b, f, d))
    raise TypeError(f"not a process: {p!r}")


def instantiate_value(body: Process, value: Atom) -> Process:
    """Substitute `value` for the body's outermost bound value slot.

    `body` is the body of a receive prefix, so value index 0 at its top
    level refers to the eliminated binder; deeper dangling indices shift
    down to stay aligned.
    """
    if not isinstance(value, Atom):
        raise TypeError("receive prefixes can only be instantiated with atoms")

    def f(v: Value, d: int) -> Value:
        if isinstance(v, ValVar):
            if v.index == d:
                return value
            if v.index > d:
                return ValVar(v.index - 1)
        return v

    return _map_values(body, f)


def instantiate_channel(body: Process, channel: Name) -> Process:
    """Substitute the free channel `channel` for a restriction's bound slot.

    Raises FreshnessViolation when `channel` already occurs free in the
    body; allowing that would silently merge two distinct channels.
    """
    if channel.text in free_channel_names(body):
        raise FreshnessViolation(f"channel {channel.text!r} already occurs free")

    def f(c: Channel, d: int) -> Channel:
        if isinstance(c, ChanVar):
            if c.index == d:
                return channel
            if c.index > d:
                return ChanVar(c.index - 1)
        return c

    return _map_channels(body, f)


def abstract_channel(p: Process, channel: Name) -> Process:
    """Turn every free occurrence of `channel` into a new outermost binder
    slot, inverting instantiate_channel.
    """

    def f(c: Channel, d: int) -> Channel:
        if isinstance(c, Name) and c.text == channel.text:
            return ChanVar(d)
        if isinstance(c, ChanVar) and c.index >= d:
            return ChanVar(c.index + 1)
        return c

    return _map_channels(p, f)


def rename_free_channel(p: Process, old: str, new: str) -> Process:
    """Rename one free channel; bound channels are nameless so no capture."""

    def f(c: Channel, d: int) -> Channel:
        if isinstance(c, Name) and c.text == old:
            return Name(new)
        return c

    return _map_channels(p, f)


def fresh_channel_name(avoid: frozenset[str] | set[str], base: str = "nu") -> str:
    """First name of the form base0, base1, ... not present in `avoid`."""
    i = 0
    while f"{base}{i}" in avoid:
        i += 1
    return f"{base}{i}"
