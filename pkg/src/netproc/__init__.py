"""Asynchronous channel calculus with a network description layer.

The package provides process terms with two-sorted de Bruijn binders,
a labelled transition semantics, structural normal forms, an on-the-fly
bisimilarity checker with proof-side reductions, a catalog of equational
laws, and exploration tools for message-delivery networks.
"""

from .errors import (
    ArityError,
    BoundExceeded,
    DistinctnessError,
    FreshnessViolation,
    ModeViolation,
    NetprocError,
    ParseError,
    ScopeError,
)
from .terms import (
    Atom,
    ChanVar,
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
    free_channel_names,
    fresh_channel_name,
    instantiate_channel,
    instantiate_value,
    is_closed,
    rename_free_channel,
    well_scoped,
)
from .normalform import NormalForm, compose_parallel, normal_process, normalize, parallel_components, term_key, term_order
from .semantics import (
    Action,
    DEFAULT_UNIVERSE,
    Mode,
    ReceiveAct,
    SendAct,
    TAU,
    Tau,
    Transition,
    Universe,
    effective_universe,
    infer_mode,
    make_universe,
    sorted_transitions,
    tau_closure,
    transitions,
    unfold_comm,
    validate_mode,
    weak_transitions,
)
from .equivalence import (
    CheckResult,
    FULL_UPTO,
    PLAIN,
    TraceStep,
    UpToConfig,
    Verdict,
    audit_witness,
    cancel_context,
    check_strong,
    check_weak,
    replay_trace,
    verify_witness,
)
from .syntax import parse, pretty, pretty_action
from .laws import Law, LawInstance, LawReport, LawRow, format_report, law_catalog, run_laws
from .netlang import (
    ExploreReport,
    NetworkSpec,
    TraceEvent,
    anycast3,
    bibridge,
    bridge,
    broadcast3_unreliable,
    build,
    distributor,
    duplicator,
    duploser,
    explore,
    loser,
    simulate,
    state_digest,
)

__version__ = "0.1.0"

__all__ = [
    "ArityError",
    "BoundExceeded",
    "DistinctnessError",
    "FreshnessViolation",
    "ModeViolation",
    "NetprocError",
    "ParseError",
    "ScopeError",
    "Atom",
    "ChanVar",
    "Distribute",
    "Name",
    "Parallel",
    "Process",
    "Receive",
    "RepeatReceive",
    "Restrict",
    "Send",
    "STOP",
    "Stop",
    "ValVar",
    "abstract_channel",
    "atoms_used",
    "free_channel_names",
    "fresh_channel_name",
    "instantiate_channel",
    "instantiate_value",
    "is_closed",
    "rename_free_channel",
    "well_scoped",
    "NormalForm",
    "compose_parallel",
    "normal_process",
    "normalize",
    "parallel_components",
    "term_key",
    "term_order",
    "Action",
    "DEFAULT_UNIVERSE",
    "Mode",
    "ReceiveAct",
    "SendAct",
    "TAU",
    "Tau",
    "Transition",
    "Universe",
    "effective_universe",
    "infer_mode",
    "make_universe",
    "sorted_transitions",
    "tau_closure",
    "transitions",
    "unfold_comm",
    "validate_mode",
    "weak_transitions",
    "CheckResult",
    "FULL_UPTO",
    "PLAIN",
    "TraceStep",
    "UpToConfig",
    "Verdict",
    "audit_witness",
    "cancel_context",
    "check_strong",
    "check_weak",
    "replay_trace",
    "verify_witness",
    "parse",
    "pretty",
    "pretty_action",
    "Law",
    "LawInstance",
    "LawReport",
    "LawRow",
    "format_report",
    "law_catalog",
    "run_laws",
    "ExploreReport",
    "NetworkSpec",
    "TraceEvent",
    "anycast3",
    "bibridge",
    "bridge",
    "broadcast3_unreliable",
    "build",
    "distributor",
    "duplicator",
    "duploser",
    "explore",
    "loser",
    "simulate",
    "state_digest",
]
