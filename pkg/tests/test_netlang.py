"""Network language: builders, elaboration, exploration, simulation."""

from __future__ import annotations

import pytest

from netproc import (
    ArityError,
    DistinctnessError,
    ParseError,
    Distribute,
    Name,
    NetworkSpec,
    Parallel,
    Restrict,
    ScopeError,
    SendAct,
    anycast3,
    bibridge,
    bridge,
    build,
    broadcast3_unreliable,
    distributor,
    duplicator,
    duploser,
    explore,
    loser,
    parse,
    simulate,
)

a, b, c, d = Name("a"), Name("b"), Name("c"), Name("d")


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------


def test_builders_produce_expected_terms():
    assert bridge(a, b) == Distribute(a, (b,))
    assert loser(a) == Distribute(a, ())
    assert duplicator(a) == Distribute(a, (a, a))
    assert distributor(a, b, c) == Distribute(a, (b, c))
    assert bibridge(a, b) == Parallel(Distribute(a, (b,)), Distribute(b, (a,)))
    assert duploser(a) == Parallel(Distribute(a, ()), Distribute(a, (a, a)))


def test_builders_match_surface_syntax():
    assert bridge(a, b) == parse("a -> b")
    assert bibridge(a, b) == parse("a <-> b")
    assert loser(a) == parse("lose a")
    assert duplicator(a) == parse("dup a")
    assert duploser(a) == parse("duplose a")


def test_build_dispatches_by_kind():
    assert build("bridge", a, b) == bridge(a, b)
    assert build("distribute", a, b, c, d) == Distribute(a, (b, c, d))
    assert build("loser", a) == loser(a)


def test_build_checks_arity():
    with pytest.raises(ArityError):
        build("bridge", a)
    with pytest.raises(ArityError):
        build("loser", a, b)
    with pytest.raises(ArityError):
        build("duplicator")
    with pytest.raises(ArityError):
        build("unknown-kind", a)


# ---------------------------------------------------------------------------
# Network specifications
# ---------------------------------------------------------------------------


def test_network_spec_elaborates_and_hides_locals():
    spec = NetworkSpec(
        free_channels=("a", "b"),
        local_channels=("t",),
        links=(bridge(a, Name("t")), bridge(Name("t"), b)),
    )
    p = spec.elaborate()
    assert isinstance(p, Restrict)
    assert p == parse("new t. (a -> t | t -> b)")


def test_network_spec_rejects_name_overlap():
    with pytest.raises(DistinctnessError):
        NetworkSpec(("a", "b"), ("a",), (bridge(a, b),)).elaborate()
    with pytest.raises(DistinctnessError):
        NetworkSpec(("a", "a"), (), (bridge(a, a),)).elaborate()


def test_network_spec_rejects_undeclared_channels():
    with pytest.raises(ScopeError):
        NetworkSpec(("a",), (), (bridge(a, b),)).elaborate()


def test_anycast_requires_distinct_endpoints():
    with pytest.raises(DistinctnessError):
        anycast3("s", "r1", "r1", "r3")


def test_anycast_shape():
    p = anycast3("s", "r1", "r2", "r3")
    assert p == parse("new t. (s -> t | t -> r1 | t -> r2 | t -> r3)")


def test_broadcast_shape():
    p = broadcast3_unreliable("s", "r1", "r2", "r3")
    assert p == parse("new t. (s -> t | duplose t | t -> r1 | t -> r2 | t -> r3)")


# ---------------------------------------------------------------------------
# Exploration
# ---------------------------------------------------------------------------


def test_anycast_delivers_to_exactly_one_receiver():
    report = explore(anycast3("s", "r1", "r2", "r3"), inputs=[("s", "m0")], max_depth=8)
    assert not report.partial
    assert report.complete_paths == 3
    profiles = set(report.delivery_profiles)
    assert profiles == {
        ((("r1", "m0"),)),
        ((("r2", "m0"),)),
        ((("r3", "m0"),)),
    } or profiles == {(("r1", "m0"),), (("r2", "m0"),), (("r3", "m0"),)}
    for profile in profiles:
        assert len(profile) == 1


def test_injected_ports_are_suppressed():
    report = explore(anycast3("s", "r1", "r2", "r3"), inputs=[("s", "m0")], max_depth=8)
    for profile in report.delivery_profiles:
        assert all(chan != "s" for chan, _ in profile)


def test_broadcast_can_lose_everything_and_reach_everyone():
    report = explore(
        broadcast3_unreliable("s", "r1", "r2", "r3"),
        inputs=[("s", "m0")],
        max_depth=7,
        node_budget=40000,
    )
    assert () in report.delivery_profiles
    assert any(
        len({chan for chan, _ in profile}) >= 2 for profile in report.delivery_profiles
    )


def test_explore_queries_answer_reachability():
    net = anycast3("s", "r1", "r2", "r3")
    hit = explore(net, inputs=[("s", "m0")], max_depth=8, query="r2 >= 1")
    assert hit.query_satisfied
    assert hit.query_witness is not None
    assert all(event.digest for event in hit.query_witness)
    miss = explore(net, inputs=[("s", "m0")], max_depth=8, query="total >= 2")
    assert not miss.query_satisfied
    assert miss.query_witness is None


def test_query_conjunction_and_distinct():
    report = explore(
        broadcast3_unreliable("s", "r1", "r2", "r3"),
        inputs=[("s", "m0")],
        max_depth=7,
        node_budget=40000,
        query="distinct >= 2, total >= 2",
    )
    assert report.query_satisfied


def test_query_parse_errors():
    net = parse("a -> b")
    with pytest.raises(ParseError):
        explore(net, inputs=[("a", "m0")], query="r1 >> 3")
    with pytest.raises(ParseError):
        explore(net, inputs=[("a", "m0")], query="r1")


def test_divergence_is_detected_on_replicated_loops():
    report = explore(parse("a -> a"), inputs=[("a", "m0")], max_depth=6)
    assert report.divergent_paths >= 1
    assert report.complete_paths == 0


def test_truncation_marks_report_partial():
    report = explore(
        broadcast3_unreliable("s", "r1", "r2", "r3"),
        inputs=[("s", "m0")],
        max_depth=2,
    )
    assert report.partial


# ---------------------------------------------------------------------------
# Simulation
# ---------------------------------------------------------------------------


def test_simulate_is_deterministic_per_seed():
    net = anycast3("s", "r1", "r2", "r3")
    first = simulate(net, inputs=[("s", "m0")], steps=16, seed=7)
    second = simulate(net, inputs=[("s", "m0")], steps=16, seed=7)
    assert [str(e) for e in first] == [str(e) for e in second]
    assert len(first) == 2


def test_simulate_seed_changes_schedule():
    net = anycast3("s", "r1", "r2", "r3")
    runs = {tuple(e.digest for e in simulate(net, [("s", "m0")], 16, seed)) for seed in range(12)}
    assert len(runs) > 1


def test_simulate_halts_when_no_internal_step_remains():
    trace = simulate(parse("a!m0"), inputs=[], steps=16, seed=0)
    assert trace == ()
