import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kerneldiag.diagnosis import NotDiagnosableError, System, diagnose
from kerneldiag.generators import random_component_graph
from kerneldiag.kernels import compute_kernels
from kerneldiag.locality import (ComponentDecl, GraphError, RelatednessGraph, RetrievalBudget,
                                 adjacent, compartment, graph_from_components, local_diagnose,
                                 retrieve, spread)
from kerneldiag.logic import FALSUM, Atom, parse_formula
from kerneldiag.oracles import reachable

from conftest import P

A, B, C, D, E, F = map(Atom, "ABCDEF")
okX, okY, okZ, okW8 = map(Atom, ["okX", "okY", "okZ", "okW8"])

FIG7_COMP = set(P(
    "!C & !F",
    "C & okY -> !E", "!C & okY -> E",
    "(D | E) & okZ -> F", "!(D | E) & okZ -> !F",
    "(F & G12) & okW8 -> G13", "!(F & G12) & okW8 -> !G13",
    "okY", "okZ", "okW8",
))


def test_single_component_edges():
    g = graph_from_components([ComponentDecl("x", (A, B), D, okX)])
    assert g.edges == {(A, okX), (B, okX), (okX, D)}
    assert g.nodes == {A, B, D, okX}


def test_empty_graph():
    g = graph_from_components([])
    assert not g.edges and not g.nodes


def test_duplicate_output():
    with pytest.raises(GraphError):
        graph_from_components([ComponentDecl("x", (A,), D, okX), ComponentDecl("y", (B,), D, okY)])


def test_bad_decls():
    with pytest.raises(GraphError):
        ComponentDecl("x", (), D, okX)
    with pytest.raises(GraphError):
        ComponentDecl("x", (D,), D, okX)


def test_fig7_adjacency(fig7):
    g = fig7.graph
    assert adjacent(g, {C}) == {okY}
    assert adjacent(g, {F}) == {okW8}
    assert adjacent(g, {E}) == {okZ}
    assert adjacent(g, {C, F}) == {okY, okW8}
    assert adjacent(g, set()) == set()
    assert adjacent(g, {Atom("G13")}) == set()


def test_fig7_retrieve(fig7, obs):
    ass = fig7.system.ass
    assert set(retrieve(obs, ass, fig7.graph)) == {okY, okZ, okW8}
    assert retrieve(obs, ass, fig7.graph) == [okY, okW8, okZ]
    assert retrieve(obs, ass, fig7.graph, RetrievalBudget(max_rounds=1)) == [okY, okW8]


def test_retrieve_dead_end():
    g = RelatednessGraph([(A, B)])
    assert retrieve(parse_formula("C"), {okX}, g) == []


def test_assumable_in_observation_is_relevant_first():
    g = RelatednessGraph([(okX, D), (D, okY)])
    assert retrieve(parse_formula("okX & !D"), {okX, okY}, g) == [okX, okY]


def test_unbounded_marks_reachable_set(fig7, obs):
    found = spread(obs, fig7.system.ass, fig7.graph)
    assert set(found.marked) == reachable(fig7.graph, {C, F})
    assert not found.exhausted


def test_budget_flags(fig7, obs):
    assert spread(obs, fig7.system.ass, fig7.graph, RetrievalBudget(max_rounds=1)).exhausted
    assert spread(obs, fig7.system.ass, fig7.graph, RetrievalBudget(max_marked=3)).relevant == (okY,)
    with pytest.raises(ValueError):
        RetrievalBudget(max_rounds=0)


def test_fig7_compartment(fig7, obs):
    comp = compartment(obs, fig7.system, [okY, okZ, okW8])
    assert set(comp.formulas) == FIG7_COMP
    assert len(comp) == 10
    assert comp.sequence[0] == obs


def test_compartment_order_follows_relevance(fig7, obs):
    comp = compartment(obs, fig7.system, [okY, okW8, okZ])
    assert set(comp.truncate(4)) == set(P("!C & !F", "okY", "C & okY -> !E", "!C & okY -> E"))


def test_compartment_edge_cases(fig6, obs):
    assert set(compartment(obs, fig6.system, []).formulas) == {obs}
    everything = compartment(obs, fig6.system, sorted(fig6.system.ass))
    assert set(everything.formulas) == set(fig6.system.with_observation(obs))
    extra = System(list(fig6.system.sd) + P("A -> B"), fig6.system.ass)
    assert parse_formula("A -> B") not in compartment(obs, extra, sorted(extra.ass)).formulas
    with pytest.raises(ValueError):
        compartment(obs, fig6.system, [Atom("okQ")])


def test_fig7_local_diagnose(fig7, obs):
    result = local_diagnose(fig7.system, obs, fig7.graph)
    assert result.diagnoses == {frozenset({okY}), frozenset({okZ})}
    assert okW8 in result.relevant
    assert all(okW8 not in d for d in result.diagnoses)
    assert result.compartment_size == 10
    assert result.total_formulas == 34
    assert not result.budget_exhausted


def test_local_with_empty_compartment(fig7):
    obs = parse_formula("C")
    g = RelatednessGraph([(C, okY)])
    result = local_diagnose(fig7.system, obs, g, RetrievalBudget(max_marked=1))
    assert result.relevant == ()
    assert result.diagnoses == {frozenset()}
    assert result.budget_exhausted


def test_local_single_component():
    s = System(P("A & okX -> D", "!A & okX -> !D"), [okX])
    g = graph_from_components([ComponentDecl("x", (A,), D, okX)])
    obs = parse_formula("A & !D")
    assert local_diagnose(s, obs, g).diagnoses == diagnose(s, obs) == {frozenset({okX})}


def test_local_not_diagnosable_scopes():
    g = RelatednessGraph([(C, okY)])
    with pytest.raises(NotDiagnosableError) as info:
        local_diagnose(System(P("(okY | !okY) & C"), [okY]), parse_formula("!C"), g)
    assert info.value.scope == "global"


def test_compartment_blind_to_unguarded_formulas():
    # "C" mentions no assumable, so the compartment never sees the contradiction
    s = System(P("C", "C & okY -> E"), [okY])
    obs = parse_formula("!C")
    assert diagnose(s, obs) == set()
    assert local_diagnose(s, obs, RelatednessGraph([(C, okY)])).diagnoses == {frozenset()}


def test_hs_dag_local(fig7, obs):
    result = local_diagnose(fig7.system, obs, fig7.graph, strategy="hs-dag")
    assert result.diagnoses == {frozenset({okY}), frozenset({okZ})}


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9))
def test_compartment_kernels_are_global(seed):
    graph, system, obs = random_component_graph(random.Random(seed), n_components=5)
    comp = compartment(obs, system, retrieve(obs, system.ass, graph))
    full = set(compute_kernels(system.with_observation(obs), FALSUM))
    for k in compute_kernels(comp.formulas, FALSUM):
        assert k in full


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9), st.integers(1, 6), st.integers(1, 30))
def test_anytime_prefix(seed, rounds, marked):
    graph, system, obs = random_component_graph(random.Random(seed))
    full = retrieve(obs, system.ass, graph)
    for budget in (RetrievalBudget(max_rounds=rounds), RetrievalBudget(max_marked=marked),
                   RetrievalBudget(rounds, marked)):
        part = retrieve(obs, system.ass, graph, budget)
        assert full[:len(part)] == part


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**9))
def test_unbounded_reachability(seed):
    graph, system, obs = random_component_graph(random.Random(seed))
    found = spread(obs, system.ass, graph)
    from kerneldiag.logic import vars_of
    assert set(found.marked) == reachable(graph, vars_of(obs))
    assert len(found.marked) == len(set(found.marked))
    assert found.relevant == tuple(a for a in found.marked if a in system.ass)
