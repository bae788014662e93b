import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kerneldiag.generators import random_base, random_formula
from kerneldiag.kernels import (ContractError, KernelCollection, a_minimal_incision,
                                compute_kernels, consolidate, enumerate_minimal_incisions,
                                semi_revise, shrink_to_kernel)
from kerneldiag.logic import FALSUM, VERUM, Atom, Not, entails, parse_formula
from kerneldiag.oracles import brute_incisions, brute_kernels, tt_satisfiable

from conftest import P

# Frozen from brute_kernels (truth tables over every subset of the 10 formulas).
FIG6_KERNEL = frozenset(P("!C & !F", "!C & okY -> E", "(D | E) & okZ -> F", "okY", "okZ"))

a, b, c = map(Atom, "abc")
p, q = Atom("p"), Atom("q")


def test_fig6_kernel(fig6, obs):
    kernels = compute_kernels(fig6.system.with_observation(obs), FALSUM)
    assert list(kernels) == [FIG6_KERNEL]


def test_kernel_examples():
    assert set(compute_kernels(P("p", "p -> q"), q)) == {frozenset(P("p", "p -> q"))}
    assert len(compute_kernels(P("p"), FALSUM)) == 0


def test_tautology_has_empty_kernel():
    assert list(compute_kernels(P("p", "q"), VERUM)) == [frozenset()]
    assert list(compute_kernels([], parse_formula("p | !p"))) == [frozenset()]


def test_shrink_examples(fig6, obs):
    assert shrink_to_kernel(P("p", "!p", "q"), FALSUM) == frozenset(P("p", "!p"))
    assert shrink_to_kernel(fig6.system.with_observation(obs), FALSUM) == FIG6_KERNEL
    assert shrink_to_kernel(P("p"), p) == {p}


def test_shrink_precondition():
    with pytest.raises(ContractError):
        shrink_to_kernel(P("p"), FALSUM)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9))
def test_kernels_match_brute_force(seed):
    rng = random.Random(seed)
    base = random_base(rng, max_formulas=8, max_atoms=4)
    target = FALSUM if rng.random() < 0.6 else random_formula(rng, [Atom("p0"), Atom("p1")], 1)
    found = compute_kernels(base, target)
    assert set(found) == brute_kernels(base, target)
    for k in found:
        assert entails(k, target)
        assert all(not entails(k - {f}, target) for f in k)


def test_collection_is_canonical():
    k1 = KernelCollection(FALSUM, (frozenset(P("p", "!p")), frozenset(P("q", "!q")), frozenset(P("p", "!p"))))
    assert len(k1) == 2
    assert k1 == KernelCollection(FALSUM, tuple(reversed(k1.kernels)))


def test_a_minimal_incision_examples(fig6):
    ass = fig6.system.ass
    S = KernelCollection(FALSUM, (FIG6_KERNEL,))
    assert a_minimal_incision(S, ass) == {Atom("okY")}
    # both options satisfy every incision condition
    assert brute_incisions([FIG6_KERNEL], ass) == {frozenset({Atom("okY")}), frozenset({Atom("okZ")})}
    assert a_minimal_incision([], ass) == frozenset()
    assert a_minimal_incision([{a, b}], {c}) == {a}


def test_enumerate_incisions_examples(fig6):
    ass = fig6.system.ass
    assert set(enumerate_minimal_incisions([FIG6_KERNEL], ass)) == {frozenset({Atom("okY")}), frozenset({Atom("okZ")})}
    assert set(enumerate_minimal_incisions([{a}, {b}], {a, b})) == {frozenset({a, b})}
    assert set(enumerate_minimal_incisions([{a, b}, {b, c}], {a, b, c})) == {frozenset({b}), frozenset({a, c})}


def test_empty_kernel_blocks_preference():
    # the empty kernel never meets the preferred set, so preference is off
    assert set(enumerate_minimal_incisions([set(), {a, b}], {a})) == {frozenset({a}), frozenset({b})}


kernel_families = st.lists(
    st.frozensets(st.sampled_from("abcdef"), min_size=0, max_size=6), max_size=5)


@given(kernel_families, st.frozensets(st.sampled_from("abcdefg")))
def test_incisions_match_brute_force(kernels, preferred):
    assert set(enumerate_minimal_incisions(kernels, preferred)) == brute_incisions(kernels, preferred)


@given(kernel_families, st.frozensets(st.sampled_from("abcdefg")))
def test_incision_contract(kernels, preferred):
    sigma = a_minimal_incision(kernels, preferred)
    union = frozenset().union(*kernels) if kernels else frozenset()
    restrict = all(k & preferred for k in kernels)
    assert sigma <= union
    assert all(k & sigma for k in kernels if k)
    if restrict:
        assert sigma <= preferred
    for x in sigma:
        smaller = sigma - {x}
        assert not all(k & smaller for k in kernels if k)


def test_semi_revise_examples(fig6, obs):
    assert semi_revise(P("p"), q, P("q")) == set(P("p", "q"))
    assert semi_revise(P("p"), Not(p), [p]) == {Not(p)}
    base = fig6.system.base()
    revised = semi_revise(base, obs, fig6.system.ass)
    assert revised == base.add(obs) - {Atom("okY")}


def test_consolidate_examples():
    assert consolidate(P("p", "q")) == set(P("p", "q"))
    assert consolidate(P("p", "!p")) == set(P("!p"))
    assert consolidate([FALSUM]) == set()


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9))
def test_semi_revision_postulates(seed):
    rng = random.Random(seed)
    base = random_base(rng, max_formulas=7, max_atoms=4)
    atoms = [Atom(f"p{i}") for i in range(4)]
    new = random_formula(rng, atoms, 2)
    preferred = [f for f in base if rng.random() < 0.5]
    out = semi_revise(base, new, preferred)
    expanded = set(base) | {new}
    assert set(out) <= expanded
    assert tt_satisfiable(out)
    if tt_satisfiable(expanded):
        assert set(out) == expanded
