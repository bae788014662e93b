"""Relevance spreading over a directed relatedness graph and local diagnosis.

Starting from the atoms of the observation, activation spreads along arcs one
frontier at a time.  Assumables met on the way are the relevant ones; the
compartment is the observation plus every formula of SD + ASS that mentions a
relevant assumable.  Diagnosis is then run on the compartment alone.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .diagnosis import (NotDiagnosableError, System, diagnosable, diagnose,
                        minimal_conflict_sets)
from .hitting import minimal_hitting_sets
from .logic import Atom, BeliefBase, Formula, count_sat_calls, vars_of


class GraphError(ValueError):
    pass


class RelatednessGraph:
    """Directed graph over atoms; neighbours are kept in name order."""

    def __init__(self, edges: Iterable[tuple[Atom, Atom]] = (), nodes: Iterable[Atom] = ()):
        self.edges = frozenset((Atom(a) if isinstance(a, str) else a,
                                Atom(b) if isinstance(b, str) else b) for a, b in edges)
        self.nodes = frozenset(nodes).union(*({a, b} for a, b in self.edges))
        succ: dict[Atom, list[Atom]] = {}
        for a, b in self.edges:
            succ.setdefault(a, []).append(b)
        self._succ = {a: tuple(sorted(bs)) for a, bs in succ.items()}

    def successors(self, atom: Atom) -> tuple[Atom, ...]:
        return self._succ.get(atom, ())

    def __eq__(self, other):
        if not isinstance(other, RelatednessGraph):
            return NotImplemented
        return self.edges == other.edges and self.nodes == other.nodes

    def __hash__(self):
        return hash((self.edges, self.nodes))

    def __repr__(self):
        return f"RelatednessGraph({len(self.nodes)} nodes, {len(self.edges)} edges)"


@dataclass(frozen=True)
class ComponentDecl:
    name: str
    inputs: tuple[Atom, ...]
    output: Atom
    ok_atom: Atom

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(self.inputs))
        if not self.inputs:
            raise GraphError(f"component {self.name}: no inputs")
        if self.output in self.inputs:
            raise GraphError(f"component {self.name}: output is also an input")


def graph_from_components(decls: Iterable[ComponentDecl]) -> RelatednessGraph:
    """Arcs run from each input to the component's ok-atom and from there to its output."""
    edges = set()
    outputs: dict[Atom, str] = {}
    for d in decls:
        if d.output in outputs:
            raise GraphError(
                f"output {d.output.name} produced by both {outputs[d.output]} and {d.name}")
        outputs[d.output] = d.name
        edges.update((i, d.ok_atom) for i in d.inputs)
        edges.add((d.ok_atom, d.output))
    return RelatednessGraph(edges)


def adjacent(graph: RelatednessGraph, atoms: Iterable[Atom]) -> frozenset[Atom]:
    return frozenset(b for a in atoms for b in graph.successors(a))


def _next_frontier(graph: RelatednessGraph, frontier: Iterable[Atom], seen: set) -> list[Atom]:
    # discovery order: sources in frontier order, successors by name
    out: dict[Atom, None] = {}
    for a in frontier:
        for b in graph.successors(a):
            if b not in seen:
                out.setdefault(b)
    return list(out)


@dataclass(frozen=True)
class RetrievalBudget:
    """Resource bound for spreading.

    ``max_rounds`` caps frontier expansions and ``max_marked`` caps the total
    number of marked atoms.  ``deadline`` is a ``time.monotonic()`` instant
    checked before every mark; leave it unset for reproducible runs.
    """

    max_rounds: Optional[int] = None
    max_marked: Optional[int] = None
    deadline: Optional[float] = None

    def __post_init__(self):
        for name in ("max_rounds", "max_marked"):
            value = getattr(self, name)
            if value is not None and value < 1:
                raise ValueError(f"{name} must be a positive integer")


UNBOUNDED = RetrievalBudget()


@dataclass(frozen=True)
class Retrieval:
    relevant: tuple[Atom, ...]
    marked: tuple[Atom, ...]
    rounds: int
    exhausted: bool


def spread(obs: Formula, ass: Iterable[Atom], graph: RelatednessGraph,
           budget: RetrievalBudget = UNBOUNDED) -> Retrieval:
    """Run retrieval and report marks, rounds and whether the budget ran out."""
    ass = frozenset(ass)
    start = sorted(vars_of(obs))
    marked = list(start)
    seen = set(start)
    relevant = [p for p in start if p in ass]
    frontier = _next_frontier(graph, start, seen)
    rounds = 0
    exhausted = False

    while frontier:
        if budget.max_rounds is not None and rounds >= budget.max_rounds:
            exhausted = True
            break
        rounds += 1
        for p in frontier:
            if ((budget.max_marked is not None and len(marked) >= budget.max_marked)
                    or (budget.deadline is not None and time.monotonic() >= budget.deadline)):
                exhausted = True
                break
            marked.append(p)
            seen.add(p)
            if p in ass:
                relevant.append(p)
        if exhausted:
            break
        frontier = _next_frontier(graph, frontier, seen)

    return Retrieval(tuple(relevant), tuple(marked), rounds, exhausted)


def retrieve(obs: Formula, ass: Iterable[Atom], graph: RelatednessGraph,
             budget: RetrievalBudget = UNBOUNDED) -> list[Atom]:
    """Relevant assumables in the order activation reaches them.

    Within a round, atoms are taken source by source (sources in the order
    they were marked, successors by name).  Any budget yields a prefix of the
    list an unbounded run returns.
    """
    return list(spread(obs, ass, graph, budget).relevant)


@dataclass(frozen=True)
class Compartment:
    formulas: BeliefBase
    relevant: tuple[Atom, ...]
    sequence: tuple[Formula, ...] = field(repr=False)

    def __len__(self):
        return len(self.formulas)

    def truncate(self, n: int) -> BeliefBase:
        """The first ``n`` formulas in retrieval order."""
        return BeliefBase(self.sequence[:n])


def compartment(obs: Formula, system: System, relevant: Iterable[Atom]) -> Compartment:
    """The observation and every formula of SD + ASS mentioning a relevant assumable.

    Formulas are collected per relevant atom in retrieval order, so any prefix
    of ``sequence`` describes the most relevant components first.
    """
    relevant = tuple(relevant)
    stray = set(relevant) - system.ass
    if stray:
        raise ValueError(f"not assumables: {sorted(a.name for a in stray)}")
    pool = list(system.base())
    sequence = [obs]
    taken = {obs}
    for p in relevant:
        for f in pool:
            if f not in taken and p in vars_of(f):
                sequence.append(f)
                taken.add(f)
    return Compartment(BeliefBase(sequence), relevant, tuple(sequence))


@dataclass(frozen=True)
class LocalDiagnosis:
    diagnoses: frozenset
    conflict_sets: Optional[frozenset]
    relevant: tuple[Atom, ...]
    compartment: Compartment
    local_system: System
    total_formulas: int
    entailment_calls: int
    budget_exhausted: bool

    @property
    def compartment_size(self) -> int:
        return len(self.compartment)


def local_system(comp: Compartment, obs: Formula) -> System:
    """Turn a compartment back into a system: relevant atoms are its assumables."""
    ass = frozenset(comp.relevant)
    sd = comp.formulas.as_frozenset() - ass - {obs}
    return System(sd, ass)


def local_diagnose(system: System, obs: Formula, graph: RelatednessGraph,
                   budget: RetrievalBudget = UNBOUNDED, strategy: str = "kernels") -> LocalDiagnosis:
    """Diagnose using only the compartment retrieved for ``obs``.

    Raises :class:`NotDiagnosableError` with ``scope="global"`` when SD itself
    contradicts the observation, and ``scope="local"`` when only the
    compartment does.
    """
    with count_sat_calls() as calls:
        found = spread(obs, system.ass, graph, budget)
        comp = compartment(obs, system, found.relevant)
        sub = local_system(comp, obs)
        if strategy == "kernels":
            conflicts = minimal_conflict_sets(sub, obs)
            result = minimal_hitting_sets(conflicts)
        else:
            conflicts = None
            result = diagnose(sub, obs, strategy=strategy)
        if not result:
            if not diagnosable(system, obs):
                raise NotDiagnosableError(scope="global")
            raise NotDiagnosableError(
                "compartment is inconsistent with the observation", scope="local")
    return LocalDiagnosis(
        diagnoses=frozenset(result),
        conflict_sets=None if conflicts is None else frozenset(conflicts),
        relevant=found.relevant,
        compartment=comp,
        local_system=sub,
        total_formulas=len(system.with_observation(obs)),
        entailment_calls=calls[0],
        budget_exhausted=found.exhausted,
    )
