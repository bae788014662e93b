"""Consistency-based diagnosis on top of kernel operations.

Assumables are atoms (``okX``) that enter a belief base as unit formulas.
Conflict sets are the assumables of the falsum-kernels of SD + ASS + OBS, and
diagnoses are the minimal hitting sets of the minimal conflict sets.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from .hitting import minimal_hitting_sets, minimize, sort_sets
from .kernels import a_minimal_incision, compute_kernels, semi_revise, shrink_to_kernel
from .logic import FALSUM, Atom, BeliefBase, Formula, is_satisfiable

ConflictSet = frozenset  # of Atom
Diagnosis = frozenset  # of Atom


class NotDiagnosableError(ValueError):
    """SD together with the observation is inconsistent.

    ``scope`` is ``"global"`` for the full system and ``"local"`` when only a
    compartment of it was searched.
    """

    def __init__(self, message: str = "system description is inconsistent with the observation",
                 scope: str = "global"):
        super().__init__(message)
        self.scope = scope


@dataclass(frozen=True)
class System:
    """A system description together with its assumables."""

    sd: BeliefBase
    ass: frozenset[Atom]

    def __init__(self, sd: Iterable[Formula], ass: Iterable[Atom]):
        ass = frozenset(ass)
        for a in ass:
            if not isinstance(a, Atom):
                raise TypeError(f"assumables must be atoms, got {a!r}")
        object.__setattr__(self, "sd", BeliefBase(sd))
        object.__setattr__(self, "ass", ass)

    def base(self) -> BeliefBase:
        """SD with every assumable added as a unit formula."""
        return self.sd | self.ass

    def with_observation(self, obs: Formula) -> BeliefBase:
        return self.base().add(obs)


def diagnosable(system: System, obs: Formula) -> bool:
    return is_satisfiable(system.sd.add(obs))


def minimal_conflict_sets(system: System, obs: Formula) -> set[ConflictSet]:
    """Project every falsum-kernel of SD + ASS + OBS onto ASS and minimize.

    Different kernels can project onto nested assumable sets, hence the
    minimization.
    """
    kernels = compute_kernels(system.with_observation(obs), FALSUM)
    return minimize(frozenset(k & system.ass) for k in kernels)


def diagnose(system: System, obs: Formula, strategy: str = "kernels") -> set[Diagnosis]:
    """All minimal diagnoses.

    ``strategy="kernels"`` enumerates every conflict first; ``"hs-dag"``
    discovers conflicts lazily while expanding a hitting-set DAG.  Both give
    ``set()`` when the system is not diagnosable and ``{frozenset()}`` when
    the observation is consistent with SD and ASS.
    """
    if strategy == "kernels":
        return minimal_hitting_sets(minimal_conflict_sets(system, obs))
    if strategy == "hs-dag":
        return build_hs_dag(conflict_oracle(system, obs))
    raise ValueError(f"unknown strategy {strategy!r}")


def diagnose_one(system: System, obs: Formula) -> Diagnosis:
    """The assumables given up when SD + ASS is semi-revised by ``obs``."""
    if not diagnosable(system, obs):
        raise NotDiagnosableError()
    base = system.base()
    revised = semi_revise(base, obs, system.ass)
    removed = base.as_frozenset() - revised.as_frozenset()
    assert removed <= system.ass, removed
    return frozenset(removed)


def ass_incision(system: System, obs: Formula) -> frozenset[Formula]:
    """The ASS-minimal incision over the falsum-kernels of SD + ASS + OBS."""
    return a_minimal_incision(compute_kernels(system.with_observation(obs), FALSUM), system.ass)


def sorted_diagnoses(diagnoses: Iterable[Iterable[Atom]]) -> list[list[str]]:
    """Atom-name lists ordered by cardinality, then lexicographically."""
    return sort_sets(({a.name for a in d} for d in diagnoses))


# --------------------------------------------------------------------------
# Hitting-set DAG

Oracle = Callable[[frozenset], Optional[frozenset]]


def conflict_oracle(system: System, obs: Formula) -> Oracle:
    """Oracle returning a conflict set disjoint from ``excluded``, or ``None``.

    The conflict is the ASS-part of one kernel of SD + OBS + (ASS - excluded);
    it is not necessarily a minimal conflict set.
    """
    fixed = system.sd.add(obs)

    def oracle(excluded: frozenset) -> Optional[frozenset]:
        base = fixed | (system.ass - excluded)
        if is_satisfiable(base):
            return None
        return frozenset(shrink_to_kernel(base, FALSUM) & system.ass)

    return oracle


@dataclass(eq=False)
class HittingSetNode:
    path: frozenset
    label: Optional[frozenset] = None   # None marks a checkmark (hitting set)
    status: str = "open"                # open | closed | pruned | done
    children: dict = field(default_factory=dict)
    parents: list = field(default_factory=list)


def build_hs_dag(oracle: Oracle) -> set[frozenset]:
    """Minimal hitting sets of all conflicts reachable through ``oracle``.

    Breadth-first HS-DAG with node reuse, label reuse, closing and pruning.
    Labels may be non-minimal conflicts; pruning relabels a node whenever a
    strictly smaller conflict turns up and drops the now-redundant branches.
    """
    root = HittingSetNode(frozenset())
    nodes = {root.path: root}
    labels: list[frozenset] = []
    hits: list[HittingSetNode] = []
    queue = deque([root])

    def detach(node: HittingSetNode) -> None:
        if node.parents or node is root:
            return
        node.status = "pruned"
        nodes.pop(node.path, None)
        for child in node.children.values():
            child.parents.remove(node)
            detach(child)
        node.children.clear()

    def prune(smaller: frozenset) -> None:
        for node in list(nodes.values()):
            if node.label is not None and smaller < node.label and node.status != "pruned":
                dropped = node.label - smaller
                node.label = smaller
                for e in dropped:
                    child = node.children.pop(e, None)
                    if child is not None:
                        child.parents.remove(node)
                        detach(child)

    while queue:
        node = queue.popleft()
        if node.status != "open":
            continue
        if any(h.status == "done" and h.path <= node.path for h in hits):
            node.status = "closed"
            continue
        label = next((c for c in labels if not c & node.path), None)
        if label is None:
            label = oracle(node.path)
            if label is not None:
                label = frozenset(label)
                if label & node.path:
                    raise ValueError("oracle returned a conflict meeting the excluded set")
                if label not in labels:
                    prune(label)
                    labels.append(label)
        node.status = "done"
        node.label = label
        if label is None:
            hits.append(node)
            continue
        for e in sorted(label, key=str):
            path = node.path | {e}
            child = nodes.get(path)
            if child is None:
                child = HittingSetNode(path)
                nodes[path] = child
                queue.append(child)
            node.children[e] = child
            child.parents.append(node)

    return minimize(h.path for h in hits if h.status == "done")
