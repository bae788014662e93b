"""Kernels, A-minimal incisions, kernel semi-revision and consolidation.

A ``target``-kernel of a base is a subset-minimal subset entailing the
target; with ``target = FALSUM`` kernels are the minimal inconsistent subsets.
Kernels and incisions are plain frozensets of formulas.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .hitting import minimal_hitting_sets
from .logic import FALSUM, BeliefBase, Formula, entails, formula_key

Kernel = frozenset  # of Formula
Incision = frozenset  # of Formula


class ContractError(ValueError):
    """An operation was called outside its precondition."""


def _key(x):
    # non-formula items are accepted by the incision functions
    return formula_key(x) if isinstance(x, Formula) else (0, str(x))


def _set_key(s: Iterable[Formula]):
    keys = sorted(_key(f) for f in s)
    return (len(keys), keys)


@dataclass(frozen=True)
class KernelCollection:
    """The kernels of some base for ``target``, canonically ordered."""

    target: Formula
    kernels: tuple[Kernel, ...]

    def __post_init__(self):
        ordered = tuple(sorted(set(map(frozenset, self.kernels)), key=_set_key))
        object.__setattr__(self, "kernels", ordered)

    def __iter__(self):
        return iter(self.kernels)

    def __len__(self):
        return len(self.kernels)

    def __contains__(self, item):
        return frozenset(item) in self.kernels

    def union(self) -> frozenset[Formula]:
        return frozenset().union(*self.kernels)


def shrink_to_kernel(candidate: Iterable[Formula], target: Formula) -> Kernel:
    """Deletion-based minimization of an entailing set down to one kernel.

    Formulas are tried in canonical order; each is dropped when the rest still
    entails ``target``.
    """
    kept = list(BeliefBase(candidate))
    if not entails(kept, target):
        raise ContractError("candidate does not entail the target")
    i = 0
    while i < len(kept):
        rest = kept[:i] + kept[i + 1:]
        if entails(rest, target):
            kept = rest
        else:
            i += 1
    return frozenset(kept)


def compute_kernels(base: Iterable[Formula], target: Formula = FALSUM) -> KernelCollection:
    """All kernels of ``base`` for ``target``.

    Dualization: any kernel not yet found is disjoint from some minimal hitting
    set of the kernels found so far, so the loop stops exactly when no
    hitting-set complement entails the target.
    """
    base = BeliefBase(base)
    found: list[Kernel] = []
    while True:
        new = None
        hitting = sorted(minimal_hitting_sets(found), key=_set_key)
        for h in hitting:
            rest = base - h
            if entails(rest, target):
                new = shrink_to_kernel(rest, target)
                break
        if new is None:
            return KernelCollection(target, tuple(found))
        found.append(new)


def _kernels_of(kernels) -> list[frozenset]:
    if isinstance(kernels, KernelCollection):
        return list(kernels.kernels)
    return [frozenset(k) for k in kernels]


def enumerate_minimal_incisions(kernels, preferred: Iterable[Formula] = ()) -> list[Incision]:
    """Every set meeting the four A-minimal incision conditions for ``preferred``.

    When each kernel meets ``preferred`` the incisions are the minimal hitting
    sets of the kernels cut down to ``preferred``; otherwise they are the
    minimal hitting sets of the non-empty kernels.  Returned in canonical order.
    """
    family = _kernels_of(kernels)
    preferred = frozenset(preferred)
    nonempty = [k for k in family if k]
    if all(k & preferred for k in family):
        result = minimal_hitting_sets(k & preferred for k in nonempty)
    else:
        result = minimal_hitting_sets(nonempty)
    return sorted(result, key=lambda s: sorted(_key(f) for f in s))


def a_minimal_incision(kernels, preferred: Iterable[Formula] = ()) -> Incision:
    """The canonical A-minimal incision: least one under formula ordering."""
    options = enumerate_minimal_incisions(kernels, preferred)
    return options[0] if options else frozenset()


def consolidate(base: Iterable[Formula], preferred: Iterable[Formula] = ()) -> BeliefBase:
    """Contract ``base`` by falsum through the A-minimal incision."""
    base = BeliefBase(base)
    return base - a_minimal_incision(compute_kernels(base, FALSUM), preferred)


def semi_revise(base: Iterable[Formula], new: Formula,
                preferred: Iterable[Formula] = ()) -> BeliefBase:
    """Add ``new`` to ``base`` and consolidate the result.

    >>> from kerneldiag.logic import Atom, Not
    >>> p = Atom("p")
    >>> list(semi_revise([p], Not(p), preferred=[p]))
    [Not(Atom('p'))]
    """
    return consolidate(BeliefBase(base).add(new), preferred)
