"""Minimal hitting sets of a finite family of finite sets."""
from __future__ import annotations

from typing import Callable, Hashable, Iterable, TypeVar

T = TypeVar("T", bound=Hashable)


def minimize(family: Iterable[frozenset]) -> set[frozenset]:
    """Keep only the subset-minimal members of ``family``."""
    members = sorted(set(family), key=len)
    kept: list[frozenset] = []
    for s in members:
        if not any(k <= s for k in kept):
            kept.append(s)
    return set(kept)


def minimal_hitting_sets(collection: Iterable[Iterable[T]]) -> set[frozenset[T]]:
    """All subset-minimal sets meeting every member of ``collection``.

    The empty collection has the single hitting set ``{}``; a collection
    containing an empty member has none.  Berge's incremental transversal
    construction.
    """
    family = minimize(frozenset(s) for s in collection)
    if frozenset() in family:
        return set()
    transversals: set[frozenset[T]] = {frozenset()}
    for s in sorted(family, key=len):
        grown = set()
        for h in transversals:
            if h & s:
                grown.add(h)
            else:
                grown.update(h | {x} for x in s)
        transversals = minimize(grown)
    return transversals


def sort_sets(sets: Iterable[Iterable[T]], key: Callable[[T], object] = lambda x: x) -> list[list[T]]:
    """Sort each set by ``key`` and the family by cardinality, then lexicographically."""
    rows = [sorted(s, key=key) for s in sets]
    return sorted(rows, key=lambda row: (len(row), [key(x) for x in row]))
