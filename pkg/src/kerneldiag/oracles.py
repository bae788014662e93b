"""Brute-force reference procedures for checking the engine.

Nothing here uses the DPLL solver or the kernel machinery.  Satisfiability is
decided by truth tables, packed into integers: bit ``v`` of a formula's mask is
its value under valuation number ``v``.  Every minimal object is found by
enumerating subsets.  Only usable on small inputs.
"""
from __future__ import annotations

from itertools import combinations
from typing import Iterable, Sequence

from .logic import And, Atom, Falsum, Formula, Implies, Not, Or, Verum, vars_of


class TruthTable:
    """Truth tables of formulas over a fixed list of atoms."""

    def __init__(self, atoms: Iterable[Atom]):
        self.atoms = sorted(set(atoms))
        n = len(self.atoms)
        if n > 20:
            raise ValueError("too many atoms for a truth table")
        self.rows = 1 << n
        self.full = (1 << self.rows) - 1
        self._atom = {}
        for i, a in enumerate(self.atoms):
            # valuation v makes atom i true iff bit i of v is set
            self._atom[a] = sum(1 << v for v in range(self.rows) if v >> i & 1)

    def mask(self, f: Formula) -> int:
        if isinstance(f, Atom):
            return self._atom[f]
        if isinstance(f, Falsum):
            return 0
        if isinstance(f, Verum):
            return self.full
        if isinstance(f, Not):
            return self.full ^ self.mask(f.arg)
        left, right = self.mask(f.left), self.mask(f.right)
        if isinstance(f, And):
            return left & right
        if isinstance(f, Or):
            return left | right
        if isinstance(f, Implies):
            return (self.full ^ left) | right
        raise TypeError(f)


def _table(formulas: Sequence[Formula]) -> TruthTable:
    return TruthTable(frozenset().union(*map(vars_of, formulas)) if formulas else ())


def tt_satisfiable(formulas: Iterable[Formula]) -> bool:
    formulas = list(formulas)
    table = _table(formulas)
    m = table.full
    for f in formulas:
        m &= table.mask(f)
    return m != 0


def tt_entails(formulas: Iterable[Formula], target: Formula) -> bool:
    return not tt_satisfiable([*formulas, Not(target)])


def subsets(items) -> Iterable[frozenset]:
    items = list(items)
    for r in range(len(items) + 1):
        for combo in combinations(items, r):
            yield frozenset(combo)


def _minimal(family) -> set[frozenset]:
    family = set(family)
    return {s for s in family if not any(t < s for t in family)}


def brute_kernels(base: Iterable[Formula], target: Formula) -> set[frozenset]:
    """Minimal entailing subsets, by subsets in order of size."""
    items = list(set(base))
    table = _table(items + [target])
    masks = [table.mask(f) for f in items]
    counter = table.full ^ table.mask(target)
    found: list[int] = []
    for r in range(len(items) + 1):
        for combo in combinations(range(len(items)), r):
            bits = sum(1 << i for i in combo)
            if any(k & bits == k for k in found):
                continue
            m = counter
            for i in combo:
                m &= masks[i]
            if m == 0:
                found.append(bits)
    return {frozenset(items[i] for i in range(len(items)) if k >> i & 1) for k in found}


def brute_hitting_sets(collection) -> set[frozenset]:
    collection = [frozenset(s) for s in collection]
    universe = frozenset().union(*collection) if collection else frozenset()
    return _minimal(h for h in subsets(universe) if all(h & s for s in collection))


def brute_incisions(kernels, preferred) -> set[frozenset]:
    """Subset filtering against the four A-minimal incision conditions."""
    kernels = [frozenset(k) for k in kernels]
    preferred = frozenset(preferred)
    universe = frozenset().union(*kernels) if kernels else frozenset()
    restrict = all(k & preferred for k in kernels)

    def ok(s):
        return (all(s & k for k in kernels if k)
                and (not restrict or s <= preferred))

    return _minimal(s for s in subsets(universe) if ok(s))


def _ass_masks(sd, ass, obs):
    ass = sorted(ass)
    table = _table([*sd, obs, *ass])
    fixed = table.full
    for f in [*sd, obs]:
        fixed &= table.mask(f)
    return ass, fixed, [table.mask(a) for a in ass]


def brute_diagnoses(sd, ass, obs) -> set[frozenset]:
    """Minimal sets of assumables whose retraction leaves SD + OBS consistent."""
    ass, fixed, masks = _ass_masks(list(sd), ass, obs)
    good = []
    for d in subsets(range(len(ass))):
        m = fixed
        for i in range(len(ass)):
            if i not in d:
                m &= masks[i]
        if m:
            good.append(frozenset(ass[i] for i in d))
    return _minimal(good)


def brute_conflicts(sd, ass, obs) -> set[frozenset]:
    ass, fixed, masks = _ass_masks(list(sd), ass, obs)
    bad = []
    for c in subsets(range(len(ass))):
        m = fixed
        for i in c:
            m &= masks[i]
        if not m:
            bad.append(frozenset(ass[i] for i in c))
    return _minimal(bad)


def reachable(graph, sources) -> set:
    """Depth-first reachability along arcs (sources included)."""
    succ = {}
    for a, b in graph.edges:
        succ.setdefault(a, set()).add(b)
    seen, stack = set(sources), list(sources)
    while stack:
        for b in succ.get(stack.pop(), ()):
            if b not in seen:
                seen.add(b)
                stack.append(b)
    return seen
