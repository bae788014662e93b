"""Seeded random instances for property checks and benchmarking."""
from __future__ import annotations

import random
from functools import reduce

from .diagnosis import System
from .locality import ComponentDecl, graph_from_components
from .logic import FALSUM, VERUM, And, Atom, Formula, Implies, Not, Or


def random_formula(rng: random.Random, atoms: list[Atom], depth: int = 3) -> Formula:
    if depth == 0 or rng.random() < 0.3:
        r = rng.random()
        if r < 0.03:
            return FALSUM
        if r < 0.05:
            return VERUM
        return rng.choice(atoms)
    op = rng.choice((Not, And, Or, Implies, Not))
    if op is Not:
        return Not(random_formula(rng, atoms, depth - 1))
    return op(random_formula(rng, atoms, depth - 1), random_formula(rng, atoms, depth - 1))


def random_base(rng: random.Random, max_formulas: int = 12, max_atoms: int = 6,
                depth: int = 2) -> list[Formula]:
    atoms = [Atom(f"p{i}") for i in range(rng.randint(1, max_atoms))]
    return [random_formula(rng, atoms, depth) for _ in range(rng.randint(0, max_formulas))]


def random_system(rng: random.Random, max_ass: int = 6, max_sd: int = 6,
                  max_plain: int = 4) -> tuple[System, Formula]:
    """A small system whose SD rules are guarded by assumables, plus an observation."""
    ass = [Atom(f"ok{i}") for i in range(rng.randint(1, max_ass))]
    plain = [Atom(f"q{i}") for i in range(rng.randint(1, max_plain))]
    sd, rules = [], []
    for _ in range(rng.randint(0, max_sd)):
        guards = rng.sample(ass, rng.randint(1, min(2, len(ass))))
        body = random_formula(rng, plain, 2)
        head = random_formula(rng, plain, 1)
        sd.append(Implies(reduce(And, [body, *guards]), head))
        rules.append((body, head))
    if rng.random() < 0.2:
        sd.append(random_formula(rng, plain, 2))
    if rules and rng.random() < 0.7:
        # contradict one or two rule heads so that faults are needed
        picked = rng.sample(rules, min(len(rules), rng.randint(1, 2)))
        obs = reduce(And, [And(body, Not(head)) for body, head in picked])
    else:
        obs = random_formula(rng, plain, 2)
    return System(sd, ass), obs


def _gate(kind: str, inputs: list[Atom]) -> Formula:
    if kind == "not":
        return Not(inputs[0])
    if kind == "buf":
        return inputs[0]
    return reduce(And if kind == "and" else Or, inputs)


def random_circuit(rng: random.Random, n_components: int = 6, n_inputs: int = 3):
    """A layered combinational circuit modelled component by component.

    Returns ``(system, decls, observation)``.  Each component X with gate g
    contributes ``g(inputs) & okX -> out`` and ``!g(inputs) & okX -> !out``;
    the observation fixes the primary inputs and reports one or two other
    signals, usually with a value the fault-free circuit would not produce.
    """
    signals = [Atom(f"I{i}") for i in range(n_inputs)]
    sd, decls, ass, kinds = [], [], [], []
    for k in range(n_components):
        kind = rng.choice(("and", "or", "not", "buf"))
        kinds.append(kind)
        arity = 1 if kind in ("not", "buf") else rng.randint(2, min(3, len(signals)))
        inputs = rng.sample(signals, arity)
        out, ok = Atom(f"S{k}"), Atom(f"okC{k}")
        g = _gate(kind, inputs)
        sd.append(Implies(And(g, ok), out))
        sd.append(Implies(And(Not(g), ok), Not(out)))
        decls.append(ComponentDecl(f"c{k}", tuple(inputs), out, ok))
        ass.append(ok)
        signals.append(out)
    values = {s: rng.random() < 0.5 for s in signals[:n_inputs]}
    for d, kind in zip(decls, kinds):
        bits = [values[i] for i in d.inputs]
        values[d.output] = {"and": all(bits), "or": any(bits),
                            "not": not bits[0], "buf": bits[0]}[kind]
    watched = rng.sample(signals[n_inputs:], min(n_components, rng.randint(1, 2)))
    shown = [s for s in signals[:n_inputs] if rng.random() < 0.8] + watched
    flip = rng.random() < 0.8
    lits = []
    for s in shown:
        value = values[s] != (flip and s is watched[0])
        lits.append(s if value else Not(s))
    return System(sd, ass), decls, reduce(And, lits)


def random_component_graph(rng: random.Random, n_components: int = 8, n_inputs: int = 3):
    system, decls, obs = random_circuit(rng, n_components, n_inputs)
    return graph_from_components(decls), system, obs
