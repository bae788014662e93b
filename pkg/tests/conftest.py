from pathlib import Path

import pytest
from hypothesis import strategies as st

from kerneldiag.logic import FALSUM, VERUM, And, Atom, Implies, Not, Or, parse_formula
from kerneldiag.sysfile import load_system

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fig6():
    return load_system(FIXTURES / "fig6.sys")


@pytest.fixture(scope="session")
def fig7():
    return load_system(FIXTURES / "fig7.sys")


@pytest.fixture(scope="session")
def obs():
    return parse_formula("!C & !F")


def formulas(max_atoms=4, max_leaves=8):
    atoms = st.sampled_from([Atom(f"p{i}") for i in range(max_atoms)])
    leaves = st.one_of(atoms, atoms, atoms, st.just(FALSUM), st.just(VERUM))
    return st.recursive(
        leaves,
        lambda sub: st.one_of(
            st.builds(Not, sub),
            st.builds(And, sub, sub),
            st.builds(Or, sub, sub),
            st.builds(Implies, sub, sub),
        ),
        max_leaves=max_leaves,
    )


def P(*texts):
    return [parse_formula(t) for t in texts]


def pytest_terminal_summary(terminalreporter):
    import sys
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, (ok, detail) in sorted(module.RESULTS.items(),
                                     key=lambda kv: int(kv[0].split()[0][2:])):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  ({detail})")
