"""Consistency-based diagnosis through kernel semi-revision, with relevance focusing."""

from .diagnosis import (NotDiagnosableError, System, build_hs_dag, diagnosable, diagnose,
                        diagnose_one, minimal_conflict_sets)
from .hitting import minimal_hitting_sets
from .kernels import (ContractError, KernelCollection, a_minimal_incision, compute_kernels,
                      consolidate, enumerate_minimal_incisions, semi_revise, shrink_to_kernel)
from .locality import (ComponentDecl, RelatednessGraph, RetrievalBudget, adjacent, compartment,
                       graph_from_components, local_diagnose, retrieve)
from .logic import (FALSUM, VERUM, And, Atom, BeliefBase, Formula, FormulaSyntaxError, Implies,
                    Not, Or, entails, is_satisfiable, parse_formula, render, vars_of)

__version__ = "0.1.0"
