"""scikit-learn style wrappers.

``fit`` takes the system (a :class:`System`, a parsed :class:`SystemFile`, a
path to a system file, or an ``(sd, ass)`` pair); ``predict``/``transform``
take one observation or a list of them, as formulas or formula strings.
"""
from __future__ import annotations

from os import PathLike
from typing import Iterable

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .diagnosis import System, diagnose, diagnose_one, minimal_conflict_sets
from .locality import (RelatednessGraph, RetrievalBudget, compartment, local_diagnose,
                       spread)
from .logic import Atom, Formula, parse_formula
from .sysfile import SystemFile, load_system


def check_system(X, graph=None) -> tuple[System, RelatednessGraph | None]:
    """Coerce the accepted system inputs to ``(System, graph or None)``."""
    if isinstance(X, (str, PathLike)):
        X = load_system(X)
    if isinstance(X, SystemFile):
        return X.system, graph if graph is not None else X.graph
    if isinstance(X, System):
        return X, graph
    if isinstance(X, tuple) and len(X) == 2:
        sd, ass = X
        sd = [parse_formula(f) if isinstance(f, str) else f for f in sd]
        ass = [Atom(a) if isinstance(a, str) else a for a in ass]
        return System(sd, ass), graph
    raise TypeError(f"cannot interpret {type(X).__name__} as a system")


def check_observations(obs) -> list[Formula]:
    if isinstance(obs, (str, Formula)):
        obs = [obs]
    out = []
    for o in obs:
        if isinstance(o, str):
            o = parse_formula(o)
        elif not isinstance(o, Formula):
            raise TypeError(f"observation must be a formula or string, got {o!r}")
        out.append(o)
    return out


class KernelDiagnoser(BaseEstimator):
    """Minimal diagnoses for observations of a fixed system.

    Parameters
    ----------
    strategy : {"kernels", "hs-dag"}
        Eager conflict enumeration or lazy hitting-set DAG.
    local : bool
        Search only the compartment retrieved through the relatedness graph.
    max_rounds, max_marked : int or None
        Retrieval budget in local mode.
    """

    def __init__(self, strategy="kernels", local=False, max_rounds=None, max_marked=None):
        self.strategy = strategy
        self.local = local
        self.max_rounds = max_rounds
        self.max_marked = max_marked

    def fit(self, X, y=None, graph=None):
        if self.strategy not in ("kernels", "hs-dag"):
            raise ValueError(f"unknown strategy {self.strategy!r}")
        self.system_, self.graph_ = check_system(X, graph)
        if self.local and self.graph_ is None:
            raise ValueError("local=True needs a relatedness graph")
        self.budget_ = RetrievalBudget(self.max_rounds, self.max_marked)
        return self

    def _one(self, obs):
        if self.local:
            return set(local_diagnose(self.system_, obs, self.graph_, self.budget_,
                                      strategy=self.strategy).diagnoses)
        return diagnose(self.system_, obs, strategy=self.strategy)

    def predict(self, observations) -> list[set[frozenset[Atom]]]:
        """Set of minimal diagnoses for each observation."""
        check_is_fitted(self)
        return [self._one(o) for o in check_observations(observations)]

    def predict_one(self, observations) -> list[frozenset[Atom]]:
        """The diagnosis chosen by semi-revision, for each observation."""
        check_is_fitted(self)
        return [diagnose_one(self.system_, o) for o in check_observations(observations)]

    def conflicts(self, observations) -> list[set[frozenset[Atom]]]:
        check_is_fitted(self)
        return [minimal_conflict_sets(self.system_, o) for o in check_observations(observations)]


class CompartmentExtractor(TransformerMixin, BaseEstimator):
    """Maps observations to the compartment of SD + ASS relevant to them."""

    def __init__(self, max_rounds=None, max_marked=None):
        self.max_rounds = max_rounds
        self.max_marked = max_marked

    def fit(self, X, y=None, graph=None):
        self.system_, self.graph_ = check_system(X, graph)
        if self.graph_ is None:
            raise ValueError("a relatedness graph is required")
        self.budget_ = RetrievalBudget(self.max_rounds, self.max_marked)
        return self

    def transform(self, observations: Iterable):
        check_is_fitted(self)
        out = []
        for o in check_observations(observations):
            found = spread(o, self.system_.ass, self.graph_, self.budget_)
            out.append(compartment(o, self.system_, found.relevant))
        return out
