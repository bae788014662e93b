"""Plain-text system files.

::

    [SD]
    (A & B) & okX -> D        # one formula per line
    [ASS]
    okX okY okZ               # atoms, whitespace or comma separated
    [COMPONENTS]
    x: inputs A B; output D; ok okX
    [GRAPH]
    C -> okY

``#`` starts a comment.  COMPONENTS and GRAPH are optional; when both are
present their arcs are merged.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .diagnosis import System
from .locality import ComponentDecl, GraphError, RelatednessGraph, graph_from_components
from .logic import Atom, Formula, FormulaSyntaxError, parse_formula

SECTIONS = ("SD", "ASS", "COMPONENTS", "GRAPH")


class SystemFileError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass
class SystemFile:
    sd: list[Formula] = field(default_factory=list)
    ass: list[Atom] = field(default_factory=list)
    components: list[ComponentDecl] = field(default_factory=list)
    edges: list[tuple[Atom, Atom]] = field(default_factory=list)
    has_components: bool = False
    has_graph: bool = False

    @property
    def system(self) -> System:
        return System(self.sd, self.ass)

    @property
    def graph(self) -> Optional[RelatednessGraph]:
        if not (self.has_components or self.has_graph):
            return None
        edges = set(self.edges)
        if self.components:
            edges |= graph_from_components(self.components).edges
        return RelatednessGraph(edges)


_COMPONENT_RE = re.compile(
    r"(?P<name>[A-Za-z][A-Za-z0-9_]*)\s*:\s*inputs\s+(?P<inputs>[^;]+);"
    r"\s*output\s+(?P<output>\S+)\s*;\s*ok\s+(?P<ok>\S+)\s*\Z")
_EDGE_RE = re.compile(r"(?P<src>\S+)\s*->\s*(?P<dst>\S+)\Z")


def _atom(text: str, lineno: int) -> Atom:
    try:
        return Atom(text)
    except ValueError as exc:
        raise SystemFileError(str(exc), lineno) from None


def parse_system(text: str) -> SystemFile:
    out = SystemFile()
    section = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        header = re.fullmatch(r"\[(\w+)\]", line)
        if header:
            section = header.group(1).upper()
            if section not in SECTIONS:
                raise SystemFileError(f"unknown section [{header.group(1)}]", lineno)
            if section == "COMPONENTS":
                out.has_components = True
            elif section == "GRAPH":
                out.has_graph = True
            continue
        if section is None:
            raise SystemFileError("content before the first section header", lineno)
        if section == "SD":
            try:
                out.sd.append(parse_formula(line))
            except FormulaSyntaxError as exc:
                raise SystemFileError(f"column {exc.column}: {exc.args[0]}", lineno) from None
        elif section == "ASS":
            out.ass.extend(_atom(t, lineno) for t in re.split(r"[\s,]+", line) if t)
        elif section == "COMPONENTS":
            m = _COMPONENT_RE.match(line)
            if m is None:
                raise SystemFileError(
                    "expected 'name: inputs A B; output D; ok okX'", lineno)
            try:
                out.components.append(ComponentDecl(
                    m["name"],
                    tuple(_atom(t, lineno) for t in m["inputs"].split()),
                    _atom(m["output"], lineno),
                    _atom(m["ok"], lineno)))
            except GraphError as exc:
                raise SystemFileError(str(exc), lineno) from None
        else:
            m = _EDGE_RE.match(line)
            if m is None:
                raise SystemFileError("expected 'A -> B'", lineno)
            out.edges.append((_atom(m["src"], lineno), _atom(m["dst"], lineno)))
    missing = {d.ok_atom for d in out.components} - set(out.ass)
    if missing:
        raise SystemFileError(
            f"component ok-atoms not declared in [ASS]: {sorted(a.name for a in missing)}", 0)
    try:
        out.graph
    except GraphError as exc:
        raise SystemFileError(str(exc), 0) from None
    return out


def load_system(path) -> SystemFile:
    return parse_system(Path(path).read_text())
