"""Command line front end.

Exit codes: 0 success, 2 malformed input, 3 not diagnosable, 4 local mode
requested for a file without COMPONENTS or GRAPH data.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
import time
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional

from .diagnosis import (System, NotDiagnosableError, diagnosable, minimal_conflict_sets,
                        sorted_diagnoses)
from .hitting import minimal_hitting_sets, sort_sets
from .kernels import compute_kernels, semi_revise
from .locality import RetrievalBudget, compartment, local_diagnose, spread
from .logic import FormulaSyntaxError, count_sat_calls, parse_formula, render
from .sysfile import SystemFile, SystemFileError, load_system

EXIT_OK, EXIT_PARSE, EXIT_UNDIAGNOSABLE, EXIT_NO_GRAPH = 0, 2, 3, 4


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


@dataclass
class RunReport:
    diagnoses: list
    conflict_sets: list
    relevant: list
    compartment_size: int
    total_formulas: int
    entailment_calls: int
    elapsed_ms: int
    budget_exhausted: bool

    def to_json(self) -> str:
        return dumps(asdict(self))


def dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False)


def global_report(system: System, obs) -> RunReport:
    start = time.perf_counter()
    with count_sat_calls() as calls:
        conflicts = minimal_conflict_sets(system, obs)
        diagnoses = minimal_hitting_sets(conflicts)
    total = len(system.with_observation(obs))
    return RunReport(
        diagnoses=sorted_diagnoses(diagnoses),
        conflict_sets=sorted_diagnoses(conflicts),
        relevant=sorted(a.name for a in system.ass),
        compartment_size=total,
        total_formulas=total,
        entailment_calls=calls[0],
        elapsed_ms=round((time.perf_counter() - start) * 1000),
        budget_exhausted=False,
    )


def local_report(system: System, obs, graph, budget: RetrievalBudget) -> RunReport:
    start = time.perf_counter()
    result = local_diagnose(system, obs, graph, budget)
    return RunReport(
        diagnoses=sorted_diagnoses(result.diagnoses),
        conflict_sets=sorted_diagnoses(result.conflict_sets),
        relevant=[a.name for a in result.relevant],
        compartment_size=result.compartment_size,
        total_formulas=result.total_formulas,
        entailment_calls=result.entailment_calls,
        elapsed_ms=round((time.perf_counter() - start) * 1000),
        budget_exhausted=result.budget_exhausted,
    )


# --------------------------------------------------------------------------

def _load(args) -> SystemFile:
    try:
        return load_system(args.file)
    except SystemFileError as exc:
        raise CliError(f"{args.file}: {exc}", EXIT_PARSE) from None
    except OSError as exc:
        raise CliError(str(exc), EXIT_PARSE) from None


def _formula(text: str, what: str):
    try:
        return parse_formula(text)
    except FormulaSyntaxError as exc:
        raise CliError(f"{what}: {exc}", EXIT_PARSE) from None


def _obs(args, required: bool = True):
    if args.obs is not None and args.obs_file is not None:
        raise CliError("give either --obs or --obs-file, not both", EXIT_PARSE)
    if args.obs_file is not None:
        return _formula(Path(args.obs_file).read_text(), "observation")
    if args.obs is not None:
        return _formula(args.obs, "observation")
    if required:
        raise CliError("an observation is required (--obs or --obs-file)", EXIT_PARSE)
    return None


def _budget(args) -> RetrievalBudget:
    deadline = None
    if args.timeout_ms is not None:
        deadline = time.monotonic() + args.timeout_ms / 1000
    try:
        return RetrievalBudget(args.max_rounds, args.max_marked, deadline)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_PARSE) from None


def _graph(sf: SystemFile):
    graph = sf.graph
    if graph is None:
        raise CliError("local mode needs a [COMPONENTS] or [GRAPH] section", EXIT_NO_GRAPH)
    return graph


def _emit(args, payload: dict, lines: list[str]) -> None:
    if args.json:
        print(dumps(payload))
    else:
        print("\n".join(lines))


def _fmt_sets(rows) -> str:
    return ", ".join("{" + ", ".join(r) + "}" for r in rows) or "(none)"


def _human(report: RunReport) -> list[str]:
    lines = [
        f"diagnoses:        {_fmt_sets(report.diagnoses)}",
        f"conflict sets:    {_fmt_sets(report.conflict_sets)}",
        f"relevant:         {', '.join(report.relevant) or '(none)'}",
        f"formulas used:    {report.compartment_size} of {report.total_formulas}",
        f"entailment calls: {report.entailment_calls}",
        f"elapsed:          {report.elapsed_ms} ms",
    ]
    if report.budget_exhausted:
        lines.append("retrieval budget exhausted")
    return lines


def cmd_diagnose(args) -> int:
    sf = _load(args)
    obs = _obs(args)
    system = sf.system
    if args.local:
        graph = _graph(sf)
        try:
            report = local_report(system, obs, graph, _budget(args))
        except NotDiagnosableError as exc:
            raise CliError(f"not diagnosable ({exc.scope}): {exc}", EXIT_UNDIAGNOSABLE) from None
    else:
        report = global_report(system, obs)
        if not report.diagnoses:
            raise CliError("not diagnosable: SD is inconsistent with the observation",
                           EXIT_UNDIAGNOSABLE)
    if args.json:
        print(report.to_json())
    else:
        print("\n".join(_human(report)))
    return EXIT_OK


def cmd_conflicts(args) -> int:
    sf = _load(args)
    obs = _obs(args)
    with count_sat_calls() as calls:
        conflicts = sorted_diagnoses(minimal_conflict_sets(sf.system, obs))
    payload = {"conflict_sets": conflicts, "entailment_calls": calls[0]}
    _emit(args, payload, [f"conflict sets: {_fmt_sets(conflicts)}"])
    return EXIT_OK if conflicts != [[]] else EXIT_UNDIAGNOSABLE


def cmd_kernels(args) -> int:
    sf = _load(args)
    target = _formula(args.target, "target")
    obs = _obs(args, required=False)
    base = sf.system.base()
    if obs is not None:
        base = base.add(obs)
    kernels = sort_sets(({render(f) for f in k} for k in compute_kernels(base, target)))
    payload = {"target": render(target), "kernels": kernels}
    _emit(args, payload, [f"{render(target)}-kernels: {_fmt_sets(kernels)}"])
    return EXIT_OK


def cmd_compartment(args) -> int:
    sf = _load(args)
    obs = _obs(args)
    graph = _graph(sf)
    system = sf.system
    found = spread(obs, system.ass, graph, _budget(args))
    comp = compartment(obs, system, found.relevant)
    payload = {
        "relevant": [a.name for a in found.relevant],
        "compartment": [render(f) for f in comp.sequence],
        "compartment_size": len(comp),
        "total_formulas": len(system.with_observation(obs)),
        "budget_exhausted": found.exhausted,
    }
    lines = [f"relevant: {', '.join(payload['relevant']) or '(none)'}", "compartment:"]
    lines += [f"  {s}" for s in payload["compartment"]]
    if found.exhausted:
        lines.append("retrieval budget exhausted")
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_revise(args) -> int:
    sf = _load(args)
    new = _formula(args.add, "input formula")
    base = sf.system.base()
    if args.prefer is None:
        preferred = sf.system.ass
    else:
        preferred = {_formula(p, "preferred formula") for p in args.prefer}
    revised = semi_revise(base, new, preferred)
    removed = base.add(new).as_frozenset() - revised.as_frozenset()
    payload = {"base": sorted(render(f) for f in revised),
               "removed": sorted(render(f) for f in removed)}
    lines = ["revised base:"] + [f"  {s}" for s in payload["base"]]
    lines.append(f"removed: {', '.join(payload['removed']) or '(none)'}")
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_bench(args) -> int:
    sf = _load(args)
    obs = _obs(args)
    graph = _graph(sf)
    system = sf.system
    if not diagnosable(system, obs):
        raise CliError("not diagnosable: SD is inconsistent with the observation",
                       EXIT_UNDIAGNOSABLE)
    budget = _budget(args)
    full = global_report(system, obs)
    try:
        local = local_report(system, obs, graph, budget)
    except NotDiagnosableError as exc:
        raise CliError(f"not diagnosable ({exc.scope}): {exc}", EXIT_UNDIAGNOSABLE) from None
    agree = full.diagnoses == local.diagnoses
    complete = not local.budget_exhausted
    payload = {"global": asdict(full), "local": asdict(local),
               "agree": agree, "divergence": complete and not agree}
    if args.json:
        print(dumps(payload))
    else:
        print("global:")
        print("\n".join("  " + s for s in _human(full)))
        print("local:")
        print("\n".join("  " + s for s in _human(local)))
        print(f"diagnoses agree: {'yes' if agree else 'NO'}")
    if complete and not agree:
        print("DIVERGENCE: local and global diagnoses differ on an unbounded run",
              file=sys.stderr)
    return EXIT_OK


def cmd_check(args) -> int:
    """Compare the engine with truth-table brute force on random systems."""
    from .diagnosis import diagnose
    from .generators import random_system
    from .oracles import brute_diagnoses

    rng = random.Random(args.seed)
    failures = 0
    for i in range(args.count):
        system, obs = random_system(rng)
        expected = brute_diagnoses(system.sd, system.ass, obs)
        for strategy in ("kernels", "hs-dag"):
            if diagnose(system, obs, strategy) != expected:
                failures += 1
                print(f"mismatch on instance {i} ({strategy})", file=sys.stderr)
    payload = {"seed": args.seed, "instances": args.count, "failures": failures}
    _emit(args, payload, [f"{args.count} random systems, {failures} mismatches"])
    return EXIT_OK if failures == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kerneldiag",
        description="Consistency-based diagnosis via kernel semi-revision.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, obs=True, local=False):
        p.add_argument("file", help="system file with [SD]/[ASS] sections")
        if obs:
            p.add_argument("--obs", help="observation formula")
            p.add_argument("--obs-file", help="file holding the observation formula")
        if local:
            p.add_argument("--max-rounds", type=int, help="frontier expansions allowed")
            p.add_argument("--max-marked", type=int, help="atoms that may be marked")
            p.add_argument("--timeout-ms", type=int, help="soft wall-clock limit on retrieval")
        p.add_argument("--json", action="store_true", help="single-line JSON output")

    p = sub.add_parser("diagnose", help="minimal diagnoses for an observation")
    common(p, local=True)
    p.add_argument("--local", action="store_true", help="diagnose the retrieved compartment only")
    p.set_defaults(func=cmd_diagnose)

    p = sub.add_parser("conflicts", help="minimal conflict sets")
    common(p)
    p.set_defaults(func=cmd_conflicts)

    p = sub.add_parser("kernels", help="kernels of SD + ASS (+ OBS) for a target")
    common(p)
    p.add_argument("--target", default="false", help="formula to entail (default: false)")
    p.set_defaults(func=cmd_kernels)

    p = sub.add_parser("compartment", help="relevant assumables and compartment")
    common(p, local=True)
    p.set_defaults(func=cmd_compartment)

    p = sub.add_parser("revise", help="kernel semi-revision of SD + ASS")
    common(p, obs=False)
    p.add_argument("--add", required=True, help="formula to add")
    p.add_argument("--prefer", action="append",
                   help="formula preferred for removal (repeatable; default: the assumables)")
    p.set_defaults(func=cmd_revise)

    p = sub.add_parser("bench", help="global vs local diagnosis on the same input")
    common(p, local=True)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("check", help="random agreement check against brute force")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_check)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"kerneldiag: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
