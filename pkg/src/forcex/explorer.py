"""Path exploration over one sample and the code it generates at run time.

A sample starts as a single root unit.  Each unit is executed repeatedly
under switch sequences drawn from a worklist: the empty sequence first,
then every sequence obtained by extending an already-run prefix with the
flip of a predicate that prefix observed naturally.  Code strings the
engine captures (eval bodies, timer strings, document.write output,
string arguments to faked functions) become new units and join a source
queue, deduplicated by content hash.  Coverage is tracked per unit name
and a direction is never scheduled twice.
"""

from __future__ import annotations

import hashlib
import time
from collections import deque
from dataclasses import dataclass, field

from . import jsast as ast
from .interpreter import Budgets, ExecutionOutcome, execute
from .lexer import LexError
from .parser import JsSyntaxError, parse

ROOT_UNIT = "root"


@dataclass
class QueuedUnit:
    """A unit of code waiting to be explored."""

    name: str
    text: str
    kind: str  # "root", "eval", "timer_string", "document_write", "faked_call_arg"


@dataclass
class RunRecord:
    """One execution of a unit under a particular switch sequence."""

    switches: tuple
    outcome: ExecutionOutcome
    index: int  # position in the global run order, 0-based


@dataclass
class UnitResult:
    name: str
    kind: str
    text: str
    runs: list = field(default_factory=list)
    parse_error: str | None = None
    static_anchors: tuple = ()


@dataclass
class ExplorationResult:
    units: list = field(default_factory=list)
    coverage: dict = field(default_factory=dict)  # unit name -> {anchor: set of bools}
    events: list = field(default_factory=list)  # (unit name, run index, DetectionEvent)
    total_runs: int = 0
    wall_time_s: float = 0.0
    exhausted: bool = True
    error: str | None = None

    def unit(self, name: str) -> UnitResult | None:
        for u in self.units:
            if u.name == name:
                return u
        return None

    def outcomes(self):
        for u in self.units:
            for run in u.runs:
                yield u, run


class SourceQueue:
    """FIFO of pending units, deduplicated by source text hash."""

    def __init__(self):
        self.items = deque()
        self.seen_hashes = set()

    def push(self, unit: QueuedUnit) -> bool:
        digest = hashlib.sha256(unit.text.encode("utf-8", "replace")).hexdigest()
        if digest in self.seen_hashes:
            return False
        self.seen_hashes.add(digest)
        self.items.append(unit)
        return True

    def pop(self) -> QueuedUnit:
        return self.items.popleft()

    def __bool__(self):
        return bool(self.items)

    def __len__(self):
        return len(self.items)


def schedule_unit(queue: SourceQueue, unit: QueuedUnit) -> bool:
    """Add a unit to the queue unless identical text was already scheduled."""
    return queue.push(unit)


def covered(coverage: dict, anchor, direction: bool) -> bool:
    """Has this direction of the predicate been executed in any prior run?"""
    return direction in coverage.get(anchor, ())


def mark_covered(coverage: dict, anchor, direction: bool) -> None:
    coverage.setdefault(anchor, set()).add(direction)


def static_branch_anchors(program: ast.Program) -> tuple:
    """Anchors of every flippable branch point in the unit, in source order."""
    found = []

    def walk(node):
        if isinstance(node, list):
            for item in node:
                walk(item)
            return
        if not isinstance(node, ast.Node):
            return
        if node.branch_point:
            found.append(node.anchor)
        for f in node.__dataclass_fields__:
            if f == "anchor":
                continue
            walk(getattr(node, f))

    walk(program)
    return tuple(found)


def _syntax_error_outcome() -> ExecutionOutcome:
    return ExecutionOutcome(
        preds=[], new_js=[], events=[], recoveries=[],
        terminated_by="syntax_error_in_dynamic_unit",
        fired_switches=set(), prefix_mismatch=False,
        indexed_writes={}, callbacks_invoked=0,
    )


def explore(source: str, budgets: Budgets | None = None,
            root_name: str = ROOT_UNIT) -> ExplorationResult:
    """Explore a sample to completion or until the sample timeout.

    Returns partial results with exhausted=False when the timeout cuts
    the worklist short.  A root unit that fails to parse aborts the
    analysis; dynamic units that fail to parse are recorded with a
    syntax-error outcome and exploration continues.
    """
    return explore_units([(root_name, source)], budgets)


def explore_units(roots, budgets: Budgets | None = None) -> ExplorationResult:
    """Explore several root units (one page's script blocks) together.

    They share the source queue, run budget, and coverage map, the way
    script blocks share one page load.  With a single root a parse
    failure aborts the analysis; with several, the broken block is
    recorded and the rest still run, as a browser would.
    """
    budgets = budgets or Budgets()
    started = time.monotonic()
    deadline = started + budgets.sample_timeout_s

    result = ExplorationResult()
    queue = SourceQueue()
    sole_root = len(roots) == 1
    for name, text in roots:
        schedule_unit(queue, QueuedUnit(name, text, "root"))

    run_index = 0
    while queue:
        unit = queue.pop()
        ur = UnitResult(unit.name, unit.kind, unit.text)
        result.units.append(ur)
        unit_cov = result.coverage.setdefault(unit.name, {})

        try:
            program = parse(unit.text, unit.name)
        except (LexError, JsSyntaxError) as exc:
            if unit.kind == "root" and sole_root:
                result.error = f"syntax error in root unit: {exc}"
                result.wall_time_s = time.monotonic() - started
                ur.parse_error = str(exc)
                return result
            ur.parse_error = str(exc)
            ur.runs.append(RunRecord((), _syntax_error_outcome(), run_index))
            run_index += 1
            result.total_runs += 1
            continue
        ur.static_anchors = static_branch_anchors(program)

        worklist = deque([()])
        seen_sequences = {()}
        while worklist:
            if time.monotonic() >= deadline:
                result.exhausted = False
                break
            switches = worklist.popleft()
            outcome = execute(program, switches=switches, budgets=budgets,
                              deadline=deadline)
            ur.runs.append(RunRecord(switches, outcome, run_index))
            result.total_runs += 1
            for ev in outcome.events:
                result.events.append((unit.name, run_index, ev))
            run_index += 1

            for rec in outcome.preds:
                if not rec.forced:
                    mark_covered(unit_cov, rec.anchor, rec.taken)
            for anchor, direction in switches:
                # a forced direction only counts once the anchor actually fired
                if anchor in outcome.fired_switches:
                    mark_covered(unit_cov, anchor, direction)

            for nc in outcome.new_js:
                schedule_unit(queue, QueuedUnit(nc.name, nc.text, nc.kind))

            if outcome.terminated_by == "global_timeout":
                result.exhausted = False
                break

            forced_anchors = {a for a, _ in switches}
            for rec in outcome.preds[len(switches):]:
                if rec.forced or rec.anchor in forced_anchors:
                    continue
                flip = not rec.taken
                if covered(unit_cov, rec.anchor, flip):
                    continue
                candidate = switches + ((rec.anchor, flip),)
                if candidate in seen_sequences:
                    continue
                seen_sequences.add(candidate)
                worklist.append(candidate)
        if not result.exhausted:
            break

    result.wall_time_s = time.monotonic() - started
    return result


def coverage_ratio(result: ExplorationResult) -> float:
    """Covered branch directions over the static total, across all units."""
    total = 0
    got = 0
    for ur in result.units:
        anchors = set(ur.static_anchors)
        total += 2 * len(anchors)
        cov = result.coverage.get(ur.name, {})
        for anchor in anchors:
            got += len(cov.get(anchor, ()))
    if total == 0:
        return 1.0
    return got / total
