"""Reachability analysis: safety, deadlock, terminal sets and progress."""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Iterable, Optional

from fspv.model import ERROR, Lts, ProgressProperty, Trace

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class TerminalSet:
    states: tuple[int, ...]
    actions: tuple[str, ...]


@dataclass(frozen=True)
class Deadlock:
    trace: Trace
    state: int


@dataclass(frozen=True)
class ProgressResult:
    name: str
    violations: tuple[TerminalSet, ...]
    unknown_actions: tuple[str, ...] = ()

    @property
    def violated(self) -> bool:
        return bool(self.violations)


@dataclass(frozen=True)
class CheckOptions:
    safety: bool = True
    deadlock: bool = True
    progress: tuple[ProgressProperty, ...] = ()


@dataclass
class AnalysisReport:
    target: str
    state_count: int
    transition_count: int
    safety_checked: bool = False
    safety_violation: Optional[Trace] = None
    deadlocks: Optional[list[Deadlock]] = None
    terminal_sets: Optional[list[TerminalSet]] = None
    progress: Optional[list[ProgressResult]] = None
    elapsed: float = 0.0
    caps_hit: bool = False
    warnings: list[str] = field(default_factory=list)

    @property
    def progress_violations(self) -> list[tuple[str, TerminalSet]]:
        return [(r.name, ts) for r in self.progress or () for ts in r.violations]

    @property
    def has_findings(self) -> bool:
        return (self.safety_violation is not None or bool(self.deadlocks)
                or bool(self.progress_violations))


class ShortestPaths:
    """Breadth-first tree of lexicographically least shortest traces.

    Each discovered state (ERROR included) keeps a parent pointer. Among
    traces of equal length the one whose label sequence is least in string
    order wins; ties between equal sequences (nondeterminism) fall to the
    lower state number. ERROR is discovered but never expanded.
    """

    def __init__(self, lts: Lts):
        self.parent: dict[int, Optional[tuple[int, str]]] = {0: None}
        self.order: list[int] = [0]
        rank = {0: 0}
        level = [0]
        while level:
            best: dict[int, tuple[tuple[int, str], int]] = {}
            for s in level:
                for label, t in lts.out(s):
                    if t in self.parent:
                        continue
                    key = (rank[s], label)
                    if t not in best or (key, s) < best[t]:
                        best[t] = (key, s)
            found = sorted(best, key=lambda t: (best[t], t))
            level, prev_key, r = [], None, -1
            for t in found:
                key, s = best[t]
                if key != prev_key:
                    r, prev_key = r + 1, key
                rank[t] = r
                self.parent[t] = (s, key[1])
                self.order.append(t)
                if t != ERROR:
                    level.append(t)

    def reached(self, state: int) -> bool:
        return state in self.parent

    def trace_to(self, state: int) -> Trace:
        actions, states = [], [state]
        while self.parent[state] is not None:
            state, label = self.parent[state]
            actions.append(label)
            states.append(state)
        return Trace(tuple(reversed(actions)), tuple(reversed(states)))

    def reachable(self) -> list[int]:
        return sorted(s for s in self.parent if s != ERROR)


def check_safety(lts: Lts, paths: Optional[ShortestPaths] = None) -> Optional[Trace]:
    """Shortest (then lexicographically least) trace to ERROR, or None when ERROR is unreachable."""
    if not lts.has_error:
        return None
    paths = paths or ShortestPaths(lts)
    return paths.trace_to(ERROR) if paths.reached(ERROR) else None


def check_deadlock(lts: Lts, paths: Optional[ShortestPaths] = None) -> list[Deadlock]:
    """One entry per reachable state without successors, ERROR excluded, in discovery order."""
    paths = paths or ShortestPaths(lts)
    return [Deadlock(paths.trace_to(s), s) for s in paths.order
            if s != ERROR and not lts.out(s)]


def _tarjan(nodes: Iterable[int], succ) -> list[list[int]]:
    index, low, on_stack = {}, {}, set()
    stack, comps = [], []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(succ(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ(w))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                comps.append(comp)
    return comps


def terminal_sets(lts: Lts, paths: Optional[ShortestPaths] = None) -> list[TerminalSet]:
    """Strongly connected components of the reachable graph that no transition leaves.

    ERROR never forms a terminal set; an edge into ERROR counts as leaving.
    Sorted by least member state.
    """
    paths = paths or ShortestPaths(lts)
    reachable = paths.reachable()

    def succ(s):
        return [t for _, t in lts.out(s) if t != ERROR]

    result = []
    for comp in _tarjan(reachable, succ):
        members = set(comp)
        closed = all(t in members for s in comp for _, t in lts.out(s))
        if not closed:
            continue
        actions = sorted({label for s in comp for label, _ in lts.out(s)})
        result.append(TerminalSet(tuple(sorted(comp)), tuple(actions)))
    return sorted(result, key=lambda ts: ts.states[0])


def check_progress(lts: Lts, prop: ProgressProperty,
                   terminal: Optional[list[TerminalSet]] = None) -> list[TerminalSet]:
    """Terminal sets in which none of ``prop``'s actions occur; empty means the property holds."""
    unknown = sorted(prop.action_set - set(lts.alphabet))
    if unknown:
        log.warning("progress %s mentions actions outside the alphabet: %s",
                    prop.name, ", ".join(unknown))
    terminal = terminal_sets(lts) if terminal is None else terminal
    return [ts for ts in terminal if prop.action_set.isdisjoint(ts.actions)]


def analyze(lts: Lts, options: Optional[CheckOptions] = None, *, target: Optional[str] = None,
            caps_hit: bool = False) -> AnalysisReport:
    options = CheckOptions() if options is None else options
    started = time.perf_counter()
    paths = ShortestPaths(lts)
    report = AnalysisReport(target or lts.name, lts.state_count, lts.transition_count,
                            caps_hit=caps_hit)
    if caps_hit:
        report.warnings.append("state limit reached: results cover a partial state space "
                               "and are not exhaustive")
    if options.safety:
        report.safety_checked = True
        report.safety_violation = check_safety(lts, paths)
    if options.deadlock:
        report.deadlocks = check_deadlock(lts, paths)
    if options.progress:
        report.terminal_sets = terminal_sets(lts, paths)
        report.progress = []
        for prop in options.progress:
            unknown = tuple(sorted(prop.action_set - set(lts.alphabet)))
            for action in unknown:
                report.warnings.append(f"progress {prop.name}: unknown action {action}")
            violations = check_progress(lts, prop, report.terminal_sets)
            report.progress.append(ProgressResult(prop.name, tuple(violations), unknown))
    report.elapsed = time.perf_counter() - started
    return report
