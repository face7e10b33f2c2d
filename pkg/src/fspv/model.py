"""Value types shared across the toolchain: action labels, LTSs, traces."""
from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional

ERROR = -1

_SEGMENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*|-?[0-9]+")


def is_valid_label(text: str) -> bool:
    if not isinstance(text, str) or not text:
        return False
    return all(_SEGMENT.fullmatch(seg) for seg in text.split("."))


def canonical_alphabet(labels: Iterable[str]) -> tuple[str, ...]:
    return tuple(sorted(set(labels)))


@dataclass(frozen=True)
class Lts:
    """Explicit labelled transition system.

    States are ``0 .. state_count-1``; ``0`` is initial. ``ERROR`` (-1) is not
    counted in ``state_count`` and never has outgoing transitions. The alphabet
    and the transition tuple are kept in canonical (sorted) order so that equal
    systems compare and serialize identically.
    """

    state_count: int
    alphabet: tuple[str, ...]
    transitions: tuple[tuple[int, str, int], ...]
    has_error: bool = False
    is_property: bool = False
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "alphabet", canonical_alphabet(self.alphabet))
        object.__setattr__(self, "transitions", tuple(sorted(set(self.transitions))))

    initial = 0

    @cached_property
    def successors(self) -> dict[int, tuple[tuple[str, int], ...]]:
        """Outgoing ``(label, target)`` pairs per source state, sorted."""
        out = defaultdict(list)
        for src, label, dst in self.transitions:
            out[src].append((label, dst))
        return {s: tuple(v) for s, v in out.items()}

    def out(self, state: int) -> tuple[tuple[str, int], ...]:
        return self.successors.get(state, ())

    def states(self) -> range:
        return range(self.state_count)

    @property
    def transition_count(self) -> int:
        return len(self.transitions)

    def is_deterministic(self) -> bool:
        for state, edges in self.successors.items():
            labels = [label for label, _ in edges]
            if len(labels) != len(set(labels)):
                return False
        return True

    def with_name(self, name: str) -> "Lts":
        return Lts(self.state_count, self.alphabet, self.transitions,
                   self.has_error, self.is_property, name)


@dataclass(frozen=True)
class Trace:
    actions: tuple[str, ...] = ()
    # witnessing state sequence, len(actions) + 1 entries when recorded
    states: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "actions", tuple(self.actions))
        if self.states is not None:
            object.__setattr__(self, "states", tuple(self.states))

    def __len__(self):
        return len(self.actions)

    def __iter__(self):
        return iter(self.actions)


@dataclass(frozen=True)
class ProgressProperty:
    name: str
    action_set: frozenset[str]

    def __post_init__(self):
        object.__setattr__(self, "action_set", frozenset(self.action_set))
        if not self.action_set:
            raise ValueError(f"progress property {self.name} has an empty action set")


def validate_lts(lts: Lts) -> list[str]:
    """Return one message per violated structural invariant; empty when well formed."""
    problems = []
    if lts.state_count < 1:
        problems.append(f"state_count must be >= 1, got {lts.state_count}")
    alphabet = set(lts.alphabet)
    for label in sorted(alphabet):
        if not is_valid_label(label):
            problems.append(f"malformed label {label!r}")
    bad_labels = sorted({label for _, label, _ in lts.transitions if label not in alphabet})
    for label in bad_labels:
        problems.append(f"transition label {label!r} is not in the alphabet")
    if any(src == ERROR for src, _, _ in lts.transitions):
        problems.append("ERROR must be absorbing")
    for src, label, dst in lts.transitions:
        if not (-1 <= src < lts.state_count) or not (-1 <= dst < lts.state_count):
            problems.append(f"transition ({src}, {label}, {dst}) references an unknown state")
        elif dst == ERROR and not lts.has_error:
            problems.append(f"transition ({src}, {label}, -1) targets ERROR but has_error is false")
    return problems


def trace_to_text(trace: Trace | Iterable[str]) -> str:
    actions = list(trace)
    if not actions:
        return "<empty>"
    return ", ".join(actions)


def replay(lts: Lts, actions: Iterable[str], start: int = 0) -> set[int]:
    """States reachable from ``start`` by following ``actions``; empty if the trace is not accepted."""
    current = {start}
    for action in actions:
        nxt = set()
        for state in current:
            for label, dst in lts.out(state):
                if label == action:
                    nxt.add(dst)
        current = nxt
        if not current:
            break
    return current


def replay_states(lts: Lts, trace: Trace) -> bool:
    """Check that ``trace.states`` is a genuine run of ``lts`` labelled by ``trace.actions``."""
    if trace.states is None:
        return bool(replay(lts, trace.actions))
    if len(trace.states) != len(trace.actions) + 1 or trace.states[0] != lts.initial:
        return False
    for i, action in enumerate(trace.actions):
        if (action, trace.states[i + 1]) not in lts.out(trace.states[i]):
            return False
    return True
