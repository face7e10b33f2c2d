"""Safety-automaton completion and subset construction."""
from __future__ import annotations

from collections import deque
from typing import Optional

from fspv.errors import FspError, NondeterministicProperty, StateLimitExceeded
from fspv.model import ERROR, Lts
from fspv.compiler.expand import default_state_limit


def complete_property(lts: Lts) -> Lts:
    """Send every alphabet action a state does not accept to ERROR.

    The result accepts exactly the traces of ``lts`` and is input-complete
    over its alphabet: each (state, action) pair has one outgoing transition.
    """
    if not lts.is_property:
        raise FspError(f"{lts.name or 'LTS'} is not a property")
    added = []
    for state in lts.states():
        seen = set()
        for label, _ in lts.out(state):
            if label in seen:
                raise NondeterministicProperty(
                    f"property {lts.name} is nondeterministic: state {state} has two "
                    f"transitions on {label}")
            seen.add(label)
        added.extend((state, label, ERROR) for label in lts.alphabet if label not in seen)
    return Lts(lts.state_count, lts.alphabet, lts.transitions + tuple(added),
               has_error=True, is_property=True, name=lts.name)


def determinize(lts: Lts, max_states: Optional[int] = None) -> Lts:
    """Subset construction; the result is deterministic and trace-equivalent to ``lts``."""
    if lts.has_error:
        raise FspError("determinize expects an LTS without an ERROR state")
    limit = default_state_limit() if max_states is None else max_states
    start = frozenset({0})
    ids = {start: 0}
    queue = deque([start])
    transitions = []
    while queue:
        subset = queue.popleft()
        moves: dict[str, set] = {}
        for state in sorted(subset):
            for label, dst in lts.out(state):
                moves.setdefault(label, set()).add(dst)
        for label in sorted(moves):
            target = frozenset(moves[label])
            if target not in ids:
                if len(ids) >= limit:
                    raise StateLimitExceeded(f"determinize exceeded the state limit {limit}",
                                             limit, frontier=len(queue) + 1)
                ids[target] = len(ids)
                queue.append(target)
            transitions.append((ids[subset], label, ids[target]))
    return Lts(len(ids), lts.alphabet, transitions, is_property=lts.is_property, name=lts.name)
