"""Strong-bisimulation minimisation by iterated signature refinement."""
from __future__ import annotations

from collections import deque

from fspv.model import ERROR, Lts


def bisimulation_classes(lts: Lts) -> list[int]:
    """Block number of each state ``0..n-1`` under the coarsest strong bisimulation.

    ERROR is its own class (block -1) and is never merged with a deadlocked
    state even though neither has successors. Blocks are numbered by first
    appearance in state order, so the result is deterministic.
    """
    n = lts.state_count
    block = [0] * n
    count = 1
    while True:
        signatures = {}
        new_block = [0] * n
        for s in range(n):
            moves = frozenset((label, ERROR if dst == ERROR else block[dst])
                              for label, dst in lts.out(s))
            sig = (block[s], moves)
            new_block[s] = signatures.setdefault(sig, len(signatures))
        block = new_block
        if len(signatures) == count:
            return block
        count = len(signatures)


def minimize(lts: Lts) -> Lts:
    """Quotient of ``lts`` under strong bisimulation, restricted to reachable classes.

    States of the quotient are renumbered breadth-first from the initial class.
    """
    block = bisimulation_classes(lts)
    rep = {}
    for s in range(lts.state_count):
        rep.setdefault(block[s], s)
    edges = {}
    for b, s in rep.items():
        edges[b] = sorted({(label, ERROR if dst == ERROR else block[dst])
                           for label, dst in lts.out(s)})
    ids = {block[0]: 0}
    queue = deque([block[0]])
    transitions = []
    while queue:
        b = queue.popleft()
        for label, target in edges[b]:
            if target == ERROR:
                transitions.append((ids[b], label, ERROR))
                continue
            if target not in ids:
                ids[target] = len(ids)
                queue.append(target)
            transitions.append((ids[b], label, ids[target]))
    return Lts(len(ids), lts.alphabet, transitions, has_error=lts.has_error,
               is_property=lts.is_property, name=lts.name)
