"""Parallel composition, relabelling and process labelling of LTSs."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence

from fspv.compiler import compile_process, complete_property, default_state_limit
from fspv.errors import ConflictingRelabel, FspError, StateLimitExceeded, UnknownTarget
from fspv.fsp.ast import CompLabeled, CompParallel, CompRef, CompRelabel, CompositeDef
from fspv.fsp.expr import eval_int
from fspv.fsp.resolve import ResolvedSpec
from fspv.model import ERROR, Lts


def apply_prefix(prefix: str, lts: Lts) -> Lts:
    """Label every action of ``lts`` with ``prefix``: ``a`` becomes ``prefix.a``."""
    return Lts(lts.state_count, [f"{prefix}.{a}" for a in lts.alphabet],
               [(s, f"{prefix}.{a}", t) for s, a, t in lts.transitions],
               lts.has_error, lts.is_property, lts.name)


def apply_relabel(lts: Lts, pairs: Sequence[tuple[str, str]]) -> Lts:
    """Rename actions by ``(new, old)`` pairs, all pairs applied simultaneously."""
    mapping = {}
    for new, old in pairs:
        if old in mapping and mapping[old] != new:
            raise ConflictingRelabel(f"{old} is relabelled to both {mapping[old]} and {new}")
        mapping[old] = new
    if not mapping:
        return lts
    return Lts(lts.state_count, [mapping.get(a, a) for a in lts.alphabet],
               [(s, mapping.get(a, a), t) for s, a, t in lts.transitions],
               lts.has_error, lts.is_property, lts.name)


def restrict_alphabet(lts: Lts, labels) -> Lts:
    """Drop every transition, and alphabet entry, whose label is not in ``labels``."""
    keep = set(labels)
    return Lts(lts.state_count, [a for a in lts.alphabet if a in keep],
               [t for t in lts.transitions if t[1] in keep],
               lts.has_error, lts.is_property, lts.name)


@dataclass(frozen=True)
class NormalizedLeaf:
    name: str
    args: tuple = ()
    # ("prefix", text) and ("relabel", pairs) steps, innermost first
    transforms: tuple = ()

    @property
    def prefix(self) -> Optional[str]:
        prefixes = [arg for kind, arg in reversed(self.transforms) if kind == "prefix"]
        return ".".join(prefixes) if prefixes else None


@dataclass(frozen=True)
class NormalizedComposite:
    """Leaves of a composite in source order.

    Nested parallel structure is flattened: the composite denotes the left
    fold of ``compose_pair`` over ``leaves``. Relabel suffixes and labels have
    been pushed onto the leaves and label ranges replicated.
    """
    name: str
    leaves: tuple


def _single_label(spec: ResolvedSpec, parts) -> str:
    labels = spec.expand_label(parts)
    if len(labels) != 1:
        raise FspError("relabelling needs single labels, got a range")
    return labels[0]


def normalize_composite(comp: CompositeDef, spec: ResolvedSpec) -> NormalizedComposite:
    def walk(node, outer, active):
        if isinstance(node, CompRef):
            inner = spec.ast.composite(node.name)
            if inner is not None:
                if node.args:
                    raise FspError(f"composite {node.name} takes no arguments")
                if node.name in active:
                    raise FspError(f"recursive composite {node.name}")
                return walk(inner.expr, outer, active | {node.name})
            if spec.ast.process(node.name) is None:
                raise UnknownTarget(f"unknown process {node.name}")
            args = tuple(eval_int(a, spec.constants) for a in node.args)
            return [NormalizedLeaf(node.name, args, outer)]
        if isinstance(node, CompParallel):
            return [leaf for item in node.items for leaf in walk(item, outer, active)]
        if isinstance(node, CompLabeled):
            leaves = []
            for text in spec.expand_label(node.prefix):
                leaves.extend(walk(node.body, (("prefix", text),) + outer, active))
            return leaves
        if isinstance(node, CompRelabel):
            pairs = tuple((_single_label(spec, new), _single_label(spec, old))
                          for new, old in node.pairs)
            return walk(node.body, (("relabel", pairs),) + outer, active)
        raise TypeError(f"not a composition expression: {node!r}")

    return NormalizedComposite(comp.name, tuple(walk(comp.expr, (), {comp.name})))


def compose_pair(a: Lts, b: Lts, max_states: Optional[int] = None) -> Lts:
    """Synchronised product: shared actions fire jointly, the rest interleave.

    A pair in which either side is ERROR collapses to ERROR. Pair states are
    numbered breadth-first from ``(0, 0)``, successors taken in
    ``(label, left, right)`` order.
    """
    limit = default_state_limit() if max_states is None else max_states
    shared = set(a.alphabet) & set(b.alphabet)
    b_by_label: dict[int, dict[str, list[int]]] = {}

    def b_moves(t, label):
        table = b_by_label.get(t)
        if table is None:
            table = {}
            for lab, dst in b.out(t):
                table.setdefault(lab, []).append(dst)
            b_by_label[t] = table
        return table.get(label, ())

    ids = {(0, 0): 0}
    queue = deque([(0, 0)])
    transitions = []
    expanded = set()
    while queue:
        s, t = pair = queue.popleft()
        src = ids[pair]
        expanded.add(src)
        succ = []
        for label, s2 in a.out(s):
            if label in shared:
                succ.extend((label, s2, t2) for t2 in b_moves(t, label))
            else:
                succ.append((label, s2, t))
        succ.extend((label, s, t2) for label, t2 in b.out(t) if label not in shared)
        for label, s2, t2 in sorted(set(succ)):
            if s2 == ERROR or t2 == ERROR:
                transitions.append((src, label, ERROR))
                continue
            target = (s2, t2)
            tid = ids.get(target)
            if tid is None:
                if len(ids) >= limit:
                    partial = Lts(len(ids), set(a.alphabet) | set(b.alphabet),
                                  transitions, a.has_error or b.has_error)
                    raise StateLimitExceeded(
                        f"state limit {limit} exceeded composing {a.name or '?'} || "
                        f"{b.name or '?'} with {len(queue) + 1} pair(s) on the frontier",
                        limit, frontier=len(queue) + 1, partial=partial)
                tid = ids[target] = len(ids)
                queue.append(target)
            transitions.append((src, label, tid))
    name = f"{a.name}||{b.name}" if a.name and b.name else ""
    return Lts(len(ids), set(a.alphabet) | set(b.alphabet), transitions,
               has_error=a.has_error or b.has_error, name=name)


def build_leaf(spec: ResolvedSpec, leaf: NormalizedLeaf, max_states=None, cache=None) -> Lts:
    key = (leaf.name, leaf.args)
    if cache is not None and key in cache:
        lts = cache[key]
    else:
        lts = compile_process(spec, leaf.name, leaf.args, max_states=max_states)
        if lts.is_property:
            lts = complete_property(lts)
        if cache is not None:
            cache[key] = lts
    for kind, arg in leaf.transforms:
        lts = apply_prefix(arg, lts) if kind == "prefix" else apply_relabel(lts, arg)
    return lts


def compile_composite(spec: ResolvedSpec, name: str, max_states: Optional[int] = None) -> Lts:
    """Normalise, compile each leaf, then fold ``compose_pair`` left to right.

    Property leaves composed alongside ordinary processes act as observers:
    they are restricted to the actions the ordinary processes can perform,
    so a property never drives the system into ERROR on its own.
    """
    comp = spec.ast.composite(name)
    if comp is None:
        raise UnknownTarget(f"unknown composite {name}")
    norm = normalize_composite(comp, spec)
    cache: dict = {}
    built = [build_leaf(spec, leaf, max_states, cache) for leaf in norm.leaves]
    system = [lts for lts in built if not lts.is_property]
    if system and len(system) < len(built):
        observed = set().union(*(lts.alphabet for lts in system))
        built = [restrict_alphabet(lts, observed) if lts.is_property else lts for lts in built]
    result = None
    for lts in built:
        result = lts if result is None else compose_pair(result, lts, max_states)
    return result.with_name(name)


def compile_target(spec: ResolvedSpec, name: str, args: Optional[Sequence[int]] = None,
                   max_states: Optional[int] = None) -> Lts:
    """Compile a process or composite by name; property processes come back completed."""
    if spec.ast.composite(name) is not None:
        if args:
            raise FspError(f"composite {name} takes no arguments")
        return compile_composite(spec, name, max_states)
    if spec.ast.process(name) is not None:
        lts = compile_process(spec, name, args, max_states=max_states)
        return complete_property(lts) if lts.is_property else lts
    raise UnknownTarget(f"unknown target {name}")
