"""Breadth-first expansion of a process definition into an explicit LTS."""
from __future__ import annotations

import os
from collections import deque
from typing import Optional, Sequence

from fspv.errors import FspError, IndexOutOfRange, StateLimitExceeded, UnboundLocal, UnknownTarget
from fspv.fsp.ast import ActionPrefix, Choice, Guarded, LocalRef, RangeSpec, Stop
from fspv.fsp.expr import eval_expr, eval_int
from fspv.fsp.resolve import ResolvedSpec
from fspv.model import Lts

DEFAULT_STATE_LIMIT = 1_000_000
_STOP = ("STOP",)


def default_state_limit() -> int:
    value = os.environ.get("FSPV_MAX_STATES")
    return int(value) if value else DEFAULT_STATE_LIMIT


def flatten_label(base_segments: Sequence[str], index_values: Sequence[int]) -> str:
    """``("full.moveto", [2])`` -> ``"full.moveto.2"``."""
    segments = [s for seg in base_segments for s in str(seg).split(".")]
    return ".".join(segments + [str(int(v)) for v in index_values])


def label_text(parts, env) -> str:
    segments = []
    for part in parts:
        if isinstance(part, str):
            segments.append(part)
        elif isinstance(part, RangeSpec):
            raise FspError("a label range is not allowed in an action prefix")
        else:
            segments.append(str(eval_int(part, env)))
    return ".".join(segments)


class _Expander:
    def __init__(self, spec: ResolvedSpec, name: str, args, max_states: int):
        proc = spec.ast.process(name)
        if proc is None:
            raise UnknownTarget(f"unknown process {name}")
        self.proc = proc
        self.spec = spec
        self.max_states = max_states

        args = list(args or ())
        if len(args) > len(proc.parameters):
            raise FspError(f"{name} takes {len(proc.parameters)} argument(s), got {len(args)}")
        self.base_env = dict(spec.constants)
        params = {}
        for i, (pname, default) in enumerate(proc.parameters):
            params[pname] = int(args[i]) if i < len(args) else eval_int(default, spec.constants)
        self.base_env.update(params)

        self.locals = {loc.name: loc for loc in proc.locals}
        self.bounds = {}
        for loc in proc.locals:
            self.bounds[loc.name] = [spec.range_values(b.range, params) for b in loc.indices]

    def env_for(self, local: str, idx: tuple) -> dict:
        env = dict(self.base_env)
        for binding, value in zip(self.locals[local].indices, idx):
            env[binding.var] = value
        return env

    def resolve(self, local, idx, node, env):
        """Follow STOP and local references to the state key a continuation denotes."""
        seen = set()
        while True:
            if isinstance(node, Stop):
                return _STOP, None, None
            if not isinstance(node, LocalRef):
                return (local, idx, id(node)), node, env
            target = self.locals.get(node.name)
            if target is None:
                raise UnboundLocal(f"undefined local process {node.name} in {self.proc.name}")
            values = tuple(eval_int(a, env) for a in node.args)
            if len(values) != len(target.indices):
                raise FspError(f"{node.name} expects {len(target.indices)} index argument(s)")
            for value, (lo, hi), binding in zip(values, self.bounds[node.name], target.indices):
                if not lo <= value <= hi:
                    raise IndexOutOfRange(
                        f"{node.name}[{value}] is outside {binding.var} in {lo}..{hi}")
            if (node.name, values) in seen:
                raise FspError(f"unguarded recursion through {node.name} in {self.proc.name}")
            seen.add((node.name, values))
            local, idx = node.name, values
            node = target.body
            env = self.env_for(local, idx)

    def branches(self, node, env):
        if isinstance(node, Choice):
            for b in node.branches:
                yield from self.branches(b, env)
        elif isinstance(node, Guarded):
            if eval_expr(node.guard, env):
                yield from self.branches(node.branch, env)
        elif isinstance(node, ActionPrefix):
            yield label_text(node.action, env), node.continuation
        # Stop and LocalRef never reach here; a Choice with no enabled branch is a sink

    def run(self) -> Lts:
        entry = self.proc.locals[0]
        idx = tuple(lo for lo, _ in self.bounds[entry.name])
        start = self.resolve(entry.name, idx, entry.body, self.env_for(entry.name, idx))

        ids = {start[0]: 0}
        payload = {0: start}
        queue = deque([0])
        transitions = []
        expanded = set()
        while queue:
            sid = queue.popleft()
            key, node, env = payload.pop(sid)
            expanded.add(sid)
            if key == _STOP:
                continue
            local, idx, _ = key
            for label, cont in self.branches(node, env):
                tkey, tnode, tenv = self.resolve(local, idx, cont, env)
                tid = ids.get(tkey)
                if tid is None:
                    if len(ids) >= self.max_states:
                        partial = Lts(len(ids), {l for s, l, _ in transitions},
                                      [t for t in transitions if t[0] in expanded],
                                      is_property=self.proc.is_property, name=self.proc.name)
                        raise StateLimitExceeded(
                            f"state limit {self.max_states} exceeded compiling {self.proc.name} "
                            f"with {len(queue) + 1} configuration(s) still on the frontier",
                            self.max_states, frontier=len(queue) + 1, partial=partial)
                    tid = len(ids)
                    ids[tkey] = tid
                    payload[tid] = (tkey, tnode, tenv)
                    queue.append(tid)
                transitions.append((sid, label, tid))
        alphabet = {label for _, label, _ in transitions}
        return Lts(len(ids), alphabet, transitions, has_error=False,
                   is_property=self.proc.is_property, name=self.proc.name)


def compile_process(spec: ResolvedSpec, name: str, args: Optional[Sequence[int]] = None,
                    max_states: Optional[int] = None) -> Lts:
    """Expand process ``name`` into an LTS over its reachable configurations.

    A configuration is a local process, the values of its index variables and
    a position inside its body; each distinct configuration is one state, and
    every syntactic STOP maps to a single shared sink. States are numbered in
    breadth-first discovery order, exploring choice branches in declaration
    order, so repeated compilations are identical.
    """
    limit = default_state_limit() if max_states is None else max_states
    return _Expander(spec, name, args, limit).run()
