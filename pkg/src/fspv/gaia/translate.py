"""Translation of liveness expressions into FSP process definitions.

The construction is continuation passing. ``_first(expr, K)`` returns the
initial branches of ``expr`` followed by ``K``, as a list of action-prefix
branches plus a list of *included* loop locals whose own branches belong to
the same choice. Includes are closed over before printing, so no silent
actions are ever needed.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

from fspv.errors import InterleaveNotTopLevel
from fspv.fsp.ast import (ActionPrefix, Choice as FspChoice, CompositeDef, CompParallel,
                          CompRef, LocalDef, LocalRef, ProcessDef, Stop)
from fspv.fsp.printer import format_comp, format_local_body, format_process
from fspv.gaia.schema import (Atom, Choice, GaiaRoleSchema, Interleave, Omega, Optional, Plus,
                              Seq, Star, inline_definitions)

log = logging.getLogger(__name__)


class _Terminal:
    def __repr__(self):
        return "TERMINAL"


TERMINAL = _Terminal()
STOP_ACTION = "stop"


def _is_terminal(k) -> bool:
    return k is TERMINAL or isinstance(k, Stop)


def _dedup(items):
    out = []
    for item in items:
        if item not in out:
            out.append(item)
    return out


@dataclass
class Fragment:
    """A translated process: ``locals[0]`` is the entry, named ``name``."""
    name: str
    locals: tuple
    warnings: list = field(default_factory=list)

    def process(self) -> ProcessDef:
        return ProcessDef(self.name, (), self.locals)

    def to_fsp(self) -> str:
        return format_process(self.process())


class _Translator:
    def __init__(self, name: str):
        self.name = name
        self.counter = 0
        self.order: list[str] = []
        self.bodies: dict[str, tuple[list, list]] = {}
        self.warnings: list[str] = []

    def fresh(self) -> str:
        self.counter += 1
        local = f"{self.name}_L{self.counter}"
        self.order.append(local)
        return local

    def k_branches(self, k, star):
        if _is_terminal(k):
            return ([ActionPrefix((STOP_ACTION,), Stop())] if star else []), []
        if isinstance(k, LocalRef):
            return [], [k.name]
        if isinstance(k, FspChoice):
            return list(k.branches), []
        return [k], []

    def first(self, expr, k):
        if isinstance(expr, Atom):
            return [ActionPrefix((expr.name,), Stop() if _is_terminal(k) else k)], []
        if isinstance(expr, Seq):
            return self.first(expr.left, self.as_body(expr.right, k))
        if isinstance(expr, Choice):
            b1, i1 = self.first(expr.left, k)
            b2, i2 = self.first(expr.right, k)
            return b1 + b2, i1 + i2
        if isinstance(expr, Optional):
            b1, i1 = self.first(expr.inner, k)
            b2, i2 = self.k_branches(k, star=False)
            return b1 + b2, i1 + i2
        if isinstance(expr, Star):
            loop = self.fresh()
            kb, ki = self.k_branches(k, star=True)
            xb, xi = self.first(expr.inner, LocalRef(loop))
            self.bodies[loop] = (kb + xb, ki + xi)
            return [], [loop]
        if isinstance(expr, Plus):
            loop = self.fresh()
            b1, i1 = self.first(expr.inner, k)
            b2, i2 = self.first(expr.inner, LocalRef(loop))
            self.bodies[loop] = (b1 + b2, i1 + i2)
            return [], [loop]
        if isinstance(expr, Omega):
            if not _is_terminal(k):
                msg = f"{self.name}: continuation after an ^w loop is unreachable"
                self.warnings.append(msg)
                log.warning(msg)
            loop = self.fresh()
            self.bodies[loop] = self.first(expr.inner, LocalRef(loop))
            return [], [loop]
        if isinstance(expr, Interleave):
            raise InterleaveNotTopLevel(f"{self.name}: '||' below the top of a definition")
        raise TypeError(f"not a liveness expression: {expr!r}")

    def as_body(self, expr, k):
        branches, includes = self.first(expr, k)
        if not includes:
            return branches[0] if len(branches) == 1 else FspChoice(tuple(_dedup(branches)))
        if not branches and len(includes) == 1:
            return LocalRef(includes[0])
        local = self.fresh()
        self.bodies[local] = (branches, includes)
        return LocalRef(local)

    def closure(self, branches, includes):
        out, seen, stack = list(branches), set(), list(reversed(includes))
        while stack:
            local = stack.pop()
            if local in seen:
                continue
            seen.add(local)
            b, i = self.bodies[local]
            out.extend(b)
            stack.extend(reversed(i))
        out = _dedup(out)
        return out[0] if len(out) == 1 else FspChoice(tuple(out))


def _rename(body, old, new):
    if isinstance(body, LocalRef):
        return LocalRef(new) if body.name == old else body
    if isinstance(body, ActionPrefix):
        return ActionPrefix(body.action, _rename(body.continuation, old, new))
    if isinstance(body, FspChoice):
        return FspChoice(tuple(_rename(b, old, new) for b in body.branches))
    return body


def _refs(body):
    if isinstance(body, LocalRef):
        yield body.name
    elif isinstance(body, ActionPrefix):
        yield from _refs(body.continuation)
    elif isinstance(body, FspChoice):
        for b in body.branches:
            yield from _refs(b)


def translate_expr(expr, continuation=TERMINAL, name: str = "X_L") -> Fragment:
    """Translate an inlined liveness expression into a process named ``name``.

    ``continuation`` is ``TERMINAL`` or an FSP body to run once ``expr`` ends.
    Loop locals are named ``<name>_L<k>`` in generation order; when the
    expression is a single loop, the loop itself becomes the entry.
    """
    tr = _Translator(name)
    branches, includes = tr.first(expr, continuation)
    bodies = {local: tr.closure(*tr.bodies[local]) for local in tr.order}
    if not branches and len(includes) == 1:
        loop = includes[0]
        entry = _rename(bodies.pop(loop), loop, name)
        bodies = {k: _rename(v, loop, name) for k, v in bodies.items()}
        order = [local for local in tr.order if local != loop]
    else:
        entry = tr.closure(branches, includes)
        order = tr.order
    # keep only locals reachable from the entry, in generation order
    live, stack = set(), list(_refs(entry))
    while stack:
        local = stack.pop()
        if local in live or local == name:
            continue
        live.add(local)
        stack.extend(_refs(bodies[local]))
    locals_ = [LocalDef(name, (), entry)]
    locals_ += [LocalDef(local, (), bodies[local]) for local in order if local in live]
    return Fragment(name, tuple(locals_), tr.warnings)


def _interleave_parts(expr):
    if isinstance(expr, Interleave):
        return _interleave_parts(expr.left) + _interleave_parts(expr.right)
    return [expr]


def _comment(text: str) -> str:
    return " ".join(text.split())


def _format_fragment(fragment: Fragment) -> str:
    chunks = [f"{loc.name} = {format_local_body(loc.body)}" for loc in fragment.locals]
    return ",\n".join(chunks) + "."


def translate_role(schema: GaiaRoleSchema) -> str:
    """FSP text for a role: comment header, then the process (or composite for ``||``)."""
    inlined = inline_definitions(schema)
    entry_name, expr = inlined.entry
    role = schema.name.upper()
    lines = [f"// role {schema.name}" + (f": {_comment(schema.description)}"
                                         if schema.description else "")]
    lines.append(f"// liveness entry: {entry_name}")
    if schema.activities:
        lines.append("// activities: " + ", ".join(schema.activities))
    for proto in schema.protocols:
        detail = [f"initiator {proto.initiator}" if proto.initiator else "",
                  f"responder {proto.responder}" if proto.responder else "",
                  f"inputs {', '.join(proto.inputs)}" if proto.inputs else ""]
        detail = "; ".join(d for d in detail if d)
        lines.append(f"// protocol {proto.name}" + (f": {detail}" if detail else ""))
    for perm in schema.permissions:
        lines.append(f"// permission: {perm.verb} {perm.scope} {perm.resource}")
    for annotation in schema.safety:
        lines.append(f"// safety: {_comment(annotation)}")
    parts = _interleave_parts(expr)
    if len(parts) == 1:
        lines.append(_format_fragment(translate_expr(expr, TERMINAL, role)))
    else:
        names = []
        for i, part in enumerate(parts, 1):
            names.append(f"{role}_P{i}")
            lines.append(_format_fragment(translate_expr(part, TERMINAL, names[-1])))
        comp = CompositeDef(role, CompParallel(tuple(CompRef(n) for n in names)))
        lines.append(f"||{role} = {format_comp(comp.expr, top=True)}.")
    return "\n".join(lines) + "\n"
