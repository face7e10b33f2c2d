"""Constant/range evaluation and name-resolution checks over a parsed spec."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from fspv.errors import EmptyRange, FspError, UnknownName
from fspv.fsp.ast import (ActionPrefix, Choice, CompLabeled, CompParallel, CompRef,
                          CompRelabel, Guarded, LocalRef, Name, RangeSpec, SpecAst, Stop)
from fspv.fsp.expr import eval_int, free_names
from fspv.model import ProgressProperty


@dataclass(frozen=True)
class ResolvedSpec:
    ast: SpecAst
    constants: dict = field(default_factory=dict)
    ranges: dict = field(default_factory=dict)  # name -> (lo, hi)

    def range_values(self, spec: RangeSpec, env=None) -> tuple[int, int]:
        if spec.range_name is not None:
            if spec.range_name not in self.ranges:
                raise UnknownName(f"unknown range {spec.range_name}")
            return self.ranges[spec.range_name]
        scope = dict(self.constants)
        scope.update(env or {})
        lo, hi = eval_int(spec.lo, scope), eval_int(spec.hi, scope)
        if lo > hi:
            raise EmptyRange(f"empty range {lo}..{hi}")
        return lo, hi

    def expand_label(self, parts, env=None) -> list[str]:
        """Flatten a label pattern, expanding bracketed ranges and range names.

        Each bracketed expression contributes one segment; a range contributes
        one label per value, so ``readSign[1..3]`` gives three labels.
        """
        scope = dict(self.constants)
        scope.update(env or {})
        choices = []
        for part in parts:
            if isinstance(part, str):
                choices.append([part])
            elif isinstance(part, RangeSpec):
                lo, hi = self.range_values(part, env)
                choices.append([str(v) for v in range(lo, hi + 1)])
            elif isinstance(part, Name) and part.name in self.ranges and part.name not in scope:
                lo, hi = self.ranges[part.name]
                choices.append([str(v) for v in range(lo, hi + 1)])
            else:
                choices.append([str(eval_int(part, scope))])
        return [".".join(combo) for combo in itertools.product(*choices)]

    def progress_property(self, name: str) -> ProgressProperty:
        decl = self.ast.progress(name)
        if decl is None:
            raise UnknownName(f"unknown progress property {name}")
        actions = {label for parts in decl.actions for label in self.expand_label(parts)}
        return ProgressProperty(name, frozenset(actions))


def _check_names(expr, scope, where):
    missing = sorted(free_names(expr) - scope)
    if missing:
        raise UnknownName(f"unknown name {missing[0]} in {where}")


def _label_exprs(parts):
    for part in parts:
        if isinstance(part, RangeSpec):
            if part.range_name is None:
                yield part.lo
                yield part.hi
        elif not isinstance(part, str):
            yield part


def _walk_body(body):
    yield body
    if isinstance(body, Choice):
        for b in body.branches:
            yield from _walk_body(b)
    elif isinstance(body, Guarded):
        yield from _walk_body(body.branch)
    elif isinstance(body, ActionPrefix):
        yield from _walk_body(body.continuation)


def resolve_constants(ast: SpecAst) -> ResolvedSpec:
    """Evaluate constants and ranges and check that every referenced name exists."""
    constants: dict[str, int] = {}
    for name, value in ast.constants:
        _check_names(value, set(constants), f"const {name}")
        constants[name] = eval_int(value, constants)
    ranges: dict[str, tuple[int, int]] = {}
    for name, lo_e, hi_e in ast.ranges:
        _check_names(lo_e, set(constants), f"range {name}")
        _check_names(hi_e, set(constants), f"range {name}")
        lo, hi = eval_int(lo_e, constants), eval_int(hi_e, constants)
        if lo > hi:
            raise EmptyRange(f"range {name} = {lo}..{hi} is empty")
        ranges[name] = (lo, hi)
    resolved = ResolvedSpec(ast, constants, ranges)

    for proc in ast.processes:
        params = {}
        for pname, default in proc.parameters:
            _check_names(default, set(constants), f"parameter {pname} of {proc.name}")
            params[pname] = eval_int(default, constants)
        outer = set(constants) | set(params)
        local_arity = {loc.name: len(loc.indices) for loc in proc.locals}
        for loc in proc.locals:
            where = f"{proc.name}.{loc.name}" if loc.name != proc.name else proc.name
            scope = set(outer)
            for binding in loc.indices:
                if binding.range.range_name is None:
                    _check_names(binding.range.lo, scope, where)
                    _check_names(binding.range.hi, scope, where)
                    resolved.range_values(binding.range, params)
                elif binding.range.range_name not in ranges:
                    raise UnknownName(f"unknown range {binding.range.range_name} in {where}")
                scope.add(binding.var)
            for node in _walk_body(loc.body):
                if isinstance(node, Guarded):
                    _check_names(node.guard, scope, where)
                elif isinstance(node, ActionPrefix):
                    for e in _label_exprs(node.action):
                        _check_names(e, scope, where)
                elif isinstance(node, LocalRef):
                    if node.name not in local_arity:
                        raise UnknownName(f"unknown local process {node.name} in {where}")
                    if len(node.args) != local_arity[node.name]:
                        raise FspError(f"{node.name} expects {local_arity[node.name]} index "
                                       f"argument(s), got {len(node.args)} in {where}")
                    for e in node.args:
                        _check_names(e, scope, where)
                else:
                    assert isinstance(node, (Stop, Choice))

    targets = {p.name: p for p in ast.processes}
    targets.update({c.name: c for c in ast.composites})
    const_scope = set(constants)

    def check_comp(node, where):
        if isinstance(node, CompRef):
            if node.name not in targets:
                raise UnknownName(f"unknown process {node.name} in composite {where}")
            for e in node.args:
                _check_names(e, const_scope, where)
        elif isinstance(node, CompParallel):
            for item in node.items:
                check_comp(item, where)
        elif isinstance(node, CompLabeled):
            _check_label(node.prefix, where)
            check_comp(node.body, where)
        elif isinstance(node, CompRelabel):
            for new, old in node.pairs:
                _check_label(new, where)
                _check_label(old, where)
            check_comp(node.body, where)

    def _check_label(parts, where):
        for part in parts:
            if isinstance(part, RangeSpec) and part.range_name is not None:
                if part.range_name not in ranges:
                    raise UnknownName(f"unknown range {part.range_name} in {where}")
            elif isinstance(part, Name):
                if part.name not in constants and part.name not in ranges:
                    raise UnknownName(f"unknown name {part.name} in {where}")
            else:
                for e in _label_exprs([part]):
                    _check_names(e, const_scope, where)

    for comp in ast.composites:
        check_comp(comp.expr, comp.name)
    _check_composite_cycles(ast)
    for prog in ast.progress_defs:
        for parts in prog.actions:
            _check_label(parts, f"progress {prog.name}")
    return resolved


def _refs(node):
    if isinstance(node, CompRef):
        yield node.name
    elif isinstance(node, CompParallel):
        for item in node.items:
            yield from _refs(item)
    elif isinstance(node, (CompLabeled, CompRelabel)):
        yield from _refs(node.body)


def _check_composite_cycles(ast: SpecAst):
    graph = {c.name: sorted(set(_refs(c.expr))) for c in ast.composites}
    state = {}

    def visit(name, path):
        if state.get(name) == "done" or name not in graph:
            return
        if state.get(name) == "active":
            raise FspError("recursive composite definition: " + " -> ".join(path + [name]))
        state[name] = "active"
        for dep in graph[name]:
            visit(dep, path + [name])
        state[name] = "done"

    for name in graph:
        visit(name, [])

