"""Render a SpecAst back to FSP source. ``parse_spec(format_spec(ast)) == ast``."""
from __future__ import annotations

from fspv.fsp.ast import (ActionPrefix, Binary, Choice, CompLabeled, CompParallel, CompRef,
                          CompRelabel, Guarded, LocalRef, Name, Num, ProcessDef, RangeSpec,
                          SpecAst, Stop, Unary)


def format_expr(e) -> str:
    if isinstance(e, Num):
        return str(e.value)
    if isinstance(e, Name):
        return e.name
    if isinstance(e, Unary):
        return f"{e.op}{format_expr(e.operand)}"
    if isinstance(e, Binary):
        return f"({format_expr(e.left)} {e.op} {format_expr(e.right)})"
    raise TypeError(f"not an expression: {e!r}")


def _bare_expr(e) -> str:
    # outermost parentheses are redundant inside brackets and guards
    text = format_expr(e)
    if isinstance(e, Binary):
        return text[1:-1]
    return text


def format_range(r: RangeSpec) -> str:
    if r.range_name is not None:
        return r.range_name
    return f"{_bare_expr(r.lo)}..{_bare_expr(r.hi)}"


def format_label(parts) -> str:
    out = []
    for i, part in enumerate(parts):
        if isinstance(part, str):
            out.append(part if i == 0 else "." + part)
        elif isinstance(part, RangeSpec):
            out.append(f"[{format_range(part)}]")
        else:
            out.append(f"[{_bare_expr(part)}]")
    return "".join(out)


def format_continuation(body) -> str:
    if isinstance(body, Stop):
        return "STOP"
    if isinstance(body, LocalRef):
        return body.name + "".join(f"[{_bare_expr(a)}]" for a in body.args)
    if isinstance(body, ActionPrefix):
        return f"{format_label(body.action)} -> {format_continuation(body.continuation)}"
    return f"({format_branches(body)})"


def _format_branch(body) -> str:
    if isinstance(body, Guarded):
        return f"when ({_bare_expr(body.guard)}) {_format_branch(body.branch)}"
    return format_continuation(body)


def format_branches(body, sep=" | ") -> str:
    if isinstance(body, Choice):
        return sep.join(_format_branch(b) for b in body.branches)
    return _format_branch(body)


def format_local_body(body, multiline=False) -> str:
    if isinstance(body, (Stop, LocalRef)):
        return format_continuation(body)
    if multiline and isinstance(body, Choice):
        return "(\n      " + format_branches(body, sep="\n    | ") + "\n)"
    return f"({format_branches(body)})"


def format_process(proc: ProcessDef, multiline=False) -> str:
    text = "property " if proc.is_property else ""
    text += proc.name
    if proc.parameters:
        text += "(" + ", ".join(f"{n}={_bare_expr(v)}" for n, v in proc.parameters) + ")"
    chunks = []
    for i, loc in enumerate(proc.locals):
        name = text if i == 0 else loc.name
        idx = "".join(f"[{b.var}:{format_range(b.range)}]" for b in loc.indices)
        chunks.append(f"{name}{idx} = {format_local_body(loc.body, multiline)}")
    return (",\n" if multiline else ", ").join(chunks) + "."


def format_comp(node, top=False) -> str:
    if isinstance(node, CompRef):
        text = node.name
        if node.args:
            text += "(" + ", ".join(_bare_expr(a) for a in node.args) + ")"
        return f"({text})" if top else text
    if isinstance(node, CompParallel):
        return "(" + " || ".join(format_comp(i) for i in node.items) + ")"
    if isinstance(node, CompLabeled):
        text = f"{format_label(node.prefix)}:{format_comp(node.body)}"
        return f"({text})" if top else text
    if isinstance(node, CompRelabel):
        inner = format_comp(node.body)
        if isinstance(node.body, CompLabeled):
            inner = f"({inner})"
        pairs = ", ".join(f"{format_label(n)}/{format_label(o)}" for n, o in node.pairs)
        return f"{inner}/{{{pairs}}}"
    raise TypeError(f"not a composition expression: {node!r}")


def format_spec(ast: SpecAst, multiline=True) -> str:
    lines = []
    for name, value in ast.constants:
        lines.append(f"const {name} = {_bare_expr(value)}")
    for name, lo, hi in ast.ranges:
        lines.append(f"range {name} = {_bare_expr(lo)}..{_bare_expr(hi)}")
    for proc in ast.processes:
        lines.append(format_process(proc, multiline))
    for prog in ast.progress_defs:
        lines.append(f"progress {prog.name} = {{" + ", ".join(format_label(a) for a in prog.actions) + "}")
    for comp in ast.composites:
        lines.append(f"||{comp.name} = {format_comp(comp.expr, top=True)}.")
    return "\n".join(lines) + "\n"
