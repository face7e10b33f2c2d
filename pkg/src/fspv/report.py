"""Report rendering: JSON and text analysis reports, and DOT export."""
from __future__ import annotations

import json
from typing import TextIO

from fspv.analyzer import AnalysisReport
from fspv.model import ERROR, Lts, trace_to_text


def report_dict(report: AnalysisReport) -> dict:
    """JSON-ready view of a report; fields for checks that did not run are omitted."""
    out = {"target": report.target, "states": report.state_count,
           "transitions": report.transition_count}
    if report.safety_checked:
        trace = report.safety_violation
        out["safety"] = {"violated": trace is not None,
                         "trace": list(trace.actions) if trace is not None else None}
    if report.deadlocks is not None:
        out["deadlocks"] = [{"trace": list(d.trace.actions), "state": d.state}
                            for d in report.deadlocks]
    if report.progress is not None:
        out["progress"] = [{"name": r.name, "violated": r.violated,
                            "terminal_set_actions": [list(ts.actions) for ts in r.violations]}
                           for r in report.progress]
    out["caps_hit"] = report.caps_hit
    if report.warnings:
        out["warnings"] = list(report.warnings)
    out["elapsed_ms"] = round(report.elapsed * 1000.0, 3)
    return out


def report_text(report: AnalysisReport) -> str:
    lines = [f"target: {report.target}", f"states: {report.state_count}",
             f"transitions: {report.transition_count}"]
    if report.safety_checked:
        trace = report.safety_violation
        if trace is None:
            lines.append("safety: no violation")
        else:
            lines.append(f"safety: VIOLATED ({len(trace)} actions)")
            lines.append(f"  trace: {trace_to_text(trace)}")
    if report.deadlocks is not None:
        lines.append(f"deadlocks: {len(report.deadlocks)}")
        for d in report.deadlocks:
            lines.append(f"  DEADLOCK at state {d.state} ({len(d.trace)} actions)")
            lines.append(f"  trace: {trace_to_text(d.trace)}")
    if report.progress is not None:
        for r in report.progress:
            if not r.violated:
                lines.append(f"progress {r.name}: holds")
                continue
            lines.append(f"progress {r.name}: VIOLATED in {len(r.violations)} terminal set(s)")
            for ts in r.violations:
                states = ", ".join(map(str, ts.states))
                actions = ", ".join(ts.actions) or "<none>"
                lines.append(f"  terminal set {{{states}}} actions {{{actions}}}")
    lines.append(f"caps_hit: {'yes' if report.caps_hit else 'no'}")
    for w in report.warnings:
        lines.append(f"warning: {w}")
    lines.append(f"elapsed_ms: {report.elapsed * 1000.0:.3f}")
    return "\n".join(lines) + "\n"


def emit_report(report: AnalysisReport, fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps(report_dict(report), indent=2) + "\n"
    if fmt == "text":
        return report_text(report)
    raise ValueError(f"unknown report format {fmt!r}")


def _quote(text) -> str:
    return '"' + str(text).replace("\\", "\\\\").replace('"', '\\"') + '"'


def dot_text(lts: Lts, name: str | None = None) -> str:
    """DOT digraph of ``lts``.

    Nodes are state ids in numeric order with ERROR last; the initial state
    has a double border (``peripheries=2``) and ERROR is a filled box.
    Edges follow the sorted transition list.
    """
    title = name or lts.name or "lts"
    lines = [f"digraph {_quote(title)} {{", "  rankdir=LR;",
             "  node [shape=circle];"]
    for s in lts.states():
        attrs = " [peripheries=2]" if s == lts.initial else ""
        lines.append(f"  {_quote(s)}{attrs};")
    if lts.has_error:
        lines.append(f"  {_quote(ERROR)} [shape=box, style=filled, fillcolor=lightgrey];")
    for src, label, dst in lts.transitions:
        lines.append(f"  {_quote(src)} -> {_quote(dst)} [label={_quote(label)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_dot(lts: Lts, writer: TextIO, name: str | None = None) -> str:
    text = dot_text(lts, name)
    writer.write(text)
    return text
