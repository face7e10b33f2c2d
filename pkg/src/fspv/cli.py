"""``fspv`` command line: check, compile, translate and animate.

Exit status: 0 when nothing was found, 1 when a check found a violation or
deadlock, 2 on any error or when the state cap was hit.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from typing import Optional, TextIO

from fspv.analyzer import CheckOptions, analyze
from fspv.animate import run_animate
from fspv.compiler import minimize
from fspv.composer import compile_target
from fspv.errors import FspError, StateLimitExceeded
from fspv.fsp import parse_spec, resolve_constants
from fspv.gaia import parse_roles, translate_role
from fspv.report import dot_text, emit_report

EXIT_OK, EXIT_FINDINGS, EXIT_ERROR = 0, 1, 2


@dataclass
class RunConfig:
    command: str
    inputs: list[str]
    target: Optional[str] = None
    safety: bool = False
    deadlock: bool = False
    progress: list[str] = field(default_factory=list)
    max_states: Optional[int] = None
    output_format: str = "text"
    output: Optional[str] = None
    dot: Optional[str] = None
    minimize: bool = False
    check: bool = False


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fspv", description="FSP compiler and LTS model checker")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    check = sub.add_parser("check", help="compile a target and run checks")
    check.add_argument("file")
    check.add_argument("--target", required=True)
    check.add_argument("--safety", action="store_true")
    check.add_argument("--deadlock", action="store_true")
    check.add_argument("--progress", action="append", default=[], metavar="NAME")
    check.add_argument("--max-states", type=int)
    check.add_argument("--minimize", action="store_true")
    check.add_argument("--json", action="store_true")
    check.add_argument("-o", "--output", metavar="PATH")

    comp = sub.add_parser("compile", help="compile a target and export DOT")
    comp.add_argument("file")
    comp.add_argument("--target", required=True)
    comp.add_argument("--dot", required=True, metavar="PATH")
    comp.add_argument("--minimize", action="store_true")
    comp.add_argument("--max-states", type=int)

    tr = sub.add_parser("translate", help="translate a Gaia role schema to FSP")
    tr.add_argument("file")
    tr.add_argument("-o", "--output", metavar="PATH")
    tr.add_argument("--check", action="store_true")

    anim = sub.add_parser("animate", help="step through a target interactively")
    anim.add_argument("file")
    anim.add_argument("--target", required=True)
    anim.add_argument("--max-states", type=int)
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=ns.command, inputs=[ns.file], target=getattr(ns, "target", None),
        safety=getattr(ns, "safety", False), deadlock=getattr(ns, "deadlock", False),
        progress=list(getattr(ns, "progress", []) or []),
        max_states=getattr(ns, "max_states", None),
        output_format="json" if getattr(ns, "json", False) else "text",
        output=getattr(ns, "output", None), dot=getattr(ns, "dot", None),
        minimize=getattr(ns, "minimize", False), check=getattr(ns, "check", False))


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path: Optional[str], text: str, stdout: TextIO) -> None:
    if path is None or path == "-":
        stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _compile(config: RunConfig):
    """Return ``(spec, lts, caps_hit)``; a capped run yields the explored prefix."""
    spec = resolve_constants(parse_spec(_read(config.inputs[0])))
    try:
        lts = compile_target(spec, config.target, max_states=config.max_states)
        caps_hit = False
    except StateLimitExceeded as exc:
        if exc.partial is None:
            raise
        lts, caps_hit = exc.partial.with_name(config.target), True
    if config.minimize:
        lts = minimize(lts)
    return spec, lts, caps_hit


def run_check(config: RunConfig, stdout: TextIO, stderr: TextIO) -> int:
    spec, lts, caps_hit = _compile(config)
    props = tuple(spec.progress_property(name) for name in config.progress)
    options = CheckOptions(safety=config.safety, deadlock=config.deadlock, progress=props)
    report = analyze(lts, options, target=config.target, caps_hit=caps_hit)
    _write(config.output, emit_report(report, config.output_format), stdout)
    if caps_hit:
        stderr.write(f"fspv: state limit reached for {config.target}; "
                     "results are not exhaustive\n")
        return EXIT_ERROR
    return EXIT_FINDINGS if report.has_findings else EXIT_OK


def run_compile(config: RunConfig, stdout: TextIO, stderr: TextIO) -> int:
    _, lts, caps_hit = _compile(config)
    _write(config.dot, dot_text(lts, config.target), stdout)
    if config.dot not in (None, "-"):
        stdout.write(f"{config.target}: {lts.state_count} states, "
                     f"{lts.transition_count} transitions\n")
    if caps_hit:
        stderr.write(f"fspv: state limit reached for {config.target}; graph is partial\n")
        return EXIT_ERROR
    return EXIT_OK


def run_translate(config: RunConfig, stdout: TextIO, stderr: TextIO) -> int:
    roles = parse_roles(_read(config.inputs[0]))
    text = "\n".join(translate_role(role) for role in roles)
    _write(config.output, text, stdout)
    if not config.check:
        return EXIT_OK
    spec = resolve_constants(parse_spec(text))
    status = EXIT_OK
    for role in roles:
        lts = compile_target(spec, role.name.upper(), max_states=config.max_states)
        report = analyze(lts, CheckOptions(safety=True, deadlock=True),
                         target=role.name.upper())
        stdout.write(emit_report(report, config.output_format))
        if report.has_findings:
            status = EXIT_FINDINGS
    return status


def main(argv=None, stdin: Optional[TextIO] = None, stdout: Optional[TextIO] = None,
         stderr: Optional[TextIO] = None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except _Usage as exc:
        stderr.write(parser.format_usage() + f"fspv: error: {exc}\n")
        return EXIT_ERROR
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_ERROR
    config = config_from_args(ns)
    try:
        if config.command == "check":
            return run_check(config, stdout, stderr)
        if config.command == "compile":
            return run_compile(config, stdout, stderr)
        if config.command == "translate":
            return run_translate(config, stdout, stderr)
        _, lts, caps_hit = _compile(config)
        if caps_hit:
            stderr.write(f"fspv: state limit reached for {config.target}\n")
            return EXIT_ERROR
        return run_animate(lts, stdin, stdout)
    except FileNotFoundError as exc:
        stderr.write(f"fspv: error: file not found: {exc.filename}\n")
    except (FspError, OSError) as exc:
        stderr.write(f"fspv: error: {exc}\n")
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
