"""Compile and analyse every target in the corpus; print one summary line each.

Usage: python scripts/run_corpus.py [--json] [--corpus DIR]
"""
import argparse
import json
import sys
from pathlib import Path

from fspv.analyzer import CheckOptions, analyze
from fspv.composer import compile_target
from fspv.fsp import load_spec, parse_spec, resolve_constants
from fspv.gaia import parse_roles, translate_role
from fspv.report import report_dict


def corpus_reports(corpus: Path):
    for path in sorted(corpus.glob("*.fsp")):
        spec = load_spec(path)
        progress = tuple(spec.progress_property(p.name) for p in spec.ast.progress_defs)
        for name in spec.ast.target_names:
            lts = compile_target(spec, name)
            yield path.name, analyze(lts, CheckOptions(progress=progress), target=name)
    for path in sorted(corpus.glob("*.gaia")):
        roles = parse_roles(path.read_text(encoding="utf-8"))
        spec = resolve_constants(parse_spec("\n".join(translate_role(r) for r in roles)))
        for role in roles:
            name = role.name.upper()
            yield path.name, analyze(compile_target(spec, name), target=name)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--corpus", type=Path,
                        default=Path(__file__).resolve().parent.parent / "corpus")
    parser.add_argument("--json", action="store_true")
    args = parser.parse_args(argv)
    rows = []
    for file, report in corpus_reports(args.corpus):
        data = report_dict(report)
        data.pop("elapsed_ms")
        rows.append({"file": file, **data})
        if not args.json:
            safety = data["safety"]["violated"]
            progress = [p["name"] for p in data.get("progress", []) if p["violated"]]
            print(f"{file:22} {report.target:24} states={report.state_count:<4} "
                  f"transitions={report.transition_count:<4} safety={'VIOLATED' if safety else 'ok'} "
                  f"deadlocks={len(data['deadlocks'])} "
                  f"progress={'VIOLATED ' + ','.join(progress) if progress else 'ok'}")
    if args.json:
        json.dump(rows, sys.stdout, indent=2)
        print()


if __name__ == "__main__":
    main()
