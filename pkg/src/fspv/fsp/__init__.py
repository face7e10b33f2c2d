"""FSP front end: parsing, pretty-printing and name resolution."""
from fspv.fsp.parser import parse_expr, parse_spec, tokenize
from fspv.fsp.printer import format_spec
from fspv.fsp.resolve import ResolvedSpec, resolve_constants


def load_spec(path) -> ResolvedSpec:
    with open(path, encoding="utf-8") as fh:
        return resolve_constants(parse_spec(fh.read()))


__all__ = ["parse_spec", "parse_expr", "tokenize", "format_spec", "resolve_constants",
           "ResolvedSpec", "load_spec"]
