"""Gaia role schemas and their translation into FSP."""
from fspv.gaia.schema import (Atom, Choice, GaiaRoleSchema, Interleave, Omega, Optional,
                              Permission, Plus, ProtocolDef, Seq, Star, atoms, format_liveness,
                              inline_definitions, parse_liveness_expr, parse_role_schema,
                              parse_roles)
from fspv.gaia.translate import TERMINAL, Fragment, translate_expr, translate_role


def load_role(path) -> GaiaRoleSchema:
    with open(path, encoding="utf-8") as fh:
        return parse_role_schema(fh.read())


__all__ = ["Atom", "Choice", "GaiaRoleSchema", "Interleave", "Omega", "Optional", "Permission",
           "Plus", "ProtocolDef", "Seq", "Star", "atoms", "format_liveness", "inline_definitions",
           "parse_liveness_expr", "parse_role_schema", "parse_roles", "TERMINAL", "Fragment",
           "translate_expr", "translate_role", "load_role"]
