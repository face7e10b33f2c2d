"""Gaia role schemas: data types and the ``.gaia`` block-format parser."""
from __future__ import annotations

import re
from dataclasses import dataclass, replace
from typing import Union

from fspv.errors import (DuplicateDefinition, GaiaSyntaxError, InterleaveNotTopLevel,
                         RecursiveLivenessDefinition, UnknownName)


# -- liveness expressions ------------------------------------------------

@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Seq:
    left: "LivenessExpr"
    right: "LivenessExpr"


@dataclass(frozen=True)
class Choice:
    left: "LivenessExpr"
    right: "LivenessExpr"


@dataclass(frozen=True)
class Star:
    inner: "LivenessExpr"


@dataclass(frozen=True)
class Plus:
    inner: "LivenessExpr"


@dataclass(frozen=True)
class Omega:
    inner: "LivenessExpr"


@dataclass(frozen=True)
class Optional:
    inner: "LivenessExpr"


@dataclass(frozen=True)
class Interleave:
    left: "LivenessExpr"
    right: "LivenessExpr"


LivenessExpr = Union[Atom, Seq, Choice, Star, Plus, Omega, Optional, Interleave]


def atoms(expr) -> list[str]:
    """Atom names in left-to-right order, with repeats."""
    if isinstance(expr, Atom):
        return [expr.name]
    if isinstance(expr, (Star, Plus, Omega, Optional)):
        return atoms(expr.inner)
    return atoms(expr.left) + atoms(expr.right)


def format_liveness(expr) -> str:
    if isinstance(expr, Atom):
        return expr.name
    if isinstance(expr, Seq):
        return f"({format_liveness(expr.left)} . {format_liveness(expr.right)})"
    if isinstance(expr, Choice):
        return f"({format_liveness(expr.left)} | {format_liveness(expr.right)})"
    if isinstance(expr, Interleave):
        return f"{format_liveness(expr.left)} || {format_liveness(expr.right)}"
    if isinstance(expr, Optional):
        return f"[{format_liveness(expr.inner)}]"
    suffix = {Star: "*", Plus: "+", Omega: "^w"}[type(expr)]
    inner = format_liveness(expr.inner)
    if not isinstance(expr.inner, (Atom, Optional)) and not inner.startswith("("):
        inner = f"({inner})"
    return inner + suffix


# -- schema --------------------------------------------------------------

@dataclass(frozen=True)
class ProtocolDef:
    name: str
    initiator: str = ""
    responder: str = ""
    inputs: tuple[str, ...] = ()
    description: str = ""


@dataclass(frozen=True)
class Permission:
    verb: str  # reads | changes
    scope: str  # internal | external
    resource: str


@dataclass(frozen=True)
class GaiaRoleSchema:
    name: str
    description: str = ""
    activities: tuple[str, ...] = ()
    protocols: tuple[ProtocolDef, ...] = ()
    permissions: tuple[Permission, ...] = ()
    liveness: tuple[tuple[str, LivenessExpr], ...] = ()
    safety: tuple[str, ...] = ()

    @property
    def entry(self) -> tuple[str, LivenessExpr]:
        return self.liveness[0]

    def definition(self, name):
        for n, e in self.liveness:
            if n == name:
                return e
        return None


# -- lexer ---------------------------------------------------------------

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r\f\v]+)
  | (?P<nl>\n)
  | (?P<comment>//[^\n]*)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>\|\||\^ω|\^w\b|[{}():,=.|*+\[\]])
""", re.VERBOSE)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(source: str) -> list[_Tok]:
    out, pos, line, start = [], 0, 1, 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise GaiaSyntaxError(f"unexpected character {source[pos]!r}", line, pos - start + 1)
        kind, text = m.lastgroup, m.group()
        if kind == "nl":
            line, start = line + 1, m.end()
        elif kind in ("string", "ident", "op"):
            if kind == "op" and text in ("^w", "^ω"):
                text = "^w"
            out.append(_Tok(kind, text, line, pos - start + 1))
        pos = m.end()
    out.append(_Tok("eof", "", line, pos - start + 1))
    return out


class _Parser:
    def __init__(self, source: str):
        self.toks = _tokenize(source)
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def peek(self, k=1):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, text, kind=None):
        t = self.tok
        return t.text == text and (kind is None or t.kind == kind) and t.kind != "string"

    def next(self):
        t = self.tok
        if t.kind != "eof":
            self.i += 1
        return t

    def error(self, msg, expected=None):
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        return GaiaSyntaxError(f"{msg}, found {found}", t.line, t.col, expected)

    def expect(self, text):
        if not self.at(text):
            raise self.error("unexpected token", f"'{text}'")
        return self.next()

    def ident(self, what="identifier"):
        if self.tok.kind != "ident":
            raise self.error(f"expected {what}", what)
        return self.next().text

    def string(self):
        if self.tok.kind != "string":
            raise self.error("expected a quoted string", "string")
        raw = self.next().text[1:-1]
        return re.sub(r"\\(.)", r"\1", raw)

    def ident_list(self):
        items = [self.ident()]
        while self.at(","):
            self.next()
            items.append(self.ident())
        return items

    # -- liveness ----------------------------------------------------

    def liveness_top(self):
        left = self.choice()
        if self.at("||"):
            self.next()
            return Interleave(left, self.liveness_top())
        return left

    def choice(self):
        left = self.seq()
        if self.at("|"):
            self.next()
            return Choice(left, self.choice())
        return left

    def seq(self):
        left = self.postfix()
        if self.at("."):
            self.next()
            return Seq(left, self.seq())
        return left

    def postfix(self):
        node = self.primary()
        while True:
            if self.at("*"):
                node = Star(node)
            elif self.at("+"):
                node = Plus(node)
            elif self.at("^w"):
                node = Omega(node)
            else:
                return node
            self.next()

    def primary(self):
        if self.at("("):
            self.next()
            node = self.choice()
            if self.at("||"):
                t = self.tok
                raise InterleaveNotTopLevel(
                    f"{t.line}:{t.col}: '||' may only appear at the top of a definition")
            self.expect(")")
            return node
        if self.at("["):
            self.next()
            node = self.choice()
            if self.at("||"):
                t = self.tok
                raise InterleaveNotTopLevel(
                    f"{t.line}:{t.col}: '||' may only appear at the top of a definition")
            self.expect("]")
            return Optional(node)
        if self.tok.kind == "ident":
            return Atom(self.next().text)
        raise self.error("expected an activity, protocol or '('", "identifier, '(' or '['")

    def liveness_expr(self):
        node = self.liveness_top()
        if self.tok.kind != "eof":
            raise self.error("trailing input after liveness expression")
        return node

    # -- role blocks -------------------------------------------------

    def roles(self):
        out = []
        while self.tok.kind != "eof":
            out.append(self.role())
        return out

    def role(self):
        if not self.at("role", "ident"):
            raise self.error("expected a role block", "'role'")
        role_tok = self.next()
        name = self.ident("role name")
        self.expect("{")
        description, activities, protocol_names, details = "", [], [], {}
        permissions, liveness, safety = [], [], []
        while not self.at("}"):
            t = self.tok
            key = self.ident("section name")
            if key == "description":
                self.expect(":")
                description = self.string()
            elif key == "activities":
                self.expect(":")
                activities.extend(self.ident_list())
            elif key == "protocols":
                self.expect(":")
                protocol_names.extend(self.ident_list())
            elif key == "protocol":
                pname = self.ident("protocol name")
                details[pname] = self.protocol_block(pname)
            elif key == "permissions":
                self.expect("{")
                while not self.at("}"):
                    verb_tok = self.tok
                    verb = self.ident("'reads' or 'changes'")
                    if verb not in ("reads", "changes"):
                        raise GaiaSyntaxError(f"unknown permission verb {verb}", verb_tok.line,
                                              verb_tok.col, "'reads' or 'changes'")
                    scope_tok = self.tok
                    scope = self.ident("'internal' or 'external'")
                    if scope not in ("internal", "external"):
                        raise GaiaSyntaxError(f"unknown permission scope {scope}", scope_tok.line,
                                              scope_tok.col, "'internal' or 'external'")
                    permissions.append(Permission(verb, scope, self.ident("resource name")))
                self.expect("}")
            elif key == "liveness":
                self.expect("{")
                while not self.at("}"):
                    def_tok = self.tok
                    dname = self.ident("liveness definition name")
                    self.expect("=")
                    if any(n == dname for n, _ in liveness):
                        raise DuplicateDefinition(
                            f"{def_tok.line}:{def_tok.col}: liveness definition {dname} "
                            f"is defined twice in role {name}")
                    liveness.append((dname, self.liveness_top()))
                self.expect("}")
            elif key == "safety":
                self.expect("{")
                while not self.at("}"):
                    safety.append(self.string())
                self.expect("}")
            else:
                raise GaiaSyntaxError(f"unknown section {key}", t.line, t.col,
                                      "description, activities, protocols, protocol, "
                                      "permissions, liveness or safety")
        self.expect("}")
        if not liveness:
            raise GaiaSyntaxError(f"role {name}: role must declare at least one liveness "
                                  f"definition", role_tok.line, role_tok.col)
        for pname in details:
            if pname not in protocol_names:
                protocol_names.append(pname)
        protocols = tuple(details.get(p, ProtocolDef(p)) for p in protocol_names)
        schema = GaiaRoleSchema(name, description, tuple(activities), protocols,
                                tuple(permissions), tuple(liveness), tuple(safety))
        _check_references(schema)
        return schema

    def protocol_block(self, pname):
        fields = {}
        self.expect("{")
        while not self.at("}"):
            t = self.tok
            key = self.ident("protocol field")
            self.expect(":")
            if key in ("initiator", "responder"):
                fields[key] = self.ident(key)
            elif key == "inputs":
                fields[key] = tuple(self.ident_list())
            elif key == "description":
                fields[key] = self.string()
            else:
                raise GaiaSyntaxError(f"unknown protocol field {key}", t.line, t.col,
                                      "initiator, responder, inputs or description")
        self.expect("}")
        return ProtocolDef(pname, **fields)


def _check_references(schema: GaiaRoleSchema):
    known = set(schema.activities) | {p.name for p in schema.protocols}
    known |= {n for n, _ in schema.liveness}
    for dname, expr in schema.liveness:
        for atom in atoms(expr):
            if atom not in known:
                raise UnknownName(f"role {schema.name}: {atom} in liveness definition {dname} "
                                  f"is not an activity, protocol or liveness definition")


def parse_liveness_expr(text: str) -> LivenessExpr:
    """Precedence, tightest first: postfix ``* + ^w``, then ``.``, then ``|``; ``||`` only at top."""
    return _Parser(text).liveness_expr()


def parse_roles(source_text: str) -> list[GaiaRoleSchema]:
    return _Parser(source_text).roles()


def parse_role_schema(source_text: str) -> GaiaRoleSchema:
    roles = parse_roles(source_text)
    if len(roles) != 1:
        raise GaiaSyntaxError(f"expected exactly one role block, found {len(roles)}")
    return roles[0]


# -- inlining ------------------------------------------------------------

def _contains_interleave(expr) -> bool:
    if isinstance(expr, Interleave):
        return True
    if isinstance(expr, Atom):
        return False
    if isinstance(expr, (Star, Plus, Omega, Optional)):
        return _contains_interleave(expr.inner)
    return _contains_interleave(expr.left) or _contains_interleave(expr.right)


def _check_interleave_top(expr, where):
    if isinstance(expr, Interleave):
        _check_interleave_top(expr.left, where)
        _check_interleave_top(expr.right, where)
    elif _contains_interleave(expr):
        raise InterleaveNotTopLevel(f"'||' below the top of liveness definition {where}")


def inline_definitions(schema: GaiaRoleSchema) -> GaiaRoleSchema:
    """Substitute liveness definitions at their reference sites.

    Every definition in the result mentions only activities and protocols.
    Raises :class:`RecursiveLivenessDefinition` naming the cycle if the
    definitions refer to each other recursively.
    """
    defs = dict(schema.liveness)
    done: dict[str, LivenessExpr] = {}

    def expand(name, path):
        if name in done:
            return done[name]
        if name in path:
            cycle = path[path.index(name):] + [name]
            raise RecursiveLivenessDefinition(cycle)
        result = subst(defs[name], path + [name])
        done[name] = result
        return result

    def subst(expr, path):
        if isinstance(expr, Atom):
            return expand(expr.name, path) if expr.name in defs else expr
        if isinstance(expr, (Star, Plus, Omega, Optional)):
            return type(expr)(subst(expr.inner, path))
        return type(expr)(subst(expr.left, path), subst(expr.right, path))

    liveness = tuple((name, expand(name, [])) for name, _ in schema.liveness)
    for name, expr in liveness:
        _check_interleave_top(expr, name)
    return replace(schema, liveness=liveness)
