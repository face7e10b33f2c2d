"""Lexer and recursive-descent parser for the FSP subset.

The grammar is documented in ``docs/grammar.ebnf``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from fspv.errors import DuplicateDefinition, FspSyntaxError
from fspv.fsp.ast import (ActionPrefix, Binary, Choice, CompLabeled, CompParallel,
                          CompRef, CompRelabel, CompositeDef, Guarded, IndexBinding,
                          LocalDef, LocalRef, Name, Num, ProcessDef, ProgressDef,
                          RangeSpec, SpecAst, Stop, Unary)

KEYWORDS = {"const", "range", "property", "progress", "when", "STOP"}

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r\f\v]+)
  | (?P<nl>\n)
  | (?P<comment>//[^\n]*)
  | (?P<block>/\*.*?\*/)
  | (?P<int>[0-9]+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>->|\.\.|==|!=|<=|>=|&&|\|\||[.,()\[\]{}=<>&|!+\-*/%:])
""", re.VERBOSE | re.DOTALL)


@dataclass(frozen=True)
class Token:
    kind: str  # 'int', 'ident', 'kw', 'op', 'eof'
    text: str
    line: int
    col: int


def tokenize(source: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise FspSyntaxError(f"unexpected character {source[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        text = m.group()
        col = pos - line_start + 1
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "block":
            line += text.count("\n")
            if "\n" in text:
                line_start = pos + text.rindex("\n") + 1
        elif kind == "ident":
            tokens.append(Token("kw" if text in KEYWORDS else "ident", text, line, col))
        elif kind in ("int", "op"):
            tokens.append(Token(kind, text, line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


_BINARY_LEVELS = [
    ("||",),
    ("&&", "&"),
    ("==", "!="),
    ("<", "<=", ">", ">="),
    ("+", "-"),
    ("*", "/", "%"),
]


class Parser:
    def __init__(self, source: str):
        self.tokens = tokenize(source)
        self.pos = 0

    # -- token helpers ---------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, offset=1) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def at(self, text, offset=0) -> bool:
        t = self.peek(offset) if offset else self.tok
        return t.kind in ("op", "kw") and t.text == text

    def advance(self) -> Token:
        t = self.tok
        if t.kind != "eof":
            self.pos += 1
        return t

    def error(self, message, expected=None):
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        return FspSyntaxError(f"{message}, found {found}", t.line, t.col, expected)

    def expect(self, text) -> Token:
        if not self.at(text):
            raise self.error("unexpected token", f"'{text}'")
        return self.advance()

    def accept(self, text) -> bool:
        if self.at(text):
            self.advance()
            return True
        return False

    def _glued(self) -> bool:
        # a '.' inside a label touches both neighbours; a terminating '.' need not
        prev, dot, nxt = self.tokens[self.pos - 1], self.tok, self.peek()
        return (prev.line == dot.line == nxt.line
                and prev.col + len(prev.text) == dot.col
                and dot.col + 1 == nxt.col)

    def ident(self, what="identifier") -> str:
        if self.tok.kind != "ident":
            raise self.error(f"expected {what}", what)
        return self.advance().text

    # -- expressions -----------------------------------------------------

    def expr(self, level=0):
        if level == len(_BINARY_LEVELS):
            return self.unary()
        left = self.expr(level + 1)
        ops = _BINARY_LEVELS[level]
        while self.tok.kind == "op" and self.tok.text in ops:
            op = self.advance().text
            if op == "&":
                op = "&&"
            right = self.expr(level + 1)
            left = Binary(op, left, right)
        return left

    def unary(self):
        if self.at("!") or self.at("-"):
            op = self.advance().text
            return Unary(op, self.unary())
        if self.at("+"):
            self.advance()
            return self.unary()
        return self.primary()

    def primary(self):
        t = self.tok
        if t.kind == "int":
            self.advance()
            return Num(int(t.text))
        if t.kind == "ident":
            self.advance()
            return Name(t.text)
        if self.accept("("):
            e = self.expr()
            self.expect(")")
            return e
        raise self.error("expected an expression", "integer, name or '('")

    def bracket_item(self, allow_range):
        """Contents of ``[...]`` in a label: an expression, or ``lo..hi`` where ranges are allowed."""
        lo = self.expr()
        if self.at(".."):
            if not allow_range:
                raise self.error("a range is not allowed here")
            self.advance()
            hi = self.expr()
            return RangeSpec(lo, hi)
        return lo

    # -- labels ----------------------------------------------------------

    def label(self, allow_range=False) -> tuple:
        parts = [self.ident("action label")]
        while True:
            if self.at(".") and self.peek().kind in ("ident", "int") and self._glued():
                self.advance()
                parts.append(self.advance().text)
            elif self.at("["):
                self.advance()
                parts.append(self.bracket_item(allow_range))
                self.expect("]")
            else:
                return tuple(parts)

    # -- top level -------------------------------------------------------

    def spec(self) -> SpecAst:
        constants, ranges, processes, composites, progress = [], [], [], [], []
        seen = {}

        def declare(name, kind, tok):
            if name in seen:
                raise DuplicateDefinition(
                    f"{tok.line}:{tok.col}: {kind} {name} is already defined as a {seen[name]}")
            seen[name] = kind

        while self.tok.kind != "eof":
            start = self.tok
            if self.accept("const"):
                name = self.ident("constant name")
                self.expect("=")
                declare(name, "constant", start)
                constants.append((name, self.expr()))
            elif self.accept("range"):
                name = self.ident("range name")
                self.expect("=")
                lo = self.expr()
                self.expect("..")
                hi = self.expr()
                declare(name, "range", start)
                ranges.append((name, lo, hi))
            elif self.accept("property"):
                proc = self.process_def(is_property=True)
                declare(proc.name, "process", start)
                processes.append(proc)
            elif self.accept("progress"):
                name = self.ident("progress name")
                self.expect("=")
                declare(name, "progress property", start)
                progress.append(ProgressDef(name, self.label_set()))
            elif self.at("||"):
                self.advance()
                name = self.ident("composite name")
                self.expect("=")
                expr = self.comp_expr()
                self.expect(".")
                declare(name, "composite", start)
                composites.append(CompositeDef(name, expr))
            elif self.tok.kind == "ident":
                proc = self.process_def(is_property=False)
                declare(proc.name, "process", start)
                processes.append(proc)
            else:
                raise self.error("expected a definition",
                                 "'const', 'range', 'property', 'progress', '||' or a process name")
        return SpecAst(tuple(constants), tuple(ranges), tuple(processes),
                       tuple(composites), tuple(progress))

    def label_set(self) -> tuple:
        self.expect("{")
        items = [self.label(allow_range=True)]
        while self.accept(","):
            items.append(self.label(allow_range=True))
        self.expect("}")
        return tuple(items)

    def process_def(self, is_property) -> ProcessDef:
        name_tok = self.tok
        name = self.ident("process name")
        params = []
        if self.accept("("):
            while True:
                pname = self.ident("parameter name")
                self.expect("=")
                params.append((pname, self.expr()))
                if not self.accept(","):
                    break
            self.expect(")")
        indices = self.index_bindings()
        self.expect("=")
        locals_ = [LocalDef(name, indices, self.local_body())]
        while self.accept(","):
            tok = self.tok
            lname = self.ident("local process name")
            lindices = self.index_bindings()
            self.expect("=")
            if any(loc.name == lname for loc in locals_):
                raise DuplicateDefinition(f"{tok.line}:{tok.col}: local process {lname} "
                                          f"is defined twice in {name}")
            locals_.append(LocalDef(lname, lindices, self.local_body()))
        if not self.at("."):
            raise self.error("process definition must end with '.'", "',' or '.'")
        self.advance()
        pnames = [p for p, _ in params]
        if len(set(pnames)) != len(pnames):
            raise DuplicateDefinition(f"{name_tok.line}:{name_tok.col}: duplicate parameter in {name}")
        return ProcessDef(name, tuple(params), tuple(locals_), is_property)

    def index_bindings(self) -> tuple:
        out = []
        while self.accept("["):
            var = self.ident("index variable")
            self.expect(":")
            if self.tok.kind == "ident" and self.peek().text == "]" and self.peek().kind == "op":
                rng = RangeSpec(range_name=self.advance().text)
            else:
                lo = self.expr()
                self.expect("..")
                rng = RangeSpec(lo, self.expr())
            self.expect("]")
            out.append(IndexBinding(var, rng))
        return tuple(out)

    # -- process bodies --------------------------------------------------

    def local_body(self):
        if self.accept("("):
            body = self.choice()
            self.expect(")")
            return body
        return self.continuation()

    def choice(self):
        branches = [self.branch()]
        while self.accept("|"):
            branches.append(self.branch())
        return branches[0] if len(branches) == 1 else Choice(tuple(branches))

    def branch(self):
        if self.accept("when"):
            guard = self.expr()
            return Guarded(guard, self.branch())
        if self.tok.kind != "ident":
            raise self.error("choice branch must begin with an action prefix", "action label")
        action = self.label()
        if not self.at("->"):
            raise self.error("choice branch must begin with an action prefix", "'->'")
        self.advance()
        return ActionPrefix(action, self.continuation())

    def continuation(self):
        if self.accept("STOP"):
            return Stop()
        if self.accept("("):
            body = self.choice()
            self.expect(")")
            return body
        if self.tok.kind != "ident":
            raise self.error("expected an action, a local process, STOP or '('")
        start = self.tok
        parts = self.label()
        if self.accept("->"):
            return ActionPrefix(parts, self.continuation())
        if any(isinstance(p, str) for p in parts[1:]):
            raise FspSyntaxError(f"'{start.text}...' is not a process reference", start.line,
                                 start.col, "'->'")
        return LocalRef(parts[0], tuple(parts[1:]))

    # -- composition -----------------------------------------------------

    def comp_expr(self):
        items = [self.comp_term()]
        while self.accept("||"):
            items.append(self.comp_term())
        return items[0] if len(items) == 1 else CompParallel(tuple(items))

    def comp_term(self):
        if self.tok.kind == "ident":
            save = self.pos
            prefix = self.label(allow_range=True)
            if self.accept(":"):
                return CompLabeled(prefix, self.comp_term())
            self.pos = save
        node = self.comp_primary()
        while self.at("/"):
            self.advance()
            node = CompRelabel(node, self.relabel_pairs())
        return node

    def comp_primary(self):
        if self.accept("("):
            node = self.comp_expr()
            self.expect(")")
            return node
        name = self.ident("process or composite name")
        args = []
        if self.accept("("):
            args.append(self.expr())
            while self.accept(","):
                args.append(self.expr())
            self.expect(")")
        return CompRef(name, tuple(args))

    def relabel_pairs(self) -> tuple:
        self.expect("{")
        pairs = []
        while True:
            new = self.label()
            self.expect("/")
            old = self.label()
            pairs.append((new, old))
            if not self.accept(","):
                break
        self.expect("}")
        return tuple(pairs)


def parse_spec(source_text: str) -> SpecAst:
    """Parse FSP source into a :class:`SpecAst`.

    Raises :class:`FspSyntaxError` (with line, column and an expected-token
    hint) or :class:`DuplicateDefinition`.
    """
    return Parser(source_text).spec()


def parse_expr(text: str):
    p = Parser(text)
    e = p.expr()
    if p.tok.kind != "eof":
        raise p.error("trailing input after expression")
    return e
