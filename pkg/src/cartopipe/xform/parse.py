"""Lexer and parser for the transformation DSL (`.carto.tx` files).

The surface is deliberately small: named rules with a single source pattern,
an optional guard, an optional foreach, and one or more target templates
whose fields are bound by expressions. `--` comments run to end of line.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import TextParseError, TransformError
from ..schema import CoreKind, MetamodelSchema, core_kind_of, kind_is

# Expression nodes


@dataclass
class Lit:
    value: str | int | float | bool


@dataclass
class Var:
    name: str


@dataclass
class Field:
    obj: "Expr"
    field: str


@dataclass
class Call:
    func: str
    args: list["Expr"]


@dataclass
class Binary:
    op: str  # "=", "!=", "and", "or", "+"
    left: "Expr"
    right: "Expr"


@dataclass
class Not:
    operand: "Expr"


Expr = Lit | Var | Field | Call | Binary | Not


@dataclass
class Binding:
    field: str  # "name", "source", "locator.lat", "metadata.<key>", ...
    expr: Expr


@dataclass
class TargetSpec:
    var: str
    type: str
    bindings: list[Binding] = field(default_factory=list)


@dataclass
class Rule:
    name: str
    source_var: str
    source_type: str
    guard: Expr | None = None
    foreach: tuple[str, Expr] | None = None
    targets: list[TargetSpec] = field(default_factory=list)


@dataclass
class TransformationAst:
    name: str
    source_schema: str
    target_schema: str
    rules: list[Rule] = field(default_factory=list)


# name -> (arity, argument positions that take a type name instead of a value)
BUILTINS: dict[str, tuple[int, frozenset[int]]] = {
    "allOf": (1, frozenset({0})),
    "sourceOf": (1, frozenset()),
    "targetOf": (1, frozenset()),
    "incoming": (2, frozenset({1})),
    "outgoing": (2, frozenset({1})),
    "meta": (2, frozenset()),
    "kindOf": (2, frozenset({1})),
    "pairs": (2, frozenset()),
    "first": (1, frozenset()),
    "second": (1, frozenset()),
    "byMeta": (3, frozenset({0})),
    "byName": (2, frozenset({0})),
    "membersOf": (1, frozenset()),
    "num": (1, frozenset()),
}

KEYWORDS = {"transformation", "from", "to", "rule", "foreach", "in", "and", "or", "not",
            "true", "false"}

_FIELD_HEADS = {"id", "name", "source", "target", "container", "members", "locator",
                "metadata"}

_ESCAPES = {'"': '"', "\\": "\\", "n": "\n", "t": "\t", "r": "\r"}


@dataclass
class Token:
    kind: str  # "ident", "kw", "number", "string", "eof", or the symbol itself
    value: object
    line: int
    col: int


def _lex(text: str) -> list[Token]:
    tokens: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if text.startswith("--", i):
            while i < n and text[i] != "\n":
                i += 1
            continue
        start_line, start_col = line, col
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            kind = "kw" if word in KEYWORDS else "ident"
            tokens.append(Token(kind, word, start_line, start_col))
            col += j - i
            i = j
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            if j < n and text[j] == "." and j + 1 < n and text[j + 1].isdigit():
                j += 1
                while j < n and text[j].isdigit():
                    j += 1
                value: object = float(text[i:j])
            else:
                value = int(text[i:j])
            tokens.append(Token("number", value, start_line, start_col))
            col += j - i
            i = j
            continue
        if ch == '"':
            j = i + 1
            out = []
            while True:
                if j >= n or text[j] == "\n":
                    raise TextParseError("unterminated string", start_line, start_col)
                c = text[j]
                if c == '"':
                    j += 1
                    break
                if c == "\\":
                    if j + 1 >= n or text[j + 1] not in _ESCAPES:
                        raise TextParseError("bad string escape", line, start_col + (j - i))
                    out.append(_ESCAPES[text[j + 1]])
                    j += 2
                    continue
                out.append(c)
                j += 1
            tokens.append(Token("string", "".join(out), start_line, start_col))
            col += j - i
            i = j
            continue
        for sym in ("<-", "!="):
            if text.startswith(sym, i):
                tokens.append(Token(sym, sym, start_line, start_col))
                i += len(sym)
                col += len(sym)
                break
        else:
            if ch in "{}():,.=+":
                tokens.append(Token(ch, ch, start_line, start_col))
                i += 1
                col += 1
            else:
                raise TextParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(Token("eof", None, line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, expected: str) -> None:
        tok = self.peek()
        found = "end of input" if tok.kind == "eof" else repr(tok.value)
        raise TextParseError(f"expected {expected}, found {found}", tok.line, tok.col)

    def expect(self, kind: str, value: object = None) -> Token:
        tok = self.peek()
        if tok.kind != kind or (value is not None and tok.value != value):
            self.fail(repr(value) if value is not None else kind)
        return self.advance()

    def at(self, kind: str, value: object = None) -> bool:
        tok = self.peek()
        return tok.kind == kind and (value is None or tok.value == value)

    def ident(self, what: str = "identifier") -> str:
        if not self.at("ident"):
            self.fail(what)
        return str(self.advance().value)

    # expressions, loosest binding first

    def expr(self) -> Expr:
        left = self.and_expr()
        while self.at("kw", "or"):
            self.advance()
            left = Binary("or", left, self.and_expr())
        return left

    def and_expr(self) -> Expr:
        left = self.not_expr()
        while self.at("kw", "and"):
            self.advance()
            left = Binary("and", left, self.not_expr())
        return left

    def not_expr(self) -> Expr:
        if self.at("kw", "not"):
            self.advance()
            return Not(self.not_expr())
        return self.cmp_expr()

    def cmp_expr(self) -> Expr:
        left = self.add_expr()
        if self.at("=") or self.at("!="):
            op = str(self.advance().value)
            return Binary(op, left, self.add_expr())
        return left

    def add_expr(self) -> Expr:
        left = self.postfix()
        while self.at("+"):
            self.advance()
            left = Binary("+", left, self.postfix())
        return left

    def postfix(self) -> Expr:
        node = self.primary()
        while self.at("."):
            self.advance()
            name = self.ident("field name")
            if name not in ("id", "name", "type", "source", "target"):
                tok = self.tokens[self.pos - 1]
                raise TextParseError(f"unknown field '.{name}'", tok.line, tok.col)
            node = Field(node, name)
        return node

    def primary(self) -> Expr:
        tok = self.peek()
        if tok.kind == "number" or tok.kind == "string":
            self.advance()
            return Lit(tok.value)  # type: ignore[arg-type]
        if tok.kind == "kw" and tok.value in ("true", "false"):
            self.advance()
            return Lit(tok.value == "true")
        if tok.kind == "ident":
            name = self.ident()
            if self.at("("):
                return self.call(name, tok)
            return Var(name)
        if tok.kind == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        self.fail("expression")
        raise AssertionError  # unreachable

    def call(self, name: str, tok: Token) -> Expr:
        if name not in BUILTINS:
            raise TextParseError(f"unknown builtin '{name}'", tok.line, tok.col)
        self.expect("(")
        args: list[Expr] = []
        if not self.at(")"):
            args.append(self.expr())
            while self.at(","):
                self.advance()
                args.append(self.expr())
        self.expect(")")
        arity, type_positions = BUILTINS[name]
        if len(args) != arity:
            raise TextParseError(
                f"'{name}' takes {arity} argument(s), got {len(args)}", tok.line, tok.col
            )
        for p in type_positions:
            if not isinstance(args[p], Var):
                raise TextParseError(
                    f"argument {p + 1} of '{name}' must be a type name", tok.line, tok.col
                )
        return Call(name, args)

    # structure

    def fieldpath(self) -> str:
        tok = self.peek()
        head = self.ident("binding field")
        if head not in _FIELD_HEADS:
            raise TextParseError(f"illegal binding field '{head}'", tok.line, tok.col)
        if head in ("locator", "metadata"):
            self.expect(".")
            sub = self.ident("field suffix")
            if head == "locator" and sub not in ("lat", "lon", "value"):
                raise TextParseError(f"illegal binding field 'locator.{sub}'", tok.line, tok.col)
            return f"{head}.{sub}"
        return head

    def target(self) -> TargetSpec:
        var = self.ident("target variable")
        self.expect(":")
        type_name = self.ident("target type")
        self.expect("(")
        bindings: list[Binding] = []
        if not self.at(")"):
            while True:
                path = self.fieldpath()
                self.expect("<-")
                bindings.append(Binding(path, self.expr()))
                if not self.at(","):
                    break
                self.advance()
        self.expect(")")
        return TargetSpec(var=var, type=type_name, bindings=bindings)

    def rule(self) -> Rule:
        self.expect("kw", "rule")
        name = self.ident("rule name")
        self.expect("{")
        self.expect("kw", "from")
        source_var = self.ident("source variable")
        self.expect(":")
        source_type = self.ident("source type")
        guard = None
        if self.at("("):
            self.advance()
            guard = self.expr()
            self.expect(")")
        foreach = None
        if self.at("kw", "foreach"):
            self.advance()
            var = self.ident("foreach variable")
            self.expect("kw", "in")
            foreach = (var, self.expr())
        targets: list[TargetSpec] = []
        while self.at("kw", "to"):
            self.advance()
            targets.append(self.target())
        if not targets:
            self.fail("'to'")
        self.expect("}")
        return Rule(name=name, source_var=source_var, source_type=source_type,
                    guard=guard, foreach=foreach, targets=targets)

    def transformation(self) -> TransformationAst:
        self.expect("kw", "transformation")
        name = self.ident("transformation name")
        self.expect("kw", "from")
        source_schema = self.ident("source schema name")
        self.expect("kw", "to")
        target_schema = self.ident("target schema name")
        rules: list[Rule] = []
        while not self.at("eof"):
            rules.append(self.rule())
        return TransformationAst(name=name, source_schema=source_schema,
                                 target_schema=target_schema, rules=rules)


_KIND_FIELDS_REL = {"id", "name", "source", "target", "metadata"}


def _check_binding_kinds(ast: TransformationAst, tgt: MetamodelSchema) -> None:
    for rule in ast.rules:
        for t in rule.targets:
            kind = core_kind_of(tgt, t.type)
            relational = kind_is(kind, CoreKind.RELATIONSHIP)
            for b in t.bindings:
                head = b.field.split(".")[0]
                if relational and head not in _KIND_FIELDS_REL:
                    raise TransformError(
                        f"rule '{rule.name}': binding '{b.field}' is illegal on "
                        f"relationship type '{t.type}'"
                    )
                if not relational and head in ("source", "target"):
                    raise TransformError(
                        f"rule '{rule.name}': binding '{b.field}' requires a "
                        f"relationship type, '{t.type}' is {kind.value}"
                    )
                if head == "locator" and kind is not CoreKind.ENTITY:
                    raise TransformError(
                        f"rule '{rule.name}': locator bindings need an Entity "
                        f"type, '{t.type}' is {kind.value}"
                    )
                if head == "members" and kind is not CoreKind.GROUP:
                    raise TransformError(
                        f"rule '{rule.name}': members binding needs a Group "
                        f"type, '{t.type}' is {kind.value}"
                    )


def parse_transformation(
    text: str,
    schemas: tuple[MetamodelSchema, MetamodelSchema] | None = None,
) -> TransformationAst:
    """Parse DSL source; with `schemas` (source, target) also check types.

    Without schemas only rule-name uniqueness and the syntactic shape are
    enforced; type existence and binding/kind legality then surface when the
    transformation is executed.
    """
    ast = _Parser(_lex(text)).transformation()
    seen: set[str] = set()
    for rule in ast.rules:
        if rule.name in seen:
            raise TransformError(f"duplicate rule name '{rule.name}'")
        seen.add(rule.name)
    if schemas is not None:
        src, tgt = schemas
        for rule in ast.rules:
            if not src.has_type(rule.source_type):
                raise TransformError(
                    f"rule '{rule.name}': unknown source type '{rule.source_type}' "
                    f"in schema '{src.name}'"
                )
            for t in rule.targets:
                if not tgt.has_type(t.type):
                    raise TransformError(
                        f"rule '{rule.name}': unknown target type '{t.type}' "
                        f"in schema '{tgt.name}'"
                    )
        _check_binding_kinds(ast, tgt)
    return ast
