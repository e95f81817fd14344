"""Surface syntax of the spec language: tokens, AST, parser, printer.

A spec program is a sequence of let-bindings followed by at least one save:

    program  := letdecl* savedecl+
    letdecl  := "let" IDENT "=" expr
    savedecl := "save" STRING expr
    expr     := or
    or       := and ("|" and)*
    and      := cmp ("&" cmp)*
    cmp      := sum (("<=" | "<" | ">=" | ">" | "=") sum)?     ; non-associative
    sum      := prod (("+" | "-") prod)*
    prod     := unary ("*" unary)*
    unary    := "!" unary | atom
    atom     := NUMBER | IDENT | IDENT "(" expr ("," expr)* ")" | "(" expr ")"

Comments run from "#" to end of line. Identifiers that are neither builtins
nor let-bound become free parameters, bound at evaluation time. Comparisons
do not chain: `a < b < c` is a syntax error.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import LexError, ParseError

# Builtin functions with their arities. `channel(i)` selects an input plane;
# the rest are the spatial operators implemented in `spatial`.
BUILTINS: dict[str, int] = {
    "channel": 1,
    "near": 1,
    "interior": 1,
    "touch": 2,
    "dt": 1,
    "gdt": 2,
    "minval": 1,
}

_KEYWORDS = {"let": "LET", "save": "SAVE"}
_SINGLE_OPS = set("!&|+-*<>")


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT NUMBER STRING LPAREN RPAREN COMMA OP LET SAVE EQUALS EOF
    lexeme: str
    line: int
    column: int


def tokenize(source: str) -> list[Token]:
    """Split source into tokens; raises LexError on the first bad character."""
    tokens: list[Token] = []
    line, col = 1, 1
    i = 0
    n = len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and source[i] != "\n":
                i += 1
            continue
        start_col = col
        if ch == '"':
            j = i + 1
            while j < n and source[j] not in '"\n':
                j += 1
            if j >= n or source[j] != '"':
                raise LexError(line, start_col, "unterminated string")
            tokens.append(Token("STRING", source[i + 1 : j], line, start_col))
            col += j + 1 - i
            i = j + 1
            continue
        if ch.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            if j < n and source[j] == "." and j + 1 < n and source[j + 1].isdigit():
                j += 1
                while j < n and source[j].isdigit():
                    j += 1
            tokens.append(Token("NUMBER", source[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            word = source[i:j]
            tokens.append(Token(_KEYWORDS.get(word, "IDENT"), word, line, start_col))
            col += j - i
            i = j
            continue
        if ch in "<>" and i + 1 < n and source[i + 1] == "=":
            tokens.append(Token("OP", ch + "=", line, start_col))
            i += 2
            col += 2
            continue
        if ch == "=":
            tokens.append(Token("EQUALS", "=", line, start_col))
            i += 1
            col += 1
            continue
        if ch in _SINGLE_OPS:
            tokens.append(Token("OP", ch, line, start_col))
            i += 1
            col += 1
            continue
        if ch == "(":
            tokens.append(Token("LPAREN", ch, line, start_col))
            i += 1
            col += 1
            continue
        if ch == ")":
            tokens.append(Token("RPAREN", ch, line, start_col))
            i += 1
            col += 1
            continue
        if ch == ",":
            tokens.append(Token("COMMA", ch, line, start_col))
            i += 1
            col += 1
            continue
        raise LexError(line, start_col, f"unexpected character {ch!r}")
    tokens.append(Token("EOF", "", line, col))
    return tokens


# AST nodes. Positions ride along for error reporting but are excluded from
# equality so printed-and-reparsed programs compare equal structurally.


@dataclass(frozen=True)
class Number:
    value: float
    line: int = field(compare=False, default=0)
    column: int = field(compare=False, default=0)


@dataclass(frozen=True)
class Param:
    name: str
    line: int = field(compare=False, default=0)
    column: int = field(compare=False, default=0)


@dataclass(frozen=True)
class Var:
    name: str
    line: int = field(compare=False, default=0)
    column: int = field(compare=False, default=0)


@dataclass(frozen=True)
class Call:
    func: str
    args: tuple
    line: int = field(compare=False, default=0)
    column: int = field(compare=False, default=0)


@dataclass(frozen=True)
class Not:
    operand: "Expr"
    line: int = field(compare=False, default=0)
    column: int = field(compare=False, default=0)


@dataclass(frozen=True)
class And:
    left: "Expr"
    right: "Expr"
    line: int = field(compare=False, default=0)
    column: int = field(compare=False, default=0)


@dataclass(frozen=True)
class Or:
    left: "Expr"
    right: "Expr"
    line: int = field(compare=False, default=0)
    column: int = field(compare=False, default=0)


@dataclass(frozen=True)
class Arith:
    op: str  # + - *
    left: "Expr"
    right: "Expr"
    line: int = field(compare=False, default=0)
    column: int = field(compare=False, default=0)


@dataclass(frozen=True)
class Cmp:
    op: str  # <= < >= > =
    left: "Expr"
    right: "Expr"
    line: int = field(compare=False, default=0)
    column: int = field(compare=False, default=0)


Expr = Number | Param | Var | Call | Not | And | Or | Arith | Cmp


@dataclass(frozen=True)
class SpecProgram:
    lets: tuple[tuple[str, Expr], ...]
    saves: tuple[tuple[str, Expr], ...]
    params: frozenset[str]


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0
        self.let_names: list[str] = []
        self.params: set[str] = set()

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def error(self, expected: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.peek()
        found = "end of input" if tok.kind == "EOF" else repr(tok.lexeme)
        return ParseError(tok.line, tok.column, expected, found)

    def expect(self, kind: str, expected: str) -> Token:
        if self.peek().kind != kind:
            raise self.error(expected)
        return self.advance()

    def parse_program(self) -> SpecProgram:
        lets: list[tuple[str, Expr]] = []
        saves: list[tuple[str, Expr]] = []
        while self.peek().kind == "LET":
            self.advance()
            name_tok = self.expect("IDENT", "a name after 'let'")
            name = name_tok.lexeme
            if name in BUILTINS:
                raise ParseError(
                    name_tok.line, name_tok.column, "a non-builtin name", repr(name)
                )
            if name in self.let_names:
                raise ParseError(
                    name_tok.line, name_tok.column, "a fresh name (duplicate let)", repr(name)
                )
            if name in self.params:
                raise ParseError(
                    name_tok.line,
                    name_tok.column,
                    "a name not already used as a parameter",
                    repr(name),
                )
            self.expect("EQUALS", "'=' after let name")
            expr = self.parse_expr()
            self.let_names.append(name)
            lets.append((name, expr))
        if self.peek().kind != "SAVE":
            raise self.error("'save'")
        seen_saves: set[str] = set()
        while self.peek().kind == "SAVE":
            self.advance()
            name_tok = self.expect("STRING", "a quoted output name after 'save'")
            if name_tok.lexeme in seen_saves:
                raise ParseError(
                    name_tok.line,
                    name_tok.column,
                    "a fresh output name (duplicate save)",
                    repr(name_tok.lexeme),
                )
            seen_saves.add(name_tok.lexeme)
            saves.append((name_tok.lexeme, self.parse_expr()))
        if self.peek().kind != "EOF":
            raise self.error("'save' or end of input")
        return SpecProgram(tuple(lets), tuple(saves), frozenset(self.params))

    def parse_expr(self) -> Expr:
        return self.parse_or()

    def parse_or(self) -> Expr:
        left = self.parse_and()
        while self.peek().kind == "OP" and self.peek().lexeme == "|":
            tok = self.advance()
            left = Or(left, self.parse_and(), tok.line, tok.column)
        return left

    def parse_and(self) -> Expr:
        left = self.parse_cmp()
        while self.peek().kind == "OP" and self.peek().lexeme == "&":
            tok = self.advance()
            left = And(left, self.parse_cmp(), tok.line, tok.column)
        return left

    def parse_cmp(self) -> Expr:
        left = self.parse_sum()
        tok = self.peek()
        if (tok.kind == "OP" and tok.lexeme in ("<=", "<", ">=", ">")) or tok.kind == "EQUALS":
            self.advance()
            op = "=" if tok.kind == "EQUALS" else tok.lexeme
            return Cmp(op, left, self.parse_sum(), tok.line, tok.column)
        return left

    def parse_sum(self) -> Expr:
        left = self.parse_prod()
        while self.peek().kind == "OP" and self.peek().lexeme in ("+", "-"):
            tok = self.advance()
            left = Arith(tok.lexeme, left, self.parse_prod(), tok.line, tok.column)
        return left

    def parse_prod(self) -> Expr:
        left = self.parse_unary()
        while self.peek().kind == "OP" and self.peek().lexeme == "*":
            tok = self.advance()
            left = Arith("*", left, self.parse_unary(), tok.line, tok.column)
        return left

    def parse_unary(self) -> Expr:
        tok = self.peek()
        if tok.kind == "OP" and tok.lexeme == "!":
            self.advance()
            return Not(self.parse_unary(), tok.line, tok.column)
        return self.parse_atom()

    def parse_atom(self) -> Expr:
        tok = self.peek()
        if tok.kind == "NUMBER":
            self.advance()
            return Number(float(tok.lexeme), tok.line, tok.column)
        if tok.kind == "LPAREN":
            self.advance()
            expr = self.parse_expr()
            self.expect("RPAREN", "')'")
            return expr
        if tok.kind == "IDENT":
            self.advance()
            name = tok.lexeme
            if self.peek().kind == "LPAREN":
                if name not in BUILTINS:
                    raise ParseError(tok.line, tok.column, "a builtin function name", repr(name))
                self.advance()
                args = [self.parse_expr()]
                while self.peek().kind == "COMMA":
                    self.advance()
                    args.append(self.parse_expr())
                self.expect("RPAREN", "')'")
                want = BUILTINS[name]
                if len(args) != want:
                    raise ParseError(
                        tok.line,
                        tok.column,
                        f"{want} argument{'s' if want != 1 else ''} to {name}",
                        f"{len(args)}",
                    )
                return Call(name, tuple(args), tok.line, tok.column)
            if name in BUILTINS:
                raise ParseError(tok.line, tok.column, f"'(' after builtin {name}", "bare name")
            if name in self.let_names:
                return Var(name, tok.line, tok.column)
            self.params.add(name)
            return Param(name, tok.line, tok.column)
        raise self.error("a number, name, or '('")


def parse(tokens: list[Token]) -> SpecProgram:
    return _Parser(tokens).parse_program()


def parse_source(source: str) -> SpecProgram:
    return parse(tokenize(source))


# Pretty printer. Emits minimal parentheses; format_program(parse(s)) reparses
# to a structurally identical program.

_OR, _AND, _CMP, _SUM, _PROD, _UNARY, _ATOM = range(7)

_ARITH_LEVEL = {"+": _SUM, "-": _SUM, "*": _PROD}


def _level(expr: Expr) -> int:
    if isinstance(expr, Or):
        return _OR
    if isinstance(expr, And):
        return _AND
    if isinstance(expr, Cmp):
        return _CMP
    if isinstance(expr, Arith):
        return _ARITH_LEVEL[expr.op]
    if isinstance(expr, Not):
        return _UNARY
    return _ATOM


def _fmt(expr: Expr, min_level: int) -> str:
    level = _level(expr)
    if isinstance(expr, Number):
        # integral values print without the trailing .0 the float repr adds
        text = str(int(expr.value)) if expr.value.is_integer() else repr(expr.value)
    elif isinstance(expr, (Param, Var)):
        text = expr.name
    elif isinstance(expr, Call):
        text = f"{expr.func}({', '.join(_fmt(a, _OR) for a in expr.args)})"
    elif isinstance(expr, Not):
        text = f"!{_fmt(expr.operand, _UNARY)}"
    elif isinstance(expr, Or):
        text = f"{_fmt(expr.left, _OR)} | {_fmt(expr.right, _AND)}"
    elif isinstance(expr, And):
        text = f"{_fmt(expr.left, _AND)} & {_fmt(expr.right, _CMP)}"
    elif isinstance(expr, Cmp):
        text = f"{_fmt(expr.left, _SUM)} {expr.op} {_fmt(expr.right, _SUM)}"
    elif isinstance(expr, Arith):
        # left-associative: the right operand needs parens at the same level
        text = f"{_fmt(expr.left, level)} {expr.op} {_fmt(expr.right, level + 1)}"
    else:  # pragma: no cover - exhaustive over Expr
        raise TypeError(f"unknown expression node {expr!r}")
    if level < min_level:
        return f"({text})"
    return text


def format_program(program: SpecProgram) -> str:
    """Render a program back to source text that reparses identically."""
    lines = [f"let {name} = {_fmt(expr, _OR)}" for name, expr in program.lets]
    lines += [f'save "{name}" {_fmt(expr, _OR)}' for name, expr in program.saves]
    return "\n".join(lines) + "\n"
