"""Tokenizer and recursive-descent parser for the construction language.

Grammar::

    expr    := term (('+' | '-') term)*
    term    := factor ('*' factor)*
    factor  := INT '*' factor | primary
    primary := 'P' '(' INT ')' | 'A' '(' INT ')' | 'pt' | 'empty'
             | 'blowup' '(' expr ';' expr (',' 'codim' '=' INT)? ')'
             | 'fib' '(' expr ';' expr ')'
             | 'atom' '(' STRING (',' 'dim' '=' INT)? ')'
             | IDENT | '(' expr ')'

``k*X`` is k disjoint copies of X.  ``X - Z`` is the scissor difference
and trusts that Z is closed in X.  Scripts are ``;``-terminated statements::

    let X = blowup(P(3); 8*pt, codim=3);
    normalize X;
    equiv X, P(3);
    modl X;
    rational X, dim=3;
    birat X, P(3);
    count X, p=5;
    verify X, primes=2,3,5,7;
    demo lesieutre, points=8;

``#`` starts a comment that runs to the end of the line.
"""

from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .errors import LexError, ParseError, UndefinedNameError
from .ring import ATOM_NAME
from .varieties import (
    Affine, Atom, BlowUp, Complement, Disjoint, Empty, Fibration, Point,
    Product, Projective, Scale, VarietyExpr,
)

KEYWORDS = frozenset({"P", "A", "pt", "empty", "L", "blowup", "fib", "atom", "let", "codim"})
OPERATORS = frozenset("+-*(),;=^")
MAX_PRIME = 97


@dataclass(frozen=True)
class Token:
    kind: str  # INT, IDENT, KW, STRING, OP, EOF
    text: str
    line: int
    col: int
    offset: int = 0

    @property
    def value(self):
        return int(self.text) if self.kind == "INT" else self.text

    def describe(self) -> str:
        if self.kind == "EOF":
            return "end of input"
        return f"{self.text!r}" if self.kind != "STRING" else f'string "{self.text}"'


def tokenize(text: Union[str, bytes]) -> List[Token]:
    """Split ``text`` into tokens, ending with an EOF token.

    Bytes are decoded as UTF-8; undecodable input is a positioned
    :class:`LexError` like any other unrecognized character.
    """
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError as exc:
            prefix = bytes(text[: exc.start]).decode("utf-8", errors="replace")
            line = prefix.count("\n") + 1
            col = len(prefix) - (prefix.rfind("\n") + 1) + 1
            raise LexError(f"invalid UTF-8 byte 0x{text[exc.start]:02x}", line, col) from None

    tokens: List[Token] = []
    i, line, line_start = 0, 1, 0
    n = len(text)
    while i < n:
        ch = text[i]
        col = i - line_start + 1
        if ch == "\n":
            i += 1
            line, line_start = line + 1, i
        elif ch in " \t\r\f\v":
            i += 1
        elif ch == "#":
            while i < n and text[i] != "\n":
                i += 1
        elif ch.isascii() and ch.isdigit():
            j = i
            while j < n and text[j].isascii() and text[j].isdigit():
                j += 1
            tokens.append(Token("INT", text[i:j], line, col, i))
            i = j
        elif ch.isascii() and (ch.isalpha() or ch == "_"):
            j = i
            while j < n and text[j].isascii() and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            tokens.append(Token("KW" if word in KEYWORDS else "IDENT", word, line, col, i))
            i = j
        elif ch == '"':
            j = i + 1
            while j < n and text[j] not in '"\n':
                j += 1
            if j >= n or text[j] != '"':
                raise LexError("unterminated string literal", line, col)
            tokens.append(Token("STRING", text[i + 1:j], line, col, i))
            i = j + 1
        elif ch in OPERATORS or ch == "−":
            tokens.append(Token("OP", "-" if ch == "−" else ch, line, col, i))
            i += 1
        else:
            raise LexError(f"unrecognized character {ch!r}", line, col)
    tokens.append(Token("EOF", "", line, n - line_start + 1, n))
    return tokens


# Script commands.  ``source`` keeps the original text for reporting.

@dataclass(frozen=True)
class Normalize:
    expr: VarietyExpr
    source: str = field(default="", compare=False)


@dataclass(frozen=True)
class Equiv:
    left: VarietyExpr
    right: VarietyExpr
    source: str = field(default="", compare=False)


@dataclass(frozen=True)
class ModL:
    expr: VarietyExpr
    source: str = field(default="", compare=False)


@dataclass(frozen=True)
class Rationality:
    expr: VarietyExpr
    d: int
    source: str = field(default="", compare=False)


@dataclass(frozen=True)
class BiratDiff:
    left: VarietyExpr
    right: VarietyExpr
    source: str = field(default="", compare=False)


@dataclass(frozen=True)
class Count:
    expr: VarietyExpr
    p: int
    source: str = field(default="", compare=False)


@dataclass(frozen=True)
class Verify:
    expr: VarietyExpr
    primes: Tuple[int, ...]
    source: str = field(default="", compare=False)


@dataclass(frozen=True)
class DemoLesieutre:
    points: int
    source: str = field(default="", compare=False)


Command = Union[Normalize, Equiv, ModL, Rationality, BiratDiff, Count, Verify, DemoLesieutre]


@dataclass(frozen=True)
class ScriptProgram:
    bindings: Tuple[Tuple[str, VarietyExpr], ...] = ()
    commands: Tuple[Command, ...] = ()


def is_small_prime(p: int) -> bool:
    return 2 <= p <= MAX_PRIME and all(p % d for d in range(2, int(p ** 0.5) + 1))


class _Parser:
    def __init__(self, text, env=None):
        self.tokens = tokenize(text)
        self.text = bytes(text).decode("utf-8") if isinstance(text, (bytes, bytearray)) else text
        self.pos = 0
        self.env: Dict[str, VarietyExpr] = dict(env or {})
        self.atom_dims: Dict[str, Tuple[Optional[int], Token]] = {}

    # token helpers

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.tok
        return ParseError(message, tok.line, tok.col)

    def at(self, text, kind=None) -> bool:
        tok = self.tok
        return tok.text == text and tok.kind in ((kind,) if kind else ("OP", "KW", "IDENT"))

    def expect(self, text, kind=None, what=None) -> Token:
        if not self.at(text, kind):
            raise self.error(f"expected {what or repr(text)}, found {self.tok.describe()}")
        return self.advance()

    def expect_int(self, what="an integer") -> Token:
        if self.tok.kind != "INT":
            raise self.error(f"expected {what}, found {self.tok.describe()}")
        return self.advance()

    def source_between(self, start: Token) -> str:
        if self.text is None:
            return ""
        end = self.tokens[self.pos - 1] if self.pos else start
        stop = end.offset + len(end.text) + (2 if end.kind == "STRING" else 0)
        return self.text[start.offset:stop].strip()

    # expressions

    def expr(self) -> VarietyExpr:
        acc = self.term()
        open_sum = False
        while self.tok.kind == "OP" and self.tok.text in "+-":
            op = self.advance().text
            rhs = self.term()
            if op == "+":
                acc = Disjoint(acc.parts + (rhs,)) if open_sum else Disjoint((acc, rhs))
                open_sum = True
            else:
                acc = Complement(acc, rhs)
                open_sum = False
        return acc

    def term(self) -> VarietyExpr:
        acc = self.factor()
        while self.at("*", "OP"):
            self.advance()
            acc = Product(acc, self.factor())
        return acc

    def factor(self) -> VarietyExpr:
        if self.tok.kind == "INT":
            k_tok = self.advance()
            if not self.at("*", "OP"):
                raise self.error(
                    f"expected '*' after scale factor {k_tok.text}, found {self.tok.describe()} "
                    "(bare integers are not varieties)")
            self.advance()
            k = k_tok.value
            if k < 1:
                raise self.error("scale factor must be >= 1", k_tok)
            return Scale(k, self.factor())
        return self.primary()

    def dimension(self) -> int:
        self.expect("(", "OP")
        n = self.expect_int("a dimension").value
        self.expect(")", "OP")
        return n

    def primary(self) -> VarietyExpr:
        tok = self.tok
        if tok.kind == "KW":
            word = tok.text
            if word == "P":
                self.advance()
                return Projective(self.dimension())
            if word == "A":
                self.advance()
                return Affine(self.dimension())
            if word == "pt":
                self.advance()
                return Point()
            if word == "empty":
                self.advance()
                return Empty()
            if word == "blowup":
                return self.blowup()
            if word == "fib":
                self.advance()
                self.expect("(", "OP")
                base = self.expr()
                self.expect(";", "OP")
                fiber = self.expr()
                self.expect(")", "OP")
                return Fibration(base, fiber)
            if word == "atom":
                return self.atom()
            if word == "L":
                raise self.error("L is a class literal, not a variety (classes appear only in outputs)")
            raise self.error(f"keyword {word!r} cannot start an expression")
        if tok.kind == "IDENT":
            self.advance()
            if tok.text not in self.env:
                raise UndefinedNameError(f"undefined name {tok.text!r}", tok.line, tok.col)
            return self.env[tok.text]
        if self.at("(", "OP"):
            self.advance()
            inner = self.expr()
            self.expect(")", "OP")
            return inner
        raise self.error(f"expected an expression, found {tok.describe()}")

    def blowup(self) -> BlowUp:
        start = self.advance()
        self.expect("(", "OP")
        ambient = self.expr()
        self.expect(";", "OP")
        center = self.expr()
        codim = None
        if self.at(",", "OP"):
            self.advance()
            self.expect("codim", "KW")
            self.expect("=", "OP")
            codim_tok = self.expect_int("a codimension")
            codim = codim_tok.value
            if codim < 1:
                raise self.error("codim must be >= 1", codim_tok)
        self.expect(")", "OP")
        if codim is None:
            points = isinstance(center, Point) or (
                isinstance(center, Scale) and isinstance(center.inner, Point))
            if not (isinstance(ambient, Projective) and points):
                raise self.error("codim is required unless blowing up P(n) at pt or k*pt", start)
            codim = ambient.n
            if codim < 1:
                raise self.error("cannot blow up P(0) at a point (codim would be 0)", start)
        return BlowUp(ambient, center, codim)

    def atom(self) -> Atom:
        start = self.advance()
        self.expect("(", "OP")
        name_tok = self.tok
        if name_tok.kind != "STRING":
            raise self.error(f"expected an atom name string, found {name_tok.describe()}")
        self.advance()
        name = name_tok.text
        if not ATOM_NAME.match(name) or name == "L":
            raise self.error(f"atom name must be an identifier other than 'L', got {name!r}", name_tok)
        dim = None
        if self.at(",", "OP"):
            self.advance()
            self.expect("dim", "IDENT")
            self.expect("=", "OP")
            dim = self.expect_int("a dimension").value
        self.expect(")", "OP")
        known = self.atom_dims.get(name)
        if known is not None and known[0] != dim:
            first = known[1]
            raise self.error(
                f"atom {name!r} redeclared with dim {dim} (declared with dim {known[0]} at "
                f"{first.line}:{first.col})", start)
        self.atom_dims.setdefault(name, (dim, start))
        return Atom(name, dim)

    def finish(self):
        if self.tok.kind != "EOF":
            raise self.error(f"unexpected {self.tok.describe()} after expression")

    # scripts

    def script(self) -> ScriptProgram:
        bindings: List[Tuple[str, VarietyExpr]] = []
        commands: List[Command] = []
        while self.tok.kind != "EOF":
            if self.at("let", "KW"):
                self.advance()
                name_tok = self.tok
                if name_tok.kind != "IDENT":
                    raise self.error(f"expected a binding name, found {name_tok.describe()}")
                self.advance()
                if name_tok.text in self.env:
                    raise self.error(f"name {name_tok.text!r} is already bound", name_tok)
                self.expect("=", "OP")
                value = self.expr()
                self.expect(";", "OP", "';' after binding")
                self.env[name_tok.text] = value
                bindings.append((name_tok.text, value))
            else:
                commands.append(self.command())
        return ScriptProgram(tuple(bindings), tuple(commands))

    def keyword_int(self, key, what) -> Token:
        self.expect(",", "OP", f"',' before {key}=")
        self.expect(key, "IDENT")
        self.expect("=", "OP")
        return self.expect_int(what)

    def prime(self, tok: Token) -> int:
        if not is_small_prime(tok.value):
            raise self.error(f"{tok.value} is not a prime in [2, {MAX_PRIME}]", tok)
        return tok.value

    def command(self) -> Command:
        start = self.tok
        if start.kind != "IDENT":
            raise self.error(f"expected 'let' or a command, found {start.describe()}")
        word = self.advance().text
        if word == "normalize":
            cmd = Normalize(self.expr())
        elif word == "equiv":
            left = self.expr()
            self.expect(",", "OP")
            cmd = Equiv(left, self.expr())
        elif word == "modl":
            cmd = ModL(self.expr())
        elif word == "rational":
            e = self.expr()
            cmd = Rationality(e, self.keyword_int("dim", "a dimension").value)
        elif word == "birat":
            left = self.expr()
            self.expect(",", "OP")
            cmd = BiratDiff(left, self.expr())
        elif word == "count":
            e = self.expr()
            cmd = Count(e, self.prime(self.keyword_int("p", "a prime")))
        elif word == "verify":
            e = self.expr()
            primes = [self.prime(self.keyword_int("primes", "a prime"))]
            while self.at(",", "OP"):
                self.advance()
                primes.append(self.prime(self.expect_int("a prime")))
            cmd = Verify(e, tuple(primes))
        elif word == "demo":
            self.expect("lesieutre", "IDENT", "demo name 'lesieutre'")
            tok = self.keyword_int("points", "a point count")
            if tok.value < 1:
                raise self.error("demo needs at least one point", tok)
            cmd = DemoLesieutre(tok.value)
        else:
            raise ParseError(f"unknown command {word!r}", start.line, start.col)
        source = self.source_between(start)
        self.expect(";", "OP", "';' after command")
        return replace(cmd, source=source)


def parse_expr(text: Union[str, bytes, Sequence[Token]], env: Optional[Dict[str, VarietyExpr]] = None) -> VarietyExpr:
    """Parse one expression; names resolve through ``env``."""
    if isinstance(text, (list, tuple)):
        parser = _Parser("", env)
        parser.tokens = list(text)
    else:
        parser = _Parser(text, env)
    e = parser.expr()
    parser.finish()
    return e


def parse_script(text: Union[str, bytes]) -> ScriptProgram:
    return _Parser(text).script()


# Polynomial equations for counting problems share the token syntax.

Poly = Dict[Tuple[int, ...], int]


def _padd(a: Poly, b: Poly, sign=1) -> Poly:
    out = dict(a)
    for mono, c in b.items():
        out[mono] = out.get(mono, 0) + sign * c
    return {m: c for m, c in out.items() if c}


def _pmul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            mono = tuple(x + y for x, y in zip(m1, m2))
            out[mono] = out.get(mono, 0) + c1 * c2
    return {m: c for m, c in out.items() if c}


def parse_polynomial(text: str, variables: Sequence[str]) -> Poly:
    """Parse an integer polynomial such as ``"x1*y2 - x3*y0"``.

    Returns a map from exponent tuples (indexed like ``variables``) to
    coefficients.  Supports ``+ - *``, ``^`` with integer exponents,
    parentheses and unary minus.
    """
    index = {name: i for i, name in enumerate(variables)}
    nvars = len(variables)
    one = {(0,) * nvars: 1}
    parser = _Parser(text)

    def poly_expr() -> Poly:
        sign = 1
        if parser.at("-", "OP"):
            parser.advance()
            sign = -1
        acc = _padd({}, poly_term(), sign)
        while parser.tok.kind == "OP" and parser.tok.text in "+-":
            op = parser.advance().text
            acc = _padd(acc, poly_term(), 1 if op == "+" else -1)
        return acc

    def poly_term() -> Poly:
        acc = poly_factor()
        while parser.at("*", "OP"):
            parser.advance()
            acc = _pmul(acc, poly_factor())
        return acc

    def poly_factor() -> Poly:
        tok = parser.tok
        if tok.kind == "INT":
            parser.advance()
            base = {(0,) * nvars: tok.value} if tok.value else {}
        elif tok.kind in ("IDENT", "KW"):
            if tok.text not in index:
                raise parser.error(
                    f"unknown variable {tok.text!r}; ambient coordinates are {', '.join(variables)}")
            parser.advance()
            mono = [0] * nvars
            mono[index[tok.text]] = 1
            base = {tuple(mono): 1}
        elif parser.at("(", "OP"):
            parser.advance()
            base = poly_expr()
            parser.expect(")", "OP")
        elif parser.at("-", "OP"):
            parser.advance()
            return _padd({}, poly_factor(), -1)
        else:
            raise parser.error(f"expected a polynomial term, found {tok.describe()}")
        if parser.at("^", "OP"):
            parser.advance()
            exp = parser.expect_int("an exponent").value
            result = one
            for _ in range(exp):
                result = _pmul(result, base)
            return result
        return base

    poly = poly_expr()
    parser.finish()
    return poly
