"""Boolean expressions in apostrophe notation.

Grammar (lowest precedence first)::

    expr    := xor   ( "+" xor )*
    xor     := term  ( ("^" | "⊕") term )*
    term    := factor ( ["." | "*" | "·"] factor )*  juxtaposition is AND
    factor  := primary ("'" | "’")*
    primary := VAR | "0" | "1" | "(" expr ")"
             | FUNC "(" expr ( "," expr )* ")"
    FUNC    := not | and | or | xor | nand | nor | xnor

Without an alphabet, variables are single uppercase letters, so ``ABC`` is
``A.B.C``.  With an alphabet that contains multi-character names, the longest
matching name is taken at each position (``QaQb`` is ``Qa.Qb``) and whitespace
or ``.`` may separate operands.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import ExprSyntaxError, MissingVariableError, UnknownVariableError

VarOrder = tuple[str, ...]


class Kind(str, enum.Enum):
    VAR = "VAR"
    CONST = "CONST"
    NOT = "NOT"
    AND = "AND"
    OR = "OR"
    XOR = "XOR"
    XNOR = "XNOR"
    NAND = "NAND"
    NOR = "NOR"


NARY = frozenset({Kind.AND, Kind.OR, Kind.XOR, Kind.XNOR, Kind.NAND, Kind.NOR})
FUNCTIONS = {
    "not": Kind.NOT,
    "and": Kind.AND,
    "or": Kind.OR,
    "xor": Kind.XOR,
    "nand": Kind.NAND,
    "nor": Kind.NOR,
    "xnor": Kind.XNOR,
}


@dataclass(frozen=True)
class Expr:
    kind: Kind
    children: tuple[Expr, ...] = ()
    name: str | None = None
    value: int | None = None

    def __post_init__(self):
        k = self.kind
        if k is Kind.VAR:
            if not self.name:
                raise ValueError("variable name must be non-empty")
        elif k is Kind.CONST:
            if self.value not in (0, 1):
                raise ValueError("constant must be 0 or 1")
        elif k is Kind.NOT:
            if len(self.children) != 1:
                raise ValueError("NOT takes exactly one operand")
        elif len(self.children) < 2:
            raise ValueError(f"{k.value} takes at least two operands")

    def __and__(self, other: Expr) -> Expr:
        return Expr(Kind.AND, (self, other))

    def __or__(self, other: Expr) -> Expr:
        return Expr(Kind.OR, (self, other))

    def __xor__(self, other: Expr) -> Expr:
        return Expr(Kind.XOR, (self, other))

    def __invert__(self) -> Expr:
        return Expr(Kind.NOT, (self,))

    def __str__(self) -> str:
        return render(self)


def var(name: str) -> Expr:
    return Expr(Kind.VAR, name=name)


def const(value: int) -> Expr:
    return Expr(Kind.CONST, value=int(value))


ZERO = const(0)
ONE = const(1)


def not_(e: Expr) -> Expr:
    return Expr(Kind.NOT, (e,))


def op(kind: Kind, *children: Expr) -> Expr:
    return Expr(kind, tuple(children))


def conj(items: Iterable[Expr]) -> Expr:
    """AND of ``items``; the empty product is 1 and a single item stands alone."""
    items = tuple(items)
    if not items:
        return ONE
    return items[0] if len(items) == 1 else Expr(Kind.AND, items)


def disj(items: Iterable[Expr]) -> Expr:
    items = tuple(items)
    if not items:
        return ZERO
    return items[0] if len(items) == 1 else Expr(Kind.OR, items)


def literal(name: str, positive: bool) -> Expr:
    v = var(name)
    return v if positive else not_(v)


def flatten(e: Expr) -> Expr:
    """Merge directly nested AND/AND, OR/OR and XOR/XOR chains."""
    if not e.children:
        return e
    kids = [flatten(c) for c in e.children]
    if e.kind in (Kind.AND, Kind.OR, Kind.XOR):
        merged: list[Expr] = []
        for c in kids:
            merged.extend(c.children if c.kind is e.kind else (c,))
        kids = merged
    return Expr(e.kind, tuple(kids), e.name, e.value)


# --- tokenizer -------------------------------------------------------------

_PUNCT = {
    "+": "OR",
    "^": "XOR",
    "⊕": "XOR",
    ".": "AND",
    "*": "AND",
    "·": "AND",
    "'": "NOT",
    "’": "NOT",
    "(": "(",
    ")": ")",
    ",": ",",
}


@dataclass(frozen=True)
class _Token:
    type: str
    text: str
    pos: int


def _tokenize(text: str, alphabet: Sequence[str] | None) -> list[_Token]:
    names = set(alphabet) if alphabet is not None else None
    multi = names is not None and any(len(n) > 1 for n in names)
    longest = max((len(n) for n in names), default=1) if names else 1
    tokens: list[_Token] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _PUNCT:
            tokens.append(_Token(_PUNCT[ch], ch, i))
            i += 1
            continue
        if ch in "01" and not (multi and _starts_name(text, i, names, longest)):
            tokens.append(_Token("CONST", ch, i))
            i += 1
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            k = j
            while k < len(text) and text[k].isspace():
                k += 1
            if word in FUNCTIONS and k < len(text) and text[k] == "(":
                tokens.append(_Token("FUNC", word, i))
                i = j
                continue
            if multi:
                i = _munch(text, i, j, names, longest, tokens)
                continue
            for p in range(i, j):
                c = text[p]
                if c in "01":
                    tokens.append(_Token("CONST", c, p))
                    continue
                if names is None:
                    if not ("A" <= c <= "Z"):
                        raise ExprSyntaxError(f"unexpected character {c!r}", text, p)
                elif c not in names:
                    raise UnknownVariableError(c, p)
                tokens.append(_Token("VAR", c, p))
            i = j
            continue
        raise ExprSyntaxError(f"unexpected character {ch!r}", text, i)
    tokens.append(_Token("END", "", len(text)))
    return tokens


def _starts_name(text, i, names, longest) -> bool:
    return any(text.startswith(n, i) for n in names if len(n) <= longest)


def _munch(text, i, end, names, longest, tokens) -> int:
    # longest alphabet name at each position inside an identifier run
    while i < end:
        for size in range(min(longest, end - i), 0, -1):
            if text[i:i + size] in names:
                tokens.append(_Token("VAR", text[i:i + size], i))
                i += size
                break
        else:
            if text[i] in "01":
                tokens.append(_Token("CONST", text[i], i))
                i += 1
                continue
            raise UnknownVariableError(text[i:end], i)
    return i


# --- parser ----------------------------------------------------------------

_FACTOR_START = {"VAR", "CONST", "(", "FUNC"}


class _Parser:
    def __init__(self, text: str, tokens: list[_Token]):
        self.text = text
        self.tokens = tokens
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def error(self, message: str):
        t = self.tok
        found = "end of input" if t.type == "END" else repr(t.text)
        raise ExprSyntaxError(f"{message}, found {found}", self.text, t.pos)

    def expect(self, type_: str):
        if self.tok.type != type_:
            self.error(f"expected {type_!r}")
        return self.advance()

    def parse(self) -> Expr:
        e = self.expr()
        if self.tok.type != "END":
            self.error("expected operator")
        return e

    def expr(self) -> Expr:
        items = [self.xor()]
        while self.tok.type == "OR":
            self.advance()
            items.append(self.xor())
        return items[0] if len(items) == 1 else Expr(Kind.OR, tuple(items))

    def xor(self) -> Expr:
        items = [self.term()]
        while self.tok.type == "XOR":
            self.advance()
            items.append(self.term())
        return items[0] if len(items) == 1 else Expr(Kind.XOR, tuple(items))

    def term(self) -> Expr:
        items = [self.factor()]
        while True:
            if self.tok.type == "AND":
                self.advance()
                items.append(self.factor())
            elif self.tok.type in _FACTOR_START:
                items.append(self.factor())
            else:
                break
        return items[0] if len(items) == 1 else Expr(Kind.AND, tuple(items))

    def factor(self) -> Expr:
        e = self.primary()
        while self.tok.type == "NOT":
            self.advance()
            e = not_(e)
        return e

    def primary(self) -> Expr:
        t = self.tok
        if t.type == "VAR":
            self.advance()
            return var(t.text)
        if t.type == "CONST":
            self.advance()
            return const(int(t.text))
        if t.type == "(":
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        if t.type == "FUNC":
            self.advance()
            self.expect("(")
            args = [self.expr()]
            while self.tok.type == ",":
                self.advance()
                args.append(self.expr())
            close = self.expect(")")
            kind = FUNCTIONS[t.text]
            if kind is Kind.NOT and len(args) != 1:
                raise ExprSyntaxError("not() takes one argument", self.text, close.pos)
            if kind is not Kind.NOT and len(args) < 2:
                raise ExprSyntaxError(f"{t.text}() takes at least two arguments", self.text, close.pos)
            return Expr(kind, tuple(args))
        self.error("expected variable, constant or '('")


def parse(text: str, alphabet: Sequence[str] | None = None) -> Expr:
    """Parse ``text`` into an :class:`Expr`.

    Raises :class:`ExprSyntaxError` (with a character position) on malformed
    input and :class:`UnknownVariableError` when ``alphabet`` is given and a
    name outside it is used.
    """
    if not text or not text.strip():
        raise ExprSyntaxError("empty expression", text or "", 0)
    return _Parser(text, _tokenize(text, alphabet)).parse()


# --- rendering -------------------------------------------------------------

def render(e: Expr, compact: bool | None = None) -> str:
    """Inverse of :func:`parse`.

    AND operands are juxtaposed when every variable is a single uppercase
    letter and joined with ``.`` otherwise.
    """
    if compact is None:
        compact = all(len(n) == 1 and "A" <= n <= "Z" for n in variables(e))
    return _render(e, "" if compact else ".")


def _render(e: Expr, sep: str) -> str:
    k = e.kind
    if k is Kind.VAR:
        return e.name
    if k is Kind.CONST:
        return str(e.value)
    if k is Kind.NOT:
        (c,) = e.children
        inner = _render(c, sep)
        if c.kind in (Kind.AND, Kind.OR, Kind.XOR):
            inner = f"({inner})"
        return inner + "'"
    if k is Kind.AND:
        out = ""
        for c in e.children:
            part = _wrap(c, sep, (Kind.AND, Kind.OR, Kind.XOR))
            # keep "C" and "nand(..)" from fusing into one identifier
            glue = "." if not sep and out and out[-1].isalnum() and part[0].islower() else sep
            out = part if not out else out + glue + part
        return out
    if k is Kind.XOR:
        return " ^ ".join(_wrap(c, sep, (Kind.OR, Kind.XOR)) for c in e.children)
    if k is Kind.OR:
        return " + ".join(_wrap(c, sep, (Kind.OR,)) for c in e.children)
    fname = k.value.lower()
    return f"{fname}(" + ", ".join(_render(c, sep) for c in e.children) + ")"


def _wrap(e: Expr, sep: str, parens: tuple[Kind, ...]) -> str:
    s = _render(e, sep)
    return f"({s})" if e.kind in parens else s


# --- semantics -------------------------------------------------------------

def evaluate(e: Expr, assignment: Mapping[str, int]) -> int:
    k = e.kind
    if k is Kind.VAR:
        try:
            return 1 if assignment[e.name] else 0
        except KeyError:
            raise MissingVariableError(e.name) from None
    if k is Kind.CONST:
        return e.value
    vals = [evaluate(c, assignment) for c in e.children]
    if k is Kind.NOT:
        return 1 - vals[0]
    if k is Kind.AND:
        return int(all(vals))
    if k is Kind.OR:
        return int(any(vals))
    if k is Kind.XOR:
        return sum(vals) & 1
    if k is Kind.XNOR:
        return 1 - (sum(vals) & 1)
    if k is Kind.NAND:
        return 1 - int(all(vals))
    if k is Kind.NOR:
        return 1 - int(any(vals))
    raise AssertionError(k)


def variables(e: Expr) -> VarOrder:
    """Distinct variable names in first-appearance order."""
    seen: dict[str, None] = {}

    def walk(x: Expr):
        if x.kind is Kind.VAR:
            seen.setdefault(x.name)
        for c in x.children:
            walk(c)

    walk(e)
    return tuple(seen)
