"""Parsers for the text forms of ordinals, words, WPO terms and iterated powersets.

Ordinals::

    sum  := prod ('+' prod)*
    prod := atom ('*' NAT)?
    atom := 'w' ('^' atom)? | NAT | '(' sum ')'

Words::

    seq  := item+
    item := LETTER | '(' seq ')^w'
"""

from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Optional

from finseq import ordinal as o
from finseq.canon import Q
from finseq.ordinal import Ordinal
from finseq.words import EPS, Cat, Lit, OmegaPow, WordTerm, normalize
from finseq.wqo import (
    H,
    Base,
    DisjointUnion,
    LexProduct,
    OrderedSum,
    PfinNE,
    Pfin,
    PosetSpec,
    Product,
    Singleton,
    Star,
    WpoTerm,
)

__all__ = ["ParseError", "parse_ordinal", "parse_word", "parse_poset", "load_poset", "parse_term", "parse_pk"]


class ParseError(ValueError):
    """Syntax error with the offending position."""

    def __init__(self, msg: str, text: str, pos: int):
        self.msg, self.text, self.pos = msg, text, pos
        super().__init__(f"{msg} at position {pos}")

    def caret(self) -> str:
        return f"{self.text}\n{' ' * self.pos}^"


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(ω|ε|@[^\s(),{}]+|\S))")


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.toks: list[tuple[str, int]] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None or m.end() == pos:
                break
            if m.lastindex is None:
                break
            self.toks.append((m.group(m.lastindex), m.start(m.lastindex)))
            pos = m.end()
        self.i = 0

    def peek(self) -> Optional[str]:
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def pos(self) -> int:
        return self.toks[self.i][1] if self.i < len(self.toks) else len(self.text)

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            self.error("unexpected end of input")
        self.i += 1
        return tok

    def expect(self, tok: str):
        if self.peek() != tok:
            self.error(f"expected {tok!r}")
        self.i += 1

    def error(self, msg: str):
        raise ParseError(msg, self.text, self.pos())

    def done(self):
        if self.peek() is not None:
            self.error(f"unexpected {self.peek()!r}")


# -- ordinals --------------------------------------------------------------------


def parse_ordinal(text: str) -> Ordinal:
    lx = _Lexer(text)
    if lx.peek() is None:
        lx.error("empty ordinal")
    out = _ord_sum(lx)
    lx.done()
    return out


def _ord_sum(lx) -> Ordinal:
    out = _ord_prod(lx)
    while lx.peek() == "+":
        lx.take()
        out = o.ord_add(out, _ord_prod(lx))
    return out


def _ord_prod(lx) -> Ordinal:
    out = _ord_atom(lx)
    while lx.peek() == "*":
        lx.take()
        tok = lx.peek()
        if tok is None or not tok.isdigit():
            lx.error("expected a natural number after '*'")
        out = o.ord_mul(out, int(lx.take()))
    return out


def _ord_atom(lx) -> Ordinal:
    tok = lx.peek()
    if tok in ("w", "ω"):
        lx.take()
        if lx.peek() == "^":
            lx.take()
            return o.omega_pow(_ord_atom(lx))
        return o.OMEGA
    if tok is not None and tok.isdigit():
        return o.Ordinal.finite(int(lx.take()))
    if tok == "(":
        lx.take()
        out = _ord_sum(lx)
        lx.expect(")")
        return out
    lx.error("expected 'w', a number or '('")


# -- words -----------------------------------------------------------------------


def parse_word(text: str, alphabet: Optional[PosetSpec] = None) -> WordTerm:
    """Parse a word term; letters must belong to ``alphabet`` when one is given."""
    lx = _Lexer(text)
    if lx.peek() in ("ε", "eps") and len(lx.toks) == 1:
        return EPS
    if lx.peek() is None:
        lx.error("empty word")
    out = _word_seq(lx, alphabet)
    lx.done()
    return normalize(out)


def _word_seq(lx, alphabet) -> WordTerm:
    parts = []
    while lx.peek() not in (None, ")"):
        parts.append(_word_item(lx, alphabet))
    if not parts:
        lx.error("empty sequence")
    return Cat(tuple(parts))


def _word_item(lx, alphabet) -> WordTerm:
    tok = lx.peek()
    if tok == "(":
        lx.take()
        body = _word_seq(lx, alphabet)
        lx.expect(")")
        lx.expect("^")
        if lx.peek() not in ("w", "ω"):
            lx.error("expected 'w' after '^'")
        lx.take()
        return OmegaPow(body)
    if tok is not None and (tok[0].isalnum() or tok[0] == "_"):
        if alphabet is not None and tok not in alphabet:
            lx.error(f"unknown letter {tok!r}")
        lx.take()
        return Lit(tok)
    lx.error("expected a letter or '('")


# -- posets ------------------------------------------------------------------------


def parse_poset(text: str) -> PosetSpec:
    """A poset from JSON, or one of the names ``chainN`` / ``antichainN``."""
    m = re.fullmatch(r"\s*(chain|antichain)(\d+)\s*", text)
    if m:
        n = int(m.group(2))
        return PosetSpec.chain(n) if m.group(1) == "chain" else PosetSpec.antichain(n)
    try:
        return PosetSpec.from_json(text)
    except (json.JSONDecodeError, KeyError, TypeError) as e:
        raise ParseError(f"bad poset JSON ({e})", text, 0) from None


def load_poset(path: str) -> PosetSpec:
    spec = parse_poset(Path(path).read_text())
    spec.name = spec.name or f"@{path}"
    return spec


# -- WPO terms ------------------------------------------------------------------------

_UNARY = {"Star": Star, "Pfin": Pfin, "PfinNE": PfinNE}
_NARY = {"DisjointUnion": DisjointUnion, "Product": Product, "LexProduct": LexProduct, "OrderedSum": OrderedSum}


def parse_term(text: str) -> WpoTerm:
    """Constructor syntax, e.g. ``Pfin(H(w^w))`` or ``Star(Base(chain2))``."""
    lx = _Lexer(text)
    out = _term(lx)
    lx.done()
    return out


def _term(lx) -> WpoTerm:
    name = lx.take()
    if name == "Singleton":
        if lx.peek() == "(":
            lx.take()
            lx.expect(")")
        return Singleton()
    if name == "H":
        lx.expect("(")
        depth, start = 1, lx.i
        while depth:
            tok = lx.take()
            depth += tok == "("
            depth -= tok == ")"
        sub = lx.text[lx.toks[start][1] : lx.toks[lx.i - 1][1]]
        try:
            return H(parse_ordinal(sub))
        except ValueError as e:
            raise ParseError(str(e), lx.text, lx.toks[start][1]) from None
    if name == "Base":
        lx.expect("(")
        tok = lx.take()
        if tok.startswith("@"):
            spec = load_poset(tok[1:])
        else:
            spec = parse_poset(tok)
        lx.expect(")")
        return Base(spec)
    if name in _UNARY:
        lx.expect("(")
        inner = _term(lx)
        lx.expect(")")
        return _UNARY[name](inner)
    if name in _NARY:
        lx.expect("(")
        parts = [_term(lx)]
        while lx.peek() == ",":
            lx.take()
            parts.append(_term(lx))
        lx.expect(")")
        return _NARY[name](tuple(parts))
    lx.i -= 1
    lx.error(f"unknown constructor {name!r}")


# -- iterated powersets ------------------------------------------------------------------


def parse_pk(text: str, tagged: bool = True):
    """Nested braces over letters, e.g. ``{a, {b,c}}``.

    With ``tagged`` set, set members are wrapped in :class:`~finseq.canon.Q`
    with their inferred level; otherwise plain nested frozensets are returned.
    """
    lx = _Lexer(text)
    out, _ = _pk(lx, tagged)
    lx.done()
    return out


def _pk(lx, tagged):
    tok = lx.peek()
    if tok == "{":
        lx.take()
        elems = []
        while lx.peek() != "}":
            elems.append(_pk(lx, tagged))
            if lx.peek() == ",":
                lx.take()
            elif lx.peek() != "}":
                lx.error("expected ',' or '}'")
        lx.take()
        if not elems:
            return frozenset(), 1
        lvl = 1 + max(l for _, l in elems)
        if tagged:
            return frozenset(Q(l, e) for e, l in elems), lvl
        return frozenset(e for e, _ in elems), lvl
    if tok is not None and (tok[0].isalnum() or tok[0] == "_"):
        return lx.take(), 0
    lx.error("expected a letter or '{'")
