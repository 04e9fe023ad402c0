"""Ordinals below epsilon_0 in Cantor normal form.

An :class:`Ordinal` is an immutable tuple of ``(exponent, coefficient)`` pairs
with strictly decreasing exponents, each exponent itself an :class:`Ordinal`.
Construction always normalizes, so equal values share one representation and
``==``/``hash`` are structural.

Python ``int`` values are accepted wherever an ordinal is expected.
"""

from __future__ import annotations

from functools import total_ordering
from typing import Iterable, Optional, Tuple, Union

__all__ = [
    "Ordinal",
    "ZERO",
    "ONE",
    "OMEGA",
    "as_ordinal",
    "compare",
    "nat_add",
    "nat_mul",
    "nat_sum",
    "nat_prod",
    "ord_add",
    "ord_mul",
    "ord_sum",
    "omega_pow",
    "two_pow",
    "minus_one_plus",
    "successor_split",
    "is_epsilon_plus_finite",
]

OrdinalLike = Union["Ordinal", int]


@total_ordering
class Ordinal:
    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Iterable[Tuple[OrdinalLike, int]] = ()):
        merged: list[list] = []
        for exp, coeff in terms:
            exp = as_ordinal(exp)
            coeff = int(coeff)
            if coeff < 0:
                raise ValueError("negative coefficient")
            if coeff == 0:
                continue
            merged.append([exp, coeff])
        # sort descending and merge equal exponents so any input list is accepted
        merged.sort(key=lambda t: _Key(t[0]), reverse=True)
        out: list[tuple[Ordinal, int]] = []
        for exp, coeff in merged:
            if out and out[-1][0] == exp:
                out[-1] = (exp, out[-1][1] + coeff)
            else:
                out.append((exp, coeff))
        self.terms: Tuple[Tuple[Ordinal, int], ...] = tuple(out)
        self._hash = None

    @classmethod
    def _raw(cls, terms: Tuple[Tuple["Ordinal", int], ...]) -> "Ordinal":
        # trusted path: terms already canonical
        obj = cls.__new__(cls)
        obj.terms = terms
        obj._hash = None
        return obj

    @classmethod
    def finite(cls, n: int) -> "Ordinal":
        if n < 0:
            raise ValueError("ordinals are non-negative")
        if n == 0:
            return ZERO
        return cls._raw(((ZERO, n),))

    # -- structure queries -------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_finite(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.terms[0][0].is_zero())

    def __int__(self) -> int:
        if not self.is_finite():
            raise ValueError(f"{self} is infinite")
        return self.terms[0][1] if self.terms else 0

    def is_successor(self) -> bool:
        return bool(self.terms) and self.terms[-1][0].is_zero()

    def is_limit(self) -> bool:
        return bool(self.terms) and not self.terms[-1][0].is_zero()

    def is_omega_power(self) -> bool:
        """True for 1, w, w^2, ..., i.e. a single term with coefficient 1."""
        return len(self.terms) == 1 and self.terms[0][1] == 1

    def leading_exponent(self) -> "Ordinal":
        if not self.terms:
            raise ValueError("zero has no leading exponent")
        return self.terms[0][0]

    def finite_part(self) -> int:
        if self.terms and self.terms[-1][0].is_zero():
            return self.terms[-1][1]
        return 0

    def infinite_part(self) -> "Ordinal":
        if self.terms and self.terms[-1][0].is_zero():
            return Ordinal._raw(self.terms[:-1])
        return self

    def expanded_exponents(self) -> list["Ordinal"]:
        """Exponents of ``w^g0 + w^g1 + ...`` with coefficients unrolled."""
        out = []
        for exp, coeff in self.terms:
            out.extend([exp] * coeff)
        return out

    def size(self) -> int:
        """Total number of CNF terms, counting nested exponents."""
        return sum(1 + exp.size() for exp, _ in self.terms)

    # -- protocol ------------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, int):
            other = as_ordinal(other) if other >= 0 else None
        if not isinstance(other, Ordinal):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.terms)
        return self._hash

    def __lt__(self, other):
        if isinstance(other, int):
            if other < 0:
                return False
            other = as_ordinal(other)
        if not isinstance(other, Ordinal):
            return NotImplemented
        return _cmp(self, other) < 0

    def __add__(self, other):
        return ord_add(self, other)

    def __radd__(self, other):
        return ord_add(other, self)

    def __mul__(self, other):
        return ord_mul(self, other)

    def __rmul__(self, other):
        return ord_mul(other, self)

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"Ordinal({format_ordinal(self)!r})"

    def __str__(self):
        return format_ordinal(self)


class _Key:
    """Sort key wrapper so lists of ordinals can be sorted with ``sorted``."""

    __slots__ = ("o",)

    def __init__(self, o):
        self.o = o

    def __lt__(self, other):
        return _cmp(self.o, other.o) < 0

    def __eq__(self, other):
        return self.o == other.o


def _cmp(a: Ordinal, b: Ordinal) -> int:
    if a is b:
        return 0
    for (ea, ca), (eb, cb) in zip(a.terms, b.terms):
        c = _cmp(ea, eb)
        if c:
            return c
        if ca != cb:
            return -1 if ca < cb else 1
    la, lb = len(a.terms), len(b.terms)
    return (la > lb) - (la < lb)


ZERO = Ordinal._raw(())
ONE = Ordinal._raw(((ZERO, 1),))
OMEGA = Ordinal._raw(((ONE, 1),))


def as_ordinal(x: OrdinalLike) -> Ordinal:
    if isinstance(x, Ordinal):
        return x
    if isinstance(x, bool) or not isinstance(x, int):
        raise TypeError(f"not an ordinal: {x!r}")
    return Ordinal.finite(x)


def compare(a: OrdinalLike, b: OrdinalLike) -> int:
    """Return -1, 0 or 1 as ``a`` is less than, equal to or greater than ``b``."""
    return _cmp(as_ordinal(a), as_ordinal(b))


# -- natural (Hessenberg) operations ------------------------------------------


def nat_add(a: OrdinalLike, b: OrdinalLike) -> Ordinal:
    a, b = as_ordinal(a), as_ordinal(b)
    if not a.terms:
        return b
    if not b.terms:
        return a
    return Ordinal(a.terms + b.terms)


def nat_mul(a: OrdinalLike, b: OrdinalLike) -> Ordinal:
    a, b = as_ordinal(a), as_ordinal(b)
    if not a.terms or not b.terms:
        return ZERO
    if a == ONE:
        return b
    if b == ONE:
        return a
    return Ordinal([(nat_add(ea, eb), ca * cb) for ea, ca in a.terms for eb, cb in b.terms])


def nat_sum(items: Iterable[OrdinalLike]) -> Ordinal:
    out = ZERO
    for x in items:
        out = nat_add(out, x)
    return out


def nat_prod(items: Iterable[OrdinalLike]) -> Ordinal:
    out = ONE
    for x in items:
        out = nat_mul(out, x)
    return out


# -- ordinary operations ------------------------------------------------------


def ord_add(a: OrdinalLike, b: OrdinalLike) -> Ordinal:
    a, b = as_ordinal(a), as_ordinal(b)
    if not b.terms:
        return a
    if not a.terms:
        return b
    lead, lead_c = b.terms[0]
    keep = []
    for exp, coeff in a.terms:
        c = _cmp(exp, lead)
        if c > 0:
            keep.append((exp, coeff))
        elif c == 0:
            keep.append((exp, coeff + lead_c))
            return Ordinal._raw(tuple(keep) + b.terms[1:])
        else:
            break
    return Ordinal._raw(tuple(keep) + b.terms)


def ord_sum(items: Iterable[OrdinalLike]) -> Ordinal:
    out = ZERO
    for x in items:
        out = ord_add(out, x)
    return out


def ord_mul(a: OrdinalLike, b: OrdinalLike) -> Ordinal:
    a, b = as_ordinal(a), as_ordinal(b)
    if not a.terms or not b.terms:
        return ZERO
    lead, lead_c = a.terms[0]
    out = ZERO
    for exp, coeff in b.terms:
        if exp.is_zero():
            piece = Ordinal._raw(((lead, lead_c * coeff),) + a.terms[1:])
        else:
            piece = Ordinal._raw(((ord_add(lead, exp), coeff),))
        out = ord_add(out, piece)
    return out


# -- exponentials -------------------------------------------------------------


# 2^n for larger finite n would take minutes and gigabytes to build
MAX_FINITE_EXPONENT = 1 << 24


def omega_pow(e: OrdinalLike) -> Ordinal:
    return Ordinal._raw(((as_ordinal(e), 1),))


def minus_one_plus(b: OrdinalLike) -> Ordinal:
    """Left subtraction of one: ``b - 1`` for finite ``b``, ``b`` itself otherwise."""
    b = as_ordinal(b)
    if b.is_zero():
        raise ValueError("-1 + 0 is undefined")
    if b.is_finite():
        return Ordinal.finite(int(b) - 1)
    return b


def two_pow(b: OrdinalLike) -> Ordinal:
    """Ordinal exponentiation ``2^b``.

    Writing ``b = w*g + n`` with ``n`` finite, ``2^b = (2^w)^g * 2^n = w^g * 2^n``;
    the exponents of ``g`` are those of the infinite part of ``b`` with one
    subtracted on the left.
    """
    b = as_ordinal(b)
    n = b.finite_part()
    if n > MAX_FINITE_EXPONENT:
        raise OverflowError(f"2^{n} is too large to write out")
    inf = b.infinite_part()
    gamma = Ordinal._raw(tuple((minus_one_plus(e), c) for e, c in inf.terms))
    return Ordinal._raw(((gamma, 2**n),))


def successor_split(b: OrdinalLike) -> Tuple[bool, Optional[Ordinal]]:
    b = as_ordinal(b)
    if not b.is_successor():
        return False, None
    *rest, (_, c) = b.terms
    if c > 1:
        rest.append((ZERO, c - 1))
    return True, Ordinal._raw(tuple(rest))


def is_epsilon_plus_finite(b: OrdinalLike) -> bool:
    """Whether ``b = eps + k`` for an epsilon number ``eps``.

    No epsilon number is representable here (every value is below epsilon_0),
    so this is always false; it exists so the corresponding branch of the
    Higman type function stays explicit.
    """
    b = as_ordinal(b)
    inf = b.infinite_part()
    # eps = w^eps would need a single term whose exponent equals the whole value
    return len(inf.terms) == 1 and inf.terms[0][1] == 1 and inf.terms[0][0] == inf


# -- printing -----------------------------------------------------------------


def format_ordinal(x: Ordinal) -> str:
    if not x.terms:
        return "0"
    parts = []
    for exp, coeff in x.terms:
        if exp.is_zero():
            parts.append(str(coeff))
            continue
        if exp == ONE:
            base = "w"
        elif exp.is_finite() or exp == OMEGA:
            base = f"w^{exp}"
        else:
            base = f"w^({exp})"
        parts.append(base if coeff == 1 else f"{base}*{coeff}")
    return " + ".join(parts)
