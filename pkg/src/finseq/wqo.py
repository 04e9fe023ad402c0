"""Well partial orders described by terms, and the H family of Abriola et al.

Elements are plain Python values whose shape mirrors the term:

=================  ===========================================
term               element
=================  ===========================================
``Base``           an atom of the poset
``Singleton``      ``()``
``DisjointUnion``  ``(index, element)``
``OrderedSum``     ``(index, element)``
``Product``        tuple with one entry per factor
``LexProduct``     tuple with one entry per factor
``Star``           tuple (a finite word)
``Pfin``/``PfinNE`` frozenset
``H(beta)``        depends on the defining clause, see ``h_clause``
=================  ===========================================

In a ``LexProduct`` the *last* factor is the most significant one; with that
convention the type of ``LexProduct(t0, ..., tr)`` is bounded by the ordinary
product ``o(t0) * ... * o(tr)`` and the H family has the right types.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Hashable, Iterable, NamedTuple, Sequence, Tuple

from finseq import ordinal as o
from finseq.ordinal import OMEGA, ONE, ZERO, Ordinal, as_ordinal

__all__ = [
    "PosetSpec",
    "WpoTerm",
    "Base",
    "Singleton",
    "DisjointUnion",
    "Product",
    "LexProduct",
    "OrderedSum",
    "Star",
    "PfinNE",
    "Pfin",
    "H",
    "ShapeError",
    "OEval",
    "ElementStream",
    "leq_elem",
    "is_valid",
    "o_eval",
    "h_clause",
    "h_expand",
    "h_embed",
    "enumerate_elements",
    "sample_below",
    "is_finite_term",
    "format_term",
    "TermOrder",
]


class ShapeError(ValueError):
    """An element does not have the shape required by its term."""


# -- finite quasi-orders ---------------------------------------------------------


class PosetSpec:
    """A finite quasi-order given by generating pairs ``a <= b``.

    The relation is closed under reflexivity and transitivity on load;
    equivalent atoms are allowed and are identified by :meth:`classes`.
    """

    def __init__(self, elements: Iterable[Hashable], le: Iterable[Tuple[Hashable, Hashable]] = (), name: str | None = None):
        self.elements = tuple(dict.fromkeys(elements))
        index = {x: i for i, x in enumerate(self.elements)}
        n = len(self.elements)
        reach = [[i == j for j in range(n)] for i in range(n)]
        for a, b in le:
            if a not in index or b not in index:
                raise ValueError(f"unknown element in pair {(a, b)!r}")
            reach[index[a]][index[b]] = True
        for k in range(n):
            rk = reach[k]
            for i in range(n):
                if reach[i][k]:
                    ri = reach[i]
                    for j in range(n):
                        if rk[j]:
                            ri[j] = True
        self._le = frozenset(
            (self.elements[i], self.elements[j]) for i in range(n) for j in range(n) if reach[i][j]
        )
        self.name = name

    @classmethod
    def chain(cls, n: int) -> "PosetSpec":
        names = [chr(ord("a") + i) for i in range(n)]
        return cls(names, zip(names, names[1:]), name=f"chain{n}")

    @classmethod
    def antichain(cls, n: int) -> "PosetSpec":
        return cls([chr(ord("a") + i) for i in range(n)], name=f"antichain{n}")

    @classmethod
    def from_json(cls, data) -> "PosetSpec":
        if isinstance(data, (str, bytes)):
            data = json.loads(data)
        return cls(data["elements"], [tuple(p) for p in data.get("le", [])])

    def to_json(self) -> str:
        pairs = sorted([a, b] for a, b in self._le if a != b)
        return json.dumps({"elements": list(self.elements), "le": pairs})

    def leq(self, a, b) -> bool:
        return a == b or (a, b) in self._le

    def relation(self) -> frozenset:
        return self._le

    def classes(self) -> list[frozenset]:
        seen, out = set(), []
        for x in self.elements:
            if x in seen:
                continue
            cls_ = frozenset(y for y in self.elements if self.leq(x, y) and self.leq(y, x))
            seen |= cls_
            out.append(cls_)
        return out

    def __contains__(self, x):
        return x in self.elements

    def __len__(self):
        return len(self.elements)

    def __eq__(self, other):
        return isinstance(other, PosetSpec) and self.elements == other.elements and self._le == other._le

    def __hash__(self):
        return hash((self.elements, self._le))

    def __repr__(self):
        return f"PosetSpec({self.name or self.to_json()})"


# -- terms ---------------------------------------------------------------------


class WpoTerm:
    """Base class of the term constructors."""


@dataclass(frozen=True)
class Base(WpoTerm):
    poset: PosetSpec


@dataclass(frozen=True)
class Singleton(WpoTerm):
    pass


def _nonempty(parts, what):
    if not parts:
        raise ValueError(f"{what} needs at least one part")
    for p in parts:
        if not isinstance(p, WpoTerm):
            raise TypeError(f"{what} parts must be terms, got {p!r}")


@dataclass(frozen=True)
class DisjointUnion(WpoTerm):
    parts: Tuple[WpoTerm, ...]

    def __post_init__(self):
        _nonempty(self.parts, "DisjointUnion")


@dataclass(frozen=True)
class Product(WpoTerm):
    parts: Tuple[WpoTerm, ...]

    def __post_init__(self):
        _nonempty(self.parts, "Product")


@dataclass(frozen=True)
class LexProduct(WpoTerm):
    parts: Tuple[WpoTerm, ...]

    def __post_init__(self):
        _nonempty(self.parts, "LexProduct")


@dataclass(frozen=True)
class OrderedSum(WpoTerm):
    parts: Tuple[WpoTerm, ...]

    def __post_init__(self):
        _nonempty(self.parts, "OrderedSum")


@dataclass(frozen=True)
class Star(WpoTerm):
    inner: WpoTerm


@dataclass(frozen=True)
class PfinNE(WpoTerm):
    inner: WpoTerm


@dataclass(frozen=True)
class Pfin(WpoTerm):
    inner: WpoTerm


@dataclass(frozen=True)
class H(WpoTerm):
    beta: Ordinal

    def __post_init__(self):
        object.__setattr__(self, "beta", as_ordinal(self.beta))
        if self.beta.is_zero():
            raise ValueError("H(beta) needs beta >= 1")


def format_term(t: WpoTerm) -> str:
    if isinstance(t, Base):
        return f"Base({t.poset.name or t.poset.to_json()})"
    if isinstance(t, Singleton):
        return "Singleton"
    if isinstance(t, H):
        return f"H({t.beta})"
    if isinstance(t, (Star, PfinNE, Pfin)):
        return f"{type(t).__name__}({format_term(t.inner)})"
    return f"{type(t).__name__}({', '.join(format_term(p) for p in t.parts)})"


# -- the H family ------------------------------------------------------------------


def _power_factors(g: Ordinal) -> list[Ordinal]:
    """Exponents ``d_i`` with ``H(w^g)`` the lexicographic product of ``H(w^(w^d_i))``."""
    return g.expanded_exponents()


@lru_cache(maxsize=None)
def h_clause(beta: Ordinal):
    """Which defining clause builds ``H(beta)``.

    Returns one of ``("point",)``, ``("omega",)``, ``("sum", lam)`` (an ordered
    sum of ``H(w^d)`` over ``d < lam``), ``("lex", factors)`` or
    ``("union", components)`` where the lists hold the betas of the parts.
    """
    beta = as_ordinal(beta)
    if beta.is_zero():
        raise ValueError("H(0) is empty")
    if beta == ONE:
        return ("point",)
    if not beta.is_omega_power():
        return ("union", tuple(o.omega_pow(e) for e in beta.expanded_exponents()))
    g = beta.leading_exponent()
    if g == ONE:
        return ("omega",)
    if g.is_omega_power():
        return ("sum", g)
    return ("lex", tuple(o.omega_pow(o.omega_pow(d)) for d in _power_factors(g)))


def h_expand(beta) -> WpoTerm:
    """One-step expansion of ``H(beta)`` for the union and product clauses."""
    clause = h_clause(as_ordinal(beta))
    if clause[0] == "union":
        return DisjointUnion(tuple(H(b) for b in clause[1]))
    if clause[0] == "lex":
        return LexProduct(tuple(H(b) for b in clause[1]))
    return H(beta)


def _h_valid(beta: Ordinal, x) -> bool:
    clause = h_clause(beta)
    kind = clause[0]
    if kind == "point":
        return x == ()
    if kind == "omega":
        return (
            isinstance(x, tuple)
            and len(x) == 2
            and all(isinstance(v, int) and not isinstance(v, bool) for v in x)
            and 0 <= x[1] < x[0]
        )
    if not isinstance(x, tuple):
        return False
    if kind == "sum":
        return len(x) == 2 and isinstance(x[0], Ordinal) and x[0] < clause[1] and _h_valid(o.omega_pow(x[0]), x[1])
    if kind == "lex":
        return len(x) == len(clause[1]) and all(_h_valid(b, v) for b, v in zip(clause[1], x))
    return (
        len(x) == 2
        and isinstance(x[0], int)
        and 0 <= x[0] < len(clause[1])
        and _h_valid(clause[1][x[0]], x[1])
    )


def _h_leq(beta: Ordinal, x, y) -> bool:
    clause = h_clause(beta)
    kind = clause[0]
    if kind == "point":
        return True
    if kind == "omega":
        return x[0] < y[0] or x == y
    if kind == "sum":
        if x[0] != y[0]:
            return x[0] < y[0]
        return _h_leq(o.omega_pow(x[0]), x[1], y[1])
    if kind == "lex":
        for b, u, v in reversed(list(zip(clause[1], x, y))):
            if u != v:
                return _h_leq(b, u, v)
        return True
    return x[0] == y[0] and _h_leq(clause[1][x[0]], x[1], y[1])


def _h_type(beta: Ordinal) -> Ordinal:
    """Type of ``H(beta)`` computed clause by clause."""
    clause = h_clause(beta)
    kind = clause[0]
    if kind == "point":
        return ONE
    if kind == "omega":
        # sum over k < w of antichains of size k
        return OMEGA
    if kind == "sum":
        # sum over d < lam of w^d, lam a limit
        return o.omega_pow(clause[1])
    if kind == "lex":
        return o.ord_sum([]) if not clause[1] else _ord_prod(_h_type(b) for b in clause[1])
    return o.nat_sum(_h_type(b) for b in clause[1])


def _ord_prod(xs: Iterable[Ordinal]) -> Ordinal:
    out = ONE
    for x in xs:
        out = o.ord_mul(out, x)
    return out


# embeddings H(b) -> H(b2)


def _as_factors(g: Ordinal, x) -> list:
    n = len(_power_factors(g))
    if n == 0:
        return []
    if n == 1:
        return [x]
    return list(x)


def _from_factors(g: Ordinal, xs: list):
    n = len(_power_factors(g))
    if n == 0:
        return ()
    if n == 1:
        return xs[0]
    return tuple(xs)


def _factor_default(d: Ordinal):
    return (1, 0) if d.is_zero() else (ZERO, ())


def _into_factor(r: Ordinal, e: Ordinal) -> Callable:
    """Embed ``H(w^r)`` into the factor ``H(w^(w^e))`` for ``r < w^e``."""
    if e.is_zero():
        return lambda x: (1, 0)
    return lambda x: (r, x)


def _embed_power(g: Ordinal, g2: Ordinal) -> Callable:
    """Embedding ``H(w^g) -> H(w^g2)`` for ``g <= g2``: cancel common leading factors."""
    if g == g2:
        return lambda x: x
    d, d2 = _power_factors(g), _power_factors(g2)
    c = 0
    while c < len(d) and d[c] == d2[c]:
        c += 1
    tail_defaults = [_factor_default(e) for e in d2[c + (c < len(d)) :]]
    if c == len(d):
        return lambda x: _from_factors(g2, _as_factors(g, x) + tail_defaults)
    rest = Ordinal([(e, 1) for e in d[c:]])
    into = _into_factor(rest, d2[c])

    def f(x):
        xs = _as_factors(g, x)
        return _from_factors(g2, xs[:c] + [into(_from_factors(rest, xs[c:]))] + tail_defaults)

    return f


def _embed_union(gs: Sequence[Ordinal], g2: Ordinal) -> list[Callable]:
    """Embed the disjoint union of ``H(w^g)`` for ``g`` in ``gs`` (all ``< g2``) into ``H(w^g2)``."""
    m = len(gs)
    if g2.is_omega_power():
        eta = g2.leading_exponent()
        if eta.is_zero():
            return [(lambda x, i=i: (m, i)) for i in range(m)]
        if m == 1:
            return [lambda x, r=gs[0]: (r, x)]
        delta = o.ord_add(max(gs), 1)
        inner = _embed_union(gs, delta)
        return [(lambda x, f=f: (delta, f(x))) for f in inner]
    ok, pred = o.successor_split(g2)
    if ok:
        # H(w^(pred+1)) is H(w^pred) lex-times H(w) with the H(w) factor on top;
        # put component i in column (m, i) of H(w)
        ups = [_embed_power(g, pred) for g in gs]
        return [
            (lambda x, f=f, i=i: _from_factors(g2, _as_factors(pred, f(x)) + [(m, i)]))
            for i, f in enumerate(ups)
        ]
    mid = o.ord_add(max(gs), 1)
    inner = _embed_union(gs, mid)
    up = _embed_power(mid, g2)
    return [(lambda x, f=f: up(f(x))) for f in inner]


def h_embed(b, b2) -> Callable:
    """An order embedding of ``H(b)`` into ``H(b2)`` for ``1 <= b <= b2``."""
    b, b2 = as_ordinal(b), as_ordinal(b2)
    if b.is_zero():
        raise ValueError("H(0) is empty")
    if b > b2:
        raise ValueError(f"cannot embed H({b}) into the smaller H({b2})")
    if b == b2:
        return lambda x: x
    comps, comps2 = b.expanded_exponents(), b2.expanded_exponents()
    k = 0
    while k < len(comps) and comps[k] == comps2[k]:
        k += 1
    inner = _embed_union(comps[k:], comps2[k]) if k < len(comps) else []
    single, single2 = b.is_omega_power(), b2.is_omega_power()

    def f(x):
        i, y = (0, x) if single else x
        if i >= k:
            i, y = k, inner[i - k](y)
        return y if single2 else (i, y)

    return f


# -- element order -------------------------------------------------------------------


def _higman(leq, xs, ys) -> bool:
    j = 0
    for x in xs:
        while j < len(ys) and not leq(x, ys[j]):
            j += 1
        if j == len(ys):
            return False
        j += 1
    return True


def is_valid(t: WpoTerm, x) -> bool:
    """Shape validator for elements of ``t``."""
    if isinstance(t, Base):
        return x in t.poset
    if isinstance(t, Singleton):
        return x == ()
    if isinstance(t, (DisjointUnion, OrderedSum)):
        return (
            isinstance(x, tuple)
            and len(x) == 2
            and isinstance(x[0], int)
            and 0 <= x[0] < len(t.parts)
            and is_valid(t.parts[x[0]], x[1])
        )
    if isinstance(t, (Product, LexProduct)):
        return isinstance(x, tuple) and len(x) == len(t.parts) and all(is_valid(p, v) for p, v in zip(t.parts, x))
    if isinstance(t, Star):
        return isinstance(x, tuple) and all(is_valid(t.inner, v) for v in x)
    if isinstance(t, (Pfin, PfinNE)):
        if not isinstance(x, frozenset) or (isinstance(t, PfinNE) and not x):
            return False
        return all(is_valid(t.inner, v) for v in x)
    if isinstance(t, H):
        return _h_valid(t.beta, x)
    raise TypeError(t)


def leq_elem(t: WpoTerm, x, y) -> bool:
    """Decide ``x <= y`` in the order described by ``t``."""
    if isinstance(t, Base):
        if x not in t.poset or y not in t.poset:
            raise ShapeError(f"{x!r} or {y!r} is not an atom of {t.poset!r}")
        return t.poset.leq(x, y)
    if isinstance(t, Singleton):
        return True
    if isinstance(t, DisjointUnion):
        _shape(isinstance(x, tuple) and isinstance(y, tuple) and len(x) == len(y) == 2, t, x, y)
        return x[0] == y[0] and leq_elem(t.parts[x[0]], x[1], y[1])
    if isinstance(t, OrderedSum):
        _shape(isinstance(x, tuple) and isinstance(y, tuple) and len(x) == len(y) == 2, t, x, y)
        if x[0] != y[0]:
            return x[0] < y[0]
        return leq_elem(t.parts[x[0]], x[1], y[1])
    if isinstance(t, Product):
        _shape(isinstance(x, tuple) and isinstance(y, tuple) and len(x) == len(y) == len(t.parts), t, x, y)
        return all(leq_elem(p, u, v) for p, u, v in zip(t.parts, x, y))
    if isinstance(t, LexProduct):
        _shape(isinstance(x, tuple) and isinstance(y, tuple) and len(x) == len(y) == len(t.parts), t, x, y)
        for p, u, v in reversed(list(zip(t.parts, x, y))):
            up, down = leq_elem(p, u, v), leq_elem(p, v, u)
            if not (up and down):
                return up
        return True
    if isinstance(t, Star):
        _shape(isinstance(x, tuple) and isinstance(y, tuple), t, x, y)
        return _higman(lambda u, v: leq_elem(t.inner, u, v), x, y)
    if isinstance(t, (Pfin, PfinNE)):
        _shape(isinstance(x, frozenset) and isinstance(y, frozenset), t, x, y)
        return all(any(leq_elem(t.inner, u, v) for v in y) for u in x)
    if isinstance(t, H):
        _shape(_h_valid(t.beta, x) and _h_valid(t.beta, y), t, x, y)
        return _h_leq(t.beta, x, y)
    raise TypeError(t)


def _shape(ok, t, x, y):
    if not ok:
        raise ShapeError(f"elements {x!r}, {y!r} do not fit {format_term(t)}")


class TermOrder:
    """Adapter exposing ``leq`` for elements of a term, e.g. as a word alphabet."""

    def __init__(self, term: WpoTerm):
        self.term = term

    def leq(self, x, y) -> bool:
        return leq_elem(self.term, x, y)


# -- maximal order type ------------------------------------------------------------------


class OEval(NamedTuple):
    value: Ordinal
    exact: bool

    @property
    def exactness(self) -> str:
        return "exact" if self.exact else "upper_bound"


def o_eval(t: WpoTerm) -> OEval:
    """Maximal order type of ``t``, or an upper bound where no exact rule is known."""
    if isinstance(t, Base):
        return OEval(as_ordinal(len(t.poset.classes())), True)
    if isinstance(t, Singleton):
        return OEval(ONE, True)
    if isinstance(t, H):
        return OEval(_h_type(t.beta), True)
    if isinstance(t, (DisjointUnion, Product, OrderedSum, LexProduct)):
        subs = [o_eval(p) for p in t.parts]
        vals = [s.value for s in subs]
        exact = all(s.exact for s in subs)
        if isinstance(t, DisjointUnion):
            return OEval(o.nat_sum(vals), exact)
        if isinstance(t, Product):
            return OEval(o.nat_prod(vals), exact)
        if isinstance(t, OrderedSum):
            return OEval(o.ord_sum(vals), False)
        return OEval(_ord_prod(vals), False)
    if isinstance(t, Star):
        from finseq.bounds import h_fun

        sub = o_eval(t.inner)
        return OEval(h_fun(sub.value), sub.exact)
    if isinstance(t, (Pfin, PfinNE)):
        sub = o_eval(t.inner)
        full = o.two_pow(sub.value)
        value = full if isinstance(t, Pfin) else o.minus_one_plus(full)
        return OEval(value, isinstance(t.inner, H))
    raise TypeError(t)


# -- enumeration ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def sample_below(lam: Ordinal, n: int) -> Tuple[Ordinal, ...]:
    """A finite, increasing sample of ordinals below ``lam``.

    Contains ``0..n-1`` and, for each proper CNF prefix ``P`` of ``lam`` with
    next exponent ``e``, ordinals ``P + w^d*c + m`` for sampled ``d < e``.
    Grows with ``n`` and is cofinal in the sense that every CNF shape below
    ``lam`` is eventually hit.
    """
    lam = as_ordinal(lam)
    out = set()
    if lam.is_finite():
        return tuple(as_ordinal(i) for i in range(min(n, int(lam))))
    out.update(as_ordinal(i) for i in range(n))
    exps = lam.expanded_exponents()
    prefix = ZERO
    for e in exps:
        out.update(o.ord_add(prefix, m) for m in range(n))
        if not e.is_zero():
            for d in sample_below(e, n):
                for c in range(1, n + 1):
                    for m in range(n):
                        out.add(o.ord_add(prefix, o.ord_add(Ordinal([(d, c)]), m)))
        prefix = o.ord_add(prefix, o.omega_pow(e))
    return tuple(sorted((x for x in out if x < lam), key=_okey))


def _okey(x: Ordinal):
    return _OrdKey(x)


class _OrdKey:
    __slots__ = ("x",)

    def __init__(self, x):
        self.x = x

    def __lt__(self, other):
        return self.x < other.x


def _h_elements(beta: Ordinal, n: int) -> list:
    clause = h_clause(beta)
    kind = clause[0]
    if kind == "point":
        return [()]
    if kind == "omega":
        return [(k, i) for k in range(1, n + 1) for i in range(k)]
    if kind == "sum":
        out = []
        for d in sample_below(clause[1], n):
            out.extend((d, x) for x in _h_elements(o.omega_pow(d), n))
        return out
    if kind == "lex":
        return [tuple(p) for p in itertools.product(*(_h_elements(b, n) for b in clause[1]))]
    return [(i, x) for i, b in enumerate(clause[1]) for x in _h_elements(b, n)]


def _elements(t: WpoTerm, n: int) -> list:
    if isinstance(t, Base):
        return list(t.poset.elements)
    if isinstance(t, Singleton):
        return [()]
    if isinstance(t, H):
        return _h_elements(t.beta, n)
    if isinstance(t, (DisjointUnion, OrderedSum)):
        return [(i, x) for i, p in enumerate(t.parts) for x in _elements(p, n)]
    if isinstance(t, (Product, LexProduct)):
        return [tuple(p) for p in itertools.product(*(_elements(p, n) for p in t.parts))]
    sub = _elements(t.inner, n)[:n]
    if isinstance(t, Star):
        return [w for k in range(n) for w in itertools.product(sub, repeat=k)]
    lo = 1 if isinstance(t, PfinNE) else 0
    return [frozenset(c) for k in range(lo, n + 1) for c in itertools.combinations(sub, k)]


def is_finite_term(t: WpoTerm) -> bool:
    if isinstance(t, (Base, Singleton)):
        return True
    if isinstance(t, H):
        return t.beta.is_finite()
    if isinstance(t, Star):
        return False
    if isinstance(t, (Pfin, PfinNE)):
        return is_finite_term(t.inner)
    return all(is_finite_term(p) for p in t.parts)


class ElementStream(NamedTuple):
    elements: list
    short: bool


def enumerate_elements(t: WpoTerm, budget: int) -> ElementStream:
    """Up to ``budget`` distinct elements of ``t``, smallest descriptions first.

    ``short`` is set when ``t`` has fewer than ``budget`` elements.
    """
    if budget < 0:
        raise ValueError("budget must be non-negative")
    seen: dict = {}
    finite = is_finite_term(t)
    n, stale = 1, 0
    while len(seen) < budget:
        before = len(seen)
        for x in _elements(t, n):
            if x not in seen:
                seen[x] = None
                if len(seen) == budget:
                    break
        if len(seen) == before:
            stale += 1
            if finite and stale >= 2 or stale >= 8:
                break
        else:
            stale = 0
        n += 1
    out = list(seen)
    return ElementStream(out, len(out) < budget)
