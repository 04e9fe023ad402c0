"""Lower-bound constructions: separator-based embeddings of iterated powersets into words.

Given maximal elements ``v_1, ..., v_k`` peeled off a WPO ``X`` (each maximal
in what remains after removing the later ones) and ``Y`` the rest:

* ``psi(1, S) = (y_1 ... y_r)^w`` (no separator at the innermost layer),
* ``psi(l+1, S) = (v_l psi(l, T_1) v_l psi(l, T_2) ...)^w``,
* ``psi_star(k, [S_1, ..., S_r]) = v_k psi(k, S_1) v_k psi(k, S_2) ...``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, NamedTuple, Optional, Sequence, Tuple

from finseq import bounds
from finseq.canon import members, periodic_witness
from finseq.ordinal import Ordinal, as_ordinal, successor_split
from finseq.words import Cat, Lit, OmegaPow, UnsupportedLevel, WLit, WordTerm, normalize
from finseq.wqo import (
    H,
    Base,
    DisjointUnion,
    PosetSpec,
    Singleton,
    TermOrder,
    WpoTerm,
    enumerate_elements,
    h_clause,
    is_finite_term,
    leq_elem,
)

__all__ = [
    "MaximalDecomposition",
    "extract_maximals",
    "psi",
    "psi_star",
    "psi_witness",
    "leq_powerset",
    "LowerBoundInstance",
    "lowerbd_instance",
]

MAX_LEVEL = 2


@dataclass(frozen=True)
class MaximalDecomposition:
    """``ambient`` with separators ``v = (v_1, ..., v_k)``; ``Y`` is the ambient minus ``v``."""

    ambient: WpoTerm
    v: Tuple[Hashable, ...]

    @property
    def k(self) -> int:
        return len(self.v)

    @property
    def order(self) -> TermOrder:
        return TermOrder(self.ambient)

    def leq(self, x, y) -> bool:
        return leq_elem(self.ambient, x, y)

    def in_y(self, x) -> bool:
        return x not in self.v

    def y_elements(self, budget: int = 10_000) -> list:
        return [x for x in enumerate_elements(self.ambient, budget).elements if x not in self.v]

    def is_valid(self, budget: int = 10_000) -> bool:
        """Check maximality of every separator against an enumeration of the ambient."""
        elems = enumerate_elements(self.ambient, budget).elements
        for i, v in enumerate(self.v):
            later = set(self.v[i + 1 :])
            if any(y != v and y not in later and self.leq(v, y) for y in elems):
                return False
        return True


def _strict_max(t: WpoTerm, pool: list) -> list:
    return [x for x in pool if not any(y != x and leq_elem(t, x, y) for y in pool)]


def _structural_tops(t: WpoTerm) -> list:
    """Peelable maximal elements of infinite terms, innermost first."""
    if isinstance(t, Singleton):
        return [()]
    if isinstance(t, H):
        clause = h_clause(t.beta)
        if clause[0] == "point":
            return [()]
        if clause[0] == "union":
            return [(i, x) for i, b in enumerate(clause[1]) for x in _structural_tops(H(b))]
        return []
    if isinstance(t, DisjointUnion):
        return [(i, x) for i, p in enumerate(t.parts) for x in _structural_tops(p)]
    return []


def extract_maximals(t: WpoTerm, k: int, budget: int = 10_000) -> MaximalDecomposition:
    """Peel ``k`` elements, each maximal in what remains after removing the later ones."""
    if is_finite_term(t):
        stream = enumerate_elements(t, budget)
        pool = list(stream.elements)
        picked = []
        for _ in range(k):
            tops = _strict_max(t, pool)
            if not tops:
                raise ValueError(f"only {len(picked)} peelable maximal elements")
            v = tops[-1]
            picked.append(v)
            pool.remove(v)
        return MaximalDecomposition(t, tuple(reversed(picked)))
    tops = _structural_tops(t)
    if len(tops) < k:
        raise ValueError(f"only {len(tops)} peelable maximal elements are known for this term")
    return MaximalDecomposition(t, tuple(tops[len(tops) - k :]))


def leq_powerset(d: MaximalDecomposition, a, b) -> bool:
    """Majorization order on iterated nonempty powersets of ``Y``."""
    if isinstance(a, frozenset) != isinstance(b, frozenset):
        raise ValueError("level mismatch")
    if isinstance(a, frozenset):
        return all(any(leq_powerset(d, x, y) for y in b) for x in a)
    return d.leq(a, b)


def _check_level(k: int, d: MaximalDecomposition, need: int):
    if k > MAX_LEVEL:
        raise UnsupportedLevel(f"psi produces terms only for k <= {MAX_LEVEL}")
    if d.k < need:
        raise ValueError(f"need {need} separators, decomposition has {d.k}")


def _psi(level: int, d: MaximalDecomposition, S) -> WordTerm:
    if level == 0:
        if isinstance(S, frozenset):
            raise ValueError("expected an element of Y at level 0")
        return Lit(S)
    if not isinstance(S, frozenset) or not S:
        raise ValueError(f"expected a nonempty set at level {level}")
    sep = () if level == 1 else (Lit(d.v[level - 2]),)
    body = []
    for T in members(S):
        body.extend(sep)
        body.append(_psi(level - 1, d, T))
    return OmegaPow(normalize(Cat(tuple(body))))


def psi(k: int, d: MaximalDecomposition, S) -> WordTerm:
    _check_level(k, d, max(k - 1, 0))
    return normalize(_psi(k, d, S))


def psi_star(k: int, d: MaximalDecomposition, word: Sequence) -> WordTerm:
    if k > 1:
        raise UnsupportedLevel("psi_star is decided exactly only for k <= 1")
    _check_level(k, d, k)
    sep = (Lit(d.v[k - 1]),) if k >= 1 else ()
    parts = []
    for S in word:
        parts.extend(sep)
        parts.append(_psi(k, d, S))
    return normalize(Cat(tuple(parts)))


def _psi_wit(level: int, d: MaximalDecomposition, a, b):
    if level == 0:
        return WLit(())
    src, tgt = members(a), members(b)
    width = 1 if level == 1 else 2
    groups = []
    for T in src:
        for j, T2 in enumerate(tgt):
            if leq_powerset(d, T, T2):
                inner = _psi_wit(level - 1, d, T, T2)
                if width == 1:
                    groups.append([(j, inner)])
                else:
                    groups.append([(2 * j, WLit(())), (2 * j + 1, inner)])
                break
        else:
            raise ValueError("not comparable")
    return periodic_witness(groups, width * len(tgt) > 1)


def psi_witness(k: int, d: MaximalDecomposition, a, b):
    """Certificate that ``psi(k, a) <= psi(k, b)`` for ``a <= b``."""
    _check_level(k, d, max(k - 1, 0))
    if not leq_powerset(d, a, b):
        raise ValueError("precondition violated: a is not below b")
    return _psi_wit(k, d, a, b)


class LowerBoundInstance(NamedTuple):
    X: WpoTerm
    claimed: Ordinal
    decomposition: Optional[MaximalDecomposition]


def lowerbd_instance(beta) -> LowerBoundInstance:
    """The WPO ``H(beta)`` realizing ``u(beta)`` for words of length below ``w^2``."""
    beta = as_ordinal(beta)
    claimed = bounds.u_fun(beta)
    if beta.is_zero():
        return LowerBoundInstance(Base(PosetSpec([], name="empty")), claimed, None)
    ok, pred = successor_split(beta)
    if not ok:
        return LowerBoundInstance(H(beta), claimed, None)
    if pred.is_zero():
        return LowerBoundInstance(H(beta), claimed, MaximalDecomposition(Singleton(), ((),)))
    ambient = DisjointUnion((H(pred), Singleton()))
    return LowerBoundInstance(H(beta), claimed, MaximalDecomposition(ambient, ((1, ()),)))
