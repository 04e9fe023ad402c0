"""Iterated finite powersets and the canonical maps into transfinite words.

``P_0`` is the base alphabet; ``P_k`` is the set of nonempty finite sets of
tagged elements ``Q(i, e)`` with ``i < k`` and ``e`` in ``P_i``.  The map
:func:`phi` sends a set ``{s_0, ..., s_{p-1}}`` to ``(phi(s_0) ... phi(s_{p-1}))^w``
and a list of tagged elements to the concatenation of their images.  Up to
equivalence the result does not depend on the enumeration order of the set;
sets are enumerated by :func:`finseq.words.structural_key`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Sequence, Tuple

from finseq.ordinal import omega_pow
from finseq.words import (
    EPS,
    Cat,
    Lit,
    OmegaPow,
    UnsupportedLevel,
    WCat,
    WLit,
    WOmega,
    WordTerm,
    _prefix,
    as_leq,
    canonical_omega,
    equivalent,
    image,
    items,
    length,
    level,
    normalize,
    structural_key,
)

__all__ = [
    "Q",
    "leq_pk",
    "pk_level",
    "phi",
    "phi_witness",
    "periodic_witness",
    "decompose",
    "decompose_eq",
    "decompose_indec",
    "members",
    "format_pk",
]

MAX_LEVEL = 2


@dataclass(frozen=True)
class Q:
    """An element of ``P_level`` tagged with its level (a summand of ``Q_k``)."""

    level: int
    elem: Hashable

    def sort_key(self):
        return (self.level, structural_key(self.elem))

    def __repr__(self):
        return f"Q{self.level}({format_pk(self.elem)})"


def members(s: frozenset) -> list:
    """Members of a set in the canonical enumeration order."""
    return sorted(s, key=structural_key)


def pk_level(e) -> int:
    """Level of a ``P`` element: 0 for letters, else one more than the largest member tag."""
    if isinstance(e, Q):
        return e.level
    if isinstance(e, frozenset):
        if not e:
            raise ValueError("empty set has no level")
        for m in e:
            if not isinstance(m, Q):
                raise ValueError(f"set members must be tagged, got {m!r}")
        return 1 + max(m.level for m in e)
    return 0


def format_pk(e) -> str:
    if isinstance(e, Q):
        return format_pk(e.elem)
    if isinstance(e, frozenset):
        return "{" + ", ".join(format_pk(m) for m in members(e)) + "}"
    if isinstance(e, (list, tuple)):
        return "[" + ", ".join(format_pk(m) for m in e) + "]"
    return str(e)


def leq_pk(a, b, order=None) -> bool:
    """Majorization order on iterated powersets; tagged elements compare only at equal tags."""
    leq = as_leq(order)
    return _leq(a, b, leq)


def _leq(a, b, leq) -> bool:
    if isinstance(a, Q) or isinstance(b, Q):
        if not (isinstance(a, Q) and isinstance(b, Q)):
            raise ValueError(f"cannot compare tagged {a!r} with untagged {b!r}")
        return a.level == b.level and _leq(a.elem, b.elem, leq)
    sa, sb = isinstance(a, frozenset), isinstance(b, frozenset)
    if sa != sb:
        raise ValueError(f"level mismatch between {a!r} and {b!r}")
    if sa:
        return all(any(_leq(x, y, leq) for y in b) for x in a)
    return leq(a, b)


# -- phi ---------------------------------------------------------------------


def phi(k: int, e) -> WordTerm:
    """Word image of a ``P_k`` element, a tagged element, a list of them, or the empty set."""
    if k > MAX_LEVEL:
        raise UnsupportedLevel(f"phi produces terms only for k <= {MAX_LEVEL}")
    return normalize(_phi(e))


def _phi(e) -> WordTerm:
    if isinstance(e, Q):
        return _phi(e.elem)
    if isinstance(e, (list, tuple)):
        return Cat(tuple(_phi(x) for x in e))
    if isinstance(e, frozenset):
        if not e:
            return EPS
        return OmegaPow(normalize(Cat(tuple(_phi(m) for m in members(e)))))
    return Lit(e)


def periodic_witness(groups: Sequence[Sequence[Tuple[int, object]]], target_is_cat: bool):
    """Witness for an omega-power whose body splits into ``p`` consecutive groups.

    ``groups[i]`` lists ``(target item index, witness)`` for the source items of
    group ``i``, relative to one copy of the target body.  Copy ``m`` of the
    source goes to target copies ``m*p .. m*p + p - 1``, group ``i`` into copy
    ``m*p + i``.
    """
    entries = []
    for i, group in enumerate(groups):
        for idx, w in group:
            entries.append(_prefix(w, (i,) + ((idx,) if target_is_cat else ())))
    entry = entries[0] if len(entries) == 1 else WCat(tuple(entries))
    return WOmega((), (entry,), 0, len(groups))


def _phi_wit(a, b, leq):
    if isinstance(a, Q):
        return _phi_wit(a.elem, b.elem, leq)
    if not isinstance(a, frozenset):
        return WLit(())
    src, tgt = members(a), members(b)
    groups = []
    for x in src:
        for j, y in enumerate(tgt):
            if _leq(x, y, leq):
                groups.append([(j, _phi_wit(x, y, leq))])
                break
        else:  # pragma: no cover - guarded by the caller
            raise ValueError("not comparable")
    return periodic_witness(groups, len(tgt) > 1)


def phi_witness(k: int, a, b, order=None):
    """Certificate that ``phi(a) <= phi(b)``, built by grouping ``p`` target periods per source period."""
    leq = as_leq(order)
    if k > MAX_LEVEL:
        raise UnsupportedLevel(f"phi produces terms only for k <= {MAX_LEVEL}")
    if isinstance(a, frozenset) and not a:
        return WCat(())
    if not _leq(a, b, leq):
        raise ValueError(f"{format_pk(a)} is not below {format_pk(b)}")
    return _phi_wit(a, b, leq)


# -- decomposition -------------------------------------------------------------------


def _letter_set(w: WordTerm) -> frozenset:
    return frozenset(Q(0, x) for x in image(w))


def _item_q(it: WordTerm) -> Q:
    if isinstance(it, Lit):
        return Q(0, it.letter)
    if isinstance(it, OmegaPow) and level(it) == 1:
        return Q(1, _letter_set(it.body))
    raise ValueError(f"unexpected block {it!r}")


def decompose(s: WordTerm, k: int) -> list:
    """Tagged elements ``w`` with ``phi(w)`` equivalent to ``s`` (``length(s) < w^k``)."""
    if k > MAX_LEVEL:
        raise UnsupportedLevel(f"decompose supports k <= {MAX_LEVEL}")
    s = normalize(s)
    if not length(s) < omega_pow(k):
        raise ValueError(f"length {length(s)} is not below w^{k}")
    # below w^2 every block is a letter or a level-1 power, and each such power
    # is, up to equivalence, the repeat of its letter set
    return [_item_q(it) for it in items(s)]


def decompose_eq(s: WordTerm, k: int, order=None) -> Tuple[list, object]:
    """``(w, S)`` with ``phi(w) phi(S)`` equivalent to ``s`` (``length(s) == w^k``).

    When ``s`` is already equivalent to ``phi(S)`` the prefix is dropped.
    """
    if k > MAX_LEVEL:
        raise UnsupportedLevel(f"decompose_eq supports k <= {MAX_LEVEL}")
    s = normalize(s)
    if length(s) != omega_pow(k):
        raise ValueError(f"length {length(s)} is not w^{k}")
    if k == 0:
        return [], s.letter
    if k == 1:
        prefix, tail = canonical_omega(s)
        w, S = decompose(prefix, 1), frozenset(Q(0, x) for x in tail)
    else:
        *pre, last = items(s)
        # the tail block C^w: as an w-sequence of length-w segments, every
        # letter and every level-1 power of C recurs in infinitely many segments
        S = frozenset(_item_q(it) for it in items(last.body))
        w = decompose(normalize(Cat(tuple(pre))), 2)
    if w and equivalent(phi(k, S), s, order):
        w = []
    return w, S


def decompose_indec(s: WordTerm, k: int, order=None):
    """The set ``S`` with ``phi(S)`` equivalent to an indecomposable ``s``."""
    w, S = decompose_eq(s, k, order)
    if w:
        raise ValueError("word is not indecomposable")
    return S
