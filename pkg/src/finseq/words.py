"""Finite-image transfinite words as terms.

A word is built from letters with concatenation and the omega-power
``(body)^w``.  Since a term has finitely many :class:`Lit` leaves, every word
described this way has finite image.  Lengths of terms at nesting level ``L``
are below ``w^(L+1)``.

The embedding order is the usual one: ``s <= t`` iff some strictly increasing
map on positions sends every letter of ``s`` to a letter of ``t`` above it.
:func:`embeds_exact` decides it for terms of level at most 2.  Positions in a
target term are addressed by paths (child index under a :class:`Cat`, copy
index under an :class:`OmegaPow`), which is what :class:`EmbeddingWitness`
certificates talk about.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Hashable, Iterator, Optional, Sequence, Tuple, Union

from finseq.ordinal import OMEGA, ONE, ZERO, Ordinal, ord_add, ord_mul

__all__ = [
    "Eps",
    "Lit",
    "Cat",
    "OmegaPow",
    "WordTerm",
    "EPS",
    "cat",
    "omega",
    "word",
    "UnsupportedLevel",
    "MalformedWitness",
    "WLit",
    "WCat",
    "WOmega",
    "EmbeddingWitness",
    "normalize",
    "length",
    "level",
    "image",
    "items",
    "letters",
    "format_word",
    "structural_key",
    "repeat_word",
    "canonical_omega",
    "majorizes",
    "embeds_exact",
    "equivalent",
    "find_witness",
    "witness_check",
    "resolve",
    "unfold",
    "finite_embeds",
    "unfold_oracle",
    "nonempty_tails",
    "is_indecomposable",
]


@dataclass(frozen=True)
class Eps:
    def __repr__(self):
        return "Eps"


@dataclass(frozen=True)
class Lit:
    letter: Hashable

    def __repr__(self):
        return f"Lit({self.letter!r})"


@dataclass(frozen=True)
class Cat:
    parts: Tuple["WordTerm", ...]

    def __repr__(self):
        return f"Cat{self.parts!r}"


@dataclass(frozen=True)
class OmegaPow:
    body: "WordTerm"

    def __repr__(self):
        return f"OmegaPow({self.body!r})"


WordTerm = Union[Eps, Lit, Cat, OmegaPow]
EPS = Eps()

Leq = Callable[[Hashable, Hashable], bool]


class UnsupportedLevel(ValueError):
    """Raised when exact embedding is requested for terms of level 3 or more."""


class MalformedWitness(ValueError):
    pass


def _as_term(x) -> WordTerm:
    if isinstance(x, (Eps, Lit, Cat, OmegaPow)):
        return x
    return Lit(x)


def cat(*parts) -> WordTerm:
    """Normalized concatenation; bare letters are wrapped in :class:`Lit`."""
    return normalize(Cat(tuple(_as_term(p) for p in parts)))


def omega(*body) -> WordTerm:
    """Normalized ``(body)^w``."""
    return normalize(OmegaPow(cat(*body)))


def word(letters: Sequence[Hashable]) -> WordTerm:
    return cat(*(Lit(x) for x in letters))


def as_leq(order) -> Leq:
    """Accept ``None`` (discrete order), a callable, or an object with ``leq``."""
    if order is None:
        return lambda a, b: a == b
    if callable(order) and not hasattr(order, "leq"):
        return order
    return order.leq


# -- structure ---------------------------------------------------------------


def _memo(w, key: str, fn):
    # terms are immutable, so derived data can be cached on the node itself
    d = w.__dict__
    if key not in d:
        object.__setattr__(w, key, fn(w))
    return d[key]


def normalize(w: WordTerm) -> WordTerm:
    out = _memo(w, "_norm", _normalize)
    if "_norm" not in out.__dict__:
        object.__setattr__(out, "_norm", out)
    return out


def _normalize(w: WordTerm) -> WordTerm:
    if isinstance(w, (Eps, Lit)):
        return w
    if isinstance(w, OmegaPow):
        body = normalize(w.body)
        if isinstance(body, Eps):
            return EPS
        return w if body is w.body else OmegaPow(body)
    flat: list[WordTerm] = []
    for p in w.parts:
        p = normalize(p)
        if isinstance(p, Cat):
            flat.extend(p.parts)
        elif not isinstance(p, Eps):
            flat.append(p)
    if not flat:
        return EPS
    if len(flat) == 1:
        return flat[0]
    if len(flat) == len(w.parts) and all(a is b for a, b in zip(flat, w.parts)):
        return w
    return Cat(tuple(flat))


def items(w: WordTerm) -> Tuple[WordTerm, ...]:
    """Top-level blocks of a normalized term."""
    if isinstance(w, Eps):
        return ()
    if isinstance(w, Cat):
        return w.parts
    return (w,)


def length(w: WordTerm) -> Ordinal:
    if isinstance(w, Eps):
        return ZERO
    if isinstance(w, Lit):
        return ONE
    if isinstance(w, Cat):
        out = ZERO
        for p in w.parts:
            out = ord_add(out, length(p))
        return out
    return ord_mul(length(w.body), OMEGA)


def level(w: WordTerm) -> int:
    return _memo(w, "_level", _level)


def _level(w: WordTerm) -> int:
    if isinstance(w, (Eps, Lit)):
        return 0
    if isinstance(w, Cat):
        return max(level(p) for p in w.parts)
    return level(w.body) + 1


def image(w: WordTerm) -> frozenset:
    return _memo(w, "_image", _image)


def _image(w: WordTerm) -> frozenset:
    if isinstance(w, Eps):
        return frozenset()
    if isinstance(w, Lit):
        return frozenset((w.letter,))
    if isinstance(w, Cat):
        return frozenset().union(*(image(p) for p in w.parts))
    return image(w.body)


def letters(w: WordTerm) -> Tuple[Hashable, ...]:
    """Letters of a finite (level 0) term, in order."""
    if level(w) != 0:
        raise ValueError("letters() needs a finite word")
    return tuple(p.letter for p in items(w))


def structural_key(x):
    """A deterministic total sort key for letters, tuples and finite sets."""
    if isinstance(x, str):
        return (0, x)
    if isinstance(x, bool):
        return (1, int(x))
    if isinstance(x, int):
        return (1, x)
    if isinstance(x, tuple):
        return (2, tuple(structural_key(y) for y in x))
    if isinstance(x, frozenset):
        return (3, tuple(sorted(structural_key(y) for y in x)))
    if isinstance(x, Ordinal):
        return (4, str(x))
    key = getattr(x, "sort_key", None)
    if key is not None:
        return (5, key())
    return (9, repr(x))


def repeat_word(letter_set) -> WordTerm:
    """``(x0 x1 ... x_{p-1})^w`` with the letters in a fixed canonical order."""
    if not letter_set:
        raise ValueError("empty letter set")
    return OmegaPow(word(sorted(letter_set, key=structural_key)))


def format_word(w: WordTerm) -> str:
    if isinstance(w, Eps):
        return "ε"
    if isinstance(w, Lit):
        return str(w.letter)
    if isinstance(w, Cat):
        return " ".join(format_word(p) for p in w.parts)
    return f"({format_word(w.body)})^w"


def canonical_omega(w: WordTerm) -> Tuple[WordTerm, frozenset]:
    """Split a word of length exactly ``w`` into a finite prefix and its tail set.

    The tail set is the set of letters occurring infinitely often; the word is
    equivalent to ``prefix + repeat_word(tailset)``.
    """
    w = normalize(w)
    if length(w) != OMEGA:
        raise ValueError(f"expected a word of length w, got length {length(w)}")
    *prefix, last = items(w)
    return normalize(Cat(tuple(prefix))), image(last.body)


# -- exact decision for level <= 2 ------------------------------------------------


def majorizes(lo, hi, leq: Leq) -> bool:
    """``lo <=_m hi``: every element of ``lo`` is below some element of ``hi``."""
    return all(any(leq(a, b) for b in hi) for a in lo)


def _check_levels(*ws):
    for w in ws:
        if level(w) > 2:
            raise UnsupportedLevel(f"exact embedding needs level <= 2, got {level(w)}")


def _block_covers(item: WordTerm, block: WordTerm, leq: Leq) -> bool:
    """Whether an item of level <= 1 fits inside one copy of a level-1 block body item."""
    if isinstance(item, Lit):
        return any(leq(item.letter, y) for y in image(block))
    return isinstance(block, OmegaPow) and majorizes(image(item.body), image(block.body), leq)


def _advance(item: WordTerm, j: int, blocks, leq: Leq) -> Optional[int]:
    """Least block state reachable after embedding ``item`` from state ``j``.

    State ``j`` stands for the suffix of the target starting at block ``j``; a
    cut strictly inside an omega-power block gives an equivalent suffix, so it
    is the same state.
    """
    n = len(blocks)
    if isinstance(item, Lit):
        x = item.letter
        for k in range(j, n):
            b = blocks[k]
            if isinstance(b, Lit):
                if leq(x, b.letter):
                    return k + 1
            elif any(leq(x, y) for y in image(b)):
                return k
        return None
    lv = level(item)
    if lv == 1:
        mine = image(item.body)
        for k in range(j, n):
            b = blocks[k]
            if isinstance(b, Lit):
                continue
            if level(b) == 1:
                if majorizes(mine, image(b.body), leq):
                    return k + 1
                continue
            if any(isinstance(c, OmegaPow) and majorizes(mine, image(c.body), leq) for c in items(b.body)):
                return k
            if majorizes(mine, image(b.body), leq):
                return k + 1
        return None
    body_items = items(item.body)
    for k in range(j, n):
        b = blocks[k]
        if isinstance(b, OmegaPow) and level(b) == 2:
            target = items(b.body)
            if all(any(_block_covers(bi, c, leq) for c in target) for bi in body_items):
                return k + 1
    return None


def embeds_exact(s: WordTerm, t: WordTerm, order=None) -> bool:
    """Decide ``s <= t`` for terms of level at most 2 (lengths below ``w^3``)."""
    leq = as_leq(order)
    s, t = normalize(s), normalize(t)
    _check_levels(s, t)
    blocks = items(t)
    state = 0
    for it in items(s):
        state = _advance(it, state, blocks, leq)
        if state is None:
            return False
    return True


def equivalent(s: WordTerm, t: WordTerm, order=None) -> bool:
    return embeds_exact(s, t, order) and embeds_exact(t, s, order)


def nonempty_tails(w: WordTerm) -> list:
    """Term-expressible nonempty tails starting at positions inside the first copy."""
    w = normalize(w)
    if isinstance(w, Eps):
        return []
    if isinstance(w, Lit):
        return [w]
    if isinstance(w, Cat):
        out = []
        for i, p in enumerate(w.parts):
            rest = w.parts[i + 1 :]
            out.extend(normalize(Cat((tl,) + rest)) for tl in nonempty_tails(p))
        return out
    return [normalize(Cat((tl, w))) for tl in nonempty_tails(w.body)]


def is_indecomposable(w: WordTerm, order=None) -> bool:
    return all(equivalent(w, tl, order) for tl in nonempty_tails(w))


# -- witnesses -----------------------------------------------------------------

INF = float("inf")


@dataclass(frozen=True)
class WLit:
    """Target address of one source letter."""

    addr: Tuple[int, ...]


@dataclass(frozen=True)
class WCat:
    parts: Tuple["EmbeddingWitness", ...]


@dataclass(frozen=True)
class WOmega:
    """Certificate for a source omega-power.

    Copy ``i`` of the source body uses ``prologue[i]`` while ``i`` is in range;
    afterwards copy ``len(prologue) + q*len(period) + r`` uses ``period[r]``
    with address component ``depth`` (a copy index of a target omega-power)
    increased by ``q*stride``.
    """

    prologue: Tuple["EmbeddingWitness", ...]
    period: Tuple["EmbeddingWitness", ...]
    depth: int
    stride: int = 1


EmbeddingWitness = Union[WLit, WCat, WOmega]


def _node_at(t: WordTerm, addr) -> Optional[WordTerm]:
    node = t
    for step in addr:
        if isinstance(step, float) or not isinstance(step, int) or step < 0:
            return None
        if isinstance(node, Cat):
            if step >= len(node.parts):
                return None
            node = node.parts[step]
        elif isinstance(node, OmegaPow):
            node = node.body
        else:
            return None
    return node


def resolve(t: WordTerm, addr) -> Optional[Hashable]:
    """Letter at a full address of ``t``, or ``None`` if the address is invalid."""
    node = _node_at(normalize(t), addr)
    return node.letter if isinstance(node, Lit) else None


def _shift(addr, depth, k):
    if k == 0:
        return addr
    return addr[:depth] + (addr[depth] + k,) + addr[depth + 1 :]


def _check(src: WordTerm, w, t: WordTerm, leq: Leq):
    """Bounds ``(lo, hi)`` of a valid witness, ``None`` if invalid.

    ``lo`` is the least target address used; ``hi`` is the greatest, or a cut
    ending in ``INF`` when the images run off to the end of a target
    omega-power.
    """
    if isinstance(src, Lit):
        if not isinstance(w, WLit):
            raise MalformedWitness(f"expected WLit for {src!r}")
        y = _node_at(t, w.addr)
        if not isinstance(y, Lit) or not leq(src.letter, y.letter):
            return None
        return w.addr, w.addr
    if isinstance(src, Cat):
        if not isinstance(w, WCat) or len(w.parts) != len(src.parts):
            raise MalformedWitness("WCat must mirror the source concatenation")
        bounds = []
        for p, wp in zip(src.parts, w.parts):
            b = _check(p, wp, t, leq)
            if b is None:
                return None
            bounds.append(b)
        for (_, hi), (lo, _) in zip(bounds, bounds[1:]):
            if not hi < lo:
                return None
        return bounds[0][0], bounds[-1][1]
    if isinstance(src, OmegaPow):
        if not isinstance(w, WOmega) or not w.period:
            raise MalformedWitness("WOmega with a nonempty period expected")
        if w.stride < 1 or w.depth < 0:
            return None
        pro = [_check(src.body, x, t, leq) for x in w.prologue]
        per = [_check(src.body, x, t, leq) for x in w.period]
        if any(b is None for b in pro + per):
            return None
        d = w.depth
        common = per[0][0][:d]
        for lo, hi in per:
            if len(lo) <= d or len(hi) <= d or lo[:d] != common or hi[:d] != common or hi[d] == INF:
                return None
        if not isinstance(_node_at(t, common), OmegaPow):
            return None
        chain = pro + per
        for (_, hi), (lo, _) in zip(chain, chain[1:]):
            if not hi < lo:
                return None
        if not per[-1][1] < _shift(per[0][0], d, w.stride):
            return None
        return chain[0][0], common + (INF,)
    if isinstance(src, Eps):
        if not isinstance(w, WCat) or w.parts:
            raise MalformedWitness("the empty word takes WCat(())")
        return ((), ())
    raise TypeError(src)


def witness_check(s: WordTerm, t: WordTerm, w: EmbeddingWitness, order=None) -> bool:
    """Check a certificate that ``s <= t``; valid at every level."""
    return _check(normalize(s), w, normalize(t), as_leq(order)) is not None


def _prefix(w, pre: tuple):
    if not pre:
        return w
    if isinstance(w, WLit):
        return WLit(pre + w.addr)
    if isinstance(w, WCat):
        return WCat(tuple(_prefix(p, pre) for p in w.parts))
    return WOmega(
        tuple(_prefix(p, pre) for p in w.prologue),
        tuple(_prefix(p, pre) for p in w.period),
        w.depth + len(pre),
        w.stride,
    )


def _find(node: WordTerm, after, x, leq: Leq):
    """Least address in ``node`` strictly after ``after`` holding a letter above ``x``."""
    if isinstance(node, Lit):
        return () if after is None and leq(x, node.letter) else None
    if isinstance(node, Cat):
        start = 0
        if after is not None:
            start = after[0]
            r = _find(node.parts[start], after[1:], x, leq)
            if r is not None:
                return (start,) + r
            start += 1
        for i in range(start, len(node.parts)):
            r = _find(node.parts[i], None, x, leq)
            if r is not None:
                return (i,) + r
        return None
    if isinstance(node, OmegaPow):
        if after is None:
            r = _find(node.body, None, x, leq)
            return None if r is None else (0,) + r
        c = after[0]
        if c == INF:
            return None
        r = _find(node.body, after[1:], x, leq)
        if r is not None:
            return (c,) + r
        r = _find(node.body, None, x, leq)
        return None if r is None else (c + 1,) + r
    return None


def _spread(src: OmegaPow, body: WordTerm, c0: int, leq: Leq) -> WOmega:
    """Witness for ``src`` (level 1) placing letter ``j`` of each copy in its own target copy."""
    ls = letters(src.body)
    lits = tuple(WLit((c0 + j,) + _find(body, None, x, leq)) for j, x in enumerate(ls))
    entry = lits[0] if len(lits) == 1 else WCat(lits)
    return WOmega((), (entry,), 0, len(ls))


def _embed_item(item: WordTerm, node: WordTerm, after, leq: Leq):
    """Embed one source block into ``node`` after ``after`` with the least end cut.

    Returns ``(witness, end)`` with addresses relative to ``node``.
    """
    if isinstance(item, Lit):
        a = _find(node, after, item.letter, leq)
        return None if a is None else (WLit(a), a)
    if isinstance(node, (Lit, Eps)):
        return None
    if isinstance(node, Cat):
        start = 0
        if after is not None:
            start = after[0]
            r = _embed_item(item, node.parts[start], after[1:], leq)
            if r is not None:
                return _prefix(r[0], (start,)), (start,) + r[1]
            start += 1
        for i in range(start, len(node.parts)):
            r = _embed_item(item, node.parts[i], None, leq)
            if r is not None:
                return _prefix(r[0], (i,)), (i,) + r[1]
        return None
    c = -1 if after is None else after[0]
    if c == INF:
        return None
    lv_item, lv_node = level(item), level(node)
    if lv_item == 1:
        if lv_node == 2:
            if after is not None and after[1:]:
                r = _embed_item(item, node.body, after[1:], leq)
                if r is not None:
                    return _prefix(r[0], (c,)), (c,) + r[1]
            r = _embed_item(item, node.body, None, leq)
            if r is not None:
                return _prefix(r[0], (c + 1,)), (c + 1,) + r[1]
        if majorizes(image(item.body), image(node.body), leq):
            return _spread(item, node.body, c + 1, leq), (INF,)
        return None
    # item of level 2: only a level-2 target power can hold it
    if lv_node != 2:
        return None
    targets = items(node.body)
    subs = []
    c0 = c + 1
    for i, bi in enumerate(items(item.body)):
        for j, cj in enumerate(targets):
            if _block_covers(bi, cj, leq):
                break
        else:
            return None
        pre = (c0 + i,) + ((j,) if isinstance(node.body, Cat) else ())
        if isinstance(bi, Lit):
            subs.append(WLit(pre + _find(cj, None, bi.letter, leq)))
        else:
            subs.append(_prefix(_spread(bi, cj.body, 0, leq), pre))
    entry = subs[0] if len(subs) == 1 else WCat(tuple(subs))
    return WOmega((), (entry,), 0, len(subs)), (INF,)


def find_witness(s: WordTerm, t: WordTerm, order=None) -> Optional[EmbeddingWitness]:
    """Build a certificate for ``s <= t`` (levels <= 2), or ``None`` if there is none."""
    leq = as_leq(order)
    s, t = normalize(s), normalize(t)
    _check_levels(s, t)
    parts = []
    cursor = None
    for it in items(s):
        r = _embed_item(it, t, cursor, leq)
        if r is None:
            return None
        parts.append(r[0])
        cursor = r[1]
    if isinstance(s, Cat) or isinstance(s, Eps):
        return WCat(tuple(parts))
    return parts[0]


# -- unfolding oracle ------------------------------------------------------------


def unfold(w: WordTerm, n: int) -> Tuple[Hashable, ...]:
    """The finite word obtained by replacing each omega-power by ``n`` copies of its body."""
    if isinstance(w, Eps):
        return ()
    if isinstance(w, Lit):
        return (w.letter,)
    if isinstance(w, Cat):
        return tuple(x for p in w.parts for x in unfold(p, n))
    return unfold(w.body, n) * n


def _stream(w: WordTerm, n: int) -> Iterator[Hashable]:
    if isinstance(w, Lit):
        yield w.letter
    elif isinstance(w, Cat):
        for p in w.parts:
            yield from _stream(p, n)
    elif isinstance(w, OmegaPow):
        for _ in range(n):
            yield from _stream(w.body, n)


def finite_embeds(u: Sequence[Hashable], t: WordTerm, order=None) -> bool:
    """Decide whether a finite word embeds in ``t`` (any level).

    A finite word of length ``m`` that embeds in ``t`` uses at most ``m``
    copies of any omega-power, so it suffices to match greedily against ``t``
    unfolded ``m`` times.
    """
    leq = as_leq(order)
    if not u:
        return True
    i = 0
    for y in _stream(normalize(t), len(u)):
        if leq(u[i], y):
            i += 1
            if i == len(u):
                return True
    return False


def unfold_oracle(s: WordTerm, t: WordTerm, n: int, order=None) -> bool:
    """Necessary condition for ``s <= t``: every finite unfolding of ``s`` up to ``n`` embeds."""
    if n < 1:
        raise ValueError("n must be at least 1")
    s = normalize(s)
    return all(finite_embeds(unfold(s, m), t, order) for m in range(1, n + 1))
