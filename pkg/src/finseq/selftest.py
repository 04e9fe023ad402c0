"""Quick randomized consistency sweeps, run by ``finseq selftest``.

Each suite returns ``(passed, total)``; a suite passes when the two agree.
The test suite under ``tests/`` runs larger versions of the same checks.
"""

from __future__ import annotations

import random
from typing import Callable, Dict, Tuple

from finseq import bounds
from finseq import ordinal as o
from finseq.canon import Q, leq_pk, phi, phi_witness
from finseq.ordinal import Ordinal
from finseq.syntax import parse_ordinal
from finseq.words import Cat, Lit, OmegaPow, embeds_exact, find_witness, normalize, unfold_oracle, witness_check
from finseq.wqo import H, enumerate_elements, h_embed, leq_elem, o_eval

__all__ = ["random_ordinal", "random_word", "SUITES", "run_all"]


def random_ordinal(rng: random.Random, depth: int = 2, width: int = 3, coeff: int = 4) -> Ordinal:
    if depth == 0:
        return Ordinal.finite(rng.randrange(coeff + 1))
    terms = [(random_ordinal(rng, depth - 1, width, coeff), rng.randint(1, coeff)) for _ in range(rng.randint(0, width))]
    return Ordinal(terms)


def random_word(rng: random.Random, letters, max_level: int = 2, max_items: int = 3):
    n = rng.randint(1, max_items)
    parts = []
    for _ in range(n):
        lv = rng.randint(0, max_level)
        if lv == 0:
            parts.append(Lit(rng.choice(letters)))
        else:
            parts.append(OmegaPow(random_word(rng, letters, lv - 1, max_items)))
    return normalize(Cat(tuple(parts)))


def _ordinal_laws(rng, n=200):
    ok = 0
    for _ in range(n):
        a, b, c = (random_ordinal(rng) for _ in range(3))
        good = (
            o.nat_add(a, b) == o.nat_add(b, a)
            and o.nat_mul(a, b) == o.nat_mul(b, a)
            and o.nat_mul(a, o.nat_add(b, c)) == o.nat_add(o.nat_mul(a, b), o.nat_mul(a, c))
            and o.two_pow(o.ord_add(a, b)) == o.ord_mul(o.two_pow(a), o.two_pow(b))
            and parse_ordinal(str(a)) == a
        )
        ok += good
    return ok, n


def _word_oracle(rng, n=200):
    ok = 0
    for _ in range(n):
        s, t = random_word(rng, "ab"), random_word(rng, "ab")
        verdict = embeds_exact(s, t)
        good = True
        if verdict:
            w = find_witness(s, t)
            good = w is not None and witness_check(s, t, w) and unfold_oracle(s, t, 3)
        ok += good
    return ok, n


def _phi_monotone(rng, n=100):
    def rset(level):
        if level == 0:
            return rng.choice("abc")
        return frozenset(Q(lv, rset(lv)) for lv in (rng.randrange(level) for _ in range(rng.randint(1, 3))))

    order = lambda x, y: x == y or (x, y) in {("a", "b"), ("a", "c")}
    ok = total = 0
    while total < n:
        a, b = rset(2), rset(2)
        if not leq_pk(a, b, order):
            continue
        total += 1
        w = phi_witness(2, a, b, order)
        ok += witness_check(phi(2, a), phi(2, b), w, order) and embeds_exact(phi(2, a), phi(2, b), order)
    return ok, total


def _h_family(rng, n=20):
    ok = 0
    samples = [o.ONE, Ordinal.finite(3), o.OMEGA, o.ord_add(o.OMEGA, 2), o.omega_pow(2), o.omega_pow(o.OMEGA)]
    for _ in range(n):
        b, b2 = sorted(rng.sample(samples, 2))
        f = h_embed(b, b2)
        els = enumerate_elements(H(b), 15).elements
        good = o_eval(H(b)).value == b
        for x in els:
            for y in els:
                good &= leq_elem(H(b), x, y) == leq_elem(H(b2), f(x), f(y))
        ok += good
    return ok, n


def _bound_gap(rng, n=100):
    ok = 0
    for _ in range(n):
        b = random_ordinal(rng, 2, 2, 3)
        ok += bounds.lower_report(o.omega_pow(2), b)[0] <= bounds.upper_omega_k(2, b).finseq
    return ok, n


SUITES: Dict[str, Callable[[random.Random], Tuple[int, int]]] = {
    "ordinal-laws": _ordinal_laws,
    "word-embedding": _word_oracle,
    "phi-monotonicity": _phi_monotone,
    "h-family": _h_family,
    "bound-gap": _bound_gap,
}


def run_all(seed: int = 0) -> Dict[str, Tuple[int, int]]:
    return {name: fn(random.Random(f"{seed}-{name}")) for name, fn in SUITES.items()}
