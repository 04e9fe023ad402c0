"""Acceptance criteria, one test per criterion.

Each test records a ``criterion N PASS/FAIL: ...`` line, printed in the terminal
summary, before asserting.
"""

import itertools
import random

from conftest import ACCEPTANCE_LINES, random_poset
from finseq import bounds
from finseq import ordinal as o
from finseq.canon import Q, decompose, decompose_eq, leq_pk, phi, phi_witness
from finseq.lower import MaximalDecomposition, extract_maximals, leq_powerset, psi_star
from finseq.ordinal import OMEGA, ZERO, Ordinal
from finseq.selftest import random_ordinal, random_word
from finseq.syntax import parse_ordinal
from finseq.words import (
    EPS,
    Cat,
    Lit,
    OmegaPow,
    embeds_exact,
    equivalent,
    find_witness,
    length,
    level,
    normalize,
    unfold_oracle,
    witness_check,
)
from finseq.wqo import H, Base, PosetSpec, enumerate_elements, h_embed, is_valid, leq_elem, o_eval

P = parse_ordinal
W = OMEGA


def record(n, ok, detail):
    ACCEPTANCE_LINES.append(f"criterion {n} {'PASS' if ok else 'FAIL'}: {detail}")
    return ok


def wpow2(x):
    return o.omega_pow(o.omega_pow(x))


# -- 1 --------------------------------------------------------------------------------------


def test_criterion_1_higman_table():
    table = {
        "0": "1",
        "1": "w",
        "2": "w^w",
        "3": "w^(w^2)",
        "7": "w^(w^6)",
        "w": "w^(w^w)",
        "w+1": "w^(w^(w+1))",
        "w^w": "w^(w^(w^w))",
        "w^w*2+1": "w^(w^(w^w*2+1))",
    }
    hits = sum(bounds.h_fun(P(b)) == P(v) for b, v in table.items())
    assert record(1, hits == 9, f"Higman table {hits}/9 exact matches")


# -- 2 --------------------------------------------------------------------------------------


def test_criterion_2_k2_upper_bound():
    got = tuple(bounds.upper_omega_k(2, 2))
    want = (wpow2(4), o.nat_mul(wpow2(4), 31), Ordinal.finite(31))
    generic = wpow2(o.ord_add(o.nat_add(o.minus_one_plus(o.two_pow(2)), 2), 1))
    ok = got == want and generic == wpow2(6) and generic > got[0]
    assert record(2, ok, f"upper_omega_k(2,2) = ({', '.join(map(str, got))}); generic display {generic} dominates")


# -- 3 --------------------------------------------------------------------------------------


def test_criterion_3_schmidt():
    up = bounds.upper_alpha(P("w+1"), 2, "finseq")
    ok = up == P("w^w*4") and up >= P("w^w*3+1") >= P("w^w*2+1")
    assert record(3, ok, f"upper_alpha(w+1, 2) = {up} >= w^w*3 + 1 >= w^w*2 + 1")


# -- 4 --------------------------------------------------------------------------------------

LETTERS = "abc"

# every quasi-order on three points up to isomorphism
ORDERS = {
    "antichain": [],
    "all-equivalent": [("a", "b"), ("b", "a"), ("b", "c"), ("c", "b")],
    "chain": [("a", "b"), ("b", "c")],
    "a<b, c": [("a", "b")],
    "V": [("a", "b"), ("a", "c")],
    "Lambda": [("a", "c"), ("b", "c")],
    "a~b, c": [("a", "b"), ("b", "a")],
    "a~b<c": [("a", "b"), ("b", "a"), ("b", "c")],
    "c<a~b": [("a", "b"), ("b", "a"), ("c", "a")],
}


def _closure(pairs):
    rel = {(x, x) for x in LETTERS} | set(pairs)
    while True:
        extra = {(x, z) for (x, y), (y2, z) in itertools.product(rel, repeat=2) if y == y2} - rel
        if not extra:
            return frozenset(rel)
        rel |= extra


def _primitive(v):
    n = len(v)
    for d in range(1, n):
        if n % d == 0 and v[:d] * (n // d) == v:
            return v[:d]
    return v


def _canonical(u, v):
    """Shortest prefix and primitive period describing the sequence u v v v ..."""
    if not v:
        return u, v
    v = _primitive(v)
    while u and u[-1] == v[-1]:
        u, v = u[:-1], v[-1] + v[:-1]
    return u, v


def _level1_space():
    keys = set()
    for lu, lv in itertools.product(range(4), repeat=2):
        for u in itertools.product(LETTERS, repeat=lu):
            for v in itertools.product(LETTERS, repeat=lv):
                keys.add(_canonical("".join(u), "".join(v)))
    return sorted(keys, key=lambda k: (len(k[0]) + len(k[1]), k))


def _term(u, v):
    parts = [Lit(x) for x in u]
    if v:
        parts.append(OmegaPow(normalize(Cat(tuple(Lit(x) for x in v)))))
    return normalize(Cat(tuple(parts))) if parts else EPS


def _greedy(u, target, rel):
    j = 0
    for x in u:
        while j < len(target) and (x, target[j]) not in rel:
            j += 1
        if j == len(target):
            return False
        j += 1
    return True


def _sequence_oracle(s, t, rel):
    """u v^w <= u' v'^w: u fits greedily into u' v'^|u| and every letter of v
    is below a letter of v' (those are the letters occurring infinitely often)."""
    (u, v), (u2, v2) = s, t
    if v and not v2:
        return False
    if not _greedy(u, u2 + v2 * len(u), rel):
        return False
    return all(any((x, y) in rel for y in v2) for x in v)


def _automorphisms(rel):
    for p in itertools.permutations(LETTERS):
        m = dict(zip(LETTERS, p))
        if {(m[x], m[y]) for x, y in rel} == rel:
            yield m


def test_criterion_4_level1_exhaustive():
    space = _level1_space()
    terms = [_term(u, v) for u, v in space]
    index = {w: i for i, w in enumerate(space)}
    total = bad = positives = 0
    for pairs in ORDERS.values():
        rel = _closure(pairs)
        leq = lambda x, y, rel=rel: (x, y) in rel
        auts = list(_automorphisms(rel))
        # s up to automorphism of the order; t ranges over everything
        reps = [
            i
            for i, (u, v) in enumerate(space)
            if i == min(index[_canonical("".join(m[x] for x in u), "".join(m[x] for x in v))] for m in auts)
        ]
        for i in reps:
            for j in range(len(space)):
                want = _sequence_oracle(space[i], space[j], rel)
                positives += want
                bad += embeds_exact(terms[i], terms[j], leq) != want
                total += 1
    detail = f"{total} pairs over {len(space)} words x {len(ORDERS)} quasi-orders, {positives} embeddings, {bad} disagreements"
    assert record(4, bad == 0, detail)


# -- 5 --------------------------------------------------------------------------------------


def test_criterion_5_level2_cross_validation():
    rng = random.Random(2024)
    orders = [lambda x, y: x == y, lambda x, y: x <= y]
    pairs = positives = witnessed = bad = 0
    while pairs < 500:
        s, t = random_word(rng, "abc"), random_word(rng, "abc")
        if max(level(s), level(t)) != 2:
            continue
        leq = orders[pairs % 2]
        pairs += 1
        if not embeds_exact(s, t, leq):
            continue
        positives += 1
        w = find_witness(s, t, leq)
        if w is not None:
            witnessed += 1
            bad += not witness_check(s, t, w, leq)
        bad += not all(unfold_oracle(s, t, n, leq) for n in range(1, 5))
    detail = f"{pairs} pairs, {positives} positive, {witnessed} witness-checked, {bad} inconsistencies"
    assert record(5, bad == 0, detail)


# -- 6 --------------------------------------------------------------------------------------

_ORDER6 = {("a", "b"), ("a", "c")}


def _leq6(x, y):
    return x == y or (x, y) in _ORDER6


def _random_pk(rng, lev):
    if lev == 0:
        return rng.choice(LETTERS)
    return frozenset(Q(lv, _random_pk(rng, lv)) for lv in (rng.randrange(lev) for _ in range(rng.randint(1, 3))))


def test_criterion_6_phi_monotone_and_surjective():
    rng = random.Random(6)
    pairs = bad = 0
    while pairs < 1000:
        k = 1 + pairs % 2
        x, y = _random_pk(rng, k), _random_pk(rng, k)
        if not leq_pk(x, y, _leq6):
            continue
        pairs += 1
        wit = phi_witness(k, x, y, _leq6)
        bad += not witness_check(phi(k, x), phi(k, y), wit, _leq6)
    trips = 0
    while trips < 200:
        s = random_word(rng, LETTERS)
        n = length(s)
        if n < o.omega_pow(2):
            back = phi(2, decompose(s, 2))
        elif n == o.omega_pow(2) or n == W:
            k = 2 if n == o.omega_pow(2) else 1
            w, T = decompose_eq(s, k, _leq6)
            back = normalize(Cat((phi(k, w), phi(k, T))))
        else:
            continue
        trips += 1
        bad += not equivalent(back, s, _leq6)
    assert record(6, bad == 0, f"{pairs} witness-checked phi pairs, {trips} decomposition round trips, {bad} failures")


# -- 7 --------------------------------------------------------------------------------------


def _higman(u, v, leq):
    j = 0
    for x in u:
        while j < len(v) and not leq(x, v[j]):
            j += 1
        if j == len(v):
            return False
        j += 1
    return True


def _random_set_word(rng, ys):
    return [frozenset(rng.sample(ys, rng.randint(1, min(2, len(ys))))) for _ in range(rng.randint(0, 3))]


def _psi_sweep(rng, d, ys, n):
    fails = 0
    for _ in range(n):
        u, w = _random_set_word(rng, ys), _random_set_word(rng, ys)
        want = _higman(u, w, lambda x, y: leq_powerset(d, x, y))
        fails += embeds_exact(psi_star(1, d, u), psi_star(1, d, w), d.leq) != want
    return fails


def test_criterion_7_psi_prime_embedding():
    rng = random.Random(7)
    fails = neg_fails = neg_pairs = 0
    for _ in range(20):
        X = random_poset(rng, 4)
        d = extract_maximals(Base(X), 1)
        (v,) = d.v
        ys = [x for x in X.elements if x != v]
        fails += _psi_sweep(rng, d, ys, 25)
        # negative control: put the separator strictly below some element of Y
        above = [y for y in ys if not X.leq(y, v)]
        if above:
            mutated = PosetSpec(X.elements, list(X.relation()) + [(v, rng.choice(above))])
            bad = MaximalDecomposition(Base(mutated), (v,))
            assert not bad.is_valid()
            neg_fails += _psi_sweep(rng, bad, ys, 25)
            neg_pairs += 25
    ok = fails == 0 and neg_fails >= 1
    detail = f"500 pairs on 20 posets, {fails} failures; negative control {neg_fails} reflection failures in {neg_pairs} pairs (need >= 1)"
    assert record(7, ok, detail)


# -- 8 --------------------------------------------------------------------------------------


def _exponent_below_w3(rng):
    return Ordinal([(2, rng.randint(0, 2)), (1, rng.randint(0, 3)), (0, rng.randint(0, 3))])


def _beta_up_to_w_w3(rng):
    if rng.random() < 0.05:
        return wpow2(3)
    terms = [(_exponent_below_w3(rng), rng.randint(1, 3)) for _ in range(rng.randint(1, 3))]
    beta = Ordinal(terms)
    return beta if beta else Ordinal.finite(1)


def _beta_up_to_w_w_3(rng):
    if rng.random() < 0.15:
        return o.nat_mul(o.omega_pow(W), rng.randint(1, 3))
    terms = [(rng.randint(0, 3), rng.randint(1, 3)) for _ in range(rng.randint(1, 3))]
    head = [(W, rng.randint(1, 2))] if rng.random() < 0.4 else []
    return Ordinal(head + terms)


def test_criterion_8_h_family():
    rng = random.Random(8)
    betas = [_beta_up_to_w_w3(rng) for _ in range(100)]
    wrong = sum(o_eval(H(b)) != (b, True) for b in betas)
    cap = o.nat_mul(o.omega_pow(W), 3)
    pairs = bad = 0
    done = 0
    while done < 20:
        b1, b2 = sorted([_beta_up_to_w_w_3(rng), _beta_up_to_w_w_3(rng)])
        assert b2 <= cap
        els = enumerate_elements(H(b1), 12).elements
        grid = list(itertools.product(els, repeat=2))
        if len(grid) < 50:  # H of a small finite beta
            continue
        done += 1
        f = h_embed(b1, b2)
        for x, y in rng.sample(grid, 50):
            pairs += 1
            bad += not (is_valid(H(b2), f(x)) and leq_elem(H(b1), x, y) == leq_elem(H(b2), f(x), f(y)))
    detail = f"o_eval(H(b)) = b for {100 - wrong}/100; h_embed {pairs} element pairs over 20 (b, b') pairs, {bad} violations"
    assert record(8, wrong == 0 and bad == 0 and pairs >= 1000, detail)


# -- 9 --------------------------------------------------------------------------------------


def test_criterion_9_u_sandwich():
    good, notes = 0, []
    for base in [ZERO, W, o.omega_pow(2), o.omega_pow(W)]:
        for k in range(1, 7):
            e = o.two_pow(o.ord_add(base, k - 1))
            u = bounds.u_fun(o.ord_add(base, k))
            try:
                low = wpow2(bounds.minus_two_plus(e))
            except ValueError:
                notes.append(f"beta={base}, k={k}: lower side -2 + {e} undefined (u = {u})")
                continue
            if low <= u <= wpow2(o.ord_add(e, 1)):
                good += 1
            else:
                notes.append(f"beta={base}, k={k}: {low} <= {u} fails")
    detail = f"{good}/24 exact comparisons" + (f"; {'; '.join(notes)}" if notes else "")
    assert record(9, good == 24, detail)


# -- 10 -------------------------------------------------------------------------------------


def _small_beta(rng):
    exps = [Ordinal.finite(0), Ordinal.finite(1), Ordinal.finite(2), W, P("w+1"), P("w^2")]
    terms = [(rng.choice(exps), rng.randint(1, 3)) for _ in range(rng.randint(0, 3))]
    return Ordinal(terms)


def test_criterion_10_gap_sanity():
    rng = random.Random(10)
    bad = limits = 0
    for _ in range(200):
        beta = _small_beta(rng)
        bad += bounds.lower_report(o.omega_pow(2), beta)[0] > bounds.upper_omega_k(2, beta).finseq
        if not beta.is_zero() and not o.successor_split(beta)[0]:
            limits += 1
            low, exact = bounds.lower_report(W, beta)
            bad += not (exact and low == bounds.upper_omega_k(1, beta).indec == o.minus_one_plus(o.two_pow(beta)))
    assert record(10, bad == 0, f"200 betas ({limits} limits), {bad} violations")


# -- 11 -------------------------------------------------------------------------------------


def test_criterion_11_ordinal_laws():
    rng = random.Random(11)
    bad = 0
    for _ in range(10000):
        a, b, c = (random_ordinal(rng) for _ in range(3))
        bad += not (
            o.nat_add(a, b) == o.nat_add(b, a)
            and o.nat_mul(a, b) == o.nat_mul(b, a)
            and o.nat_add(o.nat_add(a, b), c) == o.nat_add(a, o.nat_add(b, c))
            and o.nat_mul(o.nat_mul(a, b), c) == o.nat_mul(a, o.nat_mul(b, c))
            and o.nat_mul(a, o.nat_add(b, c)) == o.nat_add(o.nat_mul(a, b), o.nat_mul(a, c))
            and o.two_pow(o.ord_add(a, b)) == o.ord_mul(o.two_pow(a), o.two_pow(b))
        )
    trips = sum(P(str(x)) != x for x in (random_ordinal(rng) for _ in range(10000)))
    assert record(11, bad == 0 and trips == 0, f"10000 triples, {bad} law violations; 10000 parser round trips, {trips} mismatches")
