import pytest
from hypothesis import given, strategies as st

from conftest import ordinals
from finseq import ordinal as o
from finseq.ordinal import OMEGA, ONE, ZERO, Ordinal
from finseq.syntax import parse_ordinal

W = OMEGA


def P(text):
    return parse_ordinal(text)


# -- independent oracles ---------------------------------------------------------


def expand(x: Ordinal) -> list:
    """Fully expanded nested list: one entry per unit term, exponents expanded too."""
    out = []
    for e, c in x.terms:
        out.extend([expand(e)] * c)
    return out


def brute_cmp(a: list, b: list) -> int:
    for x, y in zip(a, b):
        c = brute_cmp(x, y)
        if c:
            return c
    return (len(a) > len(b)) - (len(a) < len(b))


def merge_oracle(a: Ordinal, b: Ordinal) -> Ordinal:
    """Natural sum: pool all unit terms and re-sort."""
    units = [(e, 1) for e, c in a.terms for _ in range(c)] + [(e, 1) for e, c in b.terms for _ in range(c)]
    return Ordinal(units)


def repeated_add(a: Ordinal, n: int) -> Ordinal:
    out = ZERO
    for _ in range(n):
        out = o.ord_add(out, a)
    return out


# -- examples ----------------------------------------------------------------------


def test_compare_examples():
    assert o.compare(0, 0) == 0
    assert o.compare(W, 5) == 1
    assert o.compare(P("w^w*2+1"), P("w^w*3")) == -1


def test_natural_examples():
    assert o.nat_add(2, 3) == 5
    assert o.nat_add(P("w+1"), W) == P("w*2+1")
    assert o.nat_mul(o.omega_pow(W), 4) == P("w^w*4")


def test_ordinary_examples():
    assert o.ord_add(1, W) == W
    assert o.ord_add(W, 1) == P("w+1")
    assert o.ord_mul(o.omega_pow(W), W) == o.omega_pow(P("w+1"))


def test_omega_pow_examples():
    assert o.omega_pow(0) == 1
    assert o.omega_pow(1) == W
    assert o.omega_pow(W) == P("w^w")


def test_two_pow_examples():
    assert o.two_pow(5) == 32
    assert o.two_pow(W) == W
    assert o.two_pow(o.omega_pow(2)) == o.omega_pow(W)


def test_two_pow_limit_is_least_upper_bound_of_finite_multiples():
    # 2^(w*n) = w^n, and w^w is the least ordinal above every w^n
    for n in range(1, 8):
        assert o.two_pow(o.ord_mul(W, n)) == o.omega_pow(n)
        assert o.two_pow(o.ord_mul(W, n)) < o.two_pow(o.omega_pow(2))
    assert o.two_pow(o.omega_pow(2)) == o.omega_pow(W)


def test_minus_one_plus():
    assert o.minus_one_plus(1) == 0
    assert o.minus_one_plus(32) == 31
    assert o.minus_one_plus(o.omega_pow(W)) == o.omega_pow(W)
    with pytest.raises(ValueError):
        o.minus_one_plus(0)


def test_successor_split():
    assert o.successor_split(P("w+1")) == (True, W)
    assert o.successor_split(o.omega_pow(2)) == (False, None)
    assert o.successor_split(7) == (True, Ordinal.finite(6))
    assert o.successor_split(0) == (False, None)


def test_printer():
    assert str(P("w^(w^2)*3 + w*2 + 5")) == "w^(w^2)*3 + w*2 + 5"
    assert str(ZERO) == "0"
    assert str(P("w^(w+1)")) == "w^(w + 1)"
    assert str(P("3 + w")) == "w"


def test_constructor_normalizes():
    assert Ordinal([(0, 2), (1, 1), (0, 3)]) == Ordinal([(1, 1), (0, 5)])
    assert Ordinal([(1, 0)]) == ZERO
    with pytest.raises(ValueError):
        Ordinal([(1, -1)])


def test_epsilon_guard_is_unreachable():
    for x in [ZERO, ONE, W, o.omega_pow(W), o.omega_pow(o.omega_pow(W)), P("w^(w^w)+3")]:
        assert not o.is_epsilon_plus_finite(x)


# -- oracle comparisons -------------------------------------------------------------


@given(ordinals(), ordinals())
def test_compare_matches_expanded_comparator(a, b):
    assert o.compare(a, b) == brute_cmp(expand(a), expand(b))


@given(ordinals(), ordinals())
def test_nat_add_matches_merge(a, b):
    assert o.nat_add(a, b) == merge_oracle(a, b)


@given(ordinals(), st.integers(0, 6))
def test_ord_mul_by_finite_is_repeated_addition(a, n):
    assert o.ord_mul(a, n) == repeated_add(a, n)


# -- algebraic laws -------------------------------------------------------------------


@given(ordinals(), ordinals(), ordinals())
def test_natural_operations_laws(a, b, c):
    assert o.nat_add(a, b) == o.nat_add(b, a)
    assert o.nat_mul(a, b) == o.nat_mul(b, a)
    assert o.nat_add(o.nat_add(a, b), c) == o.nat_add(a, o.nat_add(b, c))
    assert o.nat_mul(o.nat_mul(a, b), c) == o.nat_mul(a, o.nat_mul(b, c))
    assert o.nat_mul(a, o.nat_add(b, c)) == o.nat_add(o.nat_mul(a, b), o.nat_mul(a, c))


@given(ordinals(), ordinals(), ordinals())
def test_ordinary_operations_laws(a, b, c):
    assert o.ord_add(o.ord_add(a, b), c) == o.ord_add(a, o.ord_add(b, c))
    assert o.ord_mul(o.ord_mul(a, b), c) == o.ord_mul(a, o.ord_mul(b, c))
    assert o.ord_mul(a, o.ord_add(b, c)) == o.ord_add(o.ord_mul(a, b), o.ord_mul(a, c))


@given(ordinals(), ordinals(), ordinals())
def test_monotonicity(a, b, c):
    if b < c:
        assert o.ord_add(a, b) < o.ord_add(a, c)
        if a:
            assert o.ord_mul(a, b) < o.ord_mul(a, c)
        assert o.ord_add(b, a) <= o.ord_add(c, a)
        assert o.ord_mul(b, a) <= o.ord_mul(c, a)


@given(ordinals(), ordinals(), ordinals())
def test_compare_is_total_order(a, b, c):
    assert (a < b) + (a == b) + (b < a) == 1
    if a <= b and b <= c:
        assert a <= c


@given(ordinals(), ordinals())
def test_natural_sum_dominates_ordinary_sum(a, b):
    assert o.nat_add(a, b) >= o.ord_add(a, b)


@given(ordinals(), ordinals())
def test_two_pow_laws(a, b):
    assert o.two_pow(o.ord_add(a, b)) == o.ord_mul(o.two_pow(a), o.two_pow(b))
    if a < b:
        assert o.two_pow(a) < o.two_pow(b)


@given(ordinals())
def test_canonical_form_invariants(x):
    exps = [e for e, _ in x.terms]
    assert all(b < a for a, b in zip(exps, exps[1:]))
    assert all(c >= 1 for _, c in x.terms)
    assert Ordinal(x.terms) == x and hash(Ordinal(x.terms)) == hash(x)


@given(ordinals())
def test_parse_print_round_trip(x):
    assert parse_ordinal(str(x)) == x


@given(ordinals())
def test_successor_split_inverts_successor(x):
    ok, pred = o.successor_split(o.ord_add(x, 1))
    assert ok and pred == x
