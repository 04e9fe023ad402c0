import random

from hypothesis import settings, strategies as st

from finseq.ordinal import Ordinal
from finseq.words import Cat, Lit, OmegaPow, normalize
from finseq.wqo import PosetSpec

settings.register_profile("default", max_examples=100, deadline=None)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


def ordinals(max_depth=2, max_terms=3, max_coeff=4):
    """Hypothesis strategy for ordinals below w^(w^(w^...)) of bounded size."""
    base = st.integers(0, max_coeff).map(Ordinal.finite)

    def extend(inner):
        term = st.tuples(inner, st.integers(1, max_coeff))
        return st.lists(term, max_size=max_terms).map(Ordinal)

    return st.recursive(base, extend, max_leaves=max_depth * max_terms)


def words(letters="abc", max_level=2, max_items=3):
    def seq(level):
        if level == 0:
            return st.lists(st.sampled_from(letters).map(Lit), min_size=1, max_size=max_items).map(lambda ps: normalize(Cat(tuple(ps))))
        sub = seq(level - 1)
        part = st.one_of(st.sampled_from(letters).map(Lit), sub.map(OmegaPow))
        return st.lists(part, min_size=1, max_size=max_items).map(lambda ps: normalize(Cat(tuple(ps))))

    return seq(max_level)


def random_poset(rng: random.Random, n: int, density: float = 0.3, names="abcdefgh") -> PosetSpec:
    """Random partial order: pairs only go from lower to higher index, then closed."""
    els = list(names[:n])
    le = [(els[i], els[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < density]
    return PosetSpec(els, le)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
