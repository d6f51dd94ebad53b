import itertools
import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, strategies as st

from revblocks import fixtures
from revblocks import perm as P
from revblocks.errors import NotConcurrent, ParseError, PreconditionError, WidthMismatch
from revblocks.perm import Perm

from conftest import perm_pairs, perms, rng


def cyc(text, n=None):
    return P.parse_cycles(text, n)


# ------------------------------------------------------------ construction


def test_identity_and_images():
    e = P.identity(3)
    assert e.is_identity()
    assert e.image.tolist() == list(range(8))
    with pytest.raises(ValueError):
        e.image[0] = 1


def test_rejects_bad_tables():
    with pytest.raises(PreconditionError, match="position 1"):
        Perm(1, [0, 0])
    with pytest.raises(PreconditionError, match="out of range"):
        Perm(1, [0, 2])
    with pytest.raises(PreconditionError):
        Perm(2, [0, 1, 2])


def test_bit_order_msb_first():
    # (00,01)(10,11) flips the last bit, i.e. dimension 2.
    t = cyc("(00,01)(10,11)")
    assert t.image.tolist() == [1, 0, 3, 2]
    assert P.mask(2, 1) == 2 and P.mask(2, 2) == 1


# ------------------------------------------------------------- composition


def test_compose_applies_right_first():
    p = P.from_cycles(2, [[0, 1]])
    q = P.from_cycles(2, [[1, 2]])
    pq = P.compose(p, q)
    assert all(pq(x) == p(q(x)) for x in range(4))


def test_compose_identity_and_inverse():
    q = P.random_perm(4, rng(1))
    assert P.compose(P.identity(4), q) == q
    assert P.compose(q, P.inverse(q)).is_identity()


def test_compose_width_mismatch():
    with pytest.raises(WidthMismatch):
        P.compose(P.identity(2), P.identity(3))


def test_three_factor_product_of_worked_instance():
    f = [fixtures.factor(k) for k in ("F1", "F2", "F3")]
    assert P.compose(*f) == cyc(fixtures.F123)


@given(perm_pairs(max_n=5), st.integers(0, 2**32 - 1))
def test_compose_associative(pq, seed):
    p, q = pq
    r = P.random_perm(p.n, rng(seed))
    assert P.compose(P.compose(p, q), r) == P.compose(p, P.compose(q, r))


# ------------------------------------------------------------------ parity


def test_parity_examples():
    assert P.parity(cyc("(000,001)(101,111)(010,110)")) == P.ODD
    assert P.parity(P.identity(3)) == P.EVEN
    assert P.parity(fixtures.sigma()) == P.EVEN


def test_parity_homomorphism_exhaustive_n2():
    group = [Perm(2, im) for im in itertools.permutations(range(4))]
    for p in group:
        for q in group:
            odd = (P.parity(p) == P.ODD) ^ (P.parity(q) == P.ODD)
            assert (P.parity(P.compose(p, q)) == P.ODD) == odd


@given(perm_pairs(max_n=10))
def test_parity_homomorphism(pq):
    p, q = pq
    odd = (P.parity(p) == P.ODD) ^ (P.parity(q) == P.ODD)
    assert (P.parity(P.compose(p, q)) == P.ODD) == odd


@given(perms(max_n=9))
def test_parity_matches_transposition_count(p):
    # A k-cycle is k-1 transpositions.
    swaps = sum(len(c) - 1 for c in P.cycle_decomposition(p))
    assert (P.parity(p) == P.ODD) == bool(swaps % 2)


# ------------------------------------------------------------------ cycles


def test_cycle_pattern_examples():
    assert P.cycle_pattern(P.identity(2)) == {1: 4}
    fg = cyc(fixtures.F_INV_G)
    assert P.cycle_decomposition(fg, include_fixed=False) == [[0, 5, 4, 6], [1, 2]]
    assert P.cycle_pattern(fg) == {4: 1, 2: 1, 1: 2}


@given(perms(max_n=8))
def test_cycles_recompose(p):
    cycles = P.cycle_decomposition(p)
    assert sorted(x for c in cycles for x in c) == list(range(p.size))
    assert all(c[0] == min(c) for c in cycles)
    assert [c[0] for c in cycles] == sorted(c[0] for c in cycles)
    assert P.from_cycles(p.n, cycles) == p
    pat = P.cycle_pattern(p)
    assert sum(k * v for k, v in pat.items()) == p.size


@given(perms(max_n=10))
def test_cycle_pattern_matches_naive_walk(p):
    seen, lengths = set(), []
    for x in range(p.size):
        k = 0
        while x not in seen:
            seen.add(x)
            x, k = p(x), k + 1
        if k:
            lengths.append(k)
    assert P.cycle_pattern(p) == Counter(lengths)


def test_orbit_labels_on_long_cycle():
    n = 12
    shift = Perm(n, np.roll(np.arange(1 << n), 1))
    assert P.cycle_pattern(shift) == {1 << n: 1}
    assert P.num_cycles(shift) == 1


def test_dist_examples():
    c = cyc("(000,101,100,110)")
    assert P.dist(c, 0b000, 0b000) == 0
    assert P.dist(c, 0b000, 0b100) == 2
    assert P.dist_min(c, 0b000, 0b110) == 1
    assert P.dist(c, 0b000, 0b001) == math.inf
    assert P.support(c) == {0b000, 0b101, 0b100, 0b110}


# --------------------------------------------------------- concurrency


def test_concurrency_examples():
    t = cyc("(00,01)(10,11)")
    assert P.is_concurrent(t, 1)
    assert P.restrict(t, 1) == cyc("(0,1)")
    f, g = P.controlled_halves(t, 1)
    assert f == g == cyc("(0,1)")
    assert P.is_concurrent(fixtures.factor("F8"), 3)
    e = P.identity(4)
    assert all(P.is_concurrent(e, i) and P.concurrent_parity(e, i) == P.EVEN for i in range(1, 5))


def test_lift_example():
    # Lifting along dimension i leaves bit i alone and acts on the others.
    assert P.lift(cyc("(0,1)"), 1) == cyc("(00,01)(10,11)")
    assert P.lift(cyc("(0,1)"), 2) == cyc("(00,10)(01,11)")


def test_restrict_rejects_non_concurrent():
    with pytest.raises(NotConcurrent):
        P.restrict(cyc("(00,01)"), 1)
    with pytest.raises(NotConcurrent):
        P.concurrent_parity(cyc("(00,01)"), 1)
    with pytest.raises(NotConcurrent):
        P.controlled_halves(cyc("(00,10)"), 1)


def test_controlled_halves_of_worked_instance():
    f, g = P.controlled_halves(cyc(fixtures.CONTROLLED), 1)
    assert f == cyc("(000,001)(010,011)(100,101)(110,111)")
    assert g == cyc("(000,100,111,110,001,011,010)")
    assert P.controlled_halves(P.identity(3), 1) == (P.identity(2), P.identity(2))


def test_lift_restrict_exhaustive_n3():
    # Every concurrent permutation at n = 3 is a lift, and lifting is injective.
    group = [Perm(3, im) for im in itertools.permutations(range(8))]
    for i in (1, 2, 3):
        conc = [p for p in group if P.is_concurrent(p, i)]
        assert len(conc) == 24
        assert all(P.lift(P.restrict(p, i), i) == p for p in conc)
        assert len({P.restrict(p, i) for p in conc}) == 24


@given(perms(max_n=7), st.data())
def test_lift_restrict_round_trip(q, data):
    i = data.draw(st.integers(1, q.n + 1))
    p = P.lift(q, i)
    assert P.is_concurrent(p, i) and P.is_controlled(p, i)
    assert P.restrict(p, i) == q
    # A lifted block is always even as a permutation of the full cube.
    assert P.is_even(p)


@given(perm_pairs(max_n=7), st.data())
def test_assemble_halves_round_trip(fg, data):
    f, g = fg
    i = data.draw(st.integers(1, f.n + 1))
    p = P.assemble_controlled(f, g, i)
    assert P.is_controlled(p, i)
    assert P.controlled_halves(p, i) == (f, g)
    assert P.is_concurrent(p, i) == (f == g)


@given(perms(max_n=7), st.data())
def test_predicates_match_definitions(p, data):
    i = data.draw(st.integers(1, p.n))
    m = P.mask(p.n, i)
    xs = range(p.size)
    assert P.is_controlled(p, i) == all((p(x) & m) == (x & m) for x in xs)
    conc = P.is_controlled(p, i) and all(p(x ^ m) == p(x) ^ m for x in xs)
    assert P.is_concurrent(p, i) == conc


def test_concurrent_swap_pairs():
    s = P.concurrent_swap_pairs(3, 1, [(0b000, 0b011)])
    assert s == cyc("(000,011)(100,111)")
    with pytest.raises(PreconditionError):
        P.concurrent_swap_pairs(3, 1, [(0b000, 0b100)])


# ------------------------------------------------------------ conjugation


def test_conjugate_examples():
    p = P.random_perm(3, rng(2))
    assert P.conjugate(P.identity(3), p) == p
    h = cyc(fixtures.CONJ, 3)
    s1, s2 = (cyc(t) for t in fixtures.PAIR)
    assert P.conjugate(h, cyc(fixtures.F_INV_G, 3)) == P.compose(s1, s2)


@given(perm_pairs(max_n=8))
def test_conjugation_preserves_pattern(hp):
    h, p = hp
    c = P.conjugate(h, p)
    assert P.cycle_pattern(c) == P.cycle_pattern(p)
    assert c == P.compose(h, p, P.inverse(h))


# ------------------------------------------------------------ text formats


def test_parse_cycles_examples():
    p = cyc("(0000,0001)(0010,0011)", 4)
    assert p.image.tolist()[:4] == [1, 0, 3, 2]
    assert P.format_cycles(fixtures.sigma()) == "(0010,0011,1011,1010)(0101,1001,1100)(0110,0111,1111,1110)"


@pytest.mark.parametrize("text", ["(01,2)", "(01,011)", "x(01,10)", "(00,01)(01,10)"])
def test_parse_cycles_errors(text):
    with pytest.raises(ParseError):
        P.parse_cycles(text)


def test_parse_images_errors():
    with pytest.raises(ParseError, match="duplicate image at position 1"):
        P.parse_images("1\n0 0\n")
    with pytest.raises(ParseError):
        P.parse_images("25\n0\n")
    with pytest.raises(ParseError):
        P.parse_images("")


@given(perms(max_n=6))
def test_text_round_trips(p):
    assert P.parse_images(P.format_images(p)) == p
    text = P.format_images(p)
    assert P.format_images(P.parse_images(text)) == text
    if not p.is_identity():
        assert P.parse_cycles(P.format_cycles(p), p.n) == p


def test_random_perm_reproducible_and_even():
    a = P.random_perm(8, rng(5), even=True)
    assert a == P.random_perm(8, rng(5), even=True)
    assert P.is_even(a)
    assert P.digest(a) == P.digest(P.random_perm(8, rng(5), even=True))
