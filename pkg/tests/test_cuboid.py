import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from revblocks import cuboid as C
from revblocks import fixtures, oracle
from revblocks import perm as P
from revblocks.errors import PreconditionError

from conftest import perms, rng


def counts_of(sigma, r1=1, r2=2):
    return C.build_cuboid(sigma, r1, r2).counts


# ------------------------------------------------------------------ build


def test_worked_instance_counts():
    assert counts_of(fixtures.sigma()).as_tuple() == fixtures.COUNTS
    assert oracle.calibrate_taxonomy()
    assert not oracle.calibrate_taxonomy(swap_a1_a2=True)


def test_identity_is_all_white():
    cub = C.build_cuboid(P.identity(5), 1, 3)
    assert cub.all_white()
    c = cub.counts
    assert (c.a4, c.b4) == (8, 8) and c.a1 == c.a2 == c.a3 == c.b1 == c.b2 == c.b3 == 0


def test_controlled_input_is_all_white():
    f, g = P.random_perm(4, rng(1)), P.random_perm(4, rng(2))
    assert C.build_cuboid(P.assemble_controlled(f, g, 2), 2, 4).all_white()


def test_equal_dims_rejected():
    with pytest.raises(PreconditionError):
        C.build_cuboid(P.identity(3), 2, 2)


@given(perms(min_n=2, max_n=8), st.data())
def test_cuboid_invariants(sigma, data):
    r1 = data.draw(st.integers(1, sigma.n))
    r2 = data.draw(st.sampled_from([d for d in range(1, sigma.n + 1) if d != r1]))
    cub = C.build_cuboid(sigma, r1, r2)
    m = P.mask(sigma.n, r1)
    top = (np.arange(sigma.size) & m) != 0
    assert cub.color[top].sum() == cub.color[~top].sum()
    c = cub.counts
    quarter = 1 << (sigma.n - 2)
    assert c.a1 + c.a2 + c.a3 + c.a4 == c.b1 + c.b2 + c.b3 + c.b4 == quarter
    assert (c.a3 + c.a4 + c.b3 + c.b4) % 2 == 0
    # Colors straight from the definition.
    assert all(cub.color[x] == ((sigma(x) & m) != (x & m)) for x in range(sigma.size))


# ---------------------------------------------------------- η and ξ


def test_vertical_pair_stats_examples():
    assert C.vertical_pair_stats(P.identity(4), 2) == (0, 0)
    swap = P.from_cycles(4, [[0b0010, 0b1010]])
    assert C.vertical_pair_stats(swap, 1) == (0, 1)


def test_vertical_pair_stats_worked_instance():
    sigma = fixtures.sigma()
    col = C.build_cuboid(sigma, 1, 2).color
    pairs = [(x, x | 0b1000) for x in range(8)]
    eta = sum(col[u] != col[v] for u, v in pairs)
    xi = sum(col[u] and col[v] for u, v in pairs)
    assert C.vertical_pair_stats(sigma, 1) == (eta, xi)


@given(st.sampled_from([C.BAD1, C.BAD2]), st.integers(4, 6), st.integers(0, 2**32 - 1))
def test_eta_xi_under_concurrent_factors(label, n, seed):
    g = rng(seed)
    sigma = oracle.random_bad(n, label, g)
    eta, xi = C.vertical_pair_stats(sigma, 1)
    if label == C.BAD1:
        assert eta % 4 == 2
    else:
        assert xi % 2 == 1
    r2 = P.lift(P.random_perm(n - 1, g), 2)
    e2, x2 = C.vertical_pair_stats(P.compose(sigma, r2), 1)
    if label == C.BAD1:
        assert e2 % 4 == 2
    else:
        assert x2 % 2 == 1
    r1 = P.lift(P.random_perm(n - 1, g), 1)
    assert C.vertical_pair_stats(P.compose(sigma, r1), 1) == (eta, xi)


@given(perms(min_n=3, max_n=7), st.integers(0, 2**32 - 1))
def test_eta_xi_fixed_by_r1_factors(sigma, seed):
    r1 = P.lift(P.random_perm(sigma.n - 1, rng(seed)), 1)
    assert C.vertical_pair_stats(P.compose(sigma, r1), 1) == C.vertical_pair_stats(sigma, 1)


def test_eta_mod4_not_invariant_for_arbitrary_input():
    # Outside the bad classes the mod-4 invariance genuinely fails.
    s = P.parse_cycles("(000,010,011,110,001,100,101)")
    r2 = P.lift(P.random_perm(2, rng(0)), 2)
    before, after = C.vertical_pair_stats(s, 1), C.vertical_pair_stats(P.compose(s, r2), 1)
    assert before[1] % 2 != after[1] % 2


# ------------------------------------------------------------ classify


def test_case_classify_examples():
    assert C.case_classify(C.PairCounts(*fixtures.COUNTS)) == C.GOOD1
    # An all-white cuboid consists of white-white pairs only, so the sum rule gives Good1.
    assert C.case_classify(C.PairCounts(0, 0, 0, 4, 0, 0, 0, 4)) == C.GOOD1
    assert C.case_classify(C.PairCounts(2, 2, 0, 0, 2, 2, 0, 0)) == C.GOOD3
    assert C.case_classify(C.PairCounts(1, 1, 0, 0, 2, 0, 0, 0)) == C.BAD2


def test_case_classify_rejects_invalid_counts():
    with pytest.raises(PreconditionError):
        C.case_classify(C.PairCounts(1, 0, 0, 4, 0, 0, 0, 4))


def test_bad_for_at_most_one_second_dimension():
    g = rng(3)
    samples = [P.random_perm(n, g, even=True) for n in (4, 5) for _ in range(400)]
    samples += [oracle.random_bad(n, lab, g) for n in (4, 5) for lab in (C.BAD1, C.BAD2) for _ in range(50)]
    for s in samples:
        for r1 in range(1, s.n + 1):
            labels = [C.case_classify(counts_of(s, r1, r2)) for r2 in P.iter_dims(s.n, [r1])]
            assert sum(lab not in C.GOOD for lab in labels) <= 1


def test_bad_cases_admit_no_three_block_whitening():
    # Sampled first two factors; the counting oracle then rules out every last factor.
    g = rng(4)
    for label in (C.BAD1, C.BAD2):
        for _ in range(3):
            s = oracle.random_bad(4, label, g)
            for _ in range(100):
                pi1 = P.lift(P.random_perm(3, g), 2)
                s1 = P.lift(P.random_perm(3, g), 1)
                assert not oracle.exists_pi_to_controlled(P.compose(s, pi1, s1), 2, 1)


# ---------------------------------------------------------- switching


def test_switch_dimension_counts_examples():
    assert C.switch_dimension_counts(P.identity(4), 1, 2, 3) == C.PairCounts(0, 0, 0, 4, 0, 0, 0, 4)
    with pytest.raises(PreconditionError):
        C.switch_dimension_counts(P.identity(4), 1, 2, 2)


@given(perms(min_n=3, max_n=7, even=True))
def test_switch_dimension_counts_matches_recount(sigma):
    assert C.switch_dimension_counts(sigma, 1, 2, 3) == counts_of(sigma, 1, 3)


def test_bad1_escape_counts():
    g = rng(5)
    seen = 0
    for n in (4, 5, 6):
        for _ in range(100):
            s = oracle.random_bad(n, C.BAD1, g)
            c = counts_of(s)
            for r3 in range(3, n + 1):
                h = C.switch_dimension_counts(s, 1, 2, r3)
                assert C.case_classify(h) in C.GOOD
                if c.a3 + c.a4 == 2:
                    seen += 1
                    assert h.b3 == h.b4 == 1 << (n - 3)
    assert seen


# -------------------------------------------------------- canonical form


def test_worked_instance_canonical_step():
    pi = P.compose(fixtures.factor("F1"), fixtures.factor("F2"))
    assert P.is_concurrent(pi, 2)
    assert C.card_census(P.compose(fixtures.sigma(), pi), 1, 2) is not None


def test_canonicalize_identity():
    assert C.canonicalize(P.identity(5), 1, 2).is_identity()


@given(perms(min_n=4, max_n=8, even=True), st.data())
def test_canonicalize_tallies(sigma, data):
    r1, r2 = data.draw(st.permutations(range(1, sigma.n + 1)))[:2]
    c = counts_of(sigma, r1, r2)
    assume(c.a2 + c.a3 <= c.b2 + c.b3)
    tau, tau2 = C.canonicalize_steps(sigma, r1, r2)
    mid = counts_of(P.compose(sigma, tau), r1, r2)
    assert mid.a2 == mid.a3 == mid.b3 == 0 and mid.a4 == mid.b4
    pi = C.canonicalize(sigma, r1, r2)
    assert P.is_concurrent(pi, r2)
    census = C.card_census(P.compose(sigma, pi), r1, r2)
    t = C.card_tally(c)
    assert census == {"A": t.alpha, "B": t.beta, "C": t.gamma}
    assert t.alpha == (c.a1 - c.a2 + c.b2 - c.b1) // 2
    assert t.beta == c.b1 + c.a2
    assert t.gamma == (c.a3 + c.a4 + c.b3 + c.b4) // 2
    assert t.alpha + t.beta + t.gamma == 1 << (sigma.n - 2)


def test_canonicalize_precondition():
    g = rng(6)
    for _ in range(200):
        s = P.random_perm(5, g, even=True)
        c = counts_of(s)
        if c.a2 + c.a3 > c.b2 + c.b3:
            with pytest.raises(PreconditionError):
                C.canonicalize(s, 1, 2)
            return
    pytest.fail("no instance needing the mirror rule")


# -------------------------------------------------------------- solving


def test_worked_instance_factors_reach_controlled():
    f = fixtures.factor
    pi1 = P.compose(f("F1"), f("F2"), f("F3"))
    got = P.compose(fixtures.sigma(), pi1, f("F4"), f("F5"))
    assert got == P.parse_cycles(fixtures.CONTROLLED)
    assert P.is_concurrent(f("F4"), 1) and P.is_concurrent(f("F5"), 2) and P.is_concurrent(pi1, 2)


def test_solve_good_random():
    g = rng(7)
    done = 0
    while done < 200:
        n = int(g.integers(6, 11))
        s = P.random_perm(n, g, even=True)
        if C.case_classify(counts_of(s)) not in C.GOOD:
            continue
        pi1, s1, pi2 = C.solve_good(s, 1, 2)
        assert P.is_concurrent(pi1, 2) and P.is_concurrent(s1, 1) and P.is_concurrent(pi2, 2)
        assert C.build_cuboid(P.compose(s, pi1, s1, pi2), 1, 2).all_white()
        done += 1


def test_solve_good_rejects_bad():
    s = oracle.random_bad(5, C.BAD2, rng(8))
    with pytest.raises(PreconditionError):
        C.solve_good(s, 1, 2)


@given(perms(min_n=4, max_n=8, even=True), st.sampled_from([C.EVEN, C.ODD]))
def test_solve_good_parity_requests(sigma, want):
    assume(C.case_classify(counts_of(sigma)) in C.GOOD)
    try:
        pi1, s1, pi2 = C.solve_good(sigma, 1, 2, (want, want, want))
    except PreconditionError:
        return  # no room to toggle (tiny instances)
    assert [P.concurrent_parity(pi1, 2), P.concurrent_parity(s1, 1), P.concurrent_parity(pi2, 2)] == [want] * 3
    assert P.is_controlled(P.compose(sigma, pi1, s1, pi2), 1)


def _square_preserving_solution(n, g):
    """Random (π1, σ1, π2) where σ1 carries square 0 onto square 0."""
    f = C._Frame(n, 1, 2)
    inner = g.permutation(1 << (n - 1))
    fixed = P.remove_bit(f.node(np.zeros(2, dtype=np.int64), np.array([0, 1]), np.zeros(2, dtype=np.int64)), n, 1)
    rest = np.setdiff1d(np.arange(1 << (n - 1)), fixed)
    inner[fixed] = fixed[::-1] if g.integers(2) else fixed
    inner[rest] = g.permutation(rest)
    s1 = P.lift(P.Perm(n - 1, inner), 1)
    pi1, pi2 = (P.lift(P.random_perm(n - 1, g), 2) for _ in range(2))
    return C.Solution(1, 2, pi1, s1, pi2)


def test_parity_variant_same_product_opposite_parity():
    g = rng(9)
    for _ in range(50):
        n = int(g.integers(4, 9))
        sol = _square_preserving_solution(n, g)
        ctl = P.assemble_controlled(P.random_perm(n - 1, g), P.random_perm(n - 1, g), 1)
        rho = P.compose(sol.pi1, sol.sigma1, sol.pi2)
        sigma = P.compose(ctl, P.inverse(rho))
        alt = C.parity_variant(sol, sigma)
        assert alt is not None
        assert P.compose(alt.pi1, alt.sigma1, alt.pi2) == rho
        assert P.concurrent_parity(alt.pi1, 2) != P.concurrent_parity(sol.pi1, 2)
        assert P.concurrent_parity(alt.pi2, 2) != P.concurrent_parity(sol.pi2, 2)
        assert P.is_controlled(P.compose(sigma, alt.pi1, alt.sigma1, alt.pi2), 1)


def test_parity_variant_on_solver_output():
    g = rng(10)
    for _ in range(200):
        s = P.random_perm(int(g.integers(4, 8)), g, even=True)
        if C.case_classify(counts_of(s)) not in C.GOOD:
            continue
        sol = C._solve(s, 1, 2)
        alt = C.parity_variant(sol, s)
        if alt is not None:
            assert P.compose(alt.pi1, alt.sigma1, alt.pi2) == P.compose(sol.pi1, sol.sigma1, sol.pi2)


# ------------------------------------------------------------ to_controlled


def test_to_controlled_worked_instance():
    s = fixtures.sigma()
    blocks, ctl = C.to_controlled(s, 1)
    assert [b.dim for b in blocks] == [2, 1, 2]
    assert P.compose(s, *(b.lift() for b in blocks)) == ctl
    assert P.is_controlled(ctl, 1) and P.is_even(ctl)


def test_to_controlled_already_controlled():
    f, g = P.random_perm(5, rng(10), even=True), P.random_perm(5, rng(11), even=True)
    s = P.assemble_controlled(f, g, 1)
    blocks, ctl = C.to_controlled(s, 1)
    assert ctl == s and all(b.is_identity() for b in blocks)


def test_to_controlled_errors():
    with pytest.raises(PreconditionError):
        C.to_controlled(P.from_cycles(5, [[0, 1]]), 1)
    with pytest.raises(PreconditionError):
        C.to_controlled(P.identity(3), 1)


def test_to_controlled_random():
    g = rng(12)
    switched = 0
    for i in range(140):
        n = 6 + i % 7
        s = P.random_perm(n, g, even=True) if i % 4 else oracle.random_bad(n, (C.BAD1, C.BAD2)[i % 8 // 4], g)
        res = C.to_controlled_info(s, 1)
        dims = [b.dim for b in res.blocks]
        assert dims[1] == 1 and dims[0] == dims[2] != 1
        assert P.compose(s, *(b.lift() for b in res.blocks)) == res.sigma_ctl
        assert P.is_controlled(res.sigma_ctl, 1) and P.is_even(res.sigma_ctl)
        for r2 in P.iter_dims(n, [1]):
            assert C.build_cuboid(res.sigma_ctl, 1, r2).all_white()
        if res.switched:
            switched += 1
            assert res.label in (C.BAD1, C.BAD2) and dims[0] == 3
    assert switched


def test_to_controlled_even_blocks_are_even():
    g = rng(13)
    for i in range(60):
        n = 6 + i % 5
        s = P.random_perm(n, g, even=True) if i % 3 else oracle.random_bad(n, C.BAD2, g)
        blocks, ctl = C.to_controlled_even(s, 1)
        assert all(b.parity() == P.EVEN for b in blocks)
        assert P.compose(s, *(b.lift() for b in blocks)) == ctl
        assert P.is_controlled(ctl, 1)
