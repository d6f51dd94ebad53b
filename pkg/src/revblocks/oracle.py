"""Brute-force and counting oracles.

These check decompositions by recomposition and confirm the impossibility
statements at small widths by exhaustive (or sampled) enumeration, without
reusing any of the constructive code paths.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import fixtures
from . import perm as P
from .blocks import BLOCK7, EVEN10, GREEDY, Decomposition
from .cuboid import BAD1, BAD2, build_cuboid, case_classify, vertical_pair_stats
from .errors import WidthMismatch
from .perm import Perm

BOUNDS = {BLOCK7: 7, GREEDY: 7, EVEN10: 10}


# ------------------------------------------------------------- verification


@dataclass
class VerifyReport:
    ok: bool
    block_memberships: list[dict] = field(default_factory=list)
    product_matches: bool = False
    counts: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "product_matches": self.product_matches,
            "counts": self.counts,
            "block_memberships": self.block_memberships,
        }


def verify_factors(sigma: Perm, factors: list[tuple[Perm, int]], mode: str = BLOCK7) -> VerifyReport:
    """Check full n-bit factors: each concurrent on its dimension, product equal to σ."""
    n = sigma.n
    members = []
    prod = P.identity(n)
    for p, dim in factors:
        if p.n != n:
            raise WidthMismatch(f"factor width {p.n} does not match {n}")
        ok_dim = 1 <= dim <= n
        conc = ok_dim and P.is_concurrent(p, dim)
        par = P.concurrent_parity(p, dim) if conc else None
        members.append({"dim": dim, "concurrent": conc, "parity": par})
        prod = P.compose(prod, p)
    matches = prod == sigma
    bound = BOUNDS.get(mode, 7)
    members_ok = all(m["concurrent"] for m in members)
    if mode == EVEN10:
        members_ok = members_ok and all(m["parity"] == P.EVEN for m in members)
    counts = {"blocks": len(factors), "bound": bound}
    ok = members_ok and matches and len(factors) <= bound
    return VerifyReport(ok, members, matches, counts)


def verify_decomposition(sigma: Perm, d: Decomposition) -> VerifyReport:
    if d.n != sigma.n:
        raise WidthMismatch(f"decomposition width {d.n} does not match {sigma.n}")
    factors = []
    for b in d.blocks:
        if b.inner.n != sigma.n - 1 or not 1 <= b.dim <= sigma.n:
            factors.append((P.identity(sigma.n), 0))
            continue
        factors.append((b.lift(), b.dim))
    rep = verify_factors(sigma, factors, d.mode)
    if any(f[1] == 0 for f in factors):
        rep.product_matches = False
        rep.ok = False
    return rep


# ---------------------------------------------------- controlled reachability


def exists_pi_to_controlled(sigma: Perm, r2: int, r3: int) -> bool:
    """Whether some ``π ∈ SC^(r2)`` puts ``σ π`` in S^(r3).

    π carries each r2-pair of the domain, whose two nodes share their r3 bit,
    onto an r2-pair of the codomain.  So a solution exists iff every r2-pair is
    monochromatic under ``L(y) = σ(y)_{r3}`` and half of the pairs have label 0.
    """
    n = sigma.n
    m2, m3 = P.mask(n, r2), P.mask(n, r3)
    if r2 == r3:
        return P.is_controlled(sigma, r3)
    label = (sigma.image & m3) != 0
    x = np.arange(sigma.size)
    lo = x[(x & m2) == 0]
    if not np.array_equal(label[lo], label[lo | m2]):
        return False
    return int(np.count_nonzero(~label[lo])) == 1 << (n - 2)


@lru_cache(maxsize=16)
def _all_lifts(n: int, dim: int) -> np.ndarray:
    """Image tables of every member of SC^(dim), one per row."""
    k = n - 1
    inner = np.array(list(itertools.permutations(range(1 << k))), dtype=np.int64)
    x = np.arange(1 << n, dtype=np.int64)
    m = P.mask(n, dim)
    b = (x & m) >> (n - dim)
    y = P.remove_bit(x, n, dim)
    out = P.insert_bit(inner[:, y], n, dim, b)
    out.setflags(write=False)
    return out


def exists_pi_brute(sigma: Perm, r2: int, r3: int) -> bool:
    """Direct enumeration over SC^(r2) (small n only)."""
    T = _all_lifts(sigma.n, r2)
    prod = sigma.image[T]
    m3 = P.mask(sigma.n, r3)
    x = np.arange(sigma.size)
    return bool(np.any(np.all((prod & m3) == (x & m3), axis=1)))


# ---------------------------------------------------------- tightness sweep


def tight_instance(n: int) -> Perm:
    """Product of n disjoint swaps built bit by bit from a 3-bit seed.

    Each step keeps the old swaps on the 0-half and swaps ``0u`` with ``1u``
    for the smallest fixed point ``u``.
    """
    if n < 3:
        raise P.PreconditionError("needs n >= 3")
    cur = P.parse_cycles("(000,001)(101,111)(010,110)", 3)
    for k in range(3, n):
        img = cur.image
        u = int(np.flatnonzero(img == np.arange(cur.size))[0])
        size = cur.size
        new = np.arange(2 * size, dtype=np.int64)
        new[:size] = img
        new[u], new[size + u] = size + u, u
        cur = Perm(k + 1, new)
    return cur


def brute_new1tight(n: int = 4) -> bool:
    """No concurrent τ, π on any dims make ``σ τ π`` controlled, for the tight instance."""
    sigma = tight_instance(n)
    N = sigma.size
    x = np.arange(N)
    for r1 in range(1, n + 1):
        prod = sigma.image[_all_lifts(n, r1)]  # rows: σ τ
        for r2, r3 in itertools.permutations(range(1, n + 1), 2):
            m2, m3 = P.mask(n, r2), P.mask(n, r3)
            lo = x[(x & m2) == 0]
            label = (prod & m3) != 0
            mono = np.all(label[:, lo] == label[:, lo | m2], axis=1)
            half = np.count_nonzero(~label[:, lo], axis=1) == 1 << (n - 2)
            if np.any(mono & half):
                return False
    return True


# ------------------------------------------------------------ 3/5 sweep


def _reachable(target: np.ndarray, lifts: np.ndarray, m1: int) -> bool:
    """Some ``σ2 ∈ SC^(r2)`` with ``target σ2^{-1} ∈ SC^(r1)`` (the lift set is a group)."""
    prod = target[lifts]
    x = np.arange(target.size)
    ok = np.all((prod & m1) == (x & m1), axis=1)
    if not ok.any():
        return False
    cand = prod[ok]
    return bool(np.any(np.all(cand[:, x ^ m1] == cand ^ m1, axis=1)))


def _cycle_target(n: int, cyc) -> np.ndarray:
    img = np.arange(1 << n, dtype=np.int64)
    for a, b in zip(cyc, cyc[1:] + cyc[:1]):
        img[a] = b
    return img


def _sweep(args) -> bool:
    n, r1, r2, cycles = args
    lifts = _all_lifts(n, r2)
    m1 = P.mask(n, r1)
    return not any(_reachable(_cycle_target(n, list(c)), lifts, m1) for c in cycles)


def three_cycles(n: int) -> list[tuple[int, int, int]]:
    """Every 3-cycle once, as (min, a, b)."""
    N = 1 << n
    out = []
    for a, b, c in itertools.combinations(range(N), 3):
        out.append((a, b, c))
        out.append((a, c, b))
    return out


def _chunks(items: list, k: int) -> list[list]:
    k = max(1, k)
    step = -(-len(items) // k) if items else 1
    return [items[i:i + step] for i in range(0, len(items), step)] or [[]]


def brute_35free(
    n: int = 4, r1: int = 1, r2: int = 2, sample5: int = 1000, seed: int = 0, jobs: int = 1,
    detail: dict | None = None,
) -> bool:
    """No single 3-cycle (all of them) or sampled 5-cycle is ``σ1 σ2`` with σ1 ∈ SC^(r1), σ2 ∈ SC^(r2).

    A positive control (a concurrent double swap) must be found reachable,
    otherwise the tester is vacuous and the result is false.
    """
    if n != 4:
        raise P.PreconditionError("the sweep runs at n = 4")
    lifts = _all_lifts(n, r2)
    m1 = P.mask(n, r1)
    ctrl = P.concurrent_swap_pairs(n, r1, [(0, 1)]).image
    control = _reachable(ctrl, lifts, m1)
    threes = three_cycles(n)
    rng = np.random.default_rng(seed)
    fives = [tuple(int(v) for v in rng.choice(1 << n, 5, replace=False)) for _ in range(sample5)]
    work = [(n, r1, r2, c) for c in _chunks(threes, jobs)] + [(n, r1, r2, c) for c in _chunks(fives, jobs)]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as ex:
            results = list(ex.map(_sweep, work))
    else:
        results = [_sweep(w) for w in work]
    if detail is not None:
        detail.update(three_cycles=len(threes), five_cycles=len(fives), control_found=control)
    return control and all(results)


# --------------------------------------------------------- bad-case invariants


def random_bad(n: int, label: str, rng: np.random.Generator, r1: int = 1, r2: int = 2) -> Perm:
    """Random even σ whose (r1, r2) cuboid falls in the given bad class.

    Colors are drawn column by column (a column is an r2-pair), balanced so the
    black counts on the two r1-faces agree, then realized by a random bijection.
    """
    N = 1 << n
    m1, m2 = P.mask(n, r1), P.mask(n, r2)
    x = np.arange(N)
    lo = x[(x & m2) == 0]
    top = (lo & m1) != 0
    while True:
        kinds = np.where(top, 1, 2)
        if label == BAD1:
            special = rng.choice(lo.size, 2, replace=False)
            kinds[special] = rng.choice([3, 4], 2)
        else:
            flip = rng.random(lo.size) < 0.5
            kinds = np.where(flip, 3 - kinds, kinds)
        color = np.zeros(N, dtype=bool)
        c0 = np.isin(kinds, (2, 3))
        c1 = np.isin(kinds, (1, 3))
        color[lo] = c0
        color[lo | m2] = c1
        face1 = (x & m1) != 0
        if np.count_nonzero(color & face1) != np.count_nonzero(color & ~face1):
            continue
        to1 = face1 ^ color  # nodes whose image lies on face 1
        img = np.empty(N, dtype=np.int64)
        img[to1] = rng.permutation(x[face1])
        img[~to1] = rng.permutation(x[~face1])
        p = Perm(n, img)
        if not P.is_even(p):
            a, b = np.flatnonzero(to1)[:2]
            img[a], img[b] = img[b], img[a]
            p = Perm(n, img)
        if case_classify(build_cuboid(p, r1, r2).counts) == label:
            return p


def brute_badcase_invariants(trials: int = 100, seed: int = 0) -> bool:
    """η mod 4 (first bad class) and ξ mod 2 (second) survive concurrent right factors."""
    rng = np.random.default_rng(seed)
    for n in (4, 5):
        for label in (BAD1, BAD2):
            s = random_bad(n, label, rng)
            eta, xi = vertical_pair_stats(s, 1)
            if label == BAD1 and eta % 4 != 2:
                return False
            if label == BAD2 and xi % 2 != 1:
                return False
            cur = s
            for _ in range(trials):
                q = P.lift(P.random_perm(n - 1, rng), 2)
                c = P.lift(P.random_perm(n - 1, rng), 1)
                before = vertical_pair_stats(cur, 1)
                after_c = vertical_pair_stats(P.compose(cur, c), 1)
                if after_c != before:
                    return False
                cur = P.compose(cur, q)
                e2, x2 = vertical_pair_stats(cur, 1)
                if label == BAD1 and e2 % 4 != 2:
                    return False
                if label == BAD2 and x2 % 2 != 1:
                    return False
    # An all-white cuboid stays all white under SC^(r1).
    for n in (4, 5):
        c = P.lift(P.random_perm(n - 1, rng), 1)
        if vertical_pair_stats(c, 1) != (0, 0):
            return False
    return True


# ---------------------------------------------------------- taxonomy check


def calibrate_taxonomy(swap_a1_a2: bool = False) -> bool:
    """The worked 4-bit instance must read (1,0,1,2; 1,0,1,2) at (r1, r2) = (1, 2)."""
    c = build_cuboid(fixtures.sigma(), 1, 2).counts.as_tuple()
    if swap_a1_a2:
        c = (c[1], c[0]) + c[2:]
    return c == fixtures.COUNTS


__all__ = [
    "VerifyReport", "brute_35free", "brute_badcase_invariants", "brute_new1tight",
    "calibrate_taxonomy", "exists_pi_brute", "exists_pi_to_controlled", "random_bad",
    "three_cycles", "tight_instance", "verify_decomposition", "verify_factors",
]
