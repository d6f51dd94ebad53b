"""Five-block synthesis of controlled permutations and the seven-block decomposition."""

from __future__ import annotations

import heapq
from array import array
from dataclasses import dataclass

import numpy as np

from . import perm as P
from .blocks import BLOCK7, GREEDY, Block, Decomposition, merge_adjacent, product
from .cuboid import to_controlled_info
from .errors import PreconditionError
from .packing import conjugator, synthesize_pattern
from .perm import Perm

SHORT = 5  # cycles up to this length count towards the progress measure


@dataclass
class EliminationTrace:
    rounds: int
    zeta: list[int]  # progress measure before each round and at the end


def _compact(a: np.ndarray) -> array:
    out = array("i")
    out.frombytes(a.astype(np.int32).tobytes())
    return out


class _Walker:
    """Mutable image table with its inverse, for local cycle surgery."""

    def __init__(self, p: Perm):
        # Compact int32 tables keep surgery on wide inputs within a few image tables.
        self.img = _compact(p.image)
        self.inv = _compact(P.inverse(p).image)

    def short_leader(self, x: int) -> tuple[int, int] | None:
        """(length, minimal node) of the cycle through ``x`` if it has at most SHORT nodes."""
        y, best = x, x
        for k in range(1, SHORT + 1):
            y = self.img[y]
            if y == x:
                return k, best
            best = min(best, y)
        return None

    def swap_right(self, a: int, b: int) -> None:
        """Replace p by p (a b)."""
        img, inv = self.img, self.inv
        img[a], img[b] = img[b], img[a]
        inv[img[a]], inv[img[b]] = a, b

    def near(self, v: int, radius: int) -> set[int]:
        out = {v}
        y = z = v
        for _ in range(radius):
            y, z = self.img[y], self.inv[z]
            out.update((y, z))
        return out

    def cycle(self, x: int) -> list[int]:
        out = [x]
        y = self.img[x]
        while y != x:
            out.append(y)
            y = self.img[y]
        return out


def _short_cycles(w: _Walker, nodes) -> set[tuple[int, int]]:
    out = set()
    for x in nodes:
        s = w.short_leader(x)
        if s is not None:
            out.add(s)
    return out


def _zeta(p: Perm) -> int:
    pat = P.cycle_pattern(p)
    return sum(pat.get(k, 0) for k in range(1, SHORT + 1))


def eliminate_35(sigma: Perm, r1: int, trace: EliminationTrace | None = None) -> Perm:
    """``π ∈ SC^(r1)`` such that ``σ π`` has no 3- or 5-cycles.

    Each round swaps a concurrent pair ``(u t)(v s)`` where ``u`` sits on the
    3/5-cycle with the smallest leader, ``v = u^{+r1}`` lies off that cycle and
    ``t, s`` avoid the cycle and the neighbourhood of ``v``.  The number of
    cycles of length at most five drops every round.
    """
    n = sigma.n
    if n < 5:
        raise PreconditionError("3/5-cycle elimination needs n >= 5")
    m = P.mask(n, r1)
    if not P.is_even(sigma):
        raise PreconditionError("odd permutation")
    w = _Walker(sigma)
    pi = _compact(np.arange(1 << n))
    lab = P.cycle_leaders(sigma)
    lens = np.bincount(lab, minlength=sigma.size)
    heap = [int(x) for x in np.flatnonzero((lens == 3) | (lens == 5))]
    heapq.heapify(heap)
    zeta = _zeta(sigma)
    history = [zeta]
    rounds = 0
    while heap:
        lead = heapq.heappop(heap)
        s = w.short_leader(lead)
        if s is None or s[1] != lead or s[0] not in (3, 5):
            continue
        c1 = w.cycle(lead)
        inside = set(c1)
        u = min(x for x in c1 if x ^ m not in inside)
        v = u ^ m
        T = inside | w.near(v, 5)
        face = u & m
        t = next(x for x in range(1 << n)
                 if (x & m) == face and x not in T and (x ^ m) not in T)
        s_ = t ^ m
        touched = (u, t, v, s_)
        before = _short_cycles(w, touched)
        w.swap_right(u, t)
        w.swap_right(v, s_)
        pi[u], pi[t] = pi[t], pi[u]
        pi[v], pi[s_] = pi[s_], pi[v]
        after = _short_cycles(w, touched)
        new_zeta = zeta - len(before) + len(after)
        if new_zeta >= zeta:
            raise AssertionError("elimination round did not shrink the short-cycle count")
        zeta = new_zeta
        history.append(zeta)
        rounds += 1
        for length, leader in after:
            if length in (3, 5):
                heapq.heappush(heap, leader)
        heapq.heappush(heap, lead)
    if trace is not None:
        trace.rounds = rounds
        trace.zeta = history
    return Perm(n, pi, check=False)


# ------------------------------------------------------ controlled to identity


def _diag_block(inner: Perm, r1: int, dim: int) -> Block:
    """Block for ``diag(id, inner)`` controlled at r1, concurrent at ``dim``."""
    full = P.assemble_controlled(P.identity(inner.n), inner, r1)
    return Block.of(full, dim)


def _spare_dims(n: int, used: tuple[int, ...], k: int) -> list[int]:
    dims = list(P.iter_dims(n, used))[:k]
    if len(dims) < k:
        raise PreconditionError("not enough spare dimensions")
    return dims


def controlled_to_identity(
    sigma: Perm, r1: int, r2: int, r3: int, r4: int, stats: dict | None = None
) -> list[Block]:
    """Five blocks on dims (r2, r1, r3, r4, r1) whose product with σ on the left is id.

    With ``σ = diag(f, g)`` at r1: block 1 is ``diag(id, g')`` for a 3/5
    eliminator g' of f^{-1}g, block 2 is ``h^{-1}`` on both halves, blocks 3-4
    are ``diag(id, ρ2^{-1})`` and ``diag(id, ρ1^{-1})`` and block 5 is
    ``h f^{-1}`` on both halves, where ``h f^{-1} g g' h^{-1} = ρ1 ρ2``.
    """
    n = sigma.n
    if n < 6:
        raise PreconditionError("five-block synthesis needs n >= 6")
    if len({r1, r2, r3, r4}) != 4:
        raise PreconditionError("dimensions r1..r4 must be distinct")
    for r in (r1, r2, r3, r4):
        P.mask(n, r)
    f, g = P.controlled_halves(sigma, r1)
    if not P.is_even(sigma):
        raise PreconditionError("odd permutation")
    d2, d3, d4 = (P.sub_dim(r, r1) for r in (r2, r3, r4))
    f_inv = P.inverse(f)
    del f
    w = P.compose(f_inv, g)
    del g
    trace = EliminationTrace(0, [])
    gp = eliminate_35(w, d2, trace)
    w = P.compose(w, gp)
    rho1, rho2 = synthesize_pattern(P.cycle_pattern(w), d4, d3, n - 1)
    h = conjugator(w, P.compose(rho1, rho2))
    del w
    blocks = [
        _diag_block(gp, r1, r2),
        Block(r1, P.inverse(h)),
        _diag_block(P.inverse(rho2), r1, r3),
        _diag_block(P.inverse(rho1), r1, r4),
        Block(r1, P.compose(h, f_inv)),
    ]
    if stats is not None:
        stats["rounds_35"] = trace.rounds
    return blocks


# ------------------------------------------------------------ decompositions


def _invert_blocks(blocks: list[Block]) -> list[Block]:
    return [b.inverse() for b in reversed(blocks)]


def decompose7(sigma: Perm, r1: int = 1, verify: bool = True) -> Decomposition:
    """At most seven concurrent blocks with product σ (greedy fallback below n = 6)."""
    n = sigma.n
    if not P.is_even(sigma):
        raise PreconditionError("odd permutation")
    if n < 6:
        return decompose_greedy(sigma, r1)
    P.mask(n, r1)
    stats: dict = {}
    ctl = to_controlled_info(sigma, r1)
    r2 = ctl.r2
    r3, r4 = _spare_dims(n, (r1, r2), 2)
    head, label, switched = ctl.blocks, ctl.label, ctl.switched
    sigma_ctl = ctl.sigma_ctl
    del ctl
    tail = controlled_to_identity(sigma_ctl, r1, r2, r3, r4, stats)
    del sigma_ctl
    # σ a1 a2 a3 = σ_ctl and σ_ctl c1 ... c5 = id.
    blocks = merge_adjacent(_invert_blocks(tail) + _invert_blocks(head))
    stats["case_labels"] = [label] + (["switched"] if switched else [])
    dec = Decomposition(n, BLOCK7, blocks, P.digest(sigma), stats)
    if len(blocks) > 7:
        raise AssertionError("more than seven blocks")
    if verify and product(blocks, n) != sigma:
        raise AssertionError("decomposition does not recompose")
    return dec


def _search_eliminator(w: Perm, d: int, d3: int, d4: int):
    """Small widths: scan SC^(d) for g' making ``w g'`` packable at (d4, d3)."""
    import itertools

    k = w.n - 1
    for inner in itertools.permutations(range(1 << k)):
        gp = P.lift(Perm(k, inner, check=False), d)
        w2 = P.compose(w, gp)
        pat = P.cycle_pattern(w2)
        if pat.get(3) or pat.get(5):
            continue
        try:
            rho = synthesize_pattern(pat, d4, d3, w.n)
        except PreconditionError:
            continue
        return gp, rho
    raise PreconditionError("no packable eliminator at this width")


def decompose_greedy(sigma: Perm, r1: int = 1) -> Decomposition:
    """Small widths (n = 4, 5): the same pipeline with the 3/5 eliminator found by search."""
    n = sigma.n
    if n not in (4, 5):
        raise PreconditionError("the small-width path covers n = 4 and 5")
    if not P.is_even(sigma):
        raise PreconditionError("odd permutation")
    ctl = to_controlled_info(sigma, r1)
    r2 = ctl.r2
    r3, r4 = _spare_dims(n, (r1, r2), 2)
    f, g = P.controlled_halves(ctl.sigma_ctl, r1)
    d2, d3, d4 = (P.sub_dim(r, r1) for r in (r2, r3, r4))
    w = P.compose(P.inverse(f), g)
    gp, (rho1, rho2) = _search_eliminator(w, d2, d3, d4)
    w2 = P.compose(w, gp)
    h = conjugator(w2, P.compose(rho1, rho2))
    tail = [
        _diag_block(gp, r1, r2),
        Block(r1, P.inverse(h)),
        _diag_block(P.inverse(rho2), r1, r3),
        _diag_block(P.inverse(rho1), r1, r4),
        Block(r1, P.compose(h, P.inverse(f))),
    ]
    blocks = merge_adjacent(_invert_blocks(tail) + _invert_blocks(ctl.blocks))
    if product(blocks, n) != sigma:
        raise AssertionError("small-width decomposition does not recompose")
    return Decomposition(n, GREEDY, blocks, P.digest(sigma), {"case_labels": [ctl.label]})


__all__ = [
    "EliminationTrace", "controlled_to_identity", "decompose7", "decompose_greedy",
    "eliminate_35",
]
