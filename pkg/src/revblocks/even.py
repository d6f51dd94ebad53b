"""Concurrently even blocks: the ten-block decomposition.

Every block produced here has an even inner permutation.  The pipeline is the
three-block reduction to a controlled permutation (with even gadgets), a 3/5
eliminator that is itself concurrently even and leaves an even cycle behind,
an even conjugator, even two-factor pattern synthesis, and a four-block
construction of a concurrently odd block out of even ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import perm as P
from .blocks import EVEN10, Block, Decomposition, merge_adjacent, product
from .cuboid import to_controlled_even, to_controlled_info
from .errors import PreconditionError
from .packing import conjugator, synthesize_pattern
from .perm import Perm
from .synth import _compact, _diag_block, _spare_dims, _Walker

MANY_CYCLES = 12  # non-trivial cycles needed by the many-cycles synthesis
LONG_CYCLE = 12  # cycle length needed by the long-cycle synthesis
PAD_CYCLE = 13  # length of the two cycles added when neither applies


# ------------------------------------------------------------ 3/5 elimination


@dataclass
class EvenEliminationTrace:
    stage1: str = ""
    rounds: int = 0
    zeta: list[int] = field(default_factory=list)
    stage3_passes: int = 0
    stage4: str = ""


class _Surgery:
    """A walker plus the right factor π accumulated as concurrent swaps."""

    def __init__(self, sigma: Perm, r1: int):
        self.w = _Walker(sigma)
        self.m = P.mask(sigma.n, r1)
        self.size = sigma.size
        self.pi = _compact(np.arange(sigma.size))
        self.odd = False  # inner parity of π

    def swap(self, a: int, b: int) -> None:
        """Right-multiply by the concurrent swap (a b)(a^ b^)."""
        if (a & self.m) != (b & self.m) or a == b:
            raise AssertionError("not a concurrent swap")
        for x, y in ((a, b), (a ^ self.m, b ^ self.m)):
            self.w.swap_right(x, y)
            self.pi[x], self.pi[y] = self.pi[y], self.pi[x]
        self.odd = not self.odd

    def short(self, nodes, avoid: set[int] = frozenset()) -> set[tuple[int, int]]:
        """Short cycles through ``nodes`` that miss ``avoid``."""
        out = set()
        for x in nodes:
            s = self.w.short_leader(x)
            if s is None or s in out:
                continue
            if avoid and any(y in avoid for y in self.w.cycle(x)):
                continue
            out.add(s)
        return out

    def perm(self, which: str) -> Perm:
        arr = self.pi if which == "pi" else self.w.img
        return Perm(int(self.size).bit_length() - 1, np.frombuffer(arr, dtype=np.int32), check=False)


def _is_35(s: tuple[int, int]) -> bool:
    return s[0] in (3, 5)


def _two_cycle(w: _Walker, a: int, b: int) -> bool:
    return a != b and w.img[a] == b and w.img[b] == a


def _stage1(S: _Surgery) -> tuple[str, list[int]]:
    """Create an even cycle of length at most four (a 2-cycle where possible)."""
    w, m, N = S.w, S.m, S.size
    img = w.img
    for x in range(N):
        if img[x] != x and img[img[x]] == x:
            return "case0", [x, img[x]]

    def attempt(swaps, c0) -> bool:
        try:
            for a, b in swaps:
                S.swap(a, b)
        except AssertionError:
            return False
        if _two_cycle(w, *c0):
            return True
        for a, b in reversed(swaps):
            S.swap(a, b)
        return False

    # Case 1: two nodes that stay on their face, on a common face.
    stay = [x for x in range(N) if img[x] != x and (img[x] & m) == (x & m)]
    for i, u in enumerate(stay[:64]):
        for v in stay[i + 1: i + 65]:
            if (u & m) != (v & m):
                continue
            su, sv = img[u], img[v]
            if su == v:
                plan = ([(u, sv)], (v, sv))
            elif sv == u:
                plan = ([(v, su)], (u, su))
            else:
                plan = ([(u, su), (v, sv), (su, sv)], (su, sv))
            if attempt(*plan):
                return "case1", list(plan[1])
    # Case 2: u and σ²(u) on one face, σ(u) on the other.
    for u in range(N):
        s1 = img[u]
        s2 = img[s1]
        if (s2 & m) == (u & m) != (s1 & m) and len({u, s1 ^ m, s2}) == 3:
            if attempt([(u, s2)], (s1, s2)):
                return "case2", [s1, s2]
    # Case 3: two fixed points on a common face.
    fixed = [x for x in range(N) if img[x] == x]
    for i, u in enumerate(fixed):
        for v in fixed[i + 1:]:
            if (u & m) == (v & m) and attempt([(u, v)], (u, v)):
                return "case3", [u, v]
    # Case 4: a 4-cycle made of two concurrent pairs, or a chain of three pairs.
    for u in range(N):
        c = [u, img[u], img[img[u]], img[img[img[u]]]]
        if img[c[3]] == u and len(set(c)) == 4 and {x ^ m for x in c} == set(c):
            return "case4a", c
    for u1 in range(N):
        u2 = img[u1]
        if u2 != u1 ^ m:
            continue
        u3 = img[u2]
        u4 = img[u3]
        u5 = img[u4]
        u6 = img[u5]
        if u4 != u3 ^ m or u6 != u5 ^ m or len({u1, u2, u3, u4, u5, u6}) != 6:
            continue
        if not ((u1 & m) == (u3 & m) == (u5 & m)):
            continue
        # (u1 u3 u5)(u2 u4 u6) as two concurrent swaps.
        S.swap(u1, u5)
        S.swap(u1, u3)
        for x in (u1, u2, u3, u4, u5, u6):
            y = img[x]
            if img[y] == x and x != y:
                return "case4b", [x, y]
            c = w.cycle(x) if w.short_leader(x) else []
            if len(c) == 4 and {z ^ m for z in c} == set(c):
                return "case4b", c
        S.swap(u1, u3)
        S.swap(u1, u5)
    raise AssertionError("no short even cycle could be created")


def _stage2(S: _Surgery, c0: list[int], trace: EvenEliminationTrace) -> None:
    """Concurrent swaps that remove every 3/5-cycle away from the protected cycle."""
    w, m, N = S.w, S.m, S.size
    X = set(c0) | {x ^ m for x in c0}
    base = set(c0)
    labels = P.orbit_labels(np.frombuffer(w.img, dtype=np.int32))
    lens = np.bincount(labels, minlength=N)
    bad = np.isin(labels, np.flatnonzero((lens == 3) | (lens == 5)))
    for x in X:
        bad[labels == labels[x]] = False
    zeta = len(S.short(range(N), X))
    trace.zeta = [zeta]
    queue = sorted({int(labels[x]) for x in np.flatnonzero(bad)})
    while queue:
        lead = queue.pop(0)
        s = w.short_leader(lead)
        if s is None or s[1] != lead or not _is_35(s):
            continue
        c1 = w.cycle(lead)
        inside = set(c1)
        if inside & X:
            continue
        u = min(x for x in c1 if x ^ m not in inside)
        v = u ^ m
        T = base | inside | w.near(v, 5)
        face = u & m
        t = next(x for x in range(N) if (x & m) == face and x not in T and x ^ m not in T)
        touched = (u, t, v, t ^ m)
        before = S.short(touched, X)
        S.swap(u, t)
        after = S.short(touched, X)
        if any(w.img[a] != b for a, b in zip(c0, c0[1:] + c0[:1])):
            raise AssertionError("protected cycle was disturbed")
        new = zeta - len(before) + len(after)
        if new >= zeta:
            raise AssertionError("elimination round did not shrink the short-cycle count")
        zeta = new
        trace.zeta.append(zeta)
        trace.rounds += 1
        queue.extend(ld for ln, ld in after if ln in (3, 5))
        queue.append(lead)
        queue.sort()


def _global_35(S: _Surgery) -> list[int]:
    labels = P.orbit_labels(np.frombuffer(S.w.img, dtype=np.int32))
    lens = np.bincount(labels, minlength=S.size)
    return sorted({int(labels[x]) for x in np.flatnonzero((lens[labels] == 3) | (lens[labels] == 5))})


def _has_even_cycle(S: _Surgery) -> bool:
    labels = P.orbit_labels(np.frombuffer(S.w.img, dtype=np.int32))
    lens = np.bincount(labels, minlength=S.size)
    return bool(np.any((lens > 0) & (lens % 2 == 0)))


def _shortest_even_cycle(S: _Surgery) -> list[int]:
    labels = P.orbit_labels(np.frombuffer(S.w.img, dtype=np.int32))
    lens = np.bincount(labels, minlength=S.size)
    even = np.flatnonzero((lens > 0) & (lens % 2 == 0))
    lead = int(even[np.argmin(lens[even])])
    return S.w.cycle(lead)


def _stage3(S: _Surgery, c0: list[int], trace: EvenEliminationTrace) -> None:
    """Remove the (at most two) 3/5-cycles that touch the protected cycle's pairs."""
    w, m, N = S.w, S.m, S.size
    X = set(c0) | {x ^ m for x in c0}
    while True:
        leads = _global_35(S)
        if not leads:
            return
        trace.stage3_passes += 1
        if trace.stage3_passes > 2:
            raise AssertionError("3/5 repair needed more than two passes")
        nodes = [x for ld in leads for x in w.cycle(ld)]
        done = False
        # Partners away from the protected pairs first, then anything.
        for restrict in (True, False):
            for a in nodes:
                for b in range(N):
                    if b == a or (b & m) != (a & m):
                        continue
                    if restrict and (b in X or a in X or a ^ m in X):
                        continue
                    touched = (a, b, a ^ m, b ^ m)
                    before = {s for s in S.short(touched) if _is_35(s)}
                    S.swap(a, b)
                    after = {s for s in S.short(touched) if _is_35(s)}
                    keeps = restrict or _has_even_cycle(S)
                    if len(after) < len(before) and keeps:
                        done = True
                        break
                    S.swap(a, b)
                if done:
                    break
            if done:
                break
        if not done:
            raise AssertionError("no swap removes the remaining 3/5-cycles")


def _stage4(S: _Surgery, trace: EvenEliminationTrace) -> None:
    """Make π concurrently even with one more swap that keeps an even cycle and no 3/5-cycle."""
    if not S.odd:
        trace.stage4 = "even"
        return
    w, m, N = S.w, S.m, S.size
    c0 = _shortest_even_cycle(S)
    X = set(c0) | {x ^ m for x in c0}
    # First try each pair against the nearest far-away pair, then search widely.
    for a in range(N):
        if (a & m) or a in X:
            continue
        near = w.near(a, 5) | w.near(a ^ m, 5)
        for b in range(N):
            if (b & m) or b == a or b in X or b in near or (b ^ m) in near:
                continue
            touched = (a, b, a ^ m, b ^ m)
            S.swap(a, b)
            if not any(_is_35(s) for s in S.short(touched)):
                trace.stage4 = "swap"
                return
            S.swap(a, b)
            break
    for a in range(N):
        if (a & m) or a in X:
            continue
        for b in range(a + 1, N):
            if (b & m) or b in X:
                continue
            touched = (a, b, a ^ m, b ^ m)
            S.swap(a, b)
            if not any(_is_35(s) for s in S.short(touched)):
                trace.stage4 = "search"
                return
            S.swap(a, b)
    raise AssertionError("no parity-fixing swap found")


def eliminate_35_even(
    sigma: Perm, r1: int, trace: EvenEliminationTrace | None = None
) -> Perm:
    """``π ∈ AC^(r1)`` with ``σ π`` free of 3/5-cycles and holding an even cycle.

    Stage 1 plants a short even cycle, stage 2 removes 3/5-cycles away from it,
    stage 3 removes the few left near it and stage 4 repairs the concurrent
    parity of π with one extra swap.
    """
    n = sigma.n
    if n < 8:
        raise PreconditionError("even 3/5 elimination needs n >= 8")
    if not P.is_even(sigma):
        raise PreconditionError("odd permutation")
    tr = trace if trace is not None else EvenEliminationTrace()
    S = _Surgery(sigma, r1)
    tr.stage1, c0 = _stage1(S)
    _stage2(S, c0, tr)
    _stage3(S, c0, tr)
    _stage4(S, tr)
    pi = S.perm("pi")
    out = S.perm("img")
    pat = P.cycle_pattern(out)
    if pat.get(3) or pat.get(5):
        raise AssertionError("3/5-cycles survived")
    if not any(k % 2 == 0 for k in pat):
        raise AssertionError("no even cycle left")
    if P.concurrent_parity(pi, r1) != P.EVEN:
        raise AssertionError("eliminator is concurrently odd")
    return pi


# --------------------------------------------------------------- conjugation


def even_conjugator(p: Perm, q: Perm) -> Perm:
    """Even ``h`` with ``h p h^{-1} = q``; an odd first guess is fixed by rotating an even cycle."""
    h = conjugator(p, q)
    if P.is_even(h):
        return h
    img = p.image
    labels = P.cycle_leaders(p)
    lens = np.bincount(labels, minlength=p.size)
    even = np.flatnonzero((lens > 0) & (lens % 2 == 0))
    if even.size == 0:
        raise PreconditionError("no even cycle to repair the parity")
    on = labels == int(even[0])
    rot = np.where(on, img, np.arange(p.size))
    h0 = P._trusted(p.n, rot)
    return P.compose(h, h0)


# ------------------------------------------------------------ even synthesis


def _nontrivial(pattern: dict[int, int]) -> int:
    return sum(c for k, c in pattern.items() if k > 1)


def synth_many_cycles_even(pattern: dict[int, int], r1: int, r2: int, n: int) -> tuple[Perm, Perm]:
    """``π ∈ AC^(r1)``, ``τ ∈ AC^(r2)`` with ``π τ`` of the pattern (at least 12 non-trivial cycles)."""
    if _nontrivial(pattern) < MANY_CYCLES:
        raise PreconditionError("needs at least 12 non-trivial cycles")
    return synthesize_pattern(pattern, r1, r2, n, even=True)


def synth_long_cycle_even(pattern: dict[int, int], r1: int, r2: int, n: int) -> tuple[Perm, Perm]:
    """As above for patterns with a cycle of length at least 12."""
    if max((k for k, c in pattern.items() if c), default=0) < LONG_CYCLE:
        raise PreconditionError("needs a cycle of length at least 12")
    return synthesize_pattern(pattern, r1, r2, n, even=True)


def synth_even(pattern: dict[int, int], r1: int, r2: int, n: int) -> tuple[Perm, Perm]:
    """Route to the many-cycles construction first, then the long-cycle one."""
    if _nontrivial(pattern) >= MANY_CYCLES:
        return synth_many_cycles_even(pattern, r1, r2, n)
    return synth_long_cycle_even(pattern, r1, r2, n)


# ---------------------------------------------------------- odd from even

_ODD_PI = [("001", "011"), ("101", "111")]
_ODD_TAUS = [
    [("010", "100", "110"), ("011", "101", "111")],
    [("001", "100", "101"), ("011", "110", "111")],
    [("001", "010", "011"), ("101", "110", "111")],
    [("001", "101", "100"), ("011", "111", "110")],
]


def _embed3(n: int, dims: tuple[int, int, int], cycles) -> Perm:
    """Place 3-bit cycles on ``dims`` with every other bit zero."""
    def node(s: str) -> int:
        return sum(P.mask(n, d) for d, ch in zip(dims, s) if ch == "1")

    return P.from_cycles(n, [[node(s) for s in c] for c in cycles])


def odd_block_from_even(n: int, r1: int, r2: int, r3: int) -> tuple[Perm, Perm, Perm, Perm, Perm]:
    """Concurrently odd ``π ∈ SC^(r1)`` and even blocks with ``π = τ1 τ2 τ3 τ4``.

    ``τ1`` is concurrent at r3, ``τ2`` and ``τ4`` at r2, ``τ3`` at r1.
    """
    if n < 3:
        raise PreconditionError("needs n >= 3")
    if len({r1, r2, r3}) != 3:
        raise PreconditionError("dimensions must be distinct")
    dims = (r1, r2, r3)
    for d in dims:
        P.mask(n, d)
    pi = _embed3(n, dims, _ODD_PI)
    taus = tuple(_embed3(n, dims, c) for c in _ODD_TAUS)
    return (pi, *taus)


# ------------------------------------------------------ controlled to blocks


def _pad_fixed_pairs(w: Perm, d2: int) -> Perm:
    """Two 13-cycles concurrent at d2 on the lowest fixed pairs of ``w``."""
    m = P.mask(w.n, d2)
    img = w.image
    xs = [int(x) for x in np.flatnonzero(img == np.arange(w.size))
          if not (x & m) and img[x ^ m] == x ^ m][:PAD_CYCLE]
    if len(xs) < PAD_CYCLE:
        raise AssertionError("not enough fixed pairs to pad")
    return P.from_cycles(w.n, [xs, [x ^ m for x in xs]])


def controlled_to_blocks_even(
    sigma: Perm, r1: int, r2: int, r3: int, r4: int, stats: dict | None = None
) -> list[Block]:
    """Eight even blocks on dims (r1, r3, r4, r1, r3, r2, r1, r2) with product σ.

    ``σ = diag(f, g)`` at r1.  With an even 3/5 eliminator g' of f^{-1}g, and
    s odd exactly when f is, ``σ diag(id, g') = diag(fsh)·diag(id, τ1)·diag(id, τ2)·
    diag(h^{-1})·diag(s^{-1})``, where ``τ1 τ2 = h^{-1} (fs)^{-1} g g' s h``.
    The odd ``diag(s^{-1})`` takes four even blocks.
    """
    n = sigma.n
    if n < 10:
        raise PreconditionError("even block synthesis needs n >= 10")
    if len({r1, r2, r3, r4}) != 4:
        raise PreconditionError("dimensions r1..r4 must be distinct")
    for r in (r1, r2, r3, r4):
        P.mask(n, r)
    if not P.is_even(sigma):
        raise PreconditionError("odd permutation")
    if sigma.is_identity():
        return []
    f, g = P.controlled_halves(sigma, r1)
    d2, d3, d4 = (P.sub_dim(r, r1) for r in (r2, r3, r4))
    w = P.compose(P.inverse(f), g)
    trace = EvenEliminationTrace()
    gp = eliminate_35_even(w, d2, trace)
    w2 = P.compose(w, gp)
    pat = P.cycle_pattern(w2)
    padded = _nontrivial(pat) < MANY_CYCLES and max(pat) < LONG_CYCLE
    if padded:
        gp = P.compose(gp, _pad_fixed_pairs(w2, d2))
    gg = P.compose(g, gp)
    odd = not P.is_even(f)
    if odd:
        pi_odd, *taus = odd_block_from_even(n, r1, r2, r3)
        s = P.inverse(P.restrict(pi_odd, r1))
        odd_blocks = [Block.of(t, d) for t, d in zip(taus, (r3, r2, r1, r2))]
    else:
        s = P.identity(n - 1)
        odd_blocks = []
    fs = P.compose(f, s)
    W = P.compose(P.inverse(fs), gg, s)
    tau1, tau2 = synth_even(P.cycle_pattern(W), d3, d4, n - 1)
    h = even_conjugator(P.compose(tau1, tau2), W)
    blocks = [
        Block(r1, P.compose(fs, h)),
        _diag_block(tau1, r1, r3),
        _diag_block(tau2, r1, r4),
        Block(r1, P.inverse(h)),
        *odd_blocks,
        _diag_block(P.inverse(gp), r1, r2),
    ]
    blocks = merge_adjacent(blocks)
    if stats is not None:
        stats.update(rounds_35=trace.rounds, stage1=trace.stage1, padded=padded,
                     stage3_passes=trace.stage3_passes, stage4=trace.stage4, odd_f=odd)
    return blocks


def controlled_to_identity_even(
    sigma: Perm, r1: int, r2: int, r3: int, r4: int, stats: dict | None = None
) -> list[Block]:
    """Alias of :func:`controlled_to_blocks_even`: the blocks multiply to σ."""
    return controlled_to_blocks_even(sigma, r1, r2, r3, r4, stats)


def decompose10(sigma: Perm, r1: int = 1, verify: bool = True) -> Decomposition:
    """At most ten concurrently even blocks with product σ."""
    n = sigma.n
    if n < 10:
        raise PreconditionError("the even decomposition needs n >= 10")
    if not P.is_even(sigma):
        raise PreconditionError("odd permutation")
    stats: dict = {}
    ctl = to_controlled_info(sigma, r1, even_blocks=True)
    r2 = ctl.r2
    r3, r4 = _spare_dims(n, (r1, r2), 2)
    head = controlled_to_blocks_even(ctl.sigma_ctl, r1, r2, r3, r4, stats)
    # σ a1 a2 a3 = σ_ctl, so σ = σ_ctl a3^{-1} a2^{-1} a1^{-1}.
    blocks = merge_adjacent(head + [b.inverse() for b in reversed(ctl.blocks)])
    stats["case_labels"] = [ctl.label] + (["switched"] if ctl.switched else [])
    if len(blocks) > 10:
        raise AssertionError("more than ten blocks")
    if any(b.parity() != P.EVEN for b in blocks):
        raise AssertionError("a block is concurrently odd")
    if verify and product(blocks, n) != sigma:
        raise AssertionError("decomposition does not recompose")
    return Decomposition(n, EVEN10, blocks, P.digest(sigma), stats)


__all__ = [
    "EvenEliminationTrace", "controlled_to_blocks_even", "controlled_to_identity_even",
    "decompose10", "eliminate_35_even", "even_conjugator", "odd_block_from_even",
    "synth_even", "synth_long_cycle_even", "synth_many_cycles_even", "to_controlled_even",
]
