"""Colored cuboids and the three-block reduction to a controlled permutation.

Node ``x`` is black when ``σ(x)`` leaves the r1-face of ``x``.  Three concurrent
factors ``π1 ∈ SC^(r2)``, ``σ1 ∈ SC^(r1)``, ``π2 ∈ SC^(r2)`` whiten the cuboid,
i.e. ``σ π1 σ1 π2`` fixes bit r1.

Working picture used throughout: write a node as ``(p, q, z)`` with ``p`` the
r1 bit, ``q`` the r2 bit and ``z`` the remaining n-2 bits.  An *r2-column* is
``{(p,0,z), (p,1,z)}`` and an *r1-pair* is ``{(0,q,z), (1,q,z)}``.  A factor in
SC^(r2) permutes r2-columns rigidly; one in SC^(r1) permutes r1-pairs.  The
product ``ρ = π1 σ1 π2`` whitens ``σ`` exactly when it carries the face p = 0
onto ``Z = {y : σ(y) has r1 bit 0}``; the solver below builds that map in three
rigid moves.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import perm as P
from .blocks import Block
from .errors import PreconditionError
from .perm import EVEN, ODD, Perm

GOOD1, GOOD2, GOOD3, BAD1, BAD2 = "Good1", "Good2", "Good3", "Bad1", "Bad2"
GOOD = (GOOD1, GOOD2, GOOD3)

# Column codes: bit 1 = membership at q = 0, bit 0 = membership at q = 1.
C00, C01, C10, C11 = 0, 1, 2, 3


@dataclass(frozen=True)
class PairCounts:
    a1: int
    a2: int
    a3: int
    a4: int
    b1: int
    b2: int
    b3: int
    b4: int

    def as_tuple(self) -> tuple[int, ...]:
        return (self.a1, self.a2, self.a3, self.a4, self.b1, self.b2, self.b3, self.b4)

    def mirrored(self) -> "PairCounts":
        return PairCounts(self.b1, self.b2, self.b3, self.b4, self.a1, self.a2, self.a3, self.a4)


@dataclass(frozen=True)
class CardTally:
    alpha: int
    beta: int
    gamma: int


@dataclass(frozen=True)
class Cuboid:
    n: int
    r1: int
    r2: int
    color: np.ndarray  # True = black
    counts: PairCounts

    def all_white(self) -> bool:
        return not bool(self.color.any())


def _check_dims(n: int, *dims: int) -> None:
    for d in dims:
        P.mask(n, d)
    if len(set(dims)) != len(dims):
        raise PreconditionError(f"dimensions must be distinct, got {dims}")


def colors(sigma: Perm, r1: int) -> np.ndarray:
    m = P.mask(sigma.n, r1)
    return (sigma.image & m) != (np.arange(sigma.size) & m)


def build_cuboid(sigma: Perm, r1: int, r2: int) -> Cuboid:
    n = sigma.n
    _check_dims(n, r1, r2)
    col = colors(sigma, r1)
    m1, m2 = P.mask(n, r1), P.mask(n, r2)
    x = np.arange(sigma.size)
    lo = x[(x & m2) == 0]  # node with q = 0 of every r2-column
    c0, c1 = col[lo], col[lo | m2]
    # type-1 (W,B), type-2 (B,W), type-3 (B,B), type-4 (W,W)
    kind = np.where(c0, np.where(c1, 3, 2), np.where(c1, 1, 4))
    top = (lo & m1) != 0
    a = [int(np.count_nonzero(top & (kind == k))) for k in (1, 2, 3, 4)]
    b = [int(np.count_nonzero(~top & (kind == k))) for k in (1, 2, 3, 4)]
    return Cuboid(n, r1, r2, col, PairCounts(*a, *b))


def vertical_pair_stats(sigma: Perm, r1: int) -> tuple[int, int]:
    """(η, ξ): mixed-color and black-black pairs along r1."""
    col = colors(sigma, r1)
    m1 = P.mask(sigma.n, r1)
    x = np.arange(sigma.size)
    lo = x[(x & m1) == 0]
    u, v = col[lo], col[lo | m1]
    return int(np.count_nonzero(u != v)), int(np.count_nonzero(u & v))


def _validate_counts(c: PairCounts) -> None:
    top = c.a1 + c.a2 + c.a3 + c.a4
    bot = c.b1 + c.b2 + c.b3 + c.b4
    if min(c.as_tuple()) < 0 or top != bot or top & (top - 1):
        raise PreconditionError(f"counts {c.as_tuple()} are not cuboid tallies")
    if c.a1 + c.a2 + 2 * c.a3 != c.b1 + c.b2 + 2 * c.b3:
        raise PreconditionError("black totals differ between faces")


def case_classify(c: PairCounts) -> str:
    _validate_counts(c)
    s = c.a3 + c.a4 + c.b3 + c.b4
    if s > 2:
        return GOOD1
    if s == 2:
        return GOOD2 if min(c.b1 + c.a2, c.a1 + c.b2) > 0 else BAD1
    return GOOD3 if (c.b1 + c.a2) % 2 == 0 else BAD2


def card_tally(c: PairCounts) -> CardTally:
    """Card counts of the canonical form, valid when a2+a3 <= b2+b3."""
    return CardTally((c.a1 - c.a2 + c.b2 - c.b1) // 2, c.b1 + c.a2, (c.a3 + c.a4 + c.b3 + c.b4) // 2)


def switch_dimension_counts(sigma: Perm, r1: int, r2: int, r3: int) -> PairCounts:
    _check_dims(sigma.n, r1, r2, r3)
    return build_cuboid(sigma, r1, r3).counts


# ------------------------------------------------------------ coordinates


class _Frame:
    """Index bookkeeping for the (p, q, z) picture at dimensions (r1, r2)."""

    def __init__(self, n: int, r1: int, r2: int):
        self.n, self.r1, self.r2 = n, r1, r2
        self.m1, self.m2 = P.mask(n, r1), P.mask(n, r2)
        self.p_dtype = np.int32 if n < 31 else np.int64
        x = np.arange(1 << n, dtype=self.p_dtype)
        self.p = (x & self.m1) != 0
        self.q = (x & self.m2) != 0
        hi, lo = max(r1, r2), min(r1, r2)
        self.z = P.remove_bit(P.remove_bit(x, n, hi), n - 1, lo)
        self.nz = 1 << (n - 2)

    def node(self, p, q, z):
        hi, lo = max(self.r1, self.r2), min(self.r1, self.r2)
        b_lo = p if lo == self.r1 else q
        b_hi = q if lo == self.r1 else p
        y = P.insert_bit(np.asarray(z), self.n - 1, lo, np.asarray(b_lo, dtype=np.int64))
        return P.insert_bit(y, self.n, hi, np.asarray(b_hi, dtype=np.int64))

    def column_codes(self, member: np.ndarray) -> np.ndarray:
        """Code of every r2-column, indexed by the (n-1)-bit column index."""
        n, r2 = self.n, self.r2
        x0 = P.insert_bit(np.arange(1 << (n - 1), dtype=self.p_dtype), n, r2, 0)
        return (member[x0].astype(np.int8) << 1) | member[x0 | self.m2]

    def pair_codes(self, member: np.ndarray) -> np.ndarray:
        """Code of every r1-pair: bit 1 = member at p = 0, bit 0 = member at p = 1."""
        n, r1 = self.n, self.r1
        x0 = P.insert_bit(np.arange(1 << (n - 1), dtype=self.p_dtype), n, r1, 0)
        return (member[x0].astype(np.int8) << 1) | member[x0 | self.m1]


def _match_codes(src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    """Bijection g with dst[g[i]] == src[i]; pairs equal codes in ascending index order."""
    g = np.empty(src.size, dtype=np.int64)
    g[np.argsort(src, kind="stable")] = np.argsort(dst, kind="stable")
    if not np.array_equal(dst[g], src):
        raise PreconditionError("code multisets differ")
    return g


def _fix_parity(g: np.ndarray, codes: np.ndarray, want: str | None) -> np.ndarray:
    """Toggle the parity of ``g`` by swapping the targets of two equal-code sources."""
    if want is None:
        return g
    if _arr_parity(g) == want:
        return g
    for v in np.unique(codes):
        idx = np.flatnonzero(codes == v)
        if idx.size >= 2:
            g = g.copy()
            i, j = idx[0], idx[1]
            g[i], g[j] = g[j], g[i]
            return g
    raise PreconditionError("no room to adjust block parity")


def _arr_parity(g: np.ndarray) -> str:
    n = int(g.size).bit_length() - 1
    return P.parity(Perm(n, g, check=False))


# ------------------------------------------------------- square designer
#
# Every r2-column carries a code in {00, 01, 10, 11}.  A target set X2 is laid
# out square by square: square z holds the columns (0, z) and (1, z).  Its two
# r1-pairs then read (bit_q(c0), bit_q(c1)) for q = 0, 1.  X2 is reachable from
# a union of whole r2-columns by one SC^(r1) factor iff each r1-pair code occurs
# an even number of times.  Cards are the canonical squares:
#   A = (01 on top, 01 below)  B = (01 on top, 10 below)  C = (00 on top, 11 below)
# in Z-codes, which fixes the column tallies c01 = 2α+β, c10 = β, c00 = c11 = γ.

_SQUARES = [(a, b) for a in range(4) for b in range(4)]


def _square_pairs(sq: tuple[int, int]) -> tuple[int, int]:
    c0, c1 = sq
    return (2 * (c0 >> 1) + (c1 >> 1), 2 * (c0 & 1) + (c1 & 1))


def _base_parity(r: list[int]) -> tuple[int, int, int, int] | None:
    """Pair-code parities of the default layout of leftover columns, or None."""
    r00, r01, r10, r11 = r
    if (r00 - r11) % 2 or (r01 - r10) % 2:
        return None
    mixed = min(r01, r10)
    same = abs(r01 - r10) // 2
    # (00,11): two pairs of code 01.  (00,00)/(11,11): code 00 or 11 twice.
    # (01,10): codes 01 and 10.  (01,01)/(10,10): codes 00 and 11.
    return (same % 2, mixed % 2, mixed % 2, same % 2)


@lru_cache(maxsize=None)
def _specials(counts: tuple[int, int, int, int], max_k: int = 4) -> tuple | None:
    for k in range(max_k + 1):
        for combo in itertools.combinations_with_replacement(_SQUARES, k):
            r = list(counts)
            par = [0, 0, 0, 0]
            for sq in combo:
                r[sq[0]] -= 1
                r[sq[1]] -= 1
                for code in _square_pairs(sq):
                    par[code] ^= 1
            if min(r) < 0:
                continue
            base = _base_parity(r)
            if base is None:
                continue
            if all((a + b) % 2 == 0 for a, b in zip(par, base)):
                return combo
    return None


def design_squares(col_counts: np.ndarray) -> list[tuple[int, int]] | None:
    """Square layout for X2 given Z's column tallies, or None when none exists."""
    combo = _specials(tuple(int(c) for c in col_counts))
    if combo is None:
        return None
    r = [int(c) for c in col_counts]
    squares = list(combo)
    for sq in combo:
        r[sq[0]] -= 1
        r[sq[1]] -= 1
    k = min(r[C00], r[C11])
    squares += [(C00, C11)] * k
    squares += [(C00, C00)] * ((r[C00] - k) // 2) + [(C11, C11)] * ((r[C11] - k) // 2)
    k = min(r[C01], r[C10])
    squares += [(C01, C10)] * k
    squares += [(C01, C01)] * ((r[C01] - k) // 2) + [(C10, C10)] * ((r[C10] - k) // 2)
    return squares


def whitenable(sigma: Perm, r1: int, r2: int) -> bool:
    f = _Frame(sigma.n, r1, r2)
    zc = f.column_codes(_target_set(sigma, r1))
    return design_squares(np.bincount(zc, minlength=4)) is not None


def _target_set(sigma: Perm, r1: int) -> np.ndarray:
    return (sigma.image & P.mask(sigma.n, r1)) == 0


# ------------------------------------------------------------- canonicalize


def canonicalize_steps(sigma: Perm, r1: int, r2: int) -> tuple[Perm, Perm]:
    """Two SC^(r2) factors (τ, τ'): σ τ is in the intermediate state, σ τ τ' canonical.

    Intermediate state: the top face carries only type-1 and type-4 pairs, the
    bottom face has no type-3 pair and as many type-4 pairs as the top.
    """
    n = sigma.n
    _check_dims(n, r1, r2)
    c = build_cuboid(sigma, r1, r2).counts
    if c.a2 + c.a3 > c.b2 + c.b3:
        raise PreconditionError("canonical form needs a2+a3 <= b2+b3; mirror the faces first")
    f = _Frame(n, r1, r2)
    zc = f.column_codes(_target_set(sigma, r1))
    t = card_tally(c)
    cols = np.arange(1 << (n - 1))
    top = (P.insert_bit(cols, n, r2, 0) & f.m1) != 0

    # Intermediate layout in Z-codes: top = γ×00 then (α+β)×01; bottom = γ×11, β×10, α×01.
    top_cols, bot_cols = cols[top], cols[~top]
    inter = np.empty_like(zc)
    inter[top_cols] = np.array([C00] * t.gamma + [C01] * (t.alpha + t.beta))
    inter[bot_cols] = np.array([C11] * t.gamma + [C10] * t.beta + [C01] * t.alpha)
    # σ τ reads Z-code zc[g(c)] at column c, so g maps layout slots onto equal codes.
    g1 = _match_codes(inter, zc)
    tau = P.lift(Perm(n - 1, g1, check=False), r2)

    # Pair squares: top slot k with bottom slot k; A, B, C cards in that order.
    final = np.empty_like(zc)
    final[top_cols] = np.array([C01] * t.alpha + [C01] * t.beta + [C00] * t.gamma)
    final[bot_cols] = np.array([C01] * t.alpha + [C10] * t.beta + [C11] * t.gamma)
    g2 = _match_codes(final, inter)
    tau2 = P.lift(Perm(n - 1, g2, check=False), r2)
    return tau, tau2


def canonicalize(sigma: Perm, r1: int, r2: int) -> Perm:
    tau, tau2 = canonicalize_steps(sigma, r1, r2)
    return P.compose(tau, tau2)


def card_census(sigma: Perm, r1: int, r2: int) -> dict[str, int] | None:
    """Count A/B/C cards square by square, or None if some square is not a card."""
    f = _Frame(sigma.n, r1, r2)
    col = colors(sigma, r1)
    out = {"A": 0, "B": 0, "C": 0}
    z = np.arange(f.nz)

    def c(p, q):
        return col[f.node(np.full_like(z, p), np.full_like(z, q), z)]

    tw0, tw1, bw0, bw1 = c(1, 0), c(1, 1), c(0, 0), c(0, 1)
    a = ~tw0 & tw1 & bw0 & ~bw1
    b = ~tw0 & tw1 & ~bw0 & bw1
    cc = ~(tw0 | tw1 | bw0 | bw1)
    if not np.all(a | b | cc):
        return None
    out["A"], out["B"], out["C"] = int(a.sum()), int(b.sum()), int(cc.sum())
    return out


# ---------------------------------------------------------------- solving


@dataclass(frozen=True)
class Solution:
    """``σ π1 σ1 π2`` is controlled at r1."""

    r1: int
    r2: int
    pi1: Perm
    sigma1: Perm
    pi2: Perm

    def blocks(self) -> list[Block]:
        return [
            Block(self.r2, P.restrict(self.pi1, self.r2)),
            Block(self.r1, P.restrict(self.sigma1, self.r1)),
            Block(self.r2, P.restrict(self.pi2, self.r2)),
        ]


def solve_good(
    sigma: Perm,
    r1: int,
    r2: int,
    parities: tuple[str | None, str | None, str | None] = (None, None, None),
) -> tuple[Perm, Perm, Perm]:
    sol = _solve(sigma, r1, r2, parities)
    return sol.pi1, sol.sigma1, sol.pi2


def _solve(sigma: Perm, r1: int, r2: int, parities=(None, None, None)) -> Solution:
    n = sigma.n
    _check_dims(n, r1, r2)
    if n < 3:
        raise PreconditionError("need n >= 3")
    f = _Frame(n, r1, r2)
    Z = _target_set(sigma, r1)
    zc = f.column_codes(Z)
    squares = design_squares(np.bincount(zc, minlength=4))
    if squares is None:
        label = case_classify(build_cuboid(sigma, r1, r2).counts)
        raise PreconditionError(f"no three-block whitening at (r1,r2)=({r1},{r2}): {label}")

    # X2: square z holds the column codes squares[z] at p = 0, 1.
    sq = np.array(squares, dtype=np.int8)
    code = np.where(f.p, sq[f.z, 1], sq[f.z, 0])
    X2 = np.where(f.q, code & 1, code >> 1).astype(bool)
    del code

    x2c = f.column_codes(X2)
    g1 = _fix_parity(_match_codes(x2c, zc), x2c, parities[0])

    # X1 is a union of r2-columns; its r1-pair codes must match those of X2.
    x2p = f.pair_codes(X2)
    tally = np.bincount(x2p, minlength=4)
    assert not np.any(tally % 2), "square designer broke pair parity"
    A = np.zeros((2, f.nz), dtype=bool)  # A[p, z]: column (p, z) lies in X1
    pos = 0
    for code_val in (3, 0, 1, 2):
        k = int(tally[code_val]) // 2
        A[0, pos:pos + k] = code_val >> 1
        A[1, pos:pos + k] = code_val & 1
        pos += k
    X1 = np.where(f.p, A[1][f.z], A[0][f.z])
    x1p = f.pair_codes(X1)
    h1 = _fix_parity(_match_codes(x1p, x2p), x1p, parities[1])

    F0 = ~f.p
    f0c, x1c = f.column_codes(F0), f.column_codes(X1)
    g2 = _fix_parity(_match_codes(f0c, x1c), f0c, parities[2])
    del f, Z, zc, X2, x2c, x2p, X1, x1p, F0, f0c, x1c

    pi1 = P.lift(Perm(n - 1, g1, check=False), r2)
    sigma1 = P.lift(Perm(n - 1, h1, check=False), r1)
    pi2 = P.lift(Perm(n - 1, g2, check=False), r2)
    return Solution(r1, r2, pi1, sigma1, pi2)


def parity_variant(sol: Solution, sigma: Perm) -> Solution | None:
    """Same product π1 σ1 π2 with both r2-blocks flipped in concurrent parity.

    Works when σ1 carries some square z1 onto a square z0.  The r1-flips w0, w1
    of those squares lie in SC^(r2) with odd inner part and satisfy
    w0 σ1 w1 = σ1, so (π1 w0, σ1, w1 π2) has the same product.
    """
    n, r1, r2 = sigma.n, sol.r1, sol.r2
    f = _Frame(n, r1, r2)
    s1 = sol.sigma1.image
    for z1 in range(f.nz):
        nodes = f.node(np.zeros(2, dtype=np.int64), np.array([0, 1]), np.full(2, z1))
        z0 = set(f.z[s1[nodes]].tolist())
        if len(z0) == 1:
            w0, w1 = _square_flip(f, z0.pop()), _square_flip(f, z1)
            return Solution(r1, r2, P.compose(sol.pi1, w0), sol.sigma1, P.compose(w1, sol.pi2))
    return None


def _square_flip(f: _Frame, z: int) -> Perm:
    nodes = f.node(np.array([0, 0, 1, 1]), np.array([0, 1, 0, 1]), np.full(4, z))
    img = np.arange(1 << f.n)
    img[nodes] = nodes ^ f.m1
    return Perm(f.n, img, check=False)


@dataclass(frozen=True)
class ControlResult:
    blocks: list[Block]
    sigma_ctl: Perm
    r2: int
    label: str
    switched: bool


def to_controlled_info(sigma: Perm, r1: int, even_blocks: bool = False) -> ControlResult:
    n = sigma.n
    if n < 4:
        raise PreconditionError("to_controlled needs n >= 4")
    if not P.is_even(sigma):
        raise PreconditionError("odd permutation")
    P.mask(n, r1)
    want = (EVEN, EVEN, EVEN) if even_blocks else (None, None, None)
    dims = list(P.iter_dims(n, [r1]))
    r2 = dims[0]
    label = case_classify(build_cuboid(sigma, r1, r2).counts)
    if P.is_controlled(sigma, r1):
        ident = P.identity(n - 1)
        return ControlResult([Block(r2, ident), Block(r1, ident), Block(r2, ident)], sigma, r2, label, False)
    switched = label not in GOOD
    if switched:
        r2 = dims[1]
        if case_classify(build_cuboid(sigma, r1, r2).counts) not in GOOD:
            raise AssertionError("bad case persists after switching dimension")
    sol = _solve(sigma, r1, r2, want)
    blocks = sol.blocks()
    ctl = P.compose(sigma, sol.pi1, sol.sigma1, sol.pi2)
    assert P.is_controlled(ctl, r1)
    return ControlResult(blocks, ctl, r2, label, switched)


def to_controlled(sigma: Perm, r1: int) -> tuple[list[Block], Perm]:
    res = to_controlled_info(sigma, r1)
    return res.blocks, res.sigma_ctl


def to_controlled_even(sigma: Perm, r1: int) -> tuple[list[Block], Perm]:
    res = to_controlled_info(sigma, r1, even_blocks=True)
    return res.blocks, res.sigma_ctl


__all__ = [
    "BAD1", "BAD2", "GOOD1", "GOOD2", "GOOD3", "CardTally", "ControlResult", "Cuboid",
    "PairCounts", "Solution", "build_cuboid", "canonicalize", "canonicalize_steps",
    "card_census", "card_tally", "case_classify", "colors", "design_squares",
    "parity_variant", "solve_good", "switch_dimension_counts", "to_controlled",
    "to_controlled_even", "to_controlled_info", "vertical_pair_stats", "whitenable", "ODD",
]
