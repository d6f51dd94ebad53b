"""Two-factor cycle packing: realize a cycle pattern as ``π τ``.

Picture the nodes at dimensions (r1, r2) as ``(p, q, z)``: ``p`` is the r1 bit,
``q`` the r2 bit and ``z`` a *base element* made of the other n-2 bits.  A factor
``π ∈ SC^(r1)`` is a permutation of the cells ``(q, z)`` applied to both
p-layers; ``τ ∈ SC^(r2)`` permutes the cells ``(p, z)``.

A *gadget* is a small pair of cell permutations on a few local base elements
whose product has one or two prescribed pairs of cycles.  Gadgets start from
the searched seeds in :mod:`revblocks._seeds` and grow by chain insertion:

* a pi-chain threads K fresh base elements in front of a pi-cell ``d``; each
  p-layer gains 2K nodes on the cycle through ``(p, d)``;
* a tau-chain threads K fresh base elements behind a tau-cell ``c``; each
  q-layer gains 2K nodes on the cycle through ``(c, q)``.

When both nodes of the anchor cell lie on one cycle it grows by 4K; when they
lie on two different cycles each grows by 2K.  Chain insertions keep the cell
parities and leave room for parity toggles that conjugate the product, which
is how concurrently even factors are reached.
"""

from __future__ import annotations

import itertools
from array import array
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import perm as P
from ._seeds import ALTERNATES, SEEDS, STARTS
from .errors import PreconditionError
from .perm import Perm

_T_ORDER = "EAB"


@dataclass(frozen=True)
class Region:
    """Nodes ``{0,1}^2 x base`` at dimensions (r1, r2) of an n-bit space."""

    n: int
    r1: int
    r2: int
    base: tuple[int, ...]

    def nodes(self) -> np.ndarray:
        from .cuboid import _Frame

        f = _Frame(self.n, self.r1, self.r2)
        z = np.repeat(np.asarray(self.base, dtype=np.int64), 4)
        pq = np.tile(np.arange(4), len(self.base))
        return np.sort(f.node(pq >> 1, pq & 1, z))


def full_region(n: int, r1: int, r2: int) -> Region:
    return Region(n, r1, r2, tuple(range(1 << (n - 2))))


# ---------------------------------------------------------------- gadgets


@dataclass
class Gadget:
    pi: np.ndarray
    tau: np.ndarray
    reps: list[int]  # one node per target cycle
    want: list[int]  # target length per rep
    variant: tuple[int, int] = (0, 0)
    flips: list[str] = field(default_factory=list)

    @property
    def m(self) -> int:
        return self.pi.size // 2

    def product(self) -> np.ndarray:
        node = np.arange(4 * self.m)
        k, p, q = node >> 2, (node >> 1) & 1, node & 1
        t = self.tau[2 * k + p]
        s = self.pi[2 * (t >> 1) + q]
        return 4 * (s >> 1) + 2 * (t & 1) + (s & 1)

    def labels(self) -> np.ndarray:
        return P.orbit_labels(self.product())

    def pattern(self) -> Counter:
        lab = self.labels()
        lens = np.bincount(lab, minlength=lab.size)
        return Counter(lens[lens > 0].tolist())

    def parities(self) -> tuple[int, int]:
        return (_arr_parity(self.pi), _arr_parity(self.tau))

    def copy(self) -> "Gadget":
        return Gadget(self.pi.copy(), self.tau.copy(), list(self.reps), list(self.want),
                      self.variant, list(self.flips))


def _arr_parity(a: np.ndarray) -> int:
    lab = P.orbit_labels(a)
    return int(a.size - np.count_nonzero(lab == np.arange(a.size))) & 1


def _cell_nodes(m: int):
    """Node pairs of every pi-cell and every tau-cell, indexed by cell."""
    c = np.arange(2 * m)
    k, b = c >> 1, c & 1
    pi_pairs = (4 * k + b, 4 * k + 2 + b)
    tau_pairs = (4 * k + 2 * b, 4 * k + 2 * b + 1)
    return pi_pairs, tau_pairs


def _find_anchor(
    g: Gadget, x: int, y: int | None = None, kinds: Sequence[str] = ("tau", "pi"),
    avoid: frozenset[int] = frozenset(),
) -> tuple[str, int] | None:
    """A cell whose two nodes lie on the cycles of ``x`` and ``y`` (``y`` = x when None).

    Kinds are tried in order; within a kind, cells on ``avoid`` base elements
    are used only when nothing else qualifies.
    """
    lab = g.labels()
    lx = lab[x]
    ly = lx if y is None else lab[y]
    pi_pairs, tau_pairs = _cell_nodes(g.m)
    for kind in kinds:
        a, b = pi_pairs if kind == "pi" else tau_pairs
        la, lb = lab[a], lab[b]
        idx = np.flatnonzero(((la == lx) & (lb == ly)) | ((la == ly) & (lb == lx)))
        if not idx.size:
            continue
        for c in idx.tolist():
            if (c >> 1) not in avoid:
                return kind, c
        return kind, int(idx[0])
    return None


def _insert(g: Gadget, kind: str, cell: int, k: int) -> range:
    """Thread ``k`` fresh base elements through the anchor cell; return their ids."""
    m = g.m
    if k <= 0:
        return range(m, m)
    chain = np.arange(2 * m, 2 * (m + k), dtype=np.int64) + 1
    ident = np.arange(2 * m, 2 * (m + k), dtype=np.int64)
    if kind == "pi":
        before = int(np.flatnonzero(g.pi == cell)[0])
        pi = np.concatenate([g.pi, chain])
        pi[before] = 2 * m
        pi[-1] = cell
        g.pi, g.tau = pi, np.concatenate([g.tau, ident])
    else:
        old = int(g.tau[cell])
        tau = np.concatenate([g.tau, chain])
        tau[cell] = 2 * m
        tau[-1] = old
        g.tau, g.pi = tau, np.concatenate([g.pi, ident])
    return range(m, m + k)


_OTHER = {"pi": "tau", "tau": "pi"}


def _grow_single(
    g: Gadget, rep: int, k: int, first: str, grown: dict[str, set[int]], lead: int = 1
) -> None:
    """Lengthen the cycle through ``rep`` by 4k.

    ``lead`` bases go in with a ``first`` chain, one with the other kind, the
    rest in bulk with a pi-chain.  Anchors avoid base elements grown by the
    other kind so that toggle sites survive where possible.
    """
    if k <= 0:
        return
    runs = [(first, min(lead, k))]
    if k > lead:
        runs.append((_OTHER[first], 1))
    if k > lead + 1:
        runs.append(("pi", k - lead - 1))
    for kind, run in runs:
        anchor = _find_anchor(g, rep, kinds=(kind, _OTHER[kind]),
                              avoid=frozenset(grown[_OTHER[kind]]))
        if anchor is None:
            raise AssertionError("gadget cycle has no growth anchor")
        grown[anchor[0]].update(_insert(g, anchor[0], anchor[1], run))


def _grow_mixed(g: Gadget, x: int, y: int, k: int, first: str, grown: dict[str, set[int]]) -> None:
    """Lengthen the cycles through ``x`` and ``y`` by 2k each."""
    anchor = _find_anchor(g, x, y, kinds=(first, _OTHER[first]))
    if anchor is None:
        raise AssertionError("fix-point pair has no mixed anchor")
    grown[anchor[0]].update(_insert(g, anchor[0], anchor[1], k))


# ------------------------------------------------------------ pair classes


def _r_seed(a: int, b: int) -> tuple[str, list[int]]:
    """Seed name and slot-ordered targets for a pair with a + b = 0 mod 4."""
    if a % 2 == 0:
        return ("R2_2" if a % 4 == 2 else "R4_4"), [a, b]
    if 1 in (a, b):
        return "R1_7", [1, a + b - 1]
    three, one = (a, b) if a % 4 == 3 else (b, a)
    return "R7_9", [three, one]


def _t_class(a: int, b: int) -> tuple[str, list[int]]:
    """Class letter and slot-ordered targets for a pair with a + b = 2 mod 4."""
    if a % 2 == 0:
        return "E", ([a, b] if a % 4 == 2 else [b, a])
    if (a, b) == (1, 1) or min(a, b) >= 7:
        return "A", sorted((a, b))
    return "B", [1, a + b - 1]


def _check_arity(lengths: Iterable[int]) -> None:
    for v in lengths:
        if v < 1:
            raise PreconditionError(f"cycle length {v} must be positive")
        if v in (3, 5):
            raise PreconditionError("3- and 5-cycles cannot be packed by two concurrent factors")


def _fits(seed: str, slots: list[tuple[str, list[int]]]) -> bool:
    """Whether every non fix-point-pair slot can grow from the seed's start."""
    start = STARTS[seed]
    i = 0
    for cls, ts in slots:
        for t in ts:
            s0 = start[i]
            i += 1
            if cls != "A" and (t < s0 or (t - s0) % 4):
                return False
    return True


def _build(
    seed: str, variant: tuple[int, int], slots: list[tuple[str, list[int]]],
    first: str = "tau", lead: int = 1,
) -> Gadget:
    """Instantiate a seed and grow every slot to its target length."""
    pi, tau, reps = SEEDS[seed][variant]
    g = Gadget(np.array(pi, dtype=np.int64), np.array(tau, dtype=np.int64),
               [r for grp in reps for r in grp], [t for _, ts in slots for t in ts], variant)
    cur = list(STARTS[seed])
    grown: dict[str, set[int]] = {"pi": set(), "tau": set()}
    # Fix-point pairs that must become odd cycles first grow together.
    for gi, (cls, ts) in enumerate(slots):
        if cls == "A" and ts != [1, 1]:
            k22 = 1 if ts[0] % 4 == 3 else 2
            i = 2 * gi
            _grow_mixed(g, g.reps[i], g.reps[i + 1], k22, first, grown)
            cur[i] += 2 * k22
            cur[i + 1] += 2 * k22
    for i, (c, t) in enumerate(zip(cur, g.want)):
        d = t - c
        if d < 0 or d % 4:
            raise AssertionError(f"slot cannot grow from {c} to {t}")
        _grow_single(g, g.reps[i], d // 4, first, grown, lead)
    return g


def _spec_for_r(a: int, b: int) -> tuple[str, list[tuple[str, list[int]]]]:
    name, ts = _r_seed(a, b)
    return name, [(name, ts)]


def _spec_for_t(pairs: Sequence[tuple[int, int]]) -> tuple[str, list[tuple[str, list[int]]]]:
    cls = sorted((_t_class(a, b) for a, b in pairs), key=lambda c: _T_ORDER.index(c[0]))
    return "T" + "".join(c for c, _ in cls), cls


def _realize(name: str, slots) -> Gadget:
    return _build(name, min(SEEDS[name]), slots)


def _check_gadget(g: Gadget) -> None:
    want = Counter(g.want)
    want[1] += 4 * g.m - sum(g.want)
    got = g.pattern()
    if +want != got:
        raise AssertionError(f"gadget pattern {dict(got)} != {dict(+want)}")
    lab = g.labels()
    if Counter(np.bincount(lab, minlength=lab.size)[lab[g.reps]].tolist()) != Counter(g.want):
        raise AssertionError("gadget reps do not sit on the target cycles")


# ----------------------------------------------------------- parity toggles


def _toggle_sites(g: Gadget) -> tuple[np.ndarray, np.ndarray]:
    """Base elements admitting a pi-toggle and a tau-toggle.

    pi-toggle at k: the product maps (0,q,k) to (1,q,k) for both q, so swapping
    the pi-cells (0,k), (1,k) conjugates the product.  tau-toggle at k: the
    product maps (p,0,k) to (p,1,k) for both p.
    """
    M = g.product()
    k = np.arange(g.m)
    pi_ok = (M[4 * k] == 4 * k + 2) & (M[4 * k + 1] == 4 * k + 3)
    tau_ok = (M[4 * k] == 4 * k + 1) & (M[4 * k + 2] == 4 * k + 3)
    return np.flatnonzero(pi_ok), np.flatnonzero(tau_ok)


def _apply_toggle(g: Gadget, which: str, k: int) -> None:
    a, b = 2 * k, 2 * k + 1
    if which == "pi":
        s = np.arange(g.pi.size)
        s[a], s[b] = b, a
        g.pi = s[g.pi]
    else:
        g.tau = g.tau.copy()
        g.tau[a], g.tau[b] = g.tau[b], g.tau[a]
    g.flips.append(which)


def _options(name: str, slots) -> dict[tuple[int, int], tuple]:
    """Reachable (pi, tau) parities, each with a recipe: seed, variant, growth policy, toggles."""
    out: dict = {}
    seeds = [sd for sd in ALTERNATES.get(name, [name]) if _fits(sd, slots)]
    recipes = (
        (sd, v, first, lead)
        for sd in seeds
        for v in sorted(SEEDS[sd])
        for first, lead in itertools.product(("tau", "pi"), (1, 2))
    )
    for seed, v, first, lead in recipes:
        if len(out) == 4:
            break
        g = _build(seed, v, slots, first, lead)
        pis, taus = _toggle_sites(g)
        choices = [()]
        if pis.size:
            choices.append(("pi",))
        if taus.size:
            choices.append(("tau",))
        if pis.size and taus.size:
            choices.append(("pi", "tau"))
        for ch in choices:
            key = (v[0] ^ ("pi" in ch), v[1] ^ ("tau" in ch))
            out.setdefault(key, (seed, v, first, lead, ch))
    return out


def _realize_even(slots, seed, variant, first, lead, toggles) -> Gadget:
    g = _build(seed, variant, slots, first, lead)
    for which in toggles:
        pis, taus = _toggle_sites(g)
        sites = pis if which == "pi" else taus
        if not sites.size:
            raise AssertionError("toggle site vanished")
        _apply_toggle(g, which, int(sites[0]))
    if g.parities() != (variant[0] ^ ("pi" in toggles), variant[1] ^ ("tau" in toggles)):
        raise AssertionError("toggle did not flip the expected parity")
    return g


# --------------------------------------------------------------- embedding


def _embed(n: int, r1: int, r2: int, placed: Sequence[tuple[Gadget, np.ndarray]]) -> tuple[Perm, Perm]:
    """Lift gadgets placed on base lists into n-bit (π, τ)."""
    from .cuboid import _Frame

    nz = 1 << (n - 2)
    pi_cell = np.arange(2 * nz, dtype=np.int64)
    tau_cell = np.arange(2 * nz, dtype=np.int64)
    for g, base in placed:
        base = np.asarray(base, dtype=np.int64)
        c = np.arange(2 * g.m)
        src = 2 * base[c >> 1] + (c & 1)
        pi_cell[src] = 2 * base[g.pi >> 1] + (g.pi & 1)
        tau_cell[src] = 2 * base[g.tau >> 1] + (g.tau & 1)
    f = _Frame(n, r1, r2)
    p, q, z = f.p.astype(np.int64), f.q.astype(np.int64), f.z
    t = pi_cell[2 * z + q]
    pi = P._trusted(n, f.node(p, t & 1, t >> 1))
    t = tau_cell[2 * z + p]
    tau = P._trusted(n, f.node(t & 1, q, t >> 1))
    return pi, tau


def _region_base(S: Region, r1: int, r2: int, need: int) -> np.ndarray:
    if (S.r1, S.r2) != (r1, r2):
        raise PreconditionError("region dimensions do not match the request")
    base = np.asarray(S.base, dtype=np.int64)
    if len(set(base.tolist())) != base.size:
        raise PreconditionError("region base has repeated elements")
    if need > base.size:
        raise PreconditionError(f"region holds {4 * base.size} nodes, {4 * need} needed")
    return base[:need]


def rpack(r1: int, r2: int, a: int, b: int, S: Region) -> tuple[Perm, Perm]:
    """``(τ, π)`` with ``π τ`` an a-cycle and a b-cycle inside ``S``, fixing the rest."""
    n = S.n
    _check_dims(n, r1, r2)
    if a == 0 and b == 0:
        return P.identity(n), P.identity(n)
    _check_arity((a, b))
    if (a + b) % 4:
        raise PreconditionError("rpack needs a + b = 0 mod 4")
    name, slots = _spec_for_r(a, b)
    g = _realize(name, slots)
    _check_gadget(g)
    base = _region_base(S, r1, r2, g.m)
    pi, tau = _embed(n, r1, r2, [(g, base)])
    return tau, pi


def tpack(r1: int, r2: int, a: int, b: int, c: int, d: int, S: Region) -> tuple[Perm, Perm]:
    """``(τ, π)`` with ``π τ`` an a-, b-, c- and d-cycle inside ``S``, fixing the rest."""
    n = S.n
    _check_dims(n, r1, r2)
    _check_arity((a, b, c, d))
    if (a + b) % 4 != 2 or (c + d) % 4 != 2:
        raise PreconditionError("tpack needs a + b = c + d = 2 mod 4")
    if (a, b, c, d) == (1, 1, 1, 1):
        _region_base(S, r1, r2, 1)
        return P.identity(n), P.identity(n)
    name, slots = _spec_for_t([(a, b), (c, d)])
    g = _realize(name, slots)
    _check_gadget(g)
    base = _region_base(S, r1, r2, g.m)
    pi, tau = _embed(n, r1, r2, [(g, base)])
    return tau, pi


def _check_dims(n: int, r1: int, r2: int) -> None:
    P.mask(n, r1)
    P.mask(n, r2)
    if r1 == r2:
        raise PreconditionError("r1 and r2 must differ")


# --------------------------------------------------------- pattern synthesis


def _validate_pattern(pattern: dict[int, int], n: int) -> Counter:
    pat = Counter({int(k): int(v) for k, v in pattern.items() if v})
    if any(k < 1 or v < 0 for k, v in pat.items()):
        raise PreconditionError("cycle lengths and counts must be positive")
    total = sum(k * v for k, v in pat.items())
    if total != 1 << n:
        raise PreconditionError(f"pattern covers {total} nodes, expected {1 << n}")
    return pat


def pattern_parity(pattern: dict[int, int]) -> str:
    odd = sum(v for k, v in pattern.items() if k % 2 == 0) % 2
    return P.ODD if odd else P.EVEN


def pair_cycles(pattern: dict[int, int]) -> list[tuple[int, int]]:
    """Greedy pairing: smallest remaining length with the smallest same-parity partner."""
    left = Counter({int(k): int(v) for k, v in pattern.items() if v})
    if pattern_parity(left) != P.EVEN:
        raise PreconditionError("pattern of an odd permutation cannot be paired")
    out: list[tuple[int, int]] = []
    lengths = sorted(left)
    for i in lengths:
        while left[i]:
            left[i] -= 1
            j = next((j for j in lengths if left[j] and (i + j) % 2 == 0), None)
            if j is None:
                raise PreconditionError("pattern cannot be paired")
            left[j] -= 1
            out.append((i, j))
    return out


@dataclass
class _Plan:
    name: str
    slots: list
    m: int


def _plan(pattern: Counter) -> list[_Plan]:
    plans: list[_Plan] = []
    pending: list[tuple[int, int]] = []
    for a, b in pair_cycles(pattern):
        if (a + b) % 4 == 0:
            name, slots = _spec_for_r(a, b)
            plans.append(_Plan(name, slots, (a + b) // 4))
        else:
            pending.append((a, b))
            if len(pending) == 2:
                if pending != [(1, 1), (1, 1)]:
                    name, slots = _spec_for_t(pending)
                    plans.append(_Plan(name, slots, sum(map(sum, pending)) // 4))
                pending = []
    if pending:
        raise AssertionError("unpaired tpack request")
    return plans


def synthesize_pattern(
    pattern: dict[int, int], r1: int, r2: int, n: int, even: bool = False
) -> tuple[Perm, Perm]:
    """``(π, τ)`` with ``π ∈ SC^(r1)``, ``τ ∈ SC^(r2)`` and ``π τ`` of the given pattern.

    With ``even`` both factors are also concurrently even, or the call fails.
    """
    _check_dims(n, r1, r2)
    pat = _validate_pattern(pattern, n)
    _check_arity(pat)
    if pattern_parity(pat) != P.EVEN:
        raise PreconditionError("pattern of an odd permutation")
    plans = _plan(pat)
    if sum(pl.m for pl in plans) > 1 << (n - 2):
        raise PreconditionError("pattern does not fit")
    if even:
        gadgets = _choose_even(plans)
    else:
        gadgets = [_realize(pl.name, pl.slots) for pl in plans]
    placed = []
    off = 0
    for g in gadgets:
        if g.m:
            _check_gadget(g)
        placed.append((g, np.arange(off, off + g.m)))
        off += g.m
    pi, tau = _embed(n, r1, r2, placed)
    return pi, tau


def _choose_even(plans: list[_Plan]) -> list[Gadget]:
    """Pick per-gadget variants and toggles so both cell parities are even."""
    reach: dict[tuple[int, int], list] = {(0, 0): []}
    for pl in plans:
        opts = _options(pl.name, pl.slots)
        nxt: dict[tuple[int, int], list] = {}
        for state, hist in reach.items():
            for key, choice in opts.items():
                s = (state[0] ^ key[0], state[1] ^ key[1])
                if s not in nxt:
                    nxt[s] = hist + [choice]
        reach = nxt
    if (0, 0) not in reach:
        raise PreconditionError("no concurrently even realization for this pattern")
    return [
        _realize_even(pl.slots, *choice) for pl, choice in zip(plans, reach[(0, 0)])
    ]


# ---------------------------------------------------------------- conjugators


def conjugator(p: Perm, q: Perm) -> Perm:
    """``h`` with ``h p h^{-1} = q``: equal-length cycles aligned in leader order."""
    if p.n != q.n:
        raise P.WidthMismatch("width mismatch")
    if P.cycle_pattern(p) != P.cycle_pattern(q):
        raise PreconditionError("cycle patterns differ")
    return P._trusted(p.n, _align(p.image, q.image))


def _cycle_order(img: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Nodes listed cycle by cycle (leader first) and the length of each node's cycle."""
    image = array("i")
    image.frombytes(img.astype(np.int32).tobytes())
    seen = bytearray(len(image))
    order = array("i")
    starts = array("i")
    for s in range(len(image)):
        if seen[s]:
            continue
        starts.append(len(order))
        x = s
        while not seen[x]:
            seen[x] = 1
            order.append(x)
            x = image[x]
    bounds = np.append(np.frombuffer(starts, dtype=np.int32), len(order))
    sizes = np.diff(bounds)
    return np.frombuffer(order, dtype=np.int32).astype(np.int64), np.repeat(sizes, sizes)


def _align(pimg: np.ndarray, qimg: np.ndarray) -> np.ndarray:
    po, pl = _cycle_order(pimg)
    qo, ql = _cycle_order(qimg)
    # Stable sort by cycle length keeps leader order and in-cycle order.
    ps = np.argsort(pl, kind="stable")
    qs = np.argsort(ql, kind="stable")
    h = np.empty_like(pimg)
    h[po[ps]] = qo[qs]
    return h


__all__ = [
    "Gadget", "Region", "conjugator", "full_region", "pair_cycles", "pattern_parity",
    "rpack", "synthesize_pattern", "tpack",
]
