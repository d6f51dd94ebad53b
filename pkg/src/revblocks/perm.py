"""Exact permutation algebra over {0,1}^n.

A permutation is stored as a full image table: ``image[x]`` is the image of
node ``x``.  Bit 1 is the most significant bit of the node index, so the
bitstring ``1100`` is node 12 for n = 4.  Products apply the right factor
first: ``compose(p, q)(x) == p(q(x))``.
"""

from __future__ import annotations

import hashlib
import re
from collections import Counter
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import NotConcurrent, ParseError, PreconditionError, WidthMismatch

WIDTH_CAP = 24

EVEN = "even"
ODD = "odd"


class Perm:
    """Immutable bijection on ``[0, 2**n)``."""

    __slots__ = ("n", "image", "_labels")

    def __init__(self, n: int, image: Sequence[int] | np.ndarray, check: bool = True):
        if check:
            if not 0 <= n <= WIDTH_CAP:
                raise PreconditionError(f"width {n} outside [0, {WIDTH_CAP}]")
        arr = np.array(image, dtype=np.int64) if check else np.asarray(image, dtype=np.int64)
        if check:
            size = 1 << n
            if arr.shape != (size,):
                raise PreconditionError(f"expected {size} images for n={n}, got {arr.size}")
            if size and (arr.min() < 0 or arr.max() >= size):
                bad = int(np.flatnonzero((arr < 0) | (arr >= size))[0])
                raise PreconditionError(f"image at position {bad} out of range")
            seen = np.zeros(size, dtype=bool)
            seen[arr] = True
            if not seen.all():
                counts = np.bincount(arr, minlength=size)
                bad = int(np.flatnonzero(counts[arr] > 1)[1])
                raise PreconditionError(f"duplicate image at position {bad}")
        arr.setflags(write=False)
        self.n = n
        self.image = arr
        self._labels = None

    @property
    def size(self) -> int:
        return 1 << self.n

    def __call__(self, x: int) -> int:
        return int(self.image[x])

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Perm)
            and other.n == self.n
            and bool(np.array_equal(other.image, self.image))
        )

    def __hash__(self) -> int:
        return hash((self.n, self.image.tobytes()))

    def __mul__(self, other: "Perm") -> "Perm":
        return compose(self, other)

    def __repr__(self) -> str:
        if self.n <= 5:
            return f"Perm({self.n}, {format_cycles(self) or '()'})"
        return f"Perm(n={self.n}, digest={digest(self)[:12]})"

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.image, np.arange(self.size)))

    def inverse(self) -> "Perm":
        return inverse(self)


def _trusted(n: int, image: np.ndarray) -> Perm:
    return Perm(n, image, check=False)


def identity(n: int) -> Perm:
    return _trusted(n, np.arange(1 << n, dtype=np.int64))


def from_images(n: int, images: Iterable[int]) -> Perm:
    return Perm(n, list(images))


def from_cycles(n: int, cycles: Iterable[Sequence[int]]) -> Perm:
    """Build a permutation from disjoint cycles given as node lists."""
    image = np.arange(1 << n, dtype=np.int64)
    used: set[int] = set()
    for cyc in cycles:
        for k, x in enumerate(cyc):
            if x in used:
                raise PreconditionError(f"node {x} appears twice in the cycle list")
            used.add(x)
            image[x] = cyc[(k + 1) % len(cyc)]
    return Perm(n, image)


def _check_width(p: Perm, q: Perm) -> None:
    if p.n != q.n:
        raise WidthMismatch(f"width mismatch: {p.n} vs {q.n}")


def compose(p: Perm, *rest: Perm) -> Perm:
    """Product ``p q r ...``; the rightmost factor acts first."""
    out = p.image
    for q in rest:
        _check_width(p, q)
        out = out[q.image]
    return _trusted(p.n, out)


def inverse(p: Perm) -> Perm:
    inv = np.empty_like(p.image)
    inv[p.image] = np.arange(p.size, dtype=_index_dtype(p.size))
    return _trusted(p.n, inv)


def conjugate(h: Perm, p: Perm) -> Perm:
    """Return ``h p h^{-1}``."""
    _check_width(h, p)
    hp = np.empty(p.size, dtype=_index_dtype(p.size))
    _gather(h.image, p.image, hp)
    out = np.empty_like(p.image)
    out[h.image] = hp
    return _trusted(p.n, out)


def cycle_leaders(p: Perm) -> np.ndarray:
    """Label every node with the minimal element of its cycle.

    Pointer doubling: after k rounds each label is the minimum over 2**k
    consecutive orbit points, which covers the whole cycle after log2 rounds.
    """
    if p._labels is None:
        lab = orbit_labels(p.image)
        lab.setflags(write=False)
        p._labels = lab
    return p._labels


def orbit_labels(f: np.ndarray) -> np.ndarray:
    """Cycle-minimum labels for a bijection given as a bare index array (int32 when it fits)."""
    f = f.astype(_index_dtype(f.size))
    lab = np.arange(f.size, dtype=f.dtype)
    buf = np.empty_like(f)
    span = 1
    while span < f.size:
        _gather(lab, f, buf)
        if np.array_equal(buf, lab):
            break  # constant along every orbit step, hence along whole cycles
        np.minimum(lab, buf, out=lab)
        _gather(f, f, buf)
        f, buf = buf, f
        span *= 2
    return lab


_CHUNK = 1 << 16


def _gather(src: np.ndarray, idx: np.ndarray, out: np.ndarray) -> None:
    """``out[:] = src[idx]`` in chunks, so index casts never cost a full table."""
    for a in range(0, idx.size, _CHUNK):
        out[a:a + _CHUNK] = src[idx[a:a + _CHUNK]]


def _index_dtype(size: int):
    return np.int32 if size < 1 << 31 else np.int64


def cycle_pattern(p: Perm) -> Counter:
    """Multiset ``{length: count}`` of cycle lengths, fix-points included."""
    srt = np.sort(cycle_leaders(p))
    out: Counter = Counter()
    prev = 0
    # Run lengths of the sorted labels, chunk by chunk (bincount would upcast to a full int64 table).
    for a in range(0, srt.size, _CHUNK):
        seg = srt[max(a - 1, 0):a + _CHUNK]
        starts = np.flatnonzero(seg[1:] != seg[:-1]) + max(a - 1, 0) + 1
        if a == 0:
            starts = starts[starts > 0]
        if starts.size:
            lens = np.diff(starts, prepend=prev)
            out.update(dict(zip(*(x.tolist() for x in np.unique(lens, return_counts=True)))))
            prev = int(starts[-1])
    out[srt.size - prev] += 1
    return out


def num_cycles(p: Perm) -> int:
    lab = cycle_leaders(p)
    return int(np.count_nonzero(lab == np.arange(p.size)))


def parity(p: Perm) -> str:
    return EVEN if (p.size - num_cycles(p)) % 2 == 0 else ODD


def is_even(p: Perm) -> bool:
    return parity(p) == EVEN


def cycle_decomposition(p: Perm, include_fixed: bool = True) -> list[list[int]]:
    """Cycles led by their minimal element, sorted by leader."""
    image = p.image.tolist()
    seen = bytearray(p.size)
    out: list[list[int]] = []
    for start in range(p.size):
        if seen[start]:
            continue
        cyc = [start]
        seen[start] = 1
        x = image[start]
        while x != start:
            seen[x] = 1
            cyc.append(x)
            x = image[x]
        if include_fixed or len(cyc) > 1:
            out.append(cyc)
    return out


def cycle_of(p: Perm, x: int) -> list[int]:
    cyc = [x]
    y = int(p.image[x])
    while y != x:
        cyc.append(y)
        y = int(p.image[y])
    return cyc


def support(p: Perm) -> set[int]:
    return set(np.flatnonzero(p.image != np.arange(p.size)).tolist())


def dist(p: Perm, x: int, y: int) -> float:
    """Steps k >= 0 with p^k(x) = y, or infinity when y is on another cycle."""
    k = 0
    z = x
    while True:
        if z == y:
            return k
        z = int(p.image[z])
        k += 1
        if z == x:
            return float("inf")


def dist_min(p: Perm, x: int, y: int) -> float:
    return min(dist(p, x, y), dist(p, y, x))


# ---------------------------------------------------------------- bit helpers


def mask(n: int, i: int) -> int:
    """Integer mask of dimension ``i`` (1 = most significant)."""
    if not 1 <= i <= n:
        raise PreconditionError(f"dimension {i} outside [1, {n}]")
    return 1 << (n - i)


def bit(x: int, n: int, i: int) -> int:
    return (x >> (n - i)) & 1


def flip(x: int, n: int, i: int) -> int:
    return x ^ (1 << (n - i))


def remove_bit(x: np.ndarray | int, n: int, i: int):
    """Delete dimension ``i`` from node indices, giving (n-1)-bit indices."""
    s = n - i
    low = (1 << s) - 1
    return ((x >> (s + 1)) << s) | (x & low)


def insert_bit(y: np.ndarray | int, n: int, i: int, b):
    """Inverse of :func:`remove_bit`: place ``b`` at dimension ``i``."""
    s = n - i
    low = (1 << s) - 1
    return ((y >> s) << (s + 1)) | (b << s) | (y & low)


def sub_dim(i: int, removed: int) -> int:
    """Index of dimension ``i`` after deleting dimension ``removed``."""
    if i == removed:
        raise PreconditionError("dimension was removed")
    return i - 1 if i > removed else i


def sup_dim(i: int, removed: int) -> int:
    """Inverse of :func:`sub_dim`."""
    return i + 1 if i >= removed else i


# ---------------------------------------------------- membership predicates


def _halves(img: np.ndarray, n: int, i: int) -> np.ndarray:
    """View of an image table as (high bits, bit i, low bits)."""
    return img.reshape(-1, 2, 1 << (n - i))


def is_controlled(p: Perm, i: int) -> bool:
    m = mask(p.n, i)
    v = _halves(p.image, p.n, i)
    return not np.any(v[:, 0, :] & m) and bool(np.all(v[:, 1, :] & m))


def is_concurrent(p: Perm, i: int) -> bool:
    if not is_controlled(p, i):
        return False
    v = _halves(p.image, p.n, i)
    return bool(np.array_equal(v[:, 1, :], v[:, 0, :] | mask(p.n, i)))


def restrict(p: Perm, i: int) -> Perm:
    """The (n-1)-bit inner permutation of a concurrent permutation."""
    if not is_concurrent(p, i):
        raise NotConcurrent(f"permutation is not concurrent at dimension {i}")
    return _face(p, i, 0)


def _face(p: Perm, i: int, b: int) -> Perm:
    n, s = p.n, p.n - i
    y = _halves(p.image, n, i)[:, b, :].copy().reshape(-1)
    if b:
        y ^= 1 << s  # clear bit i on a copy
    hi = y >> (s + 1)
    hi <<= s
    y &= (1 << s) - 1
    y |= hi
    return _trusted(n - 1, y)


def lift(q: Perm, i: int) -> Perm:
    """Apply ``q`` to the other n-1 bits, leaving bit ``i`` alone."""
    return assemble_controlled(q, q, i)


def concurrent_parity(p: Perm, i: int) -> str:
    return parity(restrict(p, i))


def controlled_halves(p: Perm, i: int) -> tuple[Perm, Perm]:
    """Split a permutation controlled at ``i`` into its 0-face and 1-face parts."""
    if not is_controlled(p, i):
        raise NotConcurrent(f"permutation is not controlled at dimension {i}")
    return _face(p, i, 0), _face(p, i, 1)


def assemble_controlled(f: Perm, g: Perm, i: int) -> Perm:
    """Block-diagonal permutation acting as ``f`` where bit i is 0, ``g`` where it is 1."""
    _check_width(f, g)
    n = f.n + 1
    s = n - i
    out = np.empty((1 << (i - 1), 2, 1 << s), dtype=np.int64)
    _insert_into(out[:, 0, :], f.image, s)
    hi = out[:, 1, :]
    if g is f:
        np.bitwise_or(out[:, 0, :], 1 << s, out=hi)
    else:
        _insert_into(hi, g.image, s)
        hi |= 1 << s
    return _trusted(n, out.reshape(-1))


def _insert_into(dst: np.ndarray, y: np.ndarray, s: int) -> None:
    """Write ``insert_bit(y, ., ., 0)`` into the view ``dst`` with one half-size temporary."""
    y = y.reshape(dst.shape)
    np.right_shift(y, s, out=dst)
    dst <<= s + 1
    dst |= y & ((1 << s) - 1)


def concurrent_swap_pairs(n: int, i: int, pairs: Iterable[tuple[int, int]]) -> Perm:
    """Lift of a product of disjoint transpositions ``(a b)`` on nodes with equal bit i.

    Each ``(a, b)`` also swaps ``a^{+i}`` with ``b^{+i}``, so the result is concurrent.
    """
    m = mask(n, i)
    image = np.arange(1 << n, dtype=np.int64)
    for a, b in pairs:
        if (a & m) != (b & m):
            raise PreconditionError("swap partners must share the controlled bit")
        for u, v in ((a, b), (a ^ m, b ^ m)):
            if image[u] != u or image[v] != v:
                raise PreconditionError("swap pairs overlap")
            image[u], image[v] = v, u
    return Perm(n, image)


# ------------------------------------------------------------- text formats


def bitstring(x: int, n: int) -> str:
    return format(x, f"0{n}b") if n else ""


def format_cycles(p: Perm) -> str:
    """Cycle string with fixed-width bitstrings; fix-points omitted."""
    return "".join(
        "(" + ",".join(bitstring(x, p.n) for x in cyc) + ")"
        for cyc in cycle_decomposition(p, include_fixed=False)
    )


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, n: int | None = None) -> Perm:
    """Parse ``"(0000,0001)(0010,0011)"``; the width defaults to the bitstring length."""
    body = "".join(text.split())
    groups = _CYCLE_RE.findall(body)
    if _CYCLE_RE.sub("", body):
        raise ParseError(f"unexpected text outside cycles: {_CYCLE_RE.sub('', body)!r}")
    cycles: list[list[int]] = []
    for g in groups:
        if not g:
            continue
        toks = g.split(",")
        for t in toks:
            if not t or set(t) - {"0", "1"}:
                raise ParseError(f"bad bitstring {t!r}")
            if n is None:
                n = len(t)
            if len(t) != n:
                raise ParseError(f"bitstring {t!r} does not have width {n}")
        cycles.append([int(t, 2) for t in toks])
    if n is None:
        raise ParseError("cannot infer width from an empty cycle string")
    if n > WIDTH_CAP:
        raise ParseError(f"width {n} exceeds cap {WIDTH_CAP}")
    try:
        return from_cycles(n, cycles)
    except PreconditionError as exc:
        raise ParseError(str(exc)) from exc


def format_images(p: Perm) -> str:
    return f"{p.n}\n" + " ".join(map(str, p.image.tolist())) + "\n"


def parse_images(text: str) -> Perm:
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        raise ParseError("empty input")
    try:
        n = int(lines[0])
    except ValueError as exc:
        raise ParseError(f"first line must be the width, got {lines[0]!r}") from exc
    if not 0 <= n <= WIDTH_CAP:
        raise ParseError(f"width {n} outside [0, {WIDTH_CAP}]")
    try:
        vals = [int(t) for t in " ".join(lines[1:]).split()]
    except ValueError as exc:
        raise ParseError(f"non-integer image: {exc}") from exc
    try:
        return Perm(n, vals)
    except PreconditionError as exc:
        raise ParseError(str(exc)) from exc


def digest(p: Perm) -> str:
    h = hashlib.sha256()
    h.update(p.n.to_bytes(1, "big"))
    h.update(p.image.astype("<i8").tobytes())
    return h.hexdigest()


def random_perm(n: int, rng: np.random.Generator, even: bool = False) -> Perm:
    """Uniform shuffle; with ``even`` an odd result is repaired by swapping two images."""
    image = rng.permutation(1 << n).astype(np.int64)
    p = _trusted(n, image)
    if even and not is_even(p):
        image = image.copy()
        image[0], image[1] = image[1], image[0]
        p = _trusted(n, image)
    return p


def iter_dims(n: int, exclude: Iterable[int] = ()) -> Iterator[int]:
    ex = set(exclude)
    return (i for i in range(1, n + 1) if i not in ex)
