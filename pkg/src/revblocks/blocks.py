"""Decomposition factors and their containers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from . import perm as P
from .perm import Perm

BLOCK7 = "block7"
EVEN10 = "even10"
GREEDY = "block7-greedy"


@dataclass(frozen=True)
class Block:
    """One concurrent factor: an (n-1)-bit inner permutation lifted along ``dim``."""

    dim: int
    inner: Perm

    @property
    def n(self) -> int:
        return self.inner.n + 1

    def lift(self) -> Perm:
        return P.lift(self.inner, self.dim)

    def inverse(self) -> "Block":
        return Block(self.dim, P.inverse(self.inner))

    def parity(self) -> str:
        return P.parity(self.inner)

    def is_identity(self) -> bool:
        return self.inner.is_identity()

    @classmethod
    def of(cls, p: Perm, dim: int) -> "Block":
        """Wrap a concurrent n-bit permutation."""
        return cls(dim, P.restrict(p, dim))


def product(blocks: Sequence[Block], n: int) -> Perm:
    """Ordered product ``b1 b2 ... bk`` (the last block acts first)."""
    out = P.identity(n)
    for b in blocks:
        if b.n != n:
            raise P.WidthMismatch(f"block width {b.n} does not match {n}")
        out = P.compose(out, b.lift())
    return out


def merge_adjacent(blocks: Sequence[Block]) -> list[Block]:
    """Fuse neighbours on the same dimension and drop identities."""
    out: list[Block] = []
    for b in blocks:
        if out and out[-1].dim == b.dim:
            prev = out.pop()
            b = Block(b.dim, P.compose(prev.inner, b.inner))
        out.append(b)
    return [b for b in out if not b.is_identity()]


@dataclass
class Decomposition:
    n: int
    mode: str
    blocks: list[Block]
    source_digest: str
    stats: dict = field(default_factory=dict)

    def product(self) -> Perm:
        return product(self.blocks, self.n)

    def dims(self) -> list[int]:
        return [b.dim for b in self.blocks]
