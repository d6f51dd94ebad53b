"""A fully worked 4-bit instance: the input, its factors and its cuboid tallies.

``SIGMA = F6 F7 F8 F9 F5^{-1} F4^{-1} (F1 F2 F3)^{-1}`` where F6, F9, F4 are
concurrent at 1, F7, F5 and F1 F2 F3 at 2, and F8 at 3.
"""

from __future__ import annotations

from . import perm as P
from .perm import Perm

SIGMA = "(1001,1100,0101)(1110,0110,0111,1111)(1010,0010,0011,1011)"

FACTORS = {
    "F1": "(1110,0111)(1010,0011)",
    "F2": "(0100,0101)(0000,0001)",
    "F3": "(0100,1110)(0000,1010)(1101,0110)(1001,0010)",
    "F4": "(1000,1010)(0000,0010)",
    "F5": "(1100,0100)(1000,0000)(1101,0110)(1001,0010)",
    "F6": "(0000,0001,0010)(0011,0111,0100,0101,0110)"
          "(1000,1001,1010)(1011,1111,1100,1101,1110)",
    "F7": "(1000,1011)(1100,1111)",
    "F8": "(1010,1110)(1000,1100)",
    "F9": "(0101,0111)(0001,0010,0110,0011)(1101,1111)(1001,1010,1110,1011)",
}

F123 = "(0000,0011,1010,0001)(0100,0111,1110,0101)(0010,1001)(0110,1101)"
CONTROLLED = "(0000,0001)(0010,0011)(0100,0101)(0110,0111)(1000,1100,1111,1110,1001,1011,1010)"

# Cuboid tallies at (r1, r2) = (1, 2).
COUNTS = (1, 0, 1, 2, 1, 0, 1, 2)

# Three-bit two-factor instance: f^{-1} g and a pair realizing its pattern.
F_INV_G = "(000,101,100,110)(001,010)"
PAIR = ("(000,011)(100,111)", "(010,110)(000,100)")  # concurrent at 1 and at 2
CONJ = "(101,111)(001,010,110,011)"


def sigma() -> Perm:
    return P.parse_cycles(SIGMA, 4)


def factor(name: str) -> Perm:
    return P.parse_cycles(FACTORS[name], 4)


def factor_chain() -> list[tuple[Perm, int]]:
    """The seven factors with their dimensions, leftmost first."""
    inv = P.inverse
    f123 = P.compose(factor("F1"), factor("F2"), factor("F3"))
    return [
        (factor("F6"), 1), (factor("F7"), 2), (factor("F8"), 3), (factor("F9"), 1),
        (inv(factor("F5")), 2), (inv(factor("F4")), 1), (inv(f123), 2),
    ]
