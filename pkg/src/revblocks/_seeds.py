"""Seed gadgets for the two-factor cycle packer.

Found offline by exhaustive enumeration (up to three base elements) or by
annealing (four and five).  Encoding: base element k owns nodes 4k+2p+q
(p = r1 bit, q = r2 bit); ``pi`` maps cells 2k+q, ``tau`` maps cells 2k+p.
``reps`` lists one node of each target cycle, grouped by pair.  Each seed is
keyed by the parities of its (pi, tau) cell permutations.
"""

SEEDS = {
    "R2_2": {
        (0, 1): ([0, 1], [1, 0], [[0, 1]]),
        (1, 0): ([1, 0], [0, 1], [[0, 2]]),
    },
    "R4_4": {
        (0, 0): ([0, 2, 3, 1], [1, 2, 0, 3], [[0, 1]]),
        (0, 1): ([0, 1, 2, 3], [1, 2, 3, 0], [[0, 1]]),
        (1, 0): ([0, 1, 3, 2], [2, 3, 0, 1], [[0, 2]]),
        (1, 1): ([0, 1, 3, 2], [1, 2, 3, 0], [[0, 1]]),
    },
    "R1_7": {
        (0, 0): ([0, 2, 3, 1], [0, 2, 3, 1], [[0, 1]]),
        (0, 1): ([0, 2, 3, 1], [0, 2, 1, 3], [[0, 1]]),
        (1, 0): ([0, 2, 1, 3], [0, 2, 3, 1], [[0, 1]]),
    },
    "R7_9": {
        (0, 0): ([0, 4, 3, 5, 7, 6, 1, 2], [6, 7, 1, 3, 5, 4, 0, 2], [[5, 0]]),
        (0, 1): ([0, 4, 3, 5, 7, 6, 1, 2], [3, 7, 1, 6, 5, 4, 0, 2], [[5, 0]]),
        (1, 0): ([4, 0, 3, 5, 7, 6, 1, 2], [3, 6, 1, 7, 5, 4, 0, 2], [[0, 1]]),
        (1, 1): ([4, 3, 0, 2, 7, 6, 1, 5], [3, 1, 6, 7, 5, 4, 0, 2], [[0, 1]]),
    },
    "TEE": {
        (0, 0): ([0, 1, 2, 3, 4, 5], [1, 0, 3, 4, 5, 2], [[0, 4], [1, 5]]),
        (0, 1): ([0, 3, 2, 1, 5, 4], [1, 2, 3, 0, 4, 5], [[8, 0], [10, 1]]),
        (1, 0): ([0, 1, 2, 5, 4, 3], [1, 0, 3, 4, 5, 2], [[0, 4], [1, 5]]),
        (1, 1): ([0, 1, 2, 3, 5, 4], [1, 0, 4, 5, 2, 3], [[0, 4], [1, 6]]),
    },
    "TEA": {
        (1, 1): ([0, 1, 3, 2], [0, 2, 1, 3], [[6, 2], [0, 1]]),
    },
    "TEB": {
        (0, 0): ([2, 6, 0, 3, 1, 4, 5, 7], [3, 1, 2, 0, 4, 5, 7, 6], [[13, 0], [5, 1]]),
        (0, 1): ([2, 7, 0, 3, 5, 4, 1, 6], [3, 1, 2, 0, 4, 6, 7, 5], [[8, 0], [5, 1]]),
        (1, 0): ([0, 7, 3, 5, 2, 4, 1, 6], [1, 0, 2, 5, 4, 7, 3, 6], [[0, 4], [6, 1]]),
        (1, 1): ([0, 7, 3, 5, 2, 4, 1, 6], [1, 0, 2, 5, 4, 6, 3, 7], [[0, 4], [6, 1]]),
    },
    "TAA": {
        (0, 0): ([0, 1], [0, 1], [[0, 1], [2, 3]]),
    },
    "TAB": {
        (0, 0): ([0, 1, 2, 4, 5, 3], [0, 2, 3, 5, 1, 4], [[0, 1], [7, 2]]),
        (0, 1): ([0, 1, 2, 4, 5, 3], [0, 2, 3, 5, 4, 1], [[0, 1], [7, 2]]),
        (1, 0): ([0, 2, 1, 4, 5, 3], [0, 1, 3, 5, 4, 2], [[0, 2], [7, 1]]),
        (1, 1): ([0, 1, 2, 4, 3, 5], [0, 2, 3, 4, 1, 5], [[0, 1], [11, 2]]),
    },
    "TBB": {
        (0, 0): ([3, 8, 1, 5, 9, 2, 4, 6, 0, 7], [4, 9, 0, 7, 2, 1, 6, 5, 8, 3], [[2, 3], [9, 0]]),
        (0, 1): ([3, 8, 1, 5, 9, 2, 4, 6, 0, 7], [4, 9, 0, 7, 2, 1, 6, 3, 8, 5], [[2, 3], [9, 0]]),
        (1, 0): ([4, 5, 0, 3, 2, 7, 6, 9, 8, 1], [5, 9, 3, 0, 6, 2, 7, 4, 8, 1], [[3, 1], [16, 0]]),
        (1, 1): ([5, 1, 3, 8, 4, 9, 7, 6, 2, 0], [5, 1, 6, 2, 8, 7, 3, 0, 4, 9], [[3, 4], [17, 0]]),
    },
    "TEA_2_8": {
        (0, 0): ([0, 1, 2, 4, 5, 3], [0, 2, 5, 4, 1, 3], [[5, 2], [0, 1]]),
        (0, 1): ([0, 1, 2, 4, 5, 3], [0, 2, 5, 4, 3, 1], [[5, 2], [0, 1]]),
        (1, 0): ([0, 2, 1, 4, 5, 3], [0, 1, 5, 4, 3, 2], [[5, 1], [0, 2]]),
        (1, 1): ([0, 1, 2, 3, 5, 4], [0, 2, 3, 4, 1, 5], [[10, 2], [0, 1]]),
    },
    "TEA_6_4": {
        (0, 1): ([0, 1, 2, 4, 5, 3], [0, 2, 3, 4, 1, 5], [[2, 5], [0, 1]]),
        (1, 0): ([0, 1, 2, 4, 3, 5], [0, 2, 5, 1, 3, 4], [[2, 5], [0, 1]]),
        (1, 1): ([0, 1, 2, 3, 5, 4], [0, 2, 4, 5, 1, 3], [[2, 6], [0, 1]]),
    },
    "R2_2_2_6": {
        (0, 0): ([0, 2, 3, 1], [1, 0, 3, 2], [[0, 1]]),
        (0, 1): ([0, 2, 3, 1], [1, 0, 2, 3], [[0, 1]]),
        (1, 0): ([0, 1, 3, 2], [1, 2, 0, 3], [[6, 0]]),
    },
    "R2_2_6_6": {
        (0, 0): ([0, 1, 2, 4, 5, 3], [1, 2, 5, 0, 4, 3], [[0, 1]]),
        (0, 1): ([0, 1, 2, 3, 4, 5], [1, 2, 3, 4, 5, 0], [[0, 1]]),
        (1, 0): ([0, 1, 2, 3, 5, 4], [1, 4, 3, 5, 0, 2], [[0, 4]]),
        (1, 1): ([0, 1, 2, 3, 5, 4], [1, 2, 3, 4, 5, 0], [[0, 1]]),
    },
    "R1_7_1_11": {
        (0, 0): ([0, 1, 2, 4, 5, 3], [1, 2, 3, 5, 4, 0], [[7, 0]]),
        (0, 1): ([0, 1, 2, 4, 5, 3], [1, 2, 3, 5, 0, 4], [[7, 0]]),
        (1, 0): ([0, 1, 2, 4, 3, 5], [1, 2, 3, 4, 0, 5], [[11, 0]]),
        (1, 1): ([0, 2, 1, 4, 5, 3], [0, 2, 3, 1, 5, 4], [[0, 1]]),
    },
}

# Starting cycle lengths per seed, slot by slot.
STARTS = {
    "R2_2": [2, 2], "R4_4": [4, 4], "R1_7": [1, 7], "R7_9": [7, 9],
    "TEE": [2, 4, 2, 4], "TEA": [2, 4, 1, 1], "TEB": [2, 4, 1, 9],
    "TAA": [1, 1, 1, 1], "TAB": [1, 1, 1, 9], "TBB": [1, 9, 1, 9],
    "TEA_2_8": [2, 8, 1, 1], "TEA_6_4": [6, 4, 1, 1],
    "R2_2_2_6": [2, 6], "R2_2_6_6": [6, 6], "R1_7_1_11": [1, 11],
}

# Larger seeds that supply parities the smallest seed of a family lacks.
ALTERNATES = {
    "TEA": ["TEA", "TEA_2_8", "TEA_6_4"],
    "R2_2": ["R2_2", "R2_2_2_6", "R2_2_6_6"],
    "R1_7": ["R1_7", "R1_7_1_11"],
}
