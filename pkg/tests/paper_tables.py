"""Reference tables: admissible patterns, weight distributions and
z-solutions for the small cases, keyed by their published labels.  Values are
frozen; tests map labels to generated patterns by canonical matrix."""

from __future__ import annotations

# q=3, x=5: labels 1-2 are class lines, 3-4 are not
Q3_X5 = {
    1: (
        (0, 0, 0, 1),
        (2, 2, 2, 3),
        (2, 2, 2, 3),
        (2, 2, 2, 3),
    ),
    2: (
        (0, 1, 2, 2),
        (0, 1, 2, 2),
        (1, 2, 3, 3),
        (1, 2, 3, 3),
    ),
    3: (
        (0, 0, 0, 2),
        (1, 1, 1, 3),
        (1, 1, 1, 3),
        (1, 1, 1, 3),
    ),
    4: (
        (0, 0, 1, 1),
        (0, 0, 1, 1),
        (1, 1, 2, 2),
        (2, 2, 3, 3),
    ),
}

Q3_X5_IN = (1, 2)
Q3_X5_Z = {1: 20, 2: 45, 3: 20, 4: 45}
Q3_X5_N = (10, 15, 15)
Q3_X5_M = (15, 15, 10)

# q=5, x=13, weights N={0,6,...,30}
X13_G1 = {
    1: (
        (0, 0, 0, 1, 2, 2),
        (2, 2, 2, 3, 4, 4),
        (2, 2, 2, 3, 4, 4),
        (2, 2, 2, 3, 4, 4),
        (3, 3, 3, 4, 5, 5),
        (3, 3, 3, 4, 5, 5),
    ),
    2: (
        (0, 0, 1, 1, 1, 2),
        (1, 1, 2, 2, 2, 3),
        (2, 2, 3, 3, 3, 4),
        (3, 3, 4, 4, 4, 5),
        (3, 3, 4, 4, 4, 5),
        (3, 3, 4, 4, 4, 5),
    ),
    3: (
        (0, 1, 1, 3, 3, 3),
        (1, 2, 2, 4, 4, 4),
        (1, 2, 2, 4, 4, 4),
        (1, 2, 2, 4, 4, 4),
        (1, 2, 2, 4, 4, 4),
        (2, 3, 3, 5, 5, 5),
    ),
    4: (
        (0, 1, 2, 2, 3, 3),
        (0, 1, 2, 2, 3, 3),
        (1, 2, 3, 3, 4, 4),
        (1, 2, 3, 3, 4, 4),
        (2, 3, 4, 4, 5, 5),
        (2, 3, 4, 4, 5, 5),
    ),
    5: (
        (0, 2, 2, 2, 2, 3),
        (0, 2, 2, 2, 2, 3),
        (0, 2, 2, 2, 2, 3),
        (2, 4, 4, 4, 4, 5),
        (2, 4, 4, 4, 4, 5),
        (2, 4, 4, 4, 4, 5),
    ),
    6: (
        (1, 1, 1, 2, 3, 3),
        (1, 1, 1, 2, 3, 3),
        (1, 1, 1, 2, 3, 3),
        (3, 3, 3, 4, 5, 5),
        (3, 3, 3, 4, 5, 5),
        (3, 3, 3, 4, 5, 5),
    ),
    7: (
        (1, 1, 3, 4, 4, 4),
        (1, 1, 3, 4, 4, 4),
        (1, 1, 3, 4, 4, 4),
        (1, 1, 3, 4, 4, 4),
        (1, 1, 3, 4, 4, 4),
        (1, 1, 3, 4, 4, 4),
    ),
    8: (
        (1, 2, 2, 3, 4, 5),
        (1, 2, 2, 3, 4, 5),
        (1, 2, 2, 3, 4, 5),
        (1, 2, 2, 3, 4, 5),
        (1, 2, 2, 3, 4, 5),
        (1, 2, 2, 3, 4, 5),
    ),
    9: (
        (0, 0, 0, 0, 0, 0),
        (1, 1, 1, 1, 1, 1),
        (2, 2, 2, 2, 2, 2),
        (3, 3, 3, 3, 3, 3),
        (3, 3, 3, 3, 3, 3),
        (4, 4, 4, 4, 4, 4),
    ),
    10: (
        (0, 0, 0, 1, 2, 3),
        (1, 1, 1, 2, 3, 4),
        (1, 1, 1, 2, 3, 4),
        (1, 1, 1, 2, 3, 4),
        (2, 2, 2, 3, 4, 5),
        (2, 2, 2, 3, 4, 5),
    ),
    11: (
        (0, 0, 0, 2, 2, 2),
        (0, 0, 0, 2, 2, 2),
        (1, 1, 1, 3, 3, 3),
        (2, 2, 2, 4, 4, 4),
        (2, 2, 2, 4, 4, 4),
        (2, 2, 2, 4, 4, 4),
    ),
    12: (
        (0, 0, 0, 2, 2, 2),
        (1, 1, 1, 3, 3, 3),
        (1, 1, 1, 3, 3, 3),
        (1, 1, 1, 3, 3, 3),
        (1, 1, 1, 3, 3, 3),
        (3, 3, 3, 5, 5, 5),
    ),
    13: (
        (0, 0, 1, 1, 1, 3),
        (0, 0, 1, 1, 1, 3),
        (1, 1, 2, 2, 2, 4),
        (2, 2, 3, 3, 3, 5),
        (2, 2, 3, 3, 3, 5),
        (2, 2, 3, 3, 3, 5),
    ),
    14: (
        (0, 0, 1, 1, 2, 2),
        (0, 0, 1, 1, 2, 2),
        (1, 1, 2, 2, 3, 3),
        (1, 1, 2, 2, 3, 3),
        (2, 2, 3, 3, 4, 4),
        (3, 3, 4, 4, 5, 5),
    ),
    15: (
        (0, 1, 1, 1, 1, 2),
        (0, 1, 1, 1, 1, 2),
        (0, 1, 1, 1, 1, 2),
        (2, 3, 3, 3, 3, 4),
        (2, 3, 3, 3, 3, 4),
        (3, 4, 4, 4, 4, 5),
    ),
    16: (
        (1, 1, 1, 1, 1, 1),
        (1, 1, 1, 1, 1, 1),
        (1, 1, 1, 1, 1, 1),
        (2, 2, 2, 2, 2, 2),
        (4, 4, 4, 4, 4, 4),
        (4, 4, 4, 4, 4, 4),
    ),
}

X13_G1_IN = tuple(range(1, 9))
X13_G1_DISTRIBUTIONS = (
    ((0, 37, 19, 72, 28, 0), (0, 28, 72, 19, 37, 0)),
    ((0, 33, 31, 60, 32, 0), (0, 32, 60, 31, 33, 0)),
    ((1, 31, 31, 62, 31, 0), (0, 31, 62, 31, 31, 1)),
)
X13_G1_Z = (
    (198, 24, 111, 18, 1, 18, 33, 0, 0, 24, 18, 1, 198, 18, 111, 33),
    (112, 86, 85, 96, 1, 2, 21, 0, 0, 86, 2, 1, 112, 96, 85, 21),
    (93, 93, 93, 93, 0, 0, 0, 31, 31, 93, 0, 0, 93, 93, 93, 0),
)

# q=5, x=12, weights N={0,6,...,30}
X12 = {
    1: (
        (0, 0, 0, 1, 2, 2),
        (1, 1, 1, 2, 3, 3),
        (2, 2, 2, 3, 4, 4),
        (2, 2, 2, 3, 4, 4),
        (3, 3, 3, 4, 5, 5),
        (3, 3, 3, 4, 5, 5),
    ),
    2: (
        (0, 0, 1, 1, 1, 2),
        (1, 1, 2, 2, 2, 3),
        (1, 1, 2, 2, 2, 3),
        (3, 3, 4, 4, 4, 5),
        (3, 3, 4, 4, 4, 5),
        (3, 3, 4, 4, 4, 5),
    ),
    3: (
        (0, 1, 1, 3, 3, 3),
        (0, 1, 1, 3, 3, 3),
        (1, 2, 2, 4, 4, 4),
        (1, 2, 2, 4, 4, 4),
        (1, 2, 2, 4, 4, 4),
        (2, 3, 3, 5, 5, 5),
    ),
    4: (
        (0, 1, 2, 2, 3, 3),
        (0, 1, 2, 2, 3, 3),
        (0, 1, 2, 2, 3, 3),
        (1, 2, 3, 3, 4, 4),
        (2, 3, 4, 4, 5, 5),
        (2, 3, 4, 4, 5, 5),
    ),
    5: (
        (0, 0, 0, 0, 0, 0),
        (1, 1, 1, 1, 1, 1),
        (2, 2, 2, 2, 2, 2),
        (2, 2, 2, 2, 2, 2),
        (3, 3, 3, 3, 3, 3),
        (4, 4, 4, 4, 4, 4),
    ),
    6: (
        (0, 0, 0, 1, 2, 3),
        (1, 1, 1, 2, 3, 4),
        (1, 1, 1, 2, 3, 4),
        (1, 1, 1, 2, 3, 4),
        (1, 1, 1, 2, 3, 4),
        (2, 2, 2, 3, 4, 5),
    ),
    7: (
        (0, 0, 1, 1, 1, 3),
        (0, 0, 1, 1, 1, 3),
        (1, 1, 2, 2, 2, 4),
        (1, 1, 2, 2, 2, 4),
        (2, 2, 3, 3, 3, 5),
        (2, 2, 3, 3, 3, 5),
    ),
    8: (
        (0, 0, 1, 1, 2, 2),
        (0, 0, 1, 1, 2, 2),
        (1, 1, 2, 2, 3, 3),
        (1, 1, 2, 2, 3, 3),
        (1, 1, 2, 2, 3, 3),
        (3, 3, 4, 4, 5, 5),
    ),
    9: (
        (0, 1, 1, 1, 1, 2),
        (0, 1, 1, 1, 1, 2),
        (0, 1, 1, 1, 1, 2),
        (1, 2, 2, 2, 2, 3),
        (2, 3, 3, 3, 3, 4),
        (3, 4, 4, 4, 4, 5),
    ),
    10: (
        (0, 1, 2, 2, 3, 4),
        (0, 1, 2, 2, 3, 4),
        (0, 1, 2, 2, 3, 4),
        (0, 1, 2, 2, 3, 4),
        (0, 1, 2, 2, 3, 4),
        (0, 1, 2, 2, 3, 4),
    ),
}

X12_IN = (1, 2, 3, 4)
X12_DISTRIBUTION = ((1, 31, 62, 31, 31, 0), (1, 31, 62, 31, 31, 0))
X12_Z = (93, 93, 93, 93, 31, 93, 93, 93, 93, 31)

# q=5, x=13, weights N={3,9,...,27}
X13_G2 = {
    1: (
        (0, 0, 0, 0, 0, 2),
        (3, 3, 3, 3, 3, 5),
        (3, 3, 3, 3, 3, 5),
        (3, 3, 3, 3, 3, 5),
        (3, 3, 3, 3, 3, 5),
        (3, 3, 3, 3, 3, 5),
    ),
    2: (
        (0, 1, 1, 2, 2, 2),
        (1, 2, 2, 3, 3, 3),
        (1, 2, 2, 3, 3, 3),
        (1, 2, 2, 3, 3, 3),
        (3, 4, 4, 5, 5, 5),
        (3, 4, 4, 5, 5, 5),
    ),
    3: (
        (0, 2, 2, 3, 3, 4),
        (0, 2, 2, 3, 3, 4),
        (0, 2, 2, 3, 3, 4),
        (1, 3, 3, 4, 4, 5),
        (1, 3, 3, 4, 4, 5),
        (1, 3, 3, 4, 4, 5),
    ),
    4: (
        (0, 2, 3, 3, 3, 3),
        (0, 2, 3, 3, 3, 3),
        (0, 2, 3, 3, 3, 3),
        (0, 2, 3, 3, 3, 3),
        (1, 3, 4, 4, 4, 4),
        (2, 4, 5, 5, 5, 5),
    ),
    5: (
        (1, 1, 1, 1, 2, 2),
        (1, 1, 1, 1, 2, 2),
        (2, 2, 2, 2, 3, 3),
        (3, 3, 3, 3, 4, 4),
        (4, 4, 4, 4, 5, 5),
        (4, 4, 4, 4, 5, 5),
    ),
    6: (
        (1, 1, 2, 2, 4, 4),
        (1, 1, 2, 2, 4, 4),
        (1, 1, 2, 2, 4, 4),
        (2, 2, 3, 3, 5, 5),
        (2, 2, 3, 3, 5, 5),
        (2, 2, 3, 3, 5, 5),
    ),
    7: (
        (0, 0, 0, 0, 0, 3),
        (2, 2, 2, 2, 2, 5),
        (2, 2, 2, 2, 2, 5),
        (2, 2, 2, 2, 2, 5),
        (2, 2, 2, 2, 2, 5),
        (2, 2, 2, 2, 2, 5),
    ),
    8: (
        (0, 0, 0, 1, 1, 1),
        (0, 0, 0, 1, 1, 1),
        (2, 2, 2, 3, 3, 3),
        (2, 2, 2, 3, 3, 3),
        (3, 3, 3, 4, 4, 4),
        (3, 3, 3, 4, 4, 4),
    ),
    9: (
        (0, 0, 0, 1, 1, 1),
        (1, 1, 1, 2, 2, 2),
        (1, 1, 1, 2, 2, 2),
        (2, 2, 2, 3, 3, 3),
        (2, 2, 2, 3, 3, 3),
        (4, 4, 4, 5, 5, 5),
    ),
    10: (
        (0, 0, 1, 2, 3, 3),
        (0, 0, 1, 2, 3, 3),
        (1, 1, 2, 3, 4, 4),
        (1, 1, 2, 3, 4, 4),
        (1, 1, 2, 3, 4, 4),
        (1, 1, 2, 3, 4, 4),
    ),
    11: (
        (0, 0, 2, 2, 2, 3),
        (0, 0, 2, 2, 2, 3),
        (0, 0, 2, 2, 2, 3),
        (1, 1, 3, 3, 3, 4),
        (1, 1, 3, 3, 3, 4),
        (2, 2, 4, 4, 4, 5),
    ),
    12: (
        (0, 1, 2, 2, 2, 2),
        (0, 1, 2, 2, 2, 2),
        (0, 1, 2, 2, 2, 2),
        (0, 1, 2, 2, 2, 2),
        (1, 2, 3, 3, 3, 3),
        (3, 4, 5, 5, 5, 5),
    ),
}

X13_G2_IN = tuple(range(1, 7))
X13_G2_DISTRIBUTIONS = (
    ((1, 50, 65, 15, 25), (25, 15, 65, 50, 1)),
    ((26, 0, 65, 65, 0), (0, 65, 65, 0, 26)),
)
X13_G2_Z = (
    (3, 150, 25, 75, 150, 0, 3, 0, 25, 150, 150, 75),
    (78, 0, 0, 0, 0, 325, 78, 325, 0, 0, 0, 0),
)
