"""Hand-copied reference data shared by several test modules."""

# Positive roots of E6 as printed in the reference listing (Bourbaki labels).
E6_LISTED = [
    [1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0], [0, 0, 0, 1, 0, 0],
    [0, 0, 0, 0, 1, 0], [0, 0, 0, 0, 0, 1], [1, 0, 1, 0, 0, 0], [0, 1, 0, 1, 0, 0],
    [0, 0, 1, 1, 0, 0], [0, 0, 0, 1, 1, 0], [0, 0, 0, 0, 1, 1], [1, 0, 1, 1, 0, 0],
    [0, 1, 1, 1, 0, 0], [0, 1, 0, 1, 1, 0], [0, 0, 1, 1, 1, 0], [0, 0, 0, 1, 1, 1],
    [1, 1, 1, 1, 0, 0], [1, 0, 1, 1, 1, 0], [0, 1, 1, 1, 1, 0], [0, 1, 0, 1, 1, 1],
    [0, 0, 1, 1, 1, 1], [1, 1, 1, 1, 1, 0], [0, 1, 1, 2, 1, 0], [1, 0, 1, 1, 1, 1],
    [0, 1, 1, 1, 1, 1], [1, 1, 1, 2, 1, 0], [1, 1, 1, 1, 1, 1], [0, 1, 1, 2, 1, 1],
    [1, 1, 2, 2, 1, 0], [1, 1, 1, 2, 1, 1], [0, 1, 1, 2, 2, 1], [1, 1, 2, 2, 1, 1],
    [1, 1, 1, 2, 2, 1], [1, 1, 2, 2, 2, 1], [1, 1, 2, 3, 2, 1], [1, 2, 2, 3, 2, 1],
]

