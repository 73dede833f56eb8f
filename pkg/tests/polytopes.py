"""Vertex sets shared by the test modules."""

TDET_COLUMNS = [(0, 0, 0), (0, 2, 5), (0, 3, 1)]  # columns of [[0,0,0],[0,2,3],[0,5,1]]

TRIANGLE = [(0, 0, 0), (0, 2, 5), (0, 3, 1)]  # a polytrope
TRIANGLE_KLEENE = [[0, -3, -5], [0, 0, -3], [0, -2, 0]]
TRIANGLE_HREP = [
    "y2 - y1 <= 3",
    "y3 - y1 <= 5",
    "y1 - y2 <= 0",
    "y3 - y2 <= 3",
    "y1 - y3 <= 0",
    "y2 - y3 <= 2",
    "y1 = 0",
]

SIMPLEX4 = [(0, 0, 0, 0), (0, 1, 3, 1), (0, 1, 2, 5), (0, 2, 5, 10)]
SIMPLEX4_KLEENE = [[0, -1, -3, -10], [0, 0, -2, -8], [0, 1, 0, -5], [0, 4, -2, 0]]
SIMPLEX4_PSEUDO = [
    (0, 0, 1, 4), (0, 0, 2, 4), (0, 0, 1, 6), (0, 0, 2, 7),
    (0, 1, 2, 5), (0, 1, 2, 7), (0, 1, 3, 5), (0, 1, 3, 8),
]

FOUR_POINTS = [(0, -2, 5), (0, -2, 3), (0, 2, 2), (0, 1, 0)]  # non-convex, r = 4
FOUR_POINTS_ALT = [(0, -2, 3), (0, -2, 5), (0, 2, 2), (0, 1, 0)]  # same set, other order

UNIT_SQUARE = [(0, 0, 0), (0, 1, 0), (0, 0, 1)]
SKEW_SQUARE = [(0, -1, 1), (0, 0, 0), (0, 1, -1)]  # trunk is the unit square

FLAT4 = [(0, 0, 0, 0), (0, 2, 5, 0), (0, 3, 1, 0), (0, 2, 5, 5)]  # r = 10/3, lower bound 3

FIVE_POINTS = [(0, 0, 2, 0), (0, 0, 0, 0), (0, 4, -10, 0), (0, 3, -3, 5), (0, 4, 2, 10)]
