from fractions import Fraction

from hypothesis import strategies as st

from ExactMatrix import RatMatrix
from ShiftEquivalence import EsseStep
from StochasticMatrix import ProbVector

EXAMPLE_P = RatMatrix([["7/10", "1/5", "1/10"], ["1/5", "7/10", "1/10"], ["1/5", "1/5", "3/5"]])

rationals = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 9))
nonnegative_rationals = st.builds(Fraction, st.integers(0, 9), st.integers(1, 9))


@st.composite
def rat_matrices(draw, min_size=1, max_size=4, square=True, elements=rationals):
    rows = draw(st.integers(min_size, max_size))
    cols = rows if square else draw(st.integers(min_size, max_size))
    return RatMatrix(draw(st.lists(st.lists(elements, min_size=cols, max_size=cols),
                                   min_size=rows, max_size=rows)))


@st.composite
def invertible_matrices(draw, n):
    """Unit lower triangular times unit upper triangular, so always invertible."""
    lower = [[draw(st.integers(-3, 3)) if j < i else int(i == j) for j in range(n)] for i in range(n)]
    upper = [[draw(st.integers(-3, 3)) if j > i else int(i == j) for j in range(n)] for i in range(n)]
    return RatMatrix(lower) @ RatMatrix(upper)


@st.composite
def positive_stochastic(draw, min_size=2, max_size=4):
    n = draw(st.integers(min_size, max_size))
    rows = []
    for _ in range(n):
        weights = draw(st.lists(st.integers(1, 9), min_size=n, max_size=n))
        rows.append([Fraction(w, sum(weights)) for w in weights])
    return RatMatrix(rows)


@st.composite
def prob_vectors(draw, n):
    return ProbVector.from_weights(draw(st.lists(st.integers(1, 9), min_size=n, max_size=n)))


@st.composite
def reversible_walks(draw, min_size=2, max_size=4):
    """Random walk on a symmetric weighted graph; l is proportional to the degrees, so M stays small."""
    n = draw(st.integers(min_size, max_size))
    K = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            K[i][j] = K[j][i] = draw(st.integers(1, 2))
    return RatMatrix([[Fraction(K[i][j], sum(K[i])) for j in range(n)] for i in range(n)])


@st.composite
def near_uniform(draw, min_size=2, max_size=4):
    """(9/10) J_n + (1/10) R for a random positive stochastic R."""
    R = draw(positive_stochastic(min_size, max_size))
    n = R.rows
    return RatMatrix.full(n, n, Fraction(9, 10 * n)) + R * Fraction(1, 10)


@st.composite
def esse_steps(draw, max_size=3):
    """A = UV, B = VU for random nonnegative U (m x n) and V (n x m)."""
    m = draw(st.integers(1, max_size))
    n = draw(st.integers(1, max_size))
    U = RatMatrix(draw(st.lists(st.lists(nonnegative_rationals, min_size=n, max_size=n), min_size=m, max_size=m)))
    V = RatMatrix(draw(st.lists(st.lists(nonnegative_rationals, min_size=m, max_size=m), min_size=n, max_size=n)))
    return EsseStep(U @ V, V @ U, U, V)


@st.composite
def row_stochastic(draw, rows, cols):
    """Positive rows x cols matrix with every row summing to 1."""
    matrix = []
    for _ in range(rows):
        weights = draw(st.lists(st.integers(1, 9), min_size=cols, max_size=cols))
        matrix.append([Fraction(w, sum(weights)) for w in weights])
    return RatMatrix(matrix)


@st.composite
def scaled_factorizations(draw, max_size=4):
    """(R, S, alpha) with R (m x n) and S (n x m) row stochastic and alpha a positive rational, not 1."""
    m = draw(st.integers(1, max_size))
    n = draw(st.integers(1, max_size))
    alpha = draw(st.builds(Fraction, st.integers(1, 12), st.integers(1, 12)).filter(lambda a: a != 1))
    return draw(row_stochastic(m, n)), draw(row_stochastic(n, m)), alpha
