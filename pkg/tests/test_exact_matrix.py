from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from ExactMatrix import (
    DimensionError,
    DomainError,
    RatMatrix,
    RatPoly,
    SingularError,
    charpoly,
    determinant,
    inverse,
    invariant_factors,
    is_irreducible,
    is_primitive,
    nonzero_charpoly,
    rank,
    row_reduce,
    similar_over_rationals,
    similarity_rank_profile,
    solve,
    to_rat,
)
from strategies import EXAMPLE_P, invertible_matrices, nonnegative_rationals, rat_matrices, rationals

t = RatPoly.t()
T = sympy.Symbol('t')


def _sympy_matrix(A: RatMatrix) -> sympy.Matrix:
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in A])


def _sympy_strings(M: sympy.Matrix):
    return [[str(x) for x in M.row(i)] for i in range(M.rows)]


def _cofactor_det(M: sympy.Matrix):
    if M.rows == 1:
        return M[0, 0]
    rest = list(range(1, M.rows))
    return sum((-1) ** j * M[0, j] * _cofactor_det(M.extract(rest, [k for k in range(M.cols) if k != j]))
               for j in range(M.cols))


def _cofactor_charpoly(A: RatMatrix) -> RatPoly:
    expr = _cofactor_det(T * sympy.eye(A.rows) - _sympy_matrix(A))
    coeffs = sympy.Poly(sympy.expand(expr), T).all_coeffs()
    return RatPoly([Fraction(int(c.p), int(c.q)) for c in reversed(coeffs)])


def _product(polys):
    result = RatPoly.one()
    for p in polys:
        result = result * p
    return result


@st.composite
def repeated_row_matrices(draw, min_size=8, max_size=10):
    """Square matrix whose rows are copies of at most three base rows."""
    n = draw(st.integers(min_size, max_size))
    base = draw(st.lists(st.lists(rationals, min_size=n, max_size=n), min_size=1, max_size=3))
    layout = draw(st.lists(st.integers(0, len(base) - 1), min_size=n, max_size=n))
    return RatMatrix([base[k] for k in layout])


@st.composite
def selection_matrices(draw, rows, cols):
    """0-1 matrix with exactly one 1 in every row."""
    ones = draw(st.lists(st.integers(0, cols - 1), min_size=rows, max_size=rows))
    return RatMatrix([[int(j == k) for j in range(cols)] for k in ones])


class TestScalars:
    def test_literals(self):
        assert to_rat("7/20") == Fraction(7, 20)
        assert to_rat(" -3 ") == Fraction(-3)
        assert to_rat(5) == Fraction(5)

    @pytest.mark.parametrize("value", [0.5, True, "1/0", "abc", None, "0.7", "1e3", "1/-2", "+3", "3/", "1/2/3"])
    def test_rejects_non_rationals(self, value):
        with pytest.raises(DomainError):
            to_rat(value)


class TestRatMatrix:
    def test_ragged_rows_rejected(self):
        with pytest.raises(DimensionError):
            RatMatrix([[1, 2], [3]])

    def test_empty_rejected(self):
        with pytest.raises(DimensionError):
            RatMatrix([])

    def test_grid_is_read_only(self):
        A = RatMatrix.identity(2)
        with pytest.raises(ValueError):
            A._num[0, 0] = 5

    def test_product_and_power(self):
        A = RatMatrix([[1, 1], [0, 1]])
        assert A @ A == RatMatrix([[1, 2], [0, 1]])
        assert A.power(5) == RatMatrix([[1, 5], [0, 1]])
        assert A.power(0) == RatMatrix.identity(2)

    def test_scalar_ops(self):
        A = RatMatrix([[1, 2], [3, 4]])
        assert (A / 2)[1, 0] == Fraction(3, 2)
        assert (A * "1/2") == A / 2
        with pytest.raises(TypeError):
            A * A

    def test_shape_mismatch(self):
        with pytest.raises(DimensionError):
            RatMatrix.identity(2) @ RatMatrix.identity(3)

    def test_sums_and_str(self):
        assert EXAMPLE_P.row_sums() == (1, 1, 1)
        assert EXAMPLE_P.col_sums() == (Fraction(11, 10), Fraction(11, 10), Fraction(4, 5))
        assert "7/10" in str(EXAMPLE_P)

    @given(rat_matrices(square=False), rat_matrices(square=False))
    @settings(max_examples=50, deadline=None)
    def test_matmul_agrees_with_sympy(self, A, B):
        if A.cols != B.rows:
            B = B.T if B.cols == A.cols else RatMatrix.identity(A.cols)
        expected = _sympy_matrix(A) * _sympy_matrix(B)
        assert (A @ B).to_strings() == [[str(x) for x in expected.row(i)] for i in range(expected.rows)]

    @given(st.data())
    @settings(max_examples=100, deadline=None)
    def test_selection_products_agree_with_sympy(self, data):
        B = data.draw(rat_matrices(min_size=2, max_size=5, square=False))
        E = data.draw(selection_matrices(data.draw(st.integers(1, 9)), B.rows))
        F = data.draw(selection_matrices(B.cols, data.draw(st.integers(1, 6))))
        assert E.is_selection() and F.is_selection()
        assert (E @ B).to_strings() == _sympy_strings(_sympy_matrix(E) * _sympy_matrix(B))
        assert (B @ F).to_strings() == _sympy_strings(_sympy_matrix(B) * _sympy_matrix(F))

    @given(repeated_row_matrices(), st.data())
    @settings(max_examples=100, deadline=None)
    def test_repeated_row_product_agrees_with_sympy(self, A, data):
        B = data.draw(rat_matrices(min_size=A.cols, max_size=A.cols, square=False))
        assert (A @ B).to_strings() == _sympy_strings(_sympy_matrix(A) * _sympy_matrix(B))
        assert (A @ A).to_strings() == _sympy_strings(_sympy_matrix(A) ** 2)


class TestRatPoly:
    def test_str(self):
        assert str(t ** 3 - t ** 2 * Fraction(3, 2) + t * Fraction(1, 2)) == "t^3 - 3/2*t^2 + 1/2*t"
        assert str(RatPoly()) == "0"

    def test_degree_and_leading(self):
        p = RatPoly([1, 0, 3, 0, 0])
        assert p.degree == 2
        assert p.leading == 3
        assert RatPoly().degree == -1

    @given(st.lists(rationals, min_size=1, max_size=5), st.lists(rationals, min_size=1, max_size=4))
    @settings(max_examples=100, deadline=None)
    def test_divmod(self, a, b):
        a, b = RatPoly(a), RatPoly(b)
        if b.is_zero:
            return
        q, r = divmod(a, b)
        assert q * b + r == a
        assert r.degree < b.degree

    def test_gcd(self):
        a = RatPoly.from_roots([1, 2, 3])
        b = RatPoly.from_roots([2, 3, 5]).scale(7)
        assert RatPoly.gcd(a, b) == RatPoly.from_roots([2, 3])

    def test_strip_t(self):
        assert (t ** 2 * (t - 1)).strip_t() == t - 1
        assert (t ** 2 * (t - 1)).valuation() == 2

    @given(rat_matrices(max_size=4))
    @settings(max_examples=50, deadline=None)
    def test_cayley_hamilton(self, A):
        assert charpoly(A)(A) == RatMatrix.zeros(A.rows, A.rows)


class TestCharpoly:
    def test_identity(self):
        assert charpoly(RatMatrix.identity(2)) == (t - 1) ** 2

    def test_all_thirds(self):
        assert charpoly(RatMatrix.full(3, 3, "1/3")) == t ** 2 * (t - 1)

    def test_example_matches_cofactor_expansion(self):
        assert charpoly(EXAMPLE_P) == _cofactor_charpoly(EXAMPLE_P)

    def test_non_square(self):
        with pytest.raises(DimensionError):
            charpoly(RatMatrix([[1, 2]]))

    @given(rat_matrices(max_size=4))
    @settings(max_examples=200, deadline=None)
    def test_matches_cofactor_expansion(self, A):
        assert charpoly(A) == _cofactor_charpoly(A)

    @given(rat_matrices(max_size=5))
    @settings(max_examples=100, deadline=None)
    def test_hessenberg_matches_leverrier(self, A):
        assert charpoly(A, method='hessenberg') == charpoly(A, method='leverrier')

    @given(repeated_row_matrices())
    @settings(max_examples=50, deadline=None)
    def test_repeated_rows_match_sympy(self, A):
        coeffs = _sympy_matrix(A).charpoly(T).all_coeffs()
        expected = RatPoly([Fraction(int(c.p), int(c.q)) for c in reversed(coeffs)])
        assert charpoly(A) == expected
        assert charpoly(A, method='leverrier') == expected

    @pytest.mark.parametrize("A, expected", [
        (RatMatrix.zeros(2, 2), RatPoly.one()),
        (RatMatrix.full(3, 3, "1/3"), t - 1),
        (RatMatrix.full(2, 2, "1/2"), t - 1),
    ])
    def test_nonzero_charpoly(self, A, expected):
        assert nonzero_charpoly(A) == expected


class TestElimination:
    @pytest.mark.parametrize("A, expected", [
        (RatMatrix.identity(3), 3),
        (RatMatrix.full(3, 3, "1/3"), 1),
        (RatMatrix([[0, 1], [0, 0]]), 1),
        (RatMatrix.zeros(2, 3), 0),
    ])
    def test_rank(self, A, expected):
        assert rank(A) == expected

    @given(rat_matrices(square=False))
    @settings(max_examples=100, deadline=None)
    def test_rank_of_transpose(self, A):
        assert rank(A) == rank(A.T)
        assert rank(A) == _sympy_matrix(A).rank()

    @given(rat_matrices(max_size=4))
    @settings(max_examples=100, deadline=None)
    def test_determinant_matches_sympy(self, A):
        expected = _sympy_matrix(A).det()
        assert determinant(A) == Fraction(int(expected.p), int(expected.q))

    @given(st.integers(1, 4).flatmap(invertible_matrices))
    @settings(max_examples=50, deadline=None)
    def test_inverse(self, X):
        assert X @ inverse(X) == RatMatrix.identity(X.rows)
        assert determinant(X) == 1

    def test_singular_inverse(self):
        with pytest.raises(SingularError):
            inverse(RatMatrix([[1, 2], [2, 4]]))

    def test_solve(self):
        A = RatMatrix([[2, 1], [1, 3], [1, 1]])
        assert solve(A, [3, 4, 2]) == [1, 1]
        with pytest.raises(SingularError):
            solve(A, [3, 4, 5])
        with pytest.raises(SingularError):
            solve(RatMatrix([[1, 1]]), [1])

    def test_row_reduce(self):
        reduced, pivots = row_reduce(RatMatrix([[0, 2, 4], [1, 1, 1]]))
        assert reduced == RatMatrix([[1, 0, -1], [0, 1, 2]])
        assert pivots == [0, 1]


class TestGraphProperties:
    @pytest.mark.parametrize("A, expected", [
        (RatMatrix([[4, 0], [2, 2]]) / 4, False),
        (RatMatrix([[3, 1], [1, 3]]) / 4, True),
        (RatMatrix.identity(2), False),
        (RatMatrix([[1]]), True),
        (RatMatrix([[0]]), False),
    ])
    def test_irreducible(self, A, expected):
        assert is_irreducible(A) is expected

    @pytest.mark.parametrize("A, expected", [
        (EXAMPLE_P, True),
        (RatMatrix([[0, 1], [1, 0]]), False),
        (RatMatrix([[0, 1], [1, 1]]), True),
        (RatMatrix([[0, 1, 0], [0, 0, 1], [1, 0, 0]]), False),
    ])
    def test_primitive(self, A, expected):
        assert is_primitive(A) is expected

    def test_negative_entry(self):
        with pytest.raises(DomainError):
            is_irreducible(RatMatrix([[1, -1], [0, 1]]))
        with pytest.raises(DomainError):
            is_primitive(RatMatrix([[1, -1], [0, 1]]))

    @given(rat_matrices(max_size=5, elements=st.sampled_from([Fraction(0), Fraction(0), Fraction(1)])))
    @settings(max_examples=200, deadline=None)
    def test_primitive_implies_irreducible(self, A):
        if is_primitive(A):
            assert is_irreducible(A)

    @given(rat_matrices(max_size=4, elements=nonnegative_rationals))
    @settings(max_examples=100, deadline=None)
    def test_primitive_matches_powers(self, A):
        n = A.rows
        expected = any(A.power(r).is_positive() for r in range(1, n * n - 2 * n + 3))
        assert is_primitive(A) is expected


class TestSimilarity:
    @pytest.mark.parametrize("A, expected", [
        (RatMatrix.identity(2), [t - 1, t - 1]),
        (RatMatrix([[0, 1], [0, 0]]), [RatPoly.one(), t ** 2]),
        (RatMatrix.zeros(2, 2), [t, t]),
    ])
    def test_invariant_factors(self, A, expected):
        assert invariant_factors(A) == expected

    @given(rat_matrices(max_size=4))
    @settings(max_examples=100, deadline=None)
    def test_invariant_factor_product_is_charpoly(self, A):
        factors = invariant_factors(A)
        assert _product(factors) == charpoly(A)
        for a, b in zip(factors, factors[1:]):
            assert a.divides(b)

    def test_pt_family_member(self):
        P0 = RatMatrix([[3, 1], [1, 3]]) / 4
        Phalf = RatMatrix([["7/2", "1/2"], ["3/2", "5/2"]]) / 4
        assert similar_over_rationals(P0, Phalf)

    def test_same_charpoly_different_rank(self):
        assert not similar_over_rationals(RatMatrix([[0, 1], [0, 0]]), RatMatrix.zeros(2, 2))

    def test_size_mismatch(self):
        with pytest.raises(DimensionError):
            similar_over_rationals(RatMatrix.identity(2), RatMatrix.identity(3))

    @given(st.integers(1, 3).flatmap(lambda n: st.tuples(rat_matrices(n, n), invertible_matrices(n))))
    @settings(max_examples=60, deadline=None)
    def test_conjugation_invariance(self, pair):
        A, X = pair
        B = X @ A @ inverse(X)
        assert similar_over_rationals(A, B)
        assert similar_over_rationals(B, A)
        assert similar_over_rationals(A, A)

    def test_rank_profile(self):
        nilpotent = RatMatrix([[0, 1], [0, 0]])
        assert similarity_rank_profile(nilpotent, t, 2) == [1, 0]
        assert similarity_rank_profile(RatMatrix.zeros(2, 2), t, 2) == [0, 0]
        assert similarity_rank_profile(RatMatrix.identity(2), t - 1, 1) == [0]
