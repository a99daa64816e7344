from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ExactMatrix import DimensionError, DomainError, RatMatrix, charpoly, is_irreducible
from StochasticMatrix import (
    AmbiguityError,
    CertificateError,
    EigenCertificate,
    ProbVector,
    classify,
    ds_shift,
    involution_conjugate,
    is_rank_one_stochastic,
    left_perron,
    rank_one,
    same_size_conditions,
    segment_positivity,
    stochastic_certificate,
    stochasticize,
    uniform_rank_one,
    weighted_transpose_shift,
)
from strategies import EXAMPLE_P, near_uniform, positive_stochastic, prob_vectors, rat_matrices, nonnegative_rationals

P0 = RatMatrix([[3, 1], [1, 3]]) / 4
P1 = RatMatrix([[4, 0], [2, 2]]) / 4
NO_SAME_SIZE = RatMatrix([["9/10", "1/20", "1/20"], ["9/10", "1/20", "1/20"], ["1/10", "1/20", "17/20"]])


class TestProbVector:
    def test_str_and_uniform(self):
        assert str(ProbVector.uniform(3)) == "(1/3, 1/3, 1/3)"

    def test_from_weights(self):
        assert ProbVector.from_weights([2, 2, 1]).entries == (Fraction(2, 5), Fraction(2, 5), Fraction(1, 5))

    @pytest.mark.parametrize("entries", [("1/2", "1/3"), ("1", "0"), ()])
    def test_invalid(self, entries):
        with pytest.raises((DomainError, DimensionError)):
            ProbVector(entries)


class TestClassify:
    def test_example(self):
        assert classify(EXAMPLE_P).describe() == "positive stochastic; not doubly stochastic"

    def test_uniform(self):
        assert classify(uniform_rank_one(3)).describe() == "positive doubly stochastic primitive"

    def test_reducible(self):
        assert classify(P1).describe() == "nonnegative stochastic; not doubly stochastic; reducible"

    def test_not_stochastic(self):
        profile = classify(RatMatrix([[1, 2]]))
        assert not profile.square
        assert profile.irreducible is None
        assert profile.describe() == "positive matrix; not stochastic"


class TestLeftPerron:
    def test_example(self):
        assert left_perron(EXAMPLE_P).entries == (Fraction(2, 5), Fraction(2, 5), Fraction(1, 5))

    def test_doubly_stochastic(self):
        assert left_perron(uniform_rank_one(4)) == ProbVector.uniform(4)

    def test_irreducible_not_positive(self):
        assert left_perron(RatMatrix([[0, 1], [1, 0]])) == ProbVector.uniform(2)

    def test_reducible(self):
        with pytest.raises(AmbiguityError):
            left_perron(P1)

    def test_not_stochastic(self):
        with pytest.raises(DomainError):
            left_perron(RatMatrix([[1, 1], [0, 1]]))

    @given(positive_stochastic())
    @settings(max_examples=100, deadline=None)
    def test_fixed_point(self, P):
        l = left_perron(P)
        assert l.as_row() @ P == l.as_row()


class TestInvolution:
    def test_rank_one(self):
        assert rank_one(ProbVector.from_weights([2, 2, 1])) == RatMatrix([["2/5", "2/5", "1/5"]] * 3)

    def test_two_by_two_shift(self):
        P = RatMatrix([["7/10", "3/10"], ["1/2", "1/2"]])
        expected = RatMatrix([["3/5", "2/5"], ["2/5", "3/5"]])
        shifted = ds_shift(P)
        assert shifted.matrix == expected
        assert shifted.positive
        X, Q = involution_conjugate(P, ProbVector.uniform(2))
        assert Q == expected
        assert X @ P @ X == Q

    def test_uniform_fixed(self):
        assert ds_shift(uniform_rank_one(3)).matrix == uniform_rank_one(3)

    def test_length_mismatch(self):
        with pytest.raises(DimensionError):
            involution_conjugate(EXAMPLE_P, ProbVector.uniform(2))

    def test_requires_positive(self):
        with pytest.raises(DomainError):
            ds_shift(RatMatrix([[0, 1], [1, 0]]))

    @given(positive_stochastic().flatmap(lambda P: prob_vectors(P.rows).map(lambda v: (P, v))))
    @settings(max_examples=500, deadline=None)
    def test_rank_one_identities(self, pair):
        P, v = pair
        J_l = rank_one(left_perron(P))
        J_v = rank_one(v)
        assert J_l @ P == J_l
        assert P @ J_l == J_l
        assert P @ J_v == J_v
        assert J_v @ J_v == J_v
        assert J_v @ J_l == J_l

    @given(positive_stochastic().flatmap(lambda P: prob_vectors(P.rows).map(lambda v: (P, v))))
    @settings(max_examples=500, deadline=None)
    def test_conjugation(self, pair):
        P, v = pair
        X, Q = involution_conjugate(P, v)
        n = P.rows
        identity = RatMatrix.identity(n)
        assert X @ X == identity
        assert X @ P @ X == Q
        assert Q == P + rank_one(v) @ (identity - P)
        assert v.as_row() @ Q == v.as_row()
        assert Q.row_sums() == (1,) * n
        assert charpoly(Q) == charpoly(P)

    @given(positive_stochastic())
    @settings(max_examples=100, deadline=None)
    def test_shift_is_doubly_stochastic(self, P):
        Q = ds_shift(P).matrix
        assert Q.row_sums() == (1,) * P.rows
        assert Q.col_sums() == (1,) * P.rows


class TestStochasticize:
    def test_positive_eigenvector(self):
        A = RatMatrix([[1, 2], [2, 1]])
        S = stochasticize(A, EigenCertificate(Fraction(3), (Fraction(1), Fraction(1))))
        assert S == A / 3

    def test_invalid_certificate(self):
        with pytest.raises(CertificateError):
            stochasticize(RatMatrix([[1, 2], [2, 1]]), EigenCertificate(Fraction(2), (Fraction(1), Fraction(1))))

    def test_reducible(self):
        with pytest.raises(DomainError):
            stochasticize(RatMatrix([[1, 0], [1, 1]]), EigenCertificate(Fraction(1), (Fraction(1), Fraction(1))))

    @given(positive_stochastic())
    @settings(max_examples=50, deadline=None)
    def test_stochastic_fixed(self, P):
        assert stochasticize(P, stochastic_certificate(P)) == P


class TestSameSize:
    def test_uniform_conditions(self):
        report = same_size_conditions(uniform_rank_one(3))
        assert all(holds for _, holds in report.conditions())
        assert report.failures == {}

    def test_example_conditions(self):
        report = same_size_conditions(EXAMPLE_P)
        assert report.remark_col_condition
        assert report.ds_shift_positive
        assert not report.cor_global_spread
        assert report.failures['cor_global_spread'] == "max - min = 3/5 >= 1/3"
        assert not report.cor_min_entry
        assert not report.johnson_min_entry
        assert report.same_size_route_available

    def test_failing_column_named(self):
        report = same_size_conditions(NO_SAME_SIZE)
        assert not report.remark_col_condition
        assert report.failures['remark_col_condition'] == "column 1: sum 19/10 >= 1 + 3*1/10 = 13/10"
        assert not ds_shift(NO_SAME_SIZE).positive
        assert left_perron(NO_SAME_SIZE).entries == (Fraction(7, 10), Fraction(1, 20), Fraction(1, 4))

    @given(positive_stochastic())
    @settings(max_examples=500, deadline=None)
    def test_condition_hierarchy(self, P):
        report = same_size_conditions(P)
        assert report.remark_col_condition == report.ds_shift_positive
        if report.cor_min_entry:
            assert report.cor_global_spread
        if report.cor_global_spread or report.cor_spread_per_column:
            assert report.remark_col_condition
        if report.johnson_min_entry:
            assert report.ds_shift_positive

    @given(st.one_of(positive_stochastic(), near_uniform()))
    @settings(max_examples=500, deadline=None)
    def test_sufficient_conditions_give_positive_shift(self, P):
        report = same_size_conditions(P)
        if report.cor_spread_per_column or report.cor_global_spread or report.cor_min_entry:
            assert ds_shift(P).positive

    @given(positive_stochastic(min_size=2, max_size=2))
    @settings(max_examples=500, deadline=None)
    def test_every_positive_two_by_two_has_route(self, P):
        shifted = ds_shift(P)
        assert shifted.positive
        assert shifted.matrix.row_sums() == (1, 1)
        assert shifted.matrix.col_sums() == (1, 1)
        assert same_size_conditions(P).remark_col_condition

    @given(near_uniform())
    @settings(max_examples=50, deadline=None)
    def test_near_uniform_has_route(self, P):
        assert same_size_conditions(P).same_size_route_available

    def test_segment(self):
        assert segment_positivity(P0, ds_shift(P0).matrix)
        assert not segment_positivity(P0, RatMatrix.identity(2))
        with pytest.raises(DimensionError):
            segment_positivity(P0, uniform_rank_one(3))


class TestWeightedTranspose:
    @given(positive_stochastic())
    @settings(max_examples=100, deadline=None)
    def test_witness(self, P):
        shifted = weighted_transpose_shift(P)
        W, Q = shifted.witness, shifted.matrix
        assert W @ P == Q @ W
        assert W.rank() == P.rows
        assert Q.row_sums() == (1,) * P.rows
        assert Q.col_sums() == (1,) * P.rows
        assert shifted.positive == Q.is_positive()
        assert same_size_conditions(P).weighted_transpose == shifted.positive


class TestRankOne:
    def test_detects(self):
        assert is_rank_one_stochastic(rank_one(ProbVector.from_weights([1, 2, 3])))
        assert not is_rank_one_stochastic(EXAMPLE_P)

    @given(prob_vectors(3))
    @settings(max_examples=30, deadline=None)
    def test_shift_gives_uniform(self, v):
        assert ds_shift(rank_one(v)).matrix == uniform_rank_one(3)


@given(rat_matrices(max_size=4, elements=nonnegative_rationals))
@settings(max_examples=100, deadline=None)
def test_profile_consistent(A):
    profile = classify(A)
    assert profile.irreducible == is_irreducible(A)
    if profile.doubly_stochastic:
        assert profile.stochastic
    if profile.positive:
        assert profile.primitive
