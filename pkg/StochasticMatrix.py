# Stochastic matrices: classification, Perron vectors, the J_v calculus and same-size shifts
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from ExactMatrix import (
    DimensionError,
    DomainError,
    MatrixError,
    RatMatrix,
    Scalar,
    SingularError,
    is_irreducible,
    is_primitive,
    solve,
    to_rat,
)

logger = logging.getLogger('stochastic_matrix')


class AmbiguityError(MatrixError):
    """A reducible stochastic matrix has no unique left Perron vector."""


class CertificateError(MatrixError):
    """An eigen certificate does not validate against its matrix."""


@dataclass(frozen=True)
class ProbVector:
    """Positive rational row vector summing to 1."""
    entries: Tuple[Fraction, ...]

    def __post_init__(self):
        values = tuple(to_rat(x) for x in self.entries)
        object.__setattr__(self, 'entries', values)
        if not values:
            raise DimensionError("A probability vector needs at least one entry")
        if any(x <= 0 for x in values):
            raise DomainError(f"Probability vector entries must be positive: {self}")
        if sum(values) != 1:
            raise DomainError(f"Probability vector entries must sum to 1, got {sum(values)}")

    @classmethod
    def uniform(cls, n: int) -> 'ProbVector':
        return cls(tuple(Fraction(1, n) for _ in range(n)))

    @classmethod
    def from_weights(cls, weights: Sequence[Scalar]) -> 'ProbVector':
        """Normalizes positive weights to sum 1."""
        values = [to_rat(w) for w in weights]
        total = sum(values)
        if total <= 0:
            raise DomainError("Weights must have a positive total")
        return cls(tuple(w / total for w in values))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i: int) -> Fraction:
        return self.entries[i]

    def as_row(self) -> RatMatrix:
        return RatMatrix([list(self.entries)])

    def __str__(self) -> str:
        return "(" + ", ".join(str(x) for x in self.entries) + ")"


@dataclass
class StochasticProfile:
    """Exact classification of a matrix."""
    square: bool
    nonnegative: bool
    positive: bool
    stochastic: bool
    doubly_stochastic: bool
    irreducible: Optional[bool]
    primitive: Optional[bool]
    row_sums: Tuple[Fraction, ...]
    col_sums: Tuple[Fraction, ...]

    def describe(self) -> str:
        """One-line summary, e.g. 'positive doubly stochastic primitive'."""
        if self.positive:
            sign = "positive"
        elif self.nonnegative:
            sign = "nonnegative"
        else:
            sign = "signed"
        if self.doubly_stochastic:
            if self.primitive:
                return f"{sign} doubly stochastic primitive"
            return f"{sign} doubly stochastic " + ("irreducible" if self.irreducible else "reducible")
        if self.stochastic:
            summary = f"{sign} stochastic; not doubly stochastic"
            if not self.irreducible:
                summary += "; reducible"
            elif not self.primitive:
                summary += "; irreducible, not primitive"
            return summary
        return f"{sign} matrix; not stochastic"


@dataclass(frozen=True)
class EigenCertificate:
    """Exact Perron eigenvalue with a positive right eigenvector."""
    eigenvalue: Fraction
    right_vector: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, 'eigenvalue', to_rat(self.eigenvalue))
        object.__setattr__(self, 'right_vector', tuple(to_rat(x) for x in self.right_vector))

    def validate(self, A: RatMatrix):
        """Raises CertificateError unless A v = lambda v with v > 0 and lambda > 0."""
        if len(self.right_vector) != A.cols or not A.is_square:
            raise CertificateError(f"Certificate of length {len(self.right_vector)} does not fit a {A.rows}x{A.cols} matrix")
        if self.eigenvalue <= 0:
            raise CertificateError(f"Perron eigenvalue must be positive, got {self.eigenvalue}")
        if any(x <= 0 for x in self.right_vector):
            raise CertificateError("Right eigenvector must be positive")
        image = A @ RatMatrix.column_vector(self.right_vector)
        for i, (lhs, v) in enumerate(zip(image.column(0), self.right_vector)):
            if lhs != self.eigenvalue * v:
                raise CertificateError(f"(A v)_{i + 1} = {lhs} differs from lambda v_{i + 1} = {self.eigenvalue * v}")


@dataclass
class ConditionReport:
    """Sufficient conditions for the same-size doubly stochastic route."""
    remark_col_condition: bool
    cor_spread_per_column: bool
    cor_global_spread: bool
    cor_min_entry: bool
    weighted_transpose: bool
    johnson_min_entry: bool
    ds_shift_positive: bool
    failures: Dict[str, str] = field(default_factory=dict)

    @property
    def same_size_route_available(self) -> bool:
        return self.remark_col_condition or self.weighted_transpose

    def conditions(self) -> List[Tuple[str, bool]]:
        return [
            ('remark_col_condition', self.remark_col_condition),
            ('cor_spread_per_column', self.cor_spread_per_column),
            ('cor_global_spread', self.cor_global_spread),
            ('cor_min_entry', self.cor_min_entry),
            ('weighted_transpose', self.weighted_transpose),
            ('johnson_min_entry', self.johnson_min_entry),
            ('ds_shift_positive', self.ds_shift_positive),
        ]


class Conjugation(NamedTuple):
    X: RatMatrix
    Q: RatMatrix


class DoublyStochasticShift(NamedTuple):
    matrix: RatMatrix
    positive: bool


class TransposedShift(NamedTuple):
    matrix: RatMatrix
    witness: RatMatrix
    positive: bool


def classify(A: RatMatrix) -> StochasticProfile:
    """Computes every classification flag exactly."""
    nonnegative = A.is_nonnegative()
    row_sums = A.row_sums()
    col_sums = A.col_sums()
    stochastic = A.is_square and nonnegative and all(s == 1 for s in row_sums)
    irreducible = primitive = None
    if A.is_square and nonnegative:
        irreducible = is_irreducible(A)
        primitive = is_primitive(A)
    return StochasticProfile(
        square=A.is_square,
        nonnegative=nonnegative,
        positive=A.is_positive(),
        stochastic=stochastic,
        doubly_stochastic=stochastic and all(s == 1 for s in col_sums),
        irreducible=irreducible,
        primitive=primitive,
        row_sums=row_sums,
        col_sums=col_sums,
    )


def require_positive_stochastic(P: RatMatrix, op: str):
    profile = classify(P)
    if not (profile.positive and profile.stochastic):
        raise DomainError(f"{op} needs a positive stochastic matrix; input is {profile.describe()}")


def left_perron(P: RatMatrix) -> ProbVector:
    """The unique l with l P = l and entries summing to 1."""
    profile = classify(P)
    if not profile.stochastic:
        raise DomainError(f"Left Perron vector needs a stochastic matrix; input is {profile.describe()}")
    if not profile.irreducible:
        raise AmbiguityError("Stochastic matrix is reducible; its left Perron vector is not unique")
    n = P.rows
    # l (P - I) = 0 transposed, plus the normalization row
    system = (P - RatMatrix.identity(n)).T
    system = RatMatrix(system.tolist() + [[1] * n])
    try:
        solution = solve(system, [0] * n + [1])
    except SingularError as e:
        raise AmbiguityError(f"Left Perron system has no unique solution: {e}") from e
    return ProbVector(tuple(solution))


def rank_one(v: ProbVector) -> RatMatrix:
    """J_v: the square matrix whose every row is v."""
    return RatMatrix([list(v.entries)] * len(v))


def uniform_rank_one(n: int) -> RatMatrix:
    """J_n, all entries 1/n."""
    return RatMatrix.full(n, n, Fraction(1, n))


def involution_conjugate(P: RatMatrix, v: ProbVector) -> Conjugation:
    """X = I - J_l - J_v and Q = X P X^-1 = P + J_v (I - P)."""
    require_positive_stochastic(P, "involution_conjugate")
    if len(v) != P.rows:
        raise DimensionError(f"Vector of length {len(v)} does not match a {P.rows}x{P.rows} matrix")
    n = P.rows
    identity = RatMatrix.identity(n)
    J_l = rank_one(left_perron(P))
    J_v = rank_one(v)
    X = identity - J_l - J_v
    if X @ X != identity:
        raise MatrixError("I - J_l - J_v failed to be an involution")
    Q = P + J_v @ (identity - P)
    if X @ P @ X != Q:
        raise MatrixError("Conjugation by the involution does not reproduce P + J_v(I - P)")
    return Conjugation(X, Q)


def ds_shift(P: RatMatrix) -> DoublyStochasticShift:
    """Q = P + J_n (I - P) with its positivity verdict."""
    require_positive_stochastic(P, "ds_shift")
    n = P.rows
    Q = P + uniform_rank_one(n) @ (RatMatrix.identity(n) - P)
    return DoublyStochasticShift(Q, Q.is_positive())


def stochasticize(A: RatMatrix, cert: EigenCertificate) -> RatMatrix:
    """S(A) = (1/lambda) D^-1 A D with D = diag(right eigenvector)."""
    if not A.is_square:
        raise DimensionError(f"Stochasticization needs a square matrix, got {A.rows}x{A.cols}")
    if not A.is_nonnegative() or not is_irreducible(A):
        raise DomainError("Stochasticization needs an irreducible nonnegative matrix")
    cert.validate(A)
    v = cert.right_vector
    lam = cert.eigenvalue
    return RatMatrix([[A[i, j] * v[j] / (lam * v[i]) for j in range(A.cols)] for i in range(A.rows)])


def stochastic_certificate(P: RatMatrix) -> EigenCertificate:
    """The eigenvalue 1 with the all-ones right eigenvector."""
    return EigenCertificate(Fraction(1), tuple(Fraction(1) for _ in range(P.rows)))


def segment_positivity(P: RatMatrix, Q: RatMatrix) -> bool:
    """Whether (1 - t) P + t Q is positive for every t in [0, 1]."""
    if P.shape != Q.shape:
        raise DimensionError(f"Segment endpoints have shapes {P.shape} and {Q.shape}")
    # entries are affine in t, so the endpoints decide
    return P.is_positive() and Q.is_positive()


def weighted_transpose_shift(P: RatMatrix) -> TransposedShift:
    """Same-size route through the transpose: Q^T for Q = ds_shift(D^-1 P^T D), D = diag(l)."""
    require_positive_stochastic(P, "weighted_transpose_shift")
    l = left_perron(P)
    D = RatMatrix.diag(l.entries)
    transposed = stochasticize(P.T, EigenCertificate(Fraction(1), l.entries))
    Y, Q = involution_conjugate(transposed, ProbVector.uniform(P.rows))
    witness = Y.T @ D
    return TransposedShift(Q.T, witness, Q.is_positive())


def is_rank_one_stochastic(P: RatMatrix) -> bool:
    profile = classify(P)
    return profile.stochastic and all(P.row(i) == P.row(0) for i in range(P.rows))


def same_size_conditions(P: RatMatrix) -> ConditionReport:
    """Evaluates every sufficient condition, recording the binding instance of each failure."""
    require_positive_stochastic(P, "same_size_conditions")
    n = P.rows
    failures = {}
    col_sums = P.col_sums()
    columns = [P.column(j) for j in range(n)]

    remark = True
    for j, column in enumerate(columns):
        bound = 1 + n * min(column)
        if not col_sums[j] < bound:
            remark = False
            failures['remark_col_condition'] = (
                f"column {j + 1}: sum {col_sums[j]} >= 1 + {n}*{min(column)} = {bound}")
            break

    spread_per_column = True
    if n >= 2:
        limit = Fraction(1, n - 1)
        for j, column in enumerate(columns):
            spread = max(column) - min(column)
            if not spread < limit:
                spread_per_column = False
                failures['cor_spread_per_column'] = f"column {j + 1}: max - min = {spread} >= {limit}"
                break

    global_spread = P.max_entry() - P.min_entry()
    global_ok = global_spread < Fraction(1, n)
    if not global_ok:
        failures['cor_global_spread'] = f"max - min = {global_spread} >= 1/{n}"

    min_threshold = Fraction(1, n) - Fraction(1, n * n)
    min_ok = P.min_entry() > min_threshold
    if not min_ok:
        failures['cor_min_entry'] = f"min entry {P.min_entry()} <= 1/{n} - 1/{n * n} = {min_threshold}"

    johnson_threshold = Fraction(1, n + 1)
    johnson_ok = P.min_entry() > johnson_threshold
    if not johnson_ok:
        failures['johnson_min_entry'] = f"min entry {P.min_entry()} <= 1/{n + 1}"

    l = left_perron(P)
    weighted = True
    for i in range(n):
        lhs = sum((l[i] / l[k] * P[i, k] for k in range(n)), Fraction(0))
        for j in range(n):
            rhs = 1 + n * l[i] / l[j] * P[i, j]
            if not lhs < rhs:
                weighted = False
                failures['weighted_transpose'] = (
                    f"(i, j) = ({i + 1}, {j + 1}): sum_k (l_i/l_k) p_ik = {lhs} >= {rhs}")
                break
        if not weighted:
            break

    shifted = ds_shift(P)
    if not shifted.positive:
        failures['ds_shift_positive'] = f"P + J_n(I - P) has minimum entry {shifted.matrix.min_entry()}"
    if shifted.positive != remark:
        logger.warning("Column-sum condition and shift positivity disagree; check the kernel")

    return ConditionReport(
        remark_col_condition=remark,
        cor_spread_per_column=spread_per_column,
        cor_global_spread=global_ok,
        cor_min_entry=min_ok,
        weighted_transpose=weighted,
        johnson_min_entry=johnson_ok,
        ds_shift_positive=shifted.positive,
        failures=failures,
    )


if __name__ == "__main__":
    logging.basicConfig(level=logging.INFO)

    P = RatMatrix([["7/10", "1/5", "1/10"], ["1/5", "7/10", "1/10"], ["1/5", "1/5", "3/5"]])
    print(f"classification: {classify(P).describe()}")
    l = left_perron(P)
    print(f"left Perron vector: {l}")

    X, Q = involution_conjugate(P, ProbVector.uniform(3))
    print(f"involution X =\n{X}\nQ = X P X =\n{Q}")
    print(f"Q classification: {classify(Q).describe()}")

    report = same_size_conditions(P)
    for name, holds in report.conditions():
        print(f"  {name}: {holds}")
    print(f"same-size route available: {report.same_size_route_available}")
