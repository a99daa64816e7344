# Strong shift equivalence certificates: steps, chains, verification and normalizations
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import reduce
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from ExactMatrix import (
    DimensionError,
    DomainError,
    MatrixError,
    RatMatrix,
    RatPoly,
    Scalar,
    charpoly,
    is_irreducible,
    to_rat,
)
from StochasticMatrix import CertificateError, EigenCertificate, stochasticize

logger = logging.getLogger('shift_equivalence')


class StructuralError(MatrixError):
    """Input does not have the structure a construction relies on."""


class ChainRejectedError(MatrixError):
    """A chain failed verification; the verdict is attached."""

    def __init__(self, verdict: 'Verdict'):
        self.verdict = verdict
        super().__init__("Chain rejected: " + "; ".join(v.message for v in verdict.violations[:5]))


class ViolationKind(Enum):
    DIMENSION = "dimension"
    NEGATIVE_ENTRY = "negative_entry"
    PRODUCT_MISMATCH = "product_mismatch"
    ENDPOINT_MISMATCH = "endpoint_mismatch"
    SPECTRUM_MISMATCH = "spectrum_mismatch"
    METADATA_MISMATCH = "metadata_mismatch"


@dataclass
class Violation:
    """One failed equality or sign condition, with its location."""
    kind: ViolationKind
    message: str
    step: Optional[int] = None
    matrix: Optional[str] = None
    row: Optional[int] = None
    col: Optional[int] = None

    def location(self) -> str:
        parts = []
        if self.step is not None:
            parts.append(f"step {self.step + 1}")
        if self.matrix is not None:
            parts.append(self.matrix)
        if self.row is not None and self.col is not None:
            parts.append(f"entry ({self.row + 1}, {self.col + 1})")
        return ", ".join(parts) if parts else "chain"


@dataclass
class Verdict:
    """Structured verification result."""
    violations: List[Violation] = field(default_factory=list)
    lag: Optional[int] = None
    size: Optional[int] = None
    spectrum: List[Optional[bool]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.passed

    def lines(self) -> List[str]:
        if self.passed:
            return ["pass"]
        return [f"FAIL [{v.kind.value}] at {v.location()}: {v.message}" for v in self.violations]


@dataclass(frozen=True)
class EsseStep:
    """Elementary strong shift equivalence A = UV, B = VU."""
    A: RatMatrix
    B: RatMatrix
    U: RatMatrix
    V: RatMatrix

    def transpose(self) -> 'EsseStep':
        return EsseStep(self.A.T, self.B.T, self.V.T, self.U.T)


@dataclass(frozen=True)
class SseChain:
    """Composable list of elementary steps; a bare start matrix when empty."""
    steps: Tuple[EsseStep, ...] = ()
    start: Optional[RatMatrix] = None

    def __post_init__(self):
        object.__setattr__(self, 'steps', tuple(self.steps))
        if self.start is None:
            if not self.steps:
                raise DimensionError("An empty chain needs a start matrix")
            object.__setattr__(self, 'start', self.steps[0].A)

    @classmethod
    def trivial(cls, matrix: RatMatrix) -> 'SseChain':
        return cls((), matrix)

    @property
    def lag(self) -> int:
        return len(self.steps)

    @property
    def matrices(self) -> List[RatMatrix]:
        return [self.start] + [step.B for step in self.steps]

    @property
    def size(self) -> int:
        return max(max(m.shape) for m in self.matrices)

    @property
    def source(self) -> RatMatrix:
        return self.start

    @property
    def target(self) -> RatMatrix:
        return self.steps[-1].B if self.steps else self.start

    def concat(self, other: 'SseChain') -> 'SseChain':
        if self.target != other.source:
            raise DimensionError("Chains do not share an endpoint")
        return SseChain(self.steps + other.steps, self.start)


@dataclass(frozen=True)
class SeCertificate:
    """Shift equivalence of lag l: A^l = UV, B^l = VU, AU = UB, VA = BV."""
    A: RatMatrix
    B: RatMatrix
    U: RatMatrix
    V: RatMatrix
    lag: int


class NormalizedEsse(NamedTuple):
    R: RatMatrix
    S: RatMatrix
    alpha: Fraction
    beta: Fraction


def _product_violations(expected: RatMatrix, actual: RatMatrix, name: str,
                        step: Optional[int]) -> List[Violation]:
    if expected == actual:
        return []
    return [Violation(ViolationKind.PRODUCT_MISMATCH,
                      f"{name}: expected {expected[i, j]}, product gives {actual[i, j]}",
                      step, name, i, j)
            for i, j in expected.differing_entries(actual)]


def _sign_violations(M: RatMatrix, name: str, step: Optional[int]) -> List[Violation]:
    return [Violation(ViolationKind.NEGATIVE_ENTRY, f"{name} has negative entry {x}", step, name, i, j)
            for i, j, x in M.negative_entries()]


def verify_esse(step: EsseStep, index: Optional[int] = None) -> Verdict:
    """Checks U, V >= 0, A = UV and B = VU, listing every violation."""
    A, B, U, V = step.A, step.B, step.U, step.V
    m, n = A.rows, B.rows
    verdict = Verdict(lag=1, size=max(A.rows, A.cols, B.rows, B.cols))
    shapes_ok = A.is_square and B.is_square and U.shape == (m, n) and V.shape == (n, m)
    if not shapes_ok:
        verdict.violations.append(Violation(
            ViolationKind.DIMENSION,
            f"shapes A{A.shape}, B{B.shape}, U{U.shape}, V{V.shape} do not form an elementary step",
            index))
        return verdict
    verdict.violations.extend(_sign_violations(U, "U", index))
    verdict.violations.extend(_sign_violations(V, "V", index))
    verdict.violations.extend(_product_violations(A, U @ V, "A = UV", index))
    verdict.violations.extend(_product_violations(B, V @ U, "B = VU", index))
    return verdict


def padded_charpoly_identity(A: RatMatrix, B: RatMatrix, cache: Optional[Dict[RatMatrix, RatPoly]] = None) -> bool:
    """t^n p_A(t) = t^m p_B(t) for A m x m and B n x n."""
    cache = {} if cache is None else cache
    for M in (A, B):
        if M not in cache:
            cache[M] = charpoly(M)
    return cache[A].shift(B.rows) == cache[B].shift(A.rows)


def verify_chain(chain: SseChain, workers: int = 1) -> Verdict:
    """Verifies every step, the shared endpoints and the padded charpoly identity per step."""
    indices = range(chain.lag)
    if workers > 1 and chain.lag > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            step_verdicts = list(pool.map(verify_esse, chain.steps, indices))
    else:
        step_verdicts = [verify_esse(step, i) for step, i in zip(chain.steps, indices)]

    verdict = Verdict(lag=chain.lag, size=chain.size)
    if chain.steps and chain.start != chain.steps[0].A:
        verdict.violations.append(Violation(
            ViolationKind.ENDPOINT_MISMATCH, "start matrix differs from A of the first step", 0, "A"))
    for i in range(chain.lag - 1):
        if chain.steps[i].B != chain.steps[i + 1].A:
            verdict.violations.append(Violation(
                ViolationKind.ENDPOINT_MISMATCH,
                f"B of step {i + 1} differs from A of step {i + 2}", i + 1, "A"))

    cache: Dict[RatMatrix, RatPoly] = {}
    for i, (step, step_verdict) in enumerate(zip(chain.steps, step_verdicts)):
        verdict.violations.extend(step_verdict.violations)
        if not step_verdict.passed:
            verdict.spectrum.append(None)
            continue
        holds = padded_charpoly_identity(step.A, step.B, cache)
        verdict.spectrum.append(holds)
        if not holds:
            verdict.violations.append(Violation(
                ViolationKind.SPECTRUM_MISMATCH,
                "t^n p_A(t) != t^m p_B(t) although the products check out", i))
        logger.debug("Step %d verified (%dx%d -> %dx%d)", i + 1, step.A.rows, step.A.rows, step.B.rows, step.B.rows)
    if not verdict.passed:
        logger.warning("Chain of lag %d failed with %d violations", chain.lag, len(verdict.violations))
    return verdict


def verify_se(cert: SeCertificate) -> Verdict:
    """Checks the four shift-equivalence equalities and the signs of U and V."""
    A, B, U, V = cert.A, cert.B, cert.U, cert.V
    verdict = Verdict(lag=cert.lag, size=max(A.rows, B.rows))
    if not (A.is_square and B.is_square and U.shape == (A.rows, B.rows) and V.shape == (B.rows, A.rows)):
        verdict.violations.append(Violation(ViolationKind.DIMENSION, "shapes do not form a shift equivalence"))
        return verdict
    verdict.violations.extend(_sign_violations(U, "U", None))
    verdict.violations.extend(_sign_violations(V, "V", None))
    verdict.violations.extend(_product_violations(A.power(cert.lag), U @ V, "A^lag = UV", None))
    verdict.violations.extend(_product_violations(B.power(cert.lag), V @ U, "B^lag = VU", None))
    verdict.violations.extend(_product_violations(A @ U, U @ B, "AU = UB", None))
    verdict.violations.extend(_product_violations(V @ A, B @ V, "VA = BV", None))
    return verdict


def compose_to_se(chain: SseChain) -> SeCertificate:
    """(U_1 ... U_l, V_l ... V_1) as a lag l shift equivalence."""
    verdict = verify_chain(chain)
    if not verdict.passed:
        raise ChainRejectedError(verdict)
    if chain.lag == 0:
        identity = RatMatrix.identity(chain.start.rows)
        cert = SeCertificate(chain.start, chain.start, identity, identity, 0)
    else:
        U = reduce(lambda x, y: x @ y, (step.U for step in chain.steps))
        V = reduce(lambda x, y: x @ y, (step.V for step in reversed(chain.steps)))
        cert = SeCertificate(chain.source, chain.target, U, V, chain.lag)
    se_verdict = verify_se(cert)
    if not se_verdict.passed:
        raise ChainRejectedError(se_verdict)
    return cert


def transpose_chain(chain: SseChain) -> SseChain:
    """Chain from A_0^T to A_l^T with every step (A, B, U, V) -> (A^T, B^T, V^T, U^T)."""
    verdict = verify_chain(chain)
    if not verdict.passed:
        raise ChainRejectedError(verdict)
    return SseChain(tuple(step.transpose() for step in chain.steps), chain.start.T)


def is_amalgamation_matrix(M: RatMatrix) -> bool:
    """0-1 matrix with exactly one 1 per row and at least one 1 per column."""
    return M.is_selection() and all(s >= 1 for s in M.col_sums())


def is_subdivision_matrix(M: RatMatrix) -> bool:
    return is_amalgamation_matrix(M.T)


def is_column_splitting(step: EsseStep) -> bool:
    return verify_esse(step).passed and is_amalgamation_matrix(step.V)


def column_split(A: RatMatrix, j: int, theta: Scalar) -> EsseStep:
    """Splits column j into theta and (1 - theta) parts and duplicates row j.

    Returns the verified step (A, C, X, V) with A = XV and C = VX; the duplicated
    row of C sits at position j + 1, directly below the original.
    """
    if not A.is_square or not A.is_nonnegative():
        raise DomainError("Column splitting needs a square nonnegative matrix")
    theta = to_rat(theta)
    if not 0 < theta < 1:
        raise DomainError(f"Splitting ratio must lie strictly between 0 and 1, got {theta}")
    n = A.rows
    if not 0 <= j < n:
        raise IndexError(f"Column index {j} out of range for a {n}x{n} matrix")

    # position k of the split matrix reads position layout[k] of A
    layout = list(range(j + 1)) + list(range(j, n))
    factors = [1] * (n + 1)
    factors[j], factors[j + 1] = theta, 1 - theta
    X = A.select_cols(layout).scale_columns(factors)
    V = RatMatrix.identity(n).select_rows(layout)
    # C = VX: X with row j duplicated
    C = X.select_rows(layout)

    step = EsseStep(A, C, X, V)
    verdict = verify_esse(step)
    if not verdict.passed:
        raise ChainRejectedError(verdict)
    return step


def conjugate_esse_to_stochastic(A: RatMatrix, B: RatMatrix, X: RatMatrix, Y: RatMatrix,
                                 cert_a: EigenCertificate, cert_b: EigenCertificate) -> EsseStep:
    """Turns an ESSE (A = XY, B = YX) of irreducible matrices into one between S(A) and S(B)."""
    verdict = verify_esse(EsseStep(A, B, X, Y))
    if not verdict.passed:
        raise ChainRejectedError(verdict)
    if not (is_irreducible(A) and is_irreducible(B)):
        raise DomainError("Both ends of the step must be irreducible")
    cert_a.validate(A)
    cert_b.validate(B)
    if cert_a.eigenvalue != cert_b.eigenvalue:
        raise CertificateError(
            f"Perron eigenvalues differ ({cert_a.eigenvalue} vs {cert_b.eigenvalue}); "
            "elementary equivalent matrices share it")
    lam = cert_a.eigenvalue
    D = RatMatrix.diag(cert_a.right_vector)
    E = RatMatrix.diag(cert_b.right_vector)
    D_inv = RatMatrix.diag([1 / x for x in cert_a.right_vector])
    E_inv = RatMatrix.diag([1 / x for x in cert_b.right_vector])
    U = (D_inv @ X @ E) / lam
    V = E_inv @ Y @ D
    step = EsseStep(stochasticize(A, cert_a), stochasticize(B, cert_b), U, V)
    step_verdict = verify_esse(step)
    if not step_verdict.passed:
        raise ChainRejectedError(step_verdict)
    return step


def _constant_row_sum(M: RatMatrix, name: str) -> Fraction:
    sums = set(M.row_sums())
    if len(sums) != 1:
        raise StructuralError(f"Row sums of {name} are not constant: {sorted(sums)}")
    value = sums.pop()
    if value <= 0:
        raise StructuralError(f"Row sums of {name} must be positive, got {value}")
    return value


def normalize_esse_to_row_stochastic(U: RatMatrix, V: RatMatrix, SA: RatMatrix, SB: RatMatrix) -> NormalizedEsse:
    """Rescales an ESSE of stochastic matrices to generalized row stochastic R = U/alpha, S = V/beta."""
    verdict = verify_esse(EsseStep(SA, SB, U, V))
    if not verdict.passed:
        raise ChainRejectedError(verdict)
    for M, name in ((SA, "SA"), (SB, "SB")):
        if not all(s == 1 for s in M.row_sums()):
            raise DomainError(f"{name} is not stochastic")
    alpha = _constant_row_sum(U, "U")
    beta = _constant_row_sum(V, "V")
    R = U / alpha
    S = V / beta
    if alpha * beta != 1 or R @ S != SA or S @ R != SB:
        raise StructuralError("Rescaled factors do not reproduce the stochastic pair")
    return NormalizedEsse(R, S, alpha, beta)


if __name__ == "__main__":
    logging.basicConfig(level=logging.DEBUG)

    P = RatMatrix([["7/10", "1/5", "1/10"], ["1/5", "7/10", "1/10"], ["1/5", "1/5", "3/5"]])
    first = column_split(P, 0, Fraction(1, 2))
    second = column_split(first.B, 2, Fraction(1, 2))
    chain = SseChain((first, second))
    print(f"P^(1) * 20 =\n{first.B * 20}")
    print(f"P^(2) * 20 =\n{second.B * 20}")

    verdict = verify_chain(chain)
    print(f"verdict: {verdict.lines()}  lag={verdict.lag} size={verdict.size}")
    cert = compose_to_se(chain)
    print(f"composed shift equivalence of lag {cert.lag}: U is {cert.U.shape}, V is {cert.V.shape}")
    print(f"transposed chain verifies: {verify_chain(transpose_chain(chain)).passed}")
