# Doubly stochastic pipeline: Perron weights, redenomination and iterated column splitting
import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import floor, lcm
from functools import reduce
from typing import List, NamedTuple, Optional, Sequence, Tuple

from ExactMatrix import DimensionError, DomainError, MatrixError, RatMatrix, Scalar, to_rat
from ShiftEquivalence import (
    ChainRejectedError,
    EsseStep,
    SseChain,
    column_split,
    verify_esse,
)
from StochasticMatrix import (
    ProbVector,
    classify,
    ds_shift,
    involution_conjugate,
    left_perron,
    require_positive_stochastic,
    same_size_conditions,
    segment_positivity,
    weighted_transpose_shift,
)

logger = logging.getLogger('doubly_stochastic')

DEFAULT_SIZE_CAP = 4096


class PositivityError(MatrixError):
    """A construction produced a matrix that is not positive."""


class SizeCapError(MatrixError):
    """The doubly stochastic target would exceed the configured size cap."""

    def __init__(self, target_size: int, size_cap: int):
        self.target_size = target_size
        self.size_cap = size_cap
        super().__init__(f"Target size M = {target_size} exceeds the size cap {size_cap}")


class SameSizeUnavailableError(MatrixError):
    """No same-size route is certified for this matrix."""

    def __init__(self, failures: dict):
        self.failures = failures
        detail = "; ".join(f"{name}: {why}" for name, why in failures.items())
        super().__init__(f"Same-size route unavailable ({detail})")


class Route(Enum):
    SAME_SIZE_PATH = "same_size_path"
    SPLITTING = "splitting"


@dataclass(frozen=True)
class PerronWeights:
    """Integer presentation l = (m_1, ..., m_n) / M of a rational Perron vector."""
    weights: Tuple[int, ...]
    M: int

    def __post_init__(self):
        if any(m <= 0 for m in self.weights):
            raise DomainError("Perron weights must be positive integers")
        if sum(self.weights) != self.M:
            raise DomainError(f"Perron weights sum to {sum(self.weights)}, expected {self.M}")

    def vector(self) -> ProbVector:
        return ProbVector(tuple(Fraction(m, self.M) for m in self.weights))


@dataclass
class PipelineOptions:
    """Knobs of the doubly stochastic pipeline."""
    prefer_same_size: bool = True
    max_den: Optional[int] = None
    size_cap: int = DEFAULT_SIZE_CAP
    allow_transpose: bool = False
    require_same_size: bool = False


@dataclass
class PipelineReport:
    """Outcome of make_doubly."""
    input: RatMatrix
    route: Route
    chain: SseChain
    output: RatMatrix
    similarity_witness: Optional[RatMatrix]
    target_size: int
    notes: List[str] = field(default_factory=list)
    path_positive: Optional[bool] = None

    @property
    def lag(self) -> int:
        return self.chain.lag

    @property
    def size(self) -> int:
        return self.chain.size


class Redenomination(NamedTuple):
    step: EsseStep
    matrix: RatMatrix


class SplitResult(NamedTuple):
    chain: SseChain
    matrix: RatMatrix


def perron_weights(l: ProbVector) -> PerronWeights:
    """M = lcm of the denominators of l, m_i = l_i M."""
    M = reduce(lcm, (x.denominator for x in l), 1)
    return PerronWeights(tuple(int(x * M) for x in l), M)


def _redenomination_matrices(l: ProbVector, r: Sequence[Fraction]) -> Tuple[RatMatrix, RatMatrix]:
    n = len(l)
    M, M_inv = [], []
    for i in range(n - 1):
        ratio = l[i] / r[i]
        M.append([ratio if k == i else 0 for k in range(n - 1)] + [1 - ratio])
        M_inv.append([1 / ratio if k == i else 0 for k in range(n - 1)] + [1 - 1 / ratio])
    M.append([0] * (n - 1) + [1])
    M_inv.append([0] * (n - 1) + [1])
    return RatMatrix(M), RatMatrix(M_inv)


def redenominate(P: RatMatrix, r: Sequence[Scalar]) -> Redenomination:
    """Lag-one step from P to M(r) P M(r)^-1, whose left Perron vector is (r, 1 - sum r)."""
    require_positive_stochastic(P, "redenominate")
    n = P.rows
    r = [to_rat(x) for x in r]
    if len(r) != n - 1:
        raise DimensionError(f"Need {n - 1} target weights for a {n}x{n} matrix, got {len(r)}")
    l = left_perron(P)
    for j, (target, current) in enumerate(zip(r, l)):
        if not 0 < target <= current:
            raise DomainError(f"Target weight r_{j + 1} = {target} must lie in (0, l_{j + 1} = {current}]")
    if not sum(r) < 1:
        raise DomainError(f"Target weights sum to {sum(r)}, which leaves no mass for the last state")

    M, M_inv = _redenomination_matrices(l, r)
    if M @ M_inv != RatMatrix.identity(n):
        raise MatrixError("Redenomination matrix and its claimed inverse disagree")
    MP = M @ P
    if not MP.is_positive():
        raise PositivityError(f"M(r) P has minimum entry {MP.min_entry()}; pick r closer to l")
    PN = MP @ M_inv
    new_l = RatMatrix([r + [1 - sum(r)]])
    if new_l @ PN != new_l:
        raise MatrixError("Redenominated matrix does not fix the target Perron vector")
    step = EsseStep(P, PN, M_inv, MP)
    verdict = verify_esse(step)
    if not verdict.passed:
        raise ChainRejectedError(verdict)
    return Redenomination(step, PN)


def suggest_redenomination(P: RatMatrix, max_den: int) -> Optional[List[Fraction]]:
    """First r = floor(l q) / q, scanning q downward from max_den, that shrinks M and is feasible."""
    require_positive_stochastic(P, "suggest_redenomination")
    l = left_perron(P)
    current = perron_weights(l).M
    for q in range(max_den, 0, -1):
        r = [Fraction(floor(x * q), q) for x in l.entries[:-1]]
        if any(x <= 0 for x in r) or not sum(r) < 1:
            continue
        new_M = reduce(lcm, (x.denominator for x in r + [1 - sum(r)]), 1)
        if new_M >= current:
            continue
        try:
            redenominate(P, r)
        except PositivityError:
            logger.debug("Denominator %d shrinks M to %d but M(r) P is not positive", q, new_M)
            continue
        logger.info("Redenomination with denominator %d shrinks M from %d to %d", q, current, new_M)
        return r
    return None


def split_to_doubly(P: RatMatrix, size_cap: int = DEFAULT_SIZE_CAP) -> SplitResult:
    """Splits the leftmost column of weight m > 1 by 1/m until every Perron weight is 1."""
    require_positive_stochastic(P, "split_to_doubly")
    weights = perron_weights(left_perron(P))
    if weights.M > size_cap:
        raise SizeCapError(weights.M, size_cap)

    current = list(weights.weights)
    matrix = P
    steps = []
    while True:
        j = next((k for k, m in enumerate(current) if m > 1), None)
        if j is None:
            break
        m = current[j]
        step = column_split(matrix, j, Fraction(1, m))
        current[j:j + 1] = [1, m - 1]
        matrix = step.B
        steps.append(step)
        logger.debug("Split column %d with weight %d; matrix is now %dx%d", j + 1, m, matrix.rows, matrix.rows)

    chain = SseChain(tuple(steps), P)
    logger.info("Reached a %dx%d doubly stochastic matrix in %d splits", matrix.rows, matrix.rows, chain.lag)
    return SplitResult(chain, matrix)


class DoublyStochasticPipeline:
    """Runs the same-size or splitting route and keeps a history of reports."""

    def __init__(self, options: Optional[PipelineOptions] = None):
        self.options = options or PipelineOptions()
        self.history: List[PipelineReport] = []

    def run(self, P: RatMatrix) -> PipelineReport:
        require_positive_stochastic(P, "make_doubly")
        options = self.options
        report = None
        if options.prefer_same_size or options.require_same_size:
            report = self._same_size(P)
            if report is None and options.require_same_size:
                raise SameSizeUnavailableError(same_size_conditions(P).failures)
        if report is None:
            report = self._splitting(P)
        self.history.append(report)
        return report

    def _same_size(self, P: RatMatrix) -> Optional[PipelineReport]:
        n = P.rows
        shifted = ds_shift(P)
        external = ("The explicit SSE chain for this route follows from the path theorem for "
                    "similar positive matrices and is not constructed; the similarity witness "
                    "and the path-positivity certificate are emitted instead.")
        if shifted.positive:
            X, Q = involution_conjugate(P, ProbVector.uniform(n))
            return PipelineReport(
                input=P,
                route=Route.SAME_SIZE_PATH,
                chain=SseChain.trivial(P),
                output=Q,
                similarity_witness=X,
                target_size=n,
                notes=["P + J_n(I - P) is positive; X = I - J_l - J_n conjugates P to it.", external],
                path_positive=segment_positivity(P, Q),
            )
        if self.options.allow_transpose:
            transposed = weighted_transpose_shift(P)
            if transposed.positive:
                return PipelineReport(
                    input=P,
                    route=Route.SAME_SIZE_PATH,
                    chain=SseChain.trivial(P),
                    output=transposed.matrix,
                    similarity_witness=transposed.witness,
                    target_size=n,
                    notes=["Shift is positive after the weighted transpose D^-1 P^T D; "
                           "the output is the transpose of its doubly stochastic shift.", external],
                    path_positive=segment_positivity(P, transposed.matrix),
                )
        return None

    def _splitting(self, P: RatMatrix) -> PipelineReport:
        options = self.options
        notes = []
        start = P
        prefix: Tuple[EsseStep, ...] = ()
        if options.max_den is not None:
            r = suggest_redenomination(P, options.max_den)
            if r is not None:
                step, start = redenominate(P, r)
                prefix = (step,)
                notes.append(f"Redenominated the Perron vector to {ProbVector(tuple(r) + (1 - sum(r),))}.")
        split = split_to_doubly(start, options.size_cap)
        # every step was verified as it was built
        chain = SseChain(prefix + split.chain.steps, P)
        if not classify(split.matrix).doubly_stochastic:
            raise MatrixError("Splitting ended at a matrix that is not doubly stochastic")
        notes.append(f"Lag {chain.lag}, size {chain.size}.")
        return PipelineReport(
            input=P,
            route=Route.SPLITTING,
            chain=chain,
            output=split.matrix,
            similarity_witness=None,
            target_size=split.matrix.rows,
            notes=notes,
        )


def make_doubly(P: RatMatrix, options: Optional[PipelineOptions] = None) -> PipelineReport:
    """Positive doubly stochastic matrix equivalent to P, with its certificate."""
    return DoublyStochasticPipeline(options).run(P)


if __name__ == "__main__":
    logging.basicConfig(level=logging.INFO)

    P = RatMatrix([["7/10", "1/5", "1/10"], ["1/5", "7/10", "1/10"], ["1/5", "1/5", "3/5"]])
    print(f"Perron weights: {perron_weights(left_perron(P))}")

    report = make_doubly(P, PipelineOptions(prefer_same_size=False))
    print(f"route: {report.route.value}, lag {report.lag}, target size {report.target_size}")
    for k, matrix in enumerate(report.chain.matrices[1:], start=1):
        print(f"P^({k}) * 20 =\n{matrix * 20}")

    same = make_doubly(RatMatrix([["7/10", "3/10"], ["1/2", "1/2"]]))
    print(f"2x2 route: {same.route.value}\noutput =\n{same.output}")
