# Parametrized stochastic families used by the demos and regression tests
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple

import numpy as np

from ExactMatrix import DomainError, RatMatrix, RatPoly, Scalar, to_rat
from ShiftEquivalence import StructuralError
from StochasticMatrix import classify

logger = logging.getLogger('matrix_families')

PT_DEFAULT_VALUES = ("0", "1/4", "1/2", "3/4", "9/10", "1")


def pt_family(t: Scalar) -> RatMatrix:
    """P_t = (1/4) [[3+t, 1-t], [1+t, 3-t]] for t in [0, 1]."""
    t = to_rat(t)
    if not 0 <= t <= 1:
        raise DomainError(f"P_t is defined for t in [0, 1], got {t}")
    return RatMatrix([[3 + t, 1 - t], [1 + t, 3 - t]]) / 4


def an_family(n: int) -> RatMatrix:
    """A_n = 1/(n+2) [[1, n, 1], [n, 1, 1], [n, 1, 1]]."""
    if n < 1:
        raise DomainError(f"A_n needs n >= 1, got {n}")
    return RatMatrix([[1, n, 1], [n, 1, 1], [n, 1, 1]]) / (n + 2)


def an_third_eigenvalue(n: int) -> Fraction:
    return Fraction(-(n - 1), n + 2)


def an_expected_charpoly(n: int) -> RatPoly:
    """t (t - 1) (t + (n-1)/(n+2))."""
    return RatPoly.from_roots([0, 1, an_third_eigenvalue(n)])


def circulant(b: Scalar) -> RatMatrix:
    """The zero-trace 3x3 doubly stochastic circulant with c = 1 - b."""
    b = to_rat(b)
    if not 0 <= b <= 1:
        raise DomainError(f"Circulant parameter must lie in [0, 1], got {b}")
    c = 1 - b
    return RatMatrix([[0, b, c], [c, 0, b], [b, c, 0]])


def circulant_determinant(b: Scalar) -> Fraction:
    """Closed form b^3 + c^3 with c = 1 - b."""
    b = to_rat(b)
    return b ** 3 + (1 - b) ** 3


def circulant_parameters(A: RatMatrix) -> Tuple[Fraction, Fraction]:
    """Recovers (b, c) from a 3x3 doubly stochastic matrix with zero trace.

    Nonnegativity and a zero trace force the diagonal to vanish, and the
    row and column sums then force the circulant pattern.
    """
    if A.shape != (3, 3):
        raise StructuralError(f"Expected a 3x3 matrix, got {A.rows}x{A.cols}")
    profile = classify(A)
    if not profile.doubly_stochastic:
        raise StructuralError(f"Expected a doubly stochastic matrix; input is {profile.describe()}")
    if A.trace() != 0:
        raise StructuralError(f"Expected zero trace, got {A.trace()}")
    b, c = A[0, 1], A[0, 2]
    expected = RatMatrix([[0, b, c], [c, 0, b], [b, c, 0]])
    if A != expected:
        raise StructuralError("Zero-trace doubly stochastic matrix is not circulant")
    return b, c


@dataclass
class CirculantScan:
    """Exact minimum of b^3 + (1-b)^3 over the grid b = p/q, 0 <= p <= q <= max_den."""
    max_den: int
    minimum: Fraction
    argmin: Fraction
    grid_points: int

    @property
    def critical_point(self) -> Fraction:
        return Fraction(1, 2)

    @property
    def critical_value(self) -> Fraction:
        return circulant_determinant(self.critical_point)


def circulant_minimum_scan(max_den: int = 1000) -> CirculantScan:
    """Scans every rational b with denominator up to max_den.

    For b = p/q the value is (q^2 - 3pq + 3p^2) / q^2, which stays well inside
    int64 for q <= 10^6.
    """
    if max_den < 1:
        raise DomainError(f"max_den must be positive, got {max_den}")
    best = None
    best_b = None
    points = 0
    for q in range(1, max_den + 1):
        p = np.arange(q + 1, dtype=np.int64)
        numerators = q * q - 3 * p * q + 3 * p * p
        k = int(np.argmin(numerators))
        value = Fraction(int(numerators[k]), q * q)
        points += q + 1
        if best is None or value < best:
            best, best_b = value, Fraction(k, q)
    logger.info("Circulant scan over %d grid points: minimum %s at b = %s", points, best, best_b)
    return CirculantScan(max_den, best, best_b, points)


def circulant_samples() -> List[Fraction]:
    return [Fraction(0), Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(2, 3), Fraction(1)]


if __name__ == "__main__":
    for t in PT_DEFAULT_VALUES:
        P = pt_family(t)
        print(f"P_{t}: trace {P.trace()}, det {P.determinant()}")
    print(f"A_2 =\n{an_family(2)}\nexpected charpoly {an_expected_charpoly(2)}")
    scan = circulant_minimum_scan(200)
    print(f"min b^3 + (1-b)^3 = {scan.minimum} at b = {scan.argmin}")
