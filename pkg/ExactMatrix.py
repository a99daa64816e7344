# Exact rational matrix and polynomial kernel
import logging
import re
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

logger = logging.getLogger('exact_matrix')

Rat = Fraction
Scalar = Union[int, Fraction, str]

_RATIONAL_LITERAL = re.compile(r'-?\d+(/\d+)?')
# int64 grids stay below this magnitude; anything larger moves to Python ints
_INT64_SAFE = 2 ** 62
_LUMP_MIN_ROWS = 8


class MatrixError(ValueError):
    """Base class for every matrix domain error."""


class DimensionError(MatrixError):
    """Matrix shapes do not fit the operation."""


class DomainError(MatrixError):
    """An input lies outside the domain of an operation."""


class SingularError(MatrixError):
    """A linear system has no unique solution."""


def to_rat(value) -> Fraction:
    """Converts an int, Fraction or rational literal ("p/q" or an integer) to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise DomainError(f"Booleans are not rationals: {value!r}")
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, str):
        text = value.strip()
        if not _RATIONAL_LITERAL.fullmatch(text):
            raise DomainError(f"Invalid rational literal: {value!r}")
        try:
            return Fraction(text)
        except ZeroDivisionError as e:
            raise DomainError(f"Invalid rational literal: {value!r}") from e
    raise DomainError(f"Unsupported scalar {value!r} of type {type(value).__name__}; floats are never accepted")


def _abs_max(grid: np.ndarray) -> int:
    if grid.size == 0:
        return 0
    return max(abs(int(grid.max())), abs(int(grid.min())))


def _compact(grid: np.ndarray) -> np.ndarray:
    """int64 copy of an integer grid when every entry fits, the Python-int grid otherwise."""
    if grid.dtype == object and _abs_max(grid) < _INT64_SAFE:
        return grid.astype(np.int64)
    return grid


def _widen(grid: np.ndarray, factor: int) -> np.ndarray:
    """Grid that can absorb values up to |factor| times its current magnitude."""
    factor = abs(factor)
    if grid.dtype != object and (factor >= _INT64_SAFE or _abs_max(grid) * factor >= _INT64_SAFE):
        return grid.astype(object)
    return grid


def _scaled(grid: np.ndarray, factor: int) -> np.ndarray:
    if factor == 1:
        return grid
    return _widen(grid, factor) * factor


def _added(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.dtype == object or b.dtype == object or _abs_max(a) + _abs_max(b) >= _INT64_SAFE:
        return a.astype(object) + b.astype(object)
    return a + b


def _reduced(num: np.ndarray, den: int) -> Tuple[np.ndarray, int]:
    """Divides numerators and denominator by their common gcd."""
    if not num.any():
        return np.zeros(num.shape, dtype=np.int64), 1
    if num.dtype == object:
        g = reduce(gcd, num.flat, den)
    else:
        g = gcd(int(np.gcd.reduce(num.ravel())), den)
    if g != 1:
        num = num // g
        den //= g
    return _compact(num), den


def _unit_rows(grid: np.ndarray) -> Optional[np.ndarray]:
    """Column of the single 1 in every row of a 0-1 grid, or None for any other grid."""
    if grid.dtype == object:
        return None
    if not ((grid == 0) | (grid == 1)).all() or not (grid.sum(axis=1) == 1).all():
        return None
    return grid.argmax(axis=1)


def _distinct_rows(grid: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """(class of every row, index of one representative row per class)."""
    if grid.dtype != object:
        _, first, classes = np.unique(grid, axis=0, return_index=True, return_inverse=True)
        return classes.reshape(-1), first
    seen = {}
    first = []
    classes = np.empty(grid.shape[0], dtype=np.intp)
    for i, row in enumerate(grid):
        key = tuple(row)
        if key not in seen:
            seen[key] = len(first)
            first.append(i)
        classes[i] = seen[key]
    return classes, np.array(first, dtype=np.intp)


def _merge_columns(grid: np.ndarray, classes: np.ndarray, width: int) -> np.ndarray:
    """grid @ E for the 0-1 matrix E with E[k, classes[k]] = 1."""
    order = np.argsort(classes, kind='stable')
    ordered = classes[order]
    starts = np.flatnonzero(np.r_[True, ordered[1:] != ordered[:-1]])
    source = _widen(grid, grid.shape[1])[:, order]
    merged = np.add.reduceat(source, starts, axis=1)
    out = np.zeros((grid.shape[0], width), dtype=source.dtype)
    out[:, ordered[starts]] = merged
    return out


def _dense_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.dtype != object and b.dtype != object and _abs_max(a) * _abs_max(b) * a.shape[1] < _INT64_SAFE:
        return a @ b
    return a.astype(object).dot(b.astype(object))


def _product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Integer grid product; 0-1 selection factors and repeated rows are handled without a dense product."""
    mapping = _unit_rows(a)
    if mapping is not None:
        return b[mapping]
    mapping = _unit_rows(b)
    if mapping is not None:
        return _merge_columns(a, mapping, b.shape[1])
    # a = E R with R the distinct rows of a
    if a.shape[0] >= _LUMP_MIN_ROWS:
        classes, first = _distinct_rows(a)
        if 2 * len(first) <= a.shape[0]:
            return _product(a[first], b)[classes]
    if b.shape[0] >= _LUMP_MIN_ROWS:
        classes, first = _distinct_rows(b)
        if 2 * len(first) <= b.shape[0]:
            return _product(_merge_columns(a, classes, len(first)), b[first])
    return _dense_product(a, b)


class RatMatrix:
    """Dense immutable matrix of exact rationals: an integer grid over one common denominator."""

    __slots__ = ('_num', '_den')

    def __init__(self, entries):
        if isinstance(entries, RatMatrix):
            self._num, self._den = entries._num, entries._den
            return
        rows = [list(row) for row in entries]
        if not rows or not rows[0]:
            raise DimensionError("A matrix needs at least one row and one column")
        width = len(rows[0])
        if any(len(row) != width for row in rows):
            raise DimensionError("All rows of a matrix must have the same length")
        values = [[to_rat(x) for x in row] for row in rows]
        den = reduce(lcm, (x.denominator for row in values for x in row), 1)
        grid = np.empty((len(values), width), dtype=object)
        for i, row in enumerate(values):
            for j, x in enumerate(row):
                grid[i, j] = x.numerator * (den // x.denominator)
        self._num, self._den = self._frozen(grid, den)

    @staticmethod
    def _frozen(num: np.ndarray, den: int) -> Tuple[np.ndarray, int]:
        num, den = _reduced(np.ascontiguousarray(num), den)
        num.flags.writeable = False
        return num, den

    @classmethod
    def _from_parts(cls, num: np.ndarray, den: int) -> 'RatMatrix':
        if num.ndim != 2 or 0 in num.shape:
            raise DimensionError(f"Invalid matrix shape {num.shape}")
        matrix = cls.__new__(cls)
        matrix._num, matrix._den = cls._frozen(num, den)
        return matrix

    @classmethod
    def identity(cls, n: int) -> 'RatMatrix':
        return cls._from_parts(np.eye(n, dtype=np.int64), 1)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> 'RatMatrix':
        return cls._from_parts(np.zeros((rows, cols), dtype=np.int64), 1)

    @classmethod
    def full(cls, rows: int, cols: int, value: Scalar) -> 'RatMatrix':
        value = to_rat(value)
        return cls._from_parts(np.full((rows, cols), value.numerator, dtype=object), value.denominator)

    @classmethod
    def diag(cls, values: Sequence[Scalar]) -> 'RatMatrix':
        n = len(values)
        return cls([[values[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def column_vector(cls, values: Sequence[Scalar]) -> 'RatMatrix':
        return cls([[v] for v in values])

    @property
    def rows(self) -> int:
        return self._num.shape[0]

    @property
    def cols(self) -> int:
        return self._num.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        return self._num.shape

    @property
    def denominator(self) -> int:
        """Least common denominator of the entries."""
        return self._den

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, key) -> Fraction:
        i, j = key
        return Fraction(int(self._num[i, j]), self._den)

    def row(self, i: int) -> Tuple[Fraction, ...]:
        return tuple(Fraction(int(x), self._den) for x in self._num[i, :])

    def column(self, j: int) -> Tuple[Fraction, ...]:
        return tuple(Fraction(int(x), self._den) for x in self._num[:, j])

    def __iter__(self) -> Iterator[Tuple[Fraction, ...]]:
        return (self.row(i) for i in range(self.rows))

    def entries(self) -> Iterator[Fraction]:
        return (Fraction(int(x), self._den) for x in self._num.flat)

    def tolist(self) -> List[List[Fraction]]:
        return [list(row) for row in self]

    def to_strings(self) -> List[List[str]]:
        return [[str(x) for x in row] for row in self]

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatMatrix):
            return NotImplemented
        if self is other or (self._num is other._num and self._den == other._den):
            return True
        return self.shape == other.shape and self._den == other._den and bool(np.array_equal(self._num, other._num))

    def __hash__(self) -> int:
        if self._num.dtype == object:
            body = tuple(self._num.flat)
        else:
            body = self._num.tobytes()
        return hash((self.shape, self._den, body))

    def _require_same_shape(self, other: 'RatMatrix', op: str):
        if self.shape != other.shape:
            raise DimensionError(f"Cannot {op} matrices of shapes {self.shape} and {other.shape}")

    def _common(self, other: 'RatMatrix') -> Tuple[np.ndarray, np.ndarray, int]:
        den = lcm(self._den, other._den)
        return _scaled(self._num, den // self._den), _scaled(other._num, den // other._den), den

    def __add__(self, other: 'RatMatrix') -> 'RatMatrix':
        if not isinstance(other, RatMatrix):
            return NotImplemented
        self._require_same_shape(other, "add")
        left, right, den = self._common(other)
        return RatMatrix._from_parts(_added(left, right), den)

    def __sub__(self, other: 'RatMatrix') -> 'RatMatrix':
        if not isinstance(other, RatMatrix):
            return NotImplemented
        self._require_same_shape(other, "subtract")
        left, right, den = self._common(other)
        return RatMatrix._from_parts(_added(left, -right), den)

    def __neg__(self) -> 'RatMatrix':
        return RatMatrix._from_parts(-self._num, self._den)

    def __mul__(self, scalar) -> 'RatMatrix':
        if isinstance(scalar, RatMatrix):
            raise TypeError("Use @ for matrix products")
        scalar = to_rat(scalar)
        return RatMatrix._from_parts(_scaled(self._num, scalar.numerator), self._den * scalar.denominator)

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> 'RatMatrix':
        scalar = to_rat(scalar)
        if scalar == 0:
            raise ZeroDivisionError("Matrix division by zero")
        return self * (1 / scalar)

    def __matmul__(self, other: 'RatMatrix') -> 'RatMatrix':
        if not isinstance(other, RatMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise DimensionError(f"Cannot multiply {self.shape} by {other.shape}")
        return RatMatrix._from_parts(_product(self._num, other._num), self._den * other._den)

    def power(self, exponent: int) -> 'RatMatrix':
        """Matrix power by repeated squaring; exponent 0 gives the identity."""
        if not self.is_square:
            raise DimensionError(f"Only square matrices have powers, got {self.shape}")
        if exponent < 0:
            raise DomainError("Negative powers are not supported; use inverse()")
        result = RatMatrix.identity(self.rows)
        base = self
        while exponent:
            if exponent & 1:
                result = result @ base
            exponent >>= 1
            if exponent:
                base = base @ base
        return result

    @property
    def T(self) -> 'RatMatrix':
        return RatMatrix._from_parts(self._num.T, self._den)

    def select_rows(self, indices: Sequence[int]) -> 'RatMatrix':
        """Rows in the given order; an index may repeat."""
        return RatMatrix._from_parts(self._num[np.asarray(indices, dtype=np.intp), :], self._den)

    def select_cols(self, indices: Sequence[int]) -> 'RatMatrix':
        return RatMatrix._from_parts(self._num[:, np.asarray(indices, dtype=np.intp)], self._den)

    def scale_columns(self, factors: Sequence[Scalar]) -> 'RatMatrix':
        """Multiplies column j by factors[j]."""
        if len(factors) != self.cols:
            raise DimensionError(f"Got {len(factors)} column factors for {self.cols} columns")
        factors = [to_rat(f) for f in factors]
        den = reduce(lcm, (f.denominator for f in factors), 1)
        ints = [f.numerator * (den // f.denominator) for f in factors]
        grid = _widen(self._num, max(abs(k) for k in ints))
        return RatMatrix._from_parts(grid * np.array(ints, dtype=grid.dtype)[None, :], self._den * den)

    def is_selection(self) -> bool:
        """0-1 matrix with exactly one 1 in every row."""
        return self._den == 1 and _unit_rows(self._num) is not None

    def differing_entries(self, other: 'RatMatrix') -> List[Tuple[int, int]]:
        """Positions where two matrices of the same shape disagree."""
        self._require_same_shape(other, "compare")
        left = self._num.astype(object) * other._den
        right = other._num.astype(object) * self._den
        return [(int(i), int(j)) for i, j in np.argwhere(left != right)]

    def trace(self) -> Fraction:
        if not self.is_square:
            raise DimensionError("Trace needs a square matrix")
        return Fraction(sum(int(x) for x in self._num.diagonal()), self._den)

    def _totals(self, axis: int) -> Tuple[Fraction, ...]:
        totals = _widen(self._num, self._num.shape[axis]).sum(axis=axis)
        return tuple(Fraction(int(t), self._den) for t in totals)

    def row_sums(self) -> Tuple[Fraction, ...]:
        return self._totals(1)

    def col_sums(self) -> Tuple[Fraction, ...]:
        return self._totals(0)

    def min_entry(self) -> Fraction:
        return Fraction(int(self._num.min()), self._den)

    def max_entry(self) -> Fraction:
        return Fraction(int(self._num.max()), self._den)

    def is_nonnegative(self) -> bool:
        return not bool((self._num < 0).any())

    def is_positive(self) -> bool:
        return bool((self._num > 0).all())

    def negative_entries(self) -> List[Tuple[int, int, Fraction]]:
        return [(int(i), int(j), self[i, j]) for i, j in np.argwhere(self._num < 0)]

    def support(self) -> np.ndarray:
        """Boolean pattern of the strictly positive entries."""
        return np.asarray(self._num > 0, dtype=bool)

    def determinant(self) -> Fraction:
        return determinant(self)

    def inverse(self) -> 'RatMatrix':
        return inverse(self)

    def rank(self) -> int:
        return rank(self)

    def __repr__(self) -> str:
        return f"RatMatrix({self.to_strings()!r})"

    def __str__(self) -> str:
        cells = self.to_strings()
        width = max(len(c) for row in cells for c in row)
        return "\n".join("[" + "  ".join(c.rjust(width) for c in row) + "]" for row in cells)


class RatPoly:
    """Polynomial in t with rational coefficients, lowest degree first."""

    __slots__ = ('_coeffs',)

    def __init__(self, coefficients: Iterable[Scalar] = ()):
        coeffs = [to_rat(c) for c in coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        self._coeffs = tuple(coeffs)

    @classmethod
    def t(cls) -> 'RatPoly':
        return cls([0, 1])

    @classmethod
    def constant(cls, value: Scalar) -> 'RatPoly':
        return cls([value])

    @classmethod
    def one(cls) -> 'RatPoly':
        return cls([1])

    @classmethod
    def from_roots(cls, roots: Iterable[Scalar]) -> 'RatPoly':
        """Monic polynomial with the given roots, counted with multiplicity."""
        result = cls.one()
        for root in roots:
            result = result * cls([-to_rat(root), 1])
        return result

    @property
    def coefficients(self) -> Tuple[Fraction, ...]:
        return self._coeffs

    @property
    def degree(self) -> int:
        """Degree of the polynomial; -1 for the zero polynomial."""
        return len(self._coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self._coeffs

    @property
    def leading(self) -> Fraction:
        return self._coeffs[-1] if self._coeffs else Fraction(0)

    def coefficient(self, k: int) -> Fraction:
        return self._coeffs[k] if 0 <= k < len(self._coeffs) else Fraction(0)

    def __eq__(self, other) -> bool:
        if isinstance(other, RatPoly):
            return self._coeffs == other._coeffs
        if isinstance(other, (int, Fraction)):
            return self._coeffs == RatPoly([other])._coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._coeffs)

    def __add__(self, other) -> 'RatPoly':
        other = _as_poly(other)
        size = max(len(self._coeffs), len(other._coeffs))
        return RatPoly(self.coefficient(k) + other.coefficient(k) for k in range(size))

    __radd__ = __add__

    def __neg__(self) -> 'RatPoly':
        return RatPoly(-c for c in self._coeffs)

    def __sub__(self, other) -> 'RatPoly':
        return self + (-_as_poly(other))

    def __rsub__(self, other) -> 'RatPoly':
        return _as_poly(other) - self

    def __mul__(self, other) -> 'RatPoly':
        other = _as_poly(other)
        if self.is_zero or other.is_zero:
            return RatPoly()
        product = [Fraction(0)] * (len(self._coeffs) + len(other._coeffs) - 1)
        for i, a in enumerate(self._coeffs):
            if a:
                for j, b in enumerate(other._coeffs):
                    product[i + j] += a * b
        return RatPoly(product)

    __rmul__ = __mul__

    def scale(self, factor: Scalar) -> 'RatPoly':
        factor = to_rat(factor)
        return RatPoly(c * factor for c in self._coeffs)

    def __pow__(self, exponent: int) -> 'RatPoly':
        result = RatPoly.one()
        for _ in range(exponent):
            result = result * self
        return result

    def __divmod__(self, divisor: 'RatPoly') -> Tuple['RatPoly', 'RatPoly']:
        divisor = _as_poly(divisor)
        if divisor.is_zero:
            raise ZeroDivisionError("Polynomial division by zero")
        remainder = list(self._coeffs)
        quotient = [Fraction(0)] * max(len(remainder) - divisor.degree, 1)
        lead = divisor.leading
        while len(remainder) - 1 >= divisor.degree and remainder:
            shift = len(remainder) - 1 - divisor.degree
            factor = remainder[-1] / lead
            quotient[shift] = factor
            for k, c in enumerate(divisor._coeffs):
                remainder[shift + k] -= factor * c
            remainder.pop()
            while remainder and remainder[-1] == 0:
                remainder.pop()
        return RatPoly(quotient), RatPoly(remainder)

    def __floordiv__(self, divisor: 'RatPoly') -> 'RatPoly':
        return divmod(self, divisor)[0]

    def __mod__(self, divisor: 'RatPoly') -> 'RatPoly':
        return divmod(self, divisor)[1]

    def divides(self, other: 'RatPoly') -> bool:
        return (other % self).is_zero

    def monic(self) -> 'RatPoly':
        if self.is_zero:
            return self
        return self.scale(1 / self.leading)

    @staticmethod
    def gcd(a: 'RatPoly', b: 'RatPoly') -> 'RatPoly':
        """Monic greatest common divisor (zero when both inputs are zero)."""
        while not b.is_zero:
            a, b = b, a % b
        return a.monic()

    def shift(self, k: int) -> 'RatPoly':
        """Multiplies by t^k."""
        if self.is_zero:
            return self
        return RatPoly((0,) * k + self._coeffs)

    def valuation(self) -> int:
        """Multiplicity of t as a factor."""
        if self.is_zero:
            raise DomainError("The zero polynomial has no valuation")
        return next(k for k, c in enumerate(self._coeffs) if c != 0)

    def strip_t(self) -> 'RatPoly':
        """Divides out every factor of t."""
        if self.is_zero:
            return self
        return RatPoly(self._coeffs[self.valuation():])

    def __call__(self, x):
        """Horner evaluation at a rational or at a square RatMatrix."""
        if isinstance(x, RatMatrix):
            if not x.is_square:
                raise DimensionError("Polynomials can only be evaluated at square matrices")
            identity = RatMatrix.identity(x.rows)
            result = RatMatrix.zeros(x.rows, x.rows)
            for c in reversed(self._coeffs):
                result = result @ x + identity * c
            return result
        x = to_rat(x)
        result = Fraction(0)
        for c in reversed(self._coeffs):
            result = result * x + c
        return result

    def __repr__(self) -> str:
        return f"RatPoly({[str(c) for c in self._coeffs]!r})"

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self._coeffs[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            magnitude = abs(c)
            if k == 0:
                body = str(magnitude)
            else:
                power = "t" if k == 1 else f"t^{k}"
                body = power if magnitude == 1 else f"{magnitude}*{power}"
            terms.append((sign, body))
        first_sign, first_body = terms[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in terms[1:]:
            text += f" {sign} {body}"
        return text


def _as_poly(value) -> RatPoly:
    if isinstance(value, RatPoly):
        return value
    return RatPoly([value])


def _require_square(A: RatMatrix, op: str):
    if not A.is_square:
        raise DimensionError(f"{op} needs a square matrix, got {A.rows}x{A.cols}")


def _require_nonnegative(A: RatMatrix, op: str):
    if not A.is_nonnegative():
        raise DomainError(f"{op} is only defined for nonnegative matrices")


def _fraction_free_eliminate(ints: List[List[int]]) -> Tuple[int, int]:
    """Bareiss elimination in place; returns (rank, signed last pivot)."""
    m, n = len(ints), len(ints[0])
    sign, previous, rank_ = 1, 1, 0
    for col in range(n):
        if rank_ == m:
            break
        pivot_row = next((r for r in range(rank_, m) if ints[r][col] != 0), None)
        if pivot_row is None:
            continue
        if pivot_row != rank_:
            ints[pivot_row], ints[rank_] = ints[rank_], ints[pivot_row]
            sign = -sign
        pivot = ints[rank_][col]
        top = ints[rank_]
        for r in range(rank_ + 1, m):
            row = ints[r]
            lead = row[col]
            for c in range(col + 1, n):
                # exact by Sylvester's identity
                row[c] = (pivot * row[c] - lead * top[c]) // previous
            row[col] = 0
        previous = pivot
        rank_ += 1
    return rank_, sign * previous


def rank(A: RatMatrix) -> int:
    """Exact rank over the rationals."""
    return _fraction_free_eliminate(A._num.tolist())[0]


def determinant(A: RatMatrix) -> Fraction:
    _require_square(A, "determinant")
    rank_, det = _fraction_free_eliminate(A._num.tolist())
    if rank_ < A.rows:
        return Fraction(0)
    return Fraction(det, A._den ** A.rows)


def row_reduce(A: RatMatrix) -> Tuple[RatMatrix, List[int]]:
    """Reduced row echelon form and the pivot columns."""
    rows = A.tolist()
    m, n = A.shape
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        pivot_row = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        pivot = rows[r][c]
        rows[r] = [x / pivot for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][c] != 0:
                factor = rows[i][c]
                rows[i] = [x - factor * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return RatMatrix(rows), pivots


def solve(A: RatMatrix, b: Sequence[Scalar]) -> List[Fraction]:
    """Unique solution x of A x = b; A may have more rows than columns."""
    if len(b) != A.rows:
        raise DimensionError(f"Right-hand side has {len(b)} entries, matrix has {A.rows} rows")
    augmented = RatMatrix([list(row) + [rhs] for row, rhs in zip(A, b)])
    reduced, pivots = row_reduce(augmented)
    if A.cols in pivots:
        raise SingularError("Linear system is inconsistent")
    if len(pivots) < A.cols:
        raise SingularError(f"Linear system is underdetermined (rank {len(pivots)} < {A.cols})")
    return [reduced[i, A.cols] for i in range(A.cols)]


def inverse(A: RatMatrix) -> RatMatrix:
    _require_square(A, "inverse")
    n = A.rows
    identity = RatMatrix.identity(n)
    augmented = RatMatrix([list(a) + list(e) for a, e in zip(A, identity)])
    reduced, pivots = row_reduce(augmented)
    if pivots[:n] != list(range(n)):
        raise SingularError("Matrix is not invertible")
    return RatMatrix([reduced.row(i)[n:] for i in range(n)])


def _hessenberg(A: RatMatrix) -> List[List[Fraction]]:
    """Upper Hessenberg form similar to A, by exact elimination."""
    H = A.tolist()
    n = A.rows
    for m in range(1, n - 1):
        i = next((r for r in range(m, n) if H[r][m - 1] != 0), None)
        if i is None:
            continue
        if i != m:
            H[i], H[m] = H[m], H[i]
            for row in H:
                row[i], row[m] = row[m], row[i]
        for r in range(m + 1, n):
            u = H[r][m - 1] / H[m][m - 1]
            if u == 0:
                continue
            H[r] = [x - u * y for x, y in zip(H[r], H[m])]
            for row in H:
                row[m] += u * row[r]
    return H


def _charpoly_hessenberg(A: RatMatrix) -> RatPoly:
    H = _hessenberg(A)
    n = A.rows
    p = [RatPoly.one()]
    for m in range(1, n + 1):
        poly = RatPoly([-H[m - 1][m - 1], 1]) * p[m - 1]
        subdiagonal = Fraction(1)
        for i in range(m - 1, 0, -1):
            subdiagonal *= H[i][i - 1]
            if subdiagonal == 0:
                break
            poly = poly - p[i - 1].scale(H[i - 1][m - 1] * subdiagonal)
        p.append(poly)
    return p[n]


def _charpoly_leverrier(A: RatMatrix) -> RatPoly:
    n = A.rows
    identity = RatMatrix.identity(n)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    M = RatMatrix.zeros(n, n)
    for k in range(1, n + 1):
        M = A @ M + identity * coeffs[n - k + 1]
        coeffs[n - k] = -(A @ M).trace() / k
    return RatPoly(coeffs)


def _lumped(A: RatMatrix) -> Optional[RatMatrix]:
    """R E for A = E R, R the distinct rows of A; None when no row repeats."""
    classes, first = _distinct_rows(A._num)
    if len(first) == A.rows:
        return None
    return RatMatrix._from_parts(_merge_columns(A._num[first], classes, len(first)), A._den)


def charpoly(A: RatMatrix, method: str = 'hessenberg') -> RatPoly:
    """det(tI - A), monic of degree n, computed exactly.

    Repeated rows are folded first: for A = E R with R holding the s distinct
    rows, det(tI_n - E R) = t^(n - s) det(tI_s - R E).
    """
    _require_square(A, "charpoly")
    if method not in ('hessenberg', 'leverrier'):
        raise ValueError(f"Unknown charpoly method: {method}")
    lumped = _lumped(A)
    if lumped is not None:
        return charpoly(lumped, method).shift(A.rows - lumped.rows)
    if method == 'hessenberg':
        return _charpoly_hessenberg(A)
    return _charpoly_leverrier(A)


def nonzero_charpoly(A: RatMatrix) -> RatPoly:
    """Characteristic polynomial with every factor of t removed (the nonzero spectrum)."""
    return charpoly(A).strip_t()


def is_irreducible(A: RatMatrix) -> bool:
    """True iff the positivity digraph of A is strongly connected."""
    _require_square(A, "is_irreducible")
    _require_nonnegative(A, "is_irreducible")
    if A.rows == 1:
        return A[0, 0] > 0
    n_components, _ = connected_components(csr_matrix(A.support()), directed=True, connection='strong')
    return n_components == 1


def is_primitive(A: RatMatrix) -> bool:
    """True iff some power A^r with r at most the Wielandt bound is positive."""
    _require_square(A, "is_primitive")
    _require_nonnegative(A, "is_primitive")
    n = A.rows
    bound = n * n - 2 * n + 2
    support = A.support()
    exponent = 1
    # once a power of a nonnegative matrix is positive every later power is too
    while exponent < bound and not support.all():
        as_int = support.astype(np.int64)
        support = (as_int @ as_int) > 0
        exponent *= 2
    return bool(support.all())


def invariant_factors(A: RatMatrix) -> List[RatPoly]:
    """Monic invariant factors of tI - A, from its Smith normal form over Q[t]."""
    _require_square(A, "invariant_factors")
    n = A.rows
    M = [[RatPoly([-A[i, j], 1]) if i == j else RatPoly([-A[i, j]]) for j in range(n)] for i in range(n)]

    for k in range(n):
        while True:
            candidates = [(M[i][j].degree, i, j) for i in range(k, n) for j in range(k, n) if not M[i][j].is_zero]
            _, pi, pj = min(candidates)
            M[k], M[pi] = M[pi], M[k]
            for row in M:
                row[k], row[pj] = row[pj], row[k]
            pivot = M[k][k]

            clean = True
            for i in range(k + 1, n):
                if M[i][k].is_zero:
                    continue
                q, r = divmod(M[i][k], pivot)
                M[i] = [x - q * y for x, y in zip(M[i], M[k])]
                clean = clean and r.is_zero
            for j in range(k + 1, n):
                if M[k][j].is_zero:
                    continue
                q, r = divmod(M[k][j], pivot)
                for row in M:
                    row[j] = row[j] - q * row[k]
                clean = clean and r.is_zero
            if not clean:
                continue

            offender = next((i for i in range(k + 1, n) for j in range(k + 1, n)
                             if not pivot.divides(M[i][j])), None)
            if offender is None:
                break
            M[k] = [x + y for x, y in zip(M[k], M[offender])]
        M[k][k] = M[k][k].monic()

    factors = [M[k][k] for k in range(n)]
    logger.debug("Invariant factors: %s", ", ".join(str(f) for f in factors))
    return factors


def similar_over_rationals(A: RatMatrix, B: RatMatrix) -> bool:
    """Similarity test through equality of invariant factors."""
    _require_square(A, "similar_over_rationals")
    _require_square(B, "similar_over_rationals")
    if A.shape != B.shape:
        raise DimensionError(f"Cannot compare a {A.rows}x{A.rows} matrix with a {B.rows}x{B.rows} matrix")
    if charpoly(A) != charpoly(B):
        return False
    return invariant_factors(A) == invariant_factors(B)


def similarity_rank_profile(A: RatMatrix, q: RatPoly, k: int) -> List[int]:
    """Ranks of q(A)^j for j = 1..k."""
    base = q(A)
    profile = []
    power = base
    for j in range(1, k + 1):
        profile.append(rank(power))
        if j < k:
            power = power @ base
    return profile


if __name__ == "__main__":
    logging.basicConfig(level=logging.DEBUG)

    P = RatMatrix([["7/10", "1/5", "1/10"], ["1/5", "7/10", "1/10"], ["1/5", "1/5", "3/5"]])
    print(f"P =\n{P}")
    print(f"charpoly: {charpoly(P)}")
    print(f"rank: {rank(P)}  det: {determinant(P)}")
    print(f"irreducible: {is_irreducible(P)}  primitive: {is_primitive(P)}")
    print(f"invariant factors: {[str(f) for f in invariant_factors(P)]}")

    J = RatMatrix.full(3, 3, "1/3")
    print(f"nonzero charpoly of J_3: {nonzero_charpoly(J)}")
