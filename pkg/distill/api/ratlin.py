"""
Exact rational scalars, vectors, matrices and univariate polynomials.

Rationals are `fractions.Fraction`, which keeps every value reduced with a
positive denominator. Vectors are tuples of rationals, matrices are dense and
immutable, polynomials store their coefficients lowest degree first.
"""

from fractions import Fraction
from itertools import zip_longest
from math import gcd, lcm
from typing import Any, Iterable, List, Optional, Sequence, Tuple, Union
from sympy import QQ, Poly, Rational as SympyRational, Symbol

Rational = Fraction
Vector = Tuple[Fraction, ...]
Scalar = Union[int, Fraction]


def rational(value: Any) -> Fraction:
    """
    Parse an int, Fraction or "p/q" string into a canonical rational
    """

    if isinstance(value, Fraction):
        return value

    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"Refusing to build a rational from {value!r}")

    if isinstance(value, SympyRational):
        return Fraction(int(value.p), int(value.q))

    if isinstance(value, str):
        value = value.strip()

    return Fraction(value)


def to_qq(value: Any) -> Any:
    c = rational(value)
    return QQ(c.numerator, c.denominator)


def vector(values: Iterable[Any]) -> Vector:
    return tuple(rational(v) for v in values)


def zero_vector(n: int) -> Vector:
    return (Fraction(0),) * n


def dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def vec_add(a: Sequence[Fraction], b: Sequence[Fraction]) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def vec_sub(a: Sequence[Fraction], b: Sequence[Fraction]) -> Vector:
    return tuple(x - y for x, y in zip(a, b))


def vec_scale(c: Scalar, a: Sequence[Fraction]) -> Vector:
    return tuple(c * x for x in a)


def inf_norm(a: Sequence[Fraction]) -> Fraction:
    return max((abs(x) for x in a), default=Fraction(0))


def sq_norm(a: Sequence[Fraction]) -> Fraction:
    return dot(a, a)


def is_zero_vector(a: Sequence[Fraction]) -> bool:
    return all(x == 0 for x in a)


def primitive(a: Sequence[Fraction]) -> Vector:
    """
    Scale a nonzero vector to coprime integer entries, first nonzero entry positive
    """

    if is_zero_vector(a):
        return tuple(Fraction(0) for _ in a)

    den = lcm(*(x.denominator for x in a))
    ints = [int(x * den) for x in a]
    content = 0
    for i in ints:
        content = gcd(content, i)

    lead = next(i for i in ints if i != 0)
    if lead < 0:
        content = -content

    return tuple(Fraction(i, content) for i in ints)


class RatMatrix:
    """
    Dense immutable matrix of rationals
    """

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Iterable[Iterable[Any]], cols: Optional[int] = None):
        grid = tuple(tuple(rational(x) for x in row) for row in entries)
        if cols is None:
            cols = len(grid[0]) if grid else 0

        for row in grid:
            if len(row) != cols:
                raise ValueError(f"Ragged matrix: expected {cols} columns, got {len(row)}")

        object.__setattr__(self, "rows", len(grid))
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", grid)

    def __setattr__(self, name: str, value: Any) -> None:
        raise AttributeError("RatMatrix is immutable")

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls(((1 if i == j else 0 for j in range(n)) for i in range(n)), n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMatrix":
        return cls(((0,) * cols for _ in range(rows)), cols)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[Any]], rows: int) -> "RatMatrix":
        return cls(((col[i] for col in columns) for i in range(rows)), len(columns))

    @classmethod
    def column_vector(cls, v: Sequence[Any]) -> "RatMatrix":
        return cls(((x,) for x in v), 1)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    @property
    def T(self) -> "RatMatrix":
        if not self.rows or not self.cols:
            return RatMatrix.zeros(self.cols, self.rows)

        return RatMatrix(zip(*self.entries), self.rows)

    def __getitem__(self, key: Tuple[int, int]) -> Fraction:
        i, j = key
        return self.entries[i][j]

    def row(self, i: int) -> Vector:
        return self.entries[i]

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.entries)

    def columns(self) -> List[Vector]:
        return [self.column(j) for j in range(self.cols)]

    def take_rows(self, indices: Iterable[int]) -> "RatMatrix":
        return RatMatrix((self.entries[i] for i in indices), self.cols)

    def take_columns(self, indices: Iterable[int]) -> "RatMatrix":
        idx = list(indices)
        return RatMatrix(((row[j] for j in idx) for row in self.entries), len(idx))

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)

    def trace(self) -> Fraction:
        return sum((self.entries[i][i] for i in range(min(self.rows, self.cols))), Fraction(0))

    def apply(self, v: Sequence[Fraction]) -> Vector:
        if len(v) != self.cols:
            raise ValueError(f"Cannot apply {self.rows}x{self.cols} matrix to length {len(v)}")

        return tuple(dot(row, v) for row in self.entries)

    def __matmul__(self, other: Union["RatMatrix", Sequence[Fraction]]) -> Any:
        if not isinstance(other, RatMatrix):
            return self.apply(other)

        if self.cols != other.rows:
            raise ValueError(f"Shape mismatch: {self.shape} @ {other.shape}")

        other_cols = other.columns()
        return RatMatrix(
            ((dot(row, col) for col in other_cols) for row in self.entries), other.cols
        )

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        if self.shape != other.shape:
            raise ValueError(f"Shape mismatch: {self.shape} + {other.shape}")

        return RatMatrix(
            (vec_add(a, b) for a, b in zip(self.entries, other.entries)), self.cols
        )

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        if self.shape != other.shape:
            raise ValueError(f"Shape mismatch: {self.shape} - {other.shape}")

        return RatMatrix(
            (vec_sub(a, b) for a, b in zip(self.entries, other.entries)), self.cols
        )

    def __neg__(self) -> "RatMatrix":
        return self.scale(-1)

    def scale(self, c: Scalar) -> "RatMatrix":
        return RatMatrix((vec_scale(c, row) for row in self.entries), self.cols)

    def __mul__(self, c: Scalar) -> "RatMatrix":
        return self.scale(c)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RatMatrix):
            return NotImplemented

        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(str(x) for x in row) + "]" for row in self.entries)
        return f"RatMatrix({self.rows}x{self.cols}: [{body}])"

    def to_strings(self) -> List[List[str]]:
        return [[str(x) for x in row] for row in self.entries]


def hstack(*blocks: RatMatrix) -> RatMatrix:
    rows = blocks[0].rows
    if any(b.rows != rows for b in blocks):
        raise ValueError("hstack needs equal row counts")

    return RatMatrix(
        (sum((b.entries[i] for b in blocks), ()) for i in range(rows)),
        sum(b.cols for b in blocks),
    )


def vstack(*blocks: RatMatrix) -> RatMatrix:
    cols = blocks[0].cols
    if any(b.cols != cols for b in blocks):
        raise ValueError("vstack needs equal column counts")

    return RatMatrix((row for b in blocks for row in b.entries), cols)


def outer(a: Sequence[Fraction], b: Sequence[Fraction]) -> RatMatrix:
    return RatMatrix(((x * y for y in b) for x in a), len(b))


#################################
#          ELIMINATION          #
#################################


def _bareiss(m: RatMatrix) -> Tuple[List[List[Fraction]], List[int]]:
    """
    Fraction-free forward elimination, leftmost pivots first
    """

    a = [list(row) for row in m.entries]
    pivots: List[int] = []
    prev = Fraction(1)
    r = 0
    for c in range(m.cols):
        if r == m.rows:
            break

        p = next((i for i in range(r, m.rows) if a[i][c] != 0), None)
        if p is None:
            continue

        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        for i in range(r + 1, m.rows):
            f = a[i][c]
            for j in range(c + 1, m.cols):
                a[i][j] = (piv * a[i][j] - f * a[r][j]) / prev
            a[i][c] = Fraction(0)

        prev = piv
        pivots.append(c)
        r += 1

    return a, pivots


def _rref(rows: List[List[Fraction]], cols: int) -> Tuple[List[List[Fraction]], List[int]]:
    a = [list(row) for row in rows]
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r == len(a):
            break

        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue

        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        a[r] = [x / piv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]

        pivots.append(c)
        r += 1

    return a, pivots


def rank(m: RatMatrix) -> int:
    return len(_bareiss(m)[1])


def column_space_basis(m: RatMatrix) -> Tuple[RatMatrix, List[int]]:
    """
    Leftmost maximal set of independent columns and their indices
    """

    pivots = _bareiss(m)[1]
    return m.take_columns(pivots), pivots


def row_space_basis(m: RatMatrix) -> RatMatrix:
    basis, _ = column_space_basis(m.T)
    return basis.T if basis.cols else RatMatrix.zeros(0, m.cols)


def kernel_basis(m: RatMatrix) -> RatMatrix:
    """
    Columns spanning {x : mx = 0}, each primitive integral
    """

    reduced, pivots = _rref([list(r) for r in m.entries], m.cols)
    free = [j for j in range(m.cols) if j not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * m.cols
        x[f] = Fraction(1)
        for i, p in enumerate(pivots):
            x[p] = -reduced[i][f]
        basis.append(primitive(x))

    return RatMatrix.from_columns(basis, m.cols)


def solve(a: RatMatrix, b: Sequence[Fraction]) -> Optional[Vector]:
    """
    Some x with ax = b (free variables set to zero), None when inconsistent
    """

    if len(b) != a.rows:
        raise ValueError(f"Right-hand side has length {len(b)}, expected {a.rows}")

    aug = [list(row) + [rational(bi)] for row, bi in zip(a.entries, b)]
    reduced, pivots = _rref(aug, a.cols + 1)
    if a.cols in pivots:
        return None

    x = [Fraction(0)] * a.cols
    for i, p in enumerate(pivots):
        x[p] = reduced[i][a.cols]

    return tuple(x)


def inverse(a: RatMatrix) -> Optional[RatMatrix]:
    if not a.is_square:
        raise ValueError(f"Cannot invert a {a.rows}x{a.cols} matrix")

    n = a.rows
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a.entries)]
    reduced, pivots = _rref(aug, n)
    if pivots != list(range(n)):
        return None

    return RatMatrix((row[n:] for row in reduced), n)


def det(rows: Sequence[Sequence[Any]], one: Any = Fraction(1)) -> Any:
    """
    Fraction-free determinant over any exact ring with exact `/`
    """

    a = [list(row) for row in rows]
    n = len(a)
    if n == 0:
        return one

    sign = 1
    prev = one
    for k in range(n - 1):
        p = next((i for i in range(k, n) if not a[i][k] == 0), None)
        if p is None:
            return one * 0

        if p != k:
            a[k], a[p] = a[p], a[k]
            sign = -sign

        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / prev

        prev = a[k][k]

    return a[n - 1][n - 1] * sign


def mat_pow(a: RatMatrix, n: int) -> RatMatrix:
    if not a.is_square:
        raise ValueError(f"Cannot raise a {a.rows}x{a.cols} matrix to a power")
    if n < 0:
        raise ValueError("Negative matrix powers are not supported")

    result = RatMatrix.identity(a.rows)
    base = a
    while n:
        if n & 1:
            result = result @ base
        n >>= 1
        if n:
            base = base @ base

    return result


def induced_inf_norm(a: RatMatrix) -> Fraction:
    return max((sum((abs(x) for x in row), Fraction(0)) for row in a.entries), default=Fraction(0))


#################################
#          POLYNOMIALS          #
#################################


class RatPoly:
    """
    Univariate polynomial with rational coefficients, constant term first.

    The zero polynomial has no coefficients and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Any] = ()):
        c = [rational(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    def __setattr__(self, name: str, value: Any) -> None:
        raise AttributeError("RatPoly is immutable")

    @classmethod
    def monomial(cls, degree: int, coeff: Any = 1) -> "RatPoly":
        return cls([0] * degree + [coeff])

    @classmethod
    def x(cls) -> "RatPoly":
        return cls.monomial(1)

    @classmethod
    def constant(cls, c: Any) -> "RatPoly":
        return cls([c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def trailing_zeros(self) -> int:
        if self.is_zero():
            return 0

        return next(i for i, c in enumerate(self.coeffs) if c != 0)

    def shift_down(self, n: int) -> "RatPoly":
        """Divide by x^n, which must divide the polynomial"""
        if any(c != 0 for c in self.coeffs[:n]):
            raise ValueError(f"x^{n} does not divide {self}")

        return RatPoly(self.coeffs[n:])

    def monic(self) -> "RatPoly":
        return self * (1 / self.leading) if self.coeffs else self

    def to_sympy(self, gen: Symbol) -> Poly:
        return Poly.from_list([to_qq(c) for c in reversed(self.coeffs)] or [QQ(0)], gen, domain=QQ)

    @classmethod
    def from_sympy(cls, p: Poly) -> "RatPoly":
        return cls(reversed(p.all_coeffs()))

    def __call__(self, x: Any) -> Any:
        result: Any = 0
        for c in reversed(self.coeffs):
            result = result * x + c

        return result

    @staticmethod
    def _coerce(other: Any) -> "RatPoly":
        return other if isinstance(other, RatPoly) else RatPoly([other])

    def __add__(self, other: Any) -> "RatPoly":
        o = self._coerce(other)
        return RatPoly(a + b for a, b in zip_longest(self.coeffs, o.coeffs, fillvalue=0))

    __radd__ = __add__

    def __neg__(self) -> "RatPoly":
        return RatPoly(-c for c in self.coeffs)

    def __sub__(self, other: Any) -> "RatPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other: Any) -> "RatPoly":
        return self._coerce(other) - self

    def __mul__(self, other: Any) -> "RatPoly":
        o = self._coerce(other)
        if self.is_zero() or o.is_zero():
            return RatPoly()

        result = [Fraction(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(o.coeffs):
                result[i + j] += a * b

        return RatPoly(result)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "RatPoly":
        if n < 0:
            raise ValueError("Cannot invert a polynomial.")

        result = RatPoly([1])
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base

        return result

    def __divmod__(self, d: Any) -> Tuple["RatPoly", "RatPoly"]:
        d = self._coerce(d)
        if d.is_zero():
            raise ZeroDivisionError("Polynomial division by zero")

        q = [Fraction(0)] * max(len(self.coeffs) - len(d.coeffs) + 1, 0)
        r = list(self.coeffs)
        lead = d.leading
        for shift in range(len(q) - 1, -1, -1):
            t = r[shift + d.degree] / lead
            q[shift] = t
            if t:
                for i, c in enumerate(d.coeffs):
                    r[shift + i] -= t * c

        return RatPoly(q), RatPoly(r)

    def __truediv__(self, d: Any) -> "RatPoly":
        """Exact division, raises when d does not divide"""
        quo, rem = divmod(self, d)
        if not rem.is_zero():
            raise ValueError(f"{self} is not divisible by {d}")

        return quo

    def __mod__(self, d: Any) -> "RatPoly":
        return divmod(self, d)[1]

    def divides(self, other: "RatPoly") -> bool:
        return (other % self).is_zero()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = RatPoly([other])
        if not isinstance(other, RatPoly):
            return NotImplemented

        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"RatPoly('{self}')"

    def __str__(self) -> str:
        if self.is_zero():
            return "0"

        parts: List[str] = []
        for i, c in reversed(list(enumerate(self.coeffs))):
            if c == 0:
                continue

            sign = " + " if (c > 0 and parts) else " - " if (c < 0 and parts) else "" if c > 0 else "-"
            term = "" if i == 0 else "x" if i == 1 else f"x^{i}"
            coeff = str(abs(c)) if (abs(c) != 1 or not term) else ""
            if coeff and term and abs(c).denominator != 1:
                coeff = f"({coeff})"
            parts.append(sign + coeff + term)

        return "".join(parts)

    def to_strings(self) -> List[str]:
        return [str(c) for c in self.coeffs]


def charpoly(a: RatMatrix) -> RatPoly:
    """
    det(xI - a) by the Faddeev-LeVerrier recurrence
    """

    if not a.is_square:
        raise ValueError(f"No characteristic polynomial for a {a.rows}x{a.cols} matrix")

    n = a.rows
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    identity = RatMatrix.identity(n)
    mk = RatMatrix.zeros(n, n)
    for k in range(1, n + 1):
        mk = a @ mk + identity.scale(coeffs[n - k + 1])
        coeffs[n - k] = -(a @ mk).trace() / k

    return RatPoly(coeffs)


def charpoly_by_det(a: RatMatrix) -> RatPoly:
    """
    det(xI - a) by fraction-free elimination over Q[x]
    """

    x = RatPoly.x()
    rows = [
        [(x if i == j else RatPoly()) - a[i, j] for j in range(a.cols)] for i in range(a.rows)
    ]
    return det(rows, RatPoly([1]))


def poly_at_matrix(p: RatPoly, a: RatMatrix) -> RatMatrix:
    """
    Horner evaluation of p at a square matrix
    """

    n = a.rows
    identity = RatMatrix.identity(n)
    result = RatMatrix.zeros(n, n)
    for c in reversed(p.coeffs):
        result = result @ a + identity.scale(c)

    return result
