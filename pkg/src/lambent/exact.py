"""Exact arithmetic in Q(sqrt d) and small exact matrices.

Rationals are :class:`fractions.Fraction`.  A :class:`QuadExt` is ``a + b*sqrt(d)``
with rational ``a, b`` and ``d`` a runtime tag (3 or 5).  Plain ints and
Fractions combine with a QuadExt of any ``d``; two QuadExts only combine when
their tags agree.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Sequence

SUPPORTED_D = (3, 5)


class DiscriminantMismatch(ValueError):
    pass


class SingularMatrix(ZeroDivisionError):
    pass


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, _RationalABC)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


class QuadExt:
    """An element ``a + b*sqrt(d)`` of Q(sqrt d)."""

    __slots__ = ("a", "b", "d", "_hash")

    def __init__(self, a=0, b=0, d: int = 5):
        if d not in SUPPORTED_D:
            raise ValueError(f"unsupported discriminant {d}; expected one of {SUPPORTED_D}")
        self.a = _frac(a)
        self.b = _frac(b)
        self.d = d
        self._hash = None

    # -- construction -----------------------------------------------------
    @classmethod
    def coerce(cls, x, d: int) -> "QuadExt":
        if isinstance(x, QuadExt):
            if x.d != d:
                if x.b == 0:
                    return cls(x.a, 0, d)
                raise DiscriminantMismatch(f"cannot use element of Q(sqrt {x.d}) in Q(sqrt {d})")
            return x
        return cls(_frac(x), 0, d)

    @classmethod
    def sqrt(cls, d: int) -> "QuadExt":
        return cls(0, 1, d)

    @classmethod
    def phi(cls) -> "QuadExt":
        """The golden ratio (1 + sqrt 5)/2."""
        return cls(Fraction(1, 2), Fraction(1, 2), 5)

    @classmethod
    def _raw(cls, a: Fraction, b: Fraction, d: int) -> "QuadExt":
        # trusted constructor for arithmetic results
        x = object.__new__(cls)
        x.a = a
        x.b = b
        x.d = d
        x._hash = None
        return x

    def retag(self, d: int) -> "QuadExt":
        """Move a rational element into Q(sqrt d); irrational elements must already live there."""
        return QuadExt.coerce(self, d)

    # -- predicates -------------------------------------------------------
    def is_rational(self) -> bool:
        return self.b == 0

    def __bool__(self) -> bool:
        return bool(self.a) or bool(self.b)

    def __eq__(self, other) -> bool:
        if isinstance(other, QuadExt):
            if self.d != other.d:
                return self.b == 0 and other.b == 0 and self.a == other.a
            return self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.a, self.b)) if self.b else hash(self.a)
        return self._hash

    # -- arithmetic -------------------------------------------------------
    def _other(self, other) -> "QuadExt | None":
        if isinstance(other, QuadExt):
            if other.d != self.d:
                raise DiscriminantMismatch(f"Q(sqrt {self.d}) vs Q(sqrt {other.d})")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadExt(other, 0, self.d)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return QuadExt._raw(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt._raw(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return QuadExt._raw(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        a, b, c, e = self.a, self.b, o.a, o.b
        if not b and not e:
            return QuadExt._raw(a * c, b, self.d)
        return QuadExt._raw(a * c + self.d * b * e, a * e + b * c, self.d)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        """Field norm a^2 - d b^2."""
        return self.a * self.a - self.d * self.b * self.b

    def inverse(self) -> "QuadExt":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt d)")
        return QuadExt._raw(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return QuadExt.coerce(other, self.d) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = QuadExt(1, 0, self.d)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- structure --------------------------------------------------------
    def conj(self) -> "QuadExt":
        return QuadExt._raw(self.a, -self.b, self.d)

    def sign(self) -> int:
        return quad_sign(self)

    def __lt__(self, other):
        return quad_sign(self - other) < 0

    def __le__(self, other):
        return quad_sign(self - other) <= 0

    def __gt__(self, other):
        return quad_sign(self - other) > 0

    def __ge__(self, other):
        return quad_sign(self - other) >= 0

    def __abs__(self):
        return -self if quad_sign(self) < 0 else self

    def __float__(self) -> float:
        if not self.b:
            return float(self.a)
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def sort_key(self) -> tuple[Fraction, Fraction]:
        return (self.a, self.b)

    def __repr__(self) -> str:
        return f"QuadExt({self.a}, {self.b}, d={self.d})"

    def __str__(self) -> str:
        return format_quad(self)


def quad_sign(x: QuadExt) -> int:
    """Exact sign of ``a + b*sqrt(d)`` (no floating point)."""
    sa = (x.a > 0) - (x.a < 0)
    sb = (x.b > 0) - (x.b < 0)
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    # opposite signs: compare a^2 with d b^2
    lhs = x.a * x.a
    rhs = x.d * x.b * x.b
    if lhs == rhs:
        return 0
    return sa if lhs > rhs else sb


def galois_conj(x: QuadExt) -> QuadExt:
    return x.conj()


def quad_arith(x: QuadExt, y: QuadExt, op: str) -> QuadExt:
    if x.d != y.d:
        raise DiscriminantMismatch(f"Q(sqrt {x.d}) vs Q(sqrt {y.d})")
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown op {op!r}")


def format_frac(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_quad(x: QuadExt) -> str:
    if not x.b:
        return format_frac(x.a)
    root = f"sqrt{x.d}"
    if x.b == 1:
        irr = root
    elif x.b == -1:
        irr = "-" + root
    elif x.b.denominator == 1:
        irr = f"{x.b.numerator}*{root}"
    elif abs(x.b.numerator) == 1:
        irr = f"{'-' if x.b < 0 else ''}{root}/{x.b.denominator}"
    else:
        irr = f"{x.b.numerator}*{root}/{x.b.denominator}"
    if not x.a:
        return irr
    sep = " - " if irr.startswith("-") else " + "
    return f"({format_frac(x.a)}{sep}{irr.lstrip('-')})"


# ---------------------------------------------------------------------------
# vectors and matrices
# ---------------------------------------------------------------------------


class ExactVector(tuple):
    """Immutable vector of QuadExt entries sharing one discriminant."""

    __slots__ = ()

    def __new__(cls, entries: Iterable, d: int = 5):
        return super().__new__(cls, (QuadExt.coerce(e, d) for e in entries))

    @property
    def d(self) -> int:
        return self[0].d

    def dot(self, other: Sequence[QuadExt]) -> QuadExt:
        total = QuadExt(0, 0, self.d)
        for u, v in zip(self, other, strict=True):
            total = total + u * v
        return total

    def norm2(self) -> QuadExt:
        return self.dot(self)

    def scale(self, c) -> "ExactVector":
        return ExactVector((c * e for e in self), self.d)

    def __add__(self, other):
        return ExactVector((u + v for u, v in zip(self, other, strict=True)), self.d)

    def __sub__(self, other):
        return ExactVector((u - v for u, v in zip(self, other, strict=True)), self.d)

    def __neg__(self):
        return ExactVector((-u for u in self), self.d)

    def to_floats(self) -> tuple[float, ...]:
        return tuple(float(e) for e in self)


class ExactMatrix:
    """Square matrix over Q(sqrt d), n in {2, 3}."""

    __slots__ = ("rows", "d", "_hash")

    def __init__(self, rows: Iterable[Iterable], d: int = 5):
        rows = tuple(tuple(QuadExt.coerce(e, d) for e in r) for r in rows)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        self.rows = rows
        self.d = d
        self._hash = None

    @classmethod
    def identity(cls, n: int, d: int = 5) -> "ExactMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], d)

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def row(self, i: int) -> ExactVector:
        return ExactVector(self.rows[i], self.d)

    def col(self, j: int) -> ExactVector:
        return ExactVector((r[j] for r in self.rows), self.d)

    def __eq__(self, other) -> bool:
        return isinstance(other, ExactMatrix) and self.rows == other.rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.rows)
        return self._hash

    def __matmul__(self, other):
        if isinstance(other, ExactMatrix):
            if other.n != self.n:
                raise ValueError("dimension mismatch")
            if other.d != self.d:
                raise DiscriminantMismatch(f"Q(sqrt {self.d}) vs Q(sqrt {other.d})")
            cols = [other.col(j) for j in range(self.n)]
            return ExactMatrix([[self.row(i).dot(c) for c in cols] for i in range(self.n)], self.d)
        vec = ExactVector(other, self.d)
        if len(vec) != self.n:
            raise ValueError("dimension mismatch")
        return ExactVector((self.row(i).dot(vec) for i in range(self.n)), self.d)

    def apply(self, v: Sequence) -> ExactVector:
        return self @ v

    @property
    def T(self) -> "ExactMatrix":
        return ExactMatrix(zip(*self.rows), self.d)

    def transpose(self) -> "ExactMatrix":
        return self.T

    def det(self) -> QuadExt:
        m = self.rows
        if self.n == 2:
            return m[0][0] * m[1][1] - m[0][1] * m[1][0]
        if self.n == 3:
            return (
                m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
            )
        raise ValueError("only 2x2 and 3x3 matrices are supported")

    def inverse(self) -> "ExactMatrix":
        if self.is_orthogonal():
            return self.T
        det = self.det()
        if not det:
            raise SingularMatrix("matrix is singular")
        m = self.rows
        if self.n == 2:
            adj = [[m[1][1], -m[0][1]], [-m[1][0], m[0][0]]]
        else:
            adj = [[None] * 3 for _ in range(3)]
            for i in range(3):
                for j in range(3):
                    r = [k for k in range(3) if k != j]
                    c = [k for k in range(3) if k != i]
                    minor = m[r[0]][c[0]] * m[r[1]][c[1]] - m[r[0]][c[1]] * m[r[1]][c[0]]
                    adj[i][j] = minor if (i + j) % 2 == 0 else -minor
        inv_det = det.inverse()
        return ExactMatrix([[e * inv_det for e in r] for r in adj], self.d)

    def __pow__(self, k: int) -> "ExactMatrix":
        if k < 0:
            return self.inverse() ** (-k)
        result = ExactMatrix.identity(self.n, self.d)
        for _ in range(k):
            result = result @ self
        return result

    def is_identity(self) -> bool:
        return self == ExactMatrix.identity(self.n, self.d)

    def is_orthogonal(self) -> bool:
        return (self @ self.T).is_identity()

    def retag(self, d: int) -> "ExactMatrix":
        return ExactMatrix(self.rows, d)

    def to_floats(self) -> list[list[float]]:
        return [[float(e) for e in r] for r in self.rows]

    def __repr__(self) -> str:
        body = "; ".join(" ".join(format_quad(e) for e in r) for r in self.rows)
        return f"ExactMatrix([{body}], d={self.d})"


def mat_ops(A: ExactMatrix, B=None, op: str = "mul"):
    if op == "mul":
        return A @ B
    if op == "transpose":
        return A.T
    if op == "inverse":
        return A.inverse()
    if op == "apply_to_vector":
        return A @ B
    raise ValueError(f"unknown op {op!r}")


class InconsistentSystem(ValueError):
    pass


def solve_linear(rows: Sequence[Sequence[QuadExt]], rhs: Sequence[QuadExt], d: int):
    """Solve ``rows @ x = rhs`` exactly by Gauss-Jordan elimination.

    Returns ``(particular, nullspace, rank)``: a particular solution (free
    variables set to zero) and a basis of the homogeneous solutions.
    """
    zero = QuadExt(0, 0, d)
    ncols = len(rows[0]) if rows else 0
    aug = [[QuadExt.coerce(v, d) for v in r] + [QuadExt.coerce(b, d)] for r, b in zip(rows, rhs, strict=True)]
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(aug)) if aug[i][col]), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = aug[r][col].inverse()
        aug[r] = [v * inv for v in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][col]:
                f = aug[i][col]
                aug[i] = [v - f * w for v, w in zip(aug[i], aug[r])]
        pivots.append(col)
        r += 1
        if r == len(aug):
            break
    for i in range(r, len(aug)):
        if aug[i][ncols]:
            raise InconsistentSystem("linear system has no solution")
    particular = [zero] * ncols
    for i, col in enumerate(pivots):
        particular[col] = aug[i][ncols]
    free = [c for c in range(ncols) if c not in pivots]
    nullspace = []
    for fc in free:
        v = [zero] * ncols
        v[fc] = QuadExt(1, 0, d)
        for i, col in enumerate(pivots):
            v[col] = -aug[i][fc]
        nullspace.append(tuple(v))
    return tuple(particular), nullspace, len(pivots)
