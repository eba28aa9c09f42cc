"""Exact scalars: rationals, polynomials in the central parameter ``a`` and
their fractions, plus reduced-echelon linear algebra over either field.

Rationals are plain ``int`` or ``fractions.Fraction`` values.  Integral
fractions are collapsed to ``int`` so that the (very common) integer
arithmetic in operator products stays on the fast path.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Sequence

from weylalg.errors import InexactDivisionError, WeylError

Rational = int | Fraction


def q(value) -> Rational:
    """Coerce ``value`` to a canonical exact rational (int when integral)."""
    if isinstance(value, int) and not isinstance(value, bool):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else value
    if isinstance(value, _RationalABC):
        return q(Fraction(value.numerator, value.denominator))
    if isinstance(value, str):
        return q(Fraction(value.strip()))
    raise TypeError(f"not an exact rational: {value!r}")


def qdiv(a: Rational, b: Rational) -> Rational:
    if b == 0:
        raise ZeroDivisionError("division by zero")
    return q(Fraction(a) / b)


def rat_str(value: Rational) -> str:
    value = q(value)
    if isinstance(value, int):
        return str(value)
    return f"{value.numerator}/{value.denominator}"


def _strip(cs: list) -> tuple:
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


class ParamPoly:
    """Dense polynomial in ``a`` with exact rational coefficients.

    ``coeffs[d]`` is the coefficient of ``a**d``; the highest stored
    coefficient is nonzero and the empty tuple is zero.  Instances are
    immutable and hashable.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        if isinstance(coeffs, (int, Fraction)):
            coeffs = (coeffs,)
        object.__setattr__(self, "coeffs", _strip([q(c) for c in coeffs]))

    def __setattr__(self, name, value):
        raise AttributeError("ParamPoly is immutable")

    def __reduce__(self):
        return (ParamPoly._make, (self.coeffs,))

    @classmethod
    def _make(cls, coeffs: tuple) -> "ParamPoly":
        # trusted constructor: coeffs already canonical and stripped
        obj = object.__new__(cls)
        object.__setattr__(obj, "coeffs", coeffs)
        return obj

    @classmethod
    def const(cls, c) -> "ParamPoly":
        c = q(c)
        return cls._make((c,) if c != 0 else ())

    @classmethod
    def alpha(cls) -> "ParamPoly":
        return cls._make((0, 1))

    # -- inspection -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def is_const(self) -> bool:
        return len(self.coeffs) <= 1

    def const_value(self) -> Rational:
        if len(self.coeffs) > 1:
            raise ValueError(f"{self} depends on a")
        return self.coeffs[0] if self.coeffs else 0

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def lead(self) -> Rational:
        return self.coeffs[-1] if self.coeffs else 0

    def __eq__(self, other) -> bool:
        if isinstance(other, ParamPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return not self.coeffs
            return len(self.coeffs) == 1 and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self) -> int:
        if len(self.coeffs) == 1:
            return hash(self.coeffs[0])
        if not self.coeffs:
            return 0
        return hash(self.coeffs)

    # -- ring operations --------------------------------------------------
    @staticmethod
    def _coerce(other) -> "ParamPoly | None":
        if isinstance(other, ParamPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return ParamPoly.const(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        if not b:
            return self
        if not a:
            return o
        if len(a) < len(b):
            a, b = b, a
        cs = list(a)
        for d, c in enumerate(b):
            cs[d] = q(cs[d] + c)
        return ParamPoly._make(_strip(cs))

    __radd__ = __add__

    def __neg__(self) -> "ParamPoly":
        return ParamPoly._make(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return ParamPoly._make(())
            return ParamPoly._make(tuple(q(c * other) for c in self.coeffs))
        if not isinstance(other, ParamPoly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return ParamPoly._make(())
        if len(a) == 1:
            c = a[0]
            return ParamPoly._make(tuple(q(c * x) for x in b))
        if len(b) == 1:
            c = b[0]
            return ParamPoly._make(tuple(q(x * c) for x in a))
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                out[i + j] += x * y
        return ParamPoly._make(_strip([q(c) for c in out]))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "ParamPoly":
        if n < 0:
            raise ValueError("negative power")
        result = ParamPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale_div(self, c: Rational) -> "ParamPoly":
        """Divide every coefficient by the nonzero rational ``c``."""
        return ParamPoly._make(tuple(qdiv(x, c) for x in self.coeffs))

    def divmod(self, other: "ParamPoly") -> tuple["ParamPoly", "ParamPoly"]:
        other = self._coerce(other)
        if other is None or not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        lb = other.lead()
        if len(rem) - 1 < db:
            return ParamPoly._make(()), self
        quo = [0] * (len(rem) - db)
        for k in range(len(rem) - 1 - db, -1, -1):
            c = qdiv(rem[k + db], lb)
            quo[k] = c
            if c != 0:
                for j, y in enumerate(other.coeffs):
                    rem[k + j] = q(rem[k + j] - c * y)
        return ParamPoly(quo), ParamPoly(rem[:db])

    def exact_div(self, other) -> "ParamPoly":
        quo, rem = self.divmod(other)
        if rem:
            raise InexactDivisionError(f"({self}) is not divisible by ({other})")
        return quo

    def monic(self) -> "ParamPoly":
        if not self.coeffs:
            return self
        return self.scale_div(self.lead())

    def gcd(self, other) -> "ParamPoly":
        """Monic greatest common divisor (zero when both inputs are zero)."""
        a, b = self, self._coerce(other)
        while b:
            a, b = b, a.divmod(b)[1]
        return a.monic()

    def eval(self, r) -> Rational:
        r = q(r)
        acc: Rational = 0
        for c in reversed(self.coeffs):
            acc = q(acc * r + c)
        return acc

    # -- serialization ----------------------------------------------------
    def to_json(self) -> list:
        out = []
        for c in self.coeffs:
            c = Fraction(c)
            out.append([str(c.numerator), str(c.denominator)])
        return out

    @classmethod
    def from_json(cls, data: Sequence) -> "ParamPoly":
        return cls(Fraction(int(n), int(d)) for n, d in data)

    def __str__(self) -> str:
        return poly_str(self.coeffs, "a")

    def __repr__(self) -> str:
        return f"ParamPoly({self})"


def poly_str(coeffs: Sequence[Rational], var: str) -> str:
    """Render a dense univariate polynomial, highest degree first."""
    parts = []
    for d in range(len(coeffs) - 1, -1, -1):
        c = coeffs[d]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = -c if c < 0 else c
        if d == 0:
            body = rat_str(mag)
        else:
            mono = var if d == 1 else f"{var}^{d}"
            body = mono if mag == 1 else f"{rat_str(mag)}*{mono}"
        parts.append((sign, body))
    if not parts:
        return "0"
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


ZERO = ParamPoly._make(())
ONE = ParamPoly._make((1,))


class ParamRat:
    """Element of Q(a) as a reduced fraction with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = ParamPoly._coerce(num)
        den = ONE if den is None else ParamPoly._coerce(den)
        if num is None or den is None:
            raise TypeError("ParamRat expects ParamPoly or rational parts")
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            num, den = ZERO, ONE
        elif den.is_const():
            c = den.coeffs[0]
            if c != 1:
                num = num.scale_div(c)
            den = ONE
        else:
            g = num.gcd(den)
            if g.degree > 0:
                num = num.exact_div(g)
                den = den.exact_div(g)
            lc = den.lead()
            if lc != 1:
                num = num.scale_div(lc)
                den = den.scale_div(lc)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("ParamRat is immutable")

    def __reduce__(self):
        return (ParamRat._make, (self.num, self.den))

    @classmethod
    def _make(cls, num: ParamPoly, den: ParamPoly) -> "ParamRat":
        obj = object.__new__(cls)
        object.__setattr__(obj, "num", num)
        object.__setattr__(obj, "den", den)
        return obj

    @staticmethod
    def _coerce(other) -> "ParamRat | None":
        if isinstance(other, ParamRat):
            return other
        if isinstance(other, ParamPoly):
            return ParamRat._make(other, ONE)
        if isinstance(other, (int, Fraction)):
            return ParamRat._make(ParamPoly.const(other), ONE)
        return None

    def __bool__(self) -> bool:
        return bool(self.num)

    def is_zero(self) -> bool:
        return not self.num

    def is_poly(self) -> bool:
        return self.den == ONE

    def is_const(self) -> bool:
        return self.den == ONE and self.num.is_const()

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self) -> int:
        if self.den == ONE:
            return hash(self.num)
        return hash((self.num, self.den))

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == ONE and o.den == ONE:
            return ParamRat._make(self.num + o.num, ONE)
        if self.den == o.den:
            return ParamRat(self.num + o.num, self.den)
        return ParamRat(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> "ParamRat":
        return ParamRat._make(-self.num, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == ONE and o.den == ONE:
            return ParamRat._make(self.num * o.num, ONE)
        return ParamRat(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "ParamRat":
        if not self.num:
            raise ZeroDivisionError("inverse of zero")
        return ParamRat(self.den, self.num)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int) -> "ParamRat":
        if n < 0:
            return self.inverse() ** (-n)
        return ParamRat._make(self.num ** n, self.den ** n)

    def gcd(self, other) -> "ParamRat":
        # in a field every nonzero element is a unit
        o = self._coerce(other)
        return ParamRat._make(ONE if (self or o) else ZERO, ONE)

    def eval(self, r) -> Rational:
        d = self.den.eval(r)
        if d == 0:
            raise ZeroDivisionError(f"denominator {self.den} vanishes at a={r}")
        return qdiv(self.num.eval(r), d)

    def as_poly(self) -> ParamPoly:
        if self.den != ONE:
            raise InexactDivisionError(f"{self} is not a polynomial in a")
        return self.num

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    def __str__(self) -> str:
        if self.den == ONE:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self) -> str:
        return f"ParamRat({self})"


# ---------------------------------------------------------------------------
# linear algebra over Q or Q(a)


def _field_matrix(M: Sequence[Sequence]) -> list[list]:
    """Lift entries to a common field: Fraction if all rational, else ParamRat."""
    rows = [list(r) for r in M]
    symbolic = any(isinstance(x, (ParamPoly, ParamRat)) and not _is_rational_like(x)
                   for r in rows for x in r)
    if symbolic:
        return [[ParamRat._coerce(x) for x in r] for r in rows]
    return [[Fraction(_as_rational(x)) for x in r] for r in rows]


def _is_rational_like(x) -> bool:
    if isinstance(x, ParamPoly):
        return x.is_const()
    if isinstance(x, ParamRat):
        return x.is_const()
    return True


def _as_rational(x) -> Rational:
    if isinstance(x, ParamPoly):
        return x.const_value()
    if isinstance(x, ParamRat):
        return x.num.const_value()
    return q(x)


def rref(M: Sequence[Sequence]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form and pivot columns.

    Pivoting takes the first nonzero entry by row order in each column, so
    the result is deterministic.
    """
    A = _field_matrix(M)
    if not A:
        return A, []
    nrows, ncols = len(A), len(A[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if A[i][c]), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv if x else x for x in A[r]]
        for i in range(nrows):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [x - f * y if y else x for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    return A, pivots


def rank(M: Sequence[Sequence]) -> int:
    return len(rref(M)[1])


def nullspace(M: Sequence[Sequence], ncols: int | None = None) -> list[list]:
    """Basis of the right kernel of ``M``, one vector per free column.

    Free columns are taken in ascending order; each vector is scaled so its
    first nonzero entry is 1.  ``ncols`` is needed only when ``M`` has no rows.
    """
    R, pivots = rref(M)
    if R:
        ncols = len(R[0])
    elif ncols is None:
        raise WeylError("nullspace of an empty matrix needs ncols")
    symbolic = bool(R) and isinstance(R[0][0], ParamRat)
    one = ParamRat._make(ONE, ONE) if symbolic else Fraction(1)
    zero = ParamRat._make(ZERO, ONE) if symbolic else Fraction(0)
    pivot_set = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivot_set:
            continue
        v = [zero] * ncols
        v[f] = one
        for row, p in enumerate(pivots):
            v[p] = -R[row][f]
        # scale so the first nonzero entry is 1
        lead = next(x for x in v if x)
        if lead != one:
            inv = one / lead
            v = [x * inv if x else x for x in v]
        basis.append(v)
    return basis


def mat_vec(M: Sequence[Sequence], v: Sequence) -> list:
    out = []
    for row in M:
        acc = 0
        for x, y in zip(row, v):
            if x and y:
                acc = acc + x * y
        out.append(acc)
    return out
