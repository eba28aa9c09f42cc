"""Commutative polynomials in two variables over Q[a].

Used both for relations f(X, Y) and for the weight-homogeneous parts of
operators, where the variables are read as (x, y) with y standing for D.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterator, Mapping

from weylalg.scalars import ONE, ZERO, ParamPoly, ParamRat, q, rat_str


def _pp(c) -> ParamPoly:
    if isinstance(c, ParamPoly):
        return c
    if isinstance(c, ParamRat):
        return c.as_poly()
    return ParamPoly.const(c)


class BiPoly:
    __slots__ = ("terms",)

    def __init__(self, terms: Mapping | None = None):
        clean = {}
        for (i, j), c in (terms or {}).items():
            if i < 0 or j < 0:
                raise ValueError(f"negative exponent ({i},{j})")
            c = _pp(c)
            if c:
                clean[(int(i), int(j))] = c
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("BiPoly is immutable")

    def __reduce__(self):
        return (BiPoly._make, (self.terms,))

    @classmethod
    def _make(cls, terms: dict) -> "BiPoly":
        obj = object.__new__(cls)
        object.__setattr__(obj, "terms", terms)
        return obj

    @classmethod
    def monomial(cls, i: int, j: int, c=1) -> "BiPoly":
        return cls({(i, j): c})

    @classmethod
    def const(cls, c) -> "BiPoly":
        return cls({(0, 0): c})

    @classmethod
    def X(cls) -> "BiPoly":
        return cls({(1, 0): 1})

    @classmethod
    def Y(cls) -> "BiPoly":
        return cls({(0, 1): 1})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def support(self) -> frozenset:
        return frozenset(self.terms)

    def items(self) -> Iterator:
        return iter(sorted(self.terms.items()))

    def coeff(self, i: int, j: int) -> ParamPoly:
        return self.terms.get((i, j), ZERO)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def total_degree(self) -> int:
        return max((i + j for i, j in self.terms), default=-1)

    def __eq__(self, other) -> bool:
        if isinstance(other, BiPoly):
            return self.terms == other.terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def _coerce(self, other) -> "BiPoly | None":
        if isinstance(other, BiPoly):
            return other
        if isinstance(other, (int, Fraction, ParamPoly)):
            return BiPoly.const(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for m, c in o.terms.items():
            s = out.get(m, ZERO) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return BiPoly._make(out)

    __radd__ = __add__

    def __neg__(self) -> "BiPoly":
        return BiPoly._make({m: -c for m, c in self.terms.items()})

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
        if isinstance(other, (int, Fraction, ParamPoly)):
            c = _pp(other)
            if not c:
                return BiPoly._make({})
            return BiPoly._make({m: v * c for m, v in self.terms.items()})
        if not isinstance(other, BiPoly):
            return NotImplemented
        out: dict = {}
        for (i, j), a in self.terms.items():
            for (k, l), b in other.terms.items():
                key = (i + k, j + l)
                out[key] = out.get(key, ZERO) + a * b
        return BiPoly._make({m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "BiPoly":
        if n < 0:
            raise ValueError("negative power")
        result = BiPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def diff_x(self) -> "BiPoly":
        return BiPoly._make({(i - 1, j): c * i for (i, j), c in self.terms.items() if i})

    def diff_y(self) -> "BiPoly":
        return BiPoly._make({(i, j - 1): c * j for (i, j), c in self.terms.items() if j})

    def weighted_degrees(self, sigma, rho) -> set:
        return {q(sigma * i + rho * j) for i, j in self.terms}

    def eval_alpha(self, r) -> "BiPoly":
        return BiPoly({m: c.eval(r) for m, c in self.terms.items()})

    def to_json(self) -> dict:
        return {"terms": [{"i": i, "j": j, "coeff": c.to_json()} for (i, j), c in self.items()]}

    @classmethod
    def from_json(cls, data: Mapping) -> "BiPoly":
        return cls({(t["i"], t["j"]): ParamPoly.from_json(t["coeff"]) for t in data["terms"]})

    def render(self, xvar: str = "x", yvar: str = "y") -> str:
        """Text form, highest y-degree first, then highest x-degree."""
        keys = sorted(self.terms, key=lambda m: (m[1], m[0]), reverse=True)
        return render_terms([(self.terms[k], _mono(k, xvar, yvar)) for k in keys])

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"BiPoly({self})"


def _mono(m: tuple[int, int], xvar: str, yvar: str) -> str:
    i, j = m
    parts = []
    if i:
        parts.append(xvar if i == 1 else f"{xvar}^{i}")
    if j:
        parts.append(yvar if j == 1 else f"{yvar}^{j}")
    return "*".join(parts)


def render_terms(terms: list[tuple[ParamPoly, str]]) -> str:
    """Join (coefficient, monomial-text) pairs into a signed sum.

    Constant coefficients carry their sign into the separator; coefficients
    depending on ``a`` are parenthesized.
    """
    if not terms:
        return "0"
    out = []
    for n, (c, mono) in enumerate(terms):
        if c.is_const():
            v = c.const_value()
            neg = v < 0
            mag = -v if neg else v
            if not mono:
                body = rat_str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{rat_str(mag)}*{mono}"
        else:
            neg = False
            body = f"({c})" + (f"*{mono}" if mono else "")
        if n == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)
