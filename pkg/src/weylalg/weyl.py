"""Normal-form arithmetic in the first Weyl algebra.

An operator is stored as ``{(i, j): c}`` meaning the sum of ``c * x^i D^j``
with every ``x`` to the left of every ``D`` and ``D x - x D = 1``.
Coefficients are ``ParamPoly`` values (polynomials in the central ``a``).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Iterable, Mapping

from weylalg.bivariate import BiPoly, render_terms
from weylalg.errors import ZeroOperatorError
from weylalg.scalars import ONE, ZERO, ParamPoly, ParamRat, q


@lru_cache(maxsize=None)
def reorder_table(j: int, i: int) -> tuple[tuple[int, int], ...]:
    """Pairs ``(k, w)`` with ``D^j x^i = sum w * x^(i-k) D^(j-k)``."""
    return tuple((k, factorial(k) * comb(j, k) * comb(i, k)) for k in range(min(i, j) + 1))


def _coerce_coeff(c) -> ParamPoly:
    if isinstance(c, ParamPoly):
        return c
    if isinstance(c, ParamRat):
        return c.as_poly()
    return ParamPoly.const(c)


class WeylOp:
    __slots__ = ("terms", "_key")

    def __init__(self, terms: Mapping | None = None):
        clean = {}
        for (i, j), c in (terms or {}).items():
            if i < 0 or j < 0:
                raise ValueError(f"negative exponent ({i},{j})")
            c = _coerce_coeff(c)
            if c:
                clean[(int(i), int(j))] = c
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_key", None)

    def __setattr__(self, name, value):
        raise AttributeError("WeylOp is immutable")

    def __reduce__(self):
        return (WeylOp._make, (self.terms,))

    @classmethod
    def _make(cls, terms: dict) -> "WeylOp":
        obj = object.__new__(cls)
        object.__setattr__(obj, "terms", terms)
        object.__setattr__(obj, "_key", None)
        return obj

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls) -> "WeylOp":
        return cls._make({})

    @classmethod
    def const(cls, c) -> "WeylOp":
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, i: int, j: int, c=1) -> "WeylOp":
        return cls({(i, j): c})

    @classmethod
    def x(cls) -> "WeylOp":
        return cls._make({(1, 0): ONE})

    @classmethod
    def d(cls) -> "WeylOp":
        return cls._make({(0, 1): ONE})

    @classmethod
    def alpha(cls) -> "WeylOp":
        return cls._make({(0, 0): ParamPoly.alpha()})

    @classmethod
    def from_bipoly(cls, f: BiPoly) -> "WeylOp":
        """Read ``x^i y^j`` as the normal-ordered monomial ``x^i D^j``."""
        return cls._make(dict(f.terms))

    def to_bipoly(self) -> BiPoly:
        return BiPoly._make(dict(self.terms))

    # -- inspection -------------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def support(self) -> frozenset:
        return frozenset(self.terms)

    def items(self):
        """Terms in ascending (i, j) order."""
        return sorted(self.terms.items())

    def coeff(self, i: int, j: int) -> ParamPoly:
        return self.terms.get((i, j), ZERO)

    def is_const(self) -> bool:
        return all(m == (0, 0) for m in self.terms)

    def is_alpha_free(self) -> bool:
        return all(c.is_const() for c in self.terms.values())

    def canonical_key(self) -> tuple:
        if self._key is None:
            object.__setattr__(self, "_key", tuple((m, c.coeffs) for m, c in sorted(self.terms.items())))
        return self._key

    def __eq__(self, other) -> bool:
        if isinstance(other, WeylOp):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction, ParamPoly)):
            return self == WeylOp.const(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.canonical_key())

    def ord(self) -> int:
        if not self.terms:
            raise ZeroOperatorError("ord of the zero operator")
        return max(j for _, j in self.terms)

    def ord_x(self) -> int:
        if not self.terms:
            raise ZeroOperatorError("ord_x of the zero operator")
        return max(i for i, _ in self.terms)

    def ht(self) -> "WeylOp":
        """Coefficient of the highest D-power, as a polynomial in x."""
        return coeff_of_dpow(self, self.ord())

    def is_monic(self) -> bool:
        return self.ht() == WeylOp._make({(0, 0): ONE})

    # -- arithmetic -------------------------------------------------------
    @staticmethod
    def _coerce(other) -> "WeylOp | None":
        if isinstance(other, WeylOp):
            return other
        if isinstance(other, (int, Fraction, ParamPoly)):
            return WeylOp.const(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if len(o.terms) > len(self.terms):
            a, b = o.terms, self.terms
        else:
            a, b = self.terms, o.terms
        out = dict(a)
        for m, c in b.items():
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s = s + c
                if s:
                    out[m] = s
                else:
                    del out[m]
        return WeylOp._make(out)

    __radd__ = __add__

    def __neg__(self) -> "WeylOp":
        return WeylOp._make({m: -c for m, c in self.terms.items()})

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

    def scale(self, c) -> "WeylOp":
        c = _coerce_coeff(c)
        if not c:
            return WeylOp._make({})
        out = {}
        for m, v in self.terms.items():
            w = v * c
            if w:
                out[m] = w
        return WeylOp._make(out)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, ParamPoly)):
            return self.scale(other)
        if not isinstance(other, WeylOp):
            return NotImplemented
        return _mul(self.terms, other.terms)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, ParamPoly)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int) -> "WeylOp":
        if n < 0:
            raise ValueError("negative power")
        result = WeylOp._make({(0, 0): ONE})
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def eval_alpha(self, r) -> "WeylOp":
        """Specialize the parameter ``a`` to the rational ``r``."""
        return WeylOp({m: c.eval(r) for m, c in self.terms.items()})

    # -- serialization ----------------------------------------------------
    def to_json(self) -> dict:
        return {"terms": [{"i": i, "j": j, "coeff": c.to_json()} for (i, j), c in self.items()]}

    @classmethod
    def from_json(cls, data: Mapping) -> "WeylOp":
        return cls({(t["i"], t["j"]): ParamPoly.from_json(t["coeff"]) for t in data["terms"]})

    def __str__(self) -> str:
        keys = sorted(self.terms, key=lambda m: (m[1], m[0]), reverse=True)
        return render_terms([(self.terms[k], _mono_text(k)) for k in keys])

    def __repr__(self) -> str:
        return f"WeylOp({self})"


def _mono_text(m: tuple[int, int]) -> str:
    i, j = m
    parts = []
    if i:
        parts.append("x" if i == 1 else f"x^{i}")
    if j:
        parts.append("D" if j == 1 else f"D^{j}")
    return "*".join(parts)


def _mul(a: dict, b: dict) -> WeylOp:
    if not a or not b:
        return WeylOp._make({})
    if all(len(c.coeffs) == 1 for c in a.values()) and all(len(c.coeffs) == 1 for c in b.values()):
        return _mul_rational(a, b)
    out: dict = {}
    get = out.get
    for (i, j), c in a.items():
        for (k, l), e in b.items():
            ce = c * e
            if j == 0 or k == 0:
                key = (i + k, j + l)
                out[key] = get(key, ZERO) + ce
                continue
            for t, w in reorder_table(j, k):
                key = (i + k - t, j + l - t)
                out[key] = get(key, ZERO) + ce * w
    return WeylOp._make({m: c for m, c in out.items() if c})


def _mul_rational(a: dict, b: dict) -> WeylOp:
    # both operands free of the parameter: accumulate plain rationals
    out: dict = {}
    get = out.get
    bitems = [((k, l), e.coeffs[0]) for (k, l), e in b.items()]
    for (i, j), c in a.items():
        c = c.coeffs[0]
        for (k, l), e in bitems:
            ce = c * e
            if j == 0 or k == 0:
                key = (i + k, j + l)
                out[key] = get(key, 0) + ce
                continue
            for t, w in reorder_table(j, k):
                key = (i + k - t, j + l - t)
                out[key] = get(key, 0) + ce * w
    make = ParamPoly._make
    return WeylOp._make({m: make((q(c),)) for m, c in out.items() if c != 0})


def reorder(j: int, i: int) -> WeylOp:
    """Normal form of ``D^j x^i``."""
    if i < 0 or j < 0:
        raise ValueError("exponents must be non-negative")
    return WeylOp({(i - k, j - k): w for k, w in reorder_table(j, i)})


def commutator(P: WeylOp, Q: WeylOp) -> WeylOp:
    return P * Q - Q * P


def ad_power(P: WeylOp, Q: WeylOp, n: int) -> WeylOp:
    """``(ad P)^n Q``; stops early once the iterate vanishes."""
    if n < 0:
        raise ValueError("n must be non-negative")
    for _ in range(n):
        if not Q:
            break
        Q = commutator(P, Q)
    return Q


def ad_iterates(P: WeylOp, Q: WeylOp, n: int) -> list[WeylOp]:
    """``[Q, [P,Q], ..., (ad P)^n Q]``."""
    out = [Q]
    for _ in range(n):
        out.append(commutator(P, out[-1]) if out[-1] else out[-1])
    return out


def coeff_of_dpow(P: WeylOp, l: int) -> WeylOp:
    """Coefficient of ``D^l`` in the normal form of P, as a polynomial in x."""
    if l < 0:
        raise ValueError("l must be non-negative")
    return WeylOp._make({(i, 0): c for (i, j), c in P.terms.items() if j == l})


class _PowerCache:
    def __init__(self, base: WeylOp):
        self.powers = [WeylOp._make({(0, 0): ONE}), base]

    def __getitem__(self, n: int) -> WeylOp:
        while len(self.powers) <= n:
            self.powers.append(self.powers[-1] * self.powers[1])
        return self.powers[n]


def eval_poly(f: BiPoly, P: WeylOp, Q: WeylOp) -> WeylOp:
    """``f(P, Q)`` with each ``X^i Y^j`` mapped to ``P^i Q^j`` in that order."""
    Pp, Qp = _PowerCache(P), _PowerCache(Q)
    acc = WeylOp.zero()
    for (i, j), c in f.items():
        acc = acc + (Pp[i] * Qp[j]).scale(c)
    return acc


def sum_ops(ops: Iterable[WeylOp]) -> WeylOp:
    acc = WeylOp.zero()
    for op in ops:
        acc = acc + op
    return acc
