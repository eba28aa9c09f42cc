"""Truncated pseudo-differential operators ``sum_j u_j(x) D^j``.

Coefficients are power series in ``x`` over Q[a] that carry their own
x-adic precision: ``prec = None`` means the series is an exact polynomial,
otherwise only ``x^0 .. x^(prec-1)`` are known.  Differentiating loses one
known coefficient and integrating (constant 0) gains one.

An operator also records ``low``, the lowest ``D``-exponent whose
coefficient is known; ``None`` means no term was cut.  Products keep
exponents down to the context floor ``-N`` and report how far down the
result is actually determined.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Mapping

from weylalg.errors import WeylError
from weylalg.scalars import ONE, ZERO, ParamPoly, q, rat_str
from weylalg.weyl import WeylOp


class PsiDOError(WeylError):
    pass


class NotInvertibleError(PsiDOError, ArithmeticError):
    pass


class TruncationError(PsiDOError):
    """The requested orders are not determined at this truncation."""

    def __init__(self, message: str, order: int | None = None):
        super().__init__(message)
        self.order = order


@dataclass(frozen=True)
class Trunc:
    """Keep ``D``-exponents ``>= -N`` and aim for ``M`` known x-coefficients."""

    N: int
    M: int
    guard: int | None = None

    def __post_init__(self):
        if self.N < 0 or self.M < 1:
            raise PsiDOError("need N >= 0 and M >= 1")

    @property
    def cap(self) -> int:
        # storage bound for series coefficients
        return self.M + (self.guard if self.guard is not None else self.N + 4)


def _min_prec(*precs):
    known = [p for p in precs if p is not None]
    return min(known) if known else None


class XSeries:
    __slots__ = ("coeffs", "prec")

    def __init__(self, coeffs=(), prec: int | None = None):
        cs = [c if isinstance(c, ParamPoly) else ParamPoly.const(c) for c in coeffs]
        if prec is not None:
            prec = max(prec, 0)
            cs = cs[:prec]
        while cs and not cs[-1]:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "prec", prec)

    def __setattr__(self, name, value):
        raise AttributeError("XSeries is immutable")

    def __reduce__(self):
        return (XSeries, (self.coeffs, self.prec))

    @classmethod
    def const(cls, c) -> "XSeries":
        return cls([c])

    @classmethod
    def from_xpoly(cls, P: WeylOp) -> "XSeries":
        """Read an x-only operator (e.g. an ``HT`` or ``coeff_of_dpow``)."""
        if any(j for _, j in P.terms):
            raise PsiDOError("expected a polynomial in x")
        deg = max((i for i, _ in P.terms), default=-1)
        return cls([P.coeff(i, 0) for i in range(deg + 1)])

    def capped(self, cap: int) -> "XSeries":
        if len(self.coeffs) <= cap and (self.prec is None or self.prec <= cap):
            return self
        return XSeries(self.coeffs, cap if self.prec is None else min(self.prec, cap))

    def coeff(self, n: int) -> ParamPoly:
        return self.coeffs[n] if n < len(self.coeffs) else ZERO

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def is_exact(self) -> bool:
        return self.prec is None

    def known(self) -> float:
        return float("inf") if self.prec is None else self.prec

    def is_const(self) -> bool:
        return len(self.coeffs) <= 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, XSeries):
            return NotImplemented
        return self.coeffs == other.coeffs and self.prec == other.prec

    def agrees(self, other: "XSeries", upto: int) -> bool:
        """Equal in ``x^0 .. x^(upto-1)``, both being known that far."""
        if self.known() < upto or other.known() < upto:
            return False
        return all(self.coeff(n) == other.coeff(n) for n in range(upto))

    def __add__(self, other: "XSeries") -> "XSeries":
        n = max(len(self.coeffs), len(other.coeffs))
        return XSeries([self.coeff(i) + other.coeff(i) for i in range(n)],
                       _min_prec(self.prec, other.prec))

    def __neg__(self) -> "XSeries":
        return XSeries([-c for c in self.coeffs], self.prec)

    def __sub__(self, other: "XSeries") -> "XSeries":
        return self + (-other)

    def scale(self, c) -> "XSeries":
        c = c if isinstance(c, ParamPoly) else ParamPoly.const(c)
        return XSeries([v * c for v in self.coeffs], self.prec)

    def mul(self, other: "XSeries", cap: int) -> "XSeries":
        if not self.coeffs or not other.coeffs:
            return XSeries((), _min_prec(self.prec, other.prec))
        # a term known to x^p times a series of valuation v is known to x^(p+v)
        va = next(i for i, c in enumerate(self.coeffs) if c)
        vb = next(i for i, c in enumerate(other.coeffs) if c)
        prec = _min_prec(None if self.prec is None else self.prec + vb,
                         None if other.prec is None else other.prec + va)
        n = len(self.coeffs) + len(other.coeffs) - 1
        limit = min(n, cap, prec if prec is not None else n)
        out = [ZERO] * limit
        for i, a in enumerate(self.coeffs):
            if i >= limit or not a:
                continue
            for j, b in enumerate(other.coeffs):
                if i + j >= limit:
                    break
                if b:
                    out[i + j] = out[i + j] + a * b
        if prec is None and n > cap:
            prec = cap
        return XSeries(out, prec)

    def deriv(self, k: int = 1) -> "XSeries":
        out = self
        for _ in range(k):
            cs = [c * i for i, c in enumerate(out.coeffs)][1:]
            out = XSeries(cs, None if out.prec is None else out.prec - 1)
        return out

    def integ(self) -> "XSeries":
        cs = [ZERO] + [c * Fraction(1, i + 1) for i, c in enumerate(self.coeffs)]
        return XSeries(cs, None if self.prec is None else self.prec + 1)

    def exp(self, cap: int) -> "XSeries":
        """``exp`` of a series with zero constant term."""
        if self.coeff(0):
            raise PsiDOError("exp needs a zero constant term")
        if not self.coeffs:
            return XSeries.const(1)
        prec = cap if self.prec is None else min(self.prec, cap)
        e = [ONE]
        for n in range(1, prec):
            acc = ZERO
            for k in range(1, min(n, len(self.coeffs) - 1) + 1):
                acc = acc + self.coeffs[k] * e[n - k] * k
            e.append(acc * Fraction(1, n))
        return XSeries(e, prec)

    def inverse(self, cap: int) -> "XSeries":
        c0 = self.coeff(0)
        if not c0 or not c0.is_const():
            raise NotInvertibleError(f"constant term {c0} is not a unit in Q[a]")
        inv0 = Fraction(1) / Fraction(c0.const_value())
        prec = cap if self.prec is None else min(self.prec, cap)
        out = [ParamPoly.const(inv0)]
        for n in range(1, prec):
            acc = ZERO
            for k in range(1, min(n, len(self.coeffs) - 1) + 1):
                acc = acc + self.coeffs[k] * out[n - k]
            out.append(acc * (-inv0))
        # 1/(1 - x) style inverses of polynomials never terminate
        return XSeries(out, prec if len(self.coeffs) > 1 else None)

    def __str__(self) -> str:
        body = str(WeylOp({(i, 0): c for i, c in enumerate(self.coeffs)}))
        if self.prec is not None:
            return f"{body} + O(x^{self.prec})" if self.coeffs else f"O(x^{self.prec})"
        return body

    def __repr__(self) -> str:
        return f"XSeries({self})"


def gbinom(i: int, k: int) -> int:
    """Binomial coefficient ``C(i, k)`` for any integer ``i``."""
    num = 1
    for t in range(k):
        num *= i - t
    return num // factorial(k)


class PsiDO:
    __slots__ = ("terms", "low")

    def __init__(self, terms: Mapping[int, XSeries] | None = None, low: int | None = None):
        clean = {int(j): s for j, s in (terms or {}).items()
                 if (s.coeffs or s.prec is not None) and (low is None or j >= low)}
        # exact zero coefficients are dropped; a truncated zero still records its precision
        clean = {j: s for j, s in clean.items() if s.coeffs or s.prec is not None}
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "low", low)

    def __setattr__(self, name, value):
        raise AttributeError("PsiDO is immutable")

    @classmethod
    def from_weyl(cls, P: WeylOp) -> "PsiDO":
        rows: dict[int, dict[int, ParamPoly]] = {}
        for (i, j), c in P.terms.items():
            rows.setdefault(j, {})[i] = c
        return cls({j: XSeries([r.get(i, ZERO) for i in range(max(r) + 1)]) for j, r in rows.items()})

    @classmethod
    def dpow(cls, n: int, c=1) -> "PsiDO":
        return cls({n: XSeries.const(c)})

    @classmethod
    def one(cls) -> "PsiDO":
        return cls.dpow(0)

    def coeff(self, j: int) -> XSeries:
        if self.low is not None and j < self.low:
            raise TruncationError(f"order {j} is below the determined range", j)
        return self.terms.get(j, XSeries())

    def top(self) -> int | None:
        nz = [j for j, s in self.terms.items() if s.coeffs]
        return max(nz) if nz else None

    def _span(self) -> int | None:
        return max(self.terms) if self.terms else None

    def __add__(self, other: "PsiDO") -> "PsiDO":
        keys = set(self.terms) | set(other.terms)
        out = {}
        for j in keys:
            a, b = self.terms.get(j), other.terms.get(j)
            out[j] = a + b if a is not None and b is not None else (a if b is None else b)
        return PsiDO(out, _max_low(self.low, other.low))

    def __neg__(self) -> "PsiDO":
        return PsiDO({j: -s for j, s in self.terms.items()}, self.low)

    def __sub__(self, other: "PsiDO") -> "PsiDO":
        return self + (-other)

    def scale(self, c) -> "PsiDO":
        return PsiDO({j: s.scale(c) for j, s in self.terms.items()}, self.low)

    def truncated(self, low: int) -> "PsiDO":
        return PsiDO(self.terms, _max_low(self.low, low))

    def __str__(self) -> str:
        return render_psido(self)

    def __repr__(self) -> str:
        return f"PsiDO({self})"


def _max_low(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return max(a, b)


def psido_mul(A: PsiDO, B: PsiDO, ctx: Trunc, floor: int | None = None) -> PsiDO:
    """``A * B`` using ``D^i b = sum_k C(i,k) b^(k) D^(i-k)``."""
    floor = -ctx.N if floor is None else floor
    ta, tb = A._span(), B._span()
    if ta is None or tb is None:
        return PsiDO({}, _max_low(A.low, B.low))
    low = floor
    if A.low is not None:
        low = max(low, A.low + tb)
    if B.low is not None:
        low = max(low, ta + B.low)
    cap = ctx.cap
    derivs: dict[tuple[int, int], XSeries] = {}
    out: dict[int, XSeries] = {}
    cut = False
    for i, a in A.terms.items():
        for j, b in B.terms.items():
            k = 0
            while True:
                if i >= 0 and k > i:
                    break
                key = (j, k)
                if key not in derivs:
                    derivs[key] = b if k == 0 else derivs[(j, k - 1)].deriv()
                bk = derivs[key]
                if not bk.coeffs and bk.prec is None:
                    break
                e = i + j - k
                if e < low:
                    cut = True
                    break
                term = a.mul(bk, cap)
                w = gbinom(i, k)
                if w != 1:
                    term = term.scale(w)
                out[e] = out[e] + term if e in out else term
                k += 1
    exact = A.low is None and B.low is None and not cut
    return PsiDO(out, None if exact else low)


def psido_inverse(A: PsiDO, ctx: Trunc) -> PsiDO:
    """Inverse of ``u D^m + lower`` with ``u`` a unit, by a Neumann series."""
    m = A.top()
    if m is None:
        raise NotInvertibleError("zero operator")
    u = A.terms[m]
    uinv = u.inverse(ctx.cap)
    L_inv = psido_mul(PsiDO.dpow(-m), PsiDO({0: uinv}), ctx)
    rest = PsiDO({j: s for j, s in A.terms.items() if j != m}, A.low)
    T = psido_mul(L_inv, rest, ctx)
    # (1 + T)^-1 = sum (-T)^n; T lowers the order by at least one
    acc = PsiDO.one()
    power = PsiDO.one()
    for _ in range(ctx.N + m + 1):
        power = -psido_mul(power, T, ctx)
        # merge even an empty power: it may carry the truncation marker
        acc = acc + power
        if not power.terms:
            break
    return psido_mul(acc, L_inv, ctx)


def _xpoly_coeffs(P: WeylOp, j: int) -> XSeries:
    return XSeries([P.coeff(i, j) for i in range(P.ord_x() + 1)]) if P else XSeries()


def _require_constant_leading(Q: WeylOp) -> tuple[int, Fraction | int]:
    if not Q:
        raise PsiDOError("zero operator")
    qq = Q.ord()
    if qq < 1:
        raise PsiDOError("need an operator of order at least 1")
    ht = Q.ht()
    if not ht.is_const() or not ht.coeff(0, 0).is_const():
        raise PsiDOError(f"leading coefficient {ht} is not a nonzero rational constant")
    return qq, ht.coeff(0, 0).const_value()


def qth_root(Q: WeylOp, N: int, M: int) -> PsiDO:
    """``R = D + r_0 + r_-1 D^-1 + ...`` with ``R^q = Q`` modulo ``(x^M, D^(q-1-N))``."""
    qq, c = _require_constant_leading(Q)
    if c != 1:
        raise PsiDOError("qth_root needs a monic operator")
    ctx = Trunc(N, M)
    QP = PsiDO.from_weyl(Q)
    R = PsiDO.dpow(1)
    for t in range(N + 1):
        e = qq - 1 - t
        Rq = PsiDO.one()
        for k in range(qq):
            # partial powers must reach below e for the last factor to land on e
            Rq = psido_mul(Rq, R, ctx, floor=e if k == qq - 1 else e - qq)
        diff = QP.terms.get(e, XSeries()) - Rq.terms.get(e, XSeries())
        r = diff.scale(Fraction(1, qq)).capped(ctx.cap)
        if r.coeffs or r.prec is not None:
            R = PsiDO({**R.terms, -t: r})
    return R


@dataclass(frozen=True)
class SchurResult:
    S: PsiDO
    c: Fraction | int
    q: int
    ctx: Trunc
    conj: PsiDO
    residual_ok: bool
    first_bad: int | None

    def s(self, k: int) -> XSeries:
        return self.S.terms.get(-k, XSeries())


def _conjugate(S: PsiDO, Sinv: PsiDO, P: PsiDO, ctx: Trunc) -> PsiDO:
    return psido_mul(Sinv, psido_mul(P, S, ctx), ctx)


def _residual_check(conj: PsiDO, target: PsiDO, lowest: int, M: int) -> int | None:
    """First order ``>= lowest`` where ``conj`` and ``target`` are not known to agree mod x^M."""
    top = max([j for j in conj.terms] + [j for j in target.terms] + [lowest])
    for j in range(top, lowest - 1, -1):
        if conj.low is not None and j < conj.low:
            return j
        if not conj.terms.get(j, XSeries()).agrees(target.terms.get(j, XSeries()), M):
            return j
    return None


def _schur_once(Q: WeylOp, ctx: Trunc) -> SchurResult:
    qq, c = _require_constant_leading(Q)
    cap = ctx.cap
    QP = PsiDO.from_weyl(Q)
    # gauge g = exp(-int a_{q-1} / (q c)) removes the D^(q-1) coefficient
    a = QP.terms.get(qq - 1, XSeries())
    phase = a.integ().scale(Fraction(-1) / (qq * Fraction(c))).capped(cap)
    g = phase.exp(cap) if phase.coeffs else XSeries.const(1)
    ginv = (-phase).exp(cap) if phase.coeffs else XSeries.const(1)
    G, Ginv = PsiDO({0: g}), PsiDO({0: ginv})
    Q1 = psido_mul(psido_mul(Ginv, QP, ctx), G, ctx)
    cD = PsiDO.dpow(qq, c)
    S1 = PsiDO.one()
    for k in range(1, ctx.N + 1):
        e = qq - 1 - k
        Z = psido_mul(Q1, S1, ctx, floor=e) - psido_mul(S1, cD, ctx, floor=e)
        z = Z.terms.get(e, XSeries())
        s_k = z.integ().scale(Fraction(-1) / (qq * Fraction(c))).capped(cap)
        if s_k.coeffs or s_k.prec is not None:
            S1 = PsiDO({**S1.terms, -k: s_k})
    S = psido_mul(G, S1, ctx)
    Sinv = psido_inverse(S, ctx)
    conj = _conjugate(S, Sinv, QP, ctx)
    bad = _residual_check(conj, cD, qq - ctx.N, ctx.M)
    return SchurResult(S, c, qq, ctx, conj, bad is None, bad)


def schur_normalize(Q: WeylOp, N: int, M: int, max_guard: int = 64) -> SchurResult:
    """Find ``S`` with ``S^-1 Q S = c D^q`` modulo ``(x^M, D^(q-1-N))``.

    The internal series precision starts a few terms above ``M`` and is
    raised until the residual is determined; if it never is, the first
    undetermined order is reported.
    """
    guard = min(N + Q.ord() + 2 if Q else 0, max_guard)
    while True:
        res = _schur_once(Q, Trunc(N, M, guard))
        if res.residual_ok:
            return res
        if guard >= max_guard:
            raise TruncationError(
                f"residual not determined at order {res.first_bad} (N={N}, M={M})", res.first_bad)
        guard = min(2 * guard, max_guard)


@dataclass(frozen=True)
class CentralizerReport:
    verdict: bool | None
    exact: bool
    reason: str

    @property
    def agrees(self) -> bool | None:
        return None if self.verdict is None else self.verdict == self.exact


def centralizer_criterion(P: WeylOp, Q: WeylOp, N: int, M: int) -> CentralizerReport:
    """Decide ``[P, Q] = 0`` from the constancy of ``S^-1 P S``.

    If ``[P, Q] != 0`` the highest nonconstant coefficient of ``S^-1 P S``
    sits at an order ``e >= 1 - q`` and its derivative is a polynomial of
    x-degree at most ``ord_x P + ord_x Q``.  The verdict is therefore
    determined when those orders and x-degrees are known.
    """
    from weylalg.weyl import commutator

    exact = not commutator(P, Q)
    if not P or P.is_const():
        return CentralizerReport(True, exact, "constant P")
    res = schur_normalize(Q, N, M)
    conj = _conjugate(res.S, psido_inverse(res.S, res.ctx), PsiDO.from_weyl(P), res.ctx)
    need_x = P.ord_x() + Q.ord_x() + 2
    lowest = 1 - res.q
    undetermined = None
    for j in sorted(conj.terms, reverse=True):
        if conj.low is not None and j < conj.low:
            break
        s = conj.terms[j]
        nonconst = [n for n, c in enumerate(s.coeffs) if n > 0 and c]
        if nonconst:
            return CentralizerReport(False, exact, f"nonconstant coefficient at order {j}")
        if j >= lowest and s.known() < need_x and undetermined is None:
            undetermined = f"x-precision {s.prec} < {need_x} at order {j}"
    if conj.low is not None and conj.low > lowest:
        return CentralizerReport(None, exact, f"orders below {conj.low} undetermined (need N >= {P.ord() + res.q - 1})")
    if undetermined:
        return CentralizerReport(None, exact, undetermined)
    return CentralizerReport(True, exact, "all determined coefficients constant")


def render_psido(A: PsiDO) -> str:
    """``1 + (-1/4*x^2)*Dinv^1 + ...`` style text, highest order first."""
    parts = []
    for j in sorted(A.terms, reverse=True):
        s = A.terms[j]
        if not s.coeffs and s.prec is None:
            continue
        body = str(s)
        if j == 0:
            parts.append(body)
            continue
        mono = f"D^{j}" if j > 0 else f"Dinv^{-j}"
        if s.is_exact() and s.coeffs == (ONE,):
            parts.append(mono)
        else:
            parts.append(f"({body})*{mono}")
    text = " + ".join(parts) if parts else "0"
    if A.low is not None:
        text += f" + O(D^{A.low - 1})"
    return text


def psido_json(A: PsiDO) -> dict:
    return {
        "low": A.low,
        "terms": [
            {"j": j, "prec": s.prec, "coeffs": [c.to_json() for c in s.coeffs]}
            for j, s in sorted(A.terms.items(), reverse=True)
        ],
    }
