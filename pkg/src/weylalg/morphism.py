"""Substitutions of the Weyl algebra and tame automorphisms.

A substitution is a pair of images ``(phi(D), phi(x))``.  It is applied to
a normal-ordered operator by sending ``x^i D^j`` to ``phi(x)^i phi(D)^j``.
It is an endomorphism exactly when ``[phi(D), phi(x)] = 1``; substitutions
that fail this are still allowed so that weight formulas can be exercised
on arbitrary monomial-top maps.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from typing import Sequence, Union

from weylalg.bivariate import BiPoly
from weylalg.errors import WeylError
from weylalg.polygon import (
    WeightVec,
    edge_weight,
    hom_part,
    is_monomial_type,
    is_rectangular,
    top_set,
    upper_chain,
    weight_degree,
)
from weylalg.scalars import ONE, ParamPoly, ParamRat, Rational, q, qdiv, rat_str
from weylalg.weyl import WeylOp, commutator


class MorphismError(WeylError):
    pass


class NonMonomialTopError(MorphismError, ValueError):
    pass


class NotProportionalError(MorphismError, ValueError):
    pass


class ReductionError(MorphismError, ValueError):
    pass


# ---------------------------------------------------------------------------
# substitutions


@dataclass(frozen=True)
class Substitution:
    img_d: WeylOp
    img_x: WeylOp
    endo_certified: bool = False
    # compositions of certified maps are certified by construction
    verify: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        if self.verify and self.endo_certified and not is_endomorphism(self):
            raise MorphismError("certified substitution must satisfy [phi(D), phi(x)] = 1")

    @classmethod
    def identity(cls) -> "Substitution":
        return cls(WeylOp.d(), WeylOp.x(), True)

    def __call__(self, P: WeylOp) -> WeylOp:
        return apply(self, P)

    def to_json(self) -> dict:
        return {
            "img_d": self.img_d.to_json(),
            "img_x": self.img_x.to_json(),
            "endo_certified": self.endo_certified,
        }


def _left_horner(coeffs: dict, X: WeylOp) -> WeylOp:
    """``sum_e X^e * coeffs[e]`` (each coefficient an operator)."""
    acc = WeylOp.zero()
    for e in range(max(coeffs), -1, -1):
        acc = X * acc
        if e in coeffs:
            acc = acc + coeffs[e]
    return acc


def _right_horner(coeffs: dict, D: WeylOp) -> WeylOp:
    """``sum_e coeffs[e] * D^e``."""
    acc = WeylOp.zero()
    for e in range(max(coeffs), -1, -1):
        acc = acc * D
        if e in coeffs:
            acc = acc + coeffs[e]
    return acc


def apply(s: Substitution, P: WeylOp) -> WeylOp:
    """``sum c_ij phi(x)^i phi(D)^j``.

    When one image is the identity (as for the tame generators) the sum is
    evaluated by Horner's rule in the other image, so every step is a
    product with a small operator.  Otherwise the powers of both images
    are formed once and combined row by row.
    """
    if not P:
        return P
    X, Dd = s.img_x, s.img_d
    if Dd == WeylOp.d():
        # sum_i X^i * (sum_j c_ij D^j)
        rows: dict[int, dict] = {}
        for (i, j), c in P.terms.items():
            rows.setdefault(i, {})[(0, j)] = c
        return _left_horner({i: WeylOp(r) for i, r in rows.items()}, X)
    if X == WeylOp.x():
        # sum_j (sum_i c_ij x^i) * D^j
        cols: dict[int, dict] = {}
        for (i, j), c in P.terms.items():
            cols.setdefault(j, {})[(i, 0)] = c
        return _right_horner({j: WeylOp(c) for j, c in cols.items()}, Dd)
    xp = _powers(X, max(i for i, _ in P.terms))
    dp = _powers(Dd, max(j for _, j in P.terms))
    rows2: dict[int, WeylOp] = {}
    for (i, j), c in P.terms.items():
        term = dp[j].scale(c)
        rows2[i] = rows2[i] + term if i in rows2 else term
    acc = WeylOp.zero()
    for i, inner in rows2.items():
        acc = acc + xp[i] * inner
    return acc


def _powers(base: WeylOp, n: int) -> list[WeylOp]:
    out = [WeylOp.const(1)]
    for _ in range(n):
        out.append(out[-1] * base)
    return out


def compose(s1: Substitution, s2: Substitution) -> Substitution:
    """The substitution ``s1 o s2``: first ``s2``, then ``s1`` on the result."""
    return Substitution(apply(s1, s2.img_d), apply(s1, s2.img_x),
                        s1.endo_certified and s2.endo_certified, verify=False)


def is_endomorphism(s: Substitution) -> bool:
    return commutator(s.img_d, s.img_x) == WeylOp.const(1)


def certify(s: Substitution) -> Substitution:
    """Return ``s`` flagged as an endomorphism, or raise if it is not one."""
    if not is_endomorphism(s):
        raise MorphismError("[phi(D), phi(x)] != 1")
    return replace(s, endo_certified=True, verify=False)


# ---------------------------------------------------------------------------
# tame generators and words


@dataclass(frozen=True)
class Phi:
    """``x -> x + lam * D^n``, ``D -> D``."""

    n: int
    lam: Rational

    def __post_init__(self):
        object.__setattr__(self, "lam", q(self.lam))
        if self.n < 0:
            raise MorphismError("Phi needs n >= 0")

    def to_sub(self) -> Substitution:
        img_x = WeylOp.x() + WeylOp.monomial(0, self.n, self.lam)
        return Substitution(WeylOp.d(), img_x, True)

    def inverse(self) -> "Phi":
        return Phi(self.n, -self.lam)

    def __str__(self) -> str:
        return f"Phi({self.n},{rat_str(self.lam)})"


@dataclass(frozen=True)
class PhiPrime:
    """``D -> D + lam * x^n``, ``x -> x``."""

    n: int
    lam: Rational

    def __post_init__(self):
        object.__setattr__(self, "lam", q(self.lam))
        if self.n < 0:
            raise MorphismError("PhiPrime needs n >= 0")

    def to_sub(self) -> Substitution:
        img_d = WeylOp.d() + WeylOp.monomial(self.n, 0, self.lam)
        return Substitution(img_d, WeylOp.x(), True)

    def inverse(self) -> "PhiPrime":
        return PhiPrime(self.n, -self.lam)

    def __str__(self) -> str:
        return f"PhiP({self.n},{rat_str(self.lam)})"


@dataclass(frozen=True)
class Linear:
    """``D -> a*D + b*x``, ``x -> c*D + d*x`` with ``ad - bc = 1``."""

    a: Rational
    b: Rational
    c: Rational
    d: Rational

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, q(getattr(self, name)))
        if self.a * self.d - self.b * self.c != 1:
            raise MorphismError(f"Linear generator needs ad - bc = 1: {self}")

    def to_sub(self) -> Substitution:
        img_d = WeylOp({(0, 1): self.a, (1, 0): self.b})
        img_x = WeylOp({(0, 1): self.c, (1, 0): self.d})
        return Substitution(img_d, img_x, True)

    def inverse(self) -> "Linear":
        return Linear(self.d, -self.b, -self.c, self.a)

    def __str__(self) -> str:
        return "Lin(" + ",".join(rat_str(v) for v in (self.a, self.b, self.c, self.d)) + ")"


TameGen = Union[Phi, PhiPrime, Linear]
TameWord = tuple


def word_to_sub(word: Sequence[TameGen]) -> Substitution:
    """Generators act left to right: the first one is applied first."""
    s = Substitution.identity()
    for g in word:
        s = compose(g.to_sub(), s)
    return s


def apply_word(word: Sequence[TameGen], P: WeylOp) -> WeylOp:
    """``word_to_sub(word)`` applied to ``P``, one generator at a time."""
    for g in word:
        P = apply(g.to_sub(), P)
    return P


def word_inverse(word: Sequence[TameGen]) -> tuple:
    return tuple(g.inverse() for g in reversed(word))


_GEN = re.compile(r"\s*(Phi|PhiP|Lin)\s*\(([^)]*)\)\s*")


def parse_word(text: str) -> tuple:
    """Parse ``Phi(n,lam);PhiP(n,lam);Lin(a,b,c,d)`` (newlines also separate)."""
    word = []
    for chunk in re.split(r"[;\n]", text):
        if not chunk.strip() or chunk.strip().startswith("#"):
            continue
        m = _GEN.fullmatch(chunk)
        if not m:
            raise MorphismError(f"bad generator {chunk.strip()!r}")
        kind = m.group(1)
        args = [a.strip() for a in m.group(2).split(",")]
        try:
            if kind == "Lin":
                if len(args) != 4:
                    raise ValueError
                word.append(Linear(*(Fraction(a) for a in args)))
            else:
                if len(args) != 2:
                    raise ValueError
                cls = Phi if kind == "Phi" else PhiPrime
                word.append(cls(int(args[0]), Fraction(args[1])))
        except ValueError:
            raise MorphismError(f"bad arguments in {chunk.strip()!r}") from None
    return tuple(word)


def format_word(word: Sequence[TameGen]) -> str:
    return ";".join(str(g) for g in word)


# ---------------------------------------------------------------------------
# monomial tops: rate and weight propagation


def _monomial_top(P: WeylOp, w: WeightVec, what: str) -> tuple[tuple[int, int], ParamPoly]:
    top = hom_part(P, w)
    if not top.is_monomial():
        raise NonMonomialTopError(f"top of {what} for weight {w} is not a monomial: {top}")
    (m, c), = top.terms.items()
    return m, c


def epsilon_rate(s: Substitution, w: WeightVec = WeightVec(1, 1)) -> Fraction | int:
    """The rate ``eps`` with ``(l', k') = eps * (l, k)`` between the monomial
    tops ``x^l D^k`` of ``phi(D)`` and ``x^l' D^k'`` of ``phi(x)``."""
    (l, k), _ = _monomial_top(s.img_d, w, "phi(D)")
    (l2, k2), _ = _monomial_top(s.img_x, w, "phi(x)")
    if l < 1 or k < 1:
        raise NonMonomialTopError(f"top x^{l} D^{k} of phi(D) needs both exponents >= 1")
    eps = qdiv(l2, l)
    if eps * k != k2:
        raise NotProportionalError(f"tops ({l},{k}) and ({l2},{k2}) are not proportional")
    return eps


def rate_weight(eps, p: int | None = None) -> WeightVec:
    """``(p*eps, p)`` with the least positive integer ``p`` making it integral."""
    eps = Fraction(eps)
    if p is None:
        p = eps.denominator
    return WeightVec(p * eps, p)


@dataclass(frozen=True)
class PropagationReport:
    epsilon: Rational
    top_d: tuple[int, int]
    predicted: Rational
    actual: Rational
    image_monomial: bool

    @property
    def ok(self) -> bool:
        return self.predicted == self.actual and self.image_monomial


def weight_propagation_check(s: Substitution, P: WeylOp, w: WeightVec) -> PropagationReport:
    """Compare ``(k + eps*l) * v(P)`` with the weight of ``phi(P)``."""
    if not P or P.is_const():
        raise MorphismError("P must not be a constant")
    eps = epsilon_rate(s, w)
    if w.rho <= 0 or w.sigma != eps * w.rho or Fraction(w.sigma).denominator != 1 \
            or Fraction(w.rho).denominator != 1:
        raise MorphismError(f"weight {w} is not (p*eps, p) with integral entries for eps={eps}")
    if not is_monomial_type(P, w):
        raise NonMonomialTopError(f"top of P for weight {w} is not a monomial")
    (l, k), _ = _monomial_top(s.img_d, w, "phi(D)")
    predicted = q((k + eps * l) * weight_degree(P, w))
    image = apply(s, P)
    return PropagationReport(eps, (l, k), predicted, weight_degree(image, w), is_monomial_type(image, w))


def predicted_iterated_tops(l: int, k: int, eps, n: int) -> tuple[tuple, tuple]:
    """Exponents of the monomial tops of ``phi^n(D)`` and ``phi^n(x)``."""
    g = (k + eps * l) ** (n - 1)
    return (q(l * g), q(k * g)), (q(eps * l * g), q(eps * k * g))


def power(s: Substitution, n: int) -> Substitution:
    if n < 0:
        raise ValueError("n must be non-negative")
    out = Substitution.identity()
    for _ in range(n):
        out = compose(s, out)
    return out


def reduce_by_power(s: Substitution, w: WeightVec = WeightVec(1, 1)) -> Substitution:
    """Cancel the top of ``phi(x)`` against a power of ``phi(D)``:
    ``x -> phi(x) - beta * phi(D)^e`` with ``e = v(phi(x)) / v(phi(D))``."""
    v = weight_degree(s.img_d, w)
    wx = weight_degree(s.img_x, w)
    if v <= 0:
        raise ReductionError(f"phi(D) has non-positive weight {v}")
    e = qdiv(wx, v)
    if not isinstance(e, int) or e < 0:
        raise ReductionError(f"weight ratio {rat_str(e)} is not a non-negative integer")
    f = hom_part(s.img_d, w)
    g = hom_part(s.img_x, w)
    F = f ** e
    if F.support() != g.support():
        raise ReductionError(f"tops {g} and ({f})^{e} are not proportional")
    m = min(F.support())
    beta = ParamRat(g.coeff(*m), F.coeff(*m))
    if beta.den != ONE or g != F * beta.num:
        raise ReductionError(f"no polynomial beta with {g} = beta*({f})^{e}")
    img_x = s.img_x - (s.img_d ** e).scale(beta.num)
    if img_x and weight_degree(img_x, w) >= wx:
        raise AssertionError("reduction did not lower the weight")
    return Substitution(s.img_d, img_x, s.endo_certified)


# ---------------------------------------------------------------------------
# rectangularization


class Status(str, Enum):
    RECTANGULAR = "Rectangular"
    TAME_EXHAUSTED = "TameExhausted"
    STEP_LIMIT = "StepLimit"
    IRRATIONAL_ROOT = "IrrationalRoot"
    NO_MOVE = "NoMove"


@dataclass(frozen=True)
class Step:
    case: str
    weight: WeightVec
    mu: tuple
    gens: tuple
    measure_before: int
    measure_after: int

    def to_json(self) -> dict:
        return {
            "case": self.case,
            "sigma": rat_str(self.weight.sigma),
            "rho": rat_str(self.weight.rho),
            "mu": [rat_str(m) for m in self.mu],
            "gens": format_word(self.gens),
            "measure_before": self.measure_before,
            "measure_after": self.measure_after,
        }


@dataclass(frozen=True)
class RectResult:
    word: tuple
    s_out: Substitution
    status: Status
    log: tuple = ()
    detail: str = ""


def rational_roots(coeffs: Sequence[ParamPoly]) -> list[Rational]:
    """Distinct rational ``mu`` with ``sum coeffs[t] * mu^t = 0`` identically in ``a``."""
    import sympy

    max_deg = max((c.degree for c in coeffs if c), default=-1)
    g = ParamPoly()
    for d in range(max_deg + 1):
        comp = ParamPoly([c.coeffs[d] if d < len(c.coeffs) else 0 for c in coeffs])
        g = g.gcd(comp)
    if g.degree < 1:
        return []
    mu = sympy.Symbol("mu")
    poly = sympy.Poly([sympy.Rational(Fraction(c).numerator, Fraction(c).denominator)
                       for c in reversed(g.coeffs)], mu, domain=sympy.QQ)
    return sorted(q(Fraction(int(r.p), int(r.q))) for r in poly.ground_roots())


def _measure(P: WeylOp) -> int:
    return P.ord() + P.ord_x()


def _edge_poly_top(P: WeylOp, k: int, s: int) -> list[ParamPoly]:
    # coefficients of x^t D^(k - s t) along the edge through (0, k)
    out = []
    t = 0
    while k - s * t >= 0:
        out.append(P.coeff(t, k - s * t))
        t += 1
    return out


def _edge_poly_right(P: WeylOp, l: int, r: int) -> list[ParamPoly]:
    # coefficients of x^(l - r t) D^t along the edge through (l, 0)
    out = []
    t = 0
    while l - r * t >= 0:
        out.append(P.coeff(l - r * t, t))
        t += 1
    return out


@dataclass(frozen=True)
class _Move:
    case: str
    weight: WeightVec
    mu: tuple
    gens: tuple


class _Blocked(Exception):
    def __init__(self, status: Status, detail: str):
        super().__init__(detail)
        self.status = status
        self.detail = detail


def _kill_top(P: WeylOp, w: WeightVec, case: str) -> _Move:
    """Remove the axis point (0, k) with ``x -> x + mu D^(sigma/rho)``."""
    if w.sigma % w.rho:
        raise _Blocked(Status.NO_MOVE, f"case {case}: rho does not divide sigma for {w}")
    s = int(w.sigma // w.rho)
    roots = rational_roots(_edge_poly_top(P, P.ord(), s))
    if not roots:
        raise _Blocked(Status.IRRATIONAL_ROOT, f"case {case}: no rational mu for weight {w}")
    mu = roots[0]
    return _Move(case, w, (mu,), (Phi(s, mu),))


def _kill_right(P: WeylOp, w: WeightVec, case: str) -> _Move:
    """Remove the axis point (l, 0) with ``D -> D + mu x^(rho/sigma)``."""
    if w.rho % w.sigma:
        raise _Blocked(Status.NO_MOVE, f"case {case}: sigma does not divide rho for {w}")
    r = int(w.rho // w.sigma)
    roots = rational_roots(_edge_poly_right(P, P.ord_x(), r))
    if not roots:
        raise _Blocked(Status.IRRATIONAL_ROOT, f"case {case}: no rational mu for weight {w}")
    mu = roots[0]
    return _Move(case, w, (mu,), (PhiPrime(r, mu),))


def _diagonal_move(P: WeylOp, w: WeightVec) -> _Move:
    """Equal weights: the top is a product of linear forms in (x, y)."""
    f = hom_part(P, w)
    d = P.ord()
    lam = f.coeff(0, d)
    roots = rational_roots(_edge_poly_right(P, P.ord_x(), 1))
    if not roots:
        raise _Blocked(Status.IRRATIONAL_ROOT, f"case diagonal: top {f} has no rational linear factor")
    y, x = BiPoly.Y(), BiPoly.X()
    for r in roots:
        if f == (y - x * r) ** d * lam:
            return _Move("diagonal-power", w, (r,), (PhiPrime(1, r),))
    for r1 in roots:
        for r2 in roots:
            if r1 == r2:
                continue
            for alpha in range(1, d):
                if f == (y - x * r1) ** alpha * (y - x * r2) ** (d - alpha) * lam:
                    nu = qdiv(-1, r1 - r2)
                    return _Move("diagonal-split", w, (r1, r2), (PhiPrime(1, r1), Phi(1, nu)))
    return _Move("diagonal", w, (roots[0],), (PhiPrime(1, roots[0]),))


def _choose_move(P: WeylOp) -> _Move:
    chain = upper_chain(P)
    (I, _), (_, J) = chain[0], chain[-1]
    axis_top, axis_right = I == 0, J == 0
    if not axis_top and not axis_right:
        raise _Blocked(Status.NO_MOVE, "no axis point on the upper boundary")
    if axis_top and axis_right and len(chain) == 2:
        w = edge_weight(chain[0], chain[1])
        if w.sigma > w.rho:
            return _kill_top(P, w, "steep-edge")
        if w.sigma < w.rho:
            return _kill_right(P, w, "shallow-edge")
        return _diagonal_move(P, w)
    if axis_top:
        w = edge_weight(chain[0], chain[1])
        try:
            return _kill_top(P, w, "both-axes" if axis_right else "top-axis")
        except _Blocked:
            if not axis_right:
                raise
    w = edge_weight(chain[-2], chain[-1])
    return _kill_right(P, w, "both-axes" if axis_top else "right-axis")


def _degenerate(P: WeylOp) -> bool:
    return not P or P.ord() == 0 or P.ord_x() == 0


def rectangularize(s: Substitution, max_steps: int = 20, mode: str = "compose") -> RectResult:
    """Drive ``phi(D)`` towards rectangular type with tame moves.

    In ``compose`` mode the result is ``W o s``; in ``conjugate`` mode it is
    ``W o s o W^-1``, where ``W`` is the returned word.  Each step kills an
    axis point of the upper boundary of the Newton polygon.  The measure is
    ``ord + ord_x`` of ``phi(D)`` in compose mode and of both images in
    conjugate mode; a step that does not lower it is refused.
    """
    if mode not in ("compose", "conjugate"):
        raise MorphismError(f"unknown mode {mode!r}")
    if not s.img_d or not s.img_x or s.img_d.is_const() or s.img_x.is_const():
        raise MorphismError("images must be non-constant")
    word: list = []
    log: list = []

    def measure(sub: Substitution) -> int:
        if mode == "compose":
            return _measure(sub.img_d)
        return _measure(sub.img_d) + _measure(sub.img_x)

    def result(status: Status, detail: str = "") -> RectResult:
        return RectResult(tuple(word), s, status, tuple(log), detail)

    for _ in range(max_steps + 1):
        D = s.img_d
        if _degenerate(D):
            return result(Status.TAME_EXHAUSTED, "phi(D) involves a single variable")
        if is_rectangular(D)[0]:
            if is_rectangular(s.img_x)[0]:
                return result(Status.RECTANGULAR)
            return result(Status.NO_MOVE, "phi(D) is rectangular but phi(x) is not")
        if len(log) == max_steps:
            return result(Status.STEP_LIMIT)
        try:
            if mode == "compose":
                move = _choose_move(D)
            else:
                move = _choose_conjugation_move(s)
        except _Blocked as blocked:
            return result(blocked.status, blocked.detail)
        W = word_to_sub(move.gens)
        if mode == "compose":
            new = compose(W, s)
        else:
            new = compose(W, compose(s, word_to_sub(word_inverse(move.gens))))
        before, after = measure(s), measure(new) if new.img_d and new.img_x else -1
        if not after < before:
            return result(Status.NO_MOVE, f"case {move.case} would not lower the measure")
        log.append(Step(move.case, move.weight, move.mu, move.gens, before, after))
        word.extend(move.gens)
        s = new
    return result(Status.STEP_LIMIT)


def _choose_conjugation_move(s: Substitution) -> _Move:
    # upper case acts through phi(D), right case through phi(x)
    D, X = s.img_d, s.img_x
    chain = upper_chain(D)
    if chain[0][0] == 0 and len(chain) >= 2:
        try:
            return _kill_top(D, edge_weight(chain[0], chain[1]), "conj-top")
        except _Blocked:
            pass
    if _degenerate(X):
        raise _Blocked(Status.NO_MOVE, "phi(x) involves a single variable")
    chain = upper_chain(X)
    if chain[-1][1] == 0 and len(chain) >= 2:
        return _kill_right(X, edge_weight(chain[-2], chain[-1]), "conj-right")
    raise _Blocked(Status.NO_MOVE, "no axis edge on phi(D) top or phi(x) right")


# ---------------------------------------------------------------------------
# polygon shape of automorphisms


@dataclass(frozen=True)
class PolygonReport:
    l: int
    k: int
    axis_points: bool
    extremal_rows_clear: bool
    divisibility: bool
    rectangular: bool
    violations: tuple = field(default=())

    @property
    def ok(self) -> bool:
        return not self.violations


def automorphism_polygon_check(word: Sequence[TameGen]) -> PolygonReport:
    """Shape of the Newton polygon of ``Phi(D)`` for an automorphism ``Phi``.

    With ``l = max i`` and ``k = max j`` over the support: ``(l, 0)`` and
    ``(0, k)`` are present (when the coordinate is positive), no other point
    sits on row ``k`` or column ``l``, one of ``l, k`` divides the other, and
    the polygon is not of rectangular type.
    """
    return polygon_shape_report(apply_word(word, WeylOp.d()))


def polygon_shape_report(P: WeylOp) -> PolygonReport:
    l, k = P.ord_x(), P.ord()
    E = P.terms
    axis = (l == 0 or (l, 0) in E) and (k == 0 or (0, k) in E)
    # a zero coordinate makes the row or column an axis, where the clause is void
    clear = not any((k > 0 and i > 0 and j == k) or (l > 0 and j > 0 and i == l) for i, j in E)
    divis = (l == 0 or k % l == 0) or (k == 0 or l % k == 0)
    rect = is_rectangular(P)[0]
    violations = []
    if not axis:
        violations.append("axis points (l,0),(0,k) missing")
    if not clear:
        violations.append("extra point on row k or column l")
    if not divis:
        violations.append(f"neither of {l}, {k} divides the other")
    if rect:
        violations.append("rectangular type")
    return PolygonReport(l, k, axis, clear, divis, rect, tuple(violations))


def rectangular_pair_check(s: Substitution) -> bool | None:
    """For a certified substitution with rectangular ``phi(D)``, whether
    ``phi(x)`` is rectangular too.  None when the premise does not hold."""
    if not s.endo_certified or not is_rectangular(s.img_d)[0]:
        return None
    return is_rectangular(s.img_x)[0]
