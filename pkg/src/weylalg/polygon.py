"""Newton polygons, weight filtrations and the almost-commute calculus.

A weight ``(sigma, rho)`` assigns ``sigma*i + rho*j`` to the monomial
``x^i D^j``.  The homogeneous part of an operator for a weight is the
commutative polynomial in ``(x, y)`` collecting its weight-maximal terms.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from weylalg.bivariate import BiPoly
from weylalg.errors import WeylError, ZeroOperatorError
from weylalg.scalars import ParamRat, Rational, q, rat_str
from weylalg.weyl import WeylOp, commutator


class WeightError(WeylError, ValueError):
    pass


@dataclass(frozen=True)
class WeightVec:
    sigma: Rational
    rho: Rational

    def __post_init__(self):
        object.__setattr__(self, "sigma", q(self.sigma))
        object.__setattr__(self, "rho", q(self.rho))
        if self.sigma == 0 and self.rho == 0:
            raise WeightError("weight (0, 0) is not allowed")

    def of(self, i: int, j: int) -> Rational:
        return q(self.sigma * i + self.rho * j)

    def require_positive_sum(self):
        if self.sigma + self.rho <= 0:
            raise WeightError(f"need sigma + rho > 0, got ({self.sigma}, {self.rho})")

    def __str__(self) -> str:
        return f"({rat_str(self.sigma)},{rat_str(self.rho)})"


ORDER_WEIGHT = WeightVec(0, 1)
X_ORDER_WEIGHT = WeightVec(1, 0)


def _nonzero(P: WeylOp):
    if not P:
        raise ZeroOperatorError("operation undefined for the zero operator")


def weight_degree(P: WeylOp, w: WeightVec) -> Rational:
    _nonzero(P)
    return max(w.of(i, j) for i, j in P.terms)


def top_set(P: WeylOp, w: WeightVec) -> frozenset:
    v = weight_degree(P, w)
    return frozenset(m for m in P.terms if w.of(*m) == v)


def hom_part(P: WeylOp, w: WeightVec) -> BiPoly:
    return BiPoly._make({m: P.terms[m] for m in top_set(P, w)})


def is_homogeneous(P: WeylOp, w: WeightVec) -> bool:
    return len(top_set(P, w)) == len(P.terms)


# ---------------------------------------------------------------------------
# convex hull


def _cross(o, a, b) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points) -> list[tuple[int, int]]:
    """Monotone chain hull, counterclockwise, collinear points dropped."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower: list = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def newton_polygon(P: WeylOp) -> list[tuple[int, int]]:
    _nonzero(P)
    return convex_hull(P.terms)


@dataclass(frozen=True)
class TopLine:
    sigma: Rational
    rho: Rational
    theta: Rational
    points: frozenset

    def contains(self, i: int, j: int) -> bool:
        return self.sigma * i + self.rho * j == self.theta

    def __str__(self) -> str:
        return f"{rat_str(self.sigma)}*x + {rat_str(self.rho)}*y = {rat_str(self.theta)}"


def top_line(P: WeylOp, w: WeightVec) -> TopLine:
    return TopLine(w.sigma, w.rho, weight_degree(P, w), top_set(P, w))


def upper_chain(P: WeylOp) -> list[tuple[int, int]]:
    """Vertices of the polygon boundary seen from strictly positive weights.

    Runs from the rightmost point of the top row down to the topmost point
    of the rightmost column; a single vertex means the corner is present.
    """
    _nonzero(P)
    k = max(j for _, j in P.terms)
    l = max(i for i, _ in P.terms)
    start_i = max(i for i, j in P.terms if j == k)
    column_top: dict[int, int] = {}
    for i, j in P.terms:
        if i >= start_i and j > column_top.get(i, -1):
            column_top[i] = j
    chain: list = []
    for p in sorted(column_top.items()):
        while len(chain) >= 2 and _cross(chain[-2], chain[-1], p) >= 0:
            chain.pop()
        chain.append(p)
    return chain


def edge_weight(a: tuple[int, int], b: tuple[int, int]) -> WeightVec:
    """Primitive positive weight whose top line contains the edge ``a``-``b``."""
    (x1, y1), (x2, y2) = sorted([a, b])
    s, r = y1 - y2, x2 - x1
    g = gcd(s, r)
    return WeightVec(s // g, r // g)


# ---------------------------------------------------------------------------
# Poisson bracket and the almost-commute calculus


def poisson(f: BiPoly, g: BiPoly) -> BiPoly:
    """``f_x g_y - f_y g_x``.

    With ``D x - x D = 1`` the top part of ``[P, Q]`` is ``poisson(g, f)``,
    the negative of this bracket on the homogeneous parts: ``{y, x} = -1``
    while ``[D, x] = 1``.
    """
    return f.diff_x() * g.diff_y() - f.diff_y() * g.diff_x()


def proportional_powers(f: BiPoly, g: BiPoly, v, w):
    """Whether ``g^v = c * f^w`` for a nonzero ``c`` in Q(a).

    Returns ``(True, c)`` or ``(False, None)``.  Non-integral exponents are
    refused rather than interpreted.
    """
    v, w = q(v), q(w)
    if not isinstance(v, int) or not isinstance(w, int):
        raise WeightError(f"exponents must be integers, got {v}, {w}")
    if v < 0 or w < 0:
        raise WeightError("exponents must be non-negative")
    if not f or not g:
        raise ZeroOperatorError("proportional_powers of a zero polynomial")
    G, F = g ** v, f ** w
    if G.support() != F.support():
        return False, None
    m = min(F.support())
    c = ParamRat(G.coeff(*m), F.coeff(*m))
    for mono in F.support():
        if G.coeff(*mono) * c.den != F.coeff(*mono) * c.num:
            return False, None
    return True, c


def commutator_decomposition(P: WeylOp, Q: WeylOp, w: WeightVec) -> tuple[WeylOp, WeylOp]:
    """Split ``[P, Q]`` into its part ``T`` of weight ``v + w - sigma - rho``
    and the strictly lower remainder ``U``.

    When ``T`` is nonzero its homogeneous part is ``poisson(g, f)`` for the
    homogeneous parts ``f``, ``g`` of ``P``, ``Q``.
    """
    w.require_positive_sum()
    _nonzero(P)
    _nonzero(Q)
    target = q(weight_degree(P, w) + weight_degree(Q, w) - w.sigma - w.rho)
    C = commutator(P, Q)
    T, U = {}, {}
    for m, c in C.terms.items():
        d = w.of(*m)
        if d == target:
            T[m] = c
        elif d < target:
            U[m] = c
        else:
            raise AssertionError(f"commutator term {m} above weight {target}")
    return WeylOp._make(T), WeylOp._make(U)


def almost_commute(P: WeylOp, Q: WeylOp, w: WeightVec) -> bool:
    T, _ = commutator_decomposition(P, Q, w)
    return not T


def is_monomial_type(P: WeylOp, w: WeightVec) -> bool:
    return len(top_set(P, w)) == 1


def has_mixture_term(P: WeylOp) -> bool:
    _nonzero(P)
    return any(i and j for i, j in P.terms)


def is_rectangular(P: WeylOp) -> tuple[bool, tuple[int, int] | None]:
    """Rectangular type: the corner ``(max i, max j)`` is in the support
    and both coordinates are at least 1.  Returns the flag and the corner."""
    _nonzero(P)
    l = max(i for i, _ in P.terms)
    k = max(j for _, j in P.terms)
    if l >= 1 and k >= 1 and (l, k) in P.terms:
        return True, (l, k)
    return False, None


@dataclass(frozen=True)
class AlmostCommuteIndex:
    """First iterates ``(ad P)^r Q`` that are of monomial type (``n``) and
    that almost commute with ``P`` (``m``).

    An index is None when it was not found; ``*_reason`` then says whether
    the search hit ``bound`` or the iterates vanished first.
    """

    n: int | None
    m: int | None
    n_reason: str | None
    m_reason: str | None
    bound: int


def almost_commute_index(P: WeylOp, Q: WeylOp, w: WeightVec, bound: int) -> AlmostCommuteIndex:
    if bound < 1:
        raise WeightError("bound must be at least 1")
    w.require_positive_sum()
    _nonzero(P)
    _nonzero(Q)
    if almost_commute(P, Q, w):
        return AlmostCommuteIndex(0, 0, None, None, bound)
    n = m = None
    cur = Q
    for r in range(1, bound + 1):
        cur = commutator(P, cur)
        if not cur:
            break
        if n is None and is_monomial_type(cur, w):
            n = r
        if m is None and almost_commute(P, cur, w):
            m = r
        if n is not None and m is not None:
            break
    vanished = not cur

    def reason(found):
        if found is not None:
            return None
        return "vanished" if vanished else "bound"

    return AlmostCommuteIndex(n, m, reason(n), reason(m), bound)
