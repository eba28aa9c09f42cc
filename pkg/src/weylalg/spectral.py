"""Commuting pairs, polynomial relations and orbit experiments.

The Dixmier pair ``L4 = (D^2 - x^3 - a)^2 - 2x`` and
``L6 = (D^2 - x^3 - a)^3 - 3/2 (x (D^2 - x^3 - a) + (D^2 - x^3 - a) x)``
satisfies ``L6^2 = L4^3 + a`` exactly (checked on construction).  Relations
between two operators are found by exact linear algebra on the coefficients
of ``f(P, Q)``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

from weylalg.bivariate import BiPoly
from weylalg.errors import WeylError
from weylalg.morphism import TameGen, apply, format_word
from weylalg.scalars import ONE, ParamPoly, ParamRat, nullspace, q, rank, rref
from weylalg.weyl import WeylOp, ad_iterates, commutator, eval_poly


class SpectralError(WeylError):
    pass


class RelationError(SpectralError, ValueError):
    pass


class SizeLimitError(SpectralError):
    pass


class CommutationViolation(SpectralError):
    """A verified solution pair that does not commute."""


@dataclass(frozen=True)
class SolutionPair:
    P: WeylOp
    Q: WeylOp
    relation: BiPoly
    verify: bool = field(default=True, compare=False)

    def __post_init__(self):
        if not self.relation:
            raise RelationError("the zero polynomial is not a relation")
        if self.verify and eval_poly(self.relation, self.P, self.Q):
            raise RelationError(f"relation {self.relation.render('X', 'Y')} does not hold")

    @property
    def nontrivial(self) -> bool:
        return (bool(self.P) and self.P.ord() > 0) or (bool(self.Q) and self.Q.ord() > 0)

    def key(self) -> tuple:
        return (self.P.canonical_key(), self.Q.canonical_key())


def _base(alpha) -> WeylOp:
    a = WeylOp.alpha() if alpha is None else WeylOp.const(q(alpha))
    D, x = WeylOp.d(), WeylOp.x()
    return D * D - x * x * x - a


def dixmier_pair(alpha=None) -> SolutionPair:
    """``(L4, L6)`` with relation ``Y^2 - X^3 - a``; symbolic in ``a`` unless ``alpha`` is given."""
    B = _base(alpha)
    x = WeylOp.x()
    L4 = B * B - x.scale(2)
    L6 = B * B * B - (x * B + B * x).scale(Fraction(3, 2))
    a = ParamPoly.alpha() if alpha is None else ParamPoly.const(q(alpha))
    rel = BiPoly({(0, 2): 1, (3, 0): -1, (0, 0): -a})
    pair = SolutionPair(L4, L6, rel)
    commutation_theorem_check(pair)
    return pair


def commutation_theorem_check(pair: SolutionPair) -> bool:
    """A verified relation forces ``[P, Q] = 0``; anything else is a hard error."""
    C = commutator(pair.P, pair.Q)
    if C:
        raise CommutationViolation(f"pair satisfies {pair.relation.render('X', 'Y')} but [P,Q] = {C}")
    return True


# ---------------------------------------------------------------------------
# relation finding


def relation_monomials(degX: int, degY: int) -> list[tuple[int, int]]:
    """``X^i Y^j`` in ascending graded-lex order (total degree, then X-degree)."""
    return sorted(((i, j) for i in range(degX + 1) for j in range(degY + 1)),
                  key=lambda m: (m[0] + m[1], m[0]))


@dataclass(frozen=True)
class Relation:
    """A relation with coefficients in Q(a), first nonzero coefficient 1."""

    coeffs: tuple  # ((i, j), ParamRat) in monomial order

    def as_bipoly(self) -> BiPoly:
        """Clear denominators to get a polynomial over Q[a]."""
        den = ONE
        for _, c in self.coeffs:
            g = den.gcd(c.den)
            den = den * c.den.exact_div(g)
        return BiPoly({m: (c.num * den).exact_div(c.den) for m, c in self.coeffs})

    def __str__(self) -> str:
        return self.as_bipoly().render("X", "Y")


@dataclass(frozen=True)
class RelationReport:
    monomials: tuple
    relations: tuple
    rank: int

    @property
    def dim(self) -> int:
        return len(self.relations)


def find_relation(P: WeylOp, Q: WeylOp, degX: int, degY: int,
                  max_columns: int = 400, max_terms: int = 200_000) -> RelationReport:
    """All ``f`` with ``deg_X f <= degX``, ``deg_Y f <= degY`` and ``f(P, Q) = 0``."""
    if degX < 0 or degY < 0:
        raise SpectralError("degrees must be non-negative")
    monos = relation_monomials(degX, degY)
    if len(monos) > max_columns:
        raise SizeLimitError(f"{len(monos)} unknowns exceed the limit {max_columns}")
    if P and Q:
        est = (degX * P.ord() + degY * Q.ord() + 1) * (degX * P.ord_x() + degY * Q.ord_x() + 1)
        if est > max_terms:
            raise SizeLimitError(f"about {est} coefficients exceed the limit {max_terms}")
    Pp = [WeylOp.const(1)]
    for _ in range(degX):
        Pp.append(Pp[-1] * P)
    Qp = [WeylOp.const(1)]
    for _ in range(degY):
        Qp.append(Qp[-1] * Q)
    columns = [Pp[i] * Qp[j] for i, j in monos]
    support = sorted(set().union(*(c.terms for c in columns)))
    M = [[col.coeff(*m) for col in columns] for m in support]
    basis = nullspace(M, ncols=len(monos))
    r = len(monos) - len(basis)
    if basis:
        # reduced echelon over the basis rows: first nonzero coefficient 1
        R, piv = rref(basis)
        basis = R[:len(piv)]
    rels = []
    for v in basis:
        coeffs = tuple((m, ParamRat._coerce(c)) for m, c in zip(monos, v) if c)
        rels.append(Relation(coeffs))
    return RelationReport(tuple(monos), tuple(rels), r)


# ---------------------------------------------------------------------------
# probes of ad-iterates


@dataclass(frozen=True)
class ProbeReport:
    vq_dim: int
    vq_stable: bool
    nilpotency: int | None
    eigen: ParamRat | None
    central: bool
    bound: int


def _span_rank(ops: Sequence[WeylOp]) -> int:
    support = sorted(set().union(*(op.terms for op in ops)))
    if not support:
        return 0
    return rank([[op.coeff(*m) for op in ops] for m in support])


def space_probes(P: WeylOp, Q: WeylOp, bound: int) -> ProbeReport:
    if bound < 1:
        raise SpectralError("bound must be at least 1")
    its = ad_iterates(P, Q, bound)
    # V_Q is spanned by the iterates up to the first one that is dependent on its predecessors
    dim, stable = 0, False
    for r in range(len(its)):
        d = _span_rank(its[: r + 1])
        if d == dim:
            stable = True
            break
        dim = d
    nil = None
    for n in range(len(its) - 1):
        if its[n] and not its[n + 1]:
            nil = n
            break
    C = its[1]
    central = not C
    eigen = None
    if Q:
        if not C:
            eigen = ParamRat._coerce(0)
        elif C.support() == Q.support():
            m = min(Q.terms)
            lam = ParamRat(C.coeff(*m), Q.coeff(*m))
            if all(ParamRat._coerce(C.coeff(*k)) == lam * ParamRat._coerce(Q.coeff(*k)) for k in Q.terms):
                eigen = lam
    return ProbeReport(dim, stable, nil, eigen, central, bound)


@dataclass(frozen=True)
class RankReport:
    rank: int
    history: tuple  # gcd after allowing total exponent 1, 2, ..., bound
    stable_from: int


def ring_rank(generators: Sequence[WeylOp], bound: int) -> RankReport:
    """gcd of ``ord`` over products of the generators with total exponent ``<= bound``."""
    gens = [g for g in generators]
    if not gens or any(not g for g in gens):
        raise SpectralError("need nonzero generators")
    if bound < 1:
        raise SpectralError("bound must be at least 1")
    level = {tuple(0 for _ in gens): WeylOp.const(1)}
    g_acc = 0
    history = []
    for _ in range(bound):
        nxt = {}
        for exps, op in level.items():
            start = max((k for k, e in enumerate(exps) if e), default=0)
            for k in range(start, len(gens)):
                e2 = list(exps)
                e2[k] += 1
                e2 = tuple(e2)
                if e2 not in nxt:
                    nxt[e2] = op * gens[k]
        for op in nxt.values():
            g_acc = gcd(g_acc, op.ord())
        history.append(g_acc)
        level = nxt
    stable_from = next(i + 1 for i, h in enumerate(history) if h == history[-1])
    return RankReport(g_acc, tuple(history), stable_from)


# ---------------------------------------------------------------------------
# orbit search


@dataclass(frozen=True)
class OrbitReport:
    distinct_pairs: int
    collisions: tuple  # (existing word, new word)
    words: tuple  # word of each distinct pair in discovery order
    explored_depth: int
    complete: bool
    pairs: tuple = field(default=(), repr=False)

    def to_json(self) -> dict:
        return {
            "distinct_pairs": self.distinct_pairs,
            "collisions": [[format_word(a), format_word(b)] for a, b in self.collisions],
            "words": [format_word(w) for w in self.words],
            "explored_depth": self.explored_depth,
            "complete": self.complete,
        }


def _expand(args):
    pair, gens = args
    out = []
    for g in gens:
        s = g.to_sub()
        child = SolutionPair(apply(s, pair.P), apply(s, pair.Q), pair.relation, verify=False)
        if eval_poly(child.relation, child.P, child.Q):
            raise CommutationViolation(f"relation lost under {g}")
        commutation_theorem_check(child)
        out.append(child)
    return out


def orbit_search(start: SolutionPair, gens: Sequence[TameGen], depth: int,
                 workers: int = 1, max_pairs: int | None = None) -> OrbitReport:
    """Breadth-first images of ``start`` under words in ``gens``.

    Each word is applied left to right, so the child of ``(pair, word)``
    under ``g`` is ``g`` applied to ``pair``.  Every visited pair is checked
    to satisfy the relation and to commute.  Results are independent of
    ``workers``: children are merged in FIFO word order.
    """
    if depth < 0:
        raise SpectralError("depth must be non-negative")
    gens = tuple(gens)
    store: dict[tuple, tuple] = {start.key(): ()}
    pairs = [start]
    words = [()]
    collisions = []
    frontier = deque([(start, ())])
    explored = 0
    pool = None
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor
        pool = ProcessPoolExecutor(max_workers=workers)
    try:
        for d in range(1, depth + 1):
            level = list(frontier)
            frontier.clear()
            jobs = [(p, gens) for p, _ in level]
            results = pool.map(_expand, jobs) if pool else map(_expand, jobs)
            for (_, word), children in zip(level, results):
                for g, child in zip(gens, children):
                    w = word + (g,)
                    k = child.key()
                    if k in store:
                        collisions.append((store[k], w))
                        continue
                    if max_pairs is not None and len(store) >= max_pairs:
                        return OrbitReport(len(store), tuple(collisions), tuple(words),
                                           explored, False, tuple(pairs))
                    store[k] = w
                    pairs.append(child)
                    words.append(w)
                    frontier.append((child, w))
            explored = d
    finally:
        if pool:
            pool.shutdown()
    return OrbitReport(len(store), tuple(collisions), tuple(words), explored, True, tuple(pairs))
