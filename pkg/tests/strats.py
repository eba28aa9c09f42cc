"""Hypothesis strategies shared by the test modules."""

from fractions import Fraction

from hypothesis import strategies as st

from weylalg.bivariate import BiPoly
from weylalg.scalars import ParamPoly
from weylalg.weyl import WeylOp

small_ints = st.integers(-100, 100)
rationals = st.fractions(min_value=-10**6, max_value=10**6, max_denominator=10**6)


def param_polys(max_degree=4, coeff=rationals):
    return st.lists(coeff, max_size=max_degree + 1).map(ParamPoly)


@st.composite
def weyl_ops(draw, max_terms=8, max_exp=6, coeff=small_ints, alpha=False, nonzero=False):
    n = draw(st.integers(1 if nonzero else 0, max_terms))
    terms = {}
    for _ in range(n):
        i = draw(st.integers(0, max_exp))
        j = draw(st.integers(0, max_exp))
        c = draw(coeff.filter(lambda v: v != 0))
        if alpha and draw(st.booleans()):
            c = ParamPoly([c, draw(st.integers(-3, 3))])
        terms[(i, j)] = c
    return WeylOp(terms)


nonzero_ops = weyl_ops(nonzero=True)


@st.composite
def bipolys(draw, max_terms=6, max_degree=5):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        i = draw(st.integers(0, max_degree))
        j = draw(st.integers(0, max_degree - i))
        terms[(i, j)] = draw(st.integers(-20, 20))
    return BiPoly(terms)


@st.composite
def positive_weights(draw, lo=-3, hi=4):
    from weylalg.polygon import WeightVec

    s = draw(st.integers(lo, hi))
    r = draw(st.integers(lo, hi).filter(lambda r: s + r > 0))
    return WeightVec(s, r)


def frac(n, d=1):
    return Fraction(n, d)


@st.composite
def tame_gens(draw, max_n=3, max_lam=3, linear=True):
    from weylalg.morphism import Linear, Phi, PhiPrime

    kinds = ["phi", "phip"] + (["lin"] if linear else [])
    kind = draw(st.sampled_from(kinds))
    if kind == "lin":
        b = draw(st.integers(-2, 2))
        c = draw(st.integers(-2, 2))
        a = draw(st.sampled_from([1, -1]))
        # a*d - b*c = 1 with a = +-1
        return Linear(a, b, c, a * (1 + b * c))
    n = draw(st.integers(1, max_n))
    lam = draw(st.integers(-max_lam, max_lam).filter(bool))
    return (Phi if kind == "phi" else PhiPrime)(n, lam)


def tame_words(max_len=6, **kw):
    return st.lists(tame_gens(**kw), min_size=0, max_size=max_len).map(tuple)
