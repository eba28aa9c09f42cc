from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weylalg.psido import (
    NotInvertibleError,
    PsiDO,
    PsiDOError,
    Trunc,
    TruncationError,
    XSeries,
    centralizer_criterion,
    psido_inverse,
    psido_json,
    psido_mul,
    qth_root,
    render_psido,
    schur_normalize,
)
from weylalg.spectral import dixmier_pair
from weylalg.weyl import WeylOp, commutator

from corpus import centralizer_corpus, truncation_for

D, x = WeylOp.d(), WeylOp.x()


def series(*cs):
    return XSeries(list(cs))


def same(A: PsiDO, B: PsiDO, low: int, M: int) -> bool:
    """``A`` and ``B`` agree at every order ``>= low`` modulo ``x^M``."""
    top = max(list(A.terms) + list(B.terms) + [low])
    for j in range(top, low - 1, -1):
        a = A.terms.get(j, XSeries())
        b = B.terms.get(j, XSeries())
        if not a.agrees(b, M):
            return False
    return True


def power(R: PsiDO, n: int, ctx: Trunc, floor: int) -> PsiDO:
    out = PsiDO.one()
    for k in range(n):
        out = psido_mul(out, R, ctx, floor=floor if k == n - 1 else floor - n)
    return out


# -- series -----------------------------------------------------------------------


def test_xseries_basics():
    s = series(0, 1)
    e = s.exp(6)
    assert [e.coeff(n) for n in range(6)] == [Fraction(1, f) for f in (1, 1, 2, 6, 24, 120)]
    assert e.prec == 6
    inv = series(1, 1).inverse(5)
    assert [inv.coeff(n) for n in range(5)] == [1, -1, 1, -1, 1]
    assert series(1, 2, 3).deriv() == series(2, 6)
    assert series(1, 2).integ() == series(0, 1, 1)
    with pytest.raises(PsiDOError):
        series(1, 1).exp(4)
    with pytest.raises(NotInvertibleError):
        series(0, 1).inverse(4)


# -- examples -----------------------------------------------------------------------


def test_d_times_dinv_is_one():
    for N in range(4):
        A = psido_mul(PsiDO.dpow(1), PsiDO.dpow(-1), Trunc(N, 3))
        assert A.terms == PsiDO.one().terms


def test_dinv_times_x():
    A = psido_mul(PsiDO.dpow(-1), PsiDO.from_weyl(x), Trunc(5, 4))
    assert A.terms == {-1: series(0, 1), -2: series(-1)}
    # the derivative chain ends, so the product is exact
    assert A.low is None and render_psido(A) == "(x)*Dinv^1 + (-1)*Dinv^2"


def test_neumann_inverse_multiplies_back():
    ctx = Trunc(6, 6)
    A = PsiDO({0: series(1), -1: series(0, 1)})
    B = psido_inverse(A, ctx)
    assert B.terms[-1].agrees(series(0, -1), 6)
    assert same(psido_mul(A, B, ctx), PsiDO.one(), -6, 6)
    assert same(psido_mul(B, A, ctx), PsiDO.one(), -6, 6)


def test_inverse_needs_a_unit():
    with pytest.raises(NotInvertibleError):
        psido_inverse(PsiDO({1: series(0, 1)}), Trunc(3, 3))
    with pytest.raises(NotInvertibleError):
        psido_inverse(PsiDO(), Trunc(3, 3))


def test_qth_root_examples():
    assert qth_root(D * D, 4, 6).terms == PsiDO.dpow(1).terms
    assert qth_root(D ** 3, 4, 6).terms == PsiDO.dpow(1).terms
    R = qth_root(D * D + x, 4, 6)
    assert R.terms[1] == series(1) and 0 not in R.terms
    assert R.terms[-1].agrees(series(0, Fraction(1, 2)), 6)
    ctx = Trunc(4, 6)
    assert same(power(R, 2, ctx, 1 - 4), PsiDO.from_weyl(D * D + x), 1 - 4, 6)


def test_qth_root_errors():
    with pytest.raises(PsiDOError):
        qth_root((D * D).scale(2), 3, 3)
    with pytest.raises(PsiDOError):
        qth_root(x + 1, 3, 3)
    with pytest.raises(PsiDOError):
        qth_root(x * D * D, 3, 3)


def test_schur_trivial():
    r = schur_normalize(D * D, 3, 6)
    assert r.S.terms == PsiDO.one().terms and r.c == 1 and r.residual_ok
    r = schur_normalize((D * D).scale(2), 3, 6)
    assert r.S.terms == PsiDO.one().terms and r.c == 2


def test_schur_airy():
    r = schur_normalize(D * D + x, 8, 12)
    assert r.residual_ok and r.first_bad is None
    assert r.s(1).agrees(series(0, 0, Fraction(-1, 4)), 12)
    # the recursion 2 s_k' = -x s_(k-1) - s_(k-1)'' also gives x/4 in s_2
    assert r.s(2).agrees(series(0, Fraction(1, 4), 0, 0, Fraction(1, 32)), 12)
    for k in range(2, 8):
        lhs = r.s(k).deriv().scale(2)
        rhs = -(r.s(k - 1).mul(series(0, 1), 40)) - r.s(k - 1).deriv(2)
        assert lhs.agrees(rhs, 8)


def test_schur_text_output():
    text = render_psido(schur_normalize(D * D + x, 2, 6).S)
    assert text.startswith("1 + (-1/4*x^2)*Dinv^1 + ")
    js = psido_json(schur_normalize(D * D, 1, 2).S)
    assert js == {"low": None, "terms": [{"j": 0, "prec": None, "coeffs": [[["1", "1"]]]}]}


def test_schur_errors():
    with pytest.raises(PsiDOError):
        schur_normalize(x * D * D, 3, 3)
    with pytest.raises(PsiDOError):
        schur_normalize(WeylOp.const(3), 3, 3)
    with pytest.raises(PsiDOError):
        schur_normalize(D * D + WeylOp.alpha() * D * D, 3, 3)
    with pytest.raises(TruncationError) as info:
        schur_normalize(D ** 3 + x ** 3 * D * D, 3, 4, max_guard=1)
    assert info.value.order == 1 and "order 1" in str(info.value)


def test_centralizer_examples():
    Q = D * D + x
    assert centralizer_criterion(Q, Q, 4, 8).verdict is True
    L4, L6 = dixmier_pair(0).P, dixmier_pair(0).Q
    N, M = truncation_for(L6, L4)
    r = centralizer_criterion(L6, L4, N, M)
    assert r.verdict is True and r.exact and r.agrees
    r = centralizer_criterion(x, D * D, 4, 8)
    assert r.verdict is False and commutator(x, D * D) == D.scale(-2)


def test_centralizer_reports_insufficient_truncation():
    L4, L6 = dixmier_pair(0).P, dixmier_pair(0).Q
    r = centralizer_criterion(L6, L4, 2, 12)
    assert r.verdict is None and "N >=" in r.reason


def test_centralizer_corpus():
    pairs = centralizer_corpus()
    assert len(pairs) == 50
    commuting = 0
    for P, Q in pairs:
        r = centralizer_criterion(P, Q, *truncation_for(P, Q))
        assert r.verdict is not None, r.reason
        assert r.agrees, (P, Q, r)
        commuting += r.exact
    assert 20 <= commuting <= 30


# -- properties -----------------------------------------------------------------


@st.composite
def psidos(draw, top=3, N=6, deg=3):
    terms = {}
    for j in draw(st.lists(st.integers(-N, top), min_size=1, max_size=4, unique=True)):
        cs = draw(st.lists(st.integers(-4, 4), min_size=1, max_size=deg + 1))
        terms[j] = XSeries(cs)
    return PsiDO(terms)


@settings(max_examples=150)
@given(psidos(), psidos(), psidos(), st.integers(0, 6), st.integers(1, 8))
def test_mul_associative(A, B, C, N, M):
    ctx = Trunc(N, M, guard=3 * N + 16)
    # inner products go deeper so the outer ones are determined down to -N
    deep = -N - 3
    left = psido_mul(psido_mul(A, B, ctx, floor=deep), C, ctx)
    right = psido_mul(A, psido_mul(B, C, ctx, floor=deep), ctx)
    assert all(P.low is None or P.low <= -N for P in (left, right))
    assert same(left, right, -N, M)


@st.composite
def monic_ops(draw, max_ord=4, max_deg=3):
    q = draw(st.integers(1, max_ord))
    terms = {(0, q): 1}
    for j in range(q):
        for i in range(max_deg + 1):
            c = draw(st.integers(-3, 3))
            if c:
                terms[(i, j)] = c
    return WeylOp(terms)


@settings(max_examples=60)
@given(monic_ops(), st.integers(0, 4), st.integers(1, 6))
def test_qth_root_residual(Q, N, M):
    q = Q.ord()
    R = qth_root(Q, N, M)
    ctx = Trunc(N, M)
    low = q - 1 - N
    assert same(power(R, q, ctx, low + 1), PsiDO.from_weyl(Q), low + 1, M)


@settings(max_examples=60)
@given(monic_ops(), st.integers(0, 4), st.integers(1, 6), st.sampled_from([1, 2, -3]))
def test_schur_residual(Q, N, M, c):
    Q = Q.scale(c)
    r = schur_normalize(Q, N, M)
    q = Q.ord()
    assert r.residual_ok and r.c == c
    # Q S = S c D^q, checked without the inverse
    lhs = psido_mul(PsiDO.from_weyl(Q), r.S, r.ctx)
    rhs = psido_mul(r.S, PsiDO.dpow(q, c), r.ctx)
    assert same(lhs, rhs, q - N, M)


@settings(max_examples=40)
@given(st.integers(0, 49), st.integers(0, 3), st.integers(0, 4))
def test_truncation_monotone(k, dn, dm):
    P, Q = centralizer_corpus()[k]
    N, M = truncation_for(P, Q)
    small = centralizer_criterion(P, Q, max(N - 2, 0), max(M - 3, 1))
    big = centralizer_criterion(P, Q, N + dn, M + dm)
    assert big.verdict is not None
    if small.verdict is not None:
        assert small.verdict == big.verdict
