from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weylalg.bivariate import BiPoly
from weylalg.errors import ZeroOperatorError
from weylalg.scalars import ParamPoly
from weylalg.spectral import dixmier_pair
from weylalg.weyl import (
    WeylOp,
    ad_power,
    coeff_of_dpow,
    commutator,
    eval_poly,
    reorder,
)

from strats import nonzero_ops, weyl_ops

D, x = WeylOp.d(), WeylOp.x()
a = ParamPoly.alpha()


# -- oracles ----------------------------------------------------------------------


def rewrite_word(word: str) -> dict:
    """Normal form of a word in 'x' and 'D' by repeated ``Dx -> xD + 1``."""
    todo = Counter({word: 1})
    done: Counter = Counter()
    while todo:
        w, c = todo.popitem()
        k = w.find("Dx")
        if k < 0:
            key = (w.count("x"), w.count("D"))
            done[key] += c
            continue
        todo[w[:k] + "xD" + w[k + 2:]] += c
        todo[w[:k] + w[k + 2:]] += c
    return {m: c for m, c in done.items() if c}


def act(P: WeylOp, f: dict) -> dict:
    """Apply P to a polynomial ``{deg: coeff}`` in x, with D = d/dx."""
    out: dict = {}
    for (i, j), c in P.items():
        for n, v in f.items():
            if j > n:
                continue
            fall = 1
            for t in range(j):
                fall *= n - t
            key = n - j + i
            out[key] = out.get(key, 0) + c * v * fall
    return {k: v for k, v in out.items() if v}


# -- examples -----------------------------------------------------------------------


def test_reorder_examples():
    assert reorder(1, 1) == x * D + 1
    assert reorder(0, 5) == x ** 5
    assert reorder(2, 2) == WeylOp({(2, 2): 1, (1, 1): 4, (0, 0): 2})


@pytest.mark.parametrize("i", range(9))
@pytest.mark.parametrize("j", range(9))
def test_reorder_matches_rewriting(i, j):
    assert reorder(j, i) == WeylOp(rewrite_word("D" * j + "x" * i))


def test_mul_examples():
    assert D * x == x * D + 1
    assert x * D == WeylOp({(1, 1): 1})
    B = D * D - x ** 3
    assert str(B * B) == "D^4 - 2*x^3*D^2 - 6*x^2*D + x^6 - 6*x"
    assert B * B == WeylOp(rewrite_word("DDDD")) - WeylOp(rewrite_word("DDxxx")) \
        - WeylOp(rewrite_word("xxxDD")) + WeylOp(rewrite_word("xxxxxx"))


def test_commutator_examples():
    assert commutator(D, x) == WeylOp.const(1)
    P = D * D + x * a
    assert not commutator(P, P)
    assert ad_power(D, x ** 3, 2) == x.scale(6)
    assert ad_power(D, x, 0) == x


def test_orders_and_head_term():
    L4 = dixmier_pair().P
    assert L4.ord() == 4 and L4.ord_x() == 6
    assert (D ** 3).ht() == WeylOp.const(1) and (D ** 3).is_monic()
    assert not (x * D).is_monic()
    with pytest.raises(ZeroOperatorError):
        WeylOp.zero().ord()
    with pytest.raises(ZeroOperatorError):
        WeylOp.zero().ht()


def test_eval_poly_examples():
    pair = dixmier_pair()
    # the true sign: L6^2 - L4^3 is +a
    assert eval_poly(BiPoly({(0, 2): 1, (3, 0): -1}), pair.P, pair.Q) == WeylOp.alpha()
    assert eval_poly(BiPoly.X(), D, x * x) == D
    assert eval_poly(BiPoly({(1, 1): 1}), D, x) == x * D + 1


def test_coeff_of_dpow_examples():
    L4 = dixmier_pair().P
    assert coeff_of_dpow(x * D + 1, 1) == x
    assert coeff_of_dpow(L4, 4) == WeylOp.const(1)
    # (D^2 - x^3 - a)^2 - 2x, constant part in D from the independent expansion
    B0 = x ** 3 + WeylOp.alpha()
    assert coeff_of_dpow(L4, 0) == B0 * B0 - x.scale(6) - x.scale(2)
    assert not coeff_of_dpow(L4, 5)


def test_dixmier_matches_polynomial_action():
    L4 = dixmier_pair(alpha=Fraction(2, 3)).P
    B = WeylOp({(0, 2): 1, (3, 0): -1, (0, 0): Fraction(-2, 3)})
    for n in range(8):
        f = {n: ParamPoly.const(1)}
        assert act(L4, f) == _sub(act(B, act(B, f)), act(x.scale(2), f))


def test_dixmier_defect_by_polynomial_action():
    # L6^2 - L4^3 acts on K[x] as multiplication by +a, here a = 2/3
    pair = dixmier_pair(alpha=Fraction(2, 3))
    L4, L6 = pair.P, pair.Q
    for n in range(6):
        f = {n: ParamPoly.const(1)}
        lhs = _sub(act(L6, act(L6, f)), act(L4, act(L4, act(L4, f))))
        assert lhs == {n: ParamPoly.const(Fraction(2, 3))}


def _sub(f, g):
    out = dict(f)
    for k, v in g.items():
        out[k] = out.get(k, 0) - v
    return {k: v for k, v in out.items() if v}


def test_rendering_and_json():
    P = WeylOp({(3, 2): Fraction(-1, 2), (0, 0): a + 1, (1, 0): 3})
    assert str(P) == "-1/2*x^3*D^2 + 3*x + (a + 1)"
    js = P.to_json()
    assert [(t["i"], t["j"]) for t in js["terms"]] == [(0, 0), (1, 0), (3, 2)]
    assert WeylOp.from_json(js) == P
    assert str(WeylOp.zero()) == "0"


def test_immutable():
    with pytest.raises(AttributeError):
        D.terms = {}


# -- properties -----------------------------------------------------------------

ops = weyl_ops()


@settings(max_examples=1000)
@given(ops, ops, ops)
def test_associativity(P, Q, R):
    assert (P * Q) * R == P * (Q * R)


@settings(max_examples=1000)
@given(ops, ops, ops)
def test_leibniz(P, Q, R):
    assert commutator(P, Q * R) == commutator(P, Q) * R + Q * commutator(P, R)


@settings(max_examples=300)
@given(ops, ops, ops)
def test_distributivity(P, Q, R):
    assert P * (Q + R) == P * Q + P * R
    assert (Q + R) * P == Q * P + R * P


@settings(max_examples=300)
@given(weyl_ops(alpha=True), weyl_ops(alpha=True))
def test_product_matches_polynomial_action(P, Q):
    # the action on K[x] is faithful, and x^0..x^ord detects any operator of that order
    PQ = P * Q
    upto = PQ.ord() if PQ else 0
    for n in range(upto + 2):
        f = {n: ParamPoly.const(1)}
        assert act(PQ, f) == act(P, act(Q, f))


@settings(max_examples=500)
@given(weyl_ops(nonzero=True, alpha=True), weyl_ops(nonzero=True, alpha=True))
def test_order_and_head_term_multiply(P, Q):
    PQ = P * Q
    assert PQ.ord() == P.ord() + Q.ord()
    assert PQ.ht() == P.ht() * Q.ht()


@settings(max_examples=200)
@given(weyl_ops(max_terms=4, max_exp=3), st.integers(0, 5))
def test_pow_matches_repeated_mul(P, n):
    acc = WeylOp.const(1)
    for _ in range(n):
        acc = acc * P
    assert P ** n == acc


@settings(max_examples=300)
@given(nonzero_ops)
def test_ad_d_kills_after_ord_x(Q):
    n = Q.ord_x()
    assert ad_power(D, Q, n)
    assert not ad_power(D, Q, n + 1)


@settings(max_examples=300)
@given(ops, ops)
def test_eval_poly_agrees_with_products(P, Q):
    f = BiPoly({(2, 1): 3, (0, 1): -1, (0, 0): 5})
    assert eval_poly(f, P, Q) == (P * P * Q).scale(3) - Q + 5


@settings(max_examples=300)
@given(weyl_ops(alpha=True))
def test_json_round_trip(P):
    assert WeylOp.from_json(P.to_json()) == P


@settings(max_examples=200)
@given(weyl_ops(alpha=True), st.fractions(max_denominator=20).filter(lambda v: abs(v) < 20))
def test_alpha_specialization_is_a_homomorphism(P, r):
    Q = P + D * x
    assert (P * Q).eval_alpha(r) == P.eval_alpha(r) * Q.eval_alpha(r)
