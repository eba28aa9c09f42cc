from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weylalg.errors import InexactDivisionError
from weylalg.scalars import (
    ONE,
    ZERO,
    ParamPoly,
    ParamRat,
    mat_vec,
    nullspace,
    q,
    rank,
    rat_str,
    rref,
)

from strats import param_polys

a = ParamPoly.alpha()


def test_q_canonicalizes():
    assert q(Fraction(4, 2)) == 2 and type(q(Fraction(4, 2))) is int
    assert q("3/6") == Fraction(1, 2)
    assert rat_str(Fraction(-3, 4)) == "-3/4"
    assert rat_str(5) == "5"


def test_difference_of_squares():
    assert (a + 1) * (a - 1) == a ** 2 - 1


def test_gcd_common_factor():
    assert (a ** 2 - 1).gcd(a - 1) == a - 1
    assert (a * 2 + 2).gcd(a ** 2 - 1) == a + 1  # monic


def test_eval_direct_substitution():
    assert (a ** 3 - 2).eval(2) == 6
    assert (a ** 2 * Fraction(1, 2) + a).eval(Fraction(1, 3)) == Fraction(1, 18) + Fraction(1, 3)


def test_zero_and_trailing_coefficients():
    assert ParamPoly([1, 0, 0]).coeffs == (1,)
    assert ParamPoly([]).is_zero() and ParamPoly([0]) == 0
    assert ParamPoly([Fraction(2, 1)]).coeffs[0].__class__ is int


def test_exact_div_and_errors():
    assert (a ** 2 - 1).exact_div(a + 1) == a - 1
    with pytest.raises(InexactDivisionError):
        (a ** 2 + 1).exact_div(a + 1)
    with pytest.raises(ZeroDivisionError):
        a.exact_div(ZERO)
    with pytest.raises(ZeroDivisionError):
        ParamRat(a, ZERO)


def test_paramrat_canonical_form():
    r = ParamRat(a ** 2 - 1, (a - 1) * 2)
    assert r.num == (a + 1) * Fraction(1, 2) and r.den == ONE
    s = ParamRat(a, a * 3 + 3)
    assert s.den == a + 1 and s.num == a * Fraction(1, 3)
    assert ParamRat(ZERO, a).den == ONE


def test_paramrat_field_ops():
    x = ParamRat(a, a + 1)
    assert x * x.inverse() == ParamRat(1)
    assert x / x == ParamRat(1)
    assert (x + 1) - 1 == x
    assert (x ** 2).eval(1) == Fraction(1, 4)
    with pytest.raises(ZeroDivisionError):
        ParamRat(ZERO).inverse()


def test_json_round_trip():
    p = ParamPoly([Fraction(-1, 3), 0, 7])
    js = p.to_json()
    assert js == [["-1", "3"], ["0", "1"], ["7", "1"]]
    assert ParamPoly.from_json(js) == p


def test_rendering():
    assert str(a ** 2 - a * 2 + Fraction(1, 2)) == "a^2 - 2*a + 1/2"
    assert str(ZERO) == "0"


# -- linear algebra ----------------------------------------------------------


def test_nullspace_rank_one():
    assert nullspace([[1, 1], [2, 2]]) == [[1, -1]]


def test_nullspace_identity_is_empty():
    assert nullspace([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == []


def test_nullspace_symbolic():
    basis = nullspace([[a, -1]])
    assert basis == [[ParamRat(1), ParamRat(a)]]
    M = [[a, -1]]
    assert all(v == 0 for v in mat_vec(M, basis[0]))


def test_rref_pivots_in_row_order():
    R, piv = rref([[0, 2, 4], [1, 1, 1]])
    assert piv == [0, 1]
    assert R == [[1, 0, -1], [0, 1, 2]]


def test_nullspace_needs_ncols_for_empty_matrix():
    assert nullspace([], ncols=2) == [[1, 0], [0, 1]]


# -- properties -----------------------------------------------------------------

polys = param_polys()


@settings(max_examples=500)
@given(polys, polys, polys)
def test_ring_axioms(p, r, s):
    assert (p + r) + s == p + (r + s)
    assert (p * r) * s == p * (r * s)
    assert p * (r + s) == p * r + p * s
    assert p * r == r * p and p + r == r + p
    assert p - p == ZERO


@settings(max_examples=500)
@given(polys, polys.filter(bool), polys.filter(bool))
def test_paramrat_axioms(p, r, s):
    x, y, z = ParamRat(p, r), ParamRat(r, s), ParamRat(s, r)
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x


@settings(max_examples=300)
@given(polys, polys, st.fractions(max_denominator=50).filter(lambda v: abs(v) < 50))
def test_eval_is_a_homomorphism(p, r, v):
    assert (p * r).eval(v) == p.eval(v) * r.eval(v)
    assert (p + r).eval(v) == p.eval(v) + r.eval(v)


@settings(max_examples=200)
@given(polys.filter(bool), polys.filter(bool))
def test_divmod_identity(p, r):
    quo, rem = p.divmod(r)
    assert quo * r + rem == p
    assert rem.degree < r.degree


@settings(max_examples=200)
@given(polys, polys.filter(bool))
def test_gcd_divides(p, r):
    g = p.gcd(r)
    assert g.lead() == 1
    p.exact_div(g)
    r.exact_div(g)


matrices = st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(-4, 4), min_size=n, max_size=n), min_size=0, max_size=5)
    .map(lambda rows: (rows, n)))


@settings(max_examples=300)
@given(matrices)
def test_nullspace_contract(data):
    M, n = data
    basis = nullspace(M, ncols=n)
    for v in basis:
        assert all(x == 0 for x in mat_vec(M, v))
        assert next(x for x in v if x) == 1
    assert (rank(M) if M else 0) + len(basis) == n
    if basis:
        assert rank(basis) == len(basis)


@settings(max_examples=100)
@given(st.lists(st.lists(param_polys(2, st.integers(-3, 3)), min_size=3, max_size=3), min_size=1, max_size=3))
def test_symbolic_nullspace_contract(M):
    basis = nullspace(M)
    for v in basis:
        assert all(not x for x in mat_vec(M, v))
    assert rank(M) + len(basis) == 3
