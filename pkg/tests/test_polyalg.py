from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from secantflow.polyalg import (BlowupDecomposition, NumericPoly, ParseError, Poly, PolyError, blowdown_decompose,
                                compose_blowup, parse_poly, random_poly, real_roots, resultant, univariate_coeffs,
                                z_order_decompose)

x, y, z = Poly.gens()

terms = st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3),
                           st.integers(-6, 6), st.integers(1, 4)), max_size=5)


@st.composite
def polys(draw):
    return Poly({(a, b, c): Fraction(n, d) for a, b, c, n, d in draw(terms)})


@st.composite
def nonzero_polys(draw):
    p = draw(polys())
    return p if not p.is_zero() else p + Poly.monomial(*draw(st.tuples(*[st.integers(0, 3)] * 3)))


rationals = st.fractions(min_value=-3, max_value=3, max_denominator=7)


# parsing ---------------------------------------------------------------

def test_parse_example1_expansion():
    h = parse_poly("(x^2-1/4)*(y^3-(1/4)*y)")
    assert len(h) == 4
    assert h == x**2 * y**3 - Fraction(1, 4) * x**2 * y - Fraction(1, 4) * y**3 + Fraction(1, 16) * y


@pytest.mark.parametrize("text", ["0", "x - x", "(x+y)*0"])
def test_parse_zero(text):
    p = parse_poly(text)
    assert p.is_zero() and p.terms == {}


@pytest.mark.parametrize("text,pos", [("x^2+*y", 4), ("x +", 3), ("(x+y", 4), ("x^-2", 2), ("2 x", 2)])
def test_parse_errors_report_position(text, pos):
    with pytest.raises(ParseError) as e:
        parse_poly(text)
    assert e.value.position == pos
    assert f"position {pos}" in str(e.value)


def test_parse_unknown_variable():
    with pytest.raises(ParseError):
        parse_poly("x + w")


def test_parse_precedence():
    assert parse_poly("-x^2") == -(x**2)
    assert parse_poly("2*x^2*3") == 6 * x**2
    assert parse_poly("x - y - z") == x - y - z


@given(polys())
def test_text_round_trip(p):
    assert parse_poly(p.to_text()) == p
    assert Poly.from_json(p.to_json()) == p


# ring operations --------------------------------------------------------

def test_ring_examples(rng):
    assert (x + y) * (x - y) == x**2 - y**2
    for _ in range(20):
        p = random_poly(rng)
        assert p + Poly() == p
    q = (x**2 + y**2) ** 3
    assert sorted(c for _, c in q.items()) == [1, 1, 3, 3]


@settings(max_examples=100)
@given(polys(), polys(), polys())
def test_ring_axioms(p, q, r):
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p + q == q + p
    assert p * q == q * p
    assert p * (q + r) == p * q + p * r


@given(polys(), polys(), st.sampled_from("xyz"))
def test_leibniz(p, q, v):
    assert (p * q).partial(v) == p.partial(v) * q + p * q.partial(v)


def test_no_zero_coefficients_stored():
    p = x + y - x
    assert all(c != 0 for _, c in p.items())
    assert p == y


# calculus and evaluation ---------------------------------------------------

def test_partials(h1):
    assert (x**2 * y).partial("x") == 2 * x * y
    assert h1.partial("y") == (x**2 - Fraction(1, 4)) * (3 * y**2 - Fraction(1, 4))
    assert (x**2 + y**2).partial("z").is_zero()


def test_eval_examples(h1):
    assert h1.eval((Fraction(1, 2), 1, 0)) == 0
    assert h1.eval((0, 0)) == 0
    assert (x**2 + y**2 + z**2).eval((1, 2, 3)) == 14
    assert isinstance(h1.eval((Fraction(1, 3), Fraction(2, 5), 0)), Fraction)


def test_numeric_matches_exact(rng):
    for _ in range(10):
        p = random_poly(rng)
        pts = [tuple(Fraction(int(v), 7) for v in rng.integers(-9, 10, 3)) for _ in range(5)]
        ev = NumericPoly([p])
        for pt in pts:
            assert float(p.eval(pt)) == pytest.approx(float(ev(*map(float, pt))[0]), rel=1e-12, abs=1e-12)


# blow-up --------------------------------------------------------------

def test_compose_blowup_examples():
    assert compose_blowup(x) == x * z
    assert compose_blowup(x**2 + y**3) == x**2 * z**2 + y**3 * z**3
    assert compose_blowup(z) == z


@pytest.mark.parametrize("f,order,quotient", [
    (x, 1, x),
    (x**2 + y**3, 2, x**2 + y**3 * z),
    (z * x**2, 3, x**2),
])
def test_z_order_hand_oracles(f, order, quotient):
    d = z_order_decompose(f)
    assert isinstance(d, BlowupDecomposition)
    assert (d.order, d.quotient) == (order, quotient)


def test_z_order_rejects_zero():
    with pytest.raises(PolyError):
        z_order_decompose(Poly())


def test_z_order_flags_quotient_off_origin():
    assert z_order_decompose(z**2).warning is not None
    assert z_order_decompose(x).warning is None


def test_z_order_round_trip_random(rng):
    for _ in range(100):
        f = random_poly(rng)
        if f.is_zero():
            continue
        d = z_order_decompose(f)
        assert compose_blowup(f) == d.quotient.mul_z_power(d.order)
        assert not d.quotient.restrict_z0().is_zero()


@given(nonzero_polys())
def test_blowdown_identity(f):
    d = blowdown_decompose(f)
    lhs = d.quotient.compose_blowup()
    if d.order >= 0:
        assert lhs == f.mul_z_power(d.order)
    else:
        assert lhs.mul_z_power(-d.order) == f
    assert not d.quotient.restrict_z0().is_zero()


@given(polys(), rationals, rationals, rationals)
def test_blowup_eval(f, a, b, c):
    assert compose_blowup(f).eval((a, b, c)) == f.eval((a * c, b * c, c))


# resultants -------------------------------------------------------------

def test_resultant_examples():
    assert resultant(y - x, y + x, "y") == 2 * x
    assert resultant(y, y, "y").is_zero()
    assert resultant(y, x, "y") == x


def test_resultant_degenerate():
    with pytest.raises(PolyError):
        resultant(x, x + 1, "y")


def test_resultant_vanishes_at_common_roots(rng):
    for _ in range(10):
        a, r1, r2 = (Fraction(int(v), 3) for v in rng.integers(-6, 7, 3))
        # a common factor for every x: identically zero
        assert resultant((y - x - a) * (y + r1), (y - x - a) * (y * y + x + r2), "y").is_zero()
        # y = x^2 + a and y = x + r1 meet exactly where x^2 - x + a - r1 = 0
        res = resultant(y - x * x - a, y - x - r1, "y")
        roots = real_roots(univariate_coeffs(x * x - x + a - r1, "x"))
        for t in roots:
            assert abs(float(res.eval((Fraction(t), 0)))) < 1e-9
        t = Fraction(1, 7)
        assert abs(res.eval((t, 0))) == abs(t * t - t + a - r1)
    # rational shared root: y - x and y - 1 share y = 1 only at x = 1
    res = resultant(y - x, y - 1, "y")
    assert res.eval((1, 0)) == 0 and res.eval((2, 0)) != 0


def test_real_roots():
    coeffs = univariate_coeffs((x - Fraction(1, 2)) ** 2 * (x + 1) * (x * x + 1), "x")
    assert sorted(real_roots(coeffs)) == pytest.approx([-1.0, 0.5], abs=1e-12)
    assert np.isfinite(real_roots(univariate_coeffs(x**3 - 2, "x"))).all()
