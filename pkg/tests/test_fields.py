from fractions import Fraction

import numpy as np
import pytest

from secantflow import fields, levelsets
from secantflow.fields import VectorField3
from secantflow.polyalg import Poly, PolyError, blowdown_decompose, parse_poly, random_poly

x, y, z = Poly.gens()
O = Poly()


def random_H(rng):
    while True:
        H = random_poly(rng, max_degree=5)
        if not H.is_zero():
            return H


# basic fields ------------------------------------------------------------------

def test_horizontal_examples(rng):
    assert fields.horizontal(x**2 + y**2) == VectorField3(-2 * y, 2 * x, O)
    assert fields.horizontal(x) == VectorField3(O, Poly.const(1), O)
    for _ in range(10):
        H = random_H(rng)
        assert fields.lie_derivative(fields.horizontal(H), H).is_zero()


def test_vertical_examples(rng):
    assert fields.vertical(z).is_zero()
    for _ in range(10):
        H = random_H(rng)
        V = fields.vertical(H)
        assert fields.lie_derivative(V, H).is_zero()
        assert fields.lie_derivative(V, z) == -(H.partial("x") ** 2 + H.partial("y") ** 2)
        P = rng.uniform(-2, 2, (3, 50))
        assert (V.numeric()(*P)[2] <= 0).all()


def test_perturbed_examples():
    assert fields.perturbed(Poly.const(1)) == VectorField3(O, O, Poly.const(1))
    assert fields.perturbed(x * y * z) == VectorField3(O, O, x * y * z)
    H = x**2 - y
    for p in [(1, 1, 0), (2, 4, 5), (Fraction(1, 3), Fraction(1, 9), 7)]:
        assert all(c == 0 for c in fields.perturbed(H).eval(p))


def test_lie_derivative_basic():
    assert fields.lie_derivative(VectorField3(Poly.const(1), O, O), x) == Poly.const(1)


# assemble_X ----------------------------------------------------------------------

def test_assemble_X_toy():
    assert fields.assemble_X(z, 1, 1) == VectorField3(O, O, z**2)
    with pytest.raises(ValueError):
        fields.assemble_X(z, 0, 1)


def test_assemble_X_tangency_random(rng):
    for _ in range(10):
        H = random_H(rng)
        b1, b2 = (int(v) for v in rng.integers(1, 6, 2))
        X = fields.assemble_X(H, b1, b2)
        assert fields.lie_derivative(X, H) == (H * H.partial("z")).mul_z_power(b2)
        assert X.pz.restrict_z0().is_zero()
        assert fields.tangency_holds(X, H, b2)


def test_X_z_component_formula(rng):
    H = random_H(rng)
    X = fields.assemble_X(H, 3, 2)
    expected = -(H.partial("x") ** 2 + H.partial("y") ** 2).mul_z_power(3) + H.mul_z_power(2)
    assert X.pz == expected


def test_vector_field_json_round_trip(rng):
    X = fields.assemble_X(random_H(rng), 2, 3)
    assert VectorField3.from_json(X.to_json()) == X


# ledger ------------------------------------------------------------------------

def _small_family():
    return levelsets.build_H(parse_poly("x^2+y^2-1/4"), 1, Fraction(1, 2), barrier="binomial")


def test_ledger_rules_hold():
    H = _small_family().H
    L = fields.exponent_ledger(H, 3)
    assert L.alpha == max(L.phi_Hx, L.phi_Hy)
    assert L.beta1 == L.beta1_min + 3
    assert L.beta1_min == 2 * (L.phi_Hx + L.phi_Hy) + L.phi_Hz - L.alpha + 2
    assert L.beta2 == L.phi_H - L.alpha + 1
    assert L.a1 + L.phi_Hy == L.alpha + 1
    assert L.b1 + L.phi_Hx == L.alpha + 1
    assert L.a2 + L.phi_Hx + L.phi_Hz == L.alpha + L.beta1 + 1
    assert L.b2 + L.phi_Hy + L.phi_Hz == L.alpha + L.beta1 + 1
    assert L.c1 + 2 * L.phi_Hx == L.alpha + L.beta1 - 1
    assert L.c2 + 2 * L.phi_Hy == L.alpha + L.beta1 - 1
    assert min(L.a1, L.a2, L.b1, L.b2, L.c1, L.c2, L.beta2) >= 1
    assert L.star_checks_ok()
    s = L.star_checks()
    assert s["a1*"] == 0 and s["b1*"] == 0 and s["c3*"] == L.beta2 - 1
    assert fields.ExponentLedger.from_json(L.to_json()) == L


def test_ledger_phi_values_match_blowdown():
    H = _small_family().H
    L = fields.exponent_ledger(H)
    assert L.phi_H == blowdown_decompose(H).order
    assert L.phi_Hz == blowdown_decompose(H.partial("z")).order


def test_ledger_errors():
    with pytest.raises(PolyError, match="H_z"):
        fields.exponent_ledger(x**2 + y**2)
    with pytest.raises(ValueError):
        fields.exponent_ledger(_small_family().H, -1)
    # H_x = z^3 has phi = -3
    with pytest.raises(fields.LedgerError, match="phi\\(H_x\\)"):
        fields.exponent_ledger(x * z**3 + y**3 + z)


def test_ledger_example1(bundle1):
    L = bundle1.ledger
    assert L.star_checks_ok()
    assert min(L.a1, L.a2, L.b1, L.b2, L.c1, L.c2) >= 1


# Y and the pull-back ---------------------------------------------------------------

def test_chart_pullback_oracles():
    assert fields.chart_pullback(VectorField3(x, O, O)) == VectorField3(x, O, O)
    assert fields.chart_pullback(VectorField3(O, O, z)) == VectorField3(-x, -y, z)
    with pytest.raises(fields.NotLiftableError, match="not liftable"):
        fields.chart_pullback(VectorField3(Poly.const(1), O, O))


def test_Y_structure(bundle1):
    Y, H = bundle1.Y, bundle1.surface.H
    psi0 = blowdown_decompose(H).quotient.restrict_z0()
    assert Y.px.restrict_z0() == psi0 * x
    assert Y.py.restrict_z0() == psi0 * y
    assert Y.pz.z_divisible(1)
    assert Y.eval((0, 0, 0)) == (0, 0, 0)


def test_strict_transform_and_breaking(bundle1):
    Y, X, a = bundle1.Y, bundle1.X, bundle1.ledger.alpha
    assert fields.verify_strict_transform(Y, X, a)
    # A + 1 spoils the identity (and even liftability)
    bad = VectorField3(Y.px + 1, Y.py, Y.pz)
    v = fields.verify_strict_transform(bad, X, a)
    assert not v and v.reason
    assert not fields.verify_strict_transform(Y, X, a + 1)
    assert not fields.verify_strict_transform(Y, X, a - 1)


def test_strict_transform_small_family_all_extras():
    H = _small_family().H
    for extra in (0, 1, 4):
        L = fields.exponent_ledger(H, extra)
        assert fields.verify_strict_transform(fields.assemble_Y(H, L), fields.assemble_X(H, L.beta1, L.beta2),
                                              L.alpha)


def test_bundle_json_round_trip(bundle1):
    B = fields.FieldBundle.from_json(bundle1.to_json())
    assert B.X == bundle1.X and B.Y == bundle1.Y and B.ledger == bundle1.ledger
    assert B.surface.H == bundle1.surface.H


# numeric checks ---------------------------------------------------------------------

def test_singular_set_example1(bundle1):
    H = bundle1.surface.H
    pts = [(a, b, 0) for a in (Fraction(1, 2), Fraction(-1, 2)) for b in (0, Fraction(1, 2), Fraction(-1, 2))]
    rep = fields.singular_set_check(bundle1.X, H, pts + [(0, 0, 0)], n_samples=500)
    assert rep.ok and rep.n_members == 7
    assert all(rep.exact_zero_points) and rep.min_norm_nonmembers > 0


def test_singular_set_nonmember():
    H = x + y**2 + z**2
    X = fields.assemble_X(H, 1, 1)
    assert max(abs(float(c)) for c in X.eval((1, 2, 3))) > 0  # H_x = 1 there
    rep = fields.singular_set_check(X, H, [(0, 0, 0)], n_samples=200)
    assert rep.n_members == 0 and rep.min_norm_nonmembers > 0


def test_isolated_singularity_radial():
    Y = VectorField3(x, y, z)
    ok, prof = fields.isolated_singularity_check(Y, [0.5, 0.25, 0.125])
    assert ok
    for p in prof:
        assert p["min_norm"] == pytest.approx(p["radius"], rel=1e-12)
        assert p["floor"] > 0


def test_isolated_singularity_detects_line():
    ok, _ = fields.isolated_singularity_check(VectorField3(x, y, O), [0.5, 0.25])
    assert not ok


def test_isolated_singularity_example1(bundle1):
    ok, prof = fields.isolated_singularity_check(bundle1.Y, [2.0**-k for k in range(3, 9)])
    assert ok and all(p["min_norm"] > p["floor"] > 0 for p in prof)


def test_isolated_singularity_radii_validation():
    with pytest.raises(ValueError):
        fields.isolated_singularity_check(VectorField3(x, y, z), [0.25, 0.5])


def test_sphere_points_unit():
    U = fields.sphere_points(500)
    assert np.allclose(np.linalg.norm(U, axis=1), 1.0, atol=1e-14)
