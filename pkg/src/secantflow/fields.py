"""Polynomial vector fields: the chart field X, the global field Y and their identities.

In the z-chart the field is

    X = Hor(H) + z^b1 Ver(H) + z^b2 Per(H),

with ``Hor = (-H_y, H_x, 0)``, ``Ver = (H_x H_z, H_y H_z, -(H_x^2 + H_y^2))``
and ``Per = (0, 0, H)``.  The ambient field ``Y = (A + C x, B + C y, C z)``
is built from the blow-down images ``psi`` so that pulling it back through
``sigma(x, y, z) = (xz, yz, z)`` gives ``z^alpha X`` exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .levelsets import SurfaceFamily, check_isolated_origin
from .polyalg import NumericPoly, Poly, PolyError, blowdown_decompose, parse_poly


class LedgerError(PolyError):
    """An exponent of the construction came out below its required bound."""


class NotLiftableError(PolyError):
    """The field has no polynomial expression in the z-chart."""


@dataclass(frozen=True)
class VectorField3:
    """``px d/dx + py d/dy + pz d/dz`` with polynomial components."""

    px: Poly
    py: Poly
    pz: Poly

    @property
    def components(self) -> tuple[Poly, Poly, Poly]:
        return (self.px, self.py, self.pz)

    def __add__(self, other: "VectorField3") -> "VectorField3":
        return VectorField3(self.px + other.px, self.py + other.py, self.pz + other.pz)

    def __sub__(self, other: "VectorField3") -> "VectorField3":
        return VectorField3(self.px - other.px, self.py - other.py, self.pz - other.pz)

    def times(self, p) -> "VectorField3":
        """Multiply every component by a polynomial or constant."""
        return VectorField3(self.px * p, self.py * p, self.pz * p)

    def mul_z_power(self, k: int) -> "VectorField3":
        return VectorField3(self.px.mul_z_power(k), self.py.mul_z_power(k), self.pz.mul_z_power(k))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def eval(self, point) -> tuple:
        return tuple(c.eval(point) for c in self.components)

    def numeric(self) -> NumericPoly:
        return NumericPoly(list(self.components))

    def abs_numeric(self) -> NumericPoly:
        """Same monomials with absolute coefficients; bounds the rounding error of :meth:`numeric`."""
        return NumericPoly([Poly({m: abs(c) for m, c in p.items()}) for p in self.components])

    def to_json(self) -> list[str]:
        return [c.to_text() for c in self.components]

    @classmethod
    def from_json(cls, data) -> "VectorField3":
        return cls(*(parse_poly(t) for t in data))


def horizontal(H: Poly) -> VectorField3:
    return VectorField3(-H.partial("y"), H.partial("x"), Poly())


def vertical(H: Poly) -> VectorField3:
    Hx, Hy, Hz = H.partial("x"), H.partial("y"), H.partial("z")
    return VectorField3(Hx * Hz, Hy * Hz, -(Hx * Hx + Hy * Hy))


def perturbed(H: Poly) -> VectorField3:
    return VectorField3(Poly(), Poly(), H)


def lie_derivative(W: VectorField3, F: Poly) -> Poly:
    return W.px * F.partial("x") + W.py * F.partial("y") + W.pz * F.partial("z")


def assemble_X(H: Poly, beta1: int, beta2: int) -> VectorField3:
    if beta1 < 1 or beta2 < 1:
        raise ValueError("beta1 and beta2 must be positive")
    return horizontal(H) + vertical(H).mul_z_power(beta1) + perturbed(H).mul_z_power(beta2)


def tangency_holds(X: VectorField3, H: Poly, beta2: int) -> bool:
    """``X(H) = z^beta2 H H_z`` and ``z | X_z``, both exactly."""
    ok = lie_derivative(X, H) == (H * H.partial("z")).mul_z_power(beta2)
    return ok and X.pz.z_divisible(1)


@dataclass(frozen=True)
class ExponentLedger:
    alpha: int
    beta1_min: int
    beta1: int
    beta2: int
    a1: int
    a2: int
    b1: int
    b2: int
    c1: int
    c2: int
    phi_H: int
    phi_Hx: int
    phi_Hy: int
    phi_Hz: int

    def star_checks(self) -> dict[str, int]:
        """Exponents of ``z`` left in ``A, B, C`` after pulling back and dividing by ``z^(alpha+1)`` (resp. ``z^alpha``)."""
        a = self.alpha
        return {
            "a1*": self.a1 + self.phi_Hy - a - 1,
            "a2*": self.a2 + self.phi_Hx + self.phi_Hz - a - 1,
            "b1*": self.b1 + self.phi_Hx - a - 1,
            "b2*": self.b2 + self.phi_Hy + self.phi_Hz - a - 1,
            "c1*": self.c1 + 2 * self.phi_Hx - a,
            "c2*": self.c2 + 2 * self.phi_Hy - a,
            "c3*": self.phi_H - a,
        }

    def star_checks_ok(self) -> bool:
        s = self.star_checks()
        b1, b2 = self.beta1, self.beta2
        return (s["a1*"] == 0 and s["b1*"] == 0 and s["a2*"] == b1 and s["b2*"] == b1
                and s["c1*"] == b1 - 1 and s["c2*"] == b1 - 1 and s["c3*"] == b2 - 1)

    def to_json(self) -> dict:
        d = {k: getattr(self, k) for k in self.__dataclass_fields__}
        d["star_checks"] = self.star_checks()
        return d

    @classmethod
    def from_json(cls, d: dict) -> "ExponentLedger":
        return cls(**{k: int(d[k]) for k in cls.__dataclass_fields__})


def exponent_ledger(H: Poly, beta1_extra: int = 0) -> ExponentLedger:
    """All exponents of the construction, from the blow-down orders ``phi``.

    Raises :class:`PolyError` when one of ``H, H_x, H_y, H_z`` is zero and
    :class:`LedgerError` naming the first violated bound otherwise.
    """
    if beta1_extra < 0:
        raise ValueError("beta1_extra must be non-negative")
    parts = {"H": H, "H_x": H.partial("x"), "H_y": H.partial("y"), "H_z": H.partial("z")}
    for name, p in parts.items():
        if p.is_zero():
            raise PolyError(f"phi({name}) undefined: {name} is identically zero")
    phi = {name: blowdown_decompose(p).order for name, p in parts.items()}
    for name, v in phi.items():
        if v < 0:
            raise LedgerError(f"phi({name}) = {v} is negative")
    pH, px, py, pz = phi["H"], phi["H_x"], phi["H_y"], phi["H_z"]
    alpha = max(py, px)
    beta1_min = max(2 * (px + py) + pz - alpha + 2, 1)
    beta1 = beta1_min + beta1_extra
    beta2 = pH - alpha + 1
    bullets = [
        ("beta2", beta2, "beta2 = phi(H) - alpha + 1 >= 1"),
        ("a1", alpha + 1 - py, "a1 = alpha + 1 - phi(H_y) >= 1"),
        ("a2", alpha + beta1 + 1 - px - pz, "a2 = alpha + beta1 + 1 - phi(H_x) - phi(H_z) >= 1"),
        ("b1", alpha + 1 - px, "b1 = alpha + 1 - phi(H_x) >= 1"),
        ("b2", alpha + beta1 + 1 - py - pz, "b2 = alpha + beta1 + 1 - phi(H_y) - phi(H_z) >= 1"),
        ("c1", alpha + beta1 - 1 - 2 * px, "c1 = alpha + beta1 - 1 - 2 phi(H_x) >= 1"),
        ("c2", alpha + beta1 - 1 - 2 * py, "c2 = alpha + beta1 - 1 - 2 phi(H_y) >= 1"),
    ]
    vals = {}
    for name, v, rule in bullets:
        if v < 1:
            raise LedgerError(f"{rule} violated ({name} = {v})")
        vals[name] = v
    return ExponentLedger(alpha=alpha, beta1_min=beta1_min, beta1=beta1, beta2=beta2, phi_H=pH, phi_Hx=px,
                          phi_Hy=py, phi_Hz=pz, **{k: vals[k] for k in ("a1", "a2", "b1", "b2", "c1", "c2")})


def assemble_Y(H: Poly, ledger: ExponentLedger) -> VectorField3:
    """``Y = (A + C x, B + C y, C z)`` from the psi-images of ``H`` and its partials."""
    psi = {name: blowdown_decompose(p).quotient
           for name, p in (("H", H), ("Hx", H.partial("x")), ("Hy", H.partial("y")), ("Hz", H.partial("z")))}
    L = ledger
    A = (-psi["Hy"]).mul_z_power(L.a1) + (psi["Hx"] * psi["Hz"]).mul_z_power(L.a2)
    B = psi["Hx"].mul_z_power(L.b1) + (psi["Hy"] * psi["Hz"]).mul_z_power(L.b2)
    C = -(psi["Hx"] ** 2).mul_z_power(L.c1) - (psi["Hy"] ** 2).mul_z_power(L.c2) + psi["H"]
    x, y, z = Poly.gens()
    return VectorField3(A + C * x, B + C * y, C * z)


def chart_pullback(W: VectorField3) -> VectorField3:
    """Expression of ``W`` in the z-chart of the blow-up of the origin.

    ``((P o s - x R o s) / z, (Q o s - y R o s) / z, R o s)``; raises
    :class:`NotLiftableError` when a division is not exact.
    """
    x, y, _ = Poly.gens()
    P, Q, R = (c.compose_blowup() for c in W.components)
    nx = P - x * R
    ny = Q - y * R
    if not (nx.z_divisible(1) and ny.z_divisible(1)):
        raise NotLiftableError("field not liftable through chart")
    return VectorField3(nx.div_z_power(1), ny.div_z_power(1), R)


@dataclass(frozen=True)
class Verdict:
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def verify_strict_transform(Y: VectorField3, X: VectorField3, alpha: int) -> Verdict:
    """Does ``chart_pullback(Y) == z^alpha X`` hold exactly?"""
    try:
        pulled = chart_pullback(Y)
    except NotLiftableError as e:
        return Verdict(False, str(e))
    if alpha < 0:
        return Verdict(False, "alpha must be non-negative")
    target = X.mul_z_power(alpha)
    for name, a, b in zip("xyz", pulled.components, target.components):
        if a != b:
            return Verdict(False, f"{name}-component differs")
    return Verdict(True, "")


@dataclass
class FieldBundle:
    surface: SurfaceFamily
    ledger: ExponentLedger
    X: VectorField3
    Y: VectorField3

    def to_json(self) -> dict:
        return {"surface": self.surface.to_json(), "ledger": self.ledger.to_json(),
                "X": self.X.to_json(), "Y": self.Y.to_json()}

    @classmethod
    def from_json(cls, d: dict) -> "FieldBundle":
        return cls(SurfaceFamily.from_json(d["surface"]), ExponentLedger.from_json(d["ledger"]),
                   VectorField3.from_json(d["X"]), VectorField3.from_json(d["Y"]))


def build_bundle(surface: SurfaceFamily, beta1_extra: int = 0) -> FieldBundle:
    ledger = exponent_ledger(surface.H, beta1_extra)
    X = assemble_X(surface.H, ledger.beta1, ledger.beta2)
    Y = assemble_Y(surface.H, ledger)
    return FieldBundle(surface, ledger, X, Y)


# ---------------------------------------------------------------------------
# numeric checks
# ---------------------------------------------------------------------------

@dataclass
class SingularSetReport:
    ok: bool
    n_members: int
    max_norm_members: float
    n_nonmembers: int
    min_norm_nonmembers: float
    exact_zero_points: list

    def to_json(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def singular_set_check(X: VectorField3, H: Poly, points=(), n_samples: int = 2000, box: float = 1.0,
                       z_range=(-0.25, 0.25), tol: float = 1e-9, margin: float = 1e-3,
                       rng: np.random.Generator | None = None) -> SingularSetReport:
    """Two-sided sampling of ``Sing(X) = V(z H, H_x, H_y)``.

    ``points`` are candidate members; rational ones are evaluated exactly.
    Random samples of ``[-box, box]^2 x z_range`` that miss the variety by
    more than ``margin`` must have ``|X| > 0``; their minimum is reported.
    """
    rng = rng if rng is not None else np.random.default_rng(0)
    Hx, Hy = H.partial("x"), H.partial("y")
    member_ev = NumericPoly([H, Hx, Hy])
    Xn = X.numeric()
    ok = True
    exact_zero = []
    max_member = 0.0
    n_members = 0
    for p in points:
        p = tuple(p)
        vals = member_ev(*(float(c) for c in p))
        if not (abs(vals[1]) <= tol and abs(vals[2]) <= tol and (abs(float(p[2])) <= tol or abs(vals[0]) <= tol)):
            continue
        n_members += 1
        exact = all(isinstance(c, int) or hasattr(c, "denominator") for c in p)
        if exact:
            v = X.eval(p)
            is_zero = all(c == 0 for c in v)
            exact_zero.append(is_zero)
            norm = 0.0 if is_zero else float(math.sqrt(sum(float(c) ** 2 for c in v)))
        else:
            norm = float(np.linalg.norm(Xn(*(float(c) for c in p))))
        max_member = max(max_member, norm)
        if norm > tol:
            ok = False
    P = np.column_stack([rng.uniform(-box, box, n_samples), rng.uniform(-box, box, n_samples),
                         rng.uniform(z_range[0], z_range[1], n_samples)])
    m = member_ev(P[:, 0], P[:, 1], P[:, 2])
    miss = np.maximum(np.maximum(np.abs(m[1]), np.abs(m[2])), np.minimum(np.abs(P[:, 2]), np.abs(m[0]))) > margin
    Q = P[miss]
    v = Xn(Q[:, 0], Q[:, 1], Q[:, 2])
    norms = np.sqrt((v**2).sum(axis=0)) if len(Q) else np.array([math.inf])
    min_non = float(norms.min())
    if not min_non > 0:
        ok = False
    return SingularSetReport(ok, n_members, max_member, int(len(Q)), min_non, exact_zero)


def sphere_points(n: int) -> np.ndarray:
    """Fibonacci lattice on the unit sphere plus a dense equator."""
    k = np.arange(n) + 0.5
    zc = 1 - 2 * k / n
    th = math.pi * (1 + 5**0.5) * k
    rr = np.sqrt(1 - zc * zc)
    fib = np.column_stack([rr * np.cos(th), rr * np.sin(th), zc])
    t = 2 * math.pi * (np.arange(n // 4) + 0.5) / (n // 4)
    eq = np.column_stack([np.cos(t), np.sin(t), np.zeros_like(t)])
    return np.vstack([fib, eq])


def _refine_sphere_min(ev, r: float, starts: np.ndarray) -> float:
    """Local minima of ``|Y|`` on the sphere of radius ``r``, started from unit vectors."""

    def norm_at(angles):
        th, ph = angles
        p = r * np.array([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)])
        return float(np.linalg.norm(ev(*p)))

    best = math.inf
    for u in starts:
        th0 = math.acos(max(-1.0, min(1.0, float(u[2]))))
        res = minimize(norm_at, [th0, math.atan2(u[1], u[0])], method="Nelder-Mead",
                       options={"xatol": 1e-10, "fatol": 0.0, "maxiter": 400})
        best = min(best, float(res.fun))
    return best


def isolated_singularity_check(Y: VectorField3, radii, samples: int = 4000, surface=None,
                               rel_floor: float = 1e-12, refine: int = 8) -> tuple[bool, list[dict]]:
    """Is ``min |Y|`` positive on spheres of the given radii?

    The ``refine`` lowest samples on each sphere seed a local minimizer, so
    zeros between samples are found.
    A sphere passes when its minimum exceeds ``rel_floor`` times the largest
    absolute-coefficient bound on the sphere, which is the size of rounding
    noise in the evaluation.  With ``surface`` given, the restriction
    ``psi(H)(x, y, 0)`` is also checked on punctured circles.
    """
    radii = [float(r) for r in radii]
    if any(r <= 0 for r in radii) or any(b >= a for a, b in zip(radii, radii[1:])):
        raise ValueError("radii must be positive and strictly decreasing")
    U = sphere_points(samples)
    ev, aev = Y.numeric(), Y.abs_numeric()
    ok = True
    profile = []
    for r in radii:
        P = r * U
        v = ev(P[:, 0], P[:, 1], P[:, 2])
        a = aev(np.abs(P[:, 0]), np.abs(P[:, 1]), np.abs(P[:, 2]))
        norms = np.sqrt((v**2).sum(axis=0))
        floor = rel_floor * float(np.sqrt((a**2).sum(axis=0)).max())
        m = min(float(norms.min()), _refine_sphere_min(ev, r, U[np.argsort(norms)[:refine]]))
        passed = m > floor
        ok &= passed
        profile.append({"radius": r, "min_norm": m, "floor": floor, "pass": bool(passed)})
    if surface is not None:
        origin_ok, circles = check_isolated_origin(surface)
        ok &= origin_ok
        profile.append({"psi_H_z0": circles, "pass": bool(origin_ok)})
    return bool(ok), profile
