"""Gamma-convergent surface polynomials and their level-set diagnostics.

A :class:`SurfaceFamily` is a polynomial ``H(x, y, z)`` whose positive
slices ``L_z = {H(., ., z) = 0}`` shrink onto ``Gamma = V(h) ∩ unit disk``.
The plain member is

    H = h^2 + s g + sign * alpha * z^4,

the isolated member multiplies ``g`` by ``f = ((x - x0)^2 + (y - y0)^2)^M``.

``g`` is ``z * (core_N + g_tilde)`` where ``core_N`` is the binomial sum
``sum_{i=1..N} C(N, i) x^{2i} y^{2(N-i)}`` (:func:`build_g`).  With
``g_tilde = 0`` every term of ``H`` is non-negative for ``z > 0`` and the
slices are empty, so the default ``barrier="shaped"`` uses

    g = z * ((r^{2N} - 1) * D * W + kappa * z),

negative inside the unit disk and positive outside.  Here
``W = h_x^2 + h_y^2 + w0 + eps * r^{2(deg h - 1)}`` evens out the tube
width along Gamma and keeps it open at the critical points of ``h``, and ``D = prod |p - c_k|^2`` vanishes at cut points ``c_k`` on
Gamma.  The cuts open small gaps that break every cycle of Gamma, so each
slice is one closed curve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.spatial import cKDTree

from . import adapted
from .contour import PlanarCurveSet, component_labels, contour, count_components, hausdorff_distance, shifted_grid
from .polyalg import NumericPoly, Poly, PolyError, binomial, blowdown_decompose

SLICE_HALF_WIDTH = 1.5
DEFAULT_G_SCALE = Fraction(1, 64)
DEFAULT_WEIGHT_EPS = Fraction(1, 100)
DEFAULT_KAPPA = Fraction(7, 1000)
DEFAULT_WEIGHT_FLOOR = Fraction(1, 1000)
ALPHA_SCAN = tuple(Fraction(k, 8) for k in range(1, 8))


def build_g(N: int) -> Poly:
    """``z * sum_{i=1..N} C(N, i) x^{2i} y^{2(N-i)}``, i.e. ``z * ((x^2+y^2)^N - y^{2N})``."""
    if N < 1:
        raise ValueError("N must be a positive integer")
    x, y, z = Poly.gens()
    core = Poly()
    for i in range(1, N + 1):
        core = core + Poly.monomial(2 * i, 2 * (N - i), 0, binomial(N, i))
    return z * core


def cut_factor(cuts) -> Poly:
    """``prod_k ((x - a_k)^2 + (y - b_k)^2)``; 1 for no cuts."""
    x, y, _ = Poly.gens()
    D = Poly.const(1)
    for a, b in cuts:
        D = D * ((x - Fraction(a)) ** 2 + (y - Fraction(b)) ** 2)
    return D


def barrier_g(h: Poly, N: int, cuts=(), weight_eps=DEFAULT_WEIGHT_EPS, kappa=DEFAULT_KAPPA,
              weight_floor=DEFAULT_WEIGHT_FLOOR) -> Poly:
    """The shaped ``g = z * ((r^{2N} - 1) * D * W + kappa * z)`` (see module docstring)."""
    if N < 1:
        raise ValueError("N must be a positive integer")
    x, y, z = Poly.gens()
    r2 = x**2 + y**2
    d = max(h.degree(), 1)
    W = h.partial("x") ** 2 + h.partial("y") ** 2 + Fraction(weight_floor) + Fraction(weight_eps) * r2 ** (d - 1)
    return z * ((r2**N - 1) * cut_factor(cuts) * W + Fraction(kappa) * z)


def base_point_factor(base_point, M: int) -> Poly:
    """``f = ((x - x0)^2 + (y - y0)^2)^M``."""
    x, y, _ = Poly.gens()
    x0, y0 = (Fraction(c) for c in base_point)
    return ((x - x0) ** 2 + (y - y0) ** 2) ** M


def default_N(h: Poly) -> int:
    """Smallest N with ``2N >= deg(h^2)``."""
    return max(1, h.degree())


@dataclass
class SurfaceFamily:
    """One member ``H`` of the plain or isolated family, with every parameter needed to rebuild it."""

    H: Poly
    h: Poly
    N: int
    alpha_param: Fraction
    isolated: bool = False
    M: int = 0
    base_point: tuple[Fraction, Fraction] | None = None
    z4_sign: int = 1
    g_scale: Fraction = DEFAULT_G_SCALE
    barrier: str = "shaped"
    cuts: list[tuple[Fraction, Fraction]] = field(default_factory=list)
    weight_eps: Fraction = DEFAULT_WEIGHT_EPS
    weight_floor: Fraction = DEFAULT_WEIGHT_FLOOR
    kappa: Fraction = DEFAULT_KAPPA
    notes: dict = field(default_factory=dict)

    def g(self) -> Poly:
        if self.barrier == "binomial":
            return build_g(self.N)
        return barrier_g(self.h, self.N, self.cuts, self.weight_eps, self.kappa, self.weight_floor)

    def f(self) -> Poly:
        if not self.isolated:
            return Poly.const(1)
        return base_point_factor(self.base_point, self.M)

    def rebuild(self) -> Poly:
        _, _, z = Poly.gens()
        return self.h * self.h + self.f() * self.g() * self.g_scale + z**4 * (self.z4_sign * self.alpha_param)

    def numeric(self) -> NumericPoly:
        return NumericPoly([self.H, self.H.partial("x"), self.H.partial("y")])

    def to_json(self) -> dict:
        return {
            "H": self.H.to_text(),
            "h": self.h.to_text(),
            "N": self.N,
            "alpha_param": str(self.alpha_param),
            "isolated": self.isolated,
            "M": self.M,
            "base_point": [str(c) for c in self.base_point] if self.base_point else None,
            "z4_sign": self.z4_sign,
            "g_scale": str(self.g_scale),
            "barrier": self.barrier,
            "cuts": [[str(a), str(b)] for a, b in self.cuts],
            "weight_eps": str(self.weight_eps),
            "weight_floor": str(self.weight_floor),
            "kappa": str(self.kappa),
            "notes": self.notes,
        }

    @classmethod
    def from_json(cls, d: dict) -> "SurfaceFamily":
        from .polyalg import parse_poly
        fam = cls(
            H=parse_poly(d["H"]),
            h=parse_poly(d["h"]),
            N=int(d["N"]),
            alpha_param=Fraction(d["alpha_param"]),
            isolated=bool(d["isolated"]),
            M=int(d["M"]),
            base_point=tuple(Fraction(c) for c in d["base_point"]) if d.get("base_point") else None,
            z4_sign=int(d["z4_sign"]),
            g_scale=Fraction(d["g_scale"]),
            barrier=d["barrier"],
            cuts=[(Fraction(a), Fraction(b)) for a, b in d["cuts"]],
            weight_eps=Fraction(d["weight_eps"]),
            weight_floor=Fraction(d["weight_floor"]),
            kappa=Fraction(d["kappa"]),
            notes=d.get("notes", {}),
        )
        return fam


def _check_alpha(alpha_param) -> Fraction:
    a = Fraction(alpha_param)
    if not 0 <= a <= 1:
        raise ValueError("alpha_param must lie in [0, 1]")
    return a


def build_H(h: Poly, N: int | None = None, alpha_param=Fraction(1, 2), *, g_scale=None,
            barrier: str = "shaped", cuts="auto", weight_eps=DEFAULT_WEIGHT_EPS, kappa=DEFAULT_KAPPA,
            weight_floor=DEFAULT_WEIGHT_FLOOR, z4_sign: int = 1) -> SurfaceFamily:
    """Plain family member ``h^2 + s g + z4_sign * alpha * z^4`` (``s = g_scale``)."""
    return _assemble(h, N, alpha_param, isolated=False, M=0, base_point=None, g_scale=g_scale,
                     barrier=barrier, cuts=cuts, weight_eps=weight_eps, kappa=kappa, weight_floor=weight_floor,
                     z4_sign=z4_sign)


def build_H_isolated(h: Poly, N: int | None = None, M: int = 1, base_point=(2, 2), alpha_param=Fraction(1, 2), *,
                     g_scale=None, barrier: str = "shaped", cuts="auto",
                     weight_eps=DEFAULT_WEIGHT_EPS, kappa=DEFAULT_KAPPA, weight_floor=DEFAULT_WEIGHT_FLOOR,
                     z4_sign: int = -1,
                     max_M: int = 64) -> SurfaceFamily:
    """Isolated family member ``h^2 + s f g + z4_sign * alpha * z^4`` (``s = g_scale``).

    ``M`` is raised until ``phi(f g) >= phi(h^2)`` and ``phi(f g) > 4``;
    the chosen value is recorded in ``notes``.
    """
    if M < 1:
        raise ValueError("M must be at least 1")
    x0, y0 = (Fraction(c) for c in base_point)
    if x0 * x0 + y0 * y0 <= 1:
        raise ValueError("base point must lie outside the closed unit disk")
    if h.eval((x0, y0)) == 0:
        raise ValueError("base point lies on V(h)")
    return _assemble(h, N, alpha_param, isolated=True, M=M, base_point=(x0, y0), g_scale=g_scale,
                     barrier=barrier, cuts=cuts, weight_eps=weight_eps, kappa=kappa, weight_floor=weight_floor,
                     z4_sign=z4_sign, max_M=max_M)


def _assemble(h, N, alpha_param, *, isolated, M, base_point, g_scale, barrier, cuts, weight_eps, kappa,
              weight_floor, z4_sign, max_M=64) -> SurfaceFamily:
    if h.is_zero() or "z" in h.variables():
        raise PolyError("h must be a nonzero polynomial in x and y")
    if barrier not in ("shaped", "binomial"):
        raise ValueError("barrier must be 'shaped' or 'binomial'")
    if z4_sign not in (1, -1):
        raise ValueError("z4_sign must be +1 or -1")
    alpha = _check_alpha(alpha_param)
    if N is None:
        N = default_N(h)
    if g_scale is None:
        g_scale = DEFAULT_G_SCALE if barrier == "shaped" else Fraction(1)
    fam = SurfaceFamily(H=Poly(), h=h, N=int(N), alpha_param=alpha, isolated=isolated, M=M,
                        base_point=base_point, z4_sign=z4_sign, g_scale=Fraction(g_scale), barrier=barrier,
                        cuts=[], weight_eps=Fraction(weight_eps), weight_floor=Fraction(weight_floor),
                        kappa=Fraction(kappa))
    if isolated:
        _choose_M(fam, max_M)
    if barrier == "shaped":
        if isinstance(cuts, str):
            if cuts != "auto":
                raise ValueError("cuts must be 'auto' or a list of points")
            fam.cuts = find_cuts(fam)
            fam.notes["cuts"] = "auto"
        else:
            fam.cuts = [(Fraction(a), Fraction(b)) for a, b in cuts]
            fam.notes["cuts"] = "given"
        if isolated:
            _choose_M(fam, max_M)
    fam.H = fam.rebuild()
    return fam


def _choose_M(fam: SurfaceFamily, max_M: int):
    phi_h2 = blowdown_decompose(fam.h * fam.h).order
    M = fam.M
    while True:
        fam.M = M
        phi_fg = blowdown_decompose(fam.f() * fam.g()).order
        if phi_fg >= phi_h2 and phi_fg > 4:
            break
        M += 1
        if M > max_M:
            raise ValueError("no M up to max_M satisfies phi(f g) >= phi(h^2) and phi(f g) > 4")
    fam.notes["phi_fg"] = phi_fg
    fam.notes["phi_h2"] = phi_h2
    fam.notes["M_chosen"] = M


# ---------------------------------------------------------------------------
# slices
# ---------------------------------------------------------------------------

def _as_poly(F) -> Poly:
    return F.H if isinstance(F, SurfaceFamily) else F


def slice_level_set(F, z0: float, resolution: float = adapted.DEFAULT_RESOLUTION,
                    half_width: float = SLICE_HALF_WIDTH, clip_radius: float | None = None) -> PlanarCurveSet:
    """``L_{z0} = {(x, y) : H(x, y, z0) = 0}`` over ``[-half_width, half_width]^2``.

    When ``H(., ., z0)`` does not change sign on the grid (always the case at
    ``z0 = 0``, where it is a square) the boundary of ``{|H| <= resolution^2}``
    is returned instead.  ``clip_radius`` clips the curves to a closed disk.
    """
    if resolution <= 0:
        raise ValueError("resolution must be positive")
    H = _as_poly(F)
    xs = shifted_grid(-half_width, half_width, resolution)
    vals = NumericPoly([H]).grid_xy(xs, xs, float(z0))
    level = 0.0
    if z0 == 0 or vals.min() >= 0 or vals.max() <= 0:
        vals = np.abs(vals)
        level = resolution**2
    return PlanarCurveSet(contour(vals, xs, xs, level, clip_radius), resolution, level + _edge_jump(vals, level))


def _edge_jump(vals: np.ndarray, level: float) -> float:
    """Largest change of ``vals`` along a grid edge that crosses ``level``.

    Bounds ``|H - level|`` at interpolated vertices when ``H`` is monotone
    along each crossed edge.
    """
    d = vals - level
    jumps = [0.0]
    for a, b in ((d[:, :-1], d[:, 1:]), (d[:-1, :], d[1:, :])):
        cross = a * b <= 0
        if cross.any():
            jumps.append(float(np.abs(a - b)[cross].max()))
    return max(jumps)


def slice_gradient_min(F, curves: PlanarCurveSet, z0: float) -> float:
    """``min |(H_x, H_y)|`` over the slice vertices (inf for an empty slice)."""
    if curves.empty:
        return math.inf
    H = _as_poly(F)
    ev = NumericPoly([H.partial("x"), H.partial("y")])
    P = curves.vertices()
    v = ev(P[:, 0], P[:, 1], np.full(len(P), float(z0)))
    return float(np.hypot(v[0], v[1]).min())


@dataclass
class ConvergenceReport:
    z_values: list[float]
    hausdorff: list[float]
    components: list[int]
    min_grad: list[float]
    convergent: bool
    connected: bool
    smooth: bool
    epsilon: float
    reasons: list[str]
    parameters: dict

    def to_json(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def non_increasing(values, slack: float = 0.0) -> bool:
    return all(b <= a + slack for a, b in zip(values, values[1:]))


def check_gamma_convergence(F, gamma: PlanarCurveSet, z_list, resolution: float = adapted.DEFAULT_RESOLUTION,
                            threshold: float = 0.05, glue_tol: float | None = None,
                            grad_tol: float = 0.0, clip_radius: float | None = None,
                            trend_slack: float | None = None) -> ConvergenceReport:
    """Slice at each ``z`` and compare with ``gamma``.

    ``convergent``: every slice nonempty, final distance <= ``threshold`` and
    distances non-increasing over the last half.  ``connected``/``smooth``:
    one component and ``min |(H_x, H_y)| > grad_tol`` for every ``z`` up to
    the reported ``epsilon`` (the largest ``z`` below which all slices pass).
    Slices are compared whole unless ``clip_radius`` is given.  The trend
    check ignores rises up to ``trend_slack`` (default: one grid cell).
    """
    z_list = [float(v) for v in z_list]
    if any(v <= 0 for v in z_list) or any(b >= a for a, b in zip(z_list, z_list[1:])):
        raise ValueError("z_list must be strictly decreasing and positive")
    if glue_tol is None:
        glue_tol = 2.0 * resolution
    if trend_slack is None:
        trend_slack = resolution
    dists, comps, grads, reasons = [], [], [], []
    for z0 in z_list:
        L = slice_level_set(F, z0, resolution, clip_radius=clip_radius)
        if L.empty:
            dists.append(math.inf)
            comps.append(0)
            grads.append(math.inf)
            reasons.append(f"empty slice at z={z0:g}")
            continue
        dists.append(hausdorff_distance(L, gamma))
        comps.append(count_components(L, glue_tol))
        grads.append(slice_gradient_min(F, L, z0))
    half = dists[len(dists) // 2:] if len(dists) > 1 else dists
    convergent = (all(math.isfinite(d) for d in dists) and dists[-1] <= threshold
                  and non_increasing(half, trend_slack))
    if math.isfinite(dists[-1]) and dists[-1] > threshold:
        reasons.append(f"final distance {dists[-1]:.4g} above {threshold}")
    if not non_increasing(half, trend_slack):
        reasons.append("distances not non-increasing over the last half")
    # epsilon: all slices with z <= epsilon are connected and smooth
    eps = 0.0
    for z0, c, gm in reversed(list(zip(z_list, comps, grads))):
        if c == 1 and math.isfinite(gm) and gm > grad_tol:
            eps = z0
        else:
            break
    connected = eps > 0 and all(c == 1 for z0, c in zip(z_list, comps) if z0 <= eps)
    smooth = eps > 0
    return ConvergenceReport(z_list, dists, comps, grads, convergent, connected, smooth, eps, reasons,
                             {"resolution": resolution, "threshold": threshold, "glue_tol": glue_tol,
                              "grad_tol": grad_tol, "clip_radius": clip_radius, "trend_slack": trend_slack})


def _circle_min(ev, r: float, samples: int) -> float:
    """``min |p|`` over the circle of radius ``r``; zero on a sign change.

    Local minima of the sampled values are refined by golden-section search,
    so tangential zeros between samples are not missed.
    """
    step = 2 * math.pi / samples
    th = step * (np.arange(samples) + 0.5)

    def val(t):
        t = np.asarray(t, float)
        return ev(r * np.cos(t), r * np.sin(t), np.zeros_like(t))[0]

    v = val(th)
    if (v * np.roll(v, -1) <= 0).any():
        return 0.0
    a = np.abs(v)
    best = float(a.min())
    for i in np.nonzero((a <= np.roll(a, 1)) & (a <= np.roll(a, -1)))[0]:
        lo, hi = th[i] - step, th[i] + step
        for _ in range(60):
            m1, m2 = lo + 0.382 * (hi - lo), lo + 0.618 * (hi - lo)
            if abs(val(m1)) < abs(val(m2)):
                hi = m2
            else:
                lo = m1
        best = min(best, float(abs(val(0.5 * (lo + hi)))))
    return best


def check_isolated_origin(F, levels=range(1, 13), samples: int = 720) -> tuple[bool, list[dict]]:
    """Is the origin an isolated zero of ``psi(H)(x, y, 0)``?

    Samples circles of radius ``2^-k`` and refines local minima.  A circle
    passes when the minimum exceeds the rounding floor of the evaluation.
    Also requires ``psi(H)(0, 0, 0) = 0`` exactly.  Raises
    :class:`PolyError` when ``psi(H)(x, y, 0)`` vanishes identically.
    """
    H = _as_poly(F)
    psi0 = blowdown_decompose(H).quotient.restrict_z0()
    if psi0.is_zero():
        raise PolyError("psi(H)(x, y, 0) is identically zero")
    ok = psi0.constant_term() == 0
    ev = NumericPoly([psi0])
    absev = NumericPoly([Poly({m: abs(c) for m, c in psi0.items()})])
    th = 2 * math.pi * (np.arange(samples) + 0.5) / samples
    profile = []
    for k in levels:
        r = 2.0 ** (-k)
        xs, ys = r * np.cos(th), r * np.sin(th)
        floor = 1e-13 * float(absev(xs, ys, np.zeros_like(xs))[0].max())
        m = _circle_min(ev, r, samples)
        passed = m > floor
        profile.append({"radius": r, "min_abs": m, "floor": floor, "pass": bool(passed)})
        ok &= passed
    return bool(ok), profile


def check_negative_side_smooth(F, z_list, resolution: float = adapted.DEFAULT_RESOLUTION,
                               grad_tol: float = 0.0) -> tuple[bool, list[dict]]:
    """Smoothness proxy (``min |(H_x, H_y)| > grad_tol``) on slices at negative heights.

    Empty slices pass vacuously and are flagged.
    """
    out = []
    ok = True
    for z0 in z_list:
        if z0 >= 0:
            raise ValueError("heights must be negative")
        L = slice_level_set(F, z0, resolution)
        g = slice_gradient_min(F, L, z0)
        passed = g > grad_tol
        out.append({"z": float(z0), "empty": L.empty, "min_grad": g, "pass": bool(passed)})
        ok &= passed
    return ok, out


# ---------------------------------------------------------------------------
# automatic cut points
# ---------------------------------------------------------------------------

CUT_PROBE_Z = 2.0 ** -6
CUT_PROBE_RESOLUTION = 1.0 / 256


def find_cuts(fam: SurfaceFamily, z_probe: float = CUT_PROBE_Z, resolution: float = CUT_PROBE_RESOLUTION,
              max_rounds: int = 16) -> list[tuple[Fraction, Fraction]]:
    """Choose points on Gamma whose removal leaves Gamma without cycles.

    Works on a probe slice: every slice component other than the outermost
    one bounds a hole of the tube around Gamma, i.e. a cycle.  For one hole
    per round, the cut goes on the Gamma edge separating that hole from a
    neighbouring component, at the point where ``|grad h| (1 - |p|^2)`` is
    largest (regular and away from the rim).  The point is projected onto
    V(h) and rounded to a nearby rational.  Rounds repeat until the probe
    slice is a single curve.
    """
    h = fam.h
    hx, hy = h.partial("x"), h.partial("y")
    grad = NumericPoly([h, hx, hy])
    cuts: list[tuple[Fraction, Fraction]] = []
    for _ in range(max_rounds):
        trial = SurfaceFamily(**{**fam.__dict__, "cuts": cuts, "notes": {}})
        trial.H = trial.rebuild()
        L = slice_level_set(trial, z_probe, resolution)
        if L.empty:
            break
        labels = component_labels(L, 2.0 * resolution)
        groups: dict[int, list[np.ndarray]] = {}
        for lab, seg in zip(labels, L.segments):
            groups.setdefault(lab, []).append(seg)
        if len(groups) <= 1:
            break
        pts = {k: np.vstack(v) for k, v in groups.items()}
        areas = {k: float(np.ptp(p[:, 0]) * np.ptp(p[:, 1])) for k, p in pts.items()}
        outer = max(areas, key=areas.get)
        best = None
        for k, p in pts.items():
            if k == outer:
                continue
            others = np.vstack([q for j, q in pts.items() if j != k])
            d, idx = cKDTree(others).query(p)
            near = d <= 3.0 * d.min() + 2 * resolution
            mids = 0.5 * (p[near] + others[idx[near]])
            v = grad(mids[:, 0], mids[:, 1], np.zeros(len(mids)))
            score = np.hypot(v[1], v[2]) * (1 - (mids**2).sum(axis=1))
            i = int(np.argmax(score))
            if best is None or score[i] > best[0]:
                best = (float(score[i]), mids[i])
        if best is None:
            break
        cuts.append(_project_rational(h, best[1]))
    return cuts


def _project_rational(h: Poly, p, max_den: int = 10**6, snap_den: int = 64) -> tuple[Fraction, Fraction]:
    """Newton-project ``p`` onto V(h) and pick a rational point nearby.

    A point on the ``1/snap_den`` lattice next to the projection is
    preferred when ``h`` vanishes on it exactly; otherwise each coordinate
    is rounded with ``limit_denominator``.
    """
    ev = NumericPoly([h, h.partial("x"), h.partial("y")])
    q = np.array(p, float)
    for _ in range(50):
        f, fx, fy = ev(q[0], q[1], 0.0)
        n2 = fx * fx + fy * fy
        if n2 == 0:
            break
        step = f / n2 * np.array([fx, fy])
        q = q - step
        if np.linalg.norm(step) < 1e-15:
            break
    base = np.round(q * snap_den).astype(int)
    offsets = sorted(((i, j) for i in (-1, 0, 1) for j in (-1, 0, 1)), key=lambda ij: abs(ij[0]) + abs(ij[1]))
    for i, j in offsets:
        pt = (Fraction(int(base[0]) + i, snap_den), Fraction(int(base[1]) + j, snap_den))
        if h.eval(pt) == 0:
            return pt
    return (Fraction(float(q[0])).limit_denominator(max_den), Fraction(float(q[1])).limit_denominator(max_den))


def scan_alpha(build, checks, candidates=ALPHA_SCAN):
    """First ``alpha`` in ``candidates`` whose family passes ``checks(family)``.

    Returns ``(family, alpha, log)``; ``family`` is None when nothing passes.
    """
    log = []
    for a in candidates:
        fam = build(a)
        ok = bool(checks(fam))
        log.append({"alpha": str(a), "pass": ok})
        if ok:
            return fam, a, log
    return None, None, log
