"""Checks that a planar polynomial h is adapted.

Three conditions on ``Gamma = V(h) ∩ closed unit disk``: Gamma connected and
nonempty; finitely many points where h, h_x, h_y vanish together; finitely
many unit-circle zeros, each crossing transversally
(``<grad-perp h(p), p> != 0``).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .contour import PlanarCurveSet, contour, count_components, shifted_grid
from .polyalg import NumericPoly, Poly, PolyError, real_roots, resultant, univariate_coeffs

DEFAULT_RESOLUTION = 1.0 / 512
SUBDIVISION_DEPTH = 12


def _require_planar(h: Poly):
    if h.is_zero():
        raise PolyError("h must be a nonzero polynomial")
    if "z" in h.variables():
        raise PolyError("h must be a polynomial in x and y only")


def lipschitz_bound(h: Poly, radius: float = 1.5) -> float:
    """Crude bound for |grad h| on the square of half-width ``radius``."""
    total = 0.0
    for (a, b, _), c in h.items():
        d = a + b
        if d:
            total += abs(float(c)) * d * radius ** (d - 1)
    return total


def sample_gamma(h: Poly, resolution: float = DEFAULT_RESOLUTION) -> PlanarCurveSet:
    """Marching-squares approximation of ``V(h) ∩ closed unit disk``."""
    if resolution <= 0:
        raise ValueError("resolution must be positive")
    _require_planar(h)
    xs = shifted_grid(-1.0, 1.0, resolution)
    vals = NumericPoly([h]).grid_xy(xs, xs, 0.0)
    polylines = contour(vals, xs, xs, 0.0, clip_radius=1.0)
    tol = 2.0 * lipschitz_bound(h, 1.0 + 2 * resolution) * resolution
    return PlanarCurveSet(polylines, resolution, tol)


def check_connected_nonempty(curves: PlanarCurveSet, glue_tol: float | None = None) -> tuple[bool, int]:
    """``(nonempty and connected, component count)`` at the given glue tolerance."""
    if glue_tol is None:
        glue_tol = 2.0 * curves.resolution
    n = count_components(curves, glue_tol)
    return n == 1, n


@dataclass
class SingularityVerdict:
    verdict: str  # "finite" | "infinite" | "inconclusive"
    points: list[tuple[float, float]] = field(default_factory=list)
    method: str = "resultant"
    detail: str = ""


def check_finite_singularities(h: Poly, tol: float = 1e-9, depth: int = SUBDIVISION_DEPTH,
                               box: float = 2.0) -> SingularityVerdict:
    """Decide whether ``V(h, h_x, h_y)`` is finite and locate its points.

    Nonzero resultants ``Res_y(h_x, h_y)`` and ``Res_x(h_x, h_y)`` prove the
    common zeros of the gradient are finite; candidates come from their real
    roots and are kept when ``h``, ``h_x``, ``h_y`` are all small there.
    Otherwise a quadtree over ``[-box, box]^2`` looks for a curve of
    near-singular cells.
    """
    _require_planar(h)
    hx, hy = h.partial("x"), h.partial("y")
    try:
        rx = resultant(hx, hy, "y") if not (hx.is_zero() or hy.is_zero()) else Poly()
        ry = resultant(hx, hy, "x") if not (hx.is_zero() or hy.is_zero()) else Poly()
    except PolyError:
        rx = ry = Poly()
    if hx.is_zero() and hy.is_zero():
        return SingularityVerdict("inconclusive", [], "none", "h is constant")
    if not rx.is_zero() and not ry.is_zero():
        xr = real_roots(univariate_coeffs(rx, "x")) if rx.degree() > 0 else []
        yr = real_roots(univariate_coeffs(ry, "y")) if ry.degree() > 0 else []
        f = NumericPoly([h, hx, hy])
        scale = max(1.0, max(abs(float(c)) for _, c in h.items()))
        pts = []
        for xv in xr:
            for yv in yr:
                vals = f(xv, yv, 0.0)
                if np.all(np.abs(vals) <= 1e-8 * scale):
                    pts.append((_snap(xv, tol), _snap(yv, tol)))
        pts.sort()
        return SingularityVerdict("finite", pts, "resultant",
                                  f"{len(xr)} x-roots, {len(yr)} y-roots")
    return _subdivision_verdict(h, depth, box)


def _snap(v: float, tol: float) -> float:
    return 0.0 if abs(v) < tol else float(v)


def _subdivision_verdict(h: Poly, depth: int, box: float) -> SingularityVerdict:
    hx, hy = h.partial("x"), h.partial("y")
    f = NumericPoly([h, hx, hy])
    L = max(lipschitz_bound(p, box) for p in (h, hx, hy) if not p.is_zero()) if not all(
        p.is_zero() for p in (h, hx, hy)) else 0.0
    cells = np.array([[-box, -box]])
    size = 2 * box
    counts = []
    for level in range(depth):
        size /= 2
        offs = np.array([[0, 0], [size, 0], [0, size], [size, size]])
        cells = (cells[:, None, :] + offs[None, :, :]).reshape(-1, 2)
        centres = cells + size / 2
        vals = np.abs(f(centres[:, 0], centres[:, 1], np.zeros(len(centres))))
        keep = vals.max(axis=0) <= L * size * math.sqrt(2) / 2 + 1e-14
        cells = cells[keep]
        counts.append(len(cells))
        if not len(cells):
            return SingularityVerdict("finite", [], "subdivision", f"no cell survives level {level + 1}")
        if len(cells) > 400000:
            break
    # a curve of singular points keeps ~ length/size cells; isolated points keep O(1)
    grew = len(counts) >= 3 and counts[-1] >= 1.6 * counts[-2] and counts[-2] >= 1.6 * counts[-3]
    verdict = "infinite" if grew else "inconclusive"
    return SingularityVerdict(verdict, [], "subdivision", f"surviving cells per level {counts}")


@dataclass
class BoundaryPoints:
    points: list[tuple[float, float]]
    suspects: list[tuple[float, float]]
    degenerate: bool = False


def boundary_points(h: Poly, samples: int = 4096, tol: float = 1e-12) -> BoundaryPoints:
    """Zeros of ``c(t) = h(cos t, sin t)`` refined by bisection.

    Sign changes on a uniform grid of ``[0, 2 pi)`` are refined to ``tol``;
    local minima of ``|c|`` that dip near zero without a sign change are
    returned as tangential ``suspects``.  ``c`` identically zero on the
    circle gives ``degenerate=True``.
    """
    if samples < 16:
        raise ValueError("need at least 16 samples")
    _require_planar(h)
    f = NumericPoly([h])
    # a shifted grid keeps sample points off rational angles like t = 0
    t = 2 * math.pi * (np.arange(samples) + 0.5) / samples

    def c(tt):
        tt = np.asarray(tt, float)
        return f(np.cos(tt), np.sin(tt), np.zeros_like(tt))[0]

    vals = c(t)
    scale = max(abs(float(v)) for _, v in h.items())
    if np.all(np.abs(vals) <= 1e-12 * scale):
        return BoundaryPoints([], [], degenerate=True)
    roots = []
    nxt = np.roll(vals, -1)
    for i in np.nonzero(vals == 0)[0]:
        roots.append(float(t[i]))
    for i in np.nonzero(vals * nxt < 0)[0]:
        a, b = float(t[i]), float(t[i]) + 2 * math.pi / samples
        fa = float(vals[i])
        while b - a > tol:
            m = 0.5 * (a + b)
            fm = float(c(m))
            if fm == 0:
                a = b = m
                break
            if (fm < 0) == (fa < 0):
                a, fa = m, fm
            else:
                b = m
        roots.append(0.5 * (a + b))
    # tangential suspects: |c| local minimum without sign change, below a small threshold
    absv = np.abs(vals)
    prev = np.roll(absv, 1)
    nxtv = np.roll(absv, -1)
    dip = (absv <= prev) & (absv <= nxtv) & (vals * np.roll(vals, 1) > 0) & (vals * nxt > 0)
    h_step = 2 * math.pi / samples
    suspects = []
    lip = lipschitz_bound(h, 1.0)
    for i in np.nonzero(dip)[0]:
        if absv[i] <= lip * h_step * 0.5:
            # refine the minimum by golden-section and test for an actual zero
            lo, hi = float(t[i]) - h_step, float(t[i]) + h_step
            for _ in range(80):
                m1 = lo + 0.382 * (hi - lo)
                m2 = lo + 0.618 * (hi - lo)
                if abs(c(m1)) < abs(c(m2)):
                    hi = m2
                else:
                    lo = m1
            tm = 0.5 * (lo + hi)
            q = (math.cos(tm), math.sin(tm))
            # equal neighbours give two dips for the same minimum
            if abs(float(c(tm))) <= 1e-9 * scale and all(math.dist(q, s) > 2 * h_step for s in suspects):
                suspects.append(q)
    pts = sorted(((math.cos(r), math.sin(r)) for r in roots), key=lambda p: math.atan2(p[1], p[0]))
    return BoundaryPoints(pts, suspects)


def transversality_values(h: Poly, points) -> list[float]:
    """``<grad-perp h(p), p> = -h_y(p) p_x + h_x(p) p_y`` at each point.

    Exact for rational points, floating otherwise.
    """
    hx, hy = h.partial("x"), h.partial("y")
    out = []
    for p in points:
        px, py = p
        out.append(-hy.eval((px, py)) * px + hx.eval((px, py)) * py)
    return out


def check_transversality(h: Poly, points, tol: float = 1e-9) -> tuple[bool, list[float]]:
    """Pass iff every ``|<grad-perp h(p), p>|`` exceeds ``tol`` (vacuous for no points)."""
    for p in points:
        if abs(math.hypot(float(p[0]), float(p[1])) - 1.0) > 1e-9:
            raise ValueError(f"point {p} is not on the unit circle")
    vals = transversality_values(h, points)
    return all(abs(float(v)) > tol for v in vals), vals


@dataclass
class AdaptednessReport:
    nonempty_connected: bool
    component_count: int
    finite_singular: str
    singular_points: list[tuple[float, float]]
    boundary_transversal: bool
    boundary: list[dict]
    overall: bool
    reasons: list[str]
    parameters: dict

    def to_json(self) -> dict:
        return asdict(self)


def check_adapted(h: Poly, resolution: float = DEFAULT_RESOLUTION, glue_tol: float | None = None,
                  samples: int = 4096, transversal_tol: float = 1e-9) -> AdaptednessReport:
    """Run the three adaptedness checks and aggregate them."""
    _require_planar(h)
    if glue_tol is None:
        glue_tol = 2.0 * resolution
    reasons = []
    gamma = sample_gamma(h, resolution)
    connected, ncomp = check_connected_nonempty(gamma, glue_tol)
    if ncomp == 0:
        reasons.append("Gamma empty")
    elif not connected:
        reasons.append(f"Gamma disconnected ({ncomp} components)")

    sing = check_finite_singularities(h)
    if sing.verdict != "finite":
        reasons.append(f"V(h, h_x, h_y) {sing.verdict}")

    bp = boundary_points(h, samples)
    if bp.degenerate:
        ok_b, vals = False, []
        reasons.append("h vanishes on the whole unit circle")
    else:
        ok_b, vals = check_transversality(h, bp.points, transversal_tol)
        if not ok_b:
            reasons.append("boundary crossing not transversal")
        if bp.suspects:
            ok_b = False
            reasons.append(f"{len(bp.suspects)} tangential zero(s) on the unit circle")
    boundary = [{"point": [float(p[0]), float(p[1])], "pairing": float(v)} for p, v in zip(bp.points, vals)]
    boundary += [{"point": [float(p[0]), float(p[1])], "pairing": 0.0, "tangential": True} for p in bp.suspects]
    overall = connected and sing.verdict == "finite" and ok_b
    return AdaptednessReport(
        nonempty_connected=connected,
        component_count=ncomp,
        finite_singular=sing.verdict,
        singular_points=[(float(a), float(b)) for a, b in sing.points],
        boundary_transversal=ok_b,
        boundary=boundary,
        overall=overall,
        reasons=reasons,
        parameters={
            "resolution": resolution,
            "glue_tol": glue_tol,
            "circle_samples": samples,
            "transversal_tol": transversal_tol,
            "singular_method": sing.method,
            "singular_detail": sing.detail,
            "gamma_vertices": int(len(gamma.vertices())),
        },
    )
