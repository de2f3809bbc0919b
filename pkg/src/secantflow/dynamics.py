"""Orbits of the chart and ambient fields, their secants, and spiral diagnostics.

Time integration uses a Dormand-Prince 5(4) pair written out below.  For
the chart field the state can be ``(x, y, depth)`` with ``z = z0 - depth``;
the descent speed ``z^beta1 |grad H|^2`` is far below the rounding unit of
``z`` itself, and carrying the depth separately keeps it observable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .contour import PlanarCurveSet, hausdorff_points
from .polyalg import NumericPoly, Poly

# Dormand-Prince 5(4) tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
_E = _B5 - _B4
DESIGN_ORDER = 5


class IntegrationError(RuntimeError):
    """Step-size underflow or a non-finite field value; ``trajectory`` holds the samples so far."""

    def __init__(self, message: str, trajectory: "Trajectory"):
        super().__init__(message)
        self.trajectory = trajectory


@dataclass
class Trajectory:
    """Samples ``(t, point)`` of one orbit; ``depth`` is set for depth-tracked chart runs."""

    t: np.ndarray
    points: np.ndarray
    meta: dict = field(default_factory=dict)
    depth: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.t)

    @property
    def status(self) -> str:
        return self.meta.get("status", "completed")

    def csv_rows(self):
        for i in range(len(self.t)):
            row = [float(self.t[i]), *map(float, self.points[i])]
            if self.depth is not None:
                row.append(float(self.depth[i]))
            yield row

    def csv_header(self) -> list[str]:
        return ["t", "x", "y", "z"] + (["depth"] if self.depth is not None else [])


def integrate(f: Callable[[float, np.ndarray], np.ndarray], x0, t_max: float, rel_tol: float = 1e-9,
              abs_tol: float = 1e-12, max_steps: int = 200_000, rescale: str = "none", delta: float = 1e-12,
              t_eval=None, h0: float | None = None, fixed_step: float | None = None,
              safety: float = 0.9, min_factor: float = 0.2, max_factor: float = 5.0) -> Trajectory:
    """Integrate ``x' = f(t, x)`` on ``[0, t_max]`` with the Dormand-Prince 5(4) pair.

    A step is accepted when the scaled error norm is at most one; the next
    step is ``h * safety * err^(-1/5)`` clipped to ``[min_factor, max_factor]``.
    ``rescale="unit_speed"`` integrates ``f / (|f| + delta)``.  Output is at
    every accepted step, or exactly at ``t_eval`` (steps are shortened to
    land on those times).  ``fixed_step`` switches off the controller.
    Reaching ``max_steps`` ends the run with status ``"max_steps"``.
    """
    if rel_tol <= 0 or abs_tol <= 0:
        raise ValueError("tolerances must be positive")
    if t_max < 0:
        raise ValueError("t_max must be non-negative")
    if rescale not in ("none", "unit_speed"):
        raise ValueError("rescale must be 'none' or 'unit_speed'")
    y = np.array(x0, dtype=float)
    if not np.all(np.isfinite(y)):
        raise ValueError("initial point must be finite")

    if rescale == "unit_speed":
        def rhs(t, s):
            v = np.asarray(f(t, s), float)
            return v / (np.linalg.norm(v) + delta)
    else:
        def rhs(t, s):
            return np.asarray(f(t, s), float)

    if t_eval is not None:
        t_eval = np.asarray(t_eval, float)
        if len(t_eval) and (t_eval[0] < 0 or t_eval[-1] > t_max or np.any(np.diff(t_eval) <= 0)):
            raise ValueError("t_eval must be increasing within [0, t_max]")
    ts, ys = [0.0], [y.copy()]
    meta = {"method": "dopri5", "rel_tol": rel_tol, "abs_tol": abs_tol, "rescale": rescale, "delta": delta,
            "fixed_step": fixed_step, "status": "completed", "steps": 0, "rejected": 0}

    def result():
        return Trajectory(np.array(ts), np.array(ys), meta)

    t = 0.0
    k1 = rhs(t, y)
    if not np.all(np.isfinite(k1)):
        meta["status"] = "nonfinite"
        raise IntegrationError("non-finite field value at the initial point", result())
    if t_max == 0:
        return result()
    if fixed_step is not None:
        h = float(fixed_step)
    elif h0 is not None:
        h = float(h0)
    else:
        scale = abs_tol + rel_tol * np.abs(y)
        d0 = np.linalg.norm(y / scale) / math.sqrt(len(y))
        d1 = np.linalg.norm(k1 / scale) / math.sqrt(len(y))
        h = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
        h = min(h, t_max)
    eval_idx = 0
    if t_eval is not None:
        while eval_idx < len(t_eval) and t_eval[eval_idx] <= 0:
            eval_idx += 1
        ts, ys = ([0.0], [y.copy()]) if len(t_eval) and t_eval[0] == 0 else ([], [])
    h_floor = 16 * np.finfo(float).eps
    steps = 0
    while t < t_max:
        if steps >= max_steps:
            meta["status"] = "max_steps"
            break
        target = t_max if t_eval is None or eval_idx >= len(t_eval) else t_eval[eval_idx]
        h_try = min(h, t_max - t)
        clipped = False
        if t_eval is not None and eval_idx < len(t_eval) and t + h_try >= target:
            h_try = target - t
            clipped = True
        if h_try <= h_floor * max(1.0, abs(t)):
            if clipped or t + h_try >= t_max:
                # landing exactly on the output time; take it as done
                t = target
                if clipped:
                    ts.append(t)
                    ys.append(y.copy())
                    eval_idx += 1
                continue
            meta["status"] = "underflow"
            meta["last_state"] = y.tolist()
            raise IntegrationError(f"step size underflow at t={t:g}", result())
        K = [k1]
        with np.errstate(invalid="ignore", over="ignore"):  # non-finite stages are handled below
            for i in range(1, 7):
                yi = y + h_try * sum(a * k for a, k in zip(_A[i], K))
                K.append(rhs(t + _C[i] * h_try, yi))
            y_new = y + h_try * sum(b * k for b, k in zip(_B5, K) if b)
        if not (np.all(np.isfinite(y_new)) and np.all(np.isfinite(K[-1]))):
            if fixed_step is not None:
                meta["status"] = "nonfinite"
                raise IntegrationError("non-finite field value", result())
            h = h_try * min_factor
            meta["rejected"] += 1
            continue
        if fixed_step is None:
            err_vec = h_try * sum(e * k for e, k in zip(_E, K) if e)
            scale = abs_tol + rel_tol * np.maximum(np.abs(y), np.abs(y_new))
            err = float(np.sqrt(np.mean((err_vec / scale) ** 2)))
            factor = max_factor if err == 0 else min(max_factor, max(min_factor, safety * err ** (-1 / DESIGN_ORDER)))
            if err > 1.0:
                h = h_try * min(1.0, factor)
                meta["rejected"] += 1
                continue
        steps += 1
        t = target if clipped else t + h_try
        y = y_new
        k1 = K[-1]
        if fixed_step is None:
            h = h_try * factor if not clipped else max(h, h_try * factor)
        if t_eval is None or clipped:
            ts.append(t)
            ys.append(y.copy())
            if clipped:
                eval_idx += 1
    meta["steps"] = steps
    return result()


def observed_order_fixed_step(f, x0, t_end: float, exact, steps=(20, 40, 80)) -> list[float]:
    """Orders ``log2(e_n / e_2n)`` from fixed-step runs with halved steps."""
    errs = []
    for n in steps:
        tr = integrate(f, x0, t_end, fixed_step=t_end / n, max_steps=10 * n)
        errs.append(float(np.linalg.norm(tr.points[-1] - exact)))
    return [math.log2(a / b) for a, b in zip(errs, errs[1:])]


def observed_order_adaptive(f, x0, t_end: float, exact, tols=tuple(10.0 ** -k for k in range(4, 11))) -> float:
    """Slope of ``log(error)`` against ``log(1 / steps)`` over a tolerance sweep."""
    logs_n, logs_e = [], []
    for tol in tols:
        tr = integrate(f, x0, t_end, rel_tol=tol, abs_tol=tol * 1e-3)
        logs_n.append(math.log(tr.meta["steps"]))
        logs_e.append(math.log(float(np.linalg.norm(tr.points[-1] - exact))))
    slope = np.polyfit(logs_n, logs_e, 1)[0]
    return float(-slope)


# ---------------------------------------------------------------------------
# chart fields, seeds
# ---------------------------------------------------------------------------

def chart_field(H: Poly, beta1: int, beta2: int, reduced: bool = False, depth_z0: float | None = None):
    """Numeric right-hand side of the chart field in factored form.

    ``reduced`` drops ``z^beta2 H d/dz``, which vanishes on ``V(H)``; the
    remainder is tangent to every level set of ``H``.  With ``depth_z0`` the
    state is ``(x, y, depth)`` and ``z = depth_z0 - depth``.
    """
    parts = [H.partial("x"), H.partial("y"), H.partial("z"), H]
    ev = NumericPoly(parts)

    def field_xyz(x, y, z):
        hx, hy, hz, hh = ev(x, y, z)
        w = z**beta1
        vz = -w * (hx * hx + hy * hy)
        if not reduced:
            vz = vz + z**beta2 * hh
        return np.array([-hy + w * hx * hz, hx + w * hy * hz, vz])

    if depth_z0 is None:
        return lambda t, s: field_xyz(s[0], s[1], s[2])

    def field_depth(t, s):
        v = field_xyz(s[0], s[1], depth_z0 - s[2])
        v[2] = -v[2]
        return v

    return field_depth


class SeedError(RuntimeError):
    pass


def seed_on_surface(F, z0: float, direction=(1.0, 0.0), origin=(0.0, 0.0), max_radius: float = 1.5,
                    n_scan: int = 3000, tol: float = 1e-12) -> tuple[float, float, float]:
    """Point of ``{H = 0, z = z0}`` on the planar ray ``origin + s * direction``, s >= 0.

    Finds the first sign change on a scan of the ray and bisects it down to
    ``|H| <= tol * scale`` where ``scale`` is the absolute-coefficient bound.
    """
    H = F.H if hasattr(F, "H") else F
    d = np.asarray(direction, float)
    if np.linalg.norm(d) == 0:
        raise ValueError("direction must be nonzero")
    d = d / np.linalg.norm(d)
    o = np.asarray(origin, float)
    ev = NumericPoly([H])
    aev = NumericPoly([Poly({m: abs(c) for m, c in H.items()})])
    s = np.linspace(0.0, max_radius, n_scan)
    P = o[None, :] + s[:, None] * d[None, :]
    v = ev(P[:, 0], P[:, 1], np.full(n_scan, float(z0)))[0]
    if np.any(v == 0):
        i = int(np.argmax(v == 0))
        return (float(P[i, 0]), float(P[i, 1]), float(z0))
    sign_change = np.nonzero(np.sign(v[:-1]) != np.sign(v[1:]))[0]
    if not len(sign_change):
        raise SeedError("no sign change of H on the ray")
    i = int(sign_change[0])
    lo, hi = s[i], s[i + 1]
    flo = v[i]

    def at(u):
        p = o + u * d
        return p, float(ev(p[0], p[1], float(z0))[0]), float(aev(abs(p[0]), abs(p[1]), abs(float(z0)))[0])

    for _ in range(200):
        mid = 0.5 * (lo + hi)
        p, fm, scale = at(mid)
        if abs(fm) <= tol * scale or hi - lo < 1e-17:
            break
        if np.sign(fm) == np.sign(flo):
            lo, flo = mid, fm
        else:
            hi = mid
    p, fm, scale = at(0.5 * (lo + hi))
    return (float(p[0]), float(p[1]), float(z0))


def sigma(points: np.ndarray) -> np.ndarray:
    """Blow-down map ``(x, y, z) -> (xz, yz, z)`` applied row-wise."""
    P = np.atleast_2d(np.asarray(points, float))
    return np.column_stack([P[:, 0] * P[:, 2], P[:, 1] * P[:, 2], P[:, 2]])


# ---------------------------------------------------------------------------
# secants
# ---------------------------------------------------------------------------

@dataclass
class SecantCloud:
    points: np.ndarray
    windows: list[int] = field(default_factory=list)

    def csv_rows(self):
        bounds = list(self.windows) + [len(self.points)]
        w = np.zeros(len(self.points), int)
        for k, (a, b) in enumerate(zip(bounds, bounds[1:])):
            w[a:b] = k
        for p, k in zip(self.points, w):
            yield [float(p[0]), float(p[1]), float(p[2]), int(k)]


def alpha_map(xy: np.ndarray) -> np.ndarray:
    """``(x, y) -> (x, y, 1) / sqrt(x^2 + y^2 + 1)``."""
    xy = np.atleast_2d(np.asarray(xy, float))
    v = np.column_stack([xy[:, 0], xy[:, 1], np.ones(len(xy))])
    return v / np.linalg.norm(v, axis=1)[:, None]


def secants_from_chart(traj: Trajectory) -> SecantCloud:
    if np.any(traj.points[:, 2] <= 0):
        raise ValueError("chart secants need z > 0 at every sample")
    return SecantCloud(alpha_map(traj.points[:, :2]))


def secants_ambient(traj: Trajectory) -> SecantCloud:
    P = np.asarray(traj.points, float)
    n = np.linalg.norm(P, axis=1)
    if np.any(n == 0):
        raise ValueError("ambient secants undefined at the origin")
    return SecantCloud(P / n[:, None])


# ---------------------------------------------------------------------------
# spiraling
# ---------------------------------------------------------------------------

@dataclass
class Section:
    """Planar segment ``anchor + u * normal``, ``0 < u <= reach``."""

    anchor: np.ndarray
    normal: np.ndarray
    reach: float = 0.1

    def to_json(self) -> dict:
        return {"anchor": self.anchor.tolist(), "normal": self.normal.tolist(), "reach": self.reach}


def choose_section(h: Poly, gamma: PlanarCurveSet, avoid=(), avoid_radius: float = 0.15,
                   reach: float = 0.1) -> Section:
    """Anchor at the sample of Gamma maximizing ``|grad h| (1 - |p|^2)`` away from ``avoid`` points."""
    P = gamma.vertices()
    ev = NumericPoly([h.partial("x"), h.partial("y")])
    g = ev(P[:, 0], P[:, 1], np.zeros(len(P)))
    score = np.hypot(g[0], g[1]) * (1 - (P**2).sum(axis=1))
    for a in avoid:
        score[np.hypot(P[:, 0] - float(a[0]), P[:, 1] - float(a[1])) < avoid_radius] = -np.inf
    i = int(np.argmax(score))
    n = np.array([g[0][i], g[1][i]])
    return Section(P[i].copy(), n / np.linalg.norm(n), reach)


@dataclass
class LapData:
    crossing_times: list[float]
    crossing_z: list[float]
    crossing_depth: list[float]
    crossing_index: list[int]
    laps: int
    z_strictly_decreasing: bool
    winding_ratios: list[float]
    spiraling: bool

    def to_json(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def spiral_monitor(traj: Trajectory, section: Section, min_laps: int = 3) -> LapData:
    """Crossings of the section by ``(x(t), y(t))`` in the direction of the first crossing.

    At each crossing ``z`` (and depth) is interpolated.  The winding ratio
    between consecutive crossings is ``2 pi / delta(-log z)``; spiraling
    means at least ``min_laps`` laps, strictly decreasing ``z`` at the
    crossings and every ratio above one.
    """
    P = traj.points
    if np.any(P[:, 2] <= 0):
        raise ValueError("trajectory left {z > 0}")
    tangent = np.array([-section.normal[1], section.normal[0]])
    rel = P[:, :2] - section.anchor[None, :]
    s = rel @ tangent
    u = rel @ section.normal
    depth = traj.depth if traj.depth is not None else np.zeros(len(P))
    times, zs, ds, idx, signs = [], [], [], [], []
    for i in np.nonzero(np.sign(s[:-1]) != np.sign(s[1:]))[0]:
        w = s[i] / (s[i] - s[i + 1]) if s[i] != s[i + 1] else 0.0
        uc = u[i] + w * (u[i + 1] - u[i])
        if not 0 < uc <= section.reach:
            continue
        signs.append(np.sign(s[i + 1] - s[i]))
        times.append(float(traj.t[i] + w * (traj.t[i + 1] - traj.t[i])))
        ds.append(float(depth[i] + w * (depth[i + 1] - depth[i])))
        zs.append(float(P[i, 2] + w * (P[i + 1, 2] - P[i, 2])))
        idx.append(int(i + 1))
    if signs:
        keep = [k for k, sg in enumerate(signs) if sg == signs[0]]
        times, zs, ds, idx = ([v[k] for k in keep] for v in (times, zs, ds, idx))
    laps = max(len(times) - 1, 0)
    if traj.depth is not None:
        z_top = float(traj.meta.get("z0", zs[0] if zs else 1.0))
        dec = all(b > a for a, b in zip(ds, ds[1:]))
        ratios = []
        for a, b in zip(ds, ds[1:]):
            dlog = -math.log1p(-(b - a) / (z_top - a))
            ratios.append(math.inf if dlog == 0 else 2 * math.pi / dlog)
    else:
        dec = all(b < a for a, b in zip(zs, zs[1:]))
        ratios = []
        for a, b in zip(zs, zs[1:]):
            dlog = math.log(a / b) if a > 0 and b > 0 else math.nan
            ratios.append(math.inf if dlog == 0 else 2 * math.pi / dlog)
    spiraling = laps >= min_laps and dec and all(r > 1 for r in ratios)
    return LapData(times, zs, ds, idx, laps, bool(dec), ratios, bool(spiraling))


# ---------------------------------------------------------------------------
# omega-limit estimate
# ---------------------------------------------------------------------------

@dataclass
class OmegaReport:
    distances: list[float]
    laps: list[int]
    z_ranges: list[list[float]]
    final_distance: float
    non_increasing: bool
    converging: bool
    threshold: float
    slack: float

    def to_json(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def omega_estimate(cloud: SecantCloud, target: np.ndarray, windows: int = 4, threshold: float = 0.1,
                   slack: float | None = None, tail_fraction: float = 0.5, boundaries=None, z=None) -> OmegaReport:
    """Window-wise chordal Hausdorff distance of the secant tail to ``target``.

    ``target`` holds unit vectors (e.g. ``alpha_map`` of Gamma samples).  The
    tail is split into ``windows`` pieces of equal sample count, or at the
    given sample ``boundaries`` (such as lap starts).  Converging means the
    final distance is at most ``threshold`` and the distances never rise by
    more than ``slack`` over the last half of the windows.  The default
    slack is the largest gap between consecutive tail samples: two samplings
    of the same curve can differ in Hausdorff distance by that much.
    """
    if windows < 2:
        raise ValueError("need at least two windows")
    target = np.asarray(target, float)
    if len(target) == 0:
        raise ValueError("target must be nonempty")
    n = len(cloud.points)
    if boundaries is None:
        start = int(n * (1 - tail_fraction))
        cuts = np.linspace(start, n, windows + 1).round().astype(int)
    else:
        cuts = np.asarray(boundaries, int)
        if len(cuts) != windows + 1:
            raise ValueError("boundaries must have windows + 1 entries")
    if slack is None:
        tail = cloud.points[cuts[0]:cuts[-1]]
        slack = float(np.linalg.norm(np.diff(tail, axis=0), axis=1).max()) if len(tail) > 1 else 0.0
    dists, zr, laps = [], [], []
    for a, b in zip(cuts, cuts[1:]):
        if b <= a:
            raise ValueError("empty window")
        dists.append(hausdorff_points(cloud.points[a:b], target))
        if z is not None:
            zr.append([float(np.min(z[a:b])), float(np.max(z[a:b]))])
        laps.append(1 if boundaries is not None else 0)
    half = dists[len(dists) // 2:]
    mono = all(y <= x + slack for x, y in zip(half, half[1:]))
    cloud.windows = [int(c) for c in cuts[:-1]]
    return OmegaReport(dists, laps, zr, dists[-1], bool(mono), bool(mono and dists[-1] <= threshold), threshold, slack)


# ---------------------------------------------------------------------------
# end-to-end chart run
# ---------------------------------------------------------------------------

@dataclass
class SimulationResult:
    trajectory: Trajectory
    laps: LapData
    cloud: SecantCloud
    omega: OmegaReport | None
    section: Section
    seed: tuple[float, float, float]
    beta1: int
    drift: float
    attempts: list[dict]
    parameters: dict

    @property
    def passed(self) -> bool:
        return bool(self.laps.spiraling and self.omega is not None and self.omega.converging)

    def to_json(self) -> dict:
        return {
            "seed": list(self.seed),
            "beta1": self.beta1,
            "drift": self.drift,
            "section": self.section.to_json(),
            "laps": self.laps.to_json(),
            "omega": self.omega.to_json() if self.omega else None,
            "status": self.trajectory.status,
            "steps": self.trajectory.meta.get("steps"),
            "samples": len(self.trajectory),
            "attempts": self.attempts,
            "parameters": self.parameters,
            "passed": self.passed,
        }


def _lap_windows(lap: LapData, windows: int):
    idx = lap.crossing_index
    if len(idx) >= windows + 1:
        return windows, idx[-(windows + 1):]
    if len(idx) >= 3:
        return len(idx) - 1, idx
    return windows, None


def simulate_chart(surface, gamma: PlanarCurveSet, beta1: int, beta2: int, z0: float = 2.0**-8,
                   section: Section | None = None, t_max: float | None = None, dt: float = 0.01,
                   rel_tol: float = 1e-10, abs_tol: float = 1e-12, max_steps: int = 1_000_000,
                   min_laps: int = 3, windows: int = 4, omega_threshold: float = 0.1) -> SimulationResult:
    """Seed on ``L_z0``, follow the chart field at unit speed, and collect the diagnostics.

    The state is ``(x, y, depth)`` and the field is the chart field without
    its ``z^beta2 H`` term, which is zero on ``V(H)``.  ``t_max=None`` runs
    for ``max(min_laps, windows) + 2`` times the slice length.  Omega windows
    are the last ``windows`` complete laps.
    """
    from .levelsets import slice_level_set

    H = surface.H
    if section is None:
        section = choose_section(surface.h, gamma, avoid=getattr(surface, "cuts", ()))
    seed = seed_on_surface(H, z0, direction=section.normal, origin=section.anchor, max_radius=section.reach)
    if t_max is None:
        perimeter = slice_level_set(H, z0, 1.0 / 256).total_length()
        t_max = perimeter * (max(min_laps, windows) + 2)
    t_eval = np.arange(0.0, t_max, dt)
    f = chart_field(H, beta1, beta2, reduced=True, depth_z0=z0)
    raw = integrate(f, [seed[0], seed[1], 0.0], t_max, rel_tol=rel_tol, abs_tol=abs_tol, max_steps=max_steps,
                    rescale="unit_speed", t_eval=t_eval)
    depth = raw.points[:, 2]
    pts = np.column_stack([raw.points[:, :2], z0 - depth])
    meta = dict(raw.meta, z0=z0, field="chart, reduced, depth-tracked", beta1=beta1, beta2=beta2)
    traj = Trajectory(raw.t, pts, meta, depth)
    drift = float(np.abs(NumericPoly([H])(pts[:, 0], pts[:, 1], pts[:, 2])[0]).max())
    traj.meta["drift"] = drift
    lap = spiral_monitor(traj, section, min_laps)
    cloud = secants_from_chart(traj)
    target = alpha_map(gamma.vertices())
    nw, bounds = _lap_windows(lap, windows)
    omega = None
    if len(cloud.points) >= 2 * nw:
        omega = omega_estimate(cloud, target, nw, omega_threshold, boundaries=bounds, z=pts[:, 2])
    params = {"z0": z0, "t_max": t_max, "dt": dt, "rel_tol": rel_tol, "abs_tol": abs_tol, "max_steps": max_steps,
              "min_laps": min_laps, "windows": nw, "omega_threshold": omega_threshold,
              "window_mode": "laps" if bounds is not None else "equal"}
    return SimulationResult(traj, lap, cloud, omega, section, seed, beta1, drift, [], params)


def simulate_with_escalation(surface, gamma: PlanarCurveSet, ledger, beta1_extra: int = 0,
                             max_escalations: int = 5, step: int = 2, **kwargs) -> SimulationResult:
    """Run :func:`simulate_chart`, raising ``beta1`` by ``step`` until the spiral monitor passes."""
    attempts = []
    result = None
    for k in range(max_escalations + 1):
        beta1 = ledger.beta1 + beta1_extra + k * step
        result = simulate_chart(surface, gamma, beta1, ledger.beta2, **kwargs)
        attempts.append({"beta1": beta1, "laps": result.laps.laps, "spiraling": result.laps.spiraling})
        if result.laps.spiraling or result.trajectory.status != "completed":
            break
    result.attempts = attempts
    return result


def cross_chart_check(X, Y, alpha: int, chart_point, n_eval: int = 51, move: float = 0.2,
                      rel_tol: float = 1e-12, abs_tol: float = 1e-15) -> dict:
    """Compare secants of ``z^alpha X`` (chart) and ``Y`` (ambient) from matching seeds.

    The run length is chosen so the chart point moves about ``move`` at its
    initial speed.  Returns the largest pointwise secant difference.
    """
    Xn, Yn = X.numeric(), Y.numeric()
    p = np.asarray(chart_point, float)
    if p[2] <= 0:
        raise ValueError("chart point needs z > 0")

    def chart_rhs(t, s):
        return Xn(s[0], s[1], s[2]) * s[2] ** alpha

    speed = float(np.linalg.norm(chart_rhs(0.0, p)))
    if speed == 0:
        raise ValueError("chart field vanishes at the seed")
    T = move / speed
    t_eval = np.linspace(0.0, T, n_eval)
    tx = integrate(chart_rhs, p, T, rel_tol=rel_tol, abs_tol=abs_tol, t_eval=t_eval)
    ty = integrate(lambda t, s: Yn(s[0], s[1], s[2]), sigma(p)[0], T, rel_tol=rel_tol, abs_tol=abs_tol,
                   t_eval=t_eval)
    sx = secants_from_chart(tx).points
    sy = secants_ambient(ty).points
    return {"max_deviation": float(np.abs(sx - sy).max()), "T": T, "samples": n_eval,
            "secant_travel": float(np.linalg.norm(sx[-1] - sx[0])), "seed": p.tolist()}
