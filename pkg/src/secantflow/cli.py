"""Command line front end: ``secantflow <subcommand> [options]``.

Exit codes: 0 pass, 1 domain failure, 2 usage or parse error.  Every
subcommand accepts ``--config file.json``; flags given on the command line
override keys from the file.  Outputs are written atomically.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import adapted, dynamics, fields as flds, levelsets
from .polyalg import ParseError, Poly, PolyError, parse_poly
from .render import Layer, sphere_view, svg_document

EXAMPLE1_H = "(x^2-1/4)*(y^3-(1/4)*y)"
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
REPORT_SECTIONS = ("adaptedness", "construction", "convergence", "isolated_singularity", "dynamics", "omega_limit")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    h: str = EXAMPLE1_H
    H: str | None = None
    variant: str = "isolated"
    N: object = "auto"
    M: object = "auto"
    base_point: object = "auto"
    alpha_param: object = "1/2"
    z4_sign: object = "auto"
    cuts: object = "auto"
    g_scale: str | None = None
    weight_eps: str = str(levelsets.DEFAULT_WEIGHT_EPS)
    weight_floor: str = str(levelsets.DEFAULT_WEIGHT_FLOOR)
    kappa: str = str(levelsets.DEFAULT_KAPPA)
    beta1_extra: int = 0
    max_escalations: int = 5
    z0_seed: float = 2.0**-8
    t_max: object = "auto"
    dt: float = 0.01
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_steps: int = 1_000_000
    windows: int = 4
    min_laps: int = 3
    resolution: float = 1.0 / 512
    z_levels: list = field(default_factory=lambda: list(range(5, 11)))
    convergence_threshold: float = 0.05
    omega_threshold: float = 0.1
    sphere_levels: list = field(default_factory=lambda: list(range(3, 9)))
    out: str = "out"
    force: bool = False

    def to_json(self) -> dict:
        return asdict(self)


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------

def _atomic_write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _clean(obj):
    """JSON-safe copy: numpy scalars/arrays to Python, non-finite floats to strings."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else str(v)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    return obj


def write_json(path: Path, data):
    _atomic_write(path, json.dumps(_clean(data), indent=2, sort_keys=True) + "\n")


def write_csv(path: Path, header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in row])
    _atomic_write(path, buf.getvalue())


def read_json(path: Path):
    with open(path) as fh:
        return json.load(fh)


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

def _frac(text, name) -> Fraction:
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"{name}: not a rational number: {text!r}")


def load_config(args) -> RunConfig:
    cfg = RunConfig()
    if getattr(args, "config", None):
        try:
            data = read_json(Path(args.config))
        except (OSError, json.JSONDecodeError) as e:
            raise UsageError(f"cannot read config: {e}")
        known = {f.name for f in fields(RunConfig)}
        unknown = set(data) - known
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
        for k, v in data.items():
            setattr(cfg, k, v)
    for f in fields(RunConfig):
        v = getattr(args, f.name, None)
        if v is not None:
            setattr(cfg, f.name, v)
    return cfg


def _parse_h(cfg: RunConfig) -> Poly:
    h = parse_poly(cfg.h)
    if h.is_zero() or "z" in h.variables():
        raise UsageError("h must be a nonzero polynomial in x and y")
    return h


def _resolve_base_point(cfg: RunConfig, h: Poly):
    if cfg.base_point != "auto":
        bp = cfg.base_point
        if isinstance(bp, str):
            bp = bp.split(",")
        if len(bp) != 2:
            raise UsageError("base_point needs two coordinates")
        return tuple(_frac(c, "base_point") for c in bp)
    for k in range(2, 12):
        for cand in ((k, k), (k, k + 1), (k + 1, k), (-k, k)):
            p = tuple(Fraction(c) for c in cand)
            if h.eval(p) != 0:
                return p
    raise UsageError("no automatic base point found")


def build_surface(cfg: RunConfig, h: Poly, alpha: Fraction) -> levelsets.SurfaceFamily:
    """SurfaceFamily for ``cfg`` at one value of alpha; records resolved parameters in ``notes``."""
    if cfg.H:
        Hp = parse_poly(cfg.H)
        fam = levelsets.SurfaceFamily(H=Hp, h=h, N=0, alpha_param=Fraction(0), barrier="given", g_scale=Fraction(0))
        fam.notes["given"] = True
        return fam
    N = None if cfg.N == "auto" else int(cfg.N)
    cuts = cfg.cuts if cfg.cuts == "auto" else [tuple(_frac(c, "cuts") for c in p) for p in cfg.cuts]
    common = dict(alpha_param=alpha, barrier="shaped", cuts=cuts, weight_eps=_frac(cfg.weight_eps, "weight_eps"),
                  weight_floor=_frac(cfg.weight_floor, "weight_floor"), kappa=_frac(cfg.kappa, "kappa"),
                  g_scale=None if cfg.g_scale is None else _frac(cfg.g_scale, "g_scale"))
    if cfg.variant == "isolated":
        M = 1 if cfg.M == "auto" else int(cfg.M)
        sign = -1 if cfg.z4_sign == "auto" else int(cfg.z4_sign)
        fam = levelsets.build_H_isolated(h, N, M, _resolve_base_point(cfg, h), z4_sign=sign, **common)
    elif cfg.variant == "plain":
        sign = 1 if cfg.z4_sign == "auto" else int(cfg.z4_sign)
        fam = levelsets.build_H(h, N, z4_sign=sign, **common)
    else:
        raise UsageError("variant must be 'isolated' or 'plain'")
    fam.notes["N_source"] = "auto" if cfg.N == "auto" else "given"
    fam.notes["M_source"] = "auto" if cfg.M == "auto" else "given"
    fam.notes["base_point_source"] = "auto" if cfg.base_point == "auto" else "given"
    return fam


def _z_list(cfg: RunConfig):
    return [2.0 ** -int(k) for k in cfg.z_levels]


def resolve_surface(cfg: RunConfig, h: Poly, gamma):
    """Family at the configured alpha, or the first alpha of the scan passing the slice checks."""
    if str(cfg.alpha_param) != "scan":
        fam = build_surface(cfg, h, _frac(cfg.alpha_param, "alpha_param"))
        return fam, {"mode": "fixed", "alpha": str(fam.alpha_param)}

    def checks(fam):
        rep = levelsets.check_gamma_convergence(fam, gamma, _z_list(cfg), cfg.resolution, cfg.convergence_threshold)
        return rep.convergent and rep.connected and rep.smooth and all(c == 1 for c in rep.components)

    fam, alpha, log = levelsets.scan_alpha(lambda a: build_surface(cfg, h, a), checks)
    if fam is None:
        raise DomainFailure("no alpha in the scan passes the slice checks", {"scan": log})
    return fam, {"mode": "scan", "alpha": str(alpha), "log": log}


class DomainFailure(Exception):
    def __init__(self, message, payload=None):
        super().__init__(message)
        self.payload = payload or {}


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_check_adapted(cfg: RunConfig) -> int:
    h = _parse_h(cfg)
    rep = adapted.check_adapted(h, cfg.resolution)
    out = Path(cfg.out)
    data = {"h": h.to_text(), "report": rep.to_json(), "config": cfg.to_json()}
    write_json(out / "adapted.json", data)
    gamma = adapted.sample_gamma(h, cfg.resolution)
    write_csv(out / "gamma.csv", ["polyline", "x", "y"], gamma.csv_rows())
    print(json.dumps({"adapted": rep.overall, "reasons": rep.reasons}))
    return EXIT_OK if rep.overall else EXIT_FAIL


def _bundle_verdicts(bundle: flds.FieldBundle, cfg: RunConfig) -> dict:
    fam, L = bundle.surface, bundle.ledger
    st = flds.verify_strict_transform(bundle.Y, bundle.X, L.alpha)
    verdicts = {
        "strict_transform": {"pass": st.ok, "reason": st.reason},
        "ledger_star_checks": {"pass": L.star_checks_ok(), "values": L.star_checks()},
        "tangency_surface": {"pass": flds.tangency_holds(bundle.X, fam.H, L.beta2)},
        "tangency_divisor": {"pass": bundle.X.pz.z_divisible(1) and bundle.Y.pz.z_divisible(1)},
        "H_at_z0_is_h_squared": {"pass": fam.H.restrict_z0() == fam.h * fam.h},
    }
    try:
        origin_ok, prof = levelsets.check_isolated_origin(fam)
    except PolyError as e:
        origin_ok, prof = False, [{"error": str(e)}]
    verdicts["isolated_origin"] = {"pass": origin_ok, "profile": prof}
    radii = [2.0 ** -int(k) for k in cfg.sphere_levels]
    sph_ok, sph = flds.isolated_singularity_check(bundle.Y, radii)
    verdicts["isolated_singularity"] = {"pass": sph_ok, "profile": sph}
    pts = [(Fraction(a), Fraction(b), 0) for a, b in _critical_points(fam.h)] + [(0, 0, 0)]
    sing = flds.singular_set_check(bundle.X, fam.H, pts)
    verdicts["singular_set"] = {"pass": sing.ok, **sing.to_json()}
    return verdicts


def _critical_points(h: Poly):
    """Rational points of V(h, h_x, h_y) found by the adaptedness check (snapped to 1/1024)."""
    sv = adapted.check_finite_singularities(h)
    out = []
    for a, b in sv.points:
        p = (Fraction(round(a * 1024), 1024), Fraction(round(b * 1024), 1024))
        if h.eval(p) == 0 and h.partial("x").eval(p) == 0 and h.partial("y").eval(p) == 0:
            out.append(p)
    return out


def cmd_build(cfg: RunConfig) -> int:
    h = _parse_h(cfg)
    out = Path(cfg.out)
    ad = adapted.check_adapted(h, cfg.resolution)
    if not ad.overall and not cfg.force:
        write_json(out / "build.json", {"error": "h is not adapted", "reasons": ad.reasons})
        print("h is not adapted (use --force): " + "; ".join(ad.reasons), file=sys.stderr)
        return EXIT_FAIL
    gamma = adapted.sample_gamma(h, cfg.resolution)
    fam, alpha_info = resolve_surface(cfg, h, gamma)
    try:
        bundle = flds.build_bundle(fam, int(cfg.beta1_extra))
    except flds.LedgerError as e:
        write_json(out / "build.json", {"error": str(e), "surface": fam.to_json()})
        print(f"ledger violation: {e}", file=sys.stderr)
        return EXIT_FAIL
    write_json(out / "bundle.json", bundle.to_json())
    verdicts = _bundle_verdicts(bundle, cfg)
    symbolic = ("strict_transform", "ledger_star_checks", "tangency_surface", "tangency_divisor")
    ok = all(verdicts[k]["pass"] for k in symbolic)
    report = {"adapted": ad.overall, "forced": bool(cfg.force and not ad.overall), "alpha": alpha_info,
              "ledger": bundle.ledger.to_json(), "surface": fam.to_json(), "verdicts": verdicts,
              "symbolic_pass": ok, "config": cfg.to_json()}
    write_json(out / "build.json", report)
    print(json.dumps({k: v["pass"] for k, v in verdicts.items()}))
    return EXIT_OK if ok else EXIT_FAIL


def _load_or_build_surface(cfg: RunConfig, h: Poly, gamma):
    path = Path(cfg.out) / "bundle.json"
    if path.exists():
        bundle = flds.FieldBundle.from_json(read_json(path))
        given = parse_poly(cfg.H) if cfg.H else None
        if bundle.surface.h == h and (given is None or bundle.surface.H == given):
            return bundle.surface, bundle.ledger, {"source": "bundle.json"}
    fam, info = resolve_surface(cfg, h, gamma)
    return fam, flds.exponent_ledger(fam.H, int(cfg.beta1_extra)), info


def cmd_verify_convergence(cfg: RunConfig) -> int:
    h = _parse_h(cfg)
    out = Path(cfg.out)
    gamma = adapted.sample_gamma(h, cfg.resolution)
    fam, _, info = _load_or_build_surface(cfg, h, gamma)
    zs = _z_list(cfg)
    rep = levelsets.check_gamma_convergence(fam, gamma, zs, cfg.resolution, cfg.convergence_threshold)
    neg_ok, neg = levelsets.check_negative_side_smooth(fam, [-z for z in zs[:3]], cfg.resolution)
    ok = rep.convergent and rep.connected and rep.smooth and all(c == 1 for c in rep.components)
    write_json(out / "convergence.json", {"report": rep.to_json(), "negative_side": {"pass": neg_ok, "slices": neg},
                                          "pass": ok, "surface": info, "config": cfg.to_json()})
    rows = []
    layers = [Layer(gamma.segments, "#888888", 2.0, label="Gamma")]
    palette = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"]
    for i, z0 in enumerate(zs):
        S = levelsets.slice_level_set(fam, z0, cfg.resolution)
        rows.extend([z0, k, x, y] for k, x, y in S.csv_rows())
        layers.append(Layer(S.segments, palette[i % len(palette)], 0.8, label=f"z = 2^-{cfg.z_levels[i]}"))
    write_csv(out / "slices.csv", ["z", "polyline", "x", "y"], rows)
    _atomic_write(out / "slices.svg", svg_document(layers, title="level slices over Gamma"))
    print(json.dumps({"convergent": rep.convergent, "connected": rep.connected, "smooth": rep.smooth,
                      "final_distance": rep.hausdorff[-1]}))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_simulate(cfg: RunConfig) -> int:
    h = _parse_h(cfg)
    out = Path(cfg.out)
    gamma = adapted.sample_gamma(h, cfg.resolution)
    fam, ledger, info = _load_or_build_surface(cfg, h, gamma)
    t_max = None if cfg.t_max == "auto" else float(cfg.t_max)
    try:
        res = dynamics.simulate_with_escalation(
            fam, gamma, ledger, max_escalations=int(cfg.max_escalations),
            z0=float(cfg.z0_seed), t_max=t_max, dt=float(cfg.dt), rel_tol=float(cfg.rel_tol),
            abs_tol=float(cfg.abs_tol), max_steps=int(cfg.max_steps), min_laps=int(cfg.min_laps),
            windows=int(cfg.windows), omega_threshold=float(cfg.omega_threshold))
    except dynamics.SeedError as e:
        write_json(out / "simulate.json", {"error": f"seed failure: {e}", "config": cfg.to_json()})
        print(f"seed failure: {e}", file=sys.stderr)
        return EXIT_FAIL
    except dynamics.IntegrationError as e:
        tr = e.trajectory
        write_csv(out / "trajectory.csv", tr.csv_header(), tr.csv_rows())
        write_json(out / "simulate.json", {"error": str(e), "meta": tr.meta, "config": cfg.to_json()})
        print(f"integration failed: {e}", file=sys.stderr)
        return EXIT_FAIL
    tr = res.trajectory
    write_csv(out / "trajectory.csv", tr.csv_header(), tr.csv_rows())
    write_csv(out / "secants.csv", ["sx", "sy", "sz", "window"], res.cloud.csv_rows())
    target = dynamics.alpha_map(gamma.vertices())
    write_csv(out / "alpha_gamma.csv", ["sx", "sy", "sz"], ([float(a), float(b), float(c)] for a, b, c in target))
    report = res.to_json()
    report["surface"] = info
    report["config"] = cfg.to_json()
    cc = None
    if not fam.notes.get("given"):
        try:
            L = flds.exponent_ledger(fam.H, res.beta1 - ledger.beta1_min)
            X = flds.assemble_X(fam.H, L.beta1, L.beta2)
            cc = dynamics.cross_chart_check(X, flds.assemble_Y(fam.H, L), L.alpha, (0.3, 0.2, 0.5))
        except (ValueError, PolyError) as e:
            cc = {"error": str(e)}
    report["cross_chart"] = cc
    write_json(out / "simulate.json", report)
    write_json(out / "omega.json", res.omega.to_json() if res.omega else {"error": "too few samples"})
    write_json(out / "laps.json", res.laps.to_json())
    chart_layers = [Layer(gamma.segments, "#888888", 2.0, label="Gamma"),
                    Layer([tr.points[:, :2]], "#1f77b4", 0.7, label="chart orbit (x, y)"),
                    Layer([np.array([res.section.anchor, res.section.anchor + res.section.reach * res.section.normal])],
                          "#d62728", 2.0, label="section")]
    _atomic_write(out / "chart.svg", svg_document(chart_layers, title="chart orbit over Gamma"))
    sph_layers = [Layer([sphere_view(target)], "#888888", 1.0, dots=True, label="alpha(Gamma)"),
                  Layer([sphere_view(res.cloud.points)], "#1f77b4", 0.7, label="secants")]
    _atomic_write(out / "sphere.svg", svg_document(sph_layers, bounds=(-1.05, 1.05, -1.05, 1.05),
                                                   title="secants seen from the pole"))
    ok = res.passed and tr.status == "completed" and res.drift <= 1e-6
    print(json.dumps({"laps": res.laps.laps, "spiraling": res.laps.spiraling, "beta1": res.beta1,
                      "final_distance": res.omega.final_distance if res.omega else None,
                      "status": tr.status, "pass": ok}))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_report(cfg: RunConfig) -> int:
    out = Path(cfg.out)
    found = {name: read_json(out / f"{name}.json") for name in ("adapted", "build", "convergence", "simulate")
             if (out / f"{name}.json").exists()}
    if not found:
        print(f"no artifacts in {out}", file=sys.stderr)
        return EXIT_FAIL
    sections = {}

    def put(name, source, fn):
        if source not in found:
            sections[name] = {"status": "missing", "source": f"{source}.json"}
            return
        try:
            sections[name] = {"status": "pass" if fn(found[source]) else "fail", "source": f"{source}.json"}
        except (KeyError, TypeError):
            sections[name] = {"status": "missing", "source": f"{source}.json"}

    put("adaptedness", "adapted", lambda d: d["report"]["overall"])
    put("construction", "build", lambda d: d["symbolic_pass"])
    put("convergence", "convergence", lambda d: d["pass"])
    put("isolated_singularity", "build", lambda d: d["verdicts"]["isolated_singularity"]["pass"]
        and d["verdicts"]["isolated_origin"]["pass"])
    put("dynamics", "simulate", lambda d: d["laps"]["spiraling"] and d["drift"] <= 1e-6)
    put("omega_limit", "simulate", lambda d: d["omega"]["converging"])
    provenance = {k: v.get("config") for k, v in found.items()}
    if "build" in found:
        provenance["resolved_surface"] = found["build"].get("surface")
        provenance["alpha"] = found["build"].get("alpha")
    summary = {"sections": sections, "missing": sorted(set(f"{n}.json" for n in ("adapted", "build", "convergence",
                                                                                   "simulate")) - {f"{n}.json" for n in found}),
               "provenance": provenance,
               "figures": sorted(p.name for p in out.glob("*.svg"))}
    write_json(out / "report.json", summary)
    rows = "".join(f"<tr><td>{n}</td><td>{s['status']}</td><td>{s['source']}</td></tr>" for n, s in sections.items())
    figs = "".join(f'<h3>{f}</h3><img src="{f}" width="500"/>' for f in summary["figures"])
    html = ("<!DOCTYPE html><html><head><meta charset='utf-8'><title>secantflow report</title></head><body>"
            f"<h1>secantflow report</h1><table border='1'><tr><th>section</th><th>status</th><th>source</th></tr>"
            f"{rows}</table>{figs}</body></html>\n")
    _atomic_write(out / "report.html", html)
    print(json.dumps({n: s["status"] for n, s in sections.items()}))
    return EXIT_OK


def cmd_demo_example1(cfg: RunConfig) -> int:
    cfg.h = EXAMPLE1_H
    codes = [cmd_check_adapted(cfg), cmd_build(cfg), cmd_verify_convergence(cfg), cmd_simulate(cfg), cmd_report(cfg)]
    return EXIT_OK if all(c == EXIT_OK for c in codes) else EXIT_FAIL


COMMANDS = {
    "check-adapted": cmd_check_adapted,
    "build": cmd_build,
    "verify-convergence": cmd_verify_convergence,
    "simulate": cmd_simulate,
    "report": cmd_report,
    "demo-example1": cmd_demo_example1,
}


def _pair(text):
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected 'a,b'")
    return parts


def _int_or_auto(text):
    return text if text == "auto" else int(text)


def _int_list(text):
    return [int(v) for v in text.split(",")]


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="secantflow", description="Secant accumulation on polynomial vector fields.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--config", help="JSON file with RunConfig keys")
        s.add_argument("--out", help="output directory")
        s.add_argument("--h", dest="h", help="polynomial h(x, y)")
        s.add_argument("--H", dest="H", help="use this H(x, y, z) instead of the built family")
        s.add_argument("--variant", choices=("isolated", "plain"))
        s.add_argument("--N", type=_int_or_auto)
        s.add_argument("--M", type=_int_or_auto)
        s.add_argument("--base-point", dest="base_point", type=_pair)
        s.add_argument("--alpha", dest="alpha_param", help="rational in [0, 1] or 'scan'")
        s.add_argument("--z4-sign", dest="z4_sign", type=int, choices=(1, -1))
        s.add_argument("--beta1-extra", dest="beta1_extra", type=int)
        s.add_argument("--max-escalations", dest="max_escalations", type=int)
        s.add_argument("--z0-seed", dest="z0_seed", type=float)
        s.add_argument("--t-max", dest="t_max", type=float)
        s.add_argument("--dt", type=float)
        s.add_argument("--rel-tol", dest="rel_tol", type=float)
        s.add_argument("--abs-tol", dest="abs_tol", type=float)
        s.add_argument("--max-steps", dest="max_steps", type=int)
        s.add_argument("--windows", type=int)
        s.add_argument("--resolution", type=float)
        s.add_argument("--z-levels", dest="z_levels", type=_int_list)
        s.add_argument("--force", action="store_true", default=None)
    return p


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    cfg = None
    try:
        cfg = load_config(args)
        return COMMANDS[args.command](cfg)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except DomainFailure as e:
        write_json(Path(cfg.out if cfg else "out") / "failure.json", {"error": str(e), **e.payload})
        print(str(e), file=sys.stderr)
        return EXIT_FAIL
    except (PolyError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
