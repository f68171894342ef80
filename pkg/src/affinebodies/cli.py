"""Command-line front end.

Subcommands: generate, validate, analyze, sweep, basis, equilibria, conjecture.
All artifacts are deterministic: metadata comment lines (tool version, grid
parameters, seed), one CSV header row, 17-significant-digit values, LF line
endings. Exit codes: 0 success, 1 validation failure, 2 violated mathematical
invariant.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .averaging import AveragingConfig, conjecture_report
from .basis import critical_basis
from .equilibria import counts, counts_vs_t, find_equilibria
from .errors import BadSpec, InvariantViolation, NonConvex, ValidationFailure
from .geometry import (BodySpec, centroid, load_spec, make_body, save_spec,
                       sphere_grid, surface_area, volume)
from .isoperimetric import check_quasiconcave, iso_curve, iso_derivative, iso_max, iso_ratio
from .polyrep import harmonics3d_polynomial
from .zoo import zoo_specs


@dataclass
class RunConfig:
    command: str
    body_paths: list = field(default_factory=list)
    kind: str = ""
    parameters: str = ""
    coeffs: str = ""
    degree: int = 4
    amp: float = 0.1
    label: str = ""
    v: np.ndarray | None = None
    t: float | None = None
    tmin: float = 0.01
    tmax: float = 100.0
    steps: int = 81
    tgrid: str = ""
    resolution: int | None = None
    seed_resolution: int | None = None
    tol: float = 1e-6
    k_max: int = 8
    sphere_res: int = 16
    sphere_res_3d: int = 8
    s_max: float = 4.0
    s_steps: int = 33
    output: str = ""
    outdir: str = ""
    seed: int = 0


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _write_csv(path: str, meta: dict, header: list, rows) -> None:
    lines = [f"# {k}={v}" for k, v in meta.items()]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_fmt(x) if isinstance(x, float) else str(x) for x in row))
    text = "\n".join(lines) + "\n"
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _write_json(path: str, obj) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _meta(config: RunConfig, **extra) -> dict:
    meta = {"tool": f"affinebodies {__version__}", "command": config.command,
            "seed": config.seed}
    meta.update(extra)
    return meta


def _parse_vec(text: str) -> np.ndarray:
    v = np.array([float(x) for x in text.split(",")])
    n = np.linalg.norm(v)
    if n == 0:
        raise BadSpec("direction must be nonzero")
    return v / n


def parse_grid(text: str) -> np.ndarray:
    """Grid spec: 'log:a:b:n', 'lin:a:b:n', or comma-separated values."""
    if text.startswith("log:") or text.startswith("lin:"):
        kind, a, b, n = text.split(":")
        a, b, n = float(a), float(b), int(n)
        if kind == "log":
            return np.logspace(np.log10(a), np.log10(b), n)
        return np.linspace(a, b, n)
    return np.array(sorted(float(x) for x in text.split(",")))


def _perturbed_sphere_spec(config: RunConfig) -> BodySpec:
    """Random degree-l harmonic perturbation, amplitude clamped until the
    convexity validation passes."""
    rng = np.random.default_rng(config.seed)
    L = config.degree
    raw = np.zeros((L + 1) ** 2)
    raw[L * L:(L + 1) ** 2] = rng.standard_normal(2 * L + 1)
    grid = sphere_grid(3, 48)
    pv, _, _ = harmonics3d_polynomial(tuple(raw)).eval_batch(grid.nodes, order=0)
    sup = float(np.abs(pv).max())
    amp = config.amp
    label = config.label or f"perturbed-sphere-d{L}-s{config.seed}"
    while amp > 1e-3:
        c = raw * (amp / sup)
        c[0] = 2.0 * np.sqrt(np.pi)
        spec = BodySpec(3, "harmonics3d", tuple(float(x) for x in c), label)
        try:
            make_body(spec)
            return spec
        except NonConvex:
            amp *= 0.8
    raise BadSpec("generate: could not clamp the perturbation into convexity")


def cmd_generate(config: RunConfig) -> int:
    if config.kind == "ellipsoid":
        axes = tuple(float(x) for x in config.parameters.split(","))
        spec = BodySpec(len(axes), "ellipsoid", axes,
                        config.label or f"ellipsoid-{config.parameters}")
    elif config.kind in ("fourier2d", "harmonics3d"):
        coeffs = tuple(float(x) for x in config.coeffs.split(","))
        dim = 2 if config.kind == "fourier2d" else 3
        spec = BodySpec(dim, config.kind, coeffs, config.label or config.kind)
    elif config.kind == "perturbed-sphere":
        spec = _perturbed_sphere_spec(config)
    elif config.kind == "zoo":
        outdir = Path(config.outdir or ".")
        outdir.mkdir(parents=True, exist_ok=True)
        for s in zoo_specs():
            save_spec(s, outdir / f"{s.label}.json")
        print(f"wrote {len(zoo_specs())} zoo specs to {outdir}")
        return 0
    else:
        raise BadSpec(f"generate: unknown kind {config.kind!r}")
    body = make_body(spec)  # reject invalid parameter combinations
    path = config.output or f"{spec.label}.json"
    save_spec(spec, path)
    print(f"wrote {path} (volume {volume(body):.6g}, "
          f"curvature margin {body.curvature_margin:.3g})")
    return 0


def cmd_validate(config: RunConfig) -> int:
    for p in config.body_paths:
        body = make_body(load_spec(p))
        c = centroid(body)
        print(f"{p}: ok label={body.label!r} dim={body.dim} "
              f"volume={volume(body):.9g} area={surface_area(body):.9g} "
              f"iso={iso_ratio(body):.9g} |centroid|={np.linalg.norm(c):.3g} "
              f"margin={body.curvature_margin:.6g}")
    return 0


def cmd_analyze(config: RunConfig) -> int:
    body = make_body(load_spec(config.body_paths[0]))
    cc = counts(body, seed_resolution=config.seed_resolution)
    doc = {"meta": _meta(config, body=body.label),
           "label": body.label, "dim": body.dim,
           "volume": volume(body, config.resolution),
           "surface_area": surface_area(body, config.resolution),
           "iso_ratio": iso_ratio(body, config.resolution),
           "curvature_margin": body.curvature_margin,
           "counts": {"S": cc.S, "U": cc.U, "N": cc.N, "T": cc.T}}
    if config.v is not None:
        t_star, i_star = iso_max(body, config.v, config.resolution)
        doc["iso_max"] = {"v": list(config.v), "t_star": t_star, "I_star": i_star}
    _write_json(config.output, doc)
    return 0


def cmd_sweep(config: RunConfig) -> int:
    body = make_body(load_spec(config.body_paths[0]))
    ts = np.logspace(np.log10(config.tmin), np.log10(config.tmax), config.steps)
    curve = iso_curve(body, config.v, ts, config.resolution)
    dI = [iso_derivative(body, config.v, float(t), config.resolution) for t in ts]
    report = check_quasiconcave(curve)
    verdict = "pass" if report.passed else "fail"
    meta = _meta(config, body=body.label, v=",".join(map(str, config.v)),
                 grid=f"log:{config.tmin}:{config.tmax}:{config.steps}",
                 quasiconcave=verdict, sign_changes=report.sign_changes)
    rows = [(float(t), float(V), float(A), float(I), float(d))
            for t, V, A, I, d in zip(curve.t, curve.V, curve.A, curve.I, dI)]
    _write_csv(config.output, meta, ["t", "V", "A", "I", "dI"], rows)
    print(f"quasiconcave={verdict} sign_changes={report.sign_changes}")
    return 0


def cmd_basis(config: RunConfig) -> int:
    body = make_body(load_spec(config.body_paths[0]))
    result = critical_basis(body, config.tol, config.resolution)
    meta = _meta(config, body=body.label, tol=config.tol,
                 field_small=result.field_small)
    rows = []
    for e, r in zip(result.directions, result.residuals):
        coords = list(e) + [0.0] * (3 - len(e))
        rows.append(tuple(float(x) for x in coords) + (float(r),))
    _write_csv(config.output, meta, ["e_i_x", "e_i_y", "e_i_z", "residual"], rows)
    return 0


def cmd_equilibria(config: RunConfig) -> int:
    body = make_body(load_spec(config.body_paths[0]))
    if config.tgrid:
        ts = parse_grid(config.tgrid)
        rows = counts_vs_t(body, config.v, ts, seed_resolution=config.seed_resolution)
        meta = _meta(config, body=body.label, v=",".join(map(str, config.v)),
                     grid=config.tgrid)
        out = [(float(t), c.S, c.U, c.N, c.T) for t, c in rows]
        _write_csv(config.output, meta, ["t", "S", "U", "N", "T"], out)
    else:
        pts = find_equilibria(body, seed_resolution=config.seed_resolution)
        meta = _meta(config, body=body.label, t=config.t if config.t else 1.0)
        rows = []
        for p in pts:
            coords = list(p.u) + [0.0] * (3 - len(p.u))
            rows.append(tuple(float(x) for x in coords)
                        + (p.index, float(np.linalg.norm(p.p))))
        _write_csv(config.output, meta, ["ux", "uy", "uz", "index", "r"], rows)
    return 0


def cmd_conjecture(config: RunConfig) -> int:
    bodies = [make_body(load_spec(p)) for p in config.body_paths]
    cfg = AveragingConfig(sphere_res=config.sphere_res,
                          sphere_res_3d=config.sphere_res_3d,
                          s_max=config.s_max, s_steps=config.s_steps,
                          k_max=config.k_max, resolution=config.resolution,
                          seed_resolution=config.seed_resolution)
    report = conjecture_report(bodies, cfg)
    report["meta"] = _meta(config)
    _write_json(config.output, report)
    outdir = Path(config.outdir) if config.outdir else None
    if outdir:
        outdir.mkdir(parents=True, exist_ok=True)
        for entry in report["bodies"]:
            if "error" in entry:
                continue
            rows = []
            for k_str, tab in sorted(entry["tables"].items()):
                for i, (ti, occ) in enumerate(zip(tab["t_i"], tab["occupancy"])):
                    rows.append((int(k_str), i,
                                 float("nan") if ti is None else float(ti),
                                 float(occ)))
            _write_csv(str(outdir / f"{entry['label']}_bins.csv"),
                       _meta(config, body=entry["label"], k_star=entry["k_star"]),
                       ["k", "i", "t_i", "occupancy"], rows)
    flagged = [e["label"] for e in report["bodies"]
               if e.get("flag_conjecture_counterexample")]
    if flagged:
        print(f"FLAG: k* < 2 for {flagged} (conjecture counterexample candidate)")
    return 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse usage errors are validation failures
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        sys.exit(1)


def build_config(argv) -> RunConfig:
    parser = _Parser(prog="affinebodies",
                     description="Isoperimetric curves, critical bases, and "
                                 "equilibrium counts of affinity families")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a body spec file")
    g.add_argument("kind", choices=["ellipsoid", "fourier2d", "harmonics3d",
                                    "perturbed-sphere", "zoo"])
    g.add_argument("parameters", nargs="?", default="")
    g.add_argument("--coeffs", default="")
    g.add_argument("--degree", type=int, default=4)
    g.add_argument("--amp", type=float, default=0.1)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--label", default="")
    g.add_argument("-o", "--output", default="")
    g.add_argument("--outdir", default="")

    val = sub.add_parser("validate", help="validate body spec files")
    val.add_argument("--body", nargs="+", required=True, dest="bodies")

    an = sub.add_parser("analyze", help="one-stop body summary")
    an.add_argument("--body", required=True)
    an.add_argument("--v", default="")
    an.add_argument("--resolution", type=int, default=0)
    an.add_argument("-o", "--output", default="")

    sw = sub.add_parser("sweep", help="isoperimetric curve along one direction")
    sw.add_argument("--body", required=True)
    sw.add_argument("--v", required=True)
    sw.add_argument("--tmin", type=float, default=0.01)
    sw.add_argument("--tmax", type=float, default=100.0)
    sw.add_argument("--steps", type=int, default=81)
    sw.add_argument("--resolution", type=int, default=0)
    sw.add_argument("-o", "--output", default="")

    ba = sub.add_parser("basis", help="critical orthonormal basis")
    ba.add_argument("--body", required=True)
    ba.add_argument("--tol", type=float, default=1e-6)
    ba.add_argument("--resolution", type=int, default=0)
    ba.add_argument("-o", "--output", default="")

    eq = sub.add_parser("equilibria", help="equilibrium counts or point dump")
    eq.add_argument("--body", required=True)
    eq.add_argument("--v", default="")
    eq.add_argument("--tgrid", default="")
    eq.add_argument("--t", type=float, default=0.0)
    eq.add_argument("--seed-resolution", type=int, default=0)
    eq.add_argument("-o", "--output", default="")

    cj = sub.add_parser("conjecture", help="averaged-system experiment")
    cj.add_argument("--bodies", nargs="+", required=True)
    cj.add_argument("--k-max", type=int, default=8)
    cj.add_argument("--sphere-res", type=int, default=16)
    cj.add_argument("--sphere-res-3d", type=int, default=8)
    cj.add_argument("--s-max", type=float, default=4.0)
    cj.add_argument("--s-steps", type=int, default=33)
    cj.add_argument("--seed", type=int, default=0)
    cj.add_argument("-o", "--output", default="")
    cj.add_argument("--outdir", default="")

    ns = parser.parse_args(argv)
    config = RunConfig(command=ns.command)
    if ns.command == "generate":
        config.kind = ns.kind
        config.parameters = ns.parameters
        config.coeffs = ns.coeffs
        config.degree = ns.degree
        config.amp = ns.amp
        config.seed = ns.seed
        config.label = ns.label
        config.output = ns.output
        config.outdir = ns.outdir
    elif ns.command == "validate":
        config.body_paths = ns.bodies
    elif ns.command == "analyze":
        config.body_paths = [ns.body]
        config.v = _parse_vec(ns.v) if ns.v else None
        config.resolution = ns.resolution or None
        config.output = ns.output
    elif ns.command == "sweep":
        config.body_paths = [ns.body]
        config.v = _parse_vec(ns.v)
        config.tmin, config.tmax, config.steps = ns.tmin, ns.tmax, ns.steps
        config.resolution = ns.resolution or None
        config.output = ns.output
    elif ns.command == "basis":
        config.body_paths = [ns.body]
        config.tol = ns.tol
        config.resolution = ns.resolution or None
        config.output = ns.output
    elif ns.command == "equilibria":
        config.body_paths = [ns.body]
        config.v = _parse_vec(ns.v) if ns.v else None
        config.tgrid = ns.tgrid
        config.t = ns.t or None
        config.seed_resolution = ns.seed_resolution or None
        config.output = ns.output
        if config.tgrid and config.v is None:
            raise BadSpec("equilibria: --tgrid requires --v")
    elif ns.command == "conjecture":
        config.body_paths = ns.bodies
        config.k_max = ns.k_max
        config.sphere_res = ns.sphere_res
        config.sphere_res_3d = ns.sphere_res_3d
        config.s_max = ns.s_max
        config.s_steps = ns.s_steps
        config.seed = ns.seed
        config.output = ns.output
        config.outdir = ns.outdir
    return config


_COMMANDS = {"generate": cmd_generate, "validate": cmd_validate,
             "analyze": cmd_analyze, "sweep": cmd_sweep, "basis": cmd_basis,
             "equilibria": cmd_equilibria, "conjecture": cmd_conjecture}


def run(config: RunConfig) -> int:
    """Execute the configured pipeline; exceptions map to exit codes."""
    try:
        return _COMMANDS[config.command](config)
    except ValidationFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return 2


def main(argv=None) -> int:
    return run(build_config(argv if argv is not None else sys.argv[1:]))


if __name__ == "__main__":
    sys.exit(main())
