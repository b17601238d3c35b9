"""Command-line entry point.

Subcommands: simulate, self-similar, reparam, cusps, converge, oracle-check.
Configuration may come from a single JSON document (--config); explicit
flags override file values.  Exit codes: 0 success, 2 validation error,
3 invariant violation detected during a verification run.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, asdict, field
from pathlib import Path

import numpy as np

from . import __version__
from . import asymptotics, cusps, curveio, fd, reparam, selfsimilar, spectral
from .curves import curvature_from_samples
from .errors import InvariantViolationError, ValidationError, LegendreFlowError


@dataclass
class RunConfig:
    command: str
    n: int = 1
    a0: float = 0.0
    modes: dict = field(default_factory=dict)   # {k: (a_k, b_k)}
    curve: str | None = None
    m: int | None = None
    c1: float | None = None
    c2: float = 0.0
    times: list = field(default_factory=list)
    samples: int = 512
    outdir: str = "."
    catalog: bool = False
    equation: str = "beta"
    scheme: str = "crank_nicolson"
    dt: float = 1e-3
    final_time: float = 0.25

    def validate(self):
        if self.times and (any(t < 0 for t in self.times)
                           or any(b <= a for a, b in zip(self.times, self.times[1:]))):
            raise ValidationError("times must be non-negative and strictly increasing")
        sources = sum([bool(self.modes) or self.a0 != 0.0,
                       self.curve is not None,
                       self.m is not None])
        if sources > 1:
            raise ValidationError(
                "exactly one initial-data source allowed: inline coefficients, "
                "a curve CSV, or profile parameters")

    def to_json_dict(self):
        d = asdict(self)
        d["modes"] = {str(k): list(v) for k, v in self.modes.items()}
        return d


def _parse_mode(text):
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise ValidationError(f"malformed mode {text!r}; expected k:a or k:a:b")
    try:
        k = int(parts[0])
        a = float(parts[1])
        b = float(parts[2]) if len(parts) == 3 else 0.0
    except ValueError as exc:
        raise ValidationError(f"malformed coefficients in mode {text!r}") from exc
    return k, (a, b)


def _parse_times(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise ValidationError(f"malformed time list {text!r}") from exc


def _spectral_from_config(config: RunConfig):
    if config.curve is not None:
        try:
            curve, extras = curveio.read_curve_csv(config.curve)
        except OSError as exc:
            raise ValidationError(f"unreadable input CSV: {exc}") from exc
        curvature = curvature_from_samples(curve)
        beta0 = extras.get("beta", curvature.beta)
        from .curves import angle_unwrap
        n = angle_unwrap(curve).rotation_index
        return spectral.analyze_beta(beta0, n), curve
    s = spectral.SpectralBeta.from_modes(config.n, a0=config.a0, modes=config.modes)
    return s, None


def _emit_manifest(outdir, config: RunConfig, outputs):
    return curveio.write_manifest(Path(outdir) / "manifest.json",
                                  config.to_json_dict(), outputs, __version__)


def _cmd_simulate(config: RunConfig):
    s, curve0 = _spectral_from_config(config)
    if curve0 is None:
        curve0 = spectral.reconstruct_centered_curve(s, config.samples)
    outdir = Path(config.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    times = config.times or [0.0]
    outputs = []
    for idx, t in enumerate(times):
        state = spectral.evolve_curve(s, curve0, t)
        path = outdir / f"flow_{idx:03d}.csv"
        curveio.write_curve_csv(path, state.curve, state.curvature, t=t)
        outputs.append(path)
    manifest = _emit_manifest(outdir, config, outputs)
    print(f"wrote {len(outputs)} snapshots and {manifest}")
    return 0


def _cmd_self_similar(config: RunConfig):
    outdir = Path(config.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    if config.catalog:
        rows = []
        outputs = []
        for n, m, c1, c2 in selfsimilar.GALLERY_PROFILES:
            profile = selfsimilar.SelfSimilarProfile(n=n, m=m, c1=c1, c2=c2)
            stem = f"profile_n{n}_m{m}_c1{c1:g}_c2{c2:g}"
            paths = _write_profile(outdir, stem, profile, config.samples)
            outputs.extend(paths)
            rows.append({
                "n": n, "m": m, "c1": c1, "c2": c2,
                "lap_count": selfsimilar.lap_count(n, m),
                "cusp_count": selfsimilar.cusp_count(n, m),
                "csv": paths[0].name, "svg": paths[1].name,
            })
        index = outdir / "catalog.json"
        index.write_text(json.dumps(rows, indent=2) + "\n")
        outputs.append(index)
        _emit_manifest(outdir, config, outputs)
        print(f"catalog of {len(rows)} profiles written to {outdir}")
        return 0
    if config.m is None or config.c1 is None:
        raise ValidationError("self-similar needs --m and --c1 (or --catalog)")
    profile = selfsimilar.SelfSimilarProfile(
        n=config.n, m=config.m, c1=config.c1, c2=config.c2)
    stem = f"profile_n{config.n}_m{config.m}"
    outputs = _write_profile(outdir, stem, profile, config.samples)
    _emit_manifest(outdir, config, outputs)
    print(f"laps={selfsimilar.lap_count(config.n, config.m)} "
          f"cusps={selfsimilar.cusp_count(config.n, config.m)} -> {outputs[1]}")
    return 0


def _write_profile(outdir, stem, profile, samples):
    num = max(samples, profile.render_samples())
    u = np.linspace(0.0, 2.0 * np.pi, num, endpoint=False)
    positions = selfsimilar.profile_position(profile, u)
    from .curves import LegendreCurve, LegendreCurvature
    curve = LegendreCurve(positions=positions, normals=profile.normal(u))
    curvature = LegendreCurvature(ell=np.full(num, float(profile.n)),
                                  beta=profile.beta(u))
    csv_path = curveio.write_curve_csv(outdir / f"{stem}.csv", curve, curvature)
    svg_path = Path(outdir) / f"{stem}.svg"
    svg_path.write_text(curveio.render_svg(positions))
    return [csv_path, svg_path]


def _cmd_reparam(config: RunConfig):
    if config.curve is None:
        raise ValidationError("reparam needs --curve pointing at a curve CSV")
    try:
        curve, _ = curveio.read_curve_csv(config.curve)
    except OSError as exc:
        raise ValidationError(f"unreadable input CSV: {exc}") from exc
    normalized, record = reparam.reparametrize(curve)
    outdir = Path(config.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    out_csv = curveio.write_curve_csv(outdir / "normalized.csv", normalized,
                                      curvature_from_samples(normalized))
    _emit_manifest(outdir, config, [out_csv])
    print(f"rotation index {record.rotation_index}, theta0 = {record.theta0:.6f} "
          f"-> {out_csv}")
    return 0


def _cmd_cusps(config: RunConfig):
    s, _ = _spectral_from_config(config)
    times = config.times or list(np.geomspace(0.01, 10.0, 30))
    series = cusps.zero_count_series(s, times)
    events = cusps.detect_strict_decrease(s, series)
    outdir = Path(config.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    csv_path = outdir / "zero_counts.csv"
    with csv_path.open("w") as fh:
        fh.write("t,z,events\n")
        for t, z in series:
            inside = sum(1 for e in events if e.interval[0] <= t < e.interval[1])
            fh.write(f"{t!r},{z},{inside}\n")
    report = []
    for t, _ in series:
        rep = cusps.find_zeros(s, t)
        report.append({
            "t": t,
            "count": rep.count,
            "zeros": [{"u": z.location, "dbeta": z.derivative, "kind": z.kind}
                      for z in rep.zeros],
        })
    json_path = outdir / "cusp_report.json"
    json_path.write_text(json.dumps({
        "series": report,
        "events": [{"interval": e.interval, "t_event": e.t_event,
                    "drop": [e.count_before, e.count_after],
                    "witness": {"u": e.witness_u, "beta": e.witness_beta,
                                "dbeta": e.witness_dbeta}}
                   for e in events],
    }, indent=2) + "\n")
    _emit_manifest(outdir, config, [csv_path, json_path])
    print(f"z(t) over {len(series)} times, {len(events)} strict decrease(s)")
    return 0


def _cmd_converge(config: RunConfig):
    s, curve0 = _spectral_from_config(config)
    if curve0 is None:
        curve0 = spectral.reconstruct_centered_curve(s, config.samples)
    times = config.times or list(np.linspace(1.0, 6.0, 6))
    report = asymptotics.fit_decay_rate(s, curve0, times)
    outdir = Path(config.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    csv_path = outdir / "scaled_error.csv"
    with csv_path.open("w") as fh:
        fh.write("t,scaled_error\n")
        for t, e in report.errors:
            fh.write(f"{t!r},{e!r}\n")
    json_path = outdir / "convergence.json"
    json_path.write_text(json.dumps({
        "leading_mode": report.leading_mode,
        "center": list(map(float, report.center)),
        "fitted_rate": report.fitted_rate,
        "predicted_rate": report.predicted_rate,
        "exactly_self_similar": report.exactly_self_similar,
        "envelope_bounded": report.envelope_bounded,
    }, indent=2) + "\n")
    _emit_manifest(outdir, config, [csv_path, json_path])
    if report.exactly_self_similar:
        print("input is exactly self-similar; no rate to fit")
    else:
        print(f"fitted rate {report.fitted_rate:.6f} "
              f"(predicted {report.predicted_rate:.6f})")
    return 0


def _cmd_oracle_check(config: RunConfig):
    outdir = Path(config.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    grid = fd.FDGrid(num_points=config.samples, dt=config.dt, scheme=config.scheme)
    result = {"equation": config.equation, "scheme": config.scheme,
              "N": config.samples, "dt": config.dt, "T": config.final_time}
    if config.equation == "beta":
        s, _ = _spectral_from_config(config)
        u = np.linspace(0.0, 2.0 * np.pi, config.samples, endpoint=False)
        beta0 = spectral.synthesize_beta(s, u)
        exact = spectral.evolve_beta(s, config.final_time, u)
        approx = fd.solve_beta_fd(beta0, s.n, config.final_time, grid)
        err_coarse = float(np.max(np.abs(approx - exact)))
        fine = fd.FDGrid(num_points=2 * config.samples, dt=config.dt / 2,
                         scheme=config.scheme)
        u2 = np.linspace(0.0, 2.0 * np.pi, fine.num_points, endpoint=False)
        approx2 = fd.solve_beta_fd(spectral.synthesize_beta(s, u2), s.n,
                                   config.final_time, fine)
        err_fine = float(np.max(np.abs(
            approx2 - spectral.evolve_beta(s, config.final_time, u2))))
        order = float(np.log2(err_coarse / err_fine)) if err_fine > 0 else float("inf")
        result.update({"error": err_coarse, "refined_error": err_fine,
                       "observed_order": order,
                       "order_ok": bool(order >= 1.9)})
    elif config.equation == "phi":
        state0 = fd.PhiState.from_phi(
            np.linspace(0.0, 2.0 * np.pi, config.samples, endpoint=False)
            + 0.2 * np.sin(np.linspace(0.0, 2.0 * np.pi, config.samples,
                                       endpoint=False)))
        forcing = lambda u, t: 0.1 * np.sin(u)
        traj = fd.solve_phi_fd(state0, lambda u, t: np.full_like(u, float(config.n)),
                               config.final_time, grid, forcing=forcing)
        rows = fd.gradient_bound_envelope(traj, lambda t: 0.1)
        bounds_ok = all(lo_b - 1e-12 <= lo and hi <= hi_b + 1e-12
                        for _, lo_b, lo, hi, hi_b in rows)
        result.update({
            "gradient_bounds_ok": bool(bounds_ok),
            "max_winding_residual": max(traj.winding_residual),
            "winding_ok": bool(max(traj.winding_residual) < 1e-8),
        })
    else:
        raise ValidationError(f"unknown equation {config.equation!r}")
    json_path = outdir / "oracle_check.json"
    json_path.write_text(json.dumps(result, indent=2) + "\n")
    _emit_manifest(outdir, config, [json_path])
    print(json.dumps(result, indent=2))
    if result.get("order_ok") is False or result.get("gradient_bounds_ok") is False:
        raise InvariantViolationError("oracle check failed its verdict")
    return 0


_COMMANDS = {
    "simulate": _cmd_simulate,
    "self-similar": _cmd_self_similar,
    "reparam": _cmd_reparam,
    "cusps": _cmd_cusps,
    "converge": _cmd_converge,
    "oracle-check": _cmd_oracle_check,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="legendreflow",
        description="Inverse curvature flow of l-convex Legendre curves: "
                    "exact spectral solver, cusp tracking, self-similar "
                    "profiles, finite-difference oracles.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, coeffs=True):
        p.add_argument("--config", help="JSON config file; flags override it")
        p.add_argument("--outdir", default=None,
                       help="output directory (default $LEGENDREFLOW_OUTDIR or .)")
        p.add_argument("--samples", type=int, default=None)
        if coeffs:
            p.add_argument("--n", type=int, default=None, help="rotation index")
            p.add_argument("--a0", type=float, default=None)
            p.add_argument("--mode", action="append", default=None,
                           metavar="k:a[:b]", help="add a Fourier mode (repeatable)")
            p.add_argument("--curve", default=None, help="curve CSV input")
            p.add_argument("--times", default=None, help="comma-separated time list")

    p = sub.add_parser("simulate", help="evolve a flow and dump snapshots")
    add_common(p)

    p = sub.add_parser("self-similar", help="emit a self-similar profile or catalog")
    add_common(p, coeffs=False)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--c1", type=float, default=None)
    p.add_argument("--c2", type=float, default=None)
    p.add_argument("--catalog", action="store_true")

    p = sub.add_parser("reparam", help="normalize a curve CSV to l == n")
    add_common(p, coeffs=False)
    p.add_argument("--curve", default=None, help="curve CSV input")

    p = sub.add_parser("cusps", help="zero counts, classifications and events")
    add_common(p)

    p = sub.add_parser("converge", help="rescaled convergence report")
    add_common(p)

    p = sub.add_parser("oracle-check", help="finite-difference cross-checks")
    add_common(p)
    p.add_argument("--equation", choices=["beta", "phi"], default=None)
    p.add_argument("--scheme", choices=list(fd.SCHEMES), default=None)
    p.add_argument("--dt", type=float, default=None)
    p.add_argument("--T", dest="final_time", type=float, default=None)
    return parser


def config_from_args(args):
    file_values = {}
    if getattr(args, "config", None):
        try:
            file_values = json.loads(Path(args.config).read_text())
        except OSError as exc:
            raise ValidationError(f"unreadable config file: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ValidationError(f"malformed config JSON: {exc}") from exc

    def pick(name, default):
        flag = getattr(args, name, None)
        if flag is not None:
            return flag
        if name in file_values:
            return file_values[name]
        return default

    modes = {}
    for entry in file_values.get("modes", {}).items() if "modes" in file_values else []:
        k, v = entry
        modes[int(k)] = (float(v[0]), float(v[1]))
    if getattr(args, "mode", None):
        modes = dict(_parse_mode(m) for m in args.mode)

    times = file_values.get("times", [])
    if getattr(args, "times", None):
        times = _parse_times(args.times)

    outdir = pick("outdir", os.environ.get("LEGENDREFLOW_OUTDIR", "."))
    config = RunConfig(
        command=args.command,
        n=int(pick("n", 1)),
        a0=float(pick("a0", 0.0)),
        modes=modes,
        curve=pick("curve", None),
        m=pick("m", None),
        c1=pick("c1", None),
        c2=float(pick("c2", 0.0)),
        times=[float(t) for t in times],
        samples=int(pick("samples", 512)),
        outdir=outdir,
        catalog=bool(getattr(args, "catalog", False) or file_values.get("catalog", False)),
        equation=pick("equation", "beta"),
        scheme=pick("scheme", "crank_nicolson"),
        dt=float(pick("dt", 1e-3)),
        final_time=float(pick("final_time", 0.25)),
    )
    if config.m is not None:
        config.m = int(config.m)
    if config.c1 is not None:
        config.c1 = float(config.c1)
    config.validate()
    return config


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
        return _COMMANDS[args.command](config)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (InvariantViolationError,) as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return 3
    except LegendreFlowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
