"""Command line runner: ``python -m moncrief <command> ...``.

Commands
--------
converge <cfg>    grafting-ray convergence experiment -> convergence.csv, report.txt
spacetime <cfg>   cosmological time on a grid -> cosmo.csv, spacetime_report.txt
selftest          invariant checks of every module, pass/fail table
panel <cfg>       curve table and intersection validation at the configured base

Exit codes: 0 success, 1 verdict false or self-test failure, 2 configuration
error, 3 numeric failure.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from .errors import EmptyDomain, GeometryError
from .graft import RaySchedule, SimplicialLamination
from .spacetime import (
    LightlikePlane,
    MinkowskiVector,
    build_domain,
    check_concavity,
    cosmological_time,
)
from .surface import (
    FNPoint,
    build_holonomy,
    curve,
    curve_table,
    geodesic_length,
    geometric_intersection,
)
from .thurston import ScheduleFailure, run_convergence

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3

DEFAULT_PANEL = (
    "gamma1", "gamma2", "gamma3", "delta1", "delta2", "delta3", "delta1delta2", "delta1delta3",
)


class ConfigError(ValueError):
    pass


# -- config -------------------------------------------------------------------


def parse_config(text: str) -> dict:
    """``key = value`` lines, ``#`` comments; values kept as stripped strings."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        out[key] = value
    return out


def load_config(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_config(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc


def _floats(raw: dict, key: str, default=None, count=None) -> tuple:
    if key not in raw:
        if default is None:
            raise ConfigError(f"missing key {key!r}")
        return tuple(default)
    try:
        vals = tuple(float(x) for x in raw[key].split(",") if x.strip())
    except ValueError as exc:
        raise ConfigError(f"{key}: {exc}") from exc
    if count is not None and len(vals) != count:
        raise ConfigError(f"{key}: expected {count} values, got {len(vals)}")
    if not all(math.isfinite(v) for v in vals):
        raise ConfigError(f"{key}: values must be finite")
    return vals


def _float(raw: dict, key: str, default=None) -> float:
    return _floats(raw, key, None if default is None else (default,), 1)[0]


def _int(raw: dict, key: str, default=None) -> int:
    if key not in raw:
        if default is None:
            raise ConfigError(f"missing key {key!r}")
        return default
    try:
        return int(raw[key])
    except ValueError as exc:
        raise ConfigError(f"{key}: {exc}") from exc


def _check_keys(raw: dict, allowed: set):
    unknown = sorted(set(raw) - allowed)
    if unknown:
        raise ConfigError(f"unknown keys: {', '.join(unknown)}")


@dataclass(frozen=True)
class ExperimentConfig:
    fn_base: FNPoint
    weights: tuple
    a0: float
    ratio: float
    steps: int
    K: float
    theta: float
    panel: tuple
    tol: float
    seed: int
    output: str

    def schedule(self) -> RaySchedule:
        return RaySchedule.geometric(
            self.a0, self.ratio, self.steps, self.fn_base, SimplicialLamination(self.weights), self.K, self.theta
        )


CONVERGE_KEYS = {
    "fn_lengths", "fn_twists", "weights", "a0", "ratio", "steps", "K", "theta", "panel", "tol", "seed", "output",
}


def experiment_config(raw: dict) -> ExperimentConfig:
    _check_keys(raw, CONVERGE_KEYS)
    try:
        fn = FNPoint(_floats(raw, "fn_lengths", count=3), _floats(raw, "fn_twists", (0, 0, 0), 3))
        weights = _floats(raw, "weights", count=3)
        SimplicialLamination(weights)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    a0, ratio, steps = _float(raw, "a0"), _float(raw, "ratio"), _int(raw, "steps")
    if a0 <= 0 or ratio <= 1 or steps < 1:
        raise ConfigError("schedule needs a0 > 0, ratio > 1, steps >= 1")
    decades = (steps - 1) * math.log10(ratio)
    if decades < 4 - 1e-9:
        raise ConfigError(f"schedule spans {decades:.3g} decades; convergence runs need at least 4")
    K, theta, tol = _float(raw, "K", 0.0), _float(raw, "theta", 1.0), _float(raw, "tol", 0.05)
    if K < 0 or not 0 < theta < math.pi / 2 or tol <= 0:
        raise ConfigError("need K >= 0, theta in (0, pi/2), tol > 0")
    names = tuple(x.strip() for x in raw["panel"].split(",")) if "panel" in raw else DEFAULT_PANEL
    known = {c.name for c in curve_table()}
    bad = [n for n in names if n not in known]
    if bad or not names:
        raise ConfigError(f"unknown panel curves: {', '.join(bad)}")
    return ExperimentConfig(
        fn, weights, a0, ratio, steps, K, theta, names, tol, _int(raw, "seed", 0), raw.get("output", "out")
    )


SPACETIME_KEYS = {
    "plane_angles", "plane_offsets", "plane_normals", "witness_budget",
    "grid_x0", "grid_x1", "grid_x2", "concavity_samples", "seed", "output",
}


def planes_from_config(raw: dict) -> list:
    planes = []
    try:
        if "plane_angles" in raw:
            angles = _floats(raw, "plane_angles")
            offsets = _floats(raw, "plane_offsets", (0.0,) * len(angles), len(angles))
            planes += [LightlikePlane.at_angle(t, c) for t, c in zip(angles, offsets)]
        if "plane_normals" in raw:
            flat = _floats(raw, "plane_normals")
            if len(flat) % 4:
                raise ConfigError("plane_normals: expected groups of l0, l1, l2, offset")
            for k in range(0, len(flat), 4):
                planes.append(LightlikePlane(MinkowskiVector(*flat[k : k + 3]), flat[k + 3]))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if not planes:
        raise ConfigError("no planes given (plane_angles or plane_normals)")
    return planes


def _grid_axis(raw, key, default):
    start, stop, n = _floats(raw, key, default, 3)
    if n < 1 or n != int(n):
        raise ConfigError(f"{key}: count must be a positive integer")
    return np.linspace(start, stop, int(n))


# -- output ---------------------------------------------------------------------


def fmt(x) -> str:
    x = float(x)
    if x == 0:
        x = 0.0
    return format(x, ".17g")


def _write(path, lines):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


# -- commands -------------------------------------------------------------------


def cmd_converge(cfg_path, out=None, seed=None, threads=1) -> int:
    try:
        cfg = experiment_config(load_config(cfg_path))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out = out or cfg.output
    panel = [curve(n) for n in cfg.panel]
    try:
        report = run_convergence(cfg.schedule(), panel, cfg.tol, threads=max(1, threads))
    except ScheduleFailure as exc:
        print(f"numeric failure at a = {fmt(exc.a)}: {exc.cause}", file=sys.stderr)
        return EXIT_NUMERIC
    except GeometryError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    os.makedirs(out, exist_ok=True)

    twist_keys = list(report.points[0].twist_products) if report.points else []
    header = ["a"]
    for n in cfg.panel:
        header += [f"length_{n}", f"scaled_{n}", f"normalized_{n}"]
    header += ["projective_error"] + [f"twist_product_{k}" for k in twist_keys]
    rows = [",".join(header)]
    for p in report.points:
        row = [fmt(p.a)]
        for n in cfg.panel:
            row += [fmt(p.lengths[n]), fmt(p.scaled[n]), fmt(p.normalized[n])]
        row += [fmt(p.error)] + [fmt(p.twist_products[k]) for k in twist_keys]
        rows.append(",".join(row))
    _write(os.path.join(out, "convergence.csv"), rows)

    target = report.normalized_target
    lines = [
        f"verdict: {'true' if report.verdict else 'false'}",
        f"weights: {', '.join(fmt(c) for c in cfg.weights)}",
        f"support: {', '.join(f'gamma{i}' for i in sorted(cfg.schedule().lamination.support))}",
        f"tolerance: {fmt(cfg.tol)}",
        f"final_error: {fmt(report.errors[-1])}",
        "target: " + ", ".join(f"{n}={fmt(target[n])}" for n in cfg.panel),
        "errors: " + ", ".join(fmt(e) for e in report.errors),
    ]
    for k in twist_keys:
        lines.append(f"max_twist_product_{k}: {fmt(max(p.twist_products[k] for p in report.points))}")
    lines += [f"diagnostic: {d}" for d in report.diagnostics]
    _write(os.path.join(out, "report.txt"), lines)
    print(lines[0])
    return EXIT_OK if report.verdict else EXIT_FAIL


def cmd_spacetime(cfg_path, out=None, seed=None, threads=1) -> int:
    try:
        raw = load_config(cfg_path)
        _check_keys(raw, SPACETIME_KEYS)
        planes = planes_from_config(raw)
        budget = _float(raw, "witness_budget", 1e8)
        axes = [
            _grid_axis(raw, "grid_x0", (0.5, 3.0, 6)),
            _grid_axis(raw, "grid_x1", (-1.0, 1.0, 5)),
            _grid_axis(raw, "grid_x2", (-1.0, 1.0, 5)),
        ]
        samples = _int(raw, "concavity_samples", 10000)
        seed = _int(raw, "seed", 0) if seed is None else seed
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out = out or raw.get("output", "out")
    try:
        d = build_domain(planes, budget=budget)
    except EmptyDomain as exc:
        print(f"empty domain: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except GeometryError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    rows = ["x0,x1,x2,T,r0,r1,r2,stratum"]
    skipped = 0
    try:
        for x0 in axes[0]:
            for x1 in axes[1]:
                for x2 in axes[2]:
                    p = MinkowskiVector(float(x0), float(x1), float(x2))
                    if not d.contains(p):
                        skipped += 1
                        continue
                    v = cosmological_time(d, p)
                    kind, idx = v.stratum
                    r = v.retraction_point
                    rows.append(",".join(
                        [fmt(x0), fmt(x1), fmt(x2), fmt(v.time), fmt(r.x0), fmt(r.x1), fmt(r.x2),
                         f"{kind}:{'-'.join(str(i) for i in idx)}"]
                    ))
        conc = check_concavity(d, samples, seed)
    except GeometryError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    os.makedirs(out, exist_ok=True)
    _write(os.path.join(out, "cosmo.csv"), rows)
    lines = [
        f"planes: {len(planes)}{' (degenerate-regular: two planes)' if d.degenerate else ''}",
        f"witness: {fmt(d.witness.x0)}, {fmt(d.witness.x1)}, {fmt(d.witness.x2)}",
        f"grid_points: {len(rows) - 1}",
        f"grid_points_outside: {skipped}",
        f"concavity_samples: {conc.samples}",
        f"concavity_seed: {seed}",
        f"concavity_violations: {len(conc.violations)}",
        f"concavity_min_slack: {fmt(conc.min_slack)}",
    ]
    _write(os.path.join(out, "spacetime_report.txt"), lines)
    print(f"concavity violations: {len(conc.violations)}")
    return EXIT_OK if conc.ok else EXIT_FAIL


def cmd_panel(cfg_path) -> int:
    try:
        raw = load_config(cfg_path)
        lengths = _floats(raw, "fn_lengths", (2.0, 2.0, 2.0), 3)
        twists = _floats(raw, "fn_twists", (0.0, 0.0, 0.0), 3)
        rep = build_holonomy(FNPoint(lengths, twists))
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except GeometryError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    print(f"{'name':<14}{'word':<34}{'dt':<12}{'measured':<12}{'length':>22}")
    ok = True
    for c in curve_table():
        try:
            meas = tuple(geometric_intersection(rep, c, i) for i in (1, 2, 3))
            length = fmt(float(geodesic_length(rep, c)))
        except GeometryError as exc:
            print(f"{c.name:<14}failed: {exc}")
            ok = False
            continue
        flag = "" if meas == c.dt_intersections else "  MISMATCH"
        ok &= not flag
        print(f"{c.name:<14}{' '.join(c.word):<34}{str(c.dt_intersections):<12}{str(meas):<12}{length:>22}{flag}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_selftest(seed: int = 0, curves=None) -> int:
    from .selftest import run_selftest

    results = run_selftest(seed=seed, curves=curves)
    width = max(len(r.name) for r in results)
    for r in results:
        print(f"{r.name:<{width}}  {'PASS' if r.ok else 'FAIL'}  {r.detail}")
    failed = [r.name for r in results if not r.ok]
    if failed:
        print(f"failed invariants: {', '.join(failed)}")
        return EXIT_FAIL
    print("all invariants pass")
    return EXIT_OK


def main(argv=None) -> int:
    # flags are accepted before or after the command
    flags = argparse.ArgumentParser(add_help=False)
    flags.add_argument("--out", default=argparse.SUPPRESS, help="output directory (overrides the config)")
    flags.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="random seed (overrides the config)")
    flags.add_argument("--threads", type=int, default=argparse.SUPPRESS, help="worker threads; never changes output")
    ap = argparse.ArgumentParser(prog="moncrief", description=__doc__.split("\n\n")[0], parents=[flags])
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ("converge", "spacetime", "panel"):
        sp = sub.add_parser(name, parents=[flags])
        sp.add_argument("config")
    sub.add_parser("selftest", parents=[flags])
    args = ap.parse_args(argv)
    for key, default in (("out", None), ("seed", None), ("threads", 1)):
        if not hasattr(args, key):
            setattr(args, key, default)
    if args.command == "converge":
        return cmd_converge(args.config, args.out, args.seed, args.threads)
    if args.command == "spacetime":
        return cmd_spacetime(args.config, args.out, args.seed, args.threads)
    if args.command == "panel":
        return cmd_panel(args.config)
    return cmd_selftest(seed=args.seed or 0)


if __name__ == "__main__":
    sys.exit(main())
