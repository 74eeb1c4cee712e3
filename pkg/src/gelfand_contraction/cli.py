"""Command line entry point: ``gelfand-contraction <subcommand> [options]``.

Exit codes: 0 success, 2 configuration or usage error, 3 a run finished
but violated one of its configured tolerances.
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from .groups import (
    CompactElement,
    LorentzElement,
    MotionElement,
    Rotation,
    exp_cartan,
    exp_lorentz,
)
from .harness import (
    DEFAULT_Z_GRID,
    ConfigError,
    ExperimentConfig,
    axiom_run,
    check_tolerances,
    convergence_run,
    default_grid,
    dual_convergence_run,
    load_config,
    mehler_heine_run,
    parse_float_list,
    parse_int_list,
    parse_partition,
)
from .partitions import Partition, branch
from .repmodels import CompactRepLabel, MotionRepParams, PrincipalSeriesParams, TauModel
from .spherical import spherical_value

EXIT_OK, EXIT_CONFIG, EXIT_TOLERANCE = 0, 2, 3

SWEEP_KEYS = {
    "n", "tau", "sigma", "R", "phi", "ell_schedule", "seed", "workers",
    "grid.rotations", "grid.radii", "grid.directions", "grid.max_radius",
    "tolerances.final_error", "tolerances.monotone", "output.json", "output.csv",
}
MH_KEYS = {"Ns", "alpha", "beta", "z_grid", "normalize", "seed", "tolerances.final_error",
           "tolerances.monotone", "output.json", "output.csv"}
AXIOM_KEYS = {"alphas", "pairs", "seed", "n", "kind", "tolerances.final_error",
              "tolerances.monotone", "output.json", "output.csv"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(f"{self.prog}: {message}")


def _add_output(p):
    p.add_argument("--config", help="flat 'key = value' config file")
    p.add_argument("--json", dest="output.json", help="write the JSON report here (default: stdout)")
    p.add_argument("--csv", dest="output.csv", help="also write a CSV table here")
    p.add_argument("--seed", dest="seed")
    p.add_argument("--final-error", dest="tolerances.final_error",
                   help="fail with exit 3 unless the last sup error is below this")
    p.add_argument("--monotone", dest="tolerances.monotone", action="store_const", const="1",
                   help="fail with exit 3 unless sup errors strictly decrease")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gelfand-contraction",
                     description="Spherical functions of Gelfand pairs and their contraction limits.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("branch", help="list the SO(N-1) constituents of an SO(N) irrep")
    p.add_argument("--group", required=True, help="so<N>, e.g. so5")
    p.add_argument("--partition", required=True, help="comma list, e.g. 2,1")

    p = sub.add_parser("eval", help="print one spherical value Phi(g)")
    p.add_argument("--pair", required=True, choices=["compact", "motion", "lorentz"])
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--tau", default="0")
    p.add_argument("--sigma", default="-")
    p.add_argument("--R", type=float, default=1.0, help="motion radius")
    p.add_argument("--ell", type=int, help="first entry of the compact label (ell, sigma...)")
    p.add_argument("--phi", type=float, default=1.0, help="principal series parameter")
    p.add_argument("--x", default="0,0", help="translation / Cartan coordinates")
    p.add_argument("--rotation", default=None,
                   help="k: an angle (n = 2) or zyz Euler angles (n = 3); identity by default")

    for name, helptext in (("contract", "compact -> motion convergence sweep"),
                           ("dual", "Lorentz -> motion convergence sweep")):
        p = sub.add_parser(name, help=helptext)
        _add_output(p)
        p.add_argument("--n", dest="n")
        p.add_argument("--tau", dest="tau")
        p.add_argument("--sigma", dest="sigma")
        p.add_argument("--R", dest="R")
        p.add_argument("--phi", dest="phi")
        p.add_argument("--ells", dest="ell_schedule")
        p.add_argument("--workers", dest="workers")
        p.add_argument("--grid-rotations", dest="grid.rotations")
        p.add_argument("--grid-radii", dest="grid.radii")
        p.add_argument("--grid-directions", dest="grid.directions")
        p.add_argument("--max-radius", dest="grid.max_radius")

    p = sub.add_parser("mehler-heine", help="Jacobi -> Bessel limit sweep")
    _add_output(p)
    p.add_argument("--Ns", dest="Ns")
    p.add_argument("--alpha", dest="alpha")
    p.add_argument("--beta", dest="beta")
    p.add_argument("--z", dest="z_grid")
    p.add_argument("--raw", dest="normalize", action="store_const", const="0",
                   help="skip dividing both sides by their value at z = 0")

    p = sub.add_parser("axiom", help="contraction-axiom defect sweep")
    _add_output(p)
    p.add_argument("--alphas", dest="alphas")
    p.add_argument("--pairs", dest="pairs")
    p.add_argument("--n", dest="n")
    p.add_argument("--kind", dest="kind", choices=["compact", "lorentz"])
    return parser


def _settings(args, allowed) -> dict:
    cfg = load_config(args.config) if getattr(args, "config", None) else {}
    unknown = set(cfg) - allowed
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    for key in allowed:
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = str(val)
    return cfg


def _num(cfg, key, default, kind=float):
    try:
        return kind(cfg[key]) if key in cfg else default
    except ValueError as exc:
        raise ConfigError(f"{key}: cannot parse {cfg[key]!r}") from exc


def _tolerances(cfg) -> dict:
    tol = {}
    if "tolerances.final_error" in cfg:
        tol["final_error"] = _num(cfg, "tolerances.final_error", None)
    if "tolerances.monotone" in cfg:
        tol["monotone"] = cfg["tolerances.monotone"].lower() in ("1", "true", "yes")
    return tol


def _sweep_config(cfg, pair) -> ExperimentConfig:
    n = _num(cfg, "n", 2, int)
    seed = _num(cfg, "seed", 0, int)
    grid = default_grid(
        n, seed,
        rotations=_num(cfg, "grid.rotations", 8, int),
        radii=_num(cfg, "grid.radii", 8, int),
        directions=_num(cfg, "grid.directions", 4, int),
        max_radius=_num(cfg, "grid.max_radius", 2.0),
    )
    default_ells = "32,64,128,256" if n == 2 else "16,32,64"
    radius_key = "R" if pair == "compact" else "phi"
    return ExperimentConfig(
        pair=pair, n=n,
        tau=parse_partition(cfg.get("tau", "0"), n),
        sigma=parse_partition(cfg.get("sigma", "-" if n == 2 else "0"), n - 1),
        R=_num(cfg, radius_key, 1.0),
        grid=grid,
        ell_schedule=tuple(parse_int_list(cfg.get("ell_schedule", default_ells))),
        tolerances=_tolerances(cfg),
        seed=seed,
        workers=_num(cfg, "workers", 1, int),
    )


def _emit(report, cfg) -> int:
    text = report.to_json()
    if "output.json" in cfg:
        with open(cfg["output.json"], "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    if "output.csv" in cfg:
        with open(cfg["output.csv"], "w", encoding="utf-8") as fh:
            fh.write(report.to_csv())
    bad = check_tolerances(report, _tolerances(cfg))
    if bad:
        print(f"tolerance check failed: {', '.join(bad)}", file=sys.stderr)
        return EXIT_TOLERANCE
    return EXIT_OK


def _cmd_branch(args) -> int:
    group = args.group.lower()
    if not group.startswith("so") or not group[2:].isdigit():
        raise ConfigError(f"--group must look like so5, got {args.group!r}")
    N = int(group[2:])
    p = parse_partition(args.partition, N)
    for q in branch(p):
        print(",".join(str(v) for v in q.entries) if q.entries else "-")
    return EXIT_OK


def _rotation(spec, n) -> Rotation:
    if spec is None:
        return Rotation.identity(n)
    vals = parse_float_list(spec)
    if n == 2 and len(vals) == 1:
        return Rotation.from_angle(vals[0])
    if n == 3 and len(vals) == 3:
        return Rotation.from_euler(*vals)
    raise ConfigError("--rotation takes one angle for n = 2 or three Euler angles for n = 3")


def _cmd_eval(args) -> int:
    n = args.n
    x = np.array(parse_float_list(args.x))
    if len(x) != n:
        raise ConfigError(f"--x needs {n} components")
    k = _rotation(args.rotation, n)
    tau = TauModel(n, parse_partition(args.tau, n))
    sigma = parse_partition(args.sigma, n - 1)
    if args.pair == "motion":
        rep, g = MotionRepParams(n, sigma, args.R), MotionElement(k, x)
    elif args.pair == "compact":
        if args.ell is None:
            raise ConfigError("--ell is required for the compact pair")
        rep = CompactRepLabel(Partition.of(n + 1, args.ell, *sigma.entries))
        g = exp_cartan(x) @ CompactElement.from_k(k)
    else:
        if n != 2:
            raise ConfigError("the Lorentz pair is implemented for n = 2")
        rep, g = PrincipalSeriesParams(args.phi), exp_lorentz(x) @ LorentzElement.from_k(k)
    val = spherical_value(args.pair, rep, tau, g)
    for row in val.mat:
        print(" ".join(repr(complex(v)) for v in row))
    return EXIT_OK


def _cmd_sweep(args, pair) -> int:
    cfg = _settings(args, SWEEP_KEYS)
    exp = _sweep_config(cfg, pair)
    report = convergence_run(exp) if pair == "compact" else dual_convergence_run(exp)
    return _emit(report, cfg)


def _cmd_mh(args) -> int:
    cfg = _settings(args, MH_KEYS)
    Ns = parse_int_list(cfg.get("Ns", "50,100,200"))
    z = parse_float_list(cfg["z_grid"]) if "z_grid" in cfg else list(DEFAULT_Z_GRID)
    report = mehler_heine_run(Ns, _num(cfg, "alpha", 0.0), _num(cfg, "beta", 0.0), z,
                              seed=_num(cfg, "seed", 0, int),
                              normalize=cfg.get("normalize", "1").lower() in ("1", "true", "yes"))
    return _emit(report, cfg)


def _cmd_axiom(args) -> int:
    cfg = _settings(args, AXIOM_KEYS)
    alphas = parse_float_list(cfg.get("alphas", "10,100,1000"))
    report = axiom_run(alphas, _num(cfg, "pairs", 100, int), _num(cfg, "seed", 0, int),
                       n=_num(cfg, "n", 2, int), kind=cfg.get("kind", "compact"))
    return _emit(report, cfg)


def run_cli(argv=None) -> int:
    """Run one subcommand and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "branch":
            return _cmd_branch(args)
        if args.command == "eval":
            return _cmd_eval(args)
        if args.command in ("contract", "dual"):
            return _cmd_sweep(args, "compact" if args.command == "contract" else "lorentz")
        if args.command == "mehler-heine":
            return _cmd_mh(args)
        return _cmd_axiom(args)
    except ValueError as exc:
        # ConfigError and the structural errors of partitions / groups / repmodels
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SystemExit as exc:
        # --help
        return int(exc.code or 0)


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
