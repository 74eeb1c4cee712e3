"""Convergence experiments, report serialisation and the flat config format.

Reports hold one row per schedule entry. Errors are operator norms on
V_tau (largest singular value). Rows always use the keys ``ell``,
``sup_error`` and ``mean_error``; for Mehler-Heine sweeps ``ell`` holds the
polynomial degree N and for axiom sweeps the contraction parameter alpha.
"""
from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .groups import MotionElement, Rotation, contract_compact, contract_lorentz, contraction_defect
from .partitions import Partition, contracting_label, min_contracting_index, multiplicity
from .repmodels import CompactRepLabel, MotionRepParams, PrincipalSeriesParams, TauModel
from .spherical import SphericalFunction
from .specfun import bessel_j_scaled, jacobi_p, mehler_heine_residuals


class ConfigError(ValueError):
    """Invalid experiment configuration."""


# --------------------------------------------------------------------------
# Grids
# --------------------------------------------------------------------------

def _directions(n: int, count: int) -> np.ndarray:
    if n == 2:
        th = 2 * np.pi * np.arange(count) / count
        return np.stack([np.cos(th), np.sin(th)], axis=1)
    # Fibonacci points on S^2, deterministic for any count
    i = np.arange(count) + 0.5
    z = 1 - 2 * i / count
    phi = np.pi * (1 + 5 ** 0.5) * i
    r = np.sqrt(1 - z * z)
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)


def default_grid(n: int, seed: int = 0, rotations: int = 8, radii: int = 8,
                 directions: int = 4, max_radius: float = 2.0) -> tuple:
    """Product grid of seeded rotations x radii in (0, max_radius] x directions.

    The first rotation is the identity; the rest are Haar-random from ``seed``.
    """
    if min(rotations, radii, directions) < 1 or not max_radius > 0:
        raise ConfigError("grid sizes must be positive")
    rng = np.random.default_rng(seed)
    ks = [Rotation.identity(n)] + [Rotation.random(n, rng) for _ in range(rotations - 1)]
    rs = max_radius * np.arange(1, radii + 1) / radii
    dirs = _directions(n, directions)
    return tuple(MotionElement(k, r * d) for k in ks for r in rs for d in dirs)


def grid_hull_radius(grid) -> float:
    return float(max(np.linalg.norm(h.x) for h in grid))


# --------------------------------------------------------------------------
# Config and report
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ExperimentConfig:
    """Inputs of a contraction sweep.

    ``pair`` is "compact" (SO(n+1) -> M(n)) or "lorentz" (SO_0(2,1) -> M(2)).
    ``R`` is the motion-group radius; in the Lorentz case it is phi = phi(H0).
    """

    pair: str
    n: int
    tau: Partition
    sigma: Partition
    R: float
    grid: tuple
    ell_schedule: tuple
    tolerances: dict = field(default_factory=dict)
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.pair not in ("compact", "lorentz"):
            raise ConfigError(f"pair must be 'compact' or 'lorentz', got {self.pair!r}")
        if self.pair == "lorentz" and self.n != 2:
            raise ConfigError("the Lorentz pair is implemented for n = 2")
        if self.n not in (2, 3):
            raise ConfigError("n must be 2 or 3")
        if self.tau.group_size != self.n or self.sigma.group_size != self.n - 1:
            raise ConfigError("tau must label SO(n) and sigma SO(n-1)")
        if not self.grid:
            raise ConfigError("grid is empty")
        if any(h.n != self.n for h in self.grid):
            raise ConfigError("grid elements must lie in M(n)")
        ells = list(self.ell_schedule)
        if not ells or any(b <= a for a, b in zip(ells, ells[1:])):
            raise ConfigError("ell_schedule must be non-empty and strictly increasing")
        if min(ells) < min_contracting_index(self.tau):
            raise ConfigError(
                f"ell_schedule starts below min_contracting_index = {min_contracting_index(self.tau)}")
        if not self.R > 0:
            raise ConfigError("R (or phi) must be positive")
        if self.n == 3 and multiplicity(self.sigma, self.tau) != 1:
            raise ConfigError(f"sigma {self.sigma} does not occur in tau {self.tau}")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")

    def echo(self) -> dict:
        return {
            "pair": self.pair,
            "n": self.n,
            "tau": list(self.tau.entries),
            "sigma": list(self.sigma.entries),
            "R": self.R,
            "ell_schedule": list(self.ell_schedule),
            "grid_size": len(self.grid),
            "grid_hull_radius": grid_hull_radius(self.grid),
            "tolerances": dict(sorted(self.tolerances.items())),
            "seed": self.seed,
        }


@dataclass(frozen=True)
class Row:
    ell: float
    sup_error: float
    mean_error: float


@dataclass(eq=False)
class ConvergenceReport:
    rows: list
    config: dict
    meta: dict = field(default_factory=dict)
    wall_time: float = 0.0

    @property
    def sup_errors(self) -> list:
        return [r.sup_error for r in self.rows]

    def strictly_decreasing(self) -> bool:
        e = self.sup_errors
        return all(b < a for a, b in zip(e, e[1:]))

    def to_dict(self) -> dict:
        # wall_time stays out so that reports are byte-identical across runs
        return {
            "config": self.config,
            "rows": [{"ell": r.ell, "sup_error": r.sup_error, "mean_error": r.mean_error}
                     for r in self.rows],
            "meta": self.meta,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["ell", "sup_error", "mean_error"])
        for r in self.rows:
            w.writerow([r.ell, repr(r.sup_error), repr(r.mean_error)])
        return buf.getvalue()


def fitted_rate(xs, errors):
    """Least-squares slope of log(error) against log(x); None when undefined."""
    xs, errors = np.asarray(xs, float), np.asarray(errors, float)
    ok = (errors > 0) & (xs > 0)
    if ok.sum() < 2:
        return None
    return float(np.polyfit(np.log(xs[ok]), np.log(errors[ok]), 1)[0])


def _meta(seed, xs, errors, **extra):
    return {"version": __version__, "seed": int(seed), "fitted_rate": fitted_rate(xs, errors), **extra}


def _pmap(fn, items, workers):
    # ordered reduction: results come back in input order whatever the schedule
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))


def _op_norm(a) -> float:
    return float(np.linalg.norm(np.atleast_2d(a), 2))


# --------------------------------------------------------------------------
# Experiments
# --------------------------------------------------------------------------

def _sweep(cfg: ExperimentConfig, limit: SphericalFunction, approx_at) -> ConvergenceReport:
    t0 = time.perf_counter()
    reference = _pmap(lambda h: limit(h).mat, cfg.grid, cfg.workers)
    rows = []
    for ell in cfg.ell_schedule:
        phi_ell, contract = approx_at(ell)
        errs = _pmap(lambda item: _op_norm(phi_ell(contract(item[0])).mat - item[1]),
                     list(zip(cfg.grid, reference)), cfg.workers)
        rows.append(Row(int(ell), float(max(errs)), float(np.mean(errs))))
    errs = [r.sup_error for r in rows]
    report = ConvergenceReport(rows, cfg.echo(), _meta(cfg.seed, cfg.ell_schedule, errs),
                               time.perf_counter() - t0)
    report.meta["strictly_decreasing"] = report.strictly_decreasing()
    return report


def convergence_run(cfg: ExperimentConfig) -> ConvergenceReport:
    """Compare Phi_ell of SO(n+1) at D_{ell/R}(k, x) with Phi of M(n) at (k, x)."""
    if cfg.pair != "compact":
        raise ConfigError("convergence_run needs pair = 'compact'")
    tau = TauModel(cfg.n, cfg.tau)
    limit = SphericalFunction("motion", MotionRepParams(cfg.n, cfg.sigma, cfg.R), tau)

    def approx_at(ell):
        label = CompactRepLabel(contracting_label(cfg.sigma, ell))
        if cfg.n == 3:
            label.spins  # parity check before any work
        alpha = ell / cfg.R
        return SphericalFunction("compact", label, tau), lambda h: contract_compact(alpha, h)

    return _sweep(cfg, limit, approx_at)


def dual_convergence_run(cfg: ExperimentConfig) -> ConvergenceReport:
    """Compare Phi of the principal series with parameter ell * phi at D_ell(k, x) with Phi of M(2)."""
    if cfg.pair != "lorentz":
        raise ConfigError("dual_convergence_run needs pair = 'lorentz'")
    tau = TauModel(2, cfg.tau)
    limit = SphericalFunction("motion", MotionRepParams(2, cfg.sigma, cfg.R), tau)

    def approx_at(ell):
        rep = PrincipalSeriesParams(ell * cfg.R)
        return SphericalFunction("lorentz", rep, tau), lambda h: contract_lorentz(ell, h)

    return _sweep(cfg, limit, approx_at)


def mehler_heine_run(Ns, alpha: float, beta: float, z_grid, seed: int = 0,
                     normalize: bool = True) -> ConvergenceReport:
    """Rows (N, max, mean) of the Jacobi-to-Bessel gap over z_grid.

    By default each side is divided by its value at z = 0, so both equal 1
    there; this removes the O(1/N) offset of the Jacobi side when alpha > 0
    and changes nothing for alpha = beta = 0. ``normalize=False`` gives the
    raw |P_N^(a,b)(cos(z/N)) / N^a - J_a(z) / (z/2)^a| of mehler_heine_error.
    """
    Ns = [int(N) for N in Ns]
    if not Ns:
        raise ConfigError("Ns is empty")
    z = np.asarray(list(z_grid), dtype=float)
    if z.size == 0:
        raise ConfigError("z_grid is empty")
    t0 = time.perf_counter()
    rows = []
    for N in Ns:
        if normalize:
            lhs = jacobi_p(N, alpha, beta, np.cos(z / N)) / jacobi_p(N, alpha, beta, 1.0)
            rhs = bessel_j_scaled(alpha, z) * math.gamma(alpha + 1)
            res = np.abs(lhs - rhs)
        else:
            res = mehler_heine_residuals(N, alpha, beta, z)
        rows.append(Row(N, float(np.max(res)), float(np.mean(res))))
    cfg = {"Ns": Ns, "alpha": alpha, "beta": beta, "z_grid": z.tolist(), "normalize": normalize}
    rep = ConvergenceReport(rows, cfg, _meta(seed, Ns, [r.sup_error for r in rows]),
                            time.perf_counter() - t0)
    rep.meta["strictly_decreasing"] = rep.strictly_decreasing()
    return rep


def random_motion_pairs(n: int, n_pairs: int, seed: int, max_norm: float = 1.0):
    """Seeded pairs (h1, h2) in M(n) with Haar rotations and |x| <= max_norm."""
    rng = np.random.default_rng(seed)

    def one():
        k = Rotation.random(n, rng)
        d = rng.standard_normal(n)
        d /= np.linalg.norm(d)
        return MotionElement(k, max_norm * rng.uniform() ** (1 / n) * d)

    return [(one(), one()) for _ in range(n_pairs)]


def axiom_run(alphas, n_pairs: int, seed: int, n: int = 2, kind: str = "compact") -> ConvergenceReport:
    """Rows (alpha, max, mean) of the contraction-axiom defect over seeded pairs."""
    alphas = [float(a) for a in alphas]
    if not alphas or any(b <= a for a, b in zip(alphas, alphas[1:])):
        raise ConfigError("alphas must be non-empty and strictly increasing")
    if n_pairs < 1:
        raise ConfigError("n_pairs must be positive")
    if kind == "lorentz" and n != 2:
        raise ConfigError("the Lorentz contraction is implemented for n = 2")
    t0 = time.perf_counter()
    pairs = random_motion_pairs(n, n_pairs, seed)
    rows = []
    for a in alphas:
        d = [contraction_defect(a, h1, h2, kind) for h1, h2 in pairs]
        rows.append(Row(a, float(max(d)), float(np.mean(d))))
    cfg = {"alphas": alphas, "n_pairs": n_pairs, "n": n, "kind": kind}
    rep = ConvergenceReport(rows, cfg, _meta(seed, alphas, [r.sup_error for r in rows]),
                            time.perf_counter() - t0)
    rep.meta["strictly_decreasing"] = rep.strictly_decreasing()
    return rep


def check_tolerances(report: ConvergenceReport, tolerances: dict) -> list:
    """Names of violated tolerances. Known keys: final_error, monotone (truthy)."""
    bad = []
    if "final_error" in tolerances and not report.rows[-1].sup_error < tolerances["final_error"]:
        bad.append("final_error")
    if tolerances.get("monotone") and not report.strictly_decreasing():
        bad.append("monotone")
    return bad


# --------------------------------------------------------------------------
# Flat key = value config files
# --------------------------------------------------------------------------

def parse_config(text: str) -> dict:
    """Parse ``key = value`` lines; '#' starts a comment; dotted keys are kept flat."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
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
        raise ConfigError(f"cannot read config {path}: {exc}") from exc


def parse_int_list(value: str) -> list:
    value = value.strip()
    if value in ("", "-"):
        return []
    try:
        return [int(v) for v in value.split(",")]
    except ValueError as exc:
        raise ConfigError(f"expected a comma list of integers, got {value!r}") from exc


def parse_float_list(value: str) -> list:
    try:
        return [float(v) for v in value.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"expected a comma list of numbers, got {value!r}") from exc


def parse_partition(value: str, N: int) -> Partition:
    from .partitions import PartitionError

    try:
        return Partition.of(N, *parse_int_list(value))
    except PartitionError as exc:
        raise ConfigError(str(exc)) from exc


def _float_range(start, stop, step):
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [start + i * step for i in range(count)]


DEFAULT_Z_GRID = tuple(_float_range(0.5, 5.0, 0.5))
