"""Command-line entry point: every experiment as a reproducible subcommand.

Data files are deterministic functions of the run configuration (the exact
config is embedded in every output); wall-clock time and the package version
go into a sidecar ``<out>.meta.json`` so reruns stay bit-identical.
Exit codes: 0 success, 2 configuration error, 3 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass

import numpy as np

from . import observables, percolation, sff, walls
from .circuit import Geometry
from .mc import resolve_processes

try:
    from importlib.metadata import version as _pkg_version

    VERSION = _pkg_version("floqcliff")
except Exception:  # pragma: no cover - metadata missing in odd installs
    VERSION = "0.1.0"

SUBCOMMANDS = (
    "spread1d",
    "spread2d",
    "entropy",
    "sff",
    "walls",
    "perc-mc",
    "perc-bound",
    "perc-walls",
)

_DEFAULT_OUT = {
    "spread1d": "spread.csv",
    "spread2d": "spread.csv",
    "entropy": "entropy.csv",
    "sff": "sff.csv",
    "walls": "walls.csv",
    "perc-mc": "survival.csv",
    "perc-bound": "bound.json",
    "perc-walls": "perc_walls.json",
}


@dataclass
class RunConfig:
    subcommand: str
    dim: int = 1
    L: int = 16
    tmax: int = 20
    samples: int = 1000
    seed: int = 1
    threads: int = 1
    out: str | None = None
    format: str = "csv"
    depth: int = 200
    mode: str = "joint"
    penetration: int = 1
    lmax: int = 200
    with_references: bool = False

    def out_path(self) -> str:
        return self.out or _DEFAULT_OUT[self.subcommand]


def validate(config: RunConfig):
    """Config diagnostics: (fatal errors, nonfatal warnings)."""
    fatal, warnings = [], []
    if config.subcommand not in SUBCOMMANDS:
        fatal.append(f"unknown subcommand {config.subcommand!r}")
        return fatal, warnings
    sampling = config.subcommand not in ("perc-bound", "perc-walls")
    if sampling and config.samples < 1:
        fatal.append("samples must be >= 1")
    if config.subcommand in ("entropy", "sff"):
        if config.L % 2 or config.L < 2:
            fatal.append("L must be even and >= 2 (two-layer structure)")
        if config.dim == 2:
            try:
                Geometry.patch(config.L)
            except ValueError as exc:
                fatal.append(str(exc))
    if config.subcommand == "spread1d" and config.dim != 1:
        fatal.append("spread1d requires --dim 1")
    if config.subcommand == "spread2d" and config.dim != 2:
        fatal.append("spread2d requires --dim 2")
    if config.tmax < 0:
        fatal.append("tmax must be >= 0")
    if config.depth < 1:
        fatal.append("depth must be >= 1")
    if config.mode not in ("joint", "independent"):
        fatal.append("mode must be joint or independent")
    if config.subcommand == "walls" and config.penetration != 1:
        fatal.append(
            "the block predicate covers penetration 1 only; "
            "use detect_walls_dynamical for longer penetrations"
        )
    if config.subcommand == "sff" and config.samples < 10**4:
        warnings.append(
            "sff with samples < 10^4: averages are dominated by rare large "
            "realizations, expect heavy-tail variance"
        )
    if config.subcommand == "perc-walls" and config.depth > 12:
        warnings.append("wall enumeration is exhaustive up to d = 12; clamping")
    return fatal, warnings


def _config_json(config: RunConfig) -> str:
    # out and threads never influence the computed data, so they are left to
    # the meta sidecar; everything embedded here pins the results bit-for-bit
    doc = asdict(config)
    doc.pop("out")
    doc.pop("threads")
    return json.dumps(doc, sort_keys=True)


def _write_table(config: RunConfig, header, rows):
    """Curve output: CSV by default, or a columns/rows JSON document."""
    path = config.out_path()
    if config.format == "json":
        payload = {
            "columns": list(header),
            "rows": [[v if isinstance(v, (int, str)) else float(v) for v in row] for row in rows],
        }
        _write_json(path, config, payload)
        return
    with open(path, "w") as fh:
        fh.write(f"# config: {_config_json(config)}\n")
        fh.write(f"# version: {VERSION}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _write_json(path: str, config: RunConfig, payload: dict):
    doc = {"config": json.loads(_config_json(config)), "version": VERSION}
    doc.update(payload)
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_meta(config: RunConfig, elapsed: float, extra: dict | None = None):
    meta = {
        "config": json.loads(_config_json(config)),
        "out": config.out_path(),
        "threads": config.threads,
        "version": VERSION,
        "wall_clock_seconds": elapsed,
    }
    if extra:
        meta.update(extra)
    with open(config.out_path() + ".meta.json", "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


# -- subcommand bodies ---------------------------------------------------------


def _run_spread(config: RunConfig) -> dict:
    prof = observables.average_spread(
        config.dim, config.tmax, config.samples, config.seed,
        processes=config.threads,
    )
    rows = []
    for t in prof.times:
        counts = prof.counts[t]
        mean = prof.mean(t)
        err = prof.stderr(t)
        for idx in np.argwhere(counts > 0):
            site = tuple(int(c) + prof.lo for c in idx)
            rows.append((t, *site, mean[tuple(idx)], err[tuple(idx)]))
    header = ["t", "x", "mean", "stderr"] if config.dim == 1 else ["t", "x", "y", "mean", "stderr"]
    _write_table(config, header, rows)
    extra = {"samples": prof.samples}
    if config.dim == 1 and config.tmax >= 30:
        folded = observables.profile_vs_distance(prof, config.tmax)
        window = (16, min(45, 2 * config.tmax - 10))
        try:
            fit = observables.fit_localization_length(folded, window)
            extra["localization_fit"] = {
                "mu": fit.mu, "c": fit.c, "window": list(fit.window),
                "residual": fit.residual, "t": config.tmax,
            }
        except ValueError as exc:
            extra["localization_fit_error"] = str(exc)
    return extra


def _run_entropy(config: RunConfig) -> dict:
    geometry = Geometry.chain(config.L) if config.dim == 1 else Geometry.patch(config.L)
    curve = observables.entanglement_curve(
        geometry, config.tmax, config.samples, config.seed, processes=config.threads
    )
    rows = [
        (int(t), config.L, m, e)
        for t, m, e in zip(curve.times, curve.mean, curve.stderr)
    ]
    _write_table(config, ["t", "L", "mean", "stderr"], rows)
    return {"geometry": list(geometry.extent), "late_time_mean": float(curve.mean[-1])}


def _run_sff(config: RunConfig) -> dict:
    geometry = Geometry.chain(config.L) if config.dim == 1 else Geometry.patch(config.L)
    est = sff.sff_curve(geometry, config.tmax, config.samples, config.seed,
                        processes=config.threads)
    geo_tag = f"{config.dim}d-" + "x".join(str(x) for x in geometry.extent)
    header = ["t", "K", "stderr", "samples", "L", "geometry"]
    kbar = sff.time_average(est)
    rows = []
    for i, t in enumerate(est.times):
        row = [int(t), est.K[i], est.stderr[i], est.samples, est.L, geo_tag]
        if config.with_references:
            row += [kbar[i], sff.rmt_reference(est.L, int(t))]
        rows.append(tuple(row))
    if config.with_references:
        header += ["Kbar", "rmt"]
    _write_table(config, header, rows)
    return {"k0": float(est.K[0]), "late_kbar": float(kbar[-1])}


def _run_walls(config: RunConfig) -> dict:
    hist = walls.wall_histogram(config.samples, config.lmax, config.seed,
                                processes=config.threads)
    rows = [(0, hist.P0, float(np.sqrt(hist.P0 * (1 - hist.P0) / hist.samples)))]
    for l in sorted(hist.tail):
        p = hist.tail[l]
        rows.append((l, p, float(np.sqrt(p * (1 - p) / hist.samples))))
    _write_table(config, ["l", "probability", "stderr"], rows)
    return {
        "prob_wall": hist.prob_wall,
        "cond_absent": hist.cond_absent,
        "c": hist.c,
        "mu": hist.mu,
        "mean_l": hist.mean_l,
        "censored": hist.censored,
    }


def _run_perc_mc(config: RunConfig) -> dict:
    curve = percolation.survival_curve(config.depth, config.mode, config.samples,
                                       config.seed)
    rows = [
        (d + 1, config.mode,
         curve[d], float(np.sqrt(max(curve[d] * (1 - curve[d]), 0.0) / config.samples)),
         config.samples)
        for d in range(config.depth)
    ]
    _write_table(config, ["depth", "mode", "estimate", "stderr", "samples"], rows)
    return {"survival_at_depth": float(curve[-1])}


def _run_perc_bound(config: RunConfig) -> dict:
    report = percolation.analytic_bound()
    payload = {
        "q": report.q,
        "epsilon": report.epsilon,
        "wall_table": {str(k): v for k, v in report.wall_table.items()},
        "per_d_terms": {str(k): v for k, v in report.per_d_terms.items()},
        "finite_sum": report.finite_sum,
        "tail_sum": report.tail_sum,
        "no_path_bound": report.no_path_bound,
        "path_lower_bound": report.path_lower_bound,
        "table_source": report.table_source,
    }
    _write_json(config.out_path(), config, payload)
    return {"no_path_bound": report.no_path_bound}


def _run_perc_walls(config: RunConfig) -> dict:
    dmax = max(2, min(config.depth, 12))
    counts = {d: percolation.count_walls(d) for d in range(2, dmax + 1)}
    payload = {
        "enumerated": {str(d): c for d, c in counts.items()},
        "published_table": {str(d): v for d, v in percolation.PAPER_WALL_TABLE.items()},
        "upper_bounds": {str(d): percolation.wall_bound(d) for d in counts if d >= 4},
    }
    _write_json(config.out_path(), config, payload)
    return {"dmax": dmax}


_RUNNERS = {
    "spread1d": _run_spread,
    "spread2d": _run_spread,
    "entropy": _run_entropy,
    "sff": _run_sff,
    "walls": _run_walls,
    "perc-mc": _run_perc_mc,
    "perc-bound": _run_perc_bound,
    "perc-walls": _run_perc_walls,
}


def run(config: RunConfig) -> int:
    fatal, warnings = validate(config)
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    if fatal:
        for msg in fatal:
            print(f"error: {msg}", file=sys.stderr)
        return 2
    t0 = time.perf_counter()
    try:
        extra = _RUNNERS[config.subcommand](config)
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return 3
    _write_meta(config, time.perf_counter() - t0, extra)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="floqcliff")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--dim", type=int, choices=(1, 2),
                       default=1 if name.endswith("1d") else 2 if name.endswith("2d") else 1)
        p.add_argument("--L", type=int, default=16)
        p.add_argument("--tmax", type=int, default=20)
        p.add_argument("--samples", type=int, default=1000)
        p.add_argument("--seed", type=int, default=1)
        p.add_argument("--threads", type=lambda s: s if s == "auto" else int(s), default=1)
        p.add_argument("--out", default=None)
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--depth", type=int, default=200)
        p.add_argument("--mode", choices=("joint", "independent"), default="joint")
        p.add_argument("--penetration", type=int, default=1)
        p.add_argument("--lmax", type=int, default=200)
        p.add_argument("--with-references", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    config = RunConfig(
        subcommand=args.subcommand,
        dim=args.dim,
        L=args.L,
        tmax=args.tmax,
        samples=args.samples,
        seed=args.seed,
        threads=resolve_processes(args.threads),
        out=args.out,
        format=args.format,
        depth=args.depth,
        mode=args.mode,
        penetration=args.penetration,
        lmax=args.lmax,
        with_references=args.with_references,
    )
    return run(config)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
