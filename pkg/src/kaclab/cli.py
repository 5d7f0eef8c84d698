"""Command-line entry point: ``kaclab <subcommand> [options]``."""
from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from pathlib import Path

from . import __version__
from .experiments import configs_from_ini, configs_to_ini, default_config, run_experiment, summarize
from .experiments.config import ExperimentConfig, run_settings
from .experiments.records import atomic_write, format_records
from .laws import ConfigurationError

log = logging.getLogger("kaclab")

# subcommand -> experiments it runs; the first one receives --trials and --nmax
SUBCOMMANDS = {
    "slln": ("slln", "jensen_audit"),
    "lacunary": ("lacunary",),
    "smallball": ("smallball",),
    "charfn": ("charfn",),
    "tail0": ("tail0",),
    "near1": ("near1",),
    "pairing": ("pairing",),
    "variance": ("variance",),
    "oracle-check": ("oracle",),
}

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_IO = 0, 1, 2, 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kaclab", description="Real roots of random polynomials.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in (*SUBCOMMANDS, "all"):
        p = sub.add_parser(name, help="acceptance suite" if name == "all" else f"run the {name} experiment")
        p.add_argument("--config", type=Path, help="INI file with [run] and per-experiment sections")
        p.add_argument("--law", help="coefficient law, e.g. gaussian or three_point:q0=0.5")
        p.add_argument("--seed", type=int, help="64-bit master seed")
        p.add_argument("--trials", type=int, help="number of trials M")
        p.add_argument("--nmax", type=int, help="largest degree (truncates or extends the schedule)")
        p.add_argument("--workers", type=int, help="worker processes")
        p.add_argument("--out", type=Path, help="output directory (default $KACLAB_OUT or ./kaclab_out)")
        p.add_argument("-v", "--verbose", action="store_true")
        if name == "all":
            p.add_argument("--only", type=int, action="append", help="run only this criterion (repeatable)")
    return parser


def _override(cfg: ExperimentConfig, args, primary: bool) -> ExperimentConfig:
    params = dict(cfg.params)
    nmax = args.nmax if primary else None
    if nmax is not None:
        params.pop("x_grid", None)  # re-derived from the new degree
    return default_config(
        cfg.experiment,
        law=args.law or cfg.law,
        seed=cfg.master_seed if args.seed is None else args.seed,
        trials=args.trials if primary and args.trials is not None else cfg.trials,
        nmax=nmax,
        workers=cfg.workers if args.workers is None else args.workers,
        degrees=cfg.degrees,
        interval=cfg.interval,
        **params,
    )


def parse_config(args) -> list[ExperimentConfig]:
    """Configs for one subcommand: file values (if any), then defaults, then flags."""
    names = SUBCOMMANDS[args.command]
    from_file, seed, workers = {}, 0, 1
    if args.config is not None:
        try:
            text = args.config.read_text()
        except OSError as exc:
            raise ConfigurationError(f"config: cannot read {args.config}: {exc}") from None
        from_file = {c.experiment: c for c in configs_from_ini(text)}
        seed, workers = run_settings(text)
    out = []
    for i, name in enumerate(names):
        cfg = from_file.get(name) or default_config(name, seed=seed, workers=workers)
        out.append(_override(cfg, args, primary=(i == 0)))
    return out


def output_dir(args) -> Path:
    if args.out is not None:
        return args.out
    return Path(os.environ.get("KACLAB_OUT", "kaclab_out"))


def _plot_csv(header, rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(repr(float(v)) if isinstance(v, float) else str(v) for v in row))
    return "\n".join(lines) + "\n"


def execute(configs: list[ExperimentConfig], out: Path, command: str) -> tuple[int, list]:
    """Run the configs, write every output file, and return (exit code, summaries)."""
    start = time.strftime("%Y-%m-%dT%H:%M:%S")
    records, summaries, files = [], [], []
    for cfg in configs:
        log.info("running %s (M=%d, degrees=%s, workers=%d)", cfg.experiment, cfg.trials, cfg.degrees, cfg.workers)
        recs = run_experiment(cfg)
        records.extend(recs)
        summaries.append(summarize(recs, cfg))
    ok = all(s.passed for s in summaries)
    out.mkdir(parents=True, exist_ok=True)
    atomic_write(out / "records.csv", format_records(records))
    atomic_write(out / "summary.txt", "\n".join(s.to_text() for s in summaries))
    files += ["records.csv", "summary.txt"]
    for s in summaries:
        for name, (header, rows) in s.plots.items():
            rel = f"plots/{s.experiment}_{name}.csv"
            atomic_write(out / rel, _plot_csv(header, rows))
            files.append(rel)
    code = EXIT_OK if ok else EXIT_FAIL
    manifest = configs_to_ini(configs) + "\n".join([
        "[manifest]",
        f"command = {command}",
        f"version = {__version__}",
        f"start = {start}",
        f"end = {time.strftime('%Y-%m-%dT%H:%M:%S')}",
        f"outputs = {', '.join(files)}",
        f"exit_status = {code}",
    ]) + "\n"
    atomic_write(out / "manifest.txt", manifest)
    return code, summaries


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "all":
            from .acceptance import run_acceptance

            return run_acceptance(output_dir(args), only=args.only, seed=args.seed or 0,
                                  workers=args.workers or 1)
        configs = parse_config(args)
        code, summaries = execute(configs, output_dir(args), args.command)
    except ConfigurationError as exc:
        print(f"kaclab: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"kaclab: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    for s in summaries:
        print(s.to_text())
    return code


if __name__ == "__main__":
    sys.exit(main())
