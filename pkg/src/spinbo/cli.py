"""Command-line interface: ``simulate``, ``verify``, ``spectrum``, ``invariants``, ``gen``.

Exit codes: 0 success, 1 a hard limit or verification threshold was violated,
2 invalid input.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import logging
import platform
import sys
from pathlib import Path

import numpy as np

from . import __version__, fields
from .config import ConfigError, build_initial, load_config, load_config_dict, parse_matrix
from .dynamics import simulate
from .formats import (
    FormatError,
    dumps,
    field_to_json,
    matrix_sidecar,
    read_fields,
    write_field,
    write_invariants_csv,
    write_spectrum_csv,
)
from .hardy_ops import spectrum_L
from .invariants import InvariantRecord, summarize
from .verification import KINDS, run_verify

log = logging.getLogger("spinbo")


class UsageError(Exception):
    pass


def _range(text: str) -> tuple[int, int]:
    try:
        a, _, b = text.partition(":")
        lo, hi = int(a), int(b or a)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}")
    if lo > hi:
        raise argparse.ArgumentTypeError("LO must not exceed HI")
    return lo, hi


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", default=argparse.SUPPRESS)
    common.add_argument("--seed", type=_seed, default=argparse.SUPPRESS)
    common.add_argument("--out", metavar="DIR", default=argparse.SUPPRESS)
    common.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="spinbo", description=__doc__.splitlines()[0], parents=[common])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", parents=[common], help="integrate and write a trajectory")
    s.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE")
    s.add_argument("--print-config", action="store_true", help="print the resolved config and exit")

    v = sub.add_parser("verify", parents=[common], help="random-trial identity checks")
    v.add_argument("kind", choices=KINDS)
    v.add_argument("--trials", type=int, default=100)
    v.add_argument("--d-range", type=_range, default=(1, 3), metavar="LO:HI")
    v.add_argument("--bandwidth-range", type=_range, default=(1, 6), metavar="LO:HI")

    sp = sub.add_parser("spectrum", parents=[common], help="eigenvalues of the L_U section")
    sp.add_argument("input", help="field JSON file or snapshot directory")
    sp.add_argument("--N", type=int, default=None, help="Hardy truncation (default 2*bandwidth+8)")

    iv = sub.add_parser("invariants", parents=[common], help="conservation laws of fields")
    iv.add_argument("input", help="field JSON file or snapshot directory")
    iv.add_argument("--K", type=int, default=4)
    iv.add_argument("--K-matrix", type=int, default=2)

    g = sub.add_parser("gen", parents=[common], help="write an initial field")
    g.add_argument("preset", help="cosine, random or decay")
    g.add_argument("--d", type=int, default=2)
    g.add_argument("--bandwidth", type=int, default=3)
    g.add_argument("--amplitude", type=float, default=1.0)
    g.add_argument("--scale", type=float, default=1.0)
    g.add_argument("--rate", type=float, default=None)
    g.add_argument("--matrix", help="Hermitian matrix as JSON (nested list or {re, im})")
    g.add_argument("--output", "-o", help="output file (default stdout)")
    return p


def _out_dir(args, default: str | None = None) -> Path | None:
    out = getattr(args, "out", default)
    if out is None:
        return None
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def cmd_simulate(args) -> int:
    overrides = list(args.overrides)
    if hasattr(args, "seed"):
        overrides.append(f"seed={args.seed}")
    if hasattr(args, "out"):
        overrides.append(f"outputs={json.dumps(args.out)}")
    raw = load_config_dict(getattr(args, "config", None), overrides)
    cfg = load_config(getattr(args, "config", None), overrides)
    if args.print_config:
        sys.stdout.write(dumps(raw))
        return 0
    U0 = build_initial(cfg.initial, cfg.d, cfg.seed)
    if U0.bandwidth > cfg.M:
        raise ConfigError("initial", f"bandwidth {U0.bandwidth} exceeds M={cfg.M}")
    tol = cfg.tolerances
    try:
        traj = simulate(
            U0,
            M=cfg.M,
            dt=cfg.dt,
            t_end=cfg.t_end,
            stride=cfg.snapshot_stride,
            K=cfg.invariant_orders["E"],
            K_matrix=cfg.invariant_orders["M"],
            N=cfg.N if cfg.spectra else None,
            drift_hard_limit=tol.drift_hard_limit,
            herm_hard_limit=tol.herm_hard_limit,
            norm_cap=tol.norm_cap,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc

    out = Path(cfg.outputs)
    out.mkdir(parents=True, exist_ok=True)
    for i, (t, U) in enumerate(zip(traj.times, traj.snapshots)):
        write_field(out / f"snap_{i:05d}.json", U.trimmed(), t)
    with open(out / "invariants.csv", "w", newline="") as fh:
        write_invariants_csv(fh, traj.records)
    (out / "matrix_invariants.json").write_text(dumps(matrix_sidecar(traj.records)))
    if traj.spectra:
        with open(out / "spectrum.csv", "w", newline="") as fh:
            write_spectrum_csv(fh, traj.times, traj.spectra)
    summary = traj.summary
    manifest = {
        "config": cfg.to_dict(),
        "seed": cfg.seed,
        "dt_effective": traj.dt,
        "steps": traj.steps,
        "snapshots": len(traj.times),
        "aborted": traj.aborted,
        "drift": {"E": summary.E, "M": summary.M, "herm_defect": summary.herm_defect},
        "versions": {
            "spinbo": __version__,
            "numpy": np.__version__,
            "python": platform.python_version(),
        },
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(),
    }
    (out / "run_manifest.json").write_text(dumps(manifest))
    log.info("wrote %d snapshots to %s; max drift %.3e", len(traj.times), out, summary.max_drift)
    if traj.aborted:
        print(f"spinbo: aborted: {traj.aborted}", file=sys.stderr)
        return 1
    return 0


def cmd_verify(args) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    if args.d_range[0] < 1 or args.bandwidth_range[0] < 0:
        raise UsageError("d must be >= 1 and bandwidth >= 0")
    report = run_verify(
        args.kind, args.trials, getattr(args, "seed", 0), args.d_range, args.bandwidth_range
    )
    out = _out_dir(args)
    text = dumps(report)
    if out is None:
        sys.stdout.write(text)
    else:
        (out / f"verify_{args.kind}.json").write_text(text)
    log.info("%s: max relative residual %.3e", args.kind, report["max_relative_residual"])
    return 0 if report["ok"] else 1


def cmd_spectrum(args) -> int:
    snaps = read_fields(args.input)
    times, spectra = [], []
    for t, U in snaps:
        N = args.N if args.N is not None else 2 * U.bandwidth + 8
        if N < 0:
            raise UsageError("--N must be >= 0")
        try:
            spectra.append(spectrum_L(U, N))
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        times.append(t)
    out = _out_dir(args)
    if out is None:
        write_spectrum_csv(sys.stdout, times, spectra)
    else:
        with open(out / "spectrum.csv", "w", newline="") as fh:
            write_spectrum_csv(fh, times, spectra)
    return 0


def cmd_invariants(args) -> int:
    if args.K < 0 or args.K_matrix < 0:
        raise UsageError("--K and --K-matrix must be >= 0")
    snaps = read_fields(args.input)
    records = [InvariantRecord.of(t, U, args.K, args.K_matrix) for t, U in snaps]
    out = _out_dir(args)
    if out is None:
        write_invariants_csv(sys.stdout, records)
    else:
        with open(out / "invariants.csv", "w", newline="") as fh:
            write_invariants_csv(fh, records)
        (out / "matrix_invariants.json").write_text(dumps(matrix_sidecar(records)))
    if len(records) > 1:
        log.info("max relative drift %.3e", summarize(records).max_drift)
    return 0


def cmd_gen(args) -> int:
    seed = getattr(args, "seed", 0)
    rng = np.random.default_rng(seed)
    if args.d < 1 or args.bandwidth < 0:
        raise UsageError("--d must be >= 1 and --bandwidth >= 0")
    if args.preset == "cosine":
        matrix = None if args.matrix is None else json.loads(args.matrix)
        try:
            U = fields.cosine(parse_matrix(matrix, args.d), args.amplitude)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    elif args.preset == "random":
        U = fields.random_hermitian(args.d, args.bandwidth, rng, args.scale, args.rate or 0.0)
    elif args.preset == "decay":
        rate = 0.5 if args.rate is None else args.rate
        U = fields.decay(args.d, args.bandwidth, rng, args.amplitude, rate)
    else:
        raise UsageError(f"unknown preset {args.preset!r}")
    text = dumps(field_to_json(U))
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


COMMANDS = {
    "simulate": cmd_simulate,
    "verify": cmd_verify,
    "spectrum": cmd_spectrum,
    "invariants": cmd_invariants,
    "gen": cmd_gen,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    logging.basicConfig(
        level=logging.WARNING if getattr(args, "quiet", False) else logging.INFO,
        format="spinbo: %(message)s",
        stream=sys.stderr,
    )
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, FormatError, UsageError, ValueError, OSError) as exc:
        print(f"spinbo: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
