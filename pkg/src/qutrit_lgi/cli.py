"""Command-line front end.

Exit codes: 0 success, 2 usage error, 3 I/O error, 4 search not converged.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from .core import InvalidInputError
from .lgi import ANGLE_NAMES, EvolutionConfig, LgiReport, lgi_report, report_record
from .noise import NoiseConfig, monte_carlo
from .presets import PRESETS, get_preset
from .search import OBJECTIVES, SearchSpec, SweepSpec, search_max_violation, sweep

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_UNCONVERGED = 4

OBJECTIVE_ALIASES = {"ambiguous-violation": "max-violation"}


class UsageError(Exception):
    pass


def fmt(x: float) -> str:
    return format(x, ".17g")


def output_record(cfg: EvolutionConfig, report: LgiReport) -> dict[str, float]:
    rec = dict(zip(ANGLE_NAMES, cfg.angles()))
    rec.update(report_record(report))
    return rec


def _finite(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"angle must be finite, got {text!r}")
    return value


def _add_point_flags(p: argparse.ArgumentParser):
    p.add_argument("--preset", choices=sorted(PRESETS), help="named parameter set")
    for name in ANGLE_NAMES:
        p.add_argument(f"--{name}", type=_finite, help=f"{name} (radians, or units of pi with --pi-units)")
    p.add_argument("--pi-units", action="store_true", help="read angle values as multiples of pi")


def resolve_config(args) -> EvolutionConfig:
    scale = math.pi if args.pi_units else 1.0
    overrides = {n: getattr(args, n) for n in ANGLE_NAMES if getattr(args, n) is not None}
    if args.preset:
        cfg = get_preset(args.preset).config()
    else:
        missing = [n for n in ANGLE_NAMES if n not in overrides]
        if missing:
            raise UsageError("without --preset all six angles are required; missing " + ", ".join(missing))
        cfg = EvolutionConfig.from_angles([0.0] * 6)
    for name, value in overrides.items():
        cfg = cfg.with_angle(name, value * scale)
    return cfg


def _csv_text(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(list(rows[0]))
    for row in rows:
        writer.writerow([fmt(v) if isinstance(v, float) else v for v in row.values()])
    return buf.getvalue()


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _emit(text: str, out: str | None):
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    with open(out, "w", newline="") as fh:
        fh.write(text)


def cmd_point(args) -> int:
    cfg = resolve_config(args)
    rec = output_record(cfg, lgi_report(cfg))
    _emit(_csv_text([rec]) if args.format == "csv" else _json_text(rec), args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = resolve_config(args)
    scale = math.pi if args.pi_units else 1.0
    start = 0.0 if args.start is None else args.start * scale
    end = math.pi if args.end is None else args.end * scale
    spec = SweepSpec(cfg, args.param, start, end, args.steps)
    rows = [output_record(spec.base.with_angle(spec.param, v), rep) for v, rep in sweep(spec)]
    _emit(_csv_text(rows), args.out)
    return EXIT_OK


def cmd_montecarlo(args) -> int:
    cfg = resolve_config(args)
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    noise = NoiseConfig(
        sigma_waveplate=args.sigma_deg,
        waveplates_per_angle=args.waveplates_per_angle,
        counts_per_run=args.counts,
        trials=args.trials,
        seed=args.seed,
    )
    summary = monte_carlo(cfg, noise)
    if args.format == "csv":
        rows = [{"metric": k, "mean": m.mean, "std": m.std, "n": m.n} for k, m in summary.metrics.items()]
        text = _csv_text(rows)
    else:
        text = _json_text(
            {
                "angles": dict(zip(ANGLE_NAMES, cfg.angles())),
                "noise": {
                    "sigma_waveplate_deg": noise.sigma_waveplate,
                    "waveplates_per_angle": noise.waveplates_per_angle,
                    "counts_per_run": noise.counts_per_run,
                    "trials": noise.trials,
                    "seed": noise.seed,
                },
                "metrics": {k: {"mean": m.mean, "std": m.std, "n": m.n} for k, m in summary.metrics.items()},
            }
        )
    _emit(text, args.out)
    return EXIT_OK


def cmd_search(args) -> int:
    scale = math.pi if args.pi_units else 1.0
    lo, hi = (0.0, math.pi) if args.bounds is None else (args.bounds[0] * scale, args.bounds[1] * scale)
    spec = SearchSpec(
        bounds=((lo, hi),) * 6,
        objective=OBJECTIVE_ALIASES.get(args.objective, args.objective),
        penalty=args.penalty,
        resolution=args.resolution,
        tol=args.tol,
        max_evals=args.max_evals,
    )
    res = search_max_violation(spec)
    rec = output_record(res.config, res.report)
    if args.format == "csv":
        rec.update(objective=res.objective, evaluations=res.evaluations, converged=int(res.converged))
        text = _csv_text([rec])
    else:
        text = _json_text(
            {
                "angles_pi": {n: a / math.pi for n, a in zip(ANGLE_NAMES, res.config.angles())},
                "objective": res.objective,
                "grid_best": res.grid_best,
                "evaluations": res.evaluations,
                "converged": res.converged,
                "report": rec,
            }
        )
    _emit(text, args.out)
    return EXIT_OK if res.converged else EXIT_UNCONVERGED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qutrit-lgi", description="Qutrit Leggett-Garg simulator with ambiguous measurements."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("point", help="exact report for one configuration")
    _add_point_flags(p)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_point)

    p = sub.add_parser("sweep", help="sweep one angle and write CSV")
    _add_point_flags(p)
    p.add_argument("--param", choices=ANGLE_NAMES, default="theta2")
    p.add_argument("--from", dest="start", type=_finite, help="sweep start (default 0)")
    p.add_argument("--to", dest="end", type=_finite, help="sweep end (default pi)")
    p.add_argument("--steps", type=int, default=101)
    p.add_argument("--out", help="output CSV file (default stdout)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("montecarlo", help="waveplate and photon-count noise Monte Carlo")
    _add_point_flags(p)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--sigma-deg", type=float, default=0.1, help="per-waveplate angle error (degrees)")
    p.add_argument("--waveplates-per-angle", type=int, default=2)
    p.add_argument("--counts", type=int, default=14000, help="photon counts per experimental run")
    p.add_argument("--seed", type=int, default=NoiseConfig.seed)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_montecarlo)

    p = sub.add_parser("search", help="grid + coordinate-descent search over all six angles")
    p.add_argument("--objective", choices=OBJECTIVES + tuple(OBJECTIVE_ALIASES), default="max-violation")
    p.add_argument("--lambda", dest="penalty", type=float, default=0.0, help="signalling penalty weight")
    p.add_argument("--resolution", type=int, default=8, help="grid points per axis")
    p.add_argument("--tol", type=float, default=1e-9, help="final coordinate step (radians)")
    p.add_argument("--max-evals", type=int, default=2_000_000)
    p.add_argument("--bounds", nargs=2, type=_finite, metavar=("LO", "HI"), help="bounds for every angle")
    p.add_argument("--pi-units", action="store_true", help="read --bounds as multiples of pi")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_search)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, InvalidInputError) as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"{parser.prog}: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
