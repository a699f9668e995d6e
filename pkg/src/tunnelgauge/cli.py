"""Command line entry point: ``tunnelgauge {sweep,fig,analyze,mfp}``."""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from .currents import MODELS
from .errors import InvalidSpec, TunnelGaugeError, UnknownPreset
from .potential import barrier_from_json
from .sweep import preset, run_sweep, format_table, sweep_from_json, write_sweep
from .transport import ballistic_ratio, mfp_empirical, mfp_from_mobility
from .uncertainty import analyze

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InvalidSpec(f"{path}: not valid JSON ({exc})") from None


def _jsonable(d: dict) -> dict:
    return {k: (None if isinstance(v, float) and not math.isfinite(v) else v) for k, v in d.items()}


def cmd_sweep(args) -> int:
    spec = sweep_from_json(_load_json(args.config))
    if spec.output:
        write_sweep(spec, spec.output, args.threads)
    else:
        sys.stdout.write(format_table(spec, run_sweep(spec, args.threads)))
    return EXIT_OK


def cmd_fig(args) -> int:
    out = Path(args.out)
    for spec in preset(args.name):
        path = write_sweep(spec, out / spec.output, args.threads)
        print(path)
    return EXIT_OK


def cmd_analyze(args) -> int:
    spec = barrier_from_json(_load_json(args.barrier))
    rep = analyze(spec, args.energy, method=args.method)
    d = _jsonable(rep.to_dict())
    d["model"] = args.model
    d["product"] = d[f"product_{args.model}"]
    print(json.dumps(d, indent=2))
    return EXIT_OK


def cmd_mfp(args) -> int:
    if args.mobility is not None:
        lam = mfp_from_mobility(args.mobility, args.energy)
        out = {"method": "mobility", "mobility": args.mobility}
    elif args.A is not None and args.B is not None:
        lam = mfp_empirical(args.energy, args.A, args.B)
        out = {"method": "empirical", "A": args.A, "B": args.B}
    else:
        raise InvalidSpec("mfp needs --mobility, or both --A and --B")
    out.update(energy=args.energy, mfp_angstrom=lam)
    if args.size is not None:
        ratio, regime = ballistic_ratio(lam, args.size)
        out.update(device_size=args.size, ratio=ratio, regime=regime)
    print(json.dumps(out, indent=2))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tunnelgauge", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("sweep", help="run a sweep described by a JSON config")
    s.add_argument("--config", required=True)
    s.add_argument("--threads", type=int, default=None)
    s.set_defaults(func=cmd_sweep)

    f = sub.add_parser("fig", help="write the data behind one figure")
    f.add_argument("name", choices=["fig1", "fig3", "fig4", "fig6"])
    f.add_argument("--out", required=True)
    f.add_argument("--threads", type=int, default=None)
    f.set_defaults(func=cmd_fig)

    a = sub.add_parser("analyze", help="single-energy uncertainty report as JSON")
    a.add_argument("--barrier", required=True)
    a.add_argument("--energy", type=float, required=True)
    a.add_argument("--model", choices=MODELS, required=True)
    a.add_argument("--method", choices=["auto", "analytic", "finite_difference"], default="auto")
    a.set_defaults(func=cmd_analyze)

    m = sub.add_parser("mfp", help="mean free path estimate")
    m.add_argument("--mobility", type=float)
    m.add_argument("--A", type=float)
    m.add_argument("--B", type=float)
    m.add_argument("--energy", type=float, required=True)
    m.add_argument("--size", type=float, help="device size in A")
    m.set_defaults(func=cmd_mfp)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT
    if getattr(args, "threads", None) is not None and args.threads < 1:
        print("tunnelgauge: error: --threads must be >= 1", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    # input problems are ValueError/KeyError subclasses; numeric ones ArithmeticError
    except (ValueError, UnknownPreset, OSError) as exc:
        print(f"tunnelgauge: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (TunnelGaugeError, ArithmeticError) as exc:
        print(f"tunnelgauge: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
