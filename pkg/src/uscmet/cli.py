"""Command-line front end: point evaluation, sweeps, figure presets, self-checks.

Exit codes: 0 on success, 1 for invalid requests (bad flags, unknown
quantities, parameters outside the stable phase), 2 when the self-check suite
reports a failing check, 3 for filesystem errors while writing output.

A ``--config FILE`` of ``key=value`` lines (``#`` comments allowed) supplies
defaults for any long flag of the chosen subcommand; flags given on the
command line win.  Repeatable flags take comma-separated lists in the config
file, e.g. ``quantity=xi_minus,xi_plus`` or ``range=g:0:1:11,delta:-2:2:41``.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from . import figures, sweeps
from .errors import InvalidSpec
from .validate import run_validation


class _Parser(argparse.ArgumentParser):
    """Argument parser that reports usage problems as InvalidSpec."""

    def error(self, message: str):  # noqa: D102 - argparse hook
        raise InvalidSpec(message)


_MODEL_PARAMS = (
    # (flag, dest, help)
    ("--omega", "omega", "cavity frequency"),
    ("--Omega", "Omega", "matter frequency (defaults to resonance for the"
                         " coupled-pair model, 1e4*omega for the single-emitter model)"),
    ("--g", "g", "coupling strength"),
    ("--g-over-gc", "g_over_gc", "coupling as a fraction of the critical value"),
    ("--kappa", "kappa", "cavity linewidth (driven quantities)"),
    ("--eta", "eta", "drive amplitude (driven quantities)"),
    ("--delta", "delta", "pump-cavity detuning (driven quantities)"),
    ("--t", "t", "interrogation time"),
    ("--alpha", "alpha", "probe displacement magnitude"),
    ("--xi-r", "xi_r", "readout squeezing parameter (<= 0)"),
)

_CONFIG_SCALARS = {
    "model": str,
    "convention": str,
    "format": str,
    "out": str,
    "points": int,
}
_CONFIG_FLOATS = {
    "omega", "Omega", "g", "g_over_gc", "kappa", "eta", "delta", "t",
    "alpha", "xi_r",
}
_CONFIG_BOOLS = {"no_timestamp", "no_plot"}
_CONFIG_LISTS = {"quantity", "range", "tolerance", "check", "ratios", "couplings"}


def _parse_config_file(path: str) -> dict[str, object]:
    """Read key=value lines into typed defaults for the parser namespace."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InvalidSpec(f"cannot read config file {path!r}: {exc}") from exc
    out: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise InvalidSpec(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        value = value.strip()
        if key in _CONFIG_FLOATS:
            try:
                out[key] = float(value)
            except ValueError:
                raise InvalidSpec(
                    f"{path}:{lineno}: {key} needs a number, got {value!r}"
                ) from None
        elif key in _CONFIG_BOOLS:
            if value.lower() not in ("true", "false"):
                raise InvalidSpec(f"{path}:{lineno}: {key} must be true or false")
            out[key] = value.lower() == "true"
        elif key in _CONFIG_LISTS:
            out[key] = [item.strip() for item in value.split(",") if item.strip()]
        elif key in _CONFIG_SCALARS:
            try:
                out[key] = _CONFIG_SCALARS[key](value)
            except ValueError:
                raise InvalidSpec(f"{path}:{lineno}: bad value for {key}: {value!r}") from None
        else:
            raise InvalidSpec(f"{path}:{lineno}: unknown config key {key!r}")
    return out


def _parse_range(text: str) -> sweeps.RangeSpec:
    """NAME:START:STOP:COUNT[:log] -> RangeSpec."""
    parts = text.split(":")
    if len(parts) not in (4, 5):
        raise InvalidSpec(
            f"range must be NAME:START:STOP:COUNT[:log], got {text!r}"
        )
    log = False
    if len(parts) == 5:
        if parts[4] != "log":
            raise InvalidSpec(f"fifth range field must be 'log', got {parts[4]!r}")
        log = True
    name = parts[0]
    try:
        start, stop = float(parts[1]), float(parts[2])
        count = int(parts[3])
    except ValueError:
        raise InvalidSpec(f"bad numeric field in range {text!r}") from None
    return sweeps.RangeSpec(name=name, start=start, stop=stop, count=count, log=log)


def _parse_float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InvalidSpec(f"expected comma-separated numbers, got {text!r}") from None


# Parser-level defaults are all None so that a config file can tell
# "flag not given" apart from "flag at its default"; the hard defaults are
# applied after the config merge.
_HARD_DEFAULTS = {
    "model": "dicke",
    "format": "csv",
    "convention": "tracked",
    "no_timestamp": False,
    "no_plot": False,
}


def _add_common_output(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=("csv", "json"), default=None,
                        help="output serialization (default csv)")
    parser.add_argument("--out", default=None,
                        help="output file (default: print to stdout)")
    parser.add_argument("--no-timestamp", action="store_true", default=None,
                        help="omit the generation timestamp for reproducible bytes")
    parser.add_argument("--config", default=None,
                        help="key=value file supplying flag defaults")


def _add_model_params(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--model", choices=("dicke", "rabi"), default=None,
                        help="parameter family (default dicke)")
    for flag, dest, help_text in _MODEL_PARAMS:
        parser.add_argument(flag, dest=dest, type=float, default=None,
                            help=help_text)
    parser.add_argument("--quantity", action="append", default=None,
                        help="quantity column (repeatable; model default set otherwise)")
    parser.add_argument("--convention", choices=("tracked", "fixed"),
                        default=None,
                        help="frequency-derivative convention for QFI quantities")


def build_parser() -> _Parser:
    parser = _Parser(prog="uscmet",
                     description="Virtual-excitation metrology toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate quantities at one point",
                            description="Evaluate named quantities at a single "
                                        "parameter point and print one table row.")
    _add_model_params(p_eval)
    _add_common_output(p_eval)

    p_sweep = sub.add_parser("sweep", help="evaluate quantities over a grid",
                             description="Sweep one or more parameters on a "
                                         "grid; row-major in the order the "
                                         "ranges are given.")
    _add_model_params(p_sweep)
    p_sweep.add_argument("--range", action="append", default=None, metavar="SPEC",
                         help="swept axis NAME:START:STOP:COUNT[:log] (repeatable)")
    _add_common_output(p_sweep)

    p_fig = sub.add_parser("figure", help="regenerate a bundled dataset preset",
                           description="Regenerate one of the bundled figure "
                                       "datasets; renders a companion PNG "
                                       "unless --no-plot is given.")
    p_fig.add_argument("figure", choices=sorted(figures.FIGURES),
                       help="preset name")
    p_fig.add_argument("--no-plot", action="store_true", default=None,
                       help="write the table only, skip the PNG")
    p_fig.add_argument("--ratios", type=_parse_float_list, default=None,
                       help="comma-separated splitting ratios (figs2)")
    p_fig.add_argument("--couplings", type=_parse_float_list, default=None,
                       help="comma-separated coupling fractions (figs2, figs3)")
    p_fig.add_argument("--points", type=int, default=None,
                       help="number of time samples (figs3)")
    p_fig.add_argument("--alpha", type=float, default=None,
                       help="probe displacement magnitude (figs3)")
    p_fig.add_argument("--xi-r", dest="xi_r", type=float, default=None,
                       help="readout squeezing for the combined strategy (figs3)")
    _add_common_output(p_fig)

    p_val = sub.add_parser("validate", help="run the consistency-check suite",
                           description="Run cross-route consistency checks; "
                                       "exit 2 if any check fails.")
    p_val.add_argument("--tolerance", action="append", default=None,
                       metavar="NAME=VALUE",
                       help="override one check tolerance (repeatable)")
    p_val.add_argument("--check", action="append", default=None, metavar="NAME",
                       help="run only the named checks (repeatable)")
    p_val.add_argument("--config", default=None,
                       help="key=value file supplying flag defaults")
    return parser


def _merge_config(args: argparse.Namespace) -> None:
    """Fill unset flags from the config file, then apply hard defaults.

    Config keys that do not correspond to a flag of the chosen subcommand are
    ignored, so one config file can serve several subcommands.
    """
    if getattr(args, "config", None) is not None:
        for key, value in _parse_config_file(args.config).items():
            if hasattr(args, key) and getattr(args, key) is None:
                setattr(args, key, value)
    for key, value in _HARD_DEFAULTS.items():
        if hasattr(args, key) and getattr(args, key) is None:
            setattr(args, key, value)


def _emit(columns, rows, args, spec=None) -> None:
    timestamp = not args.no_timestamp
    if args.out is None:
        if args.format == "csv":
            sys.stdout.write(sweeps.to_csv(columns, rows, timestamp))
        else:
            sys.stdout.write(sweeps.to_json(columns, rows, spec, timestamp))
    else:
        sweeps.write_table(columns, rows, args.out, args.format,
                           spec=spec, timestamp=timestamp)
        print(args.out)


def _gather_fixed(args) -> dict[str, float]:
    fixed = {}
    for _, dest, _ in _MODEL_PARAMS:
        value = getattr(args, dest)
        if value is not None:
            fixed[dest] = value
    return fixed


def _cmd_eval(args) -> int:
    values = _gather_fixed(args)
    allowed = sweeps.ALLOWED_PARAMS[args.model]
    for name in values:
        if name not in allowed:
            raise InvalidSpec(
                f"parameter {name!r} does not belong to model {args.model!r}"
            )
    quantities = tuple(args.quantity or sweeps.DEFAULT_QUANTITIES[args.model])
    results, beyond = sweeps.evaluate_point(
        args.model, values, quantities, convention=args.convention
    )
    columns = [*values, *quantities, "beyond_threshold"]
    row = {**values, **results, "beyond_threshold": beyond}
    _emit(columns, [row], args)
    return 0


def _cmd_sweep(args) -> int:
    if not args.range:
        raise InvalidSpec("sweep needs at least one --range")
    ranges = tuple(
        r if isinstance(r, sweeps.RangeSpec) else _parse_range(r)
        for r in args.range
    )
    swept = {r.name for r in ranges}
    fixed = {k: v for k, v in _gather_fixed(args).items() if k not in swept}
    spec = sweeps.SweepSpec(
        model=args.model,
        ranges=ranges,
        quantities=tuple(args.quantity or ()),
        fixed=fixed,
        convention=args.convention,
    )
    result = sweeps.run_sweep(spec)
    _emit(result.columns, result.rows, args, spec=sweeps.spec_as_dict(spec))
    return 0


_PRESET_FLAGS = {
    "fig2": (),
    "figs1": (),
    "figs2": ("ratios", "couplings"),
    "figs3": ("couplings", "points", "alpha", "xi_r"),
}
_PRESET_KEYWORD = {"alpha": "alpha_mag"}


def _cmd_figure(args) -> int:
    allowed = _PRESET_FLAGS[args.figure]
    preset_args = {}
    for flag in ("ratios", "couplings", "points", "alpha", "xi_r"):
        value = getattr(args, flag)
        if value is None:
            continue
        if flag not in allowed:
            raise InvalidSpec(
                f"--{flag.replace('_', '-')} does not apply to {args.figure}"
            )
        if flag in ("ratios", "couplings"):
            value = tuple(float(x) for x in value)
        preset_args[_PRESET_KEYWORD.get(flag, flag)] = value
    out = args.out or f"{args.figure}.{args.format}"
    written = figures.emit_figure(
        args.figure, out, fmt=args.format,
        timestamp=not args.no_timestamp, plot=not args.no_plot,
        **preset_args,
    )
    for path in written:
        print(path)
    return 0


def _cmd_validate(args) -> int:
    overrides = {}
    for item in args.tolerance or ():
        if "=" not in item:
            raise InvalidSpec(f"--tolerance needs NAME=VALUE, got {item!r}")
        name, _, value = item.partition("=")
        try:
            overrides[name.strip()] = float(value)
        except ValueError:
            raise InvalidSpec(f"bad tolerance value in {item!r}") from None
    names = tuple(args.check) if args.check else None
    report = run_validation(tolerance_overrides=overrides or None, names=names)
    for line in report.lines():
        print(line)
    return 0 if report.passed else 2


_COMMANDS = {
    "eval": _cmd_eval,
    "sweep": _cmd_sweep,
    "figure": _cmd_figure,
    "validate": _cmd_validate,
}


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
        _merge_config(args)
        return _COMMANDS[args.command](args)
    except InvalidSpec as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
