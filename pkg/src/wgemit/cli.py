"""Command-line front end.

Subcommands: modes, rates, sweep, fig2, fig3, optimize, scaling-check.
Options may also come from a flat JSON config file (--config); explicit flags
override config values.  All lengths at this boundary are nanometers.  Exit
codes: 0 success, 2 validation error, 3 numerical-convergence failure.
"""
import argparse
import json
import sys

from .errors import ConvergenceError, CutoffError, DomainError, NoModesError
from .modes import find_guided_modes
from .rates import branching_ratio
from .sweeps import (fig2_spec, fig3_spec, optimize_thickness, scaling_check,
                     sweep_height, sweep_thickness)
from .types import DipoleEmitter, OpticalContext, SweepSpec, WaveguideStack

_EXIT_OK = 0
_EXIT_VALIDATION = 2
_EXIT_NUMERICAL = 3

_STACK_KEYS = ("n1", "n2", "n3", "d_nm", "lambda_nm", "orientation", "Z_nm",
               "grid", "axis", "out", "rtol", "s", "d_min_nm", "d_max_nm")


def _add_stack_args(p, required=False):
    p.add_argument("--n1", type=float, default=None, help="film index")
    p.add_argument("--n2", type=float, default=None, help="substrate index")
    p.add_argument("--n3", type=float, default=None, help="cover index (emitter side)")
    p.add_argument("--d", dest="d_nm", type=float, default=None,
                   help="film thickness in nm")
    p.add_argument("--lambda", dest="lambda_nm", type=float, default=None,
                   help="vacuum wavelength in nm")
    del required


def _add_common(p):
    p.add_argument("--config", type=str, default=None,
                   help="flat JSON file with RunConfig fields; flags override")
    p.add_argument("--out", type=str, default=None, help="CSV output path")
    p.add_argument("--rtol", type=float, default=None,
                   help="quadrature relative tolerance override (default 1e-8)")


def _add_emitter_args(p):
    p.add_argument("--orientation", type=str, default=None,
                   help="'perp', 'par', or 'x,y,z' unit vector")
    p.add_argument("--Z", dest="Z_nm", type=float, default=None,
                   help="emitter height above the film in nm")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="wgemit",
        description="Spontaneous emission into planar waveguide modes",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("modes", help="list confined modes of a stack")
    _add_stack_args(p)
    _add_common(p)

    p = sub.add_parser("rates", help="emission report at one emitter position")
    _add_stack_args(p)
    _add_emitter_args(p)
    _add_common(p)

    p = sub.add_parser("sweep", help="height or thickness sweep, CSV output")
    _add_stack_args(p)
    _add_emitter_args(p)
    p.add_argument("--axis", choices=("height", "thickness"), default=None)
    p.add_argument("--grid", type=str, default=None,
                   help="start_nm,stop_nm,npoints[,log|linear]")
    _add_common(p)

    p = sub.add_parser("fig2", help="Ta2O5-on-silica height sweep (parallel dipole)")
    _add_common(p)

    p = sub.add_parser("fig3", help="symmetric-film height sweeps near the TM1 birth")
    p.add_argument("--d", dest="d_nm", type=float, default=None,
                   help="single film thickness in nm (default: 235, 245 and 255)")
    _add_common(p)

    p = sub.add_parser("optimize", help="thickness maximizing the guided fraction")
    _add_stack_args(p)
    _add_emitter_args(p)
    p.add_argument("--d-min", dest="d_min_nm", type=float, default=None)
    p.add_argument("--d-max", dest="d_max_nm", type=float, default=None)
    _add_common(p)

    p = sub.add_parser("scaling-check", help="branching-ratio invariance under scaling")
    _add_stack_args(p)
    _add_emitter_args(p)
    p.add_argument("--s", type=float, default=None, help="length scale factor")
    _add_common(p)

    return ap


def _merge_config(args):
    """Fill argparse namespace holes from the JSON config file, if any."""
    if getattr(args, "config", None):
        with open(args.config) as fh:
            cfg = json.load(fh)
        if not isinstance(cfg, dict):
            raise DomainError("config file must hold a flat JSON object")
        for key, val in cfg.items():
            if key == "command":
                continue
            if key not in _STACK_KEYS:
                raise DomainError(f"unknown config key {key!r}")
            attr = key
            if getattr(args, attr, None) is None:
                setattr(args, attr, val)
    return args


def _require(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        raise DomainError(f"missing required option(s): {', '.join('--' + m for m in missing)}")


def _stack_from(args) -> WaveguideStack:
    _require(args, "n1", "n2", "n3", "d_nm")
    return WaveguideStack(args.n1, args.n2, args.n3, args.d_nm * 1e-9)


def _ctx_from(args) -> OpticalContext:
    _require(args, "lambda_nm")
    return OpticalContext(args.lambda_nm * 1e-9)


def _orientation_from(args):
    raw = getattr(args, "orientation", None)
    if raw is None:
        raise DomainError("missing required option: --orientation")
    if isinstance(raw, (list, tuple)):
        vec = tuple(float(c) for c in raw)
    elif raw == "perp":
        vec = (0.0, 0.0, 1.0)
    elif raw == "par":
        vec = (1.0, 0.0, 0.0)
    else:
        try:
            vec = tuple(float(c) for c in raw.split(","))
        except ValueError:
            raise DomainError(
                f"orientation must be 'perp', 'par' or 'x,y,z', got {raw!r}"
            ) from None
    if len(vec) != 3:
        raise DomainError("orientation vector needs three components")
    return vec


def _emitter_from(args, ctx) -> DipoleEmitter:
    _require(args, "Z_nm")
    return DipoleEmitter(ctx.lambda0, _orientation_from(args), args.Z_nm * 1e-9)


def _parse_grid(raw):
    parts = [p.strip() for p in str(raw).split(",")]
    if len(parts) not in (3, 4):
        raise DomainError(f"grid must be start_nm,stop_nm,npoints[,spacing], got {raw!r}")
    start, stop, n = float(parts[0]) * 1e-9, float(parts[1]) * 1e-9, int(parts[2])
    spacing = parts[3] if len(parts) == 4 else "auto"
    return (start, stop, n), spacing


def _print_modes(stack, ctx):
    modes = find_guided_modes(stack, ctx)
    for m in modes:
        print(f"{m.pol.value} {m.order} n_eff={m.n_eff:.12g} "
              f"kappa2_per_um={m.kappa2 * 1e-6:.12g} "
              f"kappa3_per_um={m.kappa3 * 1e-6:.12g} "
              f"n_group={m.n_group:.12g} marginal={int(m.marginal)}")
    if not modes:
        print("no confined modes")


def _print_report(rep):
    for (label, w), (_, p) in zip(rep.per_mode, rep.branching):
        print(f"{label} w_over_w0={w:.12g} P={p:.12g}")
    print(f"total wtot_over_w0={rep.total:.12g}")
    print(f"guided_sum={rep.guided_sum:.12g}")


def _write_or_print(table, out):
    if out:
        table.write_csv(out)
        print(f"wrote {out} ({len(table.rows)} rows)")
    else:
        sys.stdout.write(table.csv_text())


def run(argv) -> int:
    """Execute one CLI invocation; returns the process exit code."""
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return _EXIT_VALIDATION if exc.code not in (0, None) else _EXIT_OK

    try:
        args = _merge_config(args)
        rtol = args.rtol if getattr(args, "rtol", None) is not None else 1e-8

        if args.command == "modes":
            _print_modes(_stack_from(args), _ctx_from(args))

        elif args.command == "rates":
            stack, ctx = _stack_from(args), _ctx_from(args)
            emitter = _emitter_from(args, ctx)
            _print_report(branching_ratio(stack, ctx, emitter, rel_tol=rtol))

        elif args.command == "sweep":
            stack, ctx = _stack_from(args), _ctx_from(args)
            _require(args, "axis", "grid")
            grid, spacing = _parse_grid(args.grid)
            orientation = _orientation_from(args)
            z = (args.Z_nm or 0.0) * 1e-9
            spec = SweepSpec(scenario="custom", stack=stack, lambda0=ctx.lambda0,
                             orientation=orientation, axis=args.axis, grid=grid,
                             Z=z, spacing=spacing)
            table = sweep_height(spec) if args.axis == "height" \
                else sweep_thickness(spec)
            _write_or_print(table, args.out)

        elif args.command == "fig2":
            _write_or_print(sweep_height(fig2_spec()), args.out)

        elif args.command == "fig3":
            if getattr(args, "d_nm", None) is not None:
                _write_or_print(sweep_height(fig3_spec(args.d_nm * 1e-9)), args.out)
            else:
                for d_nm in (235, 245, 255):
                    table = sweep_height(fig3_spec(d_nm * 1e-9))
                    if args.out:
                        stem, dot, ext = args.out.rpartition(".")
                        path = f"{stem}_d{d_nm}{dot}{ext}" if dot else \
                            f"{args.out}_d{d_nm}"
                        table.write_csv(path)
                        print(f"wrote {path} ({len(table.rows)} rows)")
                    else:
                        print(f"# d = {d_nm} nm")
                        sys.stdout.write(table.csv_text())

        elif args.command == "optimize":
            stack, ctx = _stack_from(args), _ctx_from(args)
            emitter = _emitter_from(args, ctx)
            _require(args, "d_min_nm", "d_max_nm")
            d_best, gsum = optimize_thickness(
                stack, ctx, emitter,
                (args.d_min_nm * 1e-9, args.d_max_nm * 1e-9))
            print(f"d_opt_nm={d_best * 1e9:.12g} guided_sum={gsum:.12g}")

        elif args.command == "scaling-check":
            stack, ctx = _stack_from(args), _ctx_from(args)
            emitter = _emitter_from(args, ctx)
            _require(args, "s")
            dev = scaling_check(stack, ctx, emitter, args.s)
            print(f"max_relative_deviation={dev:.6e}")

        else:  # pragma: no cover - argparse enforces the choices
            raise DomainError(f"unknown command {args.command!r}")

    except (DomainError, NoModesError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_VALIDATION
    except (ConvergenceError, CutoffError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return _EXIT_NUMERICAL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_VALIDATION
    return _EXIT_OK


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
