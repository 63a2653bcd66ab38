"""Command-line front end.

Every computation is exposed as a subcommand with reproducible file
outputs: identical command + database produce byte-identical files,
and a JSON run manifest is written alongside every output file so any
result can be traced back to the exact invocation that produced it.

Exit codes: 0 success, 2 validation error, 3 solver failure, 4 I/O.
"""

from __future__ import annotations

import argparse
import datetime
import json
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .dispersion import load_database, serialize_database
from .errors import CpspdcError, IoError, ValidationError
from .hom import InterferingPair, hom_curve, save_hom_csv
from .jsa import (PumpSpec, compute_jsa, load_jsa, marginal_spectra,
                  save_jsa_binary, save_jsa_csv)
from .phasematch import (DEFAULT_GVM_BRACKETS, PmType, gvm_wavelength,
                         make_config, poling_period, tilt_angle)
from .schmidt import decompose, purity
from .sweep import load_sweep_spec, optimize_purity, run_sweep, write_sweep_csv

__all__ = ["RunManifest", "main"]

FMT = "%.6g"  # every numeric output uses 6 significant digits


def _fmt(x) -> str:
    return FMT % x


@dataclass(frozen=True)
class RunManifest:
    """Provenance record emitted alongside every output file."""

    command: list
    db_checksum: str
    parameters: dict
    version: str
    timestamp: str

    def write(self, output_path: str) -> None:
        path = str(output_path) + ".manifest.json"
        payload = {"command": self.command,
                   "db_sha256": self.db_checksum,
                   "parameters": self.parameters,
                   "version": self.version,
                   "timestamp": self.timestamp}
        try:
            with open(path, "w", encoding="utf-8") as fh:
                json.dump(payload, fh, indent=2, sort_keys=True)
                fh.write("\n")
        except OSError as exc:
            raise IoError(f"cannot write {path}: {exc}") from exc


def _manifest(args, params: dict, db_checksum: str) -> RunManifest:
    return RunManifest(
        command=list(args._argv),
        db_checksum=db_checksum,
        parameters=params,
        version=__version__,
        timestamp=datetime.datetime.now(datetime.timezone.utc).isoformat(),
    )


def _write_records(records, path, fmt: str) -> None:
    """Write a list of flat dicts as CSV or JSON lines."""
    try:
        with open(path, "w", encoding="utf-8") as fh:
            if fmt == "json-lines":
                for rec in records:
                    fh.write(json.dumps(rec, sort_keys=True) + "\n")
            else:
                if records:
                    fh.write(",".join(records[0].keys()) + "\n")
                    for rec in records:
                        fh.write(",".join(
                            _fmt(v) if isinstance(v, float) else str(v)
                            for v in rec.values()) + "\n")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def _print_records(records) -> None:
    for rec in records:
        print("  ".join(
            f"{k} = {_fmt(v) if isinstance(v, float) else v}"
            for k, v in rec.items()))


# --- subcommand handlers ----------------------------------------------------

def _cmd_gvm(args, db):
    pm = PmType.parse(args.pm_type)
    bracket = args.bracket if args.bracket else DEFAULT_GVM_BRACKETS[pm]
    lam = gvm_wavelength(db, args.crystal, pm, bracket)
    rec = {"crystal": args.crystal, "pm_type": pm.name.lower(),
           "gvm_wavelength_nm": lam,
           "poling_period_nm": poling_period(db, args.crystal, pm, lam),
           "tilt_deg": tilt_angle(db, args.crystal, pm, lam)}
    _print_records([rec])
    if args.out:
        _write_records([rec], args.out, args.format)
        _manifest(args, {"crystal": args.crystal, "pm_type": pm.name.lower(),
                         "bracket": list(bracket)}, db.checksum).write(args.out)
    return 0


def _cmd_period(args, db):
    pm = PmType.parse(args.pm_type)
    rec = {"crystal": args.crystal, "pm_type": pm.name.lower(),
           "lambda0_nm": args.lambda0,
           "poling_period_nm": poling_period(db, args.crystal, pm,
                                             args.lambda0)}
    _print_records([rec])
    if args.out:
        _write_records([rec], args.out, args.format)
        _manifest(args, {"crystal": args.crystal, "pm_type": pm.name.lower(),
                         "lambda0_nm": args.lambda0}, db.checksum).write(
            args.out)
    return 0


def _cmd_tilt(args, db):
    pm = PmType.parse(args.pm_type)
    rec = {"crystal": args.crystal, "pm_type": pm.name.lower(),
           "lambda0_nm": args.lambda0,
           "tilt_deg": tilt_angle(db, args.crystal, pm, args.lambda0)}
    _print_records([rec])
    if args.out:
        _write_records([rec], args.out, args.format)
        _manifest(args, {"crystal": args.crystal, "pm_type": pm.name.lower(),
                         "lambda0_nm": args.lambda0}, db.checksum).write(
            args.out)
    return 0


def _cmd_jsa(args, db):
    pm = PmType.parse(args.pm_type)
    if args.n < 2:
        raise ValidationError(f"grid size must be >= 2, got {args.n}")
    cfg = make_config(db, args.crystal, pm, args.lambda0, args.length)
    pump = PumpSpec(lambda0_nm=args.lambda0, delta_lambda_nm=args.pump_width)
    span = "auto" if args.span == "auto" else float(args.span)
    jsa = compute_jsa(db, cfg, pump, grid_span=span, n=args.n)
    dec = decompose(jsa)
    sig, idl = marginal_spectra(jsa)
    summary = {"crystal": args.crystal, "pm_type": pm.name.lower(),
               "lambda0_nm": args.lambda0,
               "poling_period_nm": cfg.poling_period_nm,
               "length_mm": args.length, "pump_width_nm": args.pump_width,
               "purity": purity(dec),
               "tilt_deg": tilt_angle(db, args.crystal, pm, args.lambda0),
               "signal_fwhm_nm": sig.fwhm_nm, "idler_fwhm_nm": idl.fwhm_nm}
    _print_records([summary])
    if args.out:
        if args.binary:
            save_jsa_binary(jsa, args.out)
        else:
            save_jsa_csv(jsa, args.out)
        _manifest(args, {k: v for k, v in summary.items()
                         if k not in ("purity", "tilt_deg", "signal_fwhm_nm",
                                      "idler_fwhm_nm")},
                  db.checksum).write(args.out)
    return 0


def _cmd_hom(args, db):
    pair = InterferingPair.parse(args.pair)
    f1 = load_jsa(args.jsa_files[0])
    f2 = load_jsa(args.jsa_files[1]) if len(args.jsa_files) > 1 else f1
    delays = None
    if args.max_delay is not None:
        delays = np.linspace(-args.max_delay, args.max_delay, args.points)
    curve = hom_curve(f1, f2, pair, delays)
    _print_records([{"pair": pair.value, "visibility": curve.visibility,
                     "dip_fwhm_ps": curve.dip_fwhm_ps,
                     "baseline": curve.baseline}])
    if args.out:
        if args.format == "json-lines":
            recs = [{"tau_ps": float(t), "p4": float(p)}
                    for t, p in zip(curve.delays_ps, curve.p4)]
            _write_records(recs, args.out, "json-lines")
        else:
            save_hom_csv(curve, args.out)
        _manifest(args, {"pair": pair.value,
                         "jsa_files": list(args.jsa_files),
                         "visibility": curve.visibility,
                         "dip_fwhm_ps": curve.dip_fwhm_ps},
                  db.checksum).write(args.out)
    return 0


def _cmd_sweep(args, db):
    spec = load_sweep_spec(args.spec)
    rows = run_sweep(db, spec)
    fixed = {"pm_type": spec.pm_type.name.lower(), "variable": spec.variable,
             "start": spec.start, "stop": spec.stop, "step": spec.step,
             "lambda0_nm": spec.lambda0_nm, "length_mm": spec.length_mm,
             "pump_width_nm": spec.pump_width_nm, "grid_n": spec.grid_n}
    if args.out:
        if args.format == "json-lines":
            recs = [{"crystal": c, **r} for c, r in rows]
            _write_records(recs, args.out, "json-lines")
        else:
            write_sweep_csv(rows, args.out, fixed, db.checksum)
        _manifest(args, {"spec_file": args.spec, **fixed},
                  db.checksum).write(args.out)
    else:
        _print_records({"crystal": c, **r} for c, r in rows)
    return 0


def _cmd_optimize(args, db):
    pm = PmType.parse(args.pm_type)
    result = optimize_purity(db, args.crystal, pm, args.lambda0,
                             (args.l_min, args.l_max),
                             (args.dl_min, args.dl_max),
                             n_grid=args.n_grid)
    rec = {"crystal": args.crystal, "pm_type": pm.name.lower(),
           "lambda0_nm": args.lambda0,
           "best_length_mm": result.best_length_mm,
           "best_pump_width_nm": result.best_pump_width_nm,
           "best_purity": result.best_purity}
    _print_records([rec])
    if args.out:
        recs = [{"length_mm": length, "pump_width_nm": width, "purity": p}
                for length, width, p in result.evaluations]
        _write_records(recs, args.out, args.format)
        _manifest(args, rec, db.checksum).write(args.out)
    return 0


def _cmd_db_validate(args, db):
    # loading already validated everything; report and round-trip check
    text = serialize_database(db)
    print(f"database {db.path}: {len(db.records)} crystals "
          f"({', '.join(sorted(db.records))})")
    print(f"sha256 {db.checksum}")
    print(f"serialized form: {len(text)} bytes, round-trip OK")
    return 0


# --- parser -----------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cpspdc",
        description="Design toolkit for counter-propagating SPDC sources "
                    "in periodically poled KTP-family crystals.")
    parser.add_argument("--version", action="version",
                        version=f"cpspdc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_out=False):
        p.add_argument("--db", default=None,
                       help="crystal database file (default: packaged)")
        p.add_argument("--out", default=None, required=needs_out,
                       help="output file path")
        p.add_argument("--format", choices=["csv", "json-lines"],
                       default="csv")

    p = sub.add_parser("gvm", help="solve the group-velocity-matched "
                                   "wavelength")
    p.add_argument("crystal")
    p.add_argument("pm_type")
    p.add_argument("--bracket", nargs=2, type=float, metavar=("LO", "HI"))
    common(p)
    p.set_defaults(handler=_cmd_gvm)

    p = sub.add_parser("period", help="degenerate poling period")
    p.add_argument("crystal")
    p.add_argument("pm_type")
    p.add_argument("lambda0", type=float, help="degenerate wavelength (nm)")
    common(p)
    p.set_defaults(handler=_cmd_period)

    p = sub.add_parser("tilt", help="JSA ridge tilt angle")
    p.add_argument("crystal")
    p.add_argument("pm_type")
    p.add_argument("lambda0", type=float)
    common(p)
    p.set_defaults(handler=_cmd_tilt)

    p = sub.add_parser("jsa", help="compute a joint spectral amplitude")
    p.add_argument("crystal")
    p.add_argument("pm_type")
    p.add_argument("lambda0", type=float)
    p.add_argument("length", type=float, help="crystal length (mm)")
    p.add_argument("pump_width", type=float,
                   help="pump width parameter (nm)")
    p.add_argument("--n", type=int, default=200, help="grid size per axis")
    p.add_argument("--span", default="auto",
                   help="grid span in nm, or 'auto'")
    p.add_argument("--binary", action="store_true",
                   help="write the compact binary layout instead of CSV")
    common(p)
    p.set_defaults(handler=_cmd_jsa)

    p = sub.add_parser("hom", help="Hong-Ou-Mandel curve from JSA file(s)")
    p.add_argument("jsa_files", nargs="+",
                   help="one file (identical sources) or two")
    p.add_argument("--pair", default="signal-signal",
                   choices=["signal-signal", "idler-idler"])
    p.add_argument("--max-delay", type=float, default=None,
                   help="half-range of the delay grid (ps)")
    p.add_argument("--points", type=int, default=201)
    common(p)
    p.set_defaults(handler=_cmd_hom)

    p = sub.add_parser("sweep", help="run a sweep spec file")
    p.add_argument("spec", help="TOML sweep spec")
    common(p)
    p.set_defaults(handler=_cmd_sweep)

    p = sub.add_parser("optimize", help="maximize purity over (L, pump "
                                        "width)")
    p.add_argument("crystal")
    p.add_argument("pm_type")
    p.add_argument("lambda0", type=float)
    p.add_argument("--l-min", type=float, default=1.0)
    p.add_argument("--l-max", type=float, default=20.0)
    p.add_argument("--dl-min", type=float, default=0.05)
    p.add_argument("--dl-max", type=float, default=0.5)
    p.add_argument("--n-grid", type=int, default=25)
    common(p)
    p.set_defaults(handler=_cmd_optimize)

    p = sub.add_parser("db-validate", help="validate a crystal database "
                                           "file")
    common(p)
    p.set_defaults(handler=_cmd_db_validate)

    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        args._argv = ["cpspdc"] + argv
        if args.command == "hom" and len(args.jsa_files) > 2:
            raise ValidationError("hom accepts at most two JSA files")
        db = load_database(args.db)
        return args.handler(args, db)
    except CpspdcError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
