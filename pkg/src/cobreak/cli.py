"""Command-line interface.

::

    cobreak analyze <file> [--max-k K] [--skip-cptp] [--json out.json] [--degrees]
    cobreak amend <file> --strategy S [--grid N] [--depth D] [--seed S] [--samples N] [--force]
    cobreak sweep --family F --grid N [--out file.csv] [--max-k K]
    cobreak validate <file>

Exit codes: 0 ok, 2 parse error, 3 internal inconsistency, 4 failed precondition.
"""

import argparse
import csv
import io as _io
import json
import sys
import time
import warnings
from dataclasses import asdict, dataclass, field

import numpy as np

from .amendment import (
    BlockRotationPlan,
    UnitaryParams,
    amend_search_interleaved,
    amend_search_post,
    impossibility_post_square,
)
from .analysis import EXCEEDS_CAP, cbc_index, family1_cbc, family2_cbc, is_cbc_oracle, is_cbc_structural, is_incoherent_kraus, is_nc
from .exceptions import ConsistencyError, PreconditionError, SpecParseError
from .io import format_float, parse_spec
from .qchannel import KrausChannel, NCFamilyParams, kraus_to_affine, nc_family_channel, to_affine, validate_cptp

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INCONSISTENT = 3
EXIT_PRECONDITION = 4

CLI_STRATEGIES = ("post", "interleaved", "post-square", "interleaved-general")


def skipped(reason):
    return f"skipped({reason})"


@dataclass
class ReportRecord:
    """One analysis run.  Every verdict is a value or ``skipped(reason)``."""

    label: str
    cptp: object = None
    incoherent: object = None
    nc: object = None
    cbc: object = None
    cbc_route: object = None
    index: object = None
    amendments: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def to_dict(self):
        return asdict(self)


def _fmt(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def _complex12(z):
    z = complex(z)
    re, im = f"{z.real:.12g}", f"{abs(z.imag):.12g}"
    sign = "-" if z.imag < 0 else "+"
    return f"{re}{sign}{im}j"


def _matrix_lines(mat, indent="  "):
    return [indent + "[" + ", ".join(_complex12(z) for z in row) + "]" for row in np.asarray(mat)]


class _Timer:
    def __init__(self, timings, key):
        self.timings, self.key = timings, key

    def __enter__(self):
        self.start = time.perf_counter()

    def __exit__(self, *exc):
        self.timings[self.key] = round(time.perf_counter() - self.start, 6)


def _load(path, degrees):
    spec = parse_spec(path, degrees=degrees)
    return spec, spec.build()


def _print_warnings(caught):
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)


def run_analysis(spec, channel, max_k=16, skip_cptp=False):
    """Run every analysis on one channel; returns ``(record, consistent)``."""
    record = ReportRecord(label=spec.display_label)
    t = record.timings
    if skip_cptp:
        record.cptp = skipped("--skip-cptp")
    else:
        with _Timer(t, "cptp"):
            report = validate_cptp(channel)
        record.cptp = {"cp": report.cp, "tp": report.tp, "min_eig": report.min_eig}
        if not (report.cp and report.tp):
            record.notes.append("channel failed CPTP validation; continuing with analysis")
            print("warning: channel is not CPTP; results describe the supplied linear map", file=sys.stderr)
    if isinstance(channel, KrausChannel):
        with _Timer(t, "incoherent"):
            record.incoherent = is_incoherent_kraus(channel)
    else:
        record.incoherent = skipped("affine input has no Kraus decomposition")
    with _Timer(t, "affine"):
        a = to_affine(channel)
    with _Timer(t, "nc"):
        record.nc = is_nc(a)
    with _Timer(t, "cbc"):
        structural = is_cbc_structural(a)
        oracle = is_cbc_oracle(channel)
    consistent = structural.is_cbc == oracle.is_cbc
    record.cbc = structural.is_cbc
    record.cbc_route = {"structural": structural.is_cbc, "oracle": oracle.is_cbc, "agree": consistent}
    if not consistent:
        record.notes.append("structural and oracle CBC routes disagree")
    with _Timer(t, "index"), warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        result = cbc_index(a, cap=max_k)
    _print_warnings(caught)
    record.index = result.index
    return record, consistent


def _print_report(record, out=None):
    out = out or sys.stdout
    print(f"label: {record.label}", file=out)
    cptp = record.cptp
    if isinstance(cptp, dict):
        print(f"cptp: cp={_fmt(cptp['cp'])} tp={_fmt(cptp['tp'])} min_eig={_fmt(cptp['min_eig'])}", file=out)
    else:
        print(f"cptp: {cptp}", file=out)
    print(f"incoherent_kraus: {_fmt(record.incoherent)}", file=out)
    print(f"nc: {_fmt(record.nc)}", file=out)
    if record.cbc_route is not None:
        r = record.cbc_route
        print(f"cbc: {_fmt(record.cbc)} (structural={_fmt(r['structural'])}, oracle={_fmt(r['oracle'])})", file=out)
    print(f"index: {record.index}", file=out)
    for note in record.notes:
        print(f"note: {note}", file=out)


def cmd_analyze(args):
    spec, channel = _load(args.file, args.degrees)
    record, consistent = run_analysis(spec, channel, max_k=args.max_k, skip_cptp=args.skip_cptp)
    _print_report(record)
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(record.to_dict(), fh, indent=2)
            fh.write("\n")
    if not consistent:
        print("error: CBC routes disagree", file=sys.stderr)
        return EXIT_INCONSISTENT
    return EXIT_OK


def _describe_params(params):
    if isinstance(params, UnitaryParams):
        return (
            f"general unitary alpha={format_float(params.alpha)} alpha1={format_float(params.alpha1)} "
            f"alpha2={format_float(params.alpha2)} alpha3={format_float(params.alpha3)}"
        )
    if isinstance(params, BlockRotationPlan):
        return f"block rotation alpha={format_float(params.alpha)} pairs={list(params.pairing)} fixed={list(params.fixed_indices)}"
    if params is None:
        return "none"
    return "random unitary"


def _params_dict(params):
    if isinstance(params, UnitaryParams):
        return {"kind": "general", **asdict(params)}
    if isinstance(params, BlockRotationPlan):
        return {"kind": "block_rotation", "dim": params.dim, "alpha": params.alpha,
                "pairing": [list(p) for p in params.pairing], "fixed_indices": list(params.fixed_indices)}
    if params is None:
        return None
    return {"kind": "random"}


def _amendment_dict(result):
    out = {
        "strategy": result.strategy,
        "success": result.success,
        "scanned": result.scanned,
        "params": _params_dict(result.params),
        "certificate": result.certificate,
    }
    if result.success:
        out["unitary"] = [[[z.real, z.imag] for z in row] for row in result.unitary]
        out["witness_state"] = [[[complex(z).real, complex(z).imag] for z in row] for row in result.witness.state]
        out["witness_coherence"] = result.witness.coherence
    return out


def cmd_amend(args):
    spec, channel = _load(args.file, args.degrees)
    a = to_affine(channel)
    strategy = args.strategy
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        index = cbc_index(a, cap=args.max_k).index
    try:
        if strategy == "post":
            result = amend_search_post(a, grid_size=args.grid)
        elif strategy == "post-square":
            result = impossibility_post_square(a, samples=args.samples, seed=args.seed, grid_size=args.grid)
        else:
            if strategy == "interleaved":
                depth = args.depth or 2
                if depth != 2:
                    raise PreconditionError("strategy 'interleaved' uses depth 2; use 'interleaved-general' for deeper patterns")
            else:
                default = index if index != EXCEEDS_CAP and index >= 2 else 3
                depth = args.depth or default
            if index != depth and not args.force:
                raise PreconditionError(
                    f"strategy '{strategy}' with depth {depth} needs a channel of index {depth}; "
                    f"this one has index {index} (use --force to run anyway)"
                )
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                result = amend_search_interleaved(a, grid_size=args.grid, depth=depth)
    except PreconditionError as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    print(f"label: {spec.display_label}")
    print(f"strategy: {result.strategy}")
    print(f"index: {index}")
    print(f"success: {_fmt(result.success)}")
    print(f"scanned: {result.scanned}")
    if result.success:
        print(f"params: {_describe_params(result.params)}")
        print("unitary:")
        print("\n".join(_matrix_lines(result.unitary)))
        print("witness state:")
        print("\n".join(_matrix_lines(result.witness.state)))
        print(f"witness output coherence: {result.witness.coherence:.12g}")
    elif result.certificate:
        print(f"certificate: {result.certificate}")
    else:
        print("no amending unitary found on the scanned grid")
    if args.json:
        record = ReportRecord(label=spec.display_label, index=index, amendments=[_amendment_dict(result)])
        with open(args.json, "w") as fh:
            json.dump(record.to_dict(), fh, indent=2)
            fh.write("\n")
    return EXIT_OK


def sweep_angles(grid):
    """``grid`` equally spaced angles covering ``[0, pi]`` inclusive."""
    return [float(x) for x in np.linspace(0.0, np.pi, int(grid))]


SWEEP_COLUMNS = ("theta", "phi", "xi", "eta", "incoherent", "cbc_criterion", "cbc_oracle", "index")


def sweep_rows(family, grid, max_k=16):
    """Yield ``(row, consistent)`` pairs for every grid point, in deterministic order."""
    angles = sweep_angles(grid)
    etas = angles if family == 1 else [0.0]
    criterion = family1_cbc if family == 1 else family2_cbc
    for theta in angles:
        for phi in angles:
            for xi in angles:
                for eta in etas:
                    p = NCFamilyParams(family, theta, phi, xi, eta)
                    ch = nc_family_channel(p)
                    incoherent = is_incoherent_kraus(ch)
                    crit = criterion(p)
                    oracle = is_cbc_oracle(ch).is_cbc
                    with warnings.catch_warnings():
                        warnings.simplefilter("ignore")
                        index = cbc_index(kraus_to_affine(ch), cap=max_k).index
                    # the family-1 criterion is only claimed for incoherent points
                    consistent = crit == oracle or (family == 1 and not incoherent)
                    row = [format_float(theta), format_float(phi), format_float(xi), format_float(eta),
                           _fmt(incoherent), _fmt(crit), _fmt(oracle), str(index)]
                    yield row, consistent


def cmd_sweep(args):
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    first_bad = None
    for row, consistent in sweep_rows(args.family, args.grid, args.max_k):
        writer.writerow(row)
        if not consistent and first_bad is None:
            first_bad = row
    text = buf.getvalue()
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if first_bad is not None:
        print("error: criterion and oracle disagree at row: " + ",".join(first_bad), file=sys.stderr)
        return EXIT_INCONSISTENT
    return EXIT_OK


def cmd_validate(args):
    spec, channel = _load(args.file, args.degrees)
    report = validate_cptp(channel)
    print(f"label: {spec.display_label}")
    print(f"representation: {spec.representation}")
    print(f"dim: {spec.dim}")
    print(f"cp: {_fmt(report.cp)}")
    print(f"tp: {_fmt(report.tp)}")
    print(f"min_eig: {format_float(report.min_eig)}")
    if not (report.cp and report.tp):
        print("channel is not CPTP", file=sys.stderr)
        return EXIT_PRECONDITION
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="cobreak", description="Coherence-breaking channel analysis and amendment.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_file(p):
        p.add_argument("file", help="channel specification (JSON)")
        p.add_argument("--degrees", action="store_true", help="read nc_family angles as degrees")

    p = sub.add_parser("analyze", help="CPTP, incoherence, CBC verdicts and coherence-breaking index")
    add_file(p)
    p.add_argument("--max-k", type=int, default=16, help="cap for the coherence-breaking index (default 16)")
    p.add_argument("--skip-cptp", action="store_true", help="do not validate complete positivity first")
    p.add_argument("--json", metavar="OUT", help="also write the report as JSON")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("amend", help="search for an amending unitary")
    add_file(p)
    p.add_argument("--strategy", required=True, choices=CLI_STRATEGIES)
    p.add_argument("--grid", type=int, default=8, help="grid resolution (default 8)")
    p.add_argument("--depth", type=int, default=None, help="copies of the channel for interleaved strategies")
    p.add_argument("--seed", type=int, default=0, help="seed for random unitaries (post-square)")
    p.add_argument("--samples", type=int, default=64, help="random unitaries tried by post-square (default 64)")
    p.add_argument("--max-k", type=int, default=16)
    p.add_argument("--force", action="store_true", help="run interleaved strategies regardless of the index")
    p.add_argument("--json", metavar="OUT", help="also write the result as JSON")
    p.set_defaults(func=cmd_amend)

    p = sub.add_parser("sweep", help="criterion-vs-oracle table over a family's angle grid")
    p.add_argument("--family", type=int, choices=(1, 2), required=True)
    p.add_argument("--grid", type=int, default=9, help="points per angle on [0, pi] (default 9)")
    p.add_argument("--out", help="CSV output path (default stdout)")
    p.add_argument("--max-k", type=int, default=16)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("validate", help="check that a specification describes a CPTP map")
    add_file(p)
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SpecParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ConsistencyError as exc:
        print(f"internal consistency error: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT


if __name__ == "__main__":
    sys.exit(main())
