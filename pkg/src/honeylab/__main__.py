"""CLI entry point for honeylab."""

import argparse
from pathlib import Path

from pydantic import ValidationError

from . import __version__
from .config import Settings
from .logging import setup_logging


def _add_io(parser: argparse.ArgumentParser, *names: str) -> None:
    options = {
        "in": ("--in", {"dest": "input", "type": Path, "help": "Polygon JSON file"}),
        "norm": ("--norm", {"type": Path, "help": "Unit disk of the norm (default: Euclidean)"}),
        "table": ("--table", {"type": Path, "help": "Dowker table CSV written by dowker-table"}),
        "out": ("--out", {"type": Path, "help": "Write the resulting polygon as JSON"}),
        "csv": ("--csv", {"type": Path, "help": "Write a CSV report"}),
        "json": ("--json", {"dest": "json_out", "type": Path, "help": "Write a JSON report"}),
        "svg": ("--svg", {"type": Path, "help": "Write an SVG figure"}),
    }
    for name in names:
        flag, kwargs = options[name]
        parser.add_argument(flag, **kwargs)


def parse_args(argv: list[str] | None = None) -> argparse.Namespace:
    """Parse command line arguments."""
    parser = argparse.ArgumentParser(
        prog="honeylab",
        description="Honeycomb certificates, Dowker checks and tiling statistics for normed planes",
    )
    parser.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="Increase logging verbosity (-v for INFO, -vv for DEBUG)",
    )
    parser.add_argument(
        "--log-file",
        type=Path,
        default=None,
        help="Path to write logs to file",
    )
    parser.add_argument(
        "--version",
        action="version",
        version=f"%(prog)s {__version__}",
    )
    parser.add_argument(
        "--reproducible",
        action="store_true",
        help="Fix SVG element ids so figures are byte-identical across runs",
    )
    parser.add_argument("--tol-rel", type=float, default=None, help="Relative comparison tolerance")
    parser.add_argument("--tol-abs", type=float, default=None, help="Absolute comparison tolerance")

    subparsers = parser.add_subparsers(dest="command", required=True, help="Available commands")

    # shape --kind regular --sides 8 --out octagon.json
    shape = subparsers.add_parser("shape", help="Write a standard disk as polygon JSON")
    shape.add_argument("--kind", choices=["regular", "disk", "ellipse", "square"], default="regular")
    shape.add_argument("--sides", type=int, default=6, help="Side count of the regular polygon")
    shape.add_argument("--a", type=float, default=2.0, help="Ellipse semi-axis along x")
    shape.add_argument("--b", type=float, default=1.0, help="Ellipse semi-axis along y")
    _add_io(shape, "out")

    iso = subparsers.add_parser("isoperimetrix", help="Polar of the unit disk rotated by 90 degrees")
    _add_io(iso, "in", "out", "json", "svg")

    circ = subparsers.add_parser("circumscribe", help="Least-area n-gon about a convex disk")
    circ.add_argument("--n", type=int, required=True, help="Side count")
    circ.add_argument("--symmetric", action="store_true", help="Restrict to o-symmetric n-gons (n even)")
    _add_io(circ, "in", "out", "json", "svg")

    table = subparsers.add_parser("dowker-table", help="Tabulate A_K(n) for n = 3..nmax")
    table.add_argument("--nmax", dest="n_max", type=int, default=20)
    _add_io(table, "in", "csv", "json")

    check = subparsers.add_parser("dowker-check", help="Check a (weak) alpha- or log-Dowker property")
    check.add_argument(
        "--property",
        dest="dowker_property",
        choices=["alpha", "weak", "log", "weak-log"],
        default="weak",
    )
    check.add_argument("--alpha", type=float, default=0.5)
    check.add_argument("--nmax", dest="n_max", type=int, default=20, help="Table size when computed from --in")
    _add_io(check, "table", "in", "csv", "json")

    honeycomb = subparsers.add_parser("honeycomb", help="Certify the 2-alpha honeycomb property of a norm")
    honeycomb.add_argument("--alpha", type=float, default=0.5)
    _add_io(honeycomb, "in", "out", "json", "svg")

    stability = subparsers.add_parser("stability", help="Hausdorff gate around the Euclidean disk")
    _add_io(stability, "in", "json")

    sweep = subparsers.add_parser("sweep", help="Weak alpha-Dowker verdicts for regular 2k-gons")
    sweep.add_argument("--kmin", dest="k_min", type=int, default=2)
    sweep.add_argument("--kmax", dest="k_max", type=int, default=30)
    sweep.add_argument("--alpha", type=float, default=0.5)
    _add_io(sweep, "csv", "json")

    tiling = subparsers.add_parser("tiling", help="Window-averaged statistics of a tiling patch")
    tiling.add_argument(
        "--proto",
        choices=["hex", "square", "triangle", "steinhaus", "voronoi", "custom"],
        default="hex",
        help="Patch generator; custom tiles the --in cell along --v1 and --v2",
    )
    tiling.add_argument("--R", type=float, default=200.0, help="Window radius")
    tiling.add_argument(
        "--R-list",
        dest="R_list",
        type=float,
        nargs="+",
        default=(),
        help="Radii of the series (default: R/4, R/2, R)",
    )
    tiling.add_argument("--stat", choices=["p2", "log", "sides", "iso"], default="p2")
    tiling.add_argument("--power", type=float, default=2.0, help="Exponent of the powered perimeter")
    tiling.add_argument("--jitter", type=float, default=0.2, help="Voronoi site jitter")
    tiling.add_argument("--seed", type=int, default=0)
    tiling.add_argument("--schedule", default="AAB", help="Steinhaus steps, e.g. AAB")
    tiling.add_argument("--v1", type=float, nargs=2, metavar=("X", "Y"), help="First lattice vector of a custom cell")
    tiling.add_argument("--v2", type=float, nargs=2, metavar=("X", "Y"), help="Second lattice vector of a custom cell")
    tiling.add_argument("--reflect", action="store_true", help="Add point-reflected copies of the custom cell")
    _add_io(tiling, "in", "norm", "csv", "json", "svg")

    steinhaus = subparsers.add_parser("steinhaus", help="Greedy nested tiling with large square averages")
    steinhaus.add_argument("--nu", type=float, default=8.0)
    steinhaus.add_argument("--milestones", type=int, default=3)
    _add_io(steinhaus, "csv", "json", "svg")

    return parser.parse_args(argv)


def main(argv: list[str] | None = None) -> None:
    """Main entry point."""
    args = parse_args(argv)

    # Build settings from CLI args
    settings_kwargs: dict = {}
    if args.verbose:
        settings_kwargs["verbose"] = args.verbose
    if args.log_file:
        settings_kwargs["log_file"] = args.log_file

    from .cli.output import error

    try:
        settings = Settings(**settings_kwargs)
    except ValidationError as e:
        error(f"invalid HONEYLAB_* setting: {e.errors()[0]['msg']}")
        raise SystemExit(2) from e

    # Setup logging based on verbosity
    setup_logging(
        settings.verbose,
        settings.log_file,
        threads=settings.threads,
        disk_vertices=settings.disk_vertices,
    )

    from .cli.run import run
    from .models import RunConfig

    fields = {k: v for k, v in vars(args).items() if v is not None and k not in ("verbose", "log_file")}
    if "schedule" in fields:
        fields["schedule"] = tuple(fields["schedule"])
    try:
        config = RunConfig(**fields)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(p) for p in first["loc"])
        error(f"{args.command}: {where + ': ' if where else ''}{first['msg']}")
        raise SystemExit(2) from e

    raise SystemExit(run(config, settings))


if __name__ == "__main__":
    main()
