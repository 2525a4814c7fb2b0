"""Command-line interface.

Subcommands: fit, field, transform, compare, run, stadia.  Exit codes:
0 success, 2 configuration/input errors, 3 degenerate geometry or domain
violations, 4 solver failures.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .affine import PixelPoint
from .curves import build_segments, source_distance
from .errors import ConfigError, MapRegisterError
from .field import GridDomain
from .formats import (
    read_correspondences,
    read_geo_curve,
    read_pixel_curve,
    write_field_dump,
    write_geo_curve,
)
from .pipeline import (
    build_field,
    compare_pair,
    fit_with_global,
    load_config,
    run_experiment,
    select_sets,
    stadia_to_km,
    transform_curve,
)
from .report import (
    CurveInfo,
    MetricsReport,
    SourceEntry,
    km_face,
    render_csv_tables,
    render_human,
    render_sidecar,
)


def _domain_from_args(args) -> GridDomain:
    x1_min, x2_min, x1_max, x2_max = args.domain
    n1 = x1_max - x1_min + 1
    n2 = x2_max - x2_min + 1
    if abs(n1 - round(n1)) > 1e-9 or abs(n2 - round(n2)) > 1e-9:
        raise ConfigError("domain bounds must span whole grid nodes")
    return GridDomain(PixelPoint(x1_min, x2_min), int(round(n1)), int(round(n2)))


def _load_selected_sets(args):
    sets = read_correspondences(args.correspondences)
    return select_sets(sets, args.sets)


def cmd_fit(args) -> int:
    sets = _load_selected_sets(args)
    fits, table = fit_with_global(sets)
    report = MetricsReport(transform_errors=table, bands_km=[])
    print(render_human(report))
    if args.output:
        outdir = Path(args.output)
        outdir.mkdir(parents=True, exist_ok=True)
        tables = render_csv_tables(report)
        for name in ("transform_errors_mean.csv", "transform_errors_max.csv"):
            (outdir / name).write_text(tables[name])
        params = {
            name: dict(zip(("a1", "a2", "a3", "a4", "b1", "b2"), t.as_tuple()))
            for name, t in fits.items()
        }
        (outdir / "transforms.json").write_text(json.dumps(params, indent=2) + "\n")
        print(f"wrote {outdir}/transform_errors_mean.csv, transform_errors_max.csv, transforms.json")
    return 0


def cmd_field(args) -> int:
    sets = _load_selected_sets(args)
    fits, _ = fit_with_global(sets)
    grid = _domain_from_args(args)
    fld = build_field(sets, grid, fits, use_hull=args.hull)
    n_dirichlet = int(fld.dirichlet_mask.sum())
    print(
        f"solved {grid.n1}x{grid.n2} field: {n_dirichlet} Dirichlet nodes, "
        f"max residual {fld.residual:.3e}"
    )
    if args.output:
        written = write_field_dump(fld, Path(args.output))
        print(f"wrote {len(written)} parameter grids to {args.output}")
    return 0


def cmd_transform(args) -> int:
    sets = _load_selected_sets(args)
    fits, _ = fit_with_global(sets)
    grid = _domain_from_args(args)
    fld = build_field(sets, grid, fits, use_hull=args.hull)
    pixels = read_pixel_curve(args.curve)
    name = args.name or Path(args.curve).stem
    curve = transform_curve(fld, pixels, name)
    write_geo_curve(args.output, curve.name, curve.points, curve.length / 1000.0)
    print(f"transformed {curve.point_count} points, length {km_face(curve.length / 1000.0)} km")
    print(f"wrote {args.output}")
    return 0


def cmd_compare(args) -> int:
    name_a, pts_a = read_geo_curve(args.curve_a)
    name_b, pts_b = read_geo_curve(args.curve_b)
    a = build_segments(pts_a, args.name_a or name_a)
    b = build_segments(pts_b, args.name_b or name_b)
    hd, ml = compare_pair(a, b, args.bands)
    report = MetricsReport(
        transform_errors=_empty_errors(),
        bands_km=args.bands,
        hausdorff=[hd],
        matching=[ml],
        sources=[SourceEntry(a.name, b.name, source_distance(a, b))],
        curves=[
            CurveInfo(a.name, a.point_count, a.length / 1000.0),
            CurveInfo(b.name, b.point_count, b.length / 1000.0),
        ],
    )
    print(render_human(report))
    if args.output:
        outdir = Path(args.output)
        outdir.mkdir(parents=True, exist_ok=True)
        for name, content in render_csv_tables(report).items():
            if name.startswith("transform_errors"):
                continue
            (outdir / name).write_text(content)
        (outdir / "report.json").write_text(render_sidecar(report))
        print(f"wrote metric tables to {outdir}")
    return 0


def _empty_errors():
    from .report import TransformErrors

    return TransformErrors([], [], [], [])


def cmd_run(args) -> int:
    config = load_config(args.config)
    if args.output:
        config.output_dir = Path(args.output)
    result = run_experiment(config)
    print(render_human(result.report))
    print(f"wrote {len(result.outputs)} files to {config.output_dir}")
    return 0


def cmd_stadia(args) -> int:
    lo, hi = stadia_to_km(args.count)
    print(f"{args.count:g} stadia = {lo:g} - {hi:g} km")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mapregister",
        description="Landmark-based map registration and geodesic curve comparison.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_sets_args(p):
        p.add_argument("--correspondences", required=True, help="correspondence records file")
        p.add_argument("--sets", nargs="+", help="region names to use (default: all sets)")

    def add_domain_arg(p):
        p.add_argument(
            "--domain",
            nargs=4,
            type=float,
            required=True,
            metavar=("X1MIN", "X2MIN", "X1MAX", "X2MAX"),
            help="pixel rectangle of grid node centers",
        )
        p.add_argument("--hull", action="store_true", help="use convex hulls as region polygons")

    p = sub.add_parser("fit", help="fit per-set and global transforms, report errors")
    add_sets_args(p)
    p.add_argument("--output", help="directory for error tables and transforms.json")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("field", help="solve the parameter field, optionally dump grids")
    add_sets_args(p)
    add_domain_arg(p)
    p.add_argument("--output", help="directory for per-parameter CSV dumps")
    p.set_defaults(func=cmd_field)

    p = sub.add_parser("transform", help="transform a pixel curve to WGS84")
    add_sets_args(p)
    add_domain_arg(p)
    p.add_argument("--curve", required=True, help="pixel polyline file")
    p.add_argument("--name", help="output curve name (default: file stem)")
    p.add_argument("--output", required=True, help="output GeoJSON path")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("compare", help="metric tables for two geo curves")
    p.add_argument("--curve-a", required=True, help="GeoJSON LineString")
    p.add_argument("--curve-b", required=True, help="GeoJSON LineString")
    p.add_argument("--name-a", help="override curve A name")
    p.add_argument("--name-b", help="override curve B name")
    p.add_argument(
        "--bands", nargs="+", type=float, default=[10.0, 50.0, 100.0], help="band widths in km"
    )
    p.add_argument("--output", help="directory for CSV tables")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("run", help="run a full experiment from a config file")
    p.add_argument("--config", required=True, help="YAML experiment configuration")
    p.add_argument("--output", help="override the configured output directory")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("stadia", help="convert a stadia count to kilometers")
    p.add_argument("count", type=float, help="number of stadia")
    p.set_defaults(func=cmd_stadia)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except MapRegisterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
