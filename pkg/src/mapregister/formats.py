"""File formats: correspondence records, pixel and geo curves, field dumps.

Correspondence file -- plain text, one set per block:

    # comment
    set Adriatic coast
    # x1    x2      lon       lat       label
    120.5   310.25  13.9064   44.7963   Premantura
    ...
    set Black Sea coast
    ...

Pixel curve file -- two whitespace-separated columns (x1, x2) per line;
`#` comments and blank lines are ignored.

Geo curves -- GeoJSON LineString features, coordinates ordered (lon, lat)
on WGS84.  Written files carry name, point count and length in the feature
properties; coordinates are emitted with full round-trip precision.

Field dump -- one CSV per parameter with a `#` header carrying the grid
shape and origin; rows follow x2 (top to bottom), columns follow x1.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .affine import Correspondence, CorrespondenceSet, PixelPoint
from .errors import ConfigError
from .field import ParameterField
from .geodesy import GeoPoint


def _data_lines(path: Path):
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line


def read_correspondences(path: str | Path) -> list[CorrespondenceSet]:
    """Parse every named correspondence set in a file, in file order."""
    path = Path(path)
    sets: list[CorrespondenceSet] = []
    current: CorrespondenceSet | None = None
    for lineno, line in _data_lines(path):
        if line.startswith("set "):
            name = line[4:].strip()
            if not name:
                raise ConfigError(f"{path}:{lineno}: empty set name")
            if any(s.name == name for s in sets):
                raise ConfigError(f"{path}:{lineno}: duplicate set name '{name}'")
            current = CorrespondenceSet(name, [])
            sets.append(current)
            continue
        if current is None:
            raise ConfigError(f"{path}:{lineno}: data line before any 'set' header")
        parts = line.split(None, 4)
        if len(parts) < 4:
            raise ConfigError(f"{path}:{lineno}: expected 'x1 x2 lon lat [label]'")
        try:
            x1, x2, lon, lat = (float(v) for v in parts[:4])
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: bad number ({exc})") from exc
        label = parts[4] if len(parts) == 5 else ""
        current.pairs.append(Correspondence(PixelPoint(x1, x2), GeoPoint(lon, lat), label))
    if not sets:
        raise ConfigError(f"{path}: no correspondence sets found")
    return sets


def write_correspondences(path: str | Path, sets: list[CorrespondenceSet]) -> None:
    lines = ["# x1 x2 lon lat label"]
    for s in sets:
        lines.append(f"set {s.name}")
        for c in s.pairs:
            lines.append(
                f"{c.source.x1!r} {c.source.x2!r} {c.target.lon!r} {c.target.lat!r}"
                + (f" {c.label}" if c.label else "")
            )
    Path(path).write_text("\n".join(lines) + "\n")


def read_pixel_curve(path: str | Path) -> list[PixelPoint]:
    path = Path(path)
    pts = []
    for lineno, line in _data_lines(path):
        parts = line.split()
        if len(parts) != 2:
            raise ConfigError(f"{path}:{lineno}: expected 'x1 x2'")
        try:
            pts.append(PixelPoint(float(parts[0]), float(parts[1])))
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: bad number ({exc})") from exc
    if not pts:
        raise ConfigError(f"{path}: empty pixel curve")
    return pts


def write_pixel_curve(path: str | Path, points: list[PixelPoint]) -> None:
    Path(path).write_text("".join(f"{p.x1!r} {p.x2!r}\n" for p in points))


def read_geo_curve(path: str | Path) -> tuple[str, list[GeoPoint]]:
    """Load a single LineString from a GeoJSON file; returns (name, points)."""
    path = Path(path)
    try:
        obj = json.loads(path.read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc

    name = path.stem
    geom = obj
    if obj.get("type") == "FeatureCollection":
        feats = [f for f in obj.get("features", []) if f.get("geometry", {}).get("type") == "LineString"]
        if len(feats) != 1:
            raise ConfigError(f"{path}: expected exactly one LineString feature, found {len(feats)}")
        name = feats[0].get("properties", {}).get("name", name)
        geom = feats[0]["geometry"]
    elif obj.get("type") == "Feature":
        name = obj.get("properties", {}).get("name", name)
        geom = obj.get("geometry", {})
    if geom.get("type") != "LineString":
        raise ConfigError(f"{path}: geometry type {geom.get('type')!r}, expected LineString")
    coords = geom.get("coordinates", [])
    if len(coords) < 2:
        raise ConfigError(f"{path}: LineString needs at least 2 coordinates")
    try:
        pts = [GeoPoint(float(lon), float(lat)) for lon, lat in coords]
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: bad coordinate ({exc})") from exc
    return name, pts


def geo_curve_feature(name: str, points: list[GeoPoint], length_km: float | None = None) -> dict:
    props: dict = {"name": name, "point_count": len(points)}
    if length_km is not None:
        props["length_km"] = length_km
    return {
        "type": "Feature",
        "properties": props,
        "geometry": {
            "type": "LineString",
            "coordinates": [[p.lon, p.lat] for p in points],
        },
    }


def write_geo_curve(
    path: str | Path, name: str, points: list[GeoPoint], length_km: float | None = None
) -> None:
    fc = {"type": "FeatureCollection", "features": [geo_curve_feature(name, points, length_km)]}
    Path(path).write_text(json.dumps(fc, indent=2) + "\n")


def render_geojson_curve(curve) -> str:
    """GeoJSON FeatureCollection text for a DiscreteCurve."""
    fc = {
        "type": "FeatureCollection",
        "features": [geo_curve_feature(curve.name, curve.points, curve.length / 1000.0)],
    }
    return json.dumps(fc, indent=2) + "\n"


def write_field_dump(field: ParameterField, directory: str | Path) -> list[Path]:
    """One CSV per parameter; rows follow x2, columns follow x1."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    grid = field.grid
    written = []
    from .affine import AffineParams

    for k, pname in enumerate(AffineParams.PARAM_NAMES):
        out = directory / f"{pname}.csv"
        values = field.params[:, :, k]
        lines = [
            f"# parameter: {pname}",
            f"# n1: {grid.n1} n2: {grid.n2}",
            f"# origin_x1: {grid.origin.x1!r} origin_x2: {grid.origin.x2!r}",
        ]
        for j in range(grid.n2):
            lines.append(",".join(repr(float(values[i, j])) for i in range(grid.n1)))
        out.write_text("\n".join(lines) + "\n")
        written.append(out)
    return written


def read_field_dump(path: str | Path) -> np.ndarray:
    """Read one parameter grid back from a dump file (testing aid)."""
    path = Path(path)
    rows = []
    n1 = n2 = None
    for line in path.read_text().splitlines():
        if line.startswith("#"):
            if "n1:" in line:
                parts = line.replace("#", "").split()
                n1 = int(parts[parts.index("n1:") + 1])
                n2 = int(parts[parts.index("n2:") + 1])
            continue
        rows.append([float(v) for v in line.split(",")])
    arr = np.array(rows).T  # rows were x2, columns x1
    if n1 is not None and arr.shape != (n1, n2):
        raise ConfigError(f"{path}: grid shape {arr.shape} does not match header ({n1}, {n2})")
    return arr
