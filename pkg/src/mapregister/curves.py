"""Discrete curves and geodesic similarity metrics.

A digitized course A = {a_1, ..., a_n} is carried by n segments built with
the midpoint rule: the first runs from a_1 to the midpoint of (a_1, a_2),
interior segment i joins the midpoints of its two adjacent edges through
a_i, and the last runs from the final midpoint to a_n.  Every metric here
reduces to the minimum geodesic distance from an anchor vertex a_i to the
other curve's segments: length-weighted means and maxima give the directed
Hausdorff quantities, a threshold gate on the same distances gives the
matching length.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ._geodesic import WGS84
from .errors import DegenerateCurveError, OutOfRangeError
from .geodesy import (
    LONG_SEGMENT_M,
    GeoPoint,
    GeoSegment,
    geodesic_distance,
    geodesic_midpoint,
    point_to_segment_distance,
)


@dataclass(frozen=True)
class BandThreshold:
    """Matching-band width d_t in meters."""

    meters: float

    def __post_init__(self):
        if not (self.meters > 0 and math.isfinite(self.meters)):
            raise OutOfRangeError(f"band threshold must be positive, got {self.meters}")

    @classmethod
    def from_km(cls, km: float) -> "BandThreshold":
        return cls(km * 1000.0)

    @property
    def km(self) -> float:
        return self.meters / 1000.0


@dataclass(frozen=True)
class CurveSegment:
    """One midpoint-rule segment: its anchor vertex and one or two geodesic
    pieces whose lengths sum to `length`."""

    anchor: GeoPoint
    pieces: tuple[GeoSegment, ...]
    length: float


@dataclass
class DiscreteCurve:
    """An ordered polyline on the ellipsoid with derived segments.

    `chain` interleaves the vertices with the edge midpoints; consecutive
    chain points delimit the segment pieces.  `length` is the sum of the
    segment lengths and agrees with the polyline length to roundoff.
    """

    name: str
    points: list[GeoPoint]
    segments: list[CurveSegment]
    chain: list[GeoPoint]
    length: float

    @property
    def point_count(self) -> int:
        return len(self.points)


def build_segments(points: list[GeoPoint], name: str = "") -> DiscreteCurve:
    """Construct a curve and its midpoint-rule segments.

    Consecutive duplicate points are dropped first; fewer than two distinct
    points leave nothing to measure.  Midpoints are geodesic midpoints, so
    the two halves of an edge have equal geodesic length.
    """
    pts: list[GeoPoint] = []
    for p in points:
        if not pts or p != pts[-1]:
            pts.append(p)
    if len(pts) < 2:
        raise DegenerateCurveError(f"curve '{name}' has {len(pts)} distinct points, need at least 2")

    n = len(pts)
    mids = [geodesic_midpoint(pts[i], pts[i + 1]) for i in range(n - 1)]
    left_half = [geodesic_distance(pts[i], mids[i]) for i in range(n - 1)]
    right_half = [geodesic_distance(mids[i], pts[i + 1]) for i in range(n - 1)]

    segments = [CurveSegment(pts[0], (GeoSegment(pts[0], mids[0]),), left_half[0])]
    for i in range(1, n - 1):
        pieces = (GeoSegment(mids[i - 1], pts[i]), GeoSegment(pts[i], mids[i]))
        segments.append(CurveSegment(pts[i], pieces, right_half[i - 1] + left_half[i]))
    segments.append(CurveSegment(pts[-1], (GeoSegment(mids[-1], pts[-1]),), right_half[-1]))

    chain: list[GeoPoint] = [pts[0]]
    for i in range(n - 1):
        chain.append(mids[i])
        chain.append(pts[i + 1])
    total = sum(s.length for s in segments)
    return DiscreteCurve(name, pts, segments, chain, total)


def anchor_min_distances(a: DiscreteCurve, b: DiscreteCurve) -> list[float]:
    """For every anchor vertex of A, the minimum geodesic distance in meters
    to B's segments.

    The segments of B partition its chain edges, so the minimum over
    segments equals the minimum over chain edges.  Per anchor, all chain
    points of B are projected once into the azimuthal equidistant plane at
    the anchor and each edge is handled as a planar chord, exactly as
    `point_to_segment_distance` does; over-long edges fall back to that
    function's densified path.
    """
    chain = b.chain
    edge_len = [geodesic_distance(chain[k], chain[k + 1]) for k in range(len(chain) - 1)]
    long_edges = [k for k, ln in enumerate(edge_len) if ln > LONG_SEGMENT_M]

    inverse = WGS84.inverse
    out = []
    for anchor in a.points:
        alat, alon = anchor.lat, anchor.lon
        xs: list[float] = []
        ys: list[float] = []
        for q in chain:
            if q.lat == alat and q.lon == alon:
                xs.append(0.0)
                ys.append(0.0)
                continue
            r = inverse(alat, alon, q.lat, q.lon)
            az = math.radians(r.azi1)
            xs.append(r.s12 * math.sin(az))
            ys.append(r.s12 * math.cos(az))
        best = math.inf
        for k in range(len(chain) - 1):
            ax, ay, bx, by = xs[k], ys[k], xs[k + 1], ys[k + 1]
            dx, dy = bx - ax, by - ay
            dd = dx * dx + dy * dy
            if dd == 0.0:
                d = math.hypot(ax, ay)
            else:
                t = -(ax * dx + ay * dy) / dd
                t = 0.0 if t < 0.0 else (1.0 if t > 1.0 else t)
                d = math.hypot(ax + t * dx, ay + t * dy)
            if d < best:
                best = d
        for k in long_edges:
            d = point_to_segment_distance(anchor, GeoSegment(chain[k], chain[k + 1]))
            if d < best:
                best = d
        out.append(best)
    return out


def directed_mean_hausdorff(a: DiscreteCurve, b: DiscreteCurve) -> float:
    """Segment-length-weighted mean anchor distance from A to B (meters)."""
    dists = anchor_min_distances(a, b)
    return sum(s.length * d for s, d in zip(a.segments, dists)) / a.length


def directed_max_hausdorff(a: DiscreteCurve, b: DiscreteCurve) -> float:
    """Largest anchor distance from A's vertices to B's segments (meters)."""
    return max(anchor_min_distances(a, b))


def mean_hausdorff(a: DiscreteCurve, b: DiscreteCurve) -> float:
    """Length-weighted symmetrization of the directed means (meters)."""
    dab = directed_mean_hausdorff(a, b)
    dba = directed_mean_hausdorff(b, a)
    return (a.length * dab + b.length * dba) / (a.length + b.length)


def max_hausdorff(a: DiscreteCurve, b: DiscreteCurve) -> float:
    """Larger of the two directed maxima (meters)."""
    return max(directed_max_hausdorff(a, b), directed_max_hausdorff(b, a))


def matching_length(a: DiscreteCurve, b: DiscreteCurve, band: BandThreshold) -> tuple[float, float]:
    """Length of A within the band around B: (meters, percent of L_A).

    A segment counts in full when its anchor vertex passes the strict
    distance test, regardless of where the rest of the segment lies.
    """
    dists = anchor_min_distances(a, b)
    lm = sum(s.length for s, d in zip(a.segments, dists) if d < band.meters)
    return lm, 100.0 * lm / a.length


def matching_average(a: DiscreteCurve, b: DiscreteCurve, band: BandThreshold) -> tuple[float, float]:
    """Two-direction matching average: (meters, percent of combined length)."""
    lab, _ = matching_length(a, b, band)
    lba, _ = matching_length(b, a, band)
    return (lab + lba) / 2.0, 100.0 * (lab + lba) / (a.length + b.length)


def source_distance(a: DiscreteCurve, b: DiscreteCurve) -> float:
    """Geodesic distance between the two source points (index 0), in km."""
    if not a.points or not b.points:
        raise DegenerateCurveError("source_distance needs non-empty curves")
    return geodesic_distance(a.points[0], b.points[0]) / 1000.0


def split_at_nearest_vertex(
    curve: DiscreteCurve, ref: GeoPoint, names: tuple[str, str] | None = None
) -> tuple[DiscreteCurve, DiscreteCurve]:
    """Split a curve at the vertex closest to a reference point.

    The split vertex belongs to both halves; each half must keep at least
    two points.  Used to separate upper and lower river courses at a
    confluence or crossing supplied as configuration.
    """
    dists = [geodesic_distance(p, ref) for p in curve.points]
    k = min(range(len(dists)), key=dists.__getitem__)
    if k == 0 or k == len(curve.points) - 1:
        raise DegenerateCurveError(
            f"split point of '{curve.name}' falls on an endpoint (vertex {k})"
        )
    if names is None:
        names = (f"{curve.name}1", f"{curve.name}2")
    first = build_segments(curve.points[: k + 1], names[0])
    second = build_segments(curve.points[k:], names[1])
    return first, second
