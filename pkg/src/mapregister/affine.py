"""Locally optimal affine transformations from landmark correspondences.

A transform maps pixel coordinates (x1, x2) of the source map to WGS84
degrees: lon = a1 x1 + a2 x2 + b1, lat = a3 x1 + a4 x2 + b2.  Fitting
minimizes the summed squared degree-space residuals over a correspondence
set; fit quality is nevertheless reported geodesically, in kilometers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateConfigurationError, OutOfRangeError
from .geodesy import GeoPoint, geodesic_distance

_COLLINEAR_RTOL = 1e-12


@dataclass(frozen=True)
class PixelPoint:
    """Source-map position: x1 = column (rightward), x2 = row (downward)."""

    x1: float
    x2: float

    def __post_init__(self):
        if not (math.isfinite(self.x1) and math.isfinite(self.x2)):
            raise OutOfRangeError(f"non-finite pixel coordinates ({self.x1}, {self.x2})")


@dataclass(frozen=True)
class AffineParams:
    """The six scalars of one affine transformation."""

    a1: float
    a2: float
    a3: float
    a4: float
    b1: float
    b2: float

    PARAM_NAMES = ("a1", "a2", "a3", "a4", "b1", "b2")

    def __post_init__(self):
        for name in self.PARAM_NAMES:
            if not math.isfinite(getattr(self, name)):
                raise OutOfRangeError(f"non-finite affine parameter {name}")

    def as_tuple(self) -> tuple[float, float, float, float, float, float]:
        return (self.a1, self.a2, self.a3, self.a4, self.b1, self.b2)

    @classmethod
    def identity(cls) -> "AffineParams":
        return cls(1.0, 0.0, 0.0, 1.0, 0.0, 0.0)


@dataclass(frozen=True)
class Correspondence:
    """One landmark pair: where a source pixel sits on the current map."""

    source: PixelPoint
    target: GeoPoint
    label: str = ""


@dataclass
class CorrespondenceSet:
    """A named group of landmark pairs covering one region."""

    name: str
    pairs: list[Correspondence]
    region_note: str = ""

    def source_points(self) -> list[PixelPoint]:
        return [c.source for c in self.pairs]

    def merged_with(self, others: list["CorrespondenceSet"], name: str) -> "CorrespondenceSet":
        pairs = list(self.pairs)
        for o in others:
            pairs.extend(o.pairs)
        return CorrespondenceSet(name, pairs)


def apply_affine(t: AffineParams, x: PixelPoint) -> GeoPoint:
    """Evaluate the two linear forms; raises if the latitude leaves range."""
    lon = t.a1 * x.x1 + t.a2 * x.x2 + t.b1
    lat = t.a3 * x.x1 + t.a4 * x.x2 + t.b2
    if not -90.0 <= lat <= 90.0:
        raise OutOfRangeError(
            f"pixel ({x.x1}, {x.x2}) transforms to latitude {lat}, outside [-90, 90]"
        )
    return GeoPoint(lon, lat)


def _deduplicated(cset: CorrespondenceSet) -> list[Correspondence]:
    # Duplicate source pixels would make the normal matrix singular without
    # adding information; merge them, averaging their targets.  Sorting both
    # the groups and the group members makes the fit independent of the
    # input ordering, bit for bit.
    groups: dict[tuple[float, float], list[Correspondence]] = {}
    for c in cset.pairs:
        groups.setdefault((c.source.x1, c.source.x2), []).append(c)
    merged = []
    for (x1, x2), members in sorted(groups.items()):
        if len(members) == 1:
            merged.append(members[0])
            continue
        members = sorted(members, key=lambda c: (c.target.lon, c.target.lat, c.label))
        lon = sum(c.target.lon for c in members) / len(members)
        lat = sum(c.target.lat for c in members) / len(members)
        merged.append(Correspondence(PixelPoint(x1, x2), GeoPoint(lon, lat), members[0].label))
    return merged


def fit_affine(cset: CorrespondenceSet) -> AffineParams:
    """Least-squares affine transform for a correspondence set.

    Solves the normal equations of the summed squared-residual objective;
    the 6x6 system decouples into two identical 3x3 blocks, one per target
    coordinate.  Source coordinates are centered on their centroid before
    assembly and the translation is un-centered afterwards, which avoids
    cancellation for large pixel offsets and changes nothing mathematically.
    """
    pairs = _deduplicated(cset)
    n = len(pairs)
    if n < 3:
        raise DegenerateConfigurationError(
            f"set '{cset.name}' has {n} distinct source points, need at least 3"
        )
    xs = np.array([(c.source.x1, c.source.x2) for c in pairs], dtype=float)
    ys = np.array([(c.target.lon, c.target.lat) for c in pairs], dtype=float)

    centroid = xs.mean(axis=0)
    u = xs - centroid
    svals = np.linalg.svd(u, compute_uv=False)
    if svals[-1] <= _COLLINEAR_RTOL * max(svals[0], 1.0):
        raise DegenerateConfigurationError(f"set '{cset.name}' has collinear source points")

    m = np.empty((3, 3))
    m[0, 0] = np.dot(u[:, 0], u[:, 0])
    m[0, 1] = m[1, 0] = np.dot(u[:, 0], u[:, 1])
    m[1, 1] = np.dot(u[:, 1], u[:, 1])
    m[0, 2] = m[2, 0] = u[:, 0].sum()
    m[1, 2] = m[2, 1] = u[:, 1].sum()
    m[2, 2] = n
    rhs = np.stack(
        [
            (np.dot(ys[:, k], u[:, 0]), np.dot(ys[:, k], u[:, 1]), ys[:, k].sum())
            for k in (0, 1)
        ],
        axis=1,
    )
    try:
        sol = np.linalg.solve(m, rhs)
    except np.linalg.LinAlgError as exc:
        raise DegenerateConfigurationError(f"set '{cset.name}': normal matrix singular") from exc

    a1, a2, b1c = sol[:, 0]
    a3, a4, b2c = sol[:, 1]
    b1 = b1c - a1 * centroid[0] - a2 * centroid[1]
    b2 = b2c - a3 * centroid[0] - a4 * centroid[1]
    return AffineParams(a1, a2, a3, a4, b1, b2)


def least_squares_objective(t: AffineParams, cset: CorrespondenceSet) -> float:
    """The fitted objective: summed squared degree-space residuals."""
    total = 0.0
    for c in cset.pairs:
        r1 = c.target.lon - (t.a1 * c.source.x1 + t.a2 * c.source.x2 + t.b1)
        r2 = c.target.lat - (t.a3 * c.source.x1 + t.a4 * c.source.x2 + t.b2)
        total += r1 * r1 + r2 * r2
    return total


def _residuals_km(t: AffineParams, cset: CorrespondenceSet) -> list[float]:
    return [
        geodesic_distance(c.target, apply_affine(t, c.source)) / 1000.0
        for c in cset.pairs
    ]


def mean_error(t: AffineParams, cset: CorrespondenceSet) -> float:
    """Root-mean-square geodesic residual in kilometers."""
    r = _residuals_km(t, cset)
    return math.sqrt(sum(d * d for d in r) / len(r))


def max_error(t: AffineParams, cset: CorrespondenceSet) -> float:
    """Largest geodesic residual in kilometers."""
    return max(_residuals_km(t, cset))
