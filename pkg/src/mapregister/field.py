"""Harmonic extension of affine parameters over the source-map pixel grid.

Each correspondence region pins the six transform parameters (Dirichlet
data) on the nodes it covers; everywhere else the parameters satisfy the
five-point discrete Laplace equation, with zero-Neumann conditions realized
by reflecting values across the domain boundary.  One sparse matrix serves
all six parameters; it is factorized once and solved for six right-hand
sides.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .affine import AffineParams, CorrespondenceSet, PixelPoint
from .errors import (
    ConvergenceError,
    DegenerateConfigurationError,
    DomainViolationError,
    EmptyRegionError,
    OutOfDomainError,
    RegionConflictError,
    SingularSystemError,
)

#: Absolute tolerance for a node center sitting exactly on a polygon edge.
_ON_EDGE_TOL = 1e-9
#: Residual contract for the solved field, relative to max(1, |rhs|_inf).
RESIDUAL_RTOL = 1e-8
#: Slack allowed on the discrete maximum principle after the solve.
_MAX_PRINCIPLE_TOL = 1e-9


@dataclass(frozen=True)
class GridDomain:
    """Uniform unit-spacing node grid; node (1,1) sits at `origin`.

    Node (i, j), i = 1..n1, j = 1..n2 has pixel coordinates
    (origin.x1 + i - 1, origin.x2 + j - 1).
    """

    origin: PixelPoint
    n1: int
    n2: int

    def __post_init__(self):
        if self.n1 < 3 or self.n2 < 3:
            raise DomainViolationError(f"grid {self.n1}x{self.n2} too small, need at least 3x3")

    @property
    def node_count(self) -> int:
        return self.n1 * self.n2

    def to_node(self, p: PixelPoint) -> tuple[float, float]:
        """Pixel coordinates -> fractional node coordinates (i, j)."""
        return p.x1 - self.origin.x1 + 1.0, p.x2 - self.origin.x2 + 1.0

    def node_pixel(self, i: int, j: int) -> PixelPoint:
        return PixelPoint(self.origin.x1 + i - 1.0, self.origin.x2 + j - 1.0)


@dataclass(frozen=True)
class DirichletRegion:
    """A simple closed polygon carrying one set of affine parameters."""

    polygon: tuple[PixelPoint, ...]
    value: AffineParams
    name: str = ""

    def __post_init__(self):
        verts = list(self.polygon)
        if len(verts) > 1 and verts[0] == verts[-1]:
            verts = verts[:-1]
        deduped = [v for k, v in enumerate(verts) if k == 0 or v != verts[k - 1]]
        if len(deduped) < 3:
            raise DegenerateConfigurationError(
                f"region '{self.name}': polygon needs at least 3 distinct vertices"
            )
        if not _is_simple_polygon(deduped):
            raise DegenerateConfigurationError(
                f"region '{self.name}': polygon is self-intersecting"
            )
        object.__setattr__(self, "polygon", tuple(deduped))


def _orient(ax, ay, bx, by, cx, cy) -> float:
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


def _on_segment(ax, ay, bx, by, px, py) -> bool:
    # Collinearity is assumed; checks the bounding box only.
    return min(ax, bx) <= px <= max(ax, bx) and min(ay, by) <= py <= max(ay, by)


def _segments_cross(p1, p2, p3, p4) -> bool:
    d1 = _orient(*p3, *p4, *p1)
    d2 = _orient(*p3, *p4, *p2)
    d3 = _orient(*p1, *p2, *p3)
    d4 = _orient(*p1, *p2, *p4)
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)) and d1 != d2 and d3 != d4:
        return True
    for (a, b, p) in ((p1, p2, p3), (p1, p2, p4), (p3, p4, p1), (p3, p4, p2)):
        if _orient(*a, *b, *p) == 0 and _on_segment(*a, *b, *p):
            return True
    return False


def _is_simple_polygon(verts: list[PixelPoint]) -> bool:
    n = len(verts)
    pts = [(v.x1, v.x2) for v in verts]
    for i in range(n):
        a1, a2 = pts[i], pts[(i + 1) % n]
        for j in range(i + 1, n):
            b1, b2 = pts[j], pts[(j + 1) % n]
            if (j + 1) % n == i or (i + 1) % n == j:
                # Adjacent edges share one vertex; they must not double back
                # along each other beyond it.
                s = a2 if (i + 1) % n == j else a1
                u = a1 if s == a2 else a2
                w = b2 if b1 == s else b1
                if _orient(*u, *s, *w) == 0:
                    dot = (u[0] - s[0]) * (w[0] - s[0]) + (u[1] - s[1]) * (w[1] - s[1])
                    if dot > 0:
                        return False
                continue
            if _segments_cross(a1, a2, b1, b2):
                return False
    return True


def region_from_correspondences(
    cset: CorrespondenceSet, value: AffineParams, use_hull: bool = False
) -> DirichletRegion:
    """Build the region polygon from a set's source points.

    By default the user-supplied point order is honored and validated for
    simplicity; with `use_hull` the convex hull is taken instead, which is
    the safe choice for unordered landmark lists.
    """
    pts = cset.source_points()
    if use_hull:
        from scipy.spatial import ConvexHull

        arr = np.array([(p.x1, p.x2) for p in pts], dtype=float)
        try:
            hull = ConvexHull(arr)
        except Exception as exc:
            raise DegenerateConfigurationError(
                f"region '{cset.name}': convex hull failed ({exc})"
            ) from exc
        pts = [PixelPoint(*arr[k]) for k in hull.vertices]
    return DirichletRegion(tuple(pts), value, name=cset.name)


def rasterize_envelope(region: DirichletRegion, grid: GridDomain) -> np.ndarray:
    """Dirichlet node mask for a region: nodes inside or on the polygon plus
    their 4-neighbor ring (the outer discrete envelope).

    Returns a boolean (n1, n2) array indexed [i-1, j-1].  The marked set
    must stay clear of the domain boundary.
    """
    verts = np.array([grid.to_node(p) for p in region.polygon], dtype=float)
    if (
        verts[:, 0].min() < 1 or verts[:, 0].max() > grid.n1
        or verts[:, 1].min() < 1 or verts[:, 1].max() > grid.n2
    ):
        raise DomainViolationError(f"region '{region.name}': polygon leaves the domain rectangle")

    ilo = max(1, int(math.floor(verts[:, 0].min())))
    ihi = min(grid.n1, int(math.ceil(verts[:, 0].max())))
    jlo = max(1, int(math.floor(verts[:, 1].min())))
    jhi = min(grid.n2, int(math.ceil(verts[:, 1].max())))

    ii, jj = np.meshgrid(
        np.arange(ilo, ihi + 1, dtype=float), np.arange(jlo, jhi + 1, dtype=float), indexing="ij"
    )
    inside = np.zeros(ii.shape, dtype=bool)
    on_edge = np.zeros(ii.shape, dtype=bool)
    n = len(verts)
    for k in range(n):
        x1, y1 = verts[k]
        x2, y2 = verts[(k + 1) % n]
        # Even-odd rule: count edges crossed by the ray running in +i.
        straddles = (y1 > jj) != (y2 > jj)
        if straddles.any():
            xin = (x2 - x1) * (jj - y1) / (y2 - y1) + x1
            inside ^= straddles & (ii < xin)
        # Node centers on the closed boundary count as inside.
        cross = (x2 - x1) * (jj - y1) - (y2 - y1) * (ii - x1)
        scale = max(abs(x2 - x1), abs(y2 - y1), 1.0)
        collinear = np.abs(cross) <= _ON_EDGE_TOL * scale
        in_box = (
            (ii >= min(x1, x2) - _ON_EDGE_TOL)
            & (ii <= max(x1, x2) + _ON_EDGE_TOL)
            & (jj >= min(y1, y2) - _ON_EDGE_TOL)
            & (jj <= max(y1, y2) + _ON_EDGE_TOL)
        )
        on_edge |= collinear & in_box

    mask = np.zeros((grid.n1, grid.n2), dtype=bool)
    mask[ilo - 1 : ihi, jlo - 1 : jhi] = inside | on_edge
    if not mask.any():
        raise EmptyRegionError(f"region '{region.name}': polygon encloses no grid nodes")

    ring = np.zeros_like(mask)
    ring[1:, :] |= mask[:-1, :]
    ring[:-1, :] |= mask[1:, :]
    ring[:, 1:] |= mask[:, :-1]
    ring[:, :-1] |= mask[:, 1:]
    marked = mask | ring
    if marked[0, :].any() or marked[-1, :].any() or marked[:, 0].any() or marked[:, -1].any():
        raise DomainViolationError(f"region '{region.name}': envelope reaches the domain boundary")
    return marked


@dataclass
class LaplaceSystem:
    """Assembled sparse system shared by the six parameters."""

    grid: GridDomain
    matrix: sp.csc_matrix
    rhs: np.ndarray  # (node_count, 6)
    dirichlet_mask: np.ndarray  # (n1, n2) bool

    def node_index(self, i: int, j: int) -> int:
        return (i - 1) * self.grid.n2 + (j - 1)


def assemble_from_masks(
    grid: GridDomain, masks_and_values: list[tuple[np.ndarray, AffineParams]]
) -> LaplaceSystem:
    """Assemble the discrete Laplace system from explicit Dirichlet masks.

    Dirichlet rows are identity rows carrying the region value; interior
    rows use the five-point stencil; boundary rows fold the reflected
    neighbor back onto the grid, doubling the opposite coefficient.  Nodes
    claimed twice with different values raise a conflict.
    """
    n1, n2 = grid.n1, grid.n2
    combined = np.zeros((n1, n2), dtype=bool)
    values = np.zeros((n1, n2, 6), dtype=float)
    for mask, params in masks_and_values:
        vals = np.array(params.as_tuple(), dtype=float)
        overlap = combined & mask
        if overlap.any():
            bad = np.argwhere(overlap & np.any(values != vals, axis=2))
            if len(bad):
                nodes = ", ".join(f"({i + 1}, {j + 1})" for i, j in bad[:8])
                raise RegionConflictError(
                    f"nodes {nodes} claimed by two regions with different values"
                )
        combined |= mask
        values[mask] = vals

    n = grid.node_count
    lin = np.arange(n).reshape(n1, n2)
    dir_flat = combined.reshape(-1)

    rows = [lin.reshape(-1)]
    cols = [lin.reshape(-1)]
    vals = [np.where(dir_flat, 1.0, 4.0)]

    ii, jj = np.meshgrid(np.arange(1, n1 + 1), np.arange(1, n2 + 1), indexing="ij")
    free = ~combined
    for di, dj in ((-1, 0), (1, 0), (0, -1), (0, 1)):
        ni = ii + di
        nj = jj + dj
        # Zero-Neumann boundary: reflect the off-grid neighbor back inside.
        ni = np.where(ni == 0, 2, ni)
        ni = np.where(ni == n1 + 1, n1 - 1, ni)
        nj = np.where(nj == 0, 2, nj)
        nj = np.where(nj == n2 + 1, n2 - 1, nj)
        rows.append(lin[free])
        cols.append(((ni - 1) * n2 + (nj - 1))[free])
        vals.append(np.full(free.sum(), -1.0))

    matrix = sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n)
    ).tocsc()
    rhs = np.zeros((n, 6))
    rhs[dir_flat] = values.reshape(-1, 6)[dir_flat]
    return LaplaceSystem(grid, matrix, rhs, combined)


def assemble_system(grid: GridDomain, regions: list[DirichletRegion]) -> LaplaceSystem:
    """Rasterize every region and assemble the shared sparse system."""
    masks = [(rasterize_envelope(r, grid), r.value) for r in regions]
    return assemble_from_masks(grid, masks)


@dataclass
class ParameterField:
    """Six solved parameter grids plus solve diagnostics."""

    grid: GridDomain
    params: np.ndarray  # (n1, n2, 6), read-only
    dirichlet_mask: np.ndarray
    residual: float

    def grid_for(self, name: str) -> np.ndarray:
        k = AffineParams.PARAM_NAMES.index(name)
        return self.params[:, :, k]

    def params_at_node(self, i: int, j: int) -> AffineParams:
        return AffineParams(*self.params[i - 1, j - 1, :])


def solve_field(system: LaplaceSystem) -> ParameterField:
    """Direct sparse LU solve of the six right-hand sides.

    One factorization serves all parameters.  A couple of iterative
    refinement passes push the residual to roundoff; Dirichlet entries are
    then restored bit-for-bit and the residual contract re-checked.
    """
    if not system.dirichlet_mask.any():
        raise SingularSystemError("no Dirichlet nodes: the pure-Neumann system is singular")
    try:
        lu = spla.splu(system.matrix)
    except RuntimeError as exc:
        raise SingularSystemError(f"sparse LU factorization failed: {exc}") from exc

    m, rhs = system.matrix, system.rhs
    u = lu.solve(rhs)
    for _ in range(2):
        r = rhs - m @ u
        if np.abs(r).max() == 0.0:
            break
        u += lu.solve(r)

    dir_flat = system.dirichlet_mask.reshape(-1)
    u[dir_flat] = rhs[dir_flat]

    scale = np.maximum(1.0, np.abs(rhs).max(axis=0))
    residuals = np.abs(m @ u - rhs).max(axis=0)
    worst = float((residuals / scale).max())
    if worst > RESIDUAL_RTOL:
        raise ConvergenceError(
            f"residual contract unmet: {worst:.3e} > {RESIDUAL_RTOL:.0e} (per-parameter "
            f"residuals {residuals.tolist()})"
        )

    n1, n2 = system.grid.n1, system.grid.n2
    grids = u.reshape(n1, n2, 6)
    _check_maximum_principle(grids, system.dirichlet_mask, rhs, dir_flat)
    grids.setflags(write=False)
    return ParameterField(system.grid, grids, system.dirichlet_mask.copy(), worst)


def _check_maximum_principle(grids, mask, rhs, dir_flat):
    dir_vals = rhs[dir_flat]
    lo = dir_vals.min(axis=0) - _MAX_PRINCIPLE_TOL
    hi = dir_vals.max(axis=0) + _MAX_PRINCIPLE_TOL
    flat = grids.reshape(-1, 6)
    if (flat < lo).any() or (flat > hi).any():
        raise ConvergenceError("solved field violates the discrete maximum principle")


def sample_field(f: ParameterField, x: PixelPoint) -> AffineParams:
    """Bilinear interpolation of the six grids at a pixel position."""
    fi, fj = f.grid.to_node(x)
    n1, n2 = f.grid.n1, f.grid.n2
    eps = 1e-9
    if not (1.0 - eps <= fi <= n1 + eps and 1.0 - eps <= fj <= n2 + eps):
        raise OutOfDomainError(
            f"pixel ({x.x1}, {x.x2}) lies outside the field domain "
            f"[{f.grid.origin.x1}, {f.grid.origin.x1 + n1 - 1}] x "
            f"[{f.grid.origin.x2}, {f.grid.origin.x2 + n2 - 1}]"
        )
    fi = min(max(fi, 1.0), float(n1))
    fj = min(max(fj, 1.0), float(n2))
    i0 = min(int(math.floor(fi)), n1 - 1)
    j0 = min(int(math.floor(fj)), n2 - 1)
    s = fi - i0
    t = fj - j0
    g = f.params
    v = (
        g[i0 - 1, j0 - 1] * (1 - s) * (1 - t)
        + g[i0, j0 - 1] * s * (1 - t)
        + g[i0 - 1, j0] * (1 - s) * t
        + g[i0, j0] * s * t
    )
    return AffineParams(*v)
