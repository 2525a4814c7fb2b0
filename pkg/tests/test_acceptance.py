"""Acceptance gate: one test per criterion, each printing a PASS line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines alongside the pytest verdicts.
"""

import json
import math
import random
import time

import numpy as np
import pytest

from mapregister.affine import (
    AffineParams,
    PixelPoint,
    apply_affine,
    fit_affine,
    max_error,
    mean_error,
)
from mapregister.curves import build_segments
from mapregister.field import (
    DirichletRegion,
    GridDomain,
    assemble_from_masks,
    assemble_system,
    sample_field,
    solve_field,
)
from mapregister.geodesy import GeoPoint, geodesic_distance, walk
from mapregister.pipeline import load_config, run_experiment, stadia_to_km
from mapregister.report import (
    MatchingBand,
    MatchingEntry,
    MetricsReport,
    ReportConsistencyError,
    TransformErrors,
    average_row_faces,
    render_csv_tables,
)

from oracles import (
    VincentyNoConvergence,
    dense_directed_hausdorff,
    equator_arc,
    quarter_meridian,
    vincenty_distance,
)
from synth import (
    densify_polyline,
    random_affine,
    random_curve,
    random_pixels,
    ring_pixels,
    synth_set,
    write_experiment,
)
from test_affine import finite_difference_gradient


def _passed(num: int, name: str):
    print(f"ACCEPTANCE {num:2d} ({name}): PASS")


def scalar_params(v: float) -> AffineParams:
    return AffineParams(v, v, v, v, v, v)


def test_criterion_01_affine_recovery():
    rng = random.Random(20240101)
    cases = []
    for _ in range(100):
        t = random_affine(rng)
        cases.append((t, synth_set("s", t, random_pixels(rng, 10))))
    t0 = time.perf_counter()
    for t_true, cset in cases:
        t_fit = fit_affine(cset)
        for got, want in zip(t_fit.as_tuple(), t_true.as_tuple()):
            assert abs(got - want) <= 1e-9 * max(1.0, abs(want))
        assert mean_error(t_fit, cset) <= 1e-6
        assert max_error(t_fit, cset) <= 1e-6
    elapsed = time.perf_counter() - t0
    assert elapsed < 1.0, f"affine recovery took {elapsed:.2f}s"
    _passed(1, "affine recovery")


def test_criterion_02_objective_optimality():
    rng = random.Random(20240102)
    for _ in range(20):
        t_true = random_affine(rng)
        cset = synth_set("n", t_true, random_pixels(rng, 12), rng, noise_deg=0.05)
        t_fit = fit_affine(cset)
        grad = finite_difference_gradient(t_fit, cset)
        assert max(abs(g) for g in grad) <= 1e-8
    _passed(2, "objective optimality")


def test_criterion_03_constant_dirichlet_500():
    t0 = time.perf_counter()
    grid = GridDomain(PixelPoint(1, 1), 500, 500)
    region = DirichletRegion(
        (
            PixelPoint(200, 180),
            PixelPoint(320, 210),
            PixelPoint(300, 330),
            PixelPoint(190, 300),
        ),
        scalar_params(3.25),
    )
    field = solve_field(assemble_system(grid, [region]))
    elapsed = time.perf_counter() - t0
    assert np.abs(field.params - 3.25).max() <= 1e-10
    assert elapsed < 30.0, f"500x500 solve took {elapsed:.1f}s"
    _passed(3, "constant-Dirichlet Laplace, 500x500")


def test_criterion_04_maximum_principle_300():
    grid = GridDomain(PixelPoint(1, 1), 300, 300)
    regions = [
        DirichletRegion(ring_pixels(80, 80, 12), scalar_params(0.0)),
        DirichletRegion(ring_pixels(220, 210, 12), scalar_params(1.0)),
    ]
    field = solve_field(assemble_system(grid, regions))
    assert field.params.min() >= -1e-12
    assert field.params.max() <= 1 + 1e-12
    assert field.residual <= 1e-8
    _passed(4, "discrete maximum principle, 300x300")


def test_criterion_05_one_dimensional_profile():
    n1, n2 = 200, 3
    grid = GridDomain(PixelPoint(1, 1), n1, n2)
    left = np.zeros((n1, n2), dtype=bool)
    left[0, :] = True
    right = np.zeros((n1, n2), dtype=bool)
    right[-1, :] = True
    field = solve_field(
        assemble_from_masks(grid, [(left, scalar_params(0.0)), (right, scalar_params(1.0))])
    )
    expected = np.linspace(0.0, 1.0, n1)
    for j in range(n2):
        for k in range(6):
            assert np.abs(field.params[:, j, k] - expected).max() <= 1e-8
    _passed(5, "1-D harmonic profile")


def test_criterion_06_stencil_fidelity():
    n1, n2 = 9, 8
    grid = GridDomain(PixelPoint(1, 1), n1, n2)
    region = DirichletRegion(ring_pixels(5, 4, 0.5, n=4), scalar_params(7.0))
    system = assemble_system(grid, [region])
    csr = system.matrix.tocsr()

    def row(i, j):
        r = csr.getrow(system.node_index(i, j))
        return {
            (c // n2 + 1, c % n2 + 1): v for c, v in zip(r.indices, r.data) if v != 0.0
        }

    # Dirichlet node
    assert row(5, 4) == {(5, 4): 1.0}
    assert (system.rhs[system.node_index(5, 4)] == 7.0).all()
    # interior five-point stencil
    assert row(3, 6) == {(3, 6): 4.0, (2, 6): -1.0, (4, 6): -1.0, (3, 5): -1.0, (3, 7): -1.0}
    # four corners
    assert row(1, 1) == {(1, 1): 4.0, (2, 1): -2.0, (1, 2): -2.0}
    assert row(1, n2) == {(1, n2): 4.0, (1, n2 - 1): -2.0, (2, n2): -2.0}
    assert row(n1, 1) == {(n1, 1): 4.0, (n1 - 1, 1): -2.0, (n1, 2): -2.0}
    assert row(n1, n2) == {(n1, n2): 4.0, (n1 - 1, n2): -2.0, (n1, n2 - 1): -2.0}
    # four edges
    assert row(1, 4) == {(1, 4): 4.0, (1, 3): -1.0, (1, 5): -1.0, (2, 4): -2.0}
    assert row(n1, 4) == {(n1, 4): 4.0, (n1, 3): -1.0, (n1, 5): -1.0, (n1 - 1, 4): -2.0}
    assert row(4, 1) == {(4, 1): 4.0, (3, 1): -1.0, (5, 1): -1.0, (4, 2): -2.0}
    assert row(4, n2) == {(4, n2): 4.0, (3, n2): -1.0, (5, n2): -1.0, (4, n2 - 1): -2.0}
    _passed(6, "stencil fidelity, all boundary cases")


def test_criterion_07_geodesic_accuracy():
    d_eq = geodesic_distance(GeoPoint(0, 0), GeoPoint(1, 0))
    assert abs(d_eq - 111319.491) <= 1e-3
    assert abs(d_eq - equator_arc(1.0)) <= 1e-3
    d_qm = geodesic_distance(GeoPoint(0, 0), GeoPoint(0, 90))
    assert abs(d_qm - 10001965.729) <= 1e-2
    assert abs(d_qm - quarter_meridian()) <= 1e-2

    rng = random.Random(20240107)
    checked = 0
    worst = 0.0
    while checked < 1000:
        lat1, lat2 = rng.uniform(-89, 89), rng.uniform(-89, 89)
        lon1, lon2 = rng.uniform(-180, 180), rng.uniform(-180, 180)
        # keep clear of the antipodal neighborhood
        if geodesic_distance(GeoPoint(lon1, lat1), GeoPoint(lon2, lat2)) > 19_800_000:
            continue
        try:
            ref = vincenty_distance(lat1, lon1, lat2, lon2)
        except VincentyNoConvergence:
            continue
        got = geodesic_distance(GeoPoint(lon1, lat1), GeoPoint(lon2, lat2))
        worst = max(worst, abs(got - ref))
        assert abs(got - ref) <= 1e-3, (lat1, lon1, lat2, lon2)
        checked += 1
    print(f"  geodesic vs oracle, n=1000: worst disagreement {worst * 1000:.4f} mm")
    _passed(7, "geodesic accuracy")


def test_criterion_08_metric_axioms():
    rng = random.Random(20240108)
    bands_m = [500.0, 1_000.0, 2_000.0, 5_000.0, 10_000.0, 50_000.0]
    from mapregister.curves import (
        anchor_min_distances,
        directed_max_hausdorff,
        directed_mean_hausdorff,
        matching_length,
        max_hausdorff,
        mean_hausdorff,
        BandThreshold,
    )

    for k in range(50):
        start = GeoPoint(rng.uniform(-30, 30), rng.uniform(-55, 55))
        a = build_segments(random_curve(rng, "A", n=12, start=start, step_m=1500), "A")
        b = build_segments(
            random_curve(rng, "B", n=10, start=walk(start, rng.uniform(0, 360), 4000), step_m=1500),
            "B",
        )
        d_ab = anchor_min_distances(a, b)
        d_ba = anchor_min_distances(b, a)
        seg_a = [s.length for s in a.segments]
        seg_b = [s.length for s in b.segments]

        mean_ab = sum(l * d for l, d in zip(seg_a, d_ab)) / a.length
        mean_ba = sum(l * d for l, d in zip(seg_b, d_ba)) / b.length
        max_ab, max_ba = max(d_ab), max(d_ba)
        assert mean_ab <= max_ab + 1e-12
        assert mean_ba <= max_ba + 1e-12

        combined_mean = (a.length * mean_ab + b.length * mean_ba) / (a.length + b.length)
        combined_max = max(max_ab, max_ba)
        assert combined_mean <= combined_max + 1e-12

        lms = []
        for m in bands_m:
            lm = sum(l for l, d in zip(seg_a, d_ab) if d < m)
            lms.append(lm)
            assert -1e-12 <= lm <= a.length + 1e-9
        assert lms == sorted(lms)
        separation = max(max_ab, max_ba) + 1.0
        lm_full = sum(l for l, d in zip(seg_a, d_ab) if d < separation)
        assert lm_full == a.length

        if k < 8:
            assert mean_hausdorff(a, b) == mean_hausdorff(b, a)
            assert max_hausdorff(a, b) == max_hausdorff(b, a)
            assert directed_mean_hausdorff(a, b) == pytest.approx(mean_ab, rel=1e-12)
            assert directed_max_hausdorff(a, b) == max_ab
            lm, pct = matching_length(a, b, BandThreshold(separation))
            assert lm == a.length and pct == 100.0

        if k < 10:
            assert directed_mean_hausdorff(a, a) == 0.0
            assert directed_max_hausdorff(a, a) == 0.0
            assert mean_hausdorff(a, a) == 0.0
            assert max_hausdorff(a, a) == 0.0
    _passed(8, "metric axioms on 50 random curve pairs")


def test_criterion_09_densification_oracle():
    from mapregister._geodesic import WGS84
    from mapregister.curves import anchor_min_distances

    rng = random.Random(20240109)
    start = GeoPoint(13.0, 46.0)
    pts_a = random_curve(rng, "A", n=150, start=start, step_m=3.0)
    pts_b = random_curve(rng, "B", n=150, start=walk(start, 90.0, 60.0), step_m=3.0)
    a = build_segments(pts_a, "A")
    b = build_segments(pts_b, "B")
    assert a.length <= 20_000 and b.length <= 20_000

    center = GeoPoint(
        (start.lon + pts_b[0].lon) / 2, (start.lat + pts_b[0].lat) / 2
    )

    def plane(p: GeoPoint):
        if p.lat == center.lat and p.lon == center.lon:
            return (0.0, 0.0)
        r = WGS84.inverse(center.lat, center.lon, p.lat, p.lon)
        az = math.radians(r.azi1)
        return (r.s12 * math.sin(az), r.s12 * math.cos(az))

    dense_a = densify_polyline(pts_a, 1.0)
    dense_b = densify_polyline(pts_b, 1.0)

    for (segs, other, d_a, d_b) in ((a, b, dense_a, dense_b), (b, a, dense_b, dense_a)):
        dists = anchor_min_distances(segs, other)
        seg_mean = sum(s.length * d for s, d in zip(segs.segments, dists)) / segs.length
        seg_max = max(dists)
        oracle_mean, oracle_max = dense_directed_hausdorff(
            geodesic_distance, plane, d_a, d_b
        )
        assert abs(seg_mean - oracle_mean) <= 2.0, (seg_mean, oracle_mean)
        assert abs(seg_max - oracle_max) <= 2.0, (seg_max, oracle_max)
    _passed(9, "densification oracle agreement within 2 m")


def test_criterion_10_average_row_identity():
    avg, pct = average_row_faces("228.127", "185.952", "2714.887", "1421.117")
    assert avg == "207.040"
    assert pct == "10.0"

    # The rendered table carries the same figures.
    entry = MatchingEntry("D", "I", 2714.887, 1421.117, [MatchingBand(10.0, 228.127, 8.4026, 185.952, 13.085)])
    report = MetricsReport(
        transform_errors=TransformErrors([], [], [], []), bands_km=[10.0], matching=[entry]
    )
    lines = render_csv_tables(report)["matching.csv"].strip().splitlines()
    assert lines[3] == "Average,,,10.000,207.040,10.0"

    # The emit-time self-check rejects combined values that stray from the
    # directed figures.
    class LyingBand(MatchingBand):
        def average_km(self):
            return 999.0

    bad = MatchingEntry("D", "I", 2714.887, 1421.117, [LyingBand(10.0, 228.127, 8.4, 185.952, 13.1)])
    report_bad = MetricsReport(
        transform_errors=TransformErrors([], [], [], []), bands_km=[10.0], matching=[bad]
    )
    with pytest.raises(ReportConsistencyError):
        render_csv_tables(report_bad)
    _passed(10, "average-row formula and emit-time self-check")


def test_criterion_11_stadia():
    assert stadia_to_km(1000) == (177.7, 197.3)
    assert stadia_to_km(0) == (0.0, 0.0)
    lo, hi = stadia_to_km(3500)
    assert (lo, hi) == (621.95, 690.55)
    assert lo < 640.0 < hi
    _passed(11, "stadia conversion")


def test_criterion_12_end_to_end_synthetic(tmp_path):
    from mapregister.formats import read_pixel_curve
    from synth import EXPERIMENT_REGIONS

    t0 = time.perf_counter()
    config_path, truth = write_experiment(tmp_path / "exp")
    config = load_config(config_path)
    config.output_dir = tmp_path / "out_a"
    result = run_experiment(config)

    # Inside each region's envelope the transform equals that region's affine.
    pixels = read_pixel_curve(tmp_path / "exp" / "probe.txt")
    probe = result.curves["probe"]
    checked = 0
    for name, (t_true, (cx, cy)) in EXPERIMENT_REGIONS.items():
        for px, geo in zip(pixels, probe.points):
            if math.hypot(px.x1 - cx, px.x2 - cy) <= 3.5:
                want = apply_affine(t_true, px)
                assert abs(geo.lon - want.lon) <= 1e-8
                assert abs(geo.lat - want.lat) <= 1e-8
                checked += 1
    assert checked >= 9, "probe must pass through all three envelopes"

    # Between envelopes every sampled parameter stays inside the Dirichlet
    # extremes (no overshoot).
    field = result.field
    dir_vals = field.params[field.dirichlet_mask]
    lo = dir_vals.min(axis=0) - 1e-9
    hi = dir_vals.max(axis=0) + 1e-9
    for px in pixels:
        sampled = np.array(sample_field(field, px).as_tuple())
        assert (sampled >= lo).all() and (sampled <= hi).all()

    # Determinism: a second run is byte-identical.
    config.output_dir = tmp_path / "out_b"
    run_experiment(config)
    rel_a = sorted(
        p.relative_to(tmp_path / "out_a").as_posix()
        for p in (tmp_path / "out_a").rglob("*")
        if p.is_file()
    )
    rel_b = sorted(
        p.relative_to(tmp_path / "out_b").as_posix()
        for p in (tmp_path / "out_b").rglob("*")
        if p.is_file()
    )
    assert rel_a == rel_b
    for rel in rel_a:
        assert (tmp_path / "out_a" / rel).read_bytes() == (tmp_path / "out_b" / rel).read_bytes()

    elapsed = time.perf_counter() - t0
    assert elapsed < 60.0, f"end-to-end run took {elapsed:.1f}s"
    _passed(12, "end-to-end synthetic experiment")
