import numpy as np
import pytest

from neutro.core.contraction import (
    MapSpec,
    apply_map,
    check_ball_invariance,
    check_power_contraction,
    estimate_k,
    nc_ratios,
)
from neutro.core.nms import induced_from_crisp
from neutro.core.norms import PROBABILISTIC_SUM, PRODUCT
from neutro.core.space import GroundSpace, Point, distance, sample_points
from neutro.errors import DegeneratePairError, DomainError, PreconditionError

GRID = (0.01, 0.1, 1.0, 10.0, 100.0)


def affine(alpha, beta=0.0):
    return MapSpec.affine([[alpha]], [beta])


# ---------- apply_map ----------

def test_apply_map_examples(line_space):
    f = affine(0.5, 1.0)
    assert apply_map(line_space, f, Point.of(0)) == Point.of(1.0)
    assert apply_map(line_space, f.with_power(2), Point.of(0)) == Point.of(1.5)
    c = MapSpec.constant(Point.of(7))
    assert apply_map(line_space, c, Point.of(-3)) == Point.of(7)


def test_table_map_on_finite_space():
    space = GroundSpace.discrete(3)
    f = MapSpec.table([1, 2, 2])
    assert apply_map(space, f, Point.at(0)) == Point.at(1)
    assert apply_map(space, f.with_power(2), Point.at(0)) == Point.at(2)


def test_map_validation(line_space):
    with pytest.raises(DomainError):
        apply_map(GroundSpace.discrete(3), affine(0.5), Point.at(0))
    with pytest.raises(DomainError):
        apply_map(GroundSpace.discrete(3), MapSpec.table([0, 5, 1]), Point.at(0))
    with pytest.raises(DomainError):
        apply_map(line_space, MapSpec.affine([[1, 0], [0, 1]], [0, 0]), Point.of(0))
    with pytest.raises(DomainError):
        MapSpec.affine([[0.5]], [0.0], power=0)


# ---------- cocientes ----------

def test_nc_ratios_half_map(induced_line):
    r = nc_ratios(induced_line, affine(0.5), Point.of(0), Point.of(1), 1.0)
    assert r.r_G == pytest.approx(0.5)
    assert r.r_B == pytest.approx(2 / 3)
    assert r.r_Y == pytest.approx(2 / 3)


def test_nc_ratios_constant_map(induced_line):
    r = nc_ratios(induced_line, MapSpec.constant(Point.of(3)), Point.of(0), Point.of(1), 1.0)
    assert r == (0.0, 0.0, 0.0)


def test_nc_ratios_degenerate_pair(induced_line):
    with pytest.raises(DegeneratePairError):
        nc_ratios(induced_line, affine(0.5), Point.of(2), Point.of(2), 1.0)
    with pytest.raises(DomainError):
        nc_ratios(induced_line, affine(0.5), Point.of(0), Point.of(1), 0.0)


@pytest.mark.parametrize("alpha", [0.3, 0.5, 0.9])
def test_estimate_k_g_matches_slope(induced_line, alpha):
    report = estimate_k(induced_line, affine(alpha, 1.0), sample_count=500, seed=3, lambda_grid=GRID)
    assert report.k_G == pytest.approx(alpha, abs=1e-3)


def test_b_and_y_conditions_fail_for_half_map(induced_line):
    f = affine(0.5, 1.0)
    full = estimate_k(induced_line, f, sample_count=500, seed=3, lambda_grid=GRID)
    assert full.k_B >= 0.95
    assert full.k_Y >= 0.95
    assert full.witnesses["B"].lam == 0.01
    assert not full.is_nc

    g_only = estimate_k(induced_line, f, sample_count=500, seed=3, lambda_grid=GRID, mode="g_only")
    assert g_only.is_nc
    assert g_only.k_overall == g_only.k_G


def test_constant_map_is_nc(induced_line):
    report = estimate_k(induced_line, MapSpec.constant(Point.of(1)), sample_count=100, seed=1, lambda_grid=GRID)
    assert (report.k_G, report.k_B, report.k_Y) == (0.0, 0.0, 0.0)
    assert report.is_nc


def test_estimate_k_finite_space_visits_all_pairs():
    space = GroundSpace.finite_table([[0, 1, 2], [1, 0, 1], [2, 1, 0]])
    metric = induced_from_crisp(space, PRODUCT, PROBABILISTIC_SUM)
    report = estimate_k(metric, MapSpec.table([1, 1, 1]), sample_count=10, seed=0, lambda_grid=GRID)
    assert report.pairs == 6
    assert report.is_nc


def test_estimate_k_preconditions(induced_line):
    with pytest.raises(PreconditionError):
        estimate_k(induced_line, affine(0.5), sample_count=10, seed=0, lambda_grid=[])
    with pytest.raises(DomainError):
        estimate_k(induced_line, affine(0.5), sample_count=10, seed=0, lambda_grid=GRID, mode="strict")


# ---------- potencias ----------

@pytest.mark.parametrize("alpha", [0.5, 0.9])
def test_power_contraction(induced_line, alpha):
    report = check_power_contraction(induced_line, affine(alpha, 1.0), n_max=5, sample_count=300, seed=2,
                                     lambda_grid=GRID)
    assert report.passed
    rows = {row.n: row for row in report.rows}
    assert set(rows) == {2, 3, 4, 5}
    for n in (2, 3, 5):
        assert rows[n].measured == pytest.approx(alpha ** n, abs=1e-3)


def test_power_contraction_constant_map(induced_line):
    report = check_power_contraction(induced_line, MapSpec.constant(Point.of(0)), n_max=3, sample_count=50,
                                     seed=2, lambda_grid=GRID)
    assert report.passed
    assert all(row.measured == 0.0 for row in report.rows)


# ---------- invariancia de bolas ----------

def test_ball_invariance_half_map(line_family):
    report = check_ball_invariance(line_family, affine(0.5, 1.0), Point.of(0), eps_level=0.5, k=0.5,
                                   probe_count=500, seed=7, radius=3.0)
    assert report.r0 == pytest.approx(2.0, abs=1e-5)
    assert report.members == 500
    assert report.image_violations == []
    assert [row.n for row in report.power_rows] == [1, 2, 3]
    assert all(row.violations == 0 for row in report.power_rows)
    assert report.power_rows[1].radius == pytest.approx(0.75)
    assert report.passed


def test_ball_invariance_at_fixed_point(line_family):
    report = check_ball_invariance(line_family, affine(0.5, 1.0), Point.of(2), eps_level=0.5, k=0.5,
                                   probe_count=100, seed=7)
    assert report.r0 == 0.0
    assert report.radius == 1.0
    assert report.passed


def test_ball_invariance_rejects_small_radius(line_family):
    with pytest.raises(PreconditionError):
        check_ball_invariance(line_family, affine(0.5, 1.0), Point.of(0), eps_level=0.5, k=0.5,
                              probe_count=10, seed=7, radius=1.0)
    with pytest.raises(PreconditionError):
        check_ball_invariance(line_family, affine(0.5, 1.0), Point.of(0), eps_level=0.5, k=1.0,
                              probe_count=10, seed=7)


# ---------- aplicaciones afines en el plano ----------

SHEAR = [[0.6, 0.2], [-0.1, 0.5]]
SHEAR_OFFSET = [1.0, -2.0]


@pytest.fixture
def plane():
    return induced_from_crisp(GroundSpace.euclidean(2, [-5.0, -5.0], [5.0, 5.0]), PRODUCT, PROBABILISTIC_SUM,
                              sample_count=200, seed=0)


def test_power_equals_repeated_application(plane):
    f = MapSpec.affine(SHEAR, SHEAR_OFFSET)
    a_mat, c = np.asarray(SHEAR), np.asarray(SHEAR_OFFSET)
    for a in sample_points(plane.space, 20, seed=4):
        x = a
        for n in range(1, 5):
            x = apply_map(plane.space, f, x)
            assert apply_map(plane.space, f.with_power(n), a) == x
            closed = np.linalg.matrix_power(a_mat, n) @ np.asarray(a.coords) + sum(
                np.linalg.matrix_power(a_mat, j) @ c for j in range(n))
            assert np.allclose(x.coords, closed, rtol=0, atol=1e-12)


def test_g_ratio_matches_crisp_ratio(plane):
    f = MapSpec.affine(SHEAR, SHEAR_OFFSET)
    pts = sample_points(plane.space, 200, seed=6)
    for a, b in zip(pts[::2], pts[1::2]):
        d = distance(plane.space, a, b)
        if d < 0.05:
            continue
        crisp = distance(plane.space, apply_map(plane.space, f, a), apply_map(plane.space, f, b)) / d
        assert abs(nc_ratios(plane, f, a, b, 1.0).r_G - crisp) <= 1e-12


def test_k_g_approaches_operator_norm(plane):
    report = estimate_k(plane, MapSpec.affine(SHEAR, SHEAR_OFFSET), sample_count=2000, seed=8, lambda_grid=GRID)
    norm = np.linalg.norm(np.asarray(SHEAR), 2)
    assert report.k_G <= norm + 1e-7
    assert report.k_G == pytest.approx(norm, abs=1e-3)


def test_estimate_k_grows_with_samples(plane):
    f = MapSpec.affine(SHEAR, SHEAR_OFFSET)
    small = estimate_k(plane, f, sample_count=50, seed=10, lambda_grid=GRID)
    large = estimate_k(plane, f, sample_count=400, seed=10, lambda_grid=GRID)
    assert large.pairs >= small.pairs
    assert large.k_G >= small.k_G
    assert large.k_B >= small.k_B
    assert large.k_Y >= small.k_Y
