import numpy as np
import pytest

from neutro.core.space import (
    Backend,
    GroundSpace,
    Point,
    distance,
    load_distance_matrix,
    sample_points,
    verify_crisp_metric,
)
from neutro.errors import DomainError


def test_distance_examples(line_space):
    assert distance(line_space, Point.of(0), Point.of(1)) == 1.0

    discrete = GroundSpace.discrete(4)
    assert distance(discrete, Point.at(2), Point.at(2)) == 0.0
    assert distance(discrete, Point.at(1), Point.at(2)) == 1.0

    table = GroundSpace.finite_table([[0, 1, 2.5], [1, 0, 1.5], [2.5, 1.5, 0]])
    assert distance(table, Point.at(0), Point.at(2)) == 2.5


def test_distance_rejects_foreign_points(line_space):
    table = GroundSpace.finite_table([[0, 1], [1, 0]])
    with pytest.raises(DomainError):
        distance(table, Point.at(0), Point.at(5))
    with pytest.raises(DomainError):
        distance(line_space, Point.of(0, 0), Point.of(1))


def test_point_round_trip_through_value():
    assert Point.from_value(3) == Point.at(3)
    assert Point.from_value([1.5, -2]) == Point.of(1.5, -2.0)
    with pytest.raises(DomainError):
        Point(index=1, coords=(1.0,))


def test_contains():
    table = GroundSpace.finite_table(np.zeros((3, 3)))
    assert table.contains(Point.at(2))
    assert not table.contains(Point.at(3))
    assert not table.contains(Point.of(0.0))


def test_invalid_constructions():
    with pytest.raises(DomainError):
        GroundSpace.finite_table([[0, 1, 2]])
    with pytest.raises(DomainError):
        GroundSpace.euclidean(2, [0, 0], [1])
    with pytest.raises(DomainError):
        GroundSpace.euclidean(1, [1], [1])
    with pytest.raises(DomainError):
        GroundSpace.discrete(0)


def test_sample_points_finite_and_box():
    table = GroundSpace.finite_table(1 - np.eye(3))
    pts = sample_points(table, 5, seed=7)
    assert len(pts) == 5
    assert all(p.index in (0, 1, 2) for p in pts)

    box = GroundSpace.euclidean(2, [-1, -1], [1, 1])
    pts = sample_points(box, 4, seed=7)
    assert len(pts) == 4
    assert all(-1 <= c <= 1 for p in pts for c in p.coords)


def test_sample_points_deterministic_and_prefix_stable(line_space):
    assert sample_points(line_space, 20, seed=11) == sample_points(line_space, 20, seed=11)
    assert sample_points(line_space, 50, seed=11)[:20] == sample_points(line_space, 20, seed=11)
    assert sample_points(line_space, 20, seed=12) != sample_points(line_space, 20, seed=11)


def test_verify_valid_matrix():
    report = verify_crisp_metric(GroundSpace.finite_table([[0, 1, 2], [1, 0, 1], [2, 1, 0]]))
    assert report.passed
    assert report.triples_checked == 27


def test_verify_reports_triangle_witness():
    space = GroundSpace.finite_table([[0, 5, 1], [5, 0, 1], [1, 1, 0]])
    report = verify_crisp_metric(space)
    triangle = next(o for o in report.outcomes if o.axiom == "triangle")
    assert not report.passed
    assert (triangle.witness["a"], triangle.witness["c"], triangle.witness["b"]) == (0, 1, 2)
    assert triangle.witness["d_ac"] == 5.0


def test_verify_asymmetric_and_diagonal():
    report = verify_crisp_metric(GroundSpace.finite_table([[0.5, 1], [2, 0]]))
    failed = {o.axiom for o in report.outcomes if not o.passed}
    assert {"zero_diagonal", "symmetric"} <= failed


def test_verify_euclidean_and_discrete(line_space):
    assert verify_crisp_metric(line_space, sample_count=300, seed=1).passed
    assert verify_crisp_metric(GroundSpace.discrete(5)).passed


def test_load_distance_matrix(tmp_path):
    path = tmp_path / "d.csv"
    path.write_text("0,1,2\n1,0,1\n2,1,0\n")
    space = load_distance_matrix(path)
    assert space.backend is Backend.FINITE_TABLE
    assert space.cardinality == 3
    assert distance(space, Point.at(0), Point.at(2)) == 2.0

    bad = tmp_path / "bad.csv"
    bad.write_text("0,x\n1,0\n")
    with pytest.raises(DomainError):
        load_distance_matrix(bad)


def test_ragged_matrix_is_domain_error():
    with pytest.raises(DomainError):
        GroundSpace.finite_table([[0, 1], [1]])
    with pytest.raises(DomainError):
        GroundSpace.finite_table([[0, "x"], [1, 0]])


def test_verify_rejects_pseudometric():
    report = verify_crisp_metric(GroundSpace.finite_table([[0, 0, 2], [0, 0, 2], [2, 2, 0]]))
    separation = next(o for o in report.outcomes if o.axiom == "separation")
    assert not report.passed
    assert not separation.passed
    assert (separation.witness["a"], separation.witness["b"]) == (0, 1)
