import json
from pathlib import Path

import numpy as np
import pytest

from neutro.core.nms import induced_from_crisp, tabulate
from neutro.core.norms import PROBABILISTIC_SUM, PRODUCT
from neutro.core.quasimetric import QuasiMetricFamily
from neutro.core.space import GroundSpace

SMALL_GRID = (0.5, 1.0, 2.0)
LARGE_LAMBDA = 1e8
LINE_POINTS = (0.0, 1.0, 3.0, 6.0)


def standard(d: float, lam: float):
    if d == 0:
        return 1.0, 0.0, 0.0
    return lam / (lam + d), d / (lam + d), d / (lam + d)


def table_lambdas(grid=SMALL_GRID, large=LARGE_LAMBDA):
    """Rejilla, todas las sumas λ+μ y el λ grande: los valores que visita verify_axioms."""
    return sorted(set(grid) | {l + m for l in grid for m in grid} | {large})


def line_table_space(xs):
    xs = np.asarray(xs, dtype=float)
    return GroundSpace.finite_table(np.abs(xs[:, None] - xs[None, :]))


def table_metric(xs, b_distance):
    """G e Y de la recta; B inducida por b_distance(i, j) (puede no ser métrica)."""
    space = line_table_space(xs)

    def fn(a, b, lam):
        d = abs(xs[a.index] - xs[b.index])
        g, _, y = standard(d, lam)
        e = b_distance(a.index, b.index)
        _, bb, _ = standard(e, lam)
        return g, bb, y

    return tabulate(space, PRODUCT, PROBABILISTIC_SUM, fn, table_lambdas())


@pytest.fixture
def line_space():
    return GroundSpace.euclidean(1, [-10.0], [10.0])


@pytest.fixture
def induced_line(line_space):
    return induced_from_crisp(line_space, PRODUCT, PROBABILISTIC_SUM, sample_count=200, seed=0)


@pytest.fixture
def line_family(induced_line):
    return QuasiMetricFamily(induced_line)


@pytest.fixture
def broken_viii():
    # pseudométrica: 0 y 1 quedan a distancia 0 para B
    g = (0.0, 0.0, 3.0, 6.0)
    return table_metric(LINE_POINTS, lambda i, j: abs(g[i] - g[j]))


@pytest.fixture
def broken_ix():
    xs = LINE_POINTS
    return table_metric(xs, lambda i, j: abs(xs[i] - xs[j]) + 0.5 * (xs[j] - xs[i]))


@pytest.fixture
def broken_x():
    e = ((0.0, 1.0, 10.0), (1.0, 0.0, 1.0), (10.0, 1.0, 0.0))
    return table_metric((0.0, 1.0, 2.0), lambda i, j: e[i][j])


@pytest.fixture
def write_config(tmp_path):
    def _write(data, name="experiment.json"):
        path = Path(tmp_path) / name
        path.write_text(json.dumps(data, indent=2), encoding="utf-8")
        return path
    return _write
