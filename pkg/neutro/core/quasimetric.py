"""
Familia cuasi-métrica inducida h_eps y bolas abiertas O(a, eps, lambda).

    h_eps(a, b) = inf{λ > 0 : G(a,b,λ) > 1-ε, B(a,b,λ) < ε, Y(a,b,λ) < ε}

El ínfimo se calcula por bisección si el predicado resulta monótono en una
rejilla gruesa; si no, con una rejilla fina y refinado local.
"""
import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from neutro.core.nms import NeutroMetric, eval_triple
from neutro.core.norms import find_eps_star
from neutro.core.space import Point, sample_points
from neutro.errors import CeilingTooSmallError, DomainError, SearchFailureError
from neutro.schemas import BallOpenReport, QuasiFamilyReport, TopologyReport

logger = logging.getLogger(__name__)

DEFAULT_EPSILONS = (0.1, 0.25, 0.5, 0.75, 0.9)
# la rejilla gruesa baja hasta lambda_max * FLOOR_RATIO
FLOOR_RATIO = 1e-18
COARSE_POINTS = 64
FINE_POINTS = 4096
MAX_REPORTED = 20
# nube de prueba de check_ball_open: capas geométricas desde este radio
CLOUD_MIN_RADIUS = 1e-12
CLOUD_SHELLS = 48


@dataclass(frozen=True, eq=False)
class QuasiMetricFamily:
    metric: NeutroMetric
    lambda_max: float = 1e6
    tol: float = 1e-6
    max_bisections: int = 80

    def __post_init__(self):
        if not self.lambda_max > 0 or not self.tol > 0:
            raise DomainError("lambda_max y tol deben ser positivos")

    def __call__(self, a: Point, b: Point, eps: float) -> float:
        return h_eps(self, a, b, eps)


@dataclass(frozen=True)
class OpenBall:
    center: Point
    radius: float
    scale: float

    def __post_init__(self):
        if not 0.0 < self.radius < 1.0:
            raise DomainError(f"radio {self.radius} fuera de (0,1)")
        if not self.scale > 0:
            raise DomainError(f"escala {self.scale} debe ser positiva")


def _feasible(metric: NeutroMetric, a: Point, b: Point, eps: float, lam: float) -> bool:
    t = eval_triple(metric, a, b, lam)
    return t.G > 1.0 - eps and t.B < eps and t.Y < eps


def _check_eps(eps: float) -> float:
    eps = float(eps)
    if not 0.0 < eps <= 1.0:
        raise DomainError(f"eps={eps} fuera de (0,1]")
    return eps


def _is_up_monotone(flags: Sequence[bool]) -> bool:
    return not any(x and not y for x, y in zip(flags, flags[1:]))


def _bracket(grid: np.ndarray, flags: Sequence[bool]) -> Tuple[float, float]:
    k = next(i for i, f in enumerate(flags) if f)
    return (float(grid[k - 1]) if k > 0 else 0.0), float(grid[k])


def h_eps(family: QuasiMetricFamily, a: Point, b: Point, eps: float) -> float:
    eps = _check_eps(eps)
    metric = family.metric
    metric.space.check(a)
    metric.space.check(b)
    if a == b or eps == 1.0:
        return 0.0

    def pred(lam: float) -> bool:
        return _feasible(metric, a, b, eps, lam)

    if not pred(family.lambda_max):
        raise CeilingTooSmallError(
            f"P(lambda_max={family.lambda_max}) es falso para a={a.value}, b={b.value}, eps={eps}"
        )

    floor = family.lambda_max * FLOOR_RATIO
    grid = np.geomspace(floor, family.lambda_max, COARSE_POINTS)
    flags = [pred(float(x)) for x in grid]
    if not _is_up_monotone(flags):
        logger.warning("predicado no monótono para a=%s b=%s eps=%s; rejilla fina", a.value, b.value, eps)
        grid = np.geomspace(floor, family.lambda_max, FINE_POINTS)
        flags = [pred(float(x)) for x in grid]
    lo, hi = _bracket(grid, flags)

    # tolerancia absoluta por encima de 1, relativa por debajo
    for _ in range(family.max_bisections):
        if hi - lo <= family.tol * min(1.0, hi):
            break
        mid = 0.5 * (lo + hi)
        if pred(mid):
            hi = mid
        else:
            lo = mid
    logger.debug("h_eps(%s, %s; %s) en [%g, %g]", a.value, b.value, eps, lo, hi)
    return hi


def h_eps_scan(family: QuasiMetricFamily, a: Point, b: Point, eps: float, step: float = 1e-7) -> float:
    """
    Oráculo independiente de la bisección: barrido en rejillas decimales
    cada vez más finas hasta el paso `step`.
    """
    eps = _check_eps(eps)
    metric = family.metric
    if a == b or eps == 1.0:
        return 0.0
    if not _feasible(metric, a, b, eps, family.lambda_max):
        raise CeilingTooSmallError(f"P(lambda_max={family.lambda_max}) es falso")

    lo, hi = 0.0, family.lambda_max
    spacing = 10.0 ** math.floor(math.log10(family.lambda_max))
    while spacing >= step:
        n = int(math.ceil((hi - lo) / spacing))
        for i in range(1, n + 1):
            lam = min(lo + i * spacing, hi)
            if _feasible(metric, a, b, eps, lam):
                lo, hi = lo + (i - 1) * spacing, lam
                break
        spacing /= 10.0
    return hi


# ---------- comprobaciones de la familia ----------

def _sampled_triples(family: QuasiMetricFamily, sample_count: int, seed: int):
    pts = sample_points(family.metric.space, 3 * sample_count, seed)
    return [tuple(pts[3 * i: 3 * i + 3]) for i in range(sample_count)]


def check_quasi_family(
    family: QuasiMetricFamily,
    sample_count: int,
    seed: int,
    epsilons: Sequence[float] = DEFAULT_EPSILONS,
) -> QuasiFamilyReport:
    """Identidad (exhaustiva en finitos) y desigualdad triangular con holgura 2*tol."""
    metric = family.metric
    triples = _sampled_triples(family, sample_count, seed)
    if metric.space.is_finite:
        distinct = [(a, b) for a in metric.space.points() for b in metric.space.points() if a != b]
    else:
        distinct = [(a, b) for a, b, _ in triples if a != b]

    cache: Dict[Tuple[Point, Point, float], float] = {}

    def h(a, b, eps):
        key = (a, b, eps)
        if key not in cache:
            cache[key] = h_eps(family, a, b, eps)
        return cache[key]

    identity, triangle = [], []
    eps_star: Dict[str, Optional[float]] = {}
    asym = 0.0
    for eps in epsilons:
        try:
            eps_star[str(eps)] = find_eps_star(metric.tnorm, metric.tconorm, eps) if eps < 1 else None
        except SearchFailureError:
            eps_star[str(eps)] = None

        for a, b in distinct:
            if h(a, b, eps) == 0.0 or h(b, a, eps) == 0.0:
                identity.append({"a": a.value, "b": b.value, "epsilon": eps,
                                 "h_ab": h(a, b, eps), "h_ba": h(b, a, eps)})
            asym = max(asym, abs(h(a, b, eps) - h(b, a, eps)))

        for a, b, c in triples:
            if h(a, a, eps) != 0.0:
                identity.append({"a": a.value, "b": a.value, "epsilon": eps, "h_ab": h(a, a, eps)})
            lhs, rhs = h(a, c, eps), h(a, b, eps) + h(b, c, eps)
            if lhs > rhs + 2 * family.tol:
                triangle.append({"a": a.value, "b": b.value, "c": c.value, "epsilon": eps,
                                 "h_ac": lhs, "h_ab_plus_h_bc": rhs})

    return QuasiFamilyReport(
        passed=not identity and not triangle,
        epsilons=[float(e) for e in epsilons],
        eps_star=eps_star,
        identity_violations=identity[:MAX_REPORTED],
        triangle_violations=triangle[:MAX_REPORTED],
        max_asymmetry=asym,
        triples=len(triples),
    )


def check_topology_equivalence(
    family: QuasiMetricFamily,
    sample_count: int,
    seed: int,
    epsilons: Sequence[float] = DEFAULT_EPSILONS,
) -> TopologyReport:
    """
    h_eps(a,b) < λ  =>  (G > 1-ε, B < ε, Y < ε) en λ, y al revés
    (G > 1-ε, B < ε, Y < ε) en λ  =>  h_eps(a,b) <= λ + tol.
    """
    metric = family.metric
    rng = np.random.default_rng(seed)
    pts = sample_points(metric.space, 2 * sample_count, seed)
    forward, backward = [], []
    checks = 0
    for i in range(sample_count):
        a, b = pts[2 * i], pts[2 * i + 1]
        for eps in (e for e in epsilons if e < 1):
            h = h_eps(family, a, b, eps)
            scale = h if h > 0 else 1.0
            probes = [0.5 * scale, scale, 1.5 * scale, float(rng.uniform(0.0, 2.0 * scale))]
            for lam in probes:
                if lam <= 0:
                    continue
                checks += 1
                inside = _feasible(metric, a, b, eps, lam)
                row = {"a": a.value, "b": b.value, "epsilon": eps, "lambda": lam, "h": h}
                if h < lam and not inside:
                    forward.append(row)
                if inside and h > lam + family.tol:
                    backward.append(row)
    return TopologyReport(
        passed=not forward and not backward,
        checks=checks,
        forward_violations=forward[:MAX_REPORTED],
        backward_violations=backward[:MAX_REPORTED],
    )


# ---------- bolas abiertas ----------

def ball_contains(metric: NeutroMetric, ball: OpenBall, b: Point) -> bool:
    return _feasible(metric, ball.center, b, ball.radius, ball.scale)


def _neighbourhood(metric: NeutroMetric, center: Point, rng: np.random.Generator, globals_: List[Point]) -> List[Point]:
    """Puntos de prueba alrededor de `center`: todo el espacio si es finito."""
    space = metric.space
    if space.is_finite:
        return space.points()
    dim = space.dimension
    span = math.dist(space.lower, space.upper)
    cloud = list(globals_)
    x = np.asarray(center.coords)
    for r in np.geomspace(CLOUD_MIN_RADIUS, span, CLOUD_SHELLS):
        for _ in range(4):
            u = rng.normal(size=dim)
            u /= np.linalg.norm(u)
            cloud.append(Point.of(*(x + r * rng.uniform() * u)))
    return cloud


def check_ball_open(
    metric: NeutroMetric,
    ball: OpenBall,
    probe_count: int,
    seed: int,
    candidates: Optional[Sequence[Point]] = None,
    shrink_steps: int = 40,
) -> BallOpenReport:
    """
    Para cada miembro b de la bola busca (ε', λ') reduciendo ε' y λ' a la
    mitad a la vez hasta que todos los puntos de prueba de O(b, ε', λ') caen
    en la bola. En el espacio euclídeo la bola interior debe contener algún
    punto de prueba además de b.
    """
    space = metric.space
    pool = list(candidates) if candidates is not None else sample_points(space, probe_count, seed) + [ball.center]
    members: List[Point] = []
    for p in pool:
        if p not in members and ball_contains(metric, ball, p):
            members.append(p)

    globals_ = sample_points(space, probe_count, seed + 1)
    witnesses, orphans = [], []
    for i, b in enumerate(members):
        cloud = _neighbourhood(metric, b, np.random.default_rng([seed, i]), globals_)
        found = None
        for k in range(shrink_steps):
            inner = OpenBall(b, ball.radius * 0.5 ** k, ball.scale * 0.5 ** k)
            probes = [p for p in cloud if ball_contains(metric, inner, p)]
            if not space.is_finite and all(p == b for p in probes):
                # la nube ya no resuelve la bola interior
                break
            if all(ball_contains(metric, ball, p) for p in probes):
                found = {"member": b.value, "eps": inner.radius, "lam": inner.scale, "probes": len(probes)}
                break
        if found is None:
            orphans.append(b.value)
        else:
            witnesses.append(found)

    return BallOpenReport(
        passed=not orphans,
        center=ball.center.value,
        radius=ball.radius,
        scale=ball.scale,
        members_checked=len(members),
        witnesses=witnesses,
        members_without_witness=orphans,
    )
