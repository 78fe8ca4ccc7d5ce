"""
Contracciones neutrosóficas (NC).

f es NC con constante k si, para todo a, b y λ > 0,

    1/G(f(a), f(b), λ) - 1 <= k (1/G(a, b, λ) - 1)
    B(f(a), f(b), λ) <= k B(a, b, λ)
    Y(f(a), f(b), λ) <= k Y(a, b, λ)

Aquí se estiman las tres constantes por separado (k_G, k_B, k_Y) como
supremos de los cocientes sobre pares muestreados y una rejilla de λ.
"""
import dataclasses
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from neutro.core.nms import NeutroMetric, Triple, eval_triple
from neutro.core.quasimetric import QuasiMetricFamily, h_eps
from neutro.core.space import Backend, GroundSpace, Point, sample_points
from neutro.errors import DegeneratePairError, DomainError, PreconditionError
from neutro.schemas import (
    BallInvarianceReport,
    BallPowerRow,
    ContractionReport,
    ContractionWitness,
    PowerReport,
    PowerRow,
)

logger = logging.getLogger(__name__)

COMPONENTS = ("G", "B", "Y")
MAX_REPORTED = 20


class MapKind(str, Enum):
    AFFINE = "affine"
    TABLE = "table"
    CONSTANT = "constant"


@dataclass(frozen=True)
class MapSpec:
    kind: MapKind
    matrix: Optional[Tuple[Tuple[float, ...], ...]] = None
    offset: Optional[Tuple[float, ...]] = None
    mapping: Optional[Tuple[int, ...]] = None
    target: Optional[Point] = None
    power: int = 1

    def __post_init__(self):
        if self.power < 1:
            raise DomainError("power debe ser >= 1")
        needs = {
            MapKind.AFFINE: self.matrix is not None and self.offset is not None,
            MapKind.TABLE: self.mapping is not None,
            MapKind.CONSTANT: self.target is not None,
        }
        if not needs[self.kind]:
            raise DomainError(f"faltan parámetros para la aplicación {self.kind.value}")

    # --------- constructores ---------

    @classmethod
    def affine(cls, matrix, offset, power: int = 1) -> "MapSpec":
        m = np.atleast_2d(np.asarray(matrix, dtype=float))
        return cls(MapKind.AFFINE, matrix=tuple(map(tuple, m.tolist())),
                   offset=tuple(float(c) for c in offset), power=power)

    @classmethod
    def table(cls, mapping: Sequence[int], power: int = 1) -> "MapSpec":
        return cls(MapKind.TABLE, mapping=tuple(int(i) for i in mapping), power=power)

    @classmethod
    def constant(cls, target: Point, power: int = 1) -> "MapSpec":
        return cls(MapKind.CONSTANT, target=target, power=power)

    def with_power(self, power: int) -> "MapSpec":
        return dataclasses.replace(self, power=power)

    def validate_for(self, space: GroundSpace) -> None:
        if self.kind is MapKind.AFFINE:
            if space.backend is not Backend.EUCLIDEAN:
                raise DomainError("las aplicaciones afines solo existen en el espacio euclídeo")
            dim = space.dimension
            if len(self.matrix) != dim or any(len(row) != dim for row in self.matrix) or len(self.offset) != dim:
                raise DomainError(f"la aplicación afín no es {dim}-dimensional")
        elif self.kind is MapKind.TABLE:
            if not space.is_finite or len(self.mapping) != space.cardinality:
                raise DomainError("la tabla debe definir una imagen para cada punto del espacio")
            if any(not 0 <= i < space.cardinality for i in self.mapping):
                raise DomainError("la tabla envía puntos fuera del espacio")
        else:
            space.check(self.target)


def _step(spec: MapSpec, x: Point) -> Point:
    if spec.kind is MapKind.AFFINE:
        y = np.asarray(spec.matrix) @ np.asarray(x.coords) + np.asarray(spec.offset)
        return Point.of(*y)
    if spec.kind is MapKind.TABLE:
        return Point.at(spec.mapping[x.index])
    return spec.target


def apply_map(space: GroundSpace, spec: MapSpec, a: Point) -> Point:
    """f^power(a) por aplicación repetida."""
    space.check(a)
    spec.validate_for(space)
    x = a
    for _ in range(spec.power):
        x = _step(spec, x)
    return x


# ---------- cocientes NC ----------

class NCRatios(NamedTuple):
    r_G: float
    r_B: float
    r_Y: float


def _ratio(num: float, den: float) -> float:
    # 0/0 se cumple trivialmente; x/0 con x > 0 nunca
    if den == 0:
        return 0.0 if num == 0 else math.inf
    if math.isinf(den):
        return math.inf if math.isinf(num) else 0.0
    return num / den


def _gap(g: float) -> float:
    return math.inf if g == 0 else 1.0 / g - 1.0


def _ratios(before: Triple, after: Triple) -> NCRatios:
    return NCRatios(
        _ratio(_gap(after.G), _gap(before.G)),
        _ratio(after.B, before.B),
        _ratio(after.Y, before.Y),
    )


def nc_ratios(metric: NeutroMetric, spec: MapSpec, a: Point, b: Point, lam: float) -> NCRatios:
    if a == b:
        raise DegeneratePairError("a = b: los dos lados de la condición NC valen 0")
    if not lam > 0:
        raise DomainError(f"lambda={lam} debe ser positiva")
    space = metric.space
    fa, fb = apply_map(space, spec, a), apply_map(space, spec, b)
    return _ratios(eval_triple(metric, a, b, lam), eval_triple(metric, fa, fb, lam))


def _pairs(space: GroundSpace, sample_count: int, seed: int) -> List[Tuple[Point, Point]]:
    if space.is_finite:
        pts = space.points()
        return [(a, b) for a in pts for b in pts if a != b]
    pts = sample_points(space, 2 * sample_count, seed)
    return [(pts[2 * i], pts[2 * i + 1]) for i in range(sample_count) if pts[2 * i] != pts[2 * i + 1]]


def estimate_k(
    metric: NeutroMetric,
    spec: MapSpec,
    sample_count: int,
    seed: int,
    lambda_grid: Sequence[float],
    mode: str = "full",
) -> ContractionReport:
    """
    Supremo de cada cociente sobre pares distintos × rejilla de λ.
    mode="full": k_overall = max(k_G, k_B, k_Y); mode="g_only": k_overall = k_G.
    """
    if not lambda_grid:
        raise PreconditionError("lambda_grid no puede estar vacía")
    if sample_count < 1:
        raise PreconditionError("sample_count debe ser >= 1")
    if mode not in ("full", "g_only"):
        raise DomainError(f"modo desconocido: {mode}")

    space = metric.space
    grid = [float(x) for x in lambda_grid]
    pairs = _pairs(space, sample_count, seed)
    best: Dict[str, float] = {c: 0.0 for c in COMPONENTS}
    witness: Dict[str, Optional[ContractionWitness]] = {c: None for c in COMPONENTS}

    for a, b in pairs:
        fa, fb = apply_map(space, spec, a), apply_map(space, spec, b)
        for lam in grid:
            r = _ratios(eval_triple(metric, a, b, lam), eval_triple(metric, fa, fb, lam))
            for comp, value in zip(COMPONENTS, r):
                if witness[comp] is None or value > best[comp]:
                    best[comp] = value
                    witness[comp] = ContractionWitness(a=a.value, b=b.value, lam=lam, ratio=value)

    k_overall = max(best.values()) if mode == "full" else best["G"]
    report = ContractionReport(
        k_G=best["G"], k_B=best["B"], k_Y=best["Y"],
        k_overall=k_overall,
        is_nc=k_overall < 1.0,
        mode=mode,
        witnesses=witness,
        pairs=len(pairs),
        lambda_grid=grid,
    )
    logger.info("k_G=%.6g k_B=%.6g k_Y=%.6g (%s, %d pares) -> NC=%s",
                report.k_G, report.k_B, report.k_Y, mode, len(pairs), report.is_nc)
    return report


def check_power_contraction(
    metric: NeutroMetric,
    spec: MapSpec,
    n_max: int,
    sample_count: int,
    seed: int,
    lambda_grid: Sequence[float],
    tol: float = 1e-3,
) -> PowerReport:
    """k_G(f^n) <= k_G(f)^n + tol para n = 2..n_max, con los mismos pares."""
    if n_max < 2:
        raise PreconditionError("n_max debe ser >= 2")
    base = estimate_k(metric, spec, sample_count, seed, lambda_grid, mode="g_only").k_G
    rows = []
    for n in range(2, n_max + 1):
        measured = estimate_k(metric, spec.with_power(spec.power * n), sample_count, seed,
                              lambda_grid, mode="g_only").k_G
        bound = base ** n
        rows.append(PowerRow(n=n, measured=measured, bound=bound, passed=measured <= bound + tol))
    return PowerReport(base_k=base, tol=tol, rows=rows, passed=all(r.passed for r in rows))


# ---------- invariancia de bolas ----------

def _ball_members(family: QuasiMetricFamily, a: Point, eps: float, radius: float,
                  probe_count: int, seed: int) -> List[Point]:
    space = family.metric.space
    pool = space.points() if space.is_finite else sample_points(space, 20 * probe_count, seed)
    members = []
    for b in pool:
        if h_eps(family, a, b, eps) < radius:
            members.append(b)
            if len(members) == probe_count:
                break
    return members


def check_ball_invariance(
    family: QuasiMetricFamily,
    spec: MapSpec,
    a: Point,
    eps_level: float,
    k: float,
    probe_count: int,
    seed: int,
    radius: Optional[float] = None,
    n_cap: int = 3,
    tol: float = 1e-6,
) -> BallInvarianceReport:
    """
    Sobre bolas {b : h_eps(a,b) < r} con r > r0 = h_eps(a, f(a)) / (1 - k):
    f(b) se queda en la bola, y f^n(b) queda a menos de k^n r de f^n(a).
    """
    if not 0.0 < k < 1.0:
        raise PreconditionError(f"k={k} debe estar en (0,1)")
    if not 0.0 < eps_level < 1.0:
        raise DomainError(f"eps_level={eps_level} fuera de (0,1)")
    space = family.metric.space
    fa = apply_map(space, spec, a)
    r0 = h_eps(family, a, fa, eps_level) / (1.0 - k)
    if radius is None:
        radius = 1.5 * r0 if r0 > 0 else 1.0
    elif radius <= r0:
        raise PreconditionError(f"el radio {radius} debe superar r0={r0}")

    members = _ball_members(family, a, eps_level, radius, probe_count, seed)
    if not members:
        logger.warning("ningún punto muestreado cae en la bola de radio %g", radius)

    outside = []
    for b in members:
        value = h_eps(family, a, apply_map(space, spec, b), eps_level)
        if not value < radius:
            outside.append({"b": b.value, "h_a_fb": value})

    power_rows = []
    for n in range(1, n_cap + 1):
        fn = spec.with_power(spec.power * n)
        fn_a = apply_map(space, fn, a)
        bound = k ** n * radius
        violations, worst = 0, -math.inf
        for b in members:
            value = h_eps(family, fn_a, apply_map(space, fn, b), eps_level)
            worst = max(worst, value - bound)
            if not value < bound + tol:
                violations += 1
        power_rows.append(BallPowerRow(n=n, radius=bound, violations=violations,
                                       worst=worst if members else 0.0))

    return BallInvarianceReport(
        center=a.value,
        eps_level=eps_level,
        k=k,
        r0=r0,
        radius=radius,
        members=len(members),
        image_violations=outside[:MAX_REPORTED],
        power_rows=power_rows,
        passed=not outside and all(row.violations == 0 for row in power_rows),
    )
