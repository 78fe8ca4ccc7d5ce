"""
Métrica neutrosófica (G, B, Y) con su par norma/conorma y el verificador
de los 18 axiomas.

G es el grado de cercanía, B el de neutralidad e Y el de no-cercanía entre
a y b a escala lambda. Para lambda <= 0 siempre (G, B, Y) = (0, 1, 1).
"""
import logging
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Callable, Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from neutro.core.norms import DEFAULT_TCONORM, DEFAULT_TNORM, TriangularConorm, TriangularNorm
from neutro.core.space import GroundSpace, Point, distance, sample_points, verify_crisp_metric
from neutro.errors import ConstructionError, PreconditionError
from neutro.schemas import AxiomOutcome, AxiomReport

logger = logging.getLogger(__name__)

CONTINUITY_DELTA = 1e-6
NON_POSITIVE_PROBES = (0.0, -1.0)

AXIOM_IDS = (
    "i", "ii", "iii", "iv", "v", "vi", "vii", "viii", "ix",
    "x", "xi", "xii", "xiii", "xiv", "xv", "xvi", "xvii", "xviii",
)


class Construction(str, Enum):
    INDUCED_STANDARD = "induced_standard"
    EXPLICIT_TABLE = "explicit_table"


class Triple(NamedTuple):
    G: float
    B: float
    Y: float


NEGATIVE_SCALE = Triple(0.0, 1.0, 1.0)


@dataclass(frozen=True, eq=False)
class ExplicitTable:
    """Valores por par y por lambda; interpolación lineal en lambda, extremos fijos."""
    lambdas: np.ndarray   # (L,)
    values: np.ndarray    # (n, n, L, 3)


@dataclass(frozen=True, eq=False)
class NeutroMetric:
    space: GroundSpace
    tnorm: TriangularNorm
    tconorm: TriangularConorm
    construction: Construction
    table: Optional[ExplicitTable] = None

    def triple(self, a: Point, b: Point, lam: float) -> Triple:
        return eval_triple(self, a, b, lam)


# ---------- construcciones ----------

def induced_from_crisp(
    space: GroundSpace,
    tnorm: TriangularNorm = DEFAULT_TNORM,
    tconorm: TriangularConorm = DEFAULT_TCONORM,
    sample_count: int = 1000,
    seed: int = 0,
) -> NeutroMetric:
    """G = λ/(λ+d), B = Y = d/(λ+d) a partir de la métrica clásica del espacio."""
    report = verify_crisp_metric(space, sample_count=sample_count, seed=seed)
    if not report.passed:
        failed = [o for o in report.outcomes if not o.passed]
        raise ConstructionError(
            "la métrica clásica no es válida: "
            + "; ".join(f"{o.axiom} {o.witness}" for o in failed)
        )
    return NeutroMetric(space, tnorm, tconorm, Construction.INDUCED_STANDARD)


def _check_lambdas(lambdas: Iterable[float]) -> np.ndarray:
    lams = np.unique(np.asarray(list(lambdas), dtype=float))
    if lams.size == 0 or lams[0] <= 0:
        raise ConstructionError("la tabla necesita lambdas positivas")
    return lams


def tabulate(
    space: GroundSpace,
    tnorm: TriangularNorm,
    tconorm: TriangularConorm,
    fn: Callable[[Point, Point, float], Sequence[float]],
    lambdas: Iterable[float],
) -> NeutroMetric:
    """Congela fn(a, b, λ) -> (G, B, Y) en una tabla explícita sobre un espacio finito."""
    if not space.is_finite:
        raise ConstructionError("las tablas explícitas solo existen en espacios finitos")
    lams = _check_lambdas(lambdas)
    n = space.cardinality
    values = np.empty((n, n, lams.size, 3))
    for i, a in enumerate(space.points()):
        for j, b in enumerate(space.points()):
            for k, lam in enumerate(lams):
                values[i, j, k] = fn(a, b, float(lam))
    values.setflags(write=False)
    lams.setflags(write=False)
    return NeutroMetric(space, tnorm, tconorm, Construction.EXPLICIT_TABLE, ExplicitTable(lams, values))


def load_table_metric(
    space: GroundSpace,
    tnorm: TriangularNorm,
    tconorm: TriangularConorm,
    path: Union[str, Path],
) -> NeutroMetric:
    """CSV con columnas a_index, b_index, lambda, G, B, Y (cabecera opcional)."""
    if not space.is_finite:
        raise ConstructionError("las tablas explícitas solo existen en espacios finitos")
    path = Path(path)
    with path.open() as fh:
        first = fh.readline()
    skip = 1 if any(ch.isalpha() for ch in first) else 0
    try:
        rows = np.loadtxt(path, delimiter=",", skiprows=skip, ndmin=2)
    except ValueError as e:
        raise ConstructionError(f"{path}: tabla ilegible ({e})")
    if rows.shape[1] != 6:
        raise ConstructionError(f"{path}: se esperaban 6 columnas, hay {rows.shape[1]}")

    n = space.cardinality
    lams = _check_lambdas(rows[:, 2])
    values = np.full((n, n, lams.size, 3), np.nan)
    for a, b, lam, g, bb, y in rows:
        i, j = int(a), int(b)
        if not (0 <= i < n and 0 <= j < n):
            raise ConstructionError(f"{path}: índice fuera de rango ({i}, {j})")
        values[i, j, np.searchsorted(lams, lam)] = (g, bb, y)
    if np.isnan(values).any():
        i, j, k, _ = np.argwhere(np.isnan(values))[0]
        raise ConstructionError(f"{path}: falta la entrada ({i}, {j}, lambda={lams[k]})")
    values.setflags(write=False)
    return NeutroMetric(space, tnorm, tconorm, Construction.EXPLICIT_TABLE, ExplicitTable(lams, values))


# ---------- evaluación ----------

def eval_triple(metric: NeutroMetric, a: Point, b: Point, lam: float) -> Triple:
    space = metric.space
    space.check(a)
    space.check(b)
    lam = float(lam)
    if lam <= 0:
        return NEGATIVE_SCALE

    if metric.construction is Construction.INDUCED_STANDARD:
        d = distance(space, a, b)
        if d == 0:
            return Triple(1.0, 0.0, 0.0)
        return Triple(lam / (lam + d), d / (lam + d), d / (lam + d))

    table = metric.table
    row = table.values[a.index, b.index]
    return Triple(*(float(np.interp(lam, table.lambdas, row[:, k])) for k in range(3)))


# ---------- verificación de axiomas ----------

class _Recorder:
    """Guarda el primer testigo por axioma y cuántas comprobaciones se hicieron."""

    def __init__(self):
        self.witness: Dict[str, Optional[dict]] = {ax: None for ax in AXIOM_IDS}
        self.count: Dict[str, int] = {ax: 0 for ax in AXIOM_IDS}

    def check(self, axiom: str, ok: bool, witness: Callable[[], dict]):
        self.count[axiom] += 1
        if not ok and self.witness[axiom] is None:
            self.witness[axiom] = witness()

    def outcomes(self) -> List[AxiomOutcome]:
        return [
            AxiomOutcome(axiom=ax, passed=self.witness[ax] is None, witness=self.witness[ax], samples=self.count[ax])
            for ax in AXIOM_IDS
        ]


def _values(t: Triple) -> dict:
    return {"G": t.G, "B": t.B, "Y": t.Y}


def verify_axioms(
    metric: NeutroMetric,
    sample_count: int,
    seed: int,
    lambda_grid: Sequence[float],
    large_lambda: float,
    tol: float = 1e-6,
) -> AxiomReport:
    """
    Comprueba los axiomas i-xviii sobre ternas (a, b, c) muestreadas y cada
    (λ, μ) de la rejilla. El sentido "solo si" de iii/viii/xiii se recorre
    exhaustivamente en espacios finitos.
    """
    grid = sorted(float(x) for x in lambda_grid)
    if not grid or grid[0] <= 0:
        raise PreconditionError("lambda_grid debe ser no vacía y positiva")
    if large_lambda < grid[-1]:
        raise PreconditionError("large_lambda debe ser >= max(lambda_grid)")
    if sample_count < 1:
        raise PreconditionError("sample_count debe ser >= 1")

    space = metric.space
    norm, conorm = metric.tnorm, metric.tconorm
    pts = sample_points(space, 3 * sample_count, seed)
    triples = [tuple(pts[3 * i: 3 * i + 3]) for i in range(sample_count)]

    cache: Dict[Tuple[Point, Point, float], Triple] = {}

    def ev(a: Point, b: Point, lam: float) -> Triple:
        key = (a, b, lam)
        if key not in cache:
            cache[key] = eval_triple(metric, a, b, lam)
        return cache[key]

    rec = _Recorder()
    lipschitz = 1.0 / grid[0]
    delta = CONTINUITY_DELTA

    # pares para el sentido "solo si" de la identidad
    if space.is_finite:
        distinct = [(a, b) for a in space.points() for b in space.points() if a != b]
    else:
        distinct = [(a, b) for a, b, _ in triples if a != b]

    for a, b, c in triples:
        w = lambda **kw: {"a": a.value, "b": b.value, "c": c.value, **kw}

        for lam in grid:
            t_ab, t_ba, t_aa = ev(a, b, lam), ev(b, a, lam), ev(a, a, lam)

            rec.check("i", all(-tol <= x <= 1 + tol for x in t_ab),
                      lambda: w(**{"lambda": lam}, values=_values(t_ab)))
            rec.check("ii", sum(t_ab) <= 3 + tol, lambda: w(**{"lambda": lam}, values=_values(t_ab)))

            # identidad, sentido "si": a = a
            rec.check("iii", abs(t_aa.G - 1.0) <= tol, lambda: {"a": a.value, "b": a.value, "lambda": lam, "values": _values(t_aa)})
            rec.check("viii", abs(t_aa.B) <= tol, lambda: {"a": a.value, "b": a.value, "lambda": lam, "values": _values(t_aa)})
            rec.check("xiii", abs(t_aa.Y) <= tol, lambda: {"a": a.value, "b": a.value, "lambda": lam, "values": _values(t_aa)})

            rec.check("iv", abs(t_ab.G - t_ba.G) <= tol, lambda: w(**{"lambda": lam}, ab=_values(t_ab), ba=_values(t_ba)))
            rec.check("ix", abs(t_ab.B - t_ba.B) <= tol, lambda: w(**{"lambda": lam}, ab=_values(t_ab), ba=_values(t_ba)))
            rec.check("xiv", abs(t_ab.Y - t_ba.Y) <= tol, lambda: w(**{"lambda": lam}, ab=_values(t_ab), ba=_values(t_ba)))

            # continuidad en lambda: variación acotada por L*delta
            t_next = ev(a, b, lam + delta)
            bound = lipschitz * delta + tol
            for ax, comp in (("vi", 0), ("xi", 1), ("xvi", 2)):
                jump = abs(t_next[comp] - t_ab[comp])
                rec.check(ax, jump <= bound, lambda: w(**{"lambda": lam}, delta=delta, variation=jump))

            for mu in grid:
                t_bc, t_ac = ev(b, c, mu), ev(a, c, lam + mu)
                g_lhs = float(norm.apply(t_ab.G, t_bc.G))
                b_lhs = float(conorm.apply(t_ab.B, t_bc.B))
                y_lhs = float(conorm.apply(t_ab.Y, t_bc.Y))
                rec.check("v", g_lhs <= t_ac.G + tol,
                          lambda: w(**{"lambda": lam}, mu=mu, lhs=g_lhs, rhs=t_ac.G))
                rec.check("x", b_lhs >= t_ac.B - tol,
                          lambda: w(**{"lambda": lam}, mu=mu, lhs=b_lhs, rhs=t_ac.B))
                rec.check("xv", y_lhs >= t_ac.Y - tol,
                          lambda: w(**{"lambda": lam}, mu=mu, lhs=y_lhs, rhs=t_ac.Y))

        far = ev(a, b, large_lambda)
        rec.check("vii", abs(far.G - 1.0) <= tol, lambda: w(**{"lambda": large_lambda}, values=_values(far)))
        rec.check("xii", far.B <= tol, lambda: w(**{"lambda": large_lambda}, values=_values(far)))
        rec.check("xvii", far.Y <= tol, lambda: w(**{"lambda": large_lambda}, values=_values(far)))

        for lam in NON_POSITIVE_PROBES + (-grid[-1],):
            t = ev(a, b, lam)
            rec.check("xviii", t == NEGATIVE_SCALE, lambda: w(**{"lambda": lam}, values=_values(t)))

    # identidad, sentido "solo si": a != b no puede dar G = 1, B = 0 o Y = 0
    for a, b in distinct:
        for lam in grid:
            t = ev(a, b, lam)
            wit = lambda: {"a": a.value, "b": b.value, "lambda": lam, "values": _values(t)}
            rec.check("iii", t.G < 1.0, wit)
            rec.check("viii", t.B > 0.0, wit)
            rec.check("xiii", t.Y > 0.0, wit)

    outcomes = rec.outcomes()
    report = AxiomReport(
        construction=metric.construction.value,
        tnorm=norm.name,
        tconorm=conorm.name,
        outcomes=outcomes,
        passed=all(o.passed for o in outcomes),
        samples=sample_count,
        lambda_grid=grid,
        large_lambda=float(large_lambda),
        tol=float(tol),
    )
    if report.passed:
        logger.info("los 18 axiomas se cumplen (%d ternas, %d lambdas)", sample_count, len(grid))
    else:
        logger.info("axiomas que fallan: %s", report.failing())
    return report
