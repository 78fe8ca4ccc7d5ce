"""
Conjunto soporte F con su métrica clásica d.

Tres backends: tabla finita de distancias, espacio euclídeo (con caja de
muestreo) y espacio discreto. Los puntos son valores comparables.
"""
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, List, Optional, Sequence, Tuple, Union

import numpy as np

from neutro.errors import DomainError
from neutro.schemas import AxiomOutcome, CrispMetricReport


class Backend(str, Enum):
    FINITE_TABLE = "finite_table"
    EUCLIDEAN = "euclidean"
    DISCRETE = "discrete"


@dataclass(frozen=True)
class Point:
    index: Optional[int] = None
    coords: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        if (self.index is None) == (self.coords is None):
            raise DomainError("un Point lleva índice o coordenadas, no ambos")

    @classmethod
    def at(cls, index: int) -> "Point":
        return cls(index=int(index))

    @classmethod
    def of(cls, *coords: float) -> "Point":
        return cls(coords=tuple(float(c) for c in coords))

    @classmethod
    def from_value(cls, value: Union[int, Sequence[float]]) -> "Point":
        """Inverso de `value`: int -> índice, lista -> coordenadas."""
        if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
            return cls.at(int(value))
        return cls.of(*value)

    @property
    def value(self) -> Union[int, List[float]]:
        return self.index if self.index is not None else list(self.coords)


@dataclass(frozen=True, eq=False)
class GroundSpace:
    backend: Backend
    matrix: Optional[np.ndarray] = None
    lower: Optional[Tuple[float, ...]] = None
    upper: Optional[Tuple[float, ...]] = None
    cardinality: Optional[int] = None
    source: Optional[str] = field(default=None, compare=False)

    # --------- constructores ---------

    @classmethod
    def finite_table(cls, matrix: Any, source: Optional[str] = None) -> "GroundSpace":
        try:
            d = np.array(matrix, dtype=float)
        except (TypeError, ValueError) as e:
            raise DomainError(f"matriz de distancias no numérica o irregular: {e}")
        if d.ndim != 2 or d.shape[0] != d.shape[1] or d.shape[0] == 0:
            raise DomainError(f"la matriz de distancias debe ser n×n, recibida {d.shape}")
        if not np.all(np.isfinite(d)):
            raise DomainError("la matriz de distancias tiene valores no finitos")
        d.setflags(write=False)
        return cls(Backend.FINITE_TABLE, matrix=d, cardinality=d.shape[0], source=source)

    @classmethod
    def euclidean(cls, dimension: int, lower: Sequence[float], upper: Sequence[float]) -> "GroundSpace":
        lower, upper = tuple(float(x) for x in lower), tuple(float(x) for x in upper)
        if dimension < 1 or len(lower) != dimension or len(upper) != dimension:
            raise DomainError("la caja de muestreo no coincide con la dimensión")
        if any(lo >= hi for lo, hi in zip(lower, upper)):
            raise DomainError("la caja de muestreo necesita lower < upper en cada coordenada")
        return cls(Backend.EUCLIDEAN, lower=lower, upper=upper)

    @classmethod
    def discrete(cls, cardinality: int) -> "GroundSpace":
        if cardinality < 1:
            raise DomainError("cardinality debe ser >= 1")
        return cls(Backend.DISCRETE, cardinality=int(cardinality))

    # --------- propiedades ---------

    @property
    def is_finite(self) -> bool:
        return self.backend is not Backend.EUCLIDEAN

    @property
    def dimension(self) -> Optional[int]:
        return len(self.lower) if self.backend is Backend.EUCLIDEAN else None

    def contains(self, point: Point) -> bool:
        if self.is_finite:
            return point.index is not None and 0 <= point.index < self.cardinality
        return point.coords is not None and len(point.coords) == self.dimension

    def check(self, point: Point) -> Point:
        if not self.contains(point):
            raise DomainError(f"el punto {point.value!r} no pertenece al espacio {self.backend.value}")
        return point

    def points(self) -> List[Point]:
        if not self.is_finite:
            raise DomainError("solo los espacios finitos se pueden enumerar")
        return [Point.at(i) for i in range(self.cardinality)]

    def crisp_matrix(self) -> np.ndarray:
        if self.backend is Backend.FINITE_TABLE:
            return self.matrix
        if self.backend is Backend.DISCRETE:
            return 1.0 - np.eye(self.cardinality)
        raise DomainError("el backend euclídeo no tiene matriz")


def distance(space: GroundSpace, a: Point, b: Point) -> float:
    space.check(a)
    space.check(b)
    if space.backend is Backend.FINITE_TABLE:
        return float(space.matrix[a.index, b.index])
    if space.backend is Backend.DISCRETE:
        return 0.0 if a.index == b.index else 1.0
    return math.dist(a.coords, b.coords)


def sample_points(space: GroundSpace, count: int, seed: int) -> List[Point]:
    """
    Muestras deterministas dadas (count, seed). Las extracciones son
    secuenciales: pedir más puntos con la misma semilla conserva el prefijo.
    """
    if count < 1:
        raise DomainError("count debe ser >= 1")
    rng = np.random.default_rng(seed)
    if space.is_finite:
        return [Point.at(i) for i in rng.integers(0, space.cardinality, size=count)]
    coords = rng.uniform(space.lower, space.upper, size=(count, space.dimension))
    return [Point.of(*row) for row in coords]


def load_distance_matrix(path: Union[str, Path]) -> GroundSpace:
    """CSV con una fila por punto y distancias separadas por comas."""
    path = Path(path)
    try:
        matrix = np.loadtxt(path, delimiter=",", ndmin=2)
    except ValueError as e:
        raise DomainError(f"{path}: matriz de distancias ilegible ({e})")
    return GroundSpace.finite_table(matrix, source=str(path))


# ---------- verificación de la métrica clásica ----------

def _first(bad: np.ndarray) -> Optional[Tuple[int, ...]]:
    hits = np.argwhere(bad)
    return tuple(int(i) for i in hits[0]) if len(hits) else None


def _verify_matrix(d: np.ndarray, tol: float) -> List[AxiomOutcome]:
    n = d.shape[0]
    outcomes = []

    idx = _first(d < 0)
    outcomes.append(AxiomOutcome(
        axiom="non_negative", passed=idx is None, samples=n * n,
        witness=None if idx is None else {"a": idx[0], "b": idx[1], "d": float(d[idx])},
    ))

    idx = _first(np.diag(d) != 0)
    outcomes.append(AxiomOutcome(
        axiom="zero_diagonal", passed=idx is None, samples=n,
        witness=None if idx is None else {"a": idx[0], "d": float(d[idx[0], idx[0]])},
    ))

    # separación: d(a,b) > 0 si a != b
    idx = _first(~np.eye(n, dtype=bool) & (d == 0))
    outcomes.append(AxiomOutcome(
        axiom="separation", passed=idx is None, samples=n * (n - 1),
        witness=None if idx is None else {"a": idx[0], "b": idx[1], "d": 0.0},
    ))

    idx = _first(np.abs(d - d.T) > tol)
    outcomes.append(AxiomOutcome(
        axiom="symmetric", passed=idx is None, samples=n * n,
        witness=None if idx is None else {"a": idx[0], "b": idx[1], "d_ab": float(d[idx]), "d_ba": float(d.T[idx])},
    ))

    # viol[a, b, c]: d(a,c) > d(a,b) + d(b,c)
    viol = d[:, None, :] > d[:, :, None] + d[None, :, :] + tol
    idx = _first(viol)
    witness = None
    if idx is not None:
        a, b, c = idx
        witness = {"a": a, "b": b, "c": c, "d_ac": float(d[a, c]), "d_ab": float(d[a, b]), "d_bc": float(d[b, c])}
    outcomes.append(AxiomOutcome(axiom="triangle", passed=idx is None, samples=n ** 3, witness=witness))
    return outcomes


def verify_crisp_metric(
    space: GroundSpace,
    sample_count: int = 1000,
    seed: int = 0,
    tol: float = 1e-9,
) -> CrispMetricReport:
    """Exhaustivo en espacios finitos (n³ ternas), por muestreo en el euclídeo."""
    if space.is_finite:
        outcomes = _verify_matrix(space.crisp_matrix(), tol)
        triples = space.cardinality ** 3
    else:
        pts = sample_points(space, 3 * sample_count, seed)
        triples = sample_count
        sym_bad = tri_bad = diag_bad = sep_bad = None
        for i in range(sample_count):
            a, b, c = pts[3 * i: 3 * i + 3]
            if diag_bad is None and distance(space, a, a) != 0.0:
                diag_bad = {"a": a.value, "d": distance(space, a, a)}
            ab, ba = distance(space, a, b), distance(space, b, a)
            if sep_bad is None and a != b and ab == 0.0:
                sep_bad = {"a": a.value, "b": b.value, "d": ab}
            if sym_bad is None and abs(ab - ba) > tol:
                sym_bad = {"a": a.value, "b": b.value, "d_ab": ab, "d_ba": ba}
            ac, bc = distance(space, a, c), distance(space, b, c)
            if tri_bad is None and ac > ab + bc + tol * max(1.0, ac):
                tri_bad = {"a": a.value, "b": b.value, "c": c.value, "d_ac": ac, "d_ab": ab, "d_bc": bc}
        # math.dist no devuelve negativos
        outcomes = [
            AxiomOutcome(axiom="non_negative", passed=True, samples=sample_count),
            AxiomOutcome(axiom="zero_diagonal", passed=diag_bad is None, witness=diag_bad, samples=sample_count),
            AxiomOutcome(axiom="separation", passed=sep_bad is None, witness=sep_bad, samples=sample_count),
            AxiomOutcome(axiom="symmetric", passed=sym_bad is None, witness=sym_bad, samples=sample_count),
            AxiomOutcome(axiom="triangle", passed=tri_bad is None, witness=tri_bad, samples=sample_count),
        ]
    return CrispMetricReport(
        backend=space.backend.value,
        passed=all(o.passed for o in outcomes),
        outcomes=outcomes,
        triples_checked=triples,
    )
