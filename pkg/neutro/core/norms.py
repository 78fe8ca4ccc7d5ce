"""
Normas y conormas triangulares continuas (CTN / CTC).

Todas las operaciones trabajan sobre arrays de numpy para que las
comprobaciones de axiomas por muestreo sean vectoriales; `tnorm_eval` y
`tconorm_eval` son la versión escalar con validación de dominio.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, List, Tuple, Union

import numpy as np

from neutro.errors import DomainError, PreconditionError, SearchFailureError
from neutro.schemas import AxiomOutcome, NormAxiomReport

logger = logging.getLogger(__name__)

DEFAULT_GRID_STEP = 1e-4
CONTINUITY_DELTA = 1e-6
CONTINUITY_LIPSCHITZ = 2.0


class NormKind(str, Enum):
    MINIMUM = "minimum"
    PRODUCT = "product"
    LUKASIEWICZ = "lukasiewicz"


class ConormKind(str, Enum):
    MAXIMUM = "maximum"
    PROBABILISTIC_SUM = "probabilistic_sum"
    BOUNDED_SUM = "bounded_sum"


_NORM_FORMULAS: Dict[NormKind, Callable] = {
    NormKind.MINIMUM: np.minimum,
    NormKind.PRODUCT: np.multiply,
    NormKind.LUKASIEWICZ: lambda s, t: np.maximum(0.0, s + t - 1.0),
}

_CONORM_FORMULAS: Dict[ConormKind, Callable] = {
    ConormKind.MAXIMUM: np.maximum,
    ConormKind.PROBABILISTIC_SUM: lambda s, t: s + t - s * t,
    ConormKind.BOUNDED_SUM: lambda s, t: np.minimum(1.0, s + t),
}


@dataclass(frozen=True)
class TriangularNorm:
    kind: NormKind
    name: str

    identity = 1.0

    def apply(self, s, t):
        return _NORM_FORMULAS[self.kind](s, t)

    def __call__(self, s: float, t: float) -> float:
        return tnorm_eval(self, s, t)


@dataclass(frozen=True)
class TriangularConorm:
    kind: ConormKind
    name: str

    identity = 0.0

    def apply(self, s, t):
        return _CONORM_FORMULAS[self.kind](s, t)

    def __call__(self, s: float, t: float) -> float:
        return tconorm_eval(self, s, t)


@dataclass(frozen=True)
class BinaryOperation:
    """
    Operación cualquiera sobre [0,1] con su elemento neutro.
    Solo sirve para auditar operaciones candidatas con check_norm_axioms.
    """
    name: str
    func: Callable
    identity: float

    def apply(self, s, t):
        return np.asarray(self.func(s, t), dtype=float)


Operation = Union[TriangularNorm, TriangularConorm, BinaryOperation]

# ---------- built-ins ----------

MINIMUM = TriangularNorm(NormKind.MINIMUM, "min")
PRODUCT = TriangularNorm(NormKind.PRODUCT, "product")
LUKASIEWICZ = TriangularNorm(NormKind.LUKASIEWICZ, "lukasiewicz")

MAXIMUM = TriangularConorm(ConormKind.MAXIMUM, "max")
PROBABILISTIC_SUM = TriangularConorm(ConormKind.PROBABILISTIC_SUM, "probsum")
BOUNDED_SUM = TriangularConorm(ConormKind.BOUNDED_SUM, "boundedsum")

TNORMS: Dict[str, TriangularNorm] = {n.name: n for n in (MINIMUM, PRODUCT, LUKASIEWICZ)}
TCONORMS: Dict[str, TriangularConorm] = {c.name: c for c in (MAXIMUM, PROBABILISTIC_SUM, BOUNDED_SUM)}

DEFAULT_TNORM = PRODUCT
DEFAULT_TCONORM = PROBABILISTIC_SUM


def resolve_tnorm(identifier: str) -> TriangularNorm:
    try:
        return TNORMS[identifier]
    except KeyError:
        raise DomainError(f"t-norma desconocida: {identifier!r} (opciones: {sorted(TNORMS)})")


def resolve_tconorm(identifier: str) -> TriangularConorm:
    try:
        return TCONORMS[identifier]
    except KeyError:
        raise DomainError(f"t-conorma desconocida: {identifier!r} (opciones: {sorted(TCONORMS)})")


# ---------- evaluación ----------

def _check_unit(name: str, value: float) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise DomainError(f"{name}={value} fuera de [0,1]")
    return value


def tnorm_eval(norm: TriangularNorm, s: float, t: float) -> float:
    s, t = _check_unit("s", s), _check_unit("t", t)
    return float(norm.apply(np.float64(s), np.float64(t)))


def tconorm_eval(conorm: TriangularConorm, s: float, t: float) -> float:
    s, t = _check_unit("s", s), _check_unit("t", t)
    return float(conorm.apply(np.float64(s), np.float64(t)))


# ---------- comprobación de axiomas ----------

def _outcome(axiom: str, bad: np.ndarray, witness_of: Callable[[int], dict], samples: int) -> AxiomOutcome:
    hits = np.flatnonzero(bad)
    if hits.size == 0:
        return AxiomOutcome(axiom=axiom, passed=True, samples=samples)
    return AxiomOutcome(axiom=axiom, passed=False, witness=witness_of(int(hits[0])), samples=samples)


def check_norm_axioms(
    op: Operation,
    sample_count: int,
    seed: int,
    tol: float = 1e-12,
) -> NormAxiomReport:
    """
    Comprueba por muestreo neutro, rango, monotonía, conmutatividad,
    asociatividad y continuidad (variación acotada por L*delta).
    El tipo (norma o conorma) lo decide el elemento neutro de `op`.
    """
    if sample_count < 1:
        raise PreconditionError("sample_count debe ser >= 1")

    rng = np.random.default_rng(seed)
    s, t, u, v = rng.random((4, sample_count))
    e = np.full(sample_count, float(op.identity))
    f = op.apply

    def wit(**arrays):
        return lambda i: {k: float(a[i]) for k, a in arrays.items()}

    outcomes: List[AxiomOutcome] = []

    se = f(s, e)
    outcomes.append(_outcome("boundary", np.abs(se - s) > tol, wit(s=s, identity=e, value=se), sample_count))

    st = f(s, t)
    outcomes.append(_outcome("range", (st < -tol) | (st > 1.0 + tol), wit(s=s, t=t, value=st), sample_count))

    lo1, hi1 = np.minimum(s, u), np.maximum(s, u)
    lo2, hi2 = np.minimum(t, v), np.maximum(t, v)
    low, high = f(lo1, lo2), f(hi1, hi2)
    outcomes.append(_outcome(
        "monotone", low > high + tol,
        wit(s=lo1, t=lo2, u=hi1, v=hi2, low=low, high=high), sample_count,
    ))

    ts = f(t, s)
    outcomes.append(_outcome("commutative", np.abs(st - ts) > tol, wit(s=s, t=t, st=st, ts=ts), sample_count))

    left, right = f(st, u), f(s, f(t, u))
    outcomes.append(_outcome(
        "associative", np.abs(left - right) > tol,
        wit(s=s, t=t, u=u, left=left, right=right), sample_count,
    ))

    delta = CONTINUITY_DELTA
    bound = CONTINUITY_LIPSCHITZ * delta + tol
    sc, tc = np.minimum(s, 1.0 - delta), np.minimum(t, 1.0 - delta)
    jump_s = np.abs(f(sc + delta, tc) - f(sc, tc))
    jump_t = np.abs(f(sc, tc + delta) - f(sc, tc))
    jump = np.maximum(jump_s, jump_t)
    outcomes.append(_outcome(
        "continuity", jump > bound,
        wit(s=sc, t=tc, variation=jump), sample_count,
    ))

    passed = all(o.passed for o in outcomes)
    if not passed:
        failed = [o.axiom for o in outcomes if not o.passed]
        logger.info("operación %s falla axiomas: %s", op.name, failed)
    return NormAxiomReport(operation=op.name, identity=float(op.identity), outcomes=outcomes, passed=passed)


# ---------- solvers de la observación 1 ----------

def _unit_grid(grid_step: float) -> np.ndarray:
    if not grid_step > 0:
        raise DomainError("grid_step debe ser positivo")
    n = int(round(1.0 / grid_step))
    if n < 1:
        raise DomainError(f"grid_step={grid_step} demasiado grande")
    # i/n en vez de i*step: los puntos 0.5, 0.4... salen exactos
    return np.arange(n + 1) / n


def solve_norm_lower(norm: TriangularNorm, s: float, t: float, grid_step: float = DEFAULT_GRID_STEP) -> float:
    """Menor u de la rejilla con s ∘ u >= t (requiere s > t)."""
    s, t = _check_unit("s", s), _check_unit("t", t)
    if not s > t:
        raise PreconditionError(f"se requiere s > t (s={s}, t={t})")
    grid = _unit_grid(grid_step)
    ok = np.flatnonzero(norm.apply(np.full_like(grid, s), grid) >= t)
    if ok.size == 0:
        raise SearchFailureError(f"{norm.name}: ningún u con s∘u >= t (¿no es CTN?)")
    return float(grid[ok[0]])


def solve_conorm_upper(conorm: TriangularConorm, s: float, t: float, grid_step: float = DEFAULT_GRID_STEP) -> float:
    """Mayor v de la rejilla con t ∙ v <= s (requiere s > t)."""
    s, t = _check_unit("s", s), _check_unit("t", t)
    if not s > t:
        raise PreconditionError(f"se requiere s > t (s={s}, t={t})")
    grid = _unit_grid(grid_step)
    ok = np.flatnonzero(conorm.apply(np.full_like(grid, t), grid) <= s)
    if ok.size == 0:
        raise SearchFailureError(f"{conorm.name}: ningún v con t∙v <= s (¿no es CTC?)")
    return float(grid[ok[-1]])


def solve_diagonal(
    norm: TriangularNorm,
    conorm: TriangularConorm,
    s: float,
    grid_step: float = DEFAULT_GRID_STEP,
) -> Tuple[float, float]:
    """Menor t con t∘t >= s y mayor p con p∙p <= s."""
    s = float(s)
    if not 0.0 < s < 1.0:
        raise PreconditionError(f"se requiere s en (0,1), s={s}")
    grid = _unit_grid(grid_step)
    upper = np.flatnonzero(norm.apply(grid, grid) >= s)
    lower = np.flatnonzero(conorm.apply(grid, grid) <= s)
    if upper.size == 0 or lower.size == 0:
        raise SearchFailureError(f"sin solución diagonal en la rejilla para s={s}")
    return float(grid[upper[0]]), float(grid[lower[-1]])


def find_eps_star(
    norm: TriangularNorm,
    conorm: TriangularConorm,
    eps: float,
    grid_step: float = DEFAULT_GRID_STEP,
) -> float:
    """
    Mayor eps* en (0, eps) con (1-eps*)∘(1-eps*) > 1-eps y eps*∙eps* < eps.
    Es el testigo que usa la desigualdad triangular de h_eps.
    """
    eps = float(eps)
    if not 0.0 < eps <= 1.0:
        raise DomainError(f"eps={eps} fuera de (0,1]")
    grid = _unit_grid(grid_step)
    grid = grid[(grid > 0.0) & (grid < eps)]
    ok = np.flatnonzero(
        (norm.apply(1.0 - grid, 1.0 - grid) > 1.0 - eps) & (conorm.apply(grid, grid) < eps)
    )
    if ok.size == 0:
        raise SearchFailureError(f"sin eps* para eps={eps}")
    return float(grid[ok[-1]])
