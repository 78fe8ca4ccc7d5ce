"""
Iteración de Picard x_{n+1} = f(x_n) con residuo cuasi-métrico
h_eps(x_n, x_{n+1}), sonda de unicidad y certificado de convergencia.

No se comprueba la completitud del espacio: los backends finitos y el
euclídeo con la métrica inducida son completos.
"""
import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from neutro.core.contraction import MapSpec, apply_map
from neutro.core.nms import eval_triple
from neutro.core.quasimetric import QuasiMetricFamily, h_eps
from neutro.core.space import Point
from neutro.errors import DivergenceError, DomainError, InsufficientDataError, PreconditionError
from neutro.schemas import (
    CertificateReport,
    ContractionReport,
    FixedPointResult,
    InvarianceRow,
    TraceRow,
    UniquenessReport,
    UniquenessRun,
)

logger = logging.getLogger(__name__)

MIN_CERTIFIED_RESIDUALS = 5
INVARIANCE_POWERS = (2, 3)


@dataclass(frozen=True)
class SolverConfig:
    eps_level: float = 0.5
    tol: float = 1e-8
    max_iters: int = 100
    lambda_report: float = 1.0
    acknowledge_non_nc: bool = False

    def __post_init__(self):
        if not 0.0 < self.eps_level < 1.0:
            raise DomainError(f"eps_level={self.eps_level} fuera de (0,1)")
        if not self.tol > 0 or self.max_iters < 1 or not self.lambda_report > 0:
            raise DomainError("tol y lambda_report deben ser positivos y max_iters >= 1")


def _geometric_ratio(residuals: Sequence[float]) -> Optional[float]:
    """Ajuste log-lineal de los residuos positivos: exp(pendiente)."""
    pairs = [(i, r) for i, r in enumerate(residuals) if r > 0]
    if len(pairs) < 2:
        return None
    x, y = np.array(pairs).T
    slope = np.polyfit(x, np.log(y), 1)[0]
    return float(np.exp(slope))


def picard(
    family: QuasiMetricFamily,
    spec: MapSpec,
    x0: Point,
    config: SolverConfig,
    contraction: Optional[ContractionReport] = None,
) -> FixedPointResult:
    metric = family.metric
    space = metric.space
    space.check(x0)
    spec.validate_for(space)

    constants = None
    if contraction is not None:
        constants = {"k_G": contraction.k_G, "k_B": contraction.k_B, "k_Y": contraction.k_Y}
        if not contraction.is_nc:
            if not config.acknowledge_non_nc:
                raise PreconditionError(
                    f"la aplicación no es NC (k={contraction.k_overall:.6g}, modo {contraction.mode}); "
                    "activa acknowledge_non_nc para iterar igualmente"
                )
            logger.warning("iterando una aplicación no NC (k=%.6g), aceptado por config", contraction.k_overall)

    x = x0
    trace: List[TraceRow] = []
    converged = False
    for it in range(1, config.max_iters + 1):
        nxt = apply_map(space, spec, x)
        if nxt.coords is not None and not all(math.isfinite(c) for c in nxt.coords):
            raise DivergenceError(f"iterado no finito en la iteración {it}")
        residual = h_eps(family, x, nxt, config.eps_level)
        t = eval_triple(metric, x, nxt, config.lambda_report)
        trace.append(TraceRow(iteration=it, h_residual=residual, G=t.G, B=t.B, Y=t.Y))
        logger.debug("iter %d: h=%.3e", it, residual)
        x = nxt
        if residual < config.tol:
            converged = True
            break

    final = h_eps(family, x, apply_map(space, spec, x), config.eps_level)
    if converged and not final < config.tol:
        logger.warning("h(x*, f(x*))=%.3e no baja de tol; no se da por convergido", final)
        converged = False

    half = trace[len(trace) // 2:]
    result = FixedPointResult(
        point=x.value,
        eps_level=config.eps_level,
        iterations=len(trace),
        converged=converged,
        residual_trace=trace,
        rate_estimate=_geometric_ratio([r.h_residual for r in half]),
        final_residual=final,
        constants=constants,
    )
    logger.info("picard: %s en %d iteraciones, punto %s",
                "convergió" if converged else "no convergió", len(trace), x.value)
    return result


def uniqueness_probe(
    family: QuasiMetricFamily,
    spec: MapSpec,
    starts: Sequence[Point],
    config: SolverConfig,
    contraction: Optional[ContractionReport] = None,
) -> UniquenessReport:
    """Picard desde cada inicio; único si todos convergen y distan < 10*tol."""
    if len(starts) < 2:
        raise PreconditionError("la sonda de unicidad necesita al menos 2 inicios")
    results = [picard(family, spec, s, config, contraction) for s in starts]
    runs = [
        UniquenessRun(start=s.value, point=r.point, converged=r.converged, iterations=r.iterations)
        for s, r in zip(starts, results)
    ]
    threshold = 10 * config.tol
    if not all(r.converged for r in results):
        logger.warning("sonda de unicidad no concluyente: alguna ejecución no convergió")
        return UniquenessReport(status="inconclusive", runs=runs, max_pairwise=None, threshold=threshold)

    points = [Point.from_value(r.point) for r in results]
    worst = 0.0
    for i, p in enumerate(points):
        for q in points[i + 1:]:
            worst = max(worst, h_eps(family, p, q, config.eps_level), h_eps(family, q, p, config.eps_level))
    status = "unique" if worst < threshold else "non_unique"
    return UniquenessReport(status=status, runs=runs, max_pairwise=worst, threshold=threshold)


def convergence_certificate(
    result: FixedPointResult,
    k_expected: float,
    tol: float,
    family: QuasiMetricFamily,
    spec: MapSpec,
) -> CertificateReport:
    """
    Razón geométrica de los residuos en la segunda mitad de la traza frente a
    k_expected, y que f^2 y f^3 dejan quieto el punto (a menos de tol).
    """
    if not result.converged:
        raise PreconditionError("solo se certifican ejecuciones convergidas")
    residuals = [r.h_residual for r in result.residual_trace]

    skipped = any(r == 0 for r in residuals)
    ratio = None
    if not skipped:
        if len(residuals) < MIN_CERTIFIED_RESIDUALS:
            raise InsufficientDataError(
                f"hacen falta {MIN_CERTIFIED_RESIDUALS} residuos, hay {len(residuals)}"
            )
        ratio = _geometric_ratio(residuals[len(residuals) // 2:])
        if ratio is None:
            raise InsufficientDataError("no hay residuos positivos suficientes para ajustar la razón")

    space = family.metric.space
    x = Point.from_value(result.point)
    invariance = []
    for n in INVARIANCE_POWERS:
        moved = apply_map(space, spec.with_power(spec.power * n), x)
        move = h_eps(family, x, moved, result.eps_level)
        invariance.append(InvarianceRow(n=n, move=move, passed=move < tol))

    ratio_ok = skipped or abs(ratio - k_expected) <= tol
    return CertificateReport(
        passed=ratio_ok and all(row.passed for row in invariance),
        ratio=ratio,
        k_expected=k_expected,
        tol=tol,
        ratio_fit_skipped=skipped,
        invariance=invariance,
    )
