"""
Carga de la config JSON de un experimento y construcción de los objetos
del núcleo (espacio, métrica, aplicación, puntos) a partir de ella.
"""
import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

from pydantic import ValidationError

from neutro.core.contraction import MapSpec
from neutro.core.nms import NeutroMetric, induced_from_crisp, load_table_metric
from neutro.core.norms import resolve_tconorm, resolve_tnorm
from neutro.core.quasimetric import QuasiMetricFamily
from neutro.core.solver import SolverConfig
from neutro.core.space import GroundSpace, Point, load_distance_matrix
from neutro.errors import ConfigError, DomainError
from neutro.schemas import (
    DiscreteSpaceSpec,
    EuclideanSpaceSpec,
    ExperimentConfig,
    FiniteSpaceSpec,
    PointValue,
)

logger = logging.getLogger(__name__)

# a qué tolerancia apunta --tol en cada comando
TOL_TARGET = {
    "norms-check": ("sampling", "tol"),
    "verify-axioms": ("sampling", "tol"),
    "quasi-metric": ("quasi", "tol"),
    "check-contraction": ("contraction", "tol"),
    "solve": ("solver", "tol"),
}


def _line_of(text: str, loc: Sequence[Any]) -> Optional[int]:
    """Línea (1-based) donde aparece la última clave de `loc`, buscando en orden."""
    lines = text.splitlines()
    current, found = 0, False
    for key in loc:
        if not isinstance(key, str):
            continue
        pattern = f'"{key}"'
        for i in range(current, len(lines)):
            if pattern in lines[i]:
                current, found = i, True
                break
    return current + 1 if found else None


def _apply_overrides(data: Dict[str, Any], command: str, overrides: Dict[str, Any]) -> None:
    if overrides.get("seed") is not None:
        data["seed"] = overrides["seed"]
    if overrides.get("samples") is not None:
        data.setdefault("sampling", {})["samples"] = overrides["samples"]
        if command == "quasi-metric":
            quasi = data.setdefault("quasi", {})
            if isinstance(quasi, dict):
                quasi["pairs"] = quasi["triples"] = overrides["samples"]
    if overrides.get("tol") is not None:
        section, key = TOL_TARGET[command]
        target = data.setdefault(section, {})
        if isinstance(target, dict):
            target[key] = overrides["tol"]
    if overrides.get("output") is not None:
        data.setdefault("output", {})["directory"] = str(overrides["output"])
    if overrides.get("format") is not None:
        data.setdefault("output", {})["trace_format"] = overrides["format"]


def _resolve_csv(path: Optional[Path], base: Path, text: str, loc: Sequence[Any]) -> Optional[Path]:
    if path is None:
        return None
    resolved = path if path.is_absolute() else (base / path)
    if not resolved.is_file():
        raise ConfigError(f"no existe el CSV {path}", line=_line_of(text, loc))
    return resolved.resolve()


def load_config(path, command: str, **overrides) -> ExperimentConfig:
    """
    Lee y valida la config. Los errores salen como ConfigError con la línea
    del JSON donde está el problema.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"no se puede leer {path}: {e}")

    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"JSON inválido: {e.msg}", line=e.lineno)
    if not isinstance(data, dict):
        raise ConfigError("la config debe ser un objeto JSON", line=1)

    _apply_overrides(data, command, overrides)
    try:
        cfg = ExperimentConfig.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(x) for x in first["loc"])
        raise ConfigError(f"{where}: {first['msg']}", line=_line_of(text, first["loc"]))

    base = path.parent
    if isinstance(cfg.space, FiniteSpaceSpec):
        cfg.space.csv = _resolve_csv(cfg.space.csv, base, text, ("space", "csv"))
    cfg.metric.csv = _resolve_csv(cfg.metric.csv, base, text, ("metric", "csv"))
    logger.debug("config %s cargada (seed=%d)", path, cfg.seed)
    return cfg


# ---------- builders ----------

def build_space(cfg: ExperimentConfig) -> GroundSpace:
    spec = cfg.space
    try:
        if isinstance(spec, FiniteSpaceSpec):
            if spec.csv is not None:
                return load_distance_matrix(spec.csv)
            return GroundSpace.finite_table(spec.matrix)
        if isinstance(spec, EuclideanSpaceSpec):
            return GroundSpace.euclidean(spec.dimension, spec.lower, spec.upper)
        if isinstance(spec, DiscreteSpaceSpec):
            return GroundSpace.discrete(spec.cardinality)
    except DomainError as e:
        raise ConfigError(f"space: {e}")
    raise ConfigError(f"backend desconocido: {spec!r}")


def build_metric(cfg: ExperimentConfig, space: GroundSpace) -> NeutroMetric:
    """ConstructionError (métrica clásica inválida, tabla incompleta) se propaga."""
    tnorm = resolve_tnorm(cfg.norms.tnorm)
    tconorm = resolve_tconorm(cfg.norms.tconorm)
    if cfg.metric.construction == "table":
        return load_table_metric(space, tnorm, tconorm, cfg.metric.csv)
    return induced_from_crisp(space, tnorm, tconorm, sample_count=cfg.sampling.samples, seed=cfg.seed)


def build_family(cfg: ExperimentConfig, metric: NeutroMetric) -> QuasiMetricFamily:
    return QuasiMetricFamily(metric, lambda_max=cfg.quasi.lambda_max, tol=cfg.quasi.tol)


def build_point(space: GroundSpace, value: PointValue, where: str) -> Point:
    try:
        return space.check(Point.from_value(value))
    except DomainError as e:
        raise ConfigError(f"{where}: {e}")


def build_map(cfg: ExperimentConfig, space: GroundSpace) -> MapSpec:
    m = cfg.map
    if m is None:
        raise ConfigError("este comando necesita una sección 'map'")
    try:
        if m.kind == "affine":
            if m.matrix is None or m.offset is None:
                raise DomainError("una aplicación afín necesita 'matrix' y 'offset'")
            spec = MapSpec.affine(m.matrix, m.offset, power=m.power)
        elif m.kind == "table":
            if m.mapping is None:
                raise DomainError("una aplicación tabulada necesita 'mapping'")
            spec = MapSpec.table(m.mapping, power=m.power)
        else:
            if m.target is None:
                raise DomainError("una aplicación constante necesita 'target'")
            spec = MapSpec.constant(Point.from_value(m.target), power=m.power)
        spec.validate_for(space)
    except DomainError as e:
        raise ConfigError(f"map: {e}")
    return spec


def build_solver_config(cfg: ExperimentConfig) -> SolverConfig:
    s = cfg.solver
    if s is None:
        raise ConfigError("este comando necesita una sección 'solver'")
    return SolverConfig(
        eps_level=s.eps_level,
        tol=s.tol,
        max_iters=s.max_iters,
        lambda_report=s.lambda_report,
        acknowledge_non_nc=s.acknowledge_non_nc,
    )
