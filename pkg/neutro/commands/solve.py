"""Punto fijo por Picard, sonda de unicidad y certificado de convergencia."""
from pathlib import Path
from typing import Any, Dict, List

import click
import numpy as np

from neutro.core.contraction import estimate_k
from neutro.core.solver import convergence_certificate, picard, uniqueness_probe
from neutro.core.space import GroundSpace, Point
from neutro.experiment import build_family, build_map, build_metric, build_point, build_solver_config, build_space
from neutro.schemas import ExperimentConfig, SolverSpec
from neutro.utils.reports import write_trace_csv, write_trace_json

NAME = "solve"


def _seeded_starts(space: GroundSpace, solver: SolverSpec, seed: int) -> List[Point]:
    rng = np.random.default_rng(seed)
    if space.is_finite:
        return [Point.at(i) for i in rng.integers(0, space.cardinality, size=solver.start_count)]
    coords = rng.uniform(solver.start_low, solver.start_high, size=(solver.start_count, space.dimension))
    return [Point.of(*row) for row in coords]


def run(cfg: ExperimentConfig, out_dir: Path, report: Dict[str, Any]) -> bool:
    config = build_solver_config(cfg)
    solver = cfg.solver
    space = build_space(cfg)
    spec = build_map(cfg, space)
    x0 = build_point(space, solver.x0, "solver.x0")
    if solver.starts is not None:
        starts = [build_point(space, v, "solver.starts") for v in solver.starts]
    else:
        starts = _seeded_starts(space, solver, cfg.seed)
    metric = build_metric(cfg, space)
    family = build_family(cfg, metric)

    contraction = estimate_k(metric, spec, cfg.sampling.samples, cfg.seed, cfg.sampling.lambda_grid,
                             mode=cfg.contraction.mode)
    report["contraction"] = contraction

    result = picard(family, spec, x0, config, contraction)
    report["result"] = result
    if cfg.output.trace_format == "csv":
        trace_file = write_trace_csv(out_dir / "solve.trace.csv", result.residual_trace)
    else:
        trace_file = write_trace_json(out_dir / "solve.trace.json", result.residual_trace)
    report["trace_file"] = trace_file.name
    click.echo(f"  punto={result.point}  iteraciones={result.iterations}  convergió={result.converged}")

    uniqueness = uniqueness_probe(family, spec, starts, config, contraction)
    report["uniqueness"] = uniqueness
    click.echo(f"  unicidad: {uniqueness.status} ({len(uniqueness.runs)} inicios)")
    checks = [result.converged, uniqueness.status == "unique"]

    if solver.k_expected is not None and result.converged:
        cert = convergence_certificate(result, solver.k_expected, solver.certificate_tol, family, spec)
        report["certificate"] = cert
        checks.append(cert.passed)
        ratio = "omitida" if cert.ratio is None else f"{cert.ratio:.4f}"
        click.echo(f"  certificado: razón {ratio} vs k={cert.k_expected}  {'OK' if cert.passed else 'FALLA'}")

    passed = all(checks)
    report["passed"] = passed
    return passed
