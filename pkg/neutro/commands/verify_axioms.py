"""Los 18 axiomas sobre la métrica configurada (inducida o tabulada)."""
from pathlib import Path
from typing import Any, Dict

import click

from neutro.core.nms import verify_axioms
from neutro.core.space import verify_crisp_metric
from neutro.experiment import build_metric, build_space
from neutro.schemas import ExperimentConfig

NAME = "verify-axioms"


def run(cfg: ExperimentConfig, out_dir: Path, report: Dict[str, Any]) -> bool:
    sampling = cfg.sampling
    space = build_space(cfg)
    if cfg.metric.construction == "induced":
        # queda en el informe aunque la construcción falle después
        report["crisp"] = verify_crisp_metric(space, sample_count=sampling.samples, seed=cfg.seed)
    metric = build_metric(cfg, space)

    result = verify_axioms(
        metric,
        sample_count=sampling.samples,
        seed=cfg.seed,
        lambda_grid=sampling.lambda_grid,
        large_lambda=sampling.large_lambda,
        tol=sampling.tol,
    )
    report["axioms"] = result
    report["passed"] = result.passed

    for o in result.outcomes:
        click.echo(f"  {o.axiom:>5}  {'OK' if o.passed else 'FALLA'}" + ("" if o.passed else f"  testigo: {o.witness}"))
    return result.passed
