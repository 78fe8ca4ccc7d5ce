"""Axiomas de las t-normas y t-conormas integradas."""
from pathlib import Path
from typing import Any, Dict

import click

from neutro.core.norms import TCONORMS, TNORMS, check_norm_axioms, find_eps_star, resolve_tconorm, resolve_tnorm
from neutro.errors import SearchFailureError
from neutro.schemas import ExperimentConfig

NAME = "norms-check"


def run(cfg: ExperimentConfig, out_dir: Path, report: Dict[str, Any]) -> bool:
    """Axiomas de las seis operaciones integradas y tabla eps* del par configurado."""
    samples, tol = cfg.sampling.samples, cfg.sampling.tol
    results = []
    for op in list(TNORMS.values()) + list(TCONORMS.values()):
        result = check_norm_axioms(op, samples, cfg.seed, tol=tol)
        results.append(result)
        failed = [o.axiom for o in result.outcomes if not o.passed]
        click.echo(f"  {op.name:<12} {'OK' if result.passed else 'FALLA ' + ', '.join(failed)}")
    report["operations"] = results

    tnorm, tconorm = resolve_tnorm(cfg.norms.tnorm), resolve_tconorm(cfg.norms.tconorm)
    eps_star = {}
    for eps in cfg.sampling.epsilons:
        try:
            eps_star[str(eps)] = find_eps_star(tnorm, tconorm, eps) if eps < 1 else None
        except SearchFailureError:
            eps_star[str(eps)] = None
    report["pair"] = {"tnorm": tnorm.name, "tconorm": tconorm.name, "eps_star": eps_star}

    passed = all(r.passed for r in results)
    report["passed"] = passed
    return passed
