"""Constantes NC, potencias f^n e invariancia de bolas."""
from pathlib import Path
from typing import Any, Dict

import click

from neutro.core.contraction import check_ball_invariance, check_power_contraction, estimate_k
from neutro.experiment import build_family, build_map, build_metric, build_point, build_space
from neutro.schemas import ExperimentConfig

NAME = "check-contraction"


def run(cfg: ExperimentConfig, out_dir: Path, report: Dict[str, Any]) -> bool:
    space = build_space(cfg)
    spec = build_map(cfg, space)
    metric = build_metric(cfg, space)
    sampling, settings = cfg.sampling, cfg.contraction

    k = estimate_k(metric, spec, sampling.samples, cfg.seed, sampling.lambda_grid, mode=settings.mode)
    report["contraction"] = k
    click.echo(f"  k_G={k.k_G:.6g}  k_B={k.k_B:.6g}  k_Y={k.k_Y:.6g}  ({k.mode}) -> NC={k.is_nc}")

    power = check_power_contraction(metric, spec, settings.n_max, sampling.samples, cfg.seed,
                                    sampling.lambda_grid, tol=settings.tol)
    report["power"] = power
    for row in power.rows:
        click.echo(f"  n={row.n}: k_G(f^n)={row.measured:.6g} <= {row.bound:.6g}  {'OK' if row.passed else 'FALLA'}")
    checks = [k.is_nc, power.passed]

    inv = settings.invariance
    if inv is not None:
        family = build_family(cfg, metric)
        center = build_point(space, inv.center, "contraction.invariance.center")
        balls = check_ball_invariance(family, spec, center, inv.eps_level, inv.k, inv.probes, cfg.seed,
                                      radius=inv.radius, n_cap=inv.n_cap)
        report["invariance"] = balls
        checks.append(balls.passed)
        click.echo(f"  bolas: r0={balls.r0:.6g} r={balls.radius:.6g} miembros={balls.members} "
                   f"{'OK' if balls.passed else 'FALLA'}")

    passed = all(checks)
    report["passed"] = passed
    return passed
