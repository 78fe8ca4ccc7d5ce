"""Tabla h_eps, familia cuasi-métrica, equivalencia topológica y bolas abiertas."""
from pathlib import Path
from typing import Any, Dict, List

import click

from neutro.core.nms import Construction
from neutro.core.quasimetric import OpenBall, check_ball_open, check_quasi_family, check_topology_equivalence, h_eps
from neutro.core.space import distance, sample_points
from neutro.experiment import build_family, build_metric, build_point, build_space
from neutro.schemas import ExperimentConfig
from neutro.utils.reports import write_h_table

NAME = "quasi-metric"
TABLE_FILE = "quasi-metric.table.csv"


def run(cfg: ExperimentConfig, out_dir: Path, report: Dict[str, Any]) -> bool:
    space = build_space(cfg)
    metric = build_metric(cfg, space)
    family = build_family(cfg, metric)
    quasi = cfg.quasi
    epsilons = list(cfg.sampling.epsilons)
    induced = metric.construction is Construction.INDUCED_STANDARD

    # ---------- tabla h_eps ----------
    pts = sample_points(space, 2 * quasi.pairs, cfg.seed)
    rows: List[Dict[str, Any]] = []
    try:
        for i in range(quasi.pairs):
            a, b = pts[2 * i], pts[2 * i + 1]
            d = distance(space, a, b) if induced else None
            for eps in epsilons:
                rows.append({
                    "a": a.value, "b": b.value, "epsilon": eps,
                    "h": h_eps(family, a, b, eps),
                    "h_ba": h_eps(family, b, a, eps),
                    "induced": d * (1.0 - eps) / eps if d is not None else None,
                })
    finally:
        write_h_table(out_dir / TABLE_FILE, rows)
        gaps = [abs(r["h"] - r["induced"]) for r in rows if r["induced"] is not None]
        report["table"] = {
            "file": TABLE_FILE,
            "rows": len(rows),
            "max_induced_gap": max(gaps) if gaps else None,
        }

    family_report = check_quasi_family(family, quasi.triples, cfg.seed, epsilons)
    report["family"] = family_report
    topology = check_topology_equivalence(family, quasi.pairs, cfg.seed, epsilons)
    report["topology"] = topology
    checks = [family_report.passed, topology.passed]

    if quasi.ball is not None:
        center = build_point(space, quasi.ball.center, "quasi.ball.center")
        ball = check_ball_open(metric, OpenBall(center, quasi.ball.eps, quasi.ball.lam), quasi.ball.probes, cfg.seed)
        report["ball"] = ball
        checks.append(ball.passed)

    click.echo(f"  tabla h_eps: {len(rows)} filas -> {TABLE_FILE}")
    click.echo(f"  familia:     {'OK' if family_report.passed else 'FALLA'} (asimetría máx {family_report.max_asymmetry:.3g})")
    click.echo(f"  topología:   {'OK' if topology.passed else 'FALLA'} ({topology.checks} sondas)")
    if "ball" in report:
        click.echo(f"  bola abierta: {'OK' if report['ball'].passed else 'FALLA'}")

    passed = all(checks)
    report["passed"] = passed
    return passed
