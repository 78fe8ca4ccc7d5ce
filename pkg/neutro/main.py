import logging
import sys
from pathlib import Path

import click

from neutro import settings
from neutro.commands import check_contraction, norms_check, quasi_metric, solve, verify_axioms
from neutro.errors import ConfigError, NeutroError
from neutro.experiment import load_config
from neutro.utils.reports import write_report

logger = logging.getLogger(__name__)

# ---------------------------
# CÓDIGOS DE SALIDA
# ---------------------------
EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2
EXIT_RUNTIME = 3

COMMANDS = (norms_check, verify_axioms, quasi_metric, check_contraction, solve)


@click.group(name="neutro")
def cli():
    """Espacios métricos neutrosóficos: axiomas, cuasi-métricas, contracciones y puntos fijos."""


def _execute(command: str, module, config_path, seed, samples, tol, output, fmt, log_level):
    settings.configure_logging(log_level)
    try:
        cfg = load_config(config_path, command, seed=seed, samples=samples, tol=tol, output=output, format=fmt)
    except ConfigError as e:
        click.echo(f"[ERROR] {config_path}: {e}", err=True)
        sys.exit(EXIT_CONFIG)

    out_dir = Path(cfg.output.directory or settings.OUTPUT_DIR)
    out_dir.mkdir(parents=True, exist_ok=True)
    echo = cfg.model_dump(mode="json")
    report = {}

    click.echo(f"== {command} (seed={cfg.seed}) ==")
    try:
        passed = module.run(cfg, out_dir, report)
    except ConfigError as e:
        click.echo(f"[ERROR] {config_path}: {e}", err=True)
        sys.exit(EXIT_CONFIG)
    except NeutroError as e:
        path = write_report(out_dir, command, echo, report, error=f"{type(e).__name__}: {e}")
        logger.error("%s abortado: %s (informe parcial en %s)", command, e, path)
        sys.exit(EXIT_RUNTIME)
    except Exception as e:
        path = write_report(out_dir, command, echo, report, error=f"{type(e).__name__}: {e}")
        logger.exception("%s: error inesperado (informe parcial en %s)", command, path)
        sys.exit(EXIT_RUNTIME)

    path = write_report(out_dir, command, echo, report)
    click.echo(f"informe: {path}")
    sys.exit(EXIT_OK if passed else EXIT_CHECK_FAILED)


def _register(module):
    @click.option("--config", "config_path", required=True, type=click.Path(dir_okay=False),
                  help="Config JSON del experimento.")
    @click.option("--seed", type=click.IntRange(min=0), default=None, help="Sustituye la semilla de la config.")
    @click.option("--samples", type=click.IntRange(min=1), default=None, help="Sustituye sampling.samples.")
    @click.option("--tol", type=float, default=None, help="Tolerancia principal del comando.")
    @click.option("--output", type=click.Path(file_okay=False), default=None, help="Directorio de informes.")
    @click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default=None,
                  help="Formato de la traza del solver.")
    @click.option("--log-level", type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
                  default=None, help="Nivel de log (por defecto NEUTRO_LOG_LEVEL).")
    def command(config_path, seed, samples, tol, output, fmt, log_level):
        _execute(module.NAME, module, config_path, seed, samples, tol, output, fmt, log_level)

    command.__doc__ = module.__doc__
    cli.add_command(click.command(name=module.NAME)(command))


# --------- registrar comandos ---------
for _module in COMMANDS:
    _register(_module)


if __name__ == "__main__":
    cli()
