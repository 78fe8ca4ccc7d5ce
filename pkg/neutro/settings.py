import logging
import os

from dotenv import load_dotenv

load_dotenv()

# ---------------------------
# VARIABLES DE CONFIG
# ---------------------------
OUTPUT_DIR = os.getenv("NEUTRO_OUTPUT_DIR", "reports")
LOG_LEVEL = os.getenv("NEUTRO_LOG_LEVEL", "INFO").upper()

LOG_FORMAT = "[%(levelname)s] %(name)s: %(message)s"


def configure_logging(level: str | None = None) -> None:
    """Mismo formato que los prints [INFO]/[WARN] de siempre, pero con logging."""
    logging.basicConfig(
        level=(level or LOG_LEVEL).upper(),
        format=LOG_FORMAT,
        force=True,
    )
