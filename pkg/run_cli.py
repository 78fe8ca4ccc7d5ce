#!/usr/bin/env python3
import sys
from pathlib import Path

# Agregar el directorio actual al path de Python
current_dir = Path(__file__).parent
sys.path.insert(0, str(current_dir))

from neutro.main import cli

if __name__ == "__main__":
    cli()
