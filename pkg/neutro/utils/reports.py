import csv
import json
import math
from enum import Enum
from pathlib import Path, PurePath
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel

from neutro.schemas import TraceRow

# cabecera exportada -> campo de TraceRow
TRACE_COLUMNS = {"iter": "iteration", "h_residual": "h_residual", "G": "G", "B": "B", "Y": "Y"}


def _plain(value: Any) -> Any:
    """Modelos pydantic a dict; inf/nan como cadena para que el JSON sea estándar."""
    if isinstance(value, BaseModel):
        return _plain(value.model_dump())
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, np.generic):
        return _plain(value.item())
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, PurePath):
        return str(value)
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    return value


def render_report(command: str, config: Dict[str, Any], body: Dict[str, Any], error: Optional[str] = None) -> str:
    """
    JSON con claves ordenadas y sin marcas de tiempo: misma config y misma
    semilla dan el mismo texto byte a byte.
    """
    payload = {"command": command, "config": _plain(config), **_plain(body)}
    if error is not None:
        payload["error"] = error
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def write_report(directory: Path, command: str, config: Dict[str, Any],
                 body: Dict[str, Any], error: Optional[str] = None) -> Path:
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / f"{command}.report.json"
    path.write_text(render_report(command, config, body, error), encoding="utf-8")
    return path


# ---------- tablas CSV ----------

def write_trace_csv(path: Path, trace: Sequence[TraceRow]) -> Path:
    data = np.array([[getattr(row, f) for f in TRACE_COLUMNS.values()] for row in trace], dtype=float).reshape(-1, 5)
    np.savetxt(path, data, delimiter=",", header=",".join(TRACE_COLUMNS), comments="",
               fmt=["%d", "%.17g", "%.17g", "%.17g", "%.17g"])
    return path


def write_trace_json(path: Path, trace: Sequence[TraceRow]) -> Path:
    rows = [{col: getattr(row, f) for col, f in TRACE_COLUMNS.items()} for row in trace]
    path.write_text(json.dumps(rows, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    return path


def _point_cell(value: Any) -> str:
    # índice tal cual; coordenadas separadas por ';'
    if isinstance(value, list):
        return ";".join(repr(float(c)) for c in value)
    return str(value)


def write_h_table(path: Path, rows: List[Dict[str, Any]]) -> Path:
    """Tabla h_eps: a, b, epsilon, h y después h_ba, induced (d(1-ε)/ε o vacío)."""
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["a", "b", "epsilon", "h", "h_ba", "induced"])
        for r in rows:
            induced = r.get("induced")
            writer.writerow([
                _point_cell(r["a"]), _point_cell(r["b"]), repr(r["epsilon"]),
                repr(r["h"]), repr(r["h_ba"]), "" if induced is None else repr(induced),
            ])
    return path
