"""
Запись артефактов: CSV с 17 значащими цифрами, манифест, график сходимости
"""
import csv
import hashlib
import json
import math
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Union

from utils.logger import setup_logger

logger = setup_logger(__name__)


def format_value(value: Any) -> str:
    if isinstance(value, bool) or value is None:
        return "" if value is None else str(value).lower()
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def write_rows_csv(path: Union[str, Path], columns: Sequence[str],
                   rows: Iterable[Mapping[str, Any]]) -> Path:
    """CSV в фиксированном порядке столбцов."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([format_value(row.get(c)) for c in columns])
    logger.info(f"Записан отчёт {path.name}")
    return path


def _json_safe(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return "nan" if math.isnan(value) else ("inf" if value > 0 else "-inf")
    if isinstance(value, dict):
        return {str(k): _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    if hasattr(value, "item") and callable(value.item):
        return _json_safe(value.item())
    return value


def settings_digest(settings: Mapping[str, Any]) -> str:
    payload = json.dumps(_json_safe(dict(settings)), sort_keys=True, ensure_ascii=False)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def build_manifest(scenario: Mapping[str, Any], settings: Mapping[str, Any], version: str,
                   seed: int, headline: Mapping[str, Any], checks: Mapping[str, Any],
                   artifacts: List[str], run: Optional[Mapping[str, Any]] = None) -> Dict[str, Any]:
    """Манифест без отметок времени и без числа потоков."""
    return {
        "run": dict(run or {}),
        "version": version,
        "seed": seed,
        "scenario": dict(scenario),
        "settings_digest": settings_digest(settings),
        "headline": dict(headline),
        "checks": dict(checks),
        "artifacts": sorted(artifacts),
    }


def write_manifest(path: Union[str, Path], manifest: Mapping[str, Any]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        json.dump(_json_safe(dict(manifest)), f, sort_keys=True, indent=2, ensure_ascii=False)
        f.write("\n")
    logger.info(f"Записан манифест {path}")
    return path


def read_manifest(path: Union[str, Path]) -> Dict[str, Any]:
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def write_convergence_html(path: Union[str, Path], rows: Sequence[Mapping[str, Any]],
                           title: str = "Сходимость Y0") -> Path:
    """Линейный график Y0 (и оракула) по уровням измельчения."""
    import plotly.graph_objects as go

    levels = [r["level"] for r in rows]
    fig = go.Figure()
    fig.add_trace(go.Scatter(
        x=levels, y=[r["Y0"] for r in rows], mode="lines+markers", name="Y0",
        error_y=dict(type="data", array=[3.0 * r["std_error"] for r in rows], visible=True),
    ))
    if all(r.get("oracle") is not None for r in rows):
        fig.add_trace(go.Scatter(x=levels, y=[r["oracle"] for r in rows], mode="lines",
                                 name="оракул", line=dict(dash="dash")))
    fig.update_layout(title=title, xaxis_title="уровень (N, M)", yaxis_title="Y0",
                      template="plotly_white")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.write_html(str(path), include_plotlyjs="cdn", div_id="convergence")
    logger.info(f"Записан график {path.name}")
    return path
