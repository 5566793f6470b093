"""
Сравнение двух манифестов
"""
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Mapping, Union

from pipeline.reports import read_manifest
from utils.logger import setup_logger

logger = setup_logger(__name__)


def flatten(data: Any, prefix: str = "") -> Dict[str, Any]:
    """Вложенный словарь в плоский с ключами через точку."""
    if isinstance(data, Mapping):
        out = {}
        for key, value in data.items():
            out.update(flatten(value, f"{prefix}.{key}" if prefix else str(key)))
        return out
    return {prefix: data}


@dataclass
class Difference:
    key: str
    a: Any
    b: Any


@dataclass
class CompareReport:
    """Различия конфигураций и изменения итоговых чисел"""
    differences: List[Difference] = field(default_factory=list)
    headline_deltas: Dict[str, float] = field(default_factory=dict)
    version_mismatch: bool = False

    @property
    def empty(self) -> bool:
        return not self.differences

    def to_dict(self) -> Dict[str, Any]:
        return {
            "differences": [asdict(d) for d in self.differences],
            "headline_deltas": dict(self.headline_deltas),
            "version_mismatch": self.version_mismatch,
        }


def compare_manifests(a: Mapping[str, Any], b: Mapping[str, Any]) -> CompareReport:
    """
    Структурное сравнение: сценарий, зерно, дайджест настроек и итоговые числа.

    Несовпадение версий даёт предупреждение, а не ошибку.
    """
    version_mismatch = a.get("version") != b.get("version")
    if version_mismatch:
        logger.warning(f"Манифесты разных версий: {a.get('version')} и {b.get('version')}")

    flat_a, flat_b = flatten(a), flatten(b)
    differences = [Difference(key, flat_a.get(key), flat_b.get(key))
                   for key in sorted(set(flat_a) | set(flat_b))
                   if flat_a.get(key) != flat_b.get(key)]

    deltas = {}
    head_a, head_b = a.get("headline", {}), b.get("headline", {})
    for key in sorted(set(head_a) & set(head_b)):
        va, vb = head_a[key], head_b[key]
        if isinstance(va, (int, float)) and isinstance(vb, (int, float)) \
                and not isinstance(va, bool) and not isinstance(vb, bool) and va != vb:
            deltas[key] = float(vb) - float(va)
    return CompareReport(differences=differences, headline_deltas=deltas,
                         version_mismatch=version_mismatch)


def compare(path_a: Union[str, Path], path_b: Union[str, Path]) -> CompareReport:
    report = compare_manifests(read_manifest(path_a), read_manifest(path_b))
    logger.info(f"Сравнение манифестов: {len(report.differences)} различий")
    return report
