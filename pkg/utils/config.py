"""
Загрузка настроек библиотеки из YAML
"""
import os
import re
from pathlib import Path
from typing import Any, Dict, Optional, Union

import yaml

from utils.logger import setup_logger

logger = setup_logger(__name__)

DEFAULT_SETTINGS_PATH = Path(__file__).resolve().parent.parent / "config" / "config.yaml"

_ENV_PATTERN = re.compile(r"^\$\{([A-Za-z_][A-Za-z0-9_]*)(?::-(.*))?\}$")


def _substitute_env(value: Any) -> Any:
    """Рекурсивная замена значений вида ${VAR} и ${VAR:-default}."""
    if isinstance(value, dict):
        return {key: _substitute_env(item) for key, item in value.items()}
    if isinstance(value, list):
        return [_substitute_env(item) for item in value]
    if isinstance(value, str):
        match = _ENV_PATTERN.match(value.strip())
        if match:
            env_var, default = match.group(1), match.group(2)
            resolved = os.getenv(env_var)
            if resolved is not None:
                return yaml.safe_load(resolved) if resolved.strip() else resolved
            if default is not None:
                return yaml.safe_load(default) if default.strip() else default
    return value


def load_settings(path: Optional[Union[str, Path]] = None) -> Dict[str, Any]:
    """
    Загрузка настроек.

    Args:
        path (str): Путь к YAML; по умолчанию config/config.yaml проекта.

    Returns:
        Dict[str, Any]: Настройки с подставленными переменными окружения.
    """
    settings_path = Path(path) if path else DEFAULT_SETTINGS_PATH
    try:
        with open(settings_path, 'r', encoding='utf-8') as f:
            settings = yaml.safe_load(f) or {}
    except FileNotFoundError:
        logger.warning(f"Файл настроек {settings_path} не найден, используются значения по умолчанию")
        return {}

    return _substitute_env(settings)


def section(settings: Optional[Dict[str, Any]], name: str) -> Dict[str, Any]:
    """Секция настроек или пустой словарь."""
    return dict((settings or {}).get(name, {}) or {})
