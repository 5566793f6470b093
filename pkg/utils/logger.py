"""
Система логирования
"""
import logging
import os
import sys
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Optional

_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
_DATEFMT = '%Y-%m-%d %H:%M:%S'

# Общие параметры, задаются через configure_logging
_state: Dict[str, Any] = {
    "level": logging.INFO,
    "file_enabled": False,
    "directory": "data/logs",
}


def _resolve_level(level: Any) -> int:
    if isinstance(level, int):
        return level
    name = str(level or "").strip().upper()
    return logging.getLevelName(name) if name in logging._nameToLevel else logging.INFO


def configure_logging(settings: Optional[Dict[str, Any]] = None):
    """
    Применение секции logging из настроек ко всем логгерам библиотеки.

    Args:
        settings (Dict[str, Any]): Полные настройки или None.
    """
    section = (settings or {}).get('logging', {}) or {}
    level = os.getenv("UTILITY_LOG_LEVEL") or section.get('level', 'INFO')
    _state["level"] = _resolve_level(level)
    _state["file_enabled"] = bool(section.get('file_enabled', False))
    _state["directory"] = section.get('directory', 'data/logs')

    for name in list(logging.Logger.manager.loggerDict):
        existing = logging.getLogger(name)
        if getattr(existing, "_utility_managed", False):
            existing.setLevel(_state["level"])
            for handler in existing.handlers:
                handler.setLevel(_state["level"])
            if _state["file_enabled"]:
                _attach_file_handler(existing)


def _attach_file_handler(logger: logging.Logger):
    if any(isinstance(h, logging.FileHandler) for h in logger.handlers):
        return
    log_dir = Path(_state["directory"])
    log_dir.mkdir(parents=True, exist_ok=True)

    log_file = log_dir / f"{datetime.now().strftime('%Y%m%d')}.log"
    file_handler = logging.FileHandler(log_file, encoding='utf-8')
    file_handler.setLevel(logger.level)
    file_handler.setFormatter(logging.Formatter(_FORMAT, datefmt=_DATEFMT))
    logger.addHandler(file_handler)


def setup_logger(name: str, level: Optional[int] = None) -> logging.Logger:
    """
    Настройка логгера.

    Args:
        name (str): Имя логгера.
        level (int): Уровень логирования; по умолчанию из configure_logging.

    Returns:
        logging.Logger: Настроенный логгер.
    """
    logger = logging.getLogger(name)
    logger.setLevel(level if level is not None else _state["level"])

    # Проверка на существующие обработчики
    if logger.handlers:
        return logger

    logger._utility_managed = True
    logger.propagate = False

    # Консольный обработчик пишет в stderr: stdout занят отчетами CLI
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(logger.level)
    console_handler.setFormatter(logging.Formatter(_FORMAT, datefmt=_DATEFMT))
    logger.addHandler(console_handler)

    if _state["file_enabled"]:
        _attach_file_handler(logger)

    return logger
