"""
Утилиты библиотеки
"""
from .logger import setup_logger, configure_logging
from .config import load_settings, section
from .errors import UtilityError

__all__ = ['setup_logger', 'configure_logging', 'load_settings', 'section', 'UtilityError']
