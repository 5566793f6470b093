"""
Проверки, подключаемые раннером по реестру настроек
"""
from checks.base_check import BaseCheck, CheckStatus, error_kind

__all__ = ["BaseCheck", "CheckStatus", "error_kind"]
