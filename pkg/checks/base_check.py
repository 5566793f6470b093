"""
Базовый класс проверок, загружаемых раннером
"""
import time
from abc import ABC, abstractmethod
from enum import Enum
from typing import Any, Dict, List

from utils.errors import InputError, NumericalError, ScenarioError, UtilityError
from utils.logger import setup_logger

logger = setup_logger(__name__)


class CheckStatus(Enum):
    """Статусы проверки"""
    INITIALIZING = "initializing"
    READY = "ready"
    ACTIVE = "active"
    ERROR = "error"
    DISABLED = "disabled"


def error_kind(error: BaseException) -> str:
    """Категория ошибки для кода возврата."""
    if isinstance(error, (ScenarioError, InputError)):
        return "scenario"
    if isinstance(error, NumericalError):
        return "numerical"
    if isinstance(error, UtilityError):
        return "utility"
    return "other"


class BaseCheck(ABC):
    """
    Базовый класс для всех проверок.

    validate() вызывается до любых вычислений; apply() получает контекст
    с ансамблем и решением и возвращает словарь с success, passed, headline
    и списком записанных артефактов.
    """

    def __init__(self, config: Dict[str, Any], runner=None):
        """
        Args:
            config (Dict[str, Any]): Настройки библиотеки.
            runner: Ссылка на раннер сценария.
        """
        self.config = config
        self.runner = runner
        self.name = self.__class__.__name__.replace('Check', '').lower()
        self.description = "Базовая проверка"
        self.status = CheckStatus.INITIALIZING
        self.enabled = True

        self.metrics = {
            "calls": 0,
            "errors": 0,
            "total_execution_time": 0.0
        }
        self.operation_history: List[Dict[str, Any]] = []

        logger.debug(f"Проверка {self.name} создана")

    def settings(self, section_name: str) -> Dict[str, Any]:
        return dict(self.config.get(section_name, {}) or {})

    def validate(self, context) -> None:
        """
        Проверка конфигурации до вычислений.

        Raises:
            ScenarioError: проверка не может быть выполнена для сценария.
        """
        self.status = CheckStatus.READY

    @abstractmethod
    def apply(self, context) -> Dict[str, Any]:
        """
        Выполнение проверки.

        Returns:
            Dict[str, Any]: success, passed, headline, artifacts.
        """

    def execute(self, context) -> Dict[str, Any]:
        """Выполнение с учётом метрик; исключения превращаются в результат с причиной."""
        start = time.perf_counter()
        self.metrics["calls"] += 1
        self.status = CheckStatus.ACTIVE
        try:
            result = self.apply(context)
            self.status = CheckStatus.READY
        except Exception as e:
            self.metrics["errors"] += 1
            self.status = CheckStatus.ERROR
            cause = e.cause if isinstance(e, UtilityError) else f"{self.name}: {e.__class__.__name__}: {e}"
            logger.error(f"Ошибка выполнения проверки {self.name}: {cause}")
            result = {"success": False, "error": str(e), "cause": cause, "kind": error_kind(e)}

        elapsed = time.perf_counter() - start
        self.metrics["total_execution_time"] += elapsed
        self.operation_history.append({"success": result.get("success", False),
                                       "passed": result.get("passed"),
                                       "execution_time": elapsed})
        return result

    def get_status(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "description": self.description,
            "status": self.status.value,
            "enabled": self.enabled,
            "metrics": self.metrics
        }

    def get_history(self, limit: int = 100) -> List[Dict[str, Any]]:
        return self.operation_history[-limit:]
