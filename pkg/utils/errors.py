"""
Иерархия исключений библиотеки
"""
from typing import Optional


class UtilityError(Exception):
    """
    Базовое исключение библиотеки.

    Каждое исключение знает модуль, в котором оно возникло, чтобы
    CLI мог вывести причину вида "bsde: BlowupError: ...".
    """

    module = "core"

    def __init__(self, message: str, module: Optional[str] = None):
        super().__init__(message)
        if module is not None:
            self.module = module

    @property
    def cause(self) -> str:
        """Квалифицированная причина ошибки."""
        return f"{self.module}: {self.__class__.__name__}: {self}"


# model

class ModelError(UtilityError):
    module = "model"


class CatalogueError(ModelError):
    """Неизвестный тег каталога."""


class ParamError(ModelError):
    """Параметры нарушают ограничения."""


class ClassError(ModelError):
    """Класс роста не объявлен."""


# conjugate

class ConjugateError(UtilityError):
    module = "conjugate"


class DomainError(ConjugateError):
    """Пустая эффективная область."""


class GridError(ConjugateError):
    """Сетка не является строго возрастающей."""


class RangeError(ConjugateError):
    """Точка вне табулированного диапазона."""


# paths

class PathsError(UtilityError):
    module = "paths"


class CapacityError(PathsError):
    """Превышен лимит ресурсов."""


class InputError(PathsError):
    """Некорректные входные данные."""


# численные сбои

class NumericalError(UtilityError):
    module = "bsde"


class BlowupError(NumericalError):
    """Неконечные значения в процессе счета."""

    def __init__(self, message: str, step: Optional[int] = None, module: Optional[str] = None):
        super().__init__(message, module=module)
        self.step = step


class OracleError(UtilityError):
    module = "bsde"


class AttainabilityError(UtilityError):
    module = "duality"

    def __init__(self, message: str, path: Optional[int] = None, step: Optional[int] = None):
        super().__init__(message)
        self.path = path
        self.step = step


class RejectedControl(UtilityError):
    module = "inequalities"


# cli

class ScenarioError(UtilityError):
    """Ошибка разбора или валидации сценария с привязкой к строке."""

    module = "cli"

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None,
                 source: Optional[str] = None):
        super().__init__(message)
        self.line = line
        self.column = column
        self.source = source

    def __str__(self) -> str:
        message = super().__str__()
        if self.line is None:
            return message
        where = f"{self.source}:" if self.source else ""
        return f"{where}{self.line}:{self.column or 1}: {message}"


class ExpressionError(ScenarioError):
    """Ошибка разбора арифметического выражения."""
