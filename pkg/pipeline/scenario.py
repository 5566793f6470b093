"""
Сценарий запуска: YAML-документ, проверенный моделями pydantic
"""
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Sequence, Tuple, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, ValidationInfo, field_validator, model_validator

from model.catalogue import CATALOGUE_TAGS
from pipeline.expressions import compile_expression
from utils.errors import ExpressionError, ScenarioError

GROWTH_CLASSES = ("A1", "A2", "A3", "A4")


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)


class ModelSection(StrictModel):
    """Прямой процесс"""
    kind: Literal["brownian", "gbm", "general_sde"] = "brownian"
    horizon: float = Field(1.0, gt=0)
    dimension: int = Field(1, ge=1)
    x0: float = 0.0
    drift: Optional[str] = None
    vol: Optional[str] = None
    b: Optional[float] = None
    sigma: Optional[float] = Field(None, ge=0)
    scheme: Literal["euler", "gbm_exact"] = "euler"

    @model_validator(mode="after")
    def _coefficients(self):
        if self.kind == "general_sde" and (self.drift is None or self.vol is None):
            raise ValueError("для general_sde нужны выражения drift и vol")
        if self.kind == "gbm" and (self.b is None or self.sigma is None):
            raise ValueError("для gbm нужны параметры b и sigma")
        if self.scheme == "gbm_exact" and self.kind != "gbm":
            raise ValueError("схема gbm_exact допустима только для gbm")
        return self


class CoreSection(StrictModel):
    """Функция штрафа: тег каталога или таблица"""
    tag: Optional[str] = None
    file: Optional[str] = None
    growth_class: Optional[str] = Field(None, alias="class")
    params: Dict[str, float] = Field(default_factory=dict)
    h: float = Field(0.0, ge=0)
    qbar: Optional[Union[float, List[float]]] = None
    generator: Literal["closed_form", "numeric"] = "closed_form"

    @field_validator("tag")
    @classmethod
    def _known_tag(cls, tag):
        if tag is not None and tag not in CATALOGUE_TAGS:
            raise ValueError(f"неизвестный тег каталога '{tag}'")
        return tag

    @field_validator("growth_class")
    @classmethod
    def _known_class(cls, value):
        if value is not None and value not in GROWTH_CLASSES:
            raise ValueError(f"класс роста должен быть одним из {GROWTH_CLASSES}")
        return value

    @model_validator(mode="after")
    def _one_source(self):
        if (self.tag is None) == (self.file is None):
            raise ValueError("нужно указать ровно одно из tag и file")
        if self.file is not None and self.growth_class is None:
            raise ValueError("для табличной f нужен класс роста (class)")
        if self.file is not None and self.generator == "closed_form":
            self.generator = "numeric"
        return self


class SolverSection(StrictModel):
    """Параметры решателя; seed обязателен"""
    N: int = Field(ge=1)
    M: int = Field(ge=1)
    seed: int = Field(ge=0)
    degree: int = Field(4, ge=0, le=8)
    clip_radius: Optional[float] = Field(None, gt=0)
    threads: Optional[int] = Field(None, ge=1)
    scheme: Literal["explicit", "theta"] = "explicit"
    theta: float = Field(1.0, ge=0, le=1)


class OutputsSection(StrictModel):
    directory: str = "results"
    formats: List[Literal["csv", "json", "html"]] = Field(default_factory=lambda: ["csv", "json", "html"])
    dump_paths: int = Field(0, ge=0)


class Scenario(StrictModel):
    """Сценарий целиком"""
    name: str
    model: ModelSection = Field(default_factory=ModelSection)
    endowment: str
    endowment_lower: Optional[str] = None
    endowment_mix: Optional[str] = None
    constants: Dict[str, float] = Field(default_factory=dict)
    core: CoreSection
    solver: SolverSection
    checks: List[str] = Field(default_factory=list)
    outputs: OutputsSection = Field(default_factory=OutputsSection)

    @field_validator("checks")
    @classmethod
    def _known_checks(cls, checks, info: ValidationInfo):
        available = (info.context or {}).get("checks")
        if available is not None:
            unknown = [c for c in checks if c not in available]
            if unknown:
                raise ValueError(f"неизвестные проверки {unknown}; доступны {sorted(available)}")
        if len(set(checks)) != len(checks):
            raise ValueError("проверки повторяются")
        return checks

    def expressions(self) -> Dict[Tuple[str, ...], str]:
        """Все выражения сценария с их путями в документе."""
        out = {("endowment",): self.endowment}
        if self.endowment_lower is not None:
            out[("endowment_lower",)] = self.endowment_lower
        if self.endowment_mix is not None:
            out[("endowment_mix",)] = self.endowment_mix
        if self.model.drift is not None:
            out[("model", "drift")] = self.model.drift
        if self.model.vol is not None:
            out[("model", "vol")] = self.model.vol
        return out

    def resolved(self) -> Dict[str, Any]:
        return self.model_dump(mode="json", by_alias=True)


def _node_at(root: Optional[yaml.Node], path: Sequence[Any]) -> Optional[yaml.Node]:
    """Ближайший к пути узел YAML."""
    node = root
    for key in path:
        if isinstance(node, yaml.MappingNode):
            child = next((v for k, v in node.value if getattr(k, "value", None) == str(key)), None)
        elif isinstance(node, yaml.SequenceNode) and isinstance(key, int) and key < len(node.value):
            child = node.value[key]
        else:
            child = None
        if child is None:
            return node
        node = child
    return node


def _anchor(root, path, message: str, source: str) -> ScenarioError:
    node = _node_at(root, path)
    if node is None:
        return ScenarioError(message, source=source)
    return ScenarioError(message, line=node.start_mark.line + 1,
                         column=node.start_mark.column + 1, source=source)


def _expression_error(root, path, err: ExpressionError, source: str) -> ScenarioError:
    node = _node_at(root, path)
    if node is None or not isinstance(node, yaml.ScalarNode):
        return ScenarioError(str(err.args[0]), source=source)
    quote = 1 if node.style in ("'", '"') else 0
    column = node.start_mark.column + quote + (err.column or 1)
    return ScenarioError(f"{'.'.join(path)}: {err.args[0]}", line=node.start_mark.line + 1,
                         column=column, source=source)


def parse_scenario(text: str, source: str = "<scenario>", base_dir: Optional[Path] = None,
                   checks: Optional[Sequence[str]] = None) -> Tuple[Scenario, Any]:
    """
    Разбор и проверка сценария.

    Returns:
        Tuple: (Scenario, корневой узел YAML для привязки ошибок)

    Raises:
        ScenarioError: с номером строки и столбца.
    """
    try:
        root = yaml.compose(text)
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        raise ScenarioError(f"ошибка YAML: {getattr(e, 'problem', e)}",
                            line=mark.line + 1 if mark else None,
                            column=mark.column + 1 if mark else None, source=source) from e
    if not isinstance(data, dict):
        raise ScenarioError("сценарий должен быть отображением YAML", line=1, column=1, source=source)

    try:
        scenario = Scenario.model_validate(data, context={"checks": checks} if checks is not None else None)
    except ValidationError as e:
        first = e.errors()[0]
        path = [p for p in first["loc"] if not (isinstance(p, str) and p.startswith("function-"))]
        where = ".".join(str(p) for p in path) or "<корень>"
        message = first["msg"].removeprefix("Value error, ")
        raise _anchor(root, path, f"{where}: {message}", source) from e

    for path, text_expr in scenario.expressions().items():
        try:
            dimension = 1 if path[0] == "model" else scenario.model.dimension
            compile_expression(text_expr, dimension, scenario.constants)
        except ExpressionError as e:
            raise _expression_error(root, path, e, source) from e

    if scenario.core.file is not None:
        file_path = Path(scenario.core.file)
        if not file_path.is_absolute() and base_dir is not None:
            file_path = base_dir / file_path
        if not file_path.exists():
            raise _anchor(root, ("core", "file"), f"core.file: файл '{scenario.core.file}' не найден", source)

    return scenario, root


def load_scenario(path: Union[str, Path], checks: Optional[Sequence[str]] = None) -> Tuple[Scenario, Any]:
    """Чтение сценария с диска."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ScenarioError(f"не удалось прочитать сценарий: {e}", source=str(path)) from e
    return parse_scenario(text, source=str(path), base_dir=path.parent, checks=checks)


def anchor_error(root: Any, path: Sequence[Any], message: str, source: str) -> ScenarioError:
    """Ошибка проверки, привязанная к узлу сценария."""
    return _anchor(root, path, message, source)
