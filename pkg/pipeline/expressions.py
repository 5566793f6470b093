"""
Арифметические выражения сценария: разбор и компиляция в функции numpy

Грамматика:
    expr  := term (("+" | "-") term)*
    term  := unary (("*" | "/") unary)*
    unary := "-" unary | power
    power := atom ("^" unary)?
    atom  := number | name | name "(" expr ("," expr)* ")" | "(" expr ")"
"""
import re
from dataclasses import dataclass
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from utils.errors import ExpressionError

Env = Mapping[str, np.ndarray]
Compiled = Callable[[Env], np.ndarray]

FUNCTIONS: Dict[str, Tuple[int, Callable]] = {
    "abs": (1, np.abs),
    "exp": (1, np.exp),
    "ln": (1, np.log),
    "max": (-2, np.maximum),
    "min": (-2, np.minimum),
}

_TOKEN = re.compile(r"\s*(?:(\d+\.\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?|\d+(?:[eE][+-]?\d+)?)"
                    r"|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    column: int


def tokenize(text: str) -> List[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None or match.end() == pos:
            break
        number, name, symbol = match.groups()
        column = match.start(match.lastindex)
        if number is not None:
            tokens.append(Token("number", number, column))
        elif name is not None:
            tokens.append(Token("name", name, column))
        elif symbol in "+-*/^(),":
            tokens.append(Token(symbol, symbol, column))
        else:
            raise ExpressionError(f"недопустимый символ '{symbol}' в выражении '{text}'",
                                  column=column + 1)
        pos = match.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class Expression:
    """
    Скомпилированное выражение.

    Attributes:
        text: Исходный текст
        names: Использованные переменные
    """

    def __init__(self, text: str, compiled: Compiled, names: Sequence[str]):
        self.text = text
        self._compiled = compiled
        self.names = tuple(sorted(set(names)))

    def __call__(self, env: Env) -> np.ndarray:
        with np.errstate(all="ignore"):
            return np.asarray(self._compiled(env), dtype=float)

    def __repr__(self) -> str:
        return f"Expression({self.text!r})"

    def depends_on(self, name: str) -> bool:
        return name in self.names


class _Parser:
    def __init__(self, text: str, variables: Sequence[str], constants: Mapping[str, float]):
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0
        self.variables = set(variables)
        self.constants = dict(constants)
        self.names: List[str] = []

    def error(self, message: str, token: Optional[Token] = None) -> ExpressionError:
        token = token or self.tokens[self.pos]
        return ExpressionError(f"{message} в выражении '{self.text}'", column=token.column + 1)

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def take(self, kind: str) -> Token:
        token = self.current
        if token.kind != kind:
            expected = "конец выражения" if kind == "end" else f"'{kind}'"
            found = token.text or "конец выражения"
            raise self.error(f"ожидалось {expected}, найдено '{found}'")
        self.pos += 1
        return token

    def parse(self) -> Compiled:
        node = self.expr()
        self.take("end")
        return node

    def expr(self) -> Compiled:
        node = self.term()
        while self.current.kind in ("+", "-"):
            op = self.take(self.current.kind).kind
            left, right = node, self.term()
            node = (lambda a, b: lambda env: a(env) + b(env))(left, right) if op == "+" \
                else (lambda a, b: lambda env: a(env) - b(env))(left, right)
        return node

    def term(self) -> Compiled:
        node = self.unary()
        while self.current.kind in ("*", "/"):
            op = self.take(self.current.kind).kind
            left, right = node, self.unary()
            node = (lambda a, b: lambda env: a(env) * b(env))(left, right) if op == "*" \
                else (lambda a, b: lambda env: a(env) / b(env))(left, right)
        return node

    def unary(self) -> Compiled:
        if self.current.kind == "-":
            self.take("-")
            inner = self.unary()
            return lambda env: -inner(env)
        return self.power()

    def power(self) -> Compiled:
        base = self.atom()
        if self.current.kind == "^":
            self.take("^")
            exponent = self.unary()
            return lambda env: np.power(base(env), exponent(env))
        return base

    def atom(self) -> Compiled:
        token = self.current
        if token.kind == "number":
            self.take("number")
            value = float(token.text)
            return lambda env: value
        if token.kind == "(":
            self.take("(")
            node = self.expr()
            self.take(")")
            return node
        if token.kind == "name":
            self.take("name")
            if self.current.kind == "(":
                return self.call(token)
            return self.name(token)
        raise self.error(f"неожиданный символ '{token.text or 'конец выражения'}'")

    def call(self, token: Token) -> Compiled:
        if token.text not in FUNCTIONS:
            raise self.error(f"неизвестная функция '{token.text}'", token)
        arity, fn = FUNCTIONS[token.text]
        self.take("(")
        args = [self.expr()]
        while self.current.kind == ",":
            self.take(",")
            args.append(self.expr())
        self.take(")")
        if arity > 0 and len(args) != arity:
            raise self.error(f"функция '{token.text}' принимает {arity} аргумент", token)
        if arity < 0 and len(args) < -arity:
            raise self.error(f"функция '{token.text}' принимает не менее {-arity} аргументов", token)
        if len(args) == 1:
            only = args[0]
            return lambda env: fn(only(env))

        def reduce(env):
            out = args[0](env)
            for arg in args[1:]:
                out = fn(out, arg(env))
            return out
        return reduce

    def name(self, token: Token) -> Compiled:
        ident = token.text
        if ident in self.constants:
            value = float(self.constants[ident])
            return lambda env: value
        if ident not in self.variables:
            raise self.error(f"неизвестное имя '{ident}'", token)
        self.names.append(ident)
        return lambda env: env[ident]


def state_variables(dimension: int) -> List[str]:
    """Имена переменных выражения: x, t и x1..xd."""
    return ["x", "t"] + [f"x{i + 1}" for i in range(dimension)]


def compile_expression(text: str, dimension: int = 1,
                       constants: Optional[Mapping[str, float]] = None,
                       variables: Optional[Sequence[str]] = None) -> Expression:
    """
    Разбор и компиляция выражения.

    Raises:
        ExpressionError: синтаксическая ошибка или неизвестное имя (с номером столбца).
    """
    text = str(text)
    constants = dict(constants or {})
    clash = set(constants) & (set(FUNCTIONS) | set(state_variables(dimension)))
    if clash:
        raise ExpressionError(f"имена констант совпадают с зарезервированными: {sorted(clash)}")
    parser = _Parser(text, variables or state_variables(dimension), constants)
    compiled = parser.parse()
    return Expression(text, compiled, parser.names)


def state_env(state: np.ndarray, t: float = 0.0) -> Dict[str, np.ndarray]:
    """Окружение выражения для состояния формы (M,) или (M, d); x это первая компонента."""
    state = np.asarray(state, dtype=float)
    matrix = state.reshape(state.shape[0], -1) if state.ndim else state.reshape(1, 1)
    env = {"x": matrix[:, 0], "t": t}
    for i in range(matrix.shape[1]):
        env[f"x{i + 1}"] = matrix[:, i]
    return env


def as_terminal_function(expr: Expression, horizon: float) -> Callable[[np.ndarray], np.ndarray]:
    """ξ как функция терминального состояния."""
    def xi(state: np.ndarray) -> np.ndarray:
        env = state_env(state, horizon)
        n = env["x"].shape[0]
        return np.broadcast_to(expr(env), (n,)).astype(float)
    return xi


def as_coefficient(expr: Expression) -> Callable[[float, np.ndarray], np.ndarray]:
    """Коэффициент СДУ b(t, X) или σ(t, X)."""
    def coefficient(t: float, state: np.ndarray) -> np.ndarray:
        env = state_env(state, t)
        return np.broadcast_to(expr(env), env["x"].shape).astype(float)
    return coefficient
