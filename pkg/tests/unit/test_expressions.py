"""
Unit тесты выражений сценария
"""
import numpy as np
import pytest

from pipeline.expressions import (
    as_coefficient, as_terminal_function, compile_expression, state_env, tokenize,
)
from utils.errors import ExpressionError


@pytest.fixture
def env():
    return state_env(np.array([-1.0, 0.0, 2.0]))


class TestGrammar:
    """Тесты грамматики"""

    def test_precedence(self, env):
        assert compile_expression("2*x + 1")(env) == pytest.approx([-1.0, 1.0, 5.0])
        assert compile_expression("1 + 2*3 - 4/2")(env) == pytest.approx(5.0)

    def test_unary_binds_looser_than_power(self, env):
        assert compile_expression("-x^2")(env) == pytest.approx([-1.0, 0.0, -4.0])

    def test_power_right_associative(self, env):
        assert compile_expression("2^3^2")(env) == pytest.approx(512.0)

    def test_functions(self, env):
        assert compile_expression("max(x, 0, 1)")(env) == pytest.approx([1.0, 1.0, 2.0])
        assert compile_expression("min(x, 0)")(env) == pytest.approx([-1.0, 0.0, 0.0])
        assert compile_expression("abs(x) + exp(0) + ln(1)")(env) == pytest.approx([2.0, 1.0, 3.0])

    def test_numbers(self):
        kinds = [t.text for t in tokenize("1.5e-3 + .5 + 2")]
        assert kinds == ["1.5e-3", "+", ".5", "+", "2", ""]

    def test_constants(self, env):
        expr = compile_expression("max(x - K, 0)", constants={"K": 1.0})

        assert expr(env) == pytest.approx([0.0, 0.0, 1.0])
        assert expr.names == ("x",)

    def test_vector_state(self):
        env = state_env(np.array([[1.0, 2.0], [3.0, 4.0]]))
        expr = compile_expression("x1 * x2 + t", dimension=2)

        assert expr(env) == pytest.approx([2.0, 12.0])
        assert expr.depends_on("x1") and not expr.depends_on("x")


class TestErrors:
    """Тесты ошибок разбора с номером столбца"""

    def test_unknown_name_column(self):
        with pytest.raises(ExpressionError) as excinfo:
            compile_expression("x + y")
        assert excinfo.value.column == 5
        assert "'y'" in str(excinfo.value)

    def test_unexpected_end(self):
        with pytest.raises(ExpressionError) as excinfo:
            compile_expression("x +")
        assert excinfo.value.column == 4

    def test_invalid_symbol(self):
        with pytest.raises(ExpressionError) as excinfo:
            compile_expression("x $ 1")
        assert excinfo.value.column == 3

    def test_unknown_function(self):
        with pytest.raises(ExpressionError) as excinfo:
            compile_expression("sin(x)")
        assert excinfo.value.column == 1

    def test_arity(self):
        with pytest.raises(ExpressionError):
            compile_expression("exp(x, 1)")
        with pytest.raises(ExpressionError):
            compile_expression("max(x)")

    def test_unbalanced(self):
        with pytest.raises(ExpressionError):
            compile_expression("(x + 1")

    def test_reserved_constant(self):
        with pytest.raises(ExpressionError):
            compile_expression("x", constants={"x": 1.0})


class TestAdapters:
    """Тесты обёрток для ξ и коэффициентов СДУ"""

    def test_constant_terminal_broadcasts(self):
        xi = as_terminal_function(compile_expression("3"), horizon=1.0)
        assert xi(np.zeros(4)) == pytest.approx([3.0] * 4)

    def test_terminal_sees_horizon(self):
        xi = as_terminal_function(compile_expression("x + t"), horizon=2.0)
        assert xi(np.array([1.0])) == pytest.approx([3.0])

    def test_coefficient(self):
        drift = as_coefficient(compile_expression("0.5*x"))
        assert drift(0.0, np.array([2.0, 4.0])) == pytest.approx([1.0, 2.0])
