"""
Стохастические экспоненты L^q и их диагностика
"""
from dataclasses import dataclass
from typing import Any, Callable, Dict, Union

import numpy as np

from paths.ensemble import PathEnsemble
from utils.errors import InputError
from utils.logger import setup_logger

logger = setup_logger(__name__)

Control = Union[float, np.ndarray, Callable[[float, np.ndarray], Any]]


@dataclass(frozen=True)
class DensityPath:
    """
    Плотность L^q_t = exp(Σ q·ΔB − ½Σ|q|²dt) на сетке.

    Attributes:
        log_values (np.ndarray): M×(N+1) логарифмы, log L_0 = 0.
        controls (np.ndarray): M×N×d управление q по шагам.
        dt (float): Шаг сетки.
    """
    log_values: np.ndarray
    controls: np.ndarray
    dt: float

    @property
    def values(self) -> np.ndarray:
        return np.exp(self.log_values)

    @property
    def terminal(self) -> np.ndarray:
        return np.exp(self.log_values[:, -1])

    @property
    def log_terminal(self) -> np.ndarray:
        return self.log_values[:, -1]

    def martingale_diagnostic(self):
        """Ê[L_T] и его стандартная ошибка."""
        terminal = self.terminal
        m = terminal.size
        se = float(terminal.std(ddof=1) / np.sqrt(m)) if m > 1 else 0.0
        return float(terminal.mean()), se

    def to_dict(self) -> Dict[str, Any]:
        mean, se = self.martingale_diagnostic()
        return {"mean_terminal": mean, "std_error": se, "paths": int(self.log_values.shape[0])}


def control_array(ens: PathEnsemble, control: Control) -> np.ndarray:
    """
    Управление в виде массива M×N×d.

    Допускаются константа, вектор длины d, готовый массив или функция
    (t, состояние) -> значения формы (M,), (M, d) или скаляр.
    """
    M, N, d = ens.paths, ens.steps, ens.dimension
    if callable(control):
        q = np.empty((M, N, d))
        for i, t in enumerate(ens.times[:-1]):
            value = np.asarray(control(float(t), ens.observed(i)), dtype=float)
            if value.ndim == 1 and value.shape[0] == M:
                value = value[:, None]
            q[:, i, :] = np.broadcast_to(value, (M, d))
        return q
    arr = np.asarray(control, dtype=float)
    if arr.ndim == 3:
        if arr.shape != (M, N, d):
            raise InputError(f"форма управления {arr.shape} не совпадает с ({M}, {N}, {d})")
        return arr
    return np.broadcast_to(arr.reshape(-1) if arr.ndim else arr, (M, N, d)).copy()


def density_from_controls(ens: PathEnsemble, q: np.ndarray) -> DensityPath:
    """Плотность по готовому массиву управления M×N×d."""
    increments = np.sum(q * ens.increments, axis=2) - 0.5 * np.sum(q * q, axis=2) * ens.dt
    log_values = np.zeros((ens.paths, ens.steps + 1))
    np.cumsum(increments, axis=1, out=log_values[:, 1:])
    return DensityPath(log_values=log_values, controls=q, dt=ens.dt)


def stochastic_exponential(ens: PathEnsemble, control: Control) -> DensityPath:
    """
    Дискретная стохастическая экспонента управления q.

    Args:
        ens (PathEnsemble): Ансамбль.
        control: Управление (константа, массив или функция (t, x)).

    Returns:
        DensityPath: Плотность с диагностикой мартингальности.
    """
    q = control_array(ens, control)
    density = density_from_controls(ens, q)
    mean, se = density.martingale_diagnostic()
    logger.debug(f"Плотность: Ê[L_T] = {mean:.6f} ± {se:.2g}")
    return density
