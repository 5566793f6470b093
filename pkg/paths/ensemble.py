"""
Ансамбль броуновских траекторий и прямые СДУ
"""
from dataclasses import dataclass, replace
from functools import cached_property
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Tuple

import numpy as np

from paths.streams import STREAM_SCHEME, fill_normals, stream_ids
from utils.config import section
from utils.errors import BlowupError, CapacityError, ParamError
from utils.logger import setup_logger

logger = setup_logger(__name__)

DEFAULT_BLOCK_SIZE = 256
DEFAULT_MAX_ELEMENTS = 200_000_000


@dataclass(frozen=True)
class PathEnsemble:
    """
    Приращения броуновского движения на равномерной сетке и состояние X.

    Attributes:
        increments (np.ndarray): M×N×d, масштабированные на √dt.
        horizon (float): Горизонт T.
        seed (int): Зерно генерации.
        block_size (int): Размер блока подпотока.
        state (np.ndarray): M×(N+1) значения прямого процесса или None.
        stream_scheme (str): Схема подпотоков.
    """
    increments: np.ndarray
    horizon: float
    seed: int
    block_size: int = DEFAULT_BLOCK_SIZE
    state: Optional[np.ndarray] = None
    stream_scheme: str = STREAM_SCHEME

    @property
    def paths(self) -> int:
        return self.increments.shape[0]

    @property
    def steps(self) -> int:
        return self.increments.shape[1]

    @property
    def dimension(self) -> int:
        return self.increments.shape[2]

    M = paths
    N = steps
    d = dimension

    @property
    def dt(self) -> float:
        return self.horizon / self.steps

    @property
    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.horizon, self.steps + 1)

    @property
    def streams(self) -> np.ndarray:
        return stream_ids(self.paths, self.block_size)

    def brownian(self) -> np.ndarray:
        """B на сетке, форма M×(N+1)×d, B_0 = 0."""
        b = np.zeros((self.paths, self.steps + 1, self.dimension))
        np.cumsum(self.increments, axis=1, out=b[:, 1:, :])
        return b

    @cached_property
    def levels(self) -> np.ndarray:
        b = self.brownian()
        b.setflags(write=False)
        return b

    def observed(self, step: int) -> np.ndarray:
        """Наблюдаемое состояние на шаге: X, иначе B (вектор при d = 1)."""
        if self.state is not None:
            return self.state[:, step]
        level = self.levels[:, step, :]
        return level[:, 0] if self.dimension == 1 else level

    def terminal_state(self) -> np.ndarray:
        return self.observed(self.steps)

    def factors(self, step: int) -> np.ndarray:
        """Признаки регрессии на шаге, форма M×k."""
        obs = self.observed(step)
        return obs.reshape(self.paths, -1)

    def with_state(self, state: np.ndarray) -> "PathEnsemble":
        state = np.asarray(state, dtype=float)
        state.setflags(write=False)
        return replace(self, state=state)

    def truncate(self, steps: int) -> "PathEnsemble":
        """Первые steps шагов того же ансамбля."""
        if not 1 <= steps <= self.steps:
            raise ParamError(f"число шагов {steps} вне [1, {self.steps}]", module="paths")
        state = None if self.state is None else self.state[:, : steps + 1]
        return replace(self, increments=self.increments[:, :steps, :],
                       horizon=self.dt * steps, state=state)

    def subset(self, paths: int) -> "PathEnsemble":
        """Первые paths траекторий; их значения не зависят от M."""
        state = None if self.state is None else self.state[:paths]
        return replace(self, increments=self.increments[:paths], state=state)

    def describe(self) -> Dict[str, Any]:
        return {
            "M": self.paths, "N": self.steps, "d": self.dimension, "T": self.horizon,
            "seed": self.seed, "stream_scheme": f"{self.stream_scheme}{self.block_size}",
        }


def generate(M: int, N: int, d: int, T: float, seed: int, threads: int = 1,
             settings: Optional[Dict[str, Any]] = None) -> PathEnsemble:
    """
    Генерация ансамбля по (M, N, d, T, seed).

    Args:
        M (int): Число траекторий.
        N (int): Число шагов.
        d (int): Размерность.
        T (float): Горизонт.
        seed (int): Зерно (64 бита).
        threads (int): Число потоков; на результат не влияет.
        settings (Dict[str, Any]): Настройки (секция paths).

    Returns:
        PathEnsemble: Ансамбль без состояния.
    """
    cfg = section(settings, 'paths')
    block_size = int(cfg.get('block_size', DEFAULT_BLOCK_SIZE))
    cap = int(cfg.get('max_elements', DEFAULT_MAX_ELEMENTS))

    if min(M, N, d) < 1 or not T > 0:
        raise ParamError(f"некорректные размеры ансамбля M={M}, N={N}, d={d}, T={T}", module="paths")
    if M * N * d > cap:
        raise CapacityError(f"M·N·d = {M * N * d} превышает лимит {cap}")

    normals = np.empty((M, N, d))
    fill_normals(normals, seed, block_size, threads)
    normals *= np.sqrt(T / N)
    normals.setflags(write=False)

    logger.info(f"Сгенерирован ансамбль M={M}, N={N}, d={d}, T={T}, seed={seed}")
    return PathEnsemble(increments=normals, horizon=float(T), seed=int(seed), block_size=block_size)


def independent_ensemble(ens: PathEnsemble, seed: Optional[int] = None, threads: int = 1) -> PathEnsemble:
    """
    Ансамбль той же формы на независимом зерне (по умолчанию seed + 1).

    Raises:
        ParamError: Ансамбль несет прямой процесс; его нужно перестроить вызывающему.
    """
    if ens.state is not None:
        raise ParamError("независимый ансамбль с прямым процессом строится по модели сценария",
                         module="paths")
    seed = (ens.seed + 1) % 2 ** 64 if seed is None else seed
    settings = {"paths": {"block_size": ens.block_size,
                          "max_elements": ens.paths * ens.steps * ens.dimension}}
    return generate(ens.paths, ens.steps, ens.dimension, ens.horizon, seed,
                    threads=threads, settings=settings)


def forward_sde(ens: PathEnsemble, drift: Callable, vol: Callable, x0: float,
                scheme: str = "euler", gbm: Optional[Tuple[float, float]] = None) -> PathEnsemble:
    """
    Прямой процесс dX = b(t,X)dt + σ(t,X)·dB.

    Скалярная волатильность действует на первую компоненту B, векторная
    формы (M, d) действует на все. Точная лог-схема для GBM выбирается scheme="gbm_exact"
    с параметрами gbm=(b, σ).

    Raises:
        BlowupError: Неконечное состояние, с номером шага.
    """
    M, N, dt = ens.paths, ens.steps, ens.dt
    times = ens.times
    x = np.empty((M, N + 1))
    x[:, 0] = x0

    if scheme == "gbm_exact":
        if gbm is None:
            raise ParamError("для точной схемы GBM нужны параметры (b, σ)", module="paths")
        b, sigma = gbm
        level = ens.brownian()[:, :, 0]
        with np.errstate(over="ignore"):
            x[:] = x0 * np.exp((b - 0.5 * sigma ** 2) * times[None, :] + sigma * level)
        bad = ~np.isfinite(x)
        if bad.any():
            step = int(np.argmax(bad.any(axis=0)))
            raise BlowupError(f"неконечное состояние GBM на шаге {step}", step=step, module="paths")
        return ens.with_state(x)

    if scheme != "euler":
        raise ParamError(f"неизвестная схема '{scheme}'", module="paths")

    with np.errstate(over="ignore", invalid="ignore"):
        for i in range(N):
            t = times[i]
            xi = x[:, i]
            step = np.broadcast_to(np.asarray(drift(t, xi), dtype=float), (M,)) * dt
            sigma = np.asarray(vol(t, xi), dtype=float)
            dB = ens.increments[:, i, :]
            if sigma.ndim == 2:
                step = step + np.sum(sigma * dB, axis=1)
            else:
                step = step + np.broadcast_to(sigma, (M,)) * dB[:, 0]
            x[:, i + 1] = xi + step
            if not np.all(np.isfinite(x[:, i + 1])):
                raise BlowupError(f"неконечное состояние СДУ на шаге {i + 1}", step=i + 1, module="paths")
    return ens.with_state(x)


def dump_paths_csv(ens: PathEnsemble, path, max_paths: Optional[int] = None) -> Path:
    """Выгрузка траекторий: path_id, step, компоненты B, X."""
    import csv

    b = ens.brownian()
    count = ens.paths if max_paths is None else min(max_paths, ens.paths)
    with open(path, 'w', encoding='utf-8', newline='') as f:
        writer = csv.writer(f, lineterminator="\n")
        header = ["path_id", "step"] + [f"B{j + 1}" for j in range(ens.dimension)] + ["X"]
        writer.writerow(header)
        for p in range(count):
            for i in range(ens.steps + 1):
                x = "" if ens.state is None else format(ens.state[p, i], '.17g')
                writer.writerow([p, i] + [format(v, '.17g') for v in b[p, i]] + [x])
    return Path(path)
