"""
Обратная схема LSMC для BSDE с драйвером -g(t, Z)

Соглашение о знаке:
    Y_N = ξ
    Z_i = -E_i[(Y_{i+1} - Ŷ_i) ΔB_i] / dt
    Y_i = Ŷ_i - g(t_i, Z_i) dt,  Ŷ_i = E_i[Y_{i+1}]
"""
import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple, Union

import numpy as np

from bsde.regression import BasisSpec, ConditionalRegression
from model.functions import Generator
from paths.ensemble import PathEnsemble, independent_ensemble
from utils.errors import BlowupError, InputError, ParamError
from utils.logger import setup_logger

logger = setup_logger(__name__)

Endowment = Union[Callable[[np.ndarray], np.ndarray], np.ndarray, float]
Drift = Callable[[float, np.ndarray], np.ndarray]

SCHEMES = ("explicit", "theta")


@dataclass
class StepReport:
    """Диагностика одного шага обратной рекурсии"""
    step: int
    t: float
    degree: int
    r2: float
    truncations: int = 0
    clips: int = 0


@dataclass
class BsdeSolution:
    """
    Решение BSDE на сетке.

    Y имеет форму M×(N+1), Z форму M×N×d. Решение приемлемо,
    если не было ни одного срезания Z и все значения конечны.
    """
    Y: np.ndarray
    Z: np.ndarray
    times: np.ndarray
    basis_spec: BasisSpec
    residual_report: List[StepReport]
    y0_std_error: float
    convention: str = "concave"
    scheme: str = "explicit"

    @property
    def Y0(self) -> float:
        return float(self.Y[:, 0].mean())

    @property
    def clip_count(self) -> int:
        return sum(r.clips for r in self.residual_report)

    @property
    def truncation_count(self) -> int:
        return sum(r.truncations for r in self.residual_report)

    @property
    def acceptable(self) -> bool:
        return self.clip_count == 0 and bool(np.isfinite(self.Y).all())

    def rows(self) -> List[Dict[str, Any]]:
        """Строки отчёта: по одной на момент сетки."""
        reports = {r.step: r for r in self.residual_report}
        out = []
        for step, t in enumerate(self.times):
            report = reports.get(step)
            z0 = float(self.Z[:, step, 0].mean()) if step < self.Z.shape[1] else float("nan")
            out.append({
                "step": step,
                "t": float(t),
                "Y0_regression_value": float(self.Y[:, step].mean()),
                "Z0": z0,
                "R2": report.r2 if report else float("nan"),
                "clip_count": report.clips if report else 0,
            })
        return out

    def export_csv(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        columns = ["step", "t", "Y0_regression_value", "Z0", "R2", "clip_count"]
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(columns)
            for row in self.rows():
                writer.writerow([format(row[c], ".17g") if isinstance(row[c], float) else row[c]
                                 for c in columns])
        return path

    def summary(self) -> Dict[str, Any]:
        return {
            "Y0": self.Y0,
            "y0_std_error": self.y0_std_error,
            "acceptable": self.acceptable,
            "clip_count": self.clip_count,
            "truncation_count": self.truncation_count,
            "basis": self.basis_spec.to_dict(),
            "scheme": self.scheme,
            "min_r2": float(np.nanmin([r.r2 for r in self.residual_report])) if self.residual_report else 1.0,
        }


def evaluate_endowment(ens: PathEnsemble, endowment: Endowment) -> np.ndarray:
    """ξ как вектор длины M."""
    if callable(endowment):
        values = endowment(ens.terminal_state())
    else:
        values = endowment
    values = np.asarray(values, dtype=float)
    if values.ndim == 0:
        return np.full(ens.paths, float(values))
    values = values.reshape(-1)
    if values.shape[0] != ens.paths:
        raise InputError(f"ξ имеет {values.shape[0]} значений, ожидалось {ens.paths}")
    return values


def _options(settings: Optional[Dict[str, Any]], **overrides) -> Dict[str, Any]:
    options = {"degree": 4, "block": 8192, "condition_limit": 1e12, "clip_radius": None,
               "scheme": "explicit", "theta": 1.0, "threads": 1}
    options.update({k: v for k, v in (settings or {}).items() if k in options})
    options.update({k: v for k, v in overrides.items() if v is not None})
    if options["scheme"] not in SCHEMES:
        raise ParamError(f"неизвестная схема '{options['scheme']}'", module="bsde")
    if not 0.0 <= float(options["theta"]) <= 1.0:
        raise ParamError(f"θ = {options['theta']} вне [0, 1]", module="bsde")
    return options


def _backward(ens: PathEnsemble, xi: np.ndarray, drift: Drift, z_sign: float,
              options: Dict[str, Any], convention: str) -> BsdeSolution:
    """
    Общая обратная рекурсия: Z = z_sign·E_i[(Y_{i+1}-Ŷ)ΔB]/dt, Y_i = Ŷ_i - drift(t_i, Z_i) dt.
    """
    if not np.isfinite(xi).all():
        raise BlowupError("ξ содержит неконечные значения", step=ens.steps, module="bsde")

    M, N, d = ens.paths, ens.steps, ens.dimension
    dt = ens.dt
    times = ens.times
    theta = float(options["theta"]) if options["scheme"] == "theta" else 1.0
    radius = options["clip_radius"]

    Y = np.empty((M, N + 1))
    Z = np.empty((M, N, d))
    Y[:, N] = xi
    lo, hi = float(xi.min()), float(xi.max())
    bound = 0.0
    accumulated = np.zeros(M)
    drift_next: Optional[np.ndarray] = None
    reports: List[StepReport] = []

    for i in range(N - 1, -1, -1):
        t = float(times[i])
        dB = ens.increments[:, i, :]
        nxt = Y[:, i + 1]
        weight = theta if drift_next is not None else 1.0
        extra = None if drift_next is None or weight == 1.0 else drift_next

        # F_0 тривиальна: условное ожидание равно среднему
        if i == 0:
            y_hat = np.full(M, nxt.mean())
            z = np.broadcast_to(z_sign * ((nxt - y_hat)[:, None] * dB).mean(axis=0) / dt, (M, d)).copy()
            g_hat = None if extra is None else np.full(M, extra.mean())
            degree, r2 = 0, 1.0
        else:
            reg = ConditionalRegression(ens.factors(i), options["degree"], options["block"],
                                        options["threads"], options["condition_limit"], step=i)
            stacked = nxt[:, None] if extra is None else np.column_stack([nxt, extra])
            fitted, _, r2s = reg.project(stacked)
            y_hat = fitted[:, 0]
            g_hat = None if extra is None else fitted[:, 1]
            z_fit, _, _ = reg.project((nxt - y_hat)[:, None] * dB)
            z = z_sign * z_fit / dt
            degree, r2 = reg.degree, float(r2s[0])

        # Срезание Z
        clips = 0
        if radius is not None:
            norms = np.linalg.norm(z, axis=1)
            over = norms > radius
            clips = int(over.sum())
            if clips:
                z[over] *= (radius / norms[over])[:, None]
        Z[:, i, :] = z

        g = np.asarray(drift(t, z), dtype=float).reshape(-1)
        if not np.isfinite(g).all():
            raise BlowupError(f"неконечный драйвер на шаге {i}", step=i, module="bsde")

        increment = weight * g if g_hat is None else weight * g + (1.0 - weight) * g_hat
        y = y_hat - increment * dt
        accumulated += increment * dt

        bound += float(np.max(np.abs(g))) * dt
        if g_hat is not None:
            bound += (1.0 - weight) * float(np.max(np.abs(g_hat))) * dt
        # Усечение Y границами ξ плюс накопленный драйвер
        truncated = (y < lo - bound) | (y > hi + bound)
        y = np.clip(y, lo - bound, hi + bound)
        if not np.isfinite(y).all():
            raise BlowupError(f"неконечное Y на шаге {i}", step=i, module="bsde")
        Y[:, i] = y
        drift_next = g

        reports.append(StepReport(step=i, t=t, degree=degree, r2=r2,
                                  truncations=int(truncated.sum()), clips=clips))
        if clips:
            logger.warning(f"Шаг {i}: Z срезан на {clips} траекториях (радиус {radius})")

    reports.reverse()
    se = float(np.std(xi - accumulated, ddof=1) / math.sqrt(M)) if M > 1 else float("nan")
    solution = BsdeSolution(Y=Y, Z=Z, times=times,
                            basis_spec=BasisSpec(degree=int(options["degree"])),
                            residual_report=reports, y0_std_error=se,
                            convention=convention, scheme=options["scheme"])
    logger.info(f"BSDE решено: Y0={solution.Y0:.6g} ± {se:.2g}, M={M}, N={N}, "
                f"срезаний Z={solution.clip_count}")
    return solution


def solve_lsmc(ens: PathEnsemble, endowment: Endowment, gen: Generator,
               basis_spec: Optional[BasisSpec] = None, clip_radius: Optional[float] = None,
               scheme: Optional[str] = None, theta: Optional[float] = None,
               threads: Optional[int] = None,
               settings: Optional[Dict[str, Any]] = None) -> BsdeSolution:
    """
    Решение BSDE с драйвером -g методом наименьших квадратов Монте-Карло.

    Args:
        ens: Ансамбль приращений (и, возможно, состояния)
        endowment: ξ как функция терминального состояния, вектор или константа
        gen: Генератор g
        basis_spec: Базис регрессии (по умолчанию полиномы степени 4)
        clip_radius: Радиус срезания |Z|; любое срезание делает решение неприемлемым
        scheme: "explicit" или "theta"
        theta: Вес явной части в θ-схеме
        threads: Потоки для блочного накопления
        settings: Секция bsde настроек
    """
    if gen.dimension != ens.dimension:
        raise ParamError(f"размерность генератора {gen.dimension} ≠ размерности ансамбля "
                         f"{ens.dimension}", module="bsde")
    options = _options(settings, clip_radius=clip_radius, scheme=scheme, theta=theta,
                       threads=threads, degree=basis_spec.degree if basis_spec else None)
    xi = evaluate_endowment(ens, endowment)
    return _backward(ens, xi, gen.func, -1.0, options, "concave")


def to_standard_form(gen: Generator) -> Drift:
    """Драйвер стандартной формы ĝ(t, ẑ) = -g(t, -ẑ); тогда Ẑ = -Z."""
    def driver(t: float, z: np.ndarray) -> np.ndarray:
        return -np.asarray(gen.func(t, -np.asarray(z, dtype=float)), dtype=float)
    return driver


def standard_form_solve(ens: PathEnsemble, endowment: Endowment, driver: Drift,
                        basis_spec: Optional[BasisSpec] = None,
                        clip_radius: Optional[float] = None, threads: Optional[int] = None,
                        settings: Optional[Dict[str, Any]] = None) -> BsdeSolution:
    """
    Учебная рекурсия: Ẑ_i = E_i[(Y_{i+1}-Ŷ_i)ΔB]/dt, Y_i = Ŷ_i + ĝ(t_i, Ẑ_i) dt.
    """
    options = _options(settings, clip_radius=clip_radius, threads=threads, scheme="explicit",
                       degree=basis_spec.degree if basis_spec else None)
    xi = evaluate_endowment(ens, endowment)
    return _backward(ens, xi, lambda t, z: -np.asarray(driver(t, z), dtype=float), 1.0,
                     options, "standard")


def split_step(ens: PathEnsemble, split_time: float) -> int:
    """Номер шага сетки для t*; t* вне сетки недопустим."""
    k = int(round(split_time / ens.dt))
    if abs(k * ens.dt - split_time) > 1e-9 * max(1.0, ens.horizon) or not 1 <= k <= ens.steps - 1:
        raise ParamError(f"t* = {split_time} не является внутренним узлом сетки "
                         f"(dt = {ens.dt:.6g})", module="bsde")
    return k


def two_stage_solve(ens: PathEnsemble, endowment: Endowment, gen: Generator, split_time: float,
                    basis_spec: Optional[BasisSpec] = None, clip_radius: Optional[float] = None,
                    threads: Optional[int] = None,
                    settings: Optional[Dict[str, Any]] = None,
                    tail_ensemble: Optional[PathEnsemble] = None) -> Tuple[float, float]:
    """
    Проверка согласованности по времени.

    Этап [t*, T] решается отдельно на независимом ансамбле tail_ensemble
    (по умолчанию тот же размер с зерном seed + 1). Его значение в t*
    аппроксимируется функцией состояния x ↦ U_{t*}(x), которая служит
    терминальным условием задачи на [0, t*] на основном ансамбле.

    Args:
        ens (PathEnsemble): Основной ансамбль.
        endowment: ξ как функция терминального состояния или константа.
        tail_ensemble (PathEnsemble): Ансамбль этапа [t*, T]; обязателен при заданном X.

    Returns:
        Tuple: (Y0 прямого решения, Y0 двухэтапного решения)

    Raises:
        InputError: ξ задано значениями на траекториях основного ансамбля.
        ParamError: Сетка tail_ensemble не совпадает с основной.
    """
    k = split_step(ens, split_time)
    if not callable(endowment) and np.ndim(endowment) > 0:
        raise InputError("для независимого этапа [t*, T] ξ должно быть функцией состояния")
    tail = tail_ensemble if tail_ensemble is not None else independent_ensemble(ens)
    if (tail.steps, tail.dimension) != (ens.steps, ens.dimension) or \
            abs(tail.horizon - ens.horizon) > 1e-12 * max(1.0, ens.horizon):
        raise ParamError(f"сетка ансамбля этапа [t*, T] (N={tail.steps}, d={tail.dimension}, "
                         f"T={tail.horizon}) не совпадает с основной", module="bsde")

    direct = solve_lsmc(ens, endowment, gen, basis_spec, clip_radius, threads=threads,
                        settings=settings)
    stage = solve_lsmc(tail, endowment, gen, basis_spec, clip_radius, threads=threads,
                       settings=settings)

    # U_{t*} как функция состояния по независимым траекториям
    options = _options(settings, degree=basis_spec.degree if basis_spec else None, threads=threads)
    reg = ConditionalRegression(tail.factors(k), options["degree"], options["block"],
                                options["threads"], options["condition_limit"], step=k)
    _, coefficients, _ = reg.project(stage.Y[:, k][:, None])
    terminal = reg.basis.design(ens.factors(k)) @ coefficients

    nested = solve_lsmc(ens.truncate(k), terminal[:, 0], gen, basis_spec, clip_radius,
                        threads=threads, settings=settings)
    logger.info(f"Двухэтапное решение: прямое {direct.Y0:.6g}, вложенное {nested.Y0:.6g} "
                f"(этап [t*, T] на seed={tail.seed})")
    return direct.Y0, nested.Y0
