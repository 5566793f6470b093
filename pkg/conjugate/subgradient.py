"""
Субдифференциал генератора и выбор элемента с минимальной нормой
"""
from typing import Tuple, Union

import numpy as np

from conjugate.tabulated import TabulatedConvexFunction
from model.functions import Generator, Subdifferential
from utils.errors import RangeError


def subgradient(gen: Union[Generator, TabulatedConvexFunction], t: float, z) -> Tuple[Subdifferential, np.ndarray]:
    """
    Множество ∂g(t, z) и его элемент с минимальной нормой.

    Для табличной g это отрезок [левый наклон, правый наклон]; для радиальной
    таблицы в нуле шар радиуса правого наклона профиля.

    Returns:
        Tuple[Subdifferential, np.ndarray]: Описание множества и выбранный элемент.
    """
    if isinstance(gen, Generator):
        value = np.asarray(gen.eval(t, z))
        if not np.all(np.isfinite(value)):
            raise RangeError(f"g не конечна в точке z = {z}")
        subdiff = gen.subdifferential(t, z)
        return subdiff, subdiff.min_norm()

    z_arr = np.atleast_1d(np.asarray(z, dtype=float))
    if not gen.radial:
        left, right = gen.slopes_at(float(z_arr[0]))
        subdiff = Subdifferential.interval(left, right)
        return subdiff, subdiff.min_norm()

    r = float(np.linalg.norm(z_arr))
    left, right = gen.slopes_at(r)
    if r == 0.0:
        subdiff = Subdifferential.ball(np.zeros_like(z_arr), max(right, 0.0))
        return subdiff, subdiff.min_norm()
    direction = z_arr / r
    if z_arr.size == 1:
        lo, hi = sorted((left * direction[0], right * direction[0]))
        subdiff = Subdifferential.interval(lo, hi)
    else:
        subdiff = Subdifferential.point(left * direction)
    return subdiff, subdiff.min_norm()
