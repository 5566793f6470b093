"""
Счетные (counter-based) подпотоки для воспроизводимой генерации
"""
from concurrent.futures import ThreadPoolExecutor
from typing import Tuple

import numpy as np
from scipy.special import ndtri

STREAM_SCHEME = "philox-block"

_TINY = np.finfo(float).tiny


def block_generator(seed: int, block: int) -> np.random.Generator:
    """
    Генератор подпотока блока траекторий.

    Ключ Philox равен seed, третье слово счетчика равно номеру блока, поэтому
    траектории блока не зависят от общего числа путей M.
    """
    counter = np.array([0, 0, int(block), 0], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=int(seed), counter=counter))


def block_normals(seed: int, block: int, block_size: int, shape: Tuple[int, ...]) -> np.ndarray:
    """Стандартные нормальные величины блока через обратную функцию распределения."""
    uniforms = block_generator(seed, block).random((block_size,) + tuple(shape))
    return ndtri(np.maximum(uniforms, _TINY))


def stream_ids(paths: int, block_size: int) -> np.ndarray:
    """Идентификаторы подпотоков (блок, позиция) для каждой траектории."""
    index = np.arange(paths)
    return np.stack([index // block_size, index % block_size], axis=1)


def fill_normals(out: np.ndarray, seed: int, block_size: int, threads: int = 1):
    """
    Заполнение массива (M, ...) нормальными величинами по блокам.

    Каждый блок пишет в свой срез, поэтому результат не зависит от числа потоков.
    """
    paths = out.shape[0]
    tail = out.shape[1:]
    blocks = (paths + block_size - 1) // block_size

    def work(block: int):
        start = block * block_size
        stop = min(start + block_size, paths)
        out[start:stop] = block_normals(seed, block, block_size, tail)[: stop - start]

    if threads <= 1 or blocks == 1:
        for block in range(blocks):
            work(block)
        return
    with ThreadPoolExecutor(max_workers=threads) as pool:
        list(pool.map(work, range(blocks)))
