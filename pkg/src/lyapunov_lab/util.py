"""Small numeric helpers shared across modules."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0  # 1/phi
_INV_PHI2 = (3.0 - math.sqrt(5.0)) / 2.0  # 1/phi^2


def golden_max(f: Callable[[float], float], lo: float, hi: float, tol: float) -> tuple[float, float]:
    """Golden-section maximization of a unimodal f on [lo, hi].

    Returns (argmax, value) once the bracket width drops below tol.
    Derivative-free, ~1.44 log2((hi-lo)/tol) evaluations.
    """
    if hi < lo:
        lo, hi = hi, lo
    h = hi - lo
    if h <= tol:
        x = 0.5 * (lo + hi)
        return x, f(x)
    a, b = lo, hi
    c = a + _INV_PHI2 * h
    d = a + _INV_PHI * h
    fc, fd = f(c), f(d)
    while h > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            h = b - a
            c = a + _INV_PHI2 * h
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            h = b - a
            d = a + _INV_PHI * h
            fd = f(d)
    x = 0.5 * (a + b)
    fx = f(x)
    # never report worse than an interior probe
    if fc >= fx and fc >= fd:
        return c, fc
    if fd >= fx:
        return d, fd
    return x, fx


def log_abs_bigint(x: int) -> float:
    """log|x| for an arbitrary-precision integer, accurate to ~1 ulp.

    Splits x into a 64-bit mantissa and a power of two so values far
    beyond float range still get an accurate logarithm. Returns -inf
    for x == 0.
    """
    ax = abs(x)
    if ax == 0:
        return float("-inf")
    nbits = ax.bit_length()
    if nbits <= 63:
        return math.log(ax)
    shift = nbits - 63
    return math.log(ax >> shift) + shift * math.log(2.0)


def neumaier_add(total: float, comp: float, x: float) -> tuple[float, float]:
    """One step of compensated summation: returns updated (total, comp)."""
    t = total + x
    if abs(total) >= abs(x):
        comp += (total - t) + x
    else:
        comp += (x - t) + total
    return t, comp


def ordered_map(fn: Callable[[T], R], items: Sequence[T] | Iterable[T], threads: int = 1) -> list[R]:
    """Map fn over items, optionally on a thread pool.

    Results always come back in input order, so reductions over them are
    deterministic no matter how many workers ran.
    """
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))
