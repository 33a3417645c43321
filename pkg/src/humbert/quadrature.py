"""Globally adaptive Gauss-Legendre quadrature at working precision.

Each panel carries a degree-``n`` rule on the whole interval and on its two
halves; the difference is the panel's error estimate. The panel with the
largest error is split until the summed error meets the tolerance.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import ConvergenceError
from .scalars import context

DEGREE = 20


@lru_cache(maxsize=32)
def _legendre_rule(n: int, bits: int):
    """Nodes and weights on [-1, 1]: numpy's double-precision rule Newton-polished to ``bits``."""
    ctx = context()
    x0, _ = np.polynomial.legendre.leggauss(n)
    nodes, weights = [], []
    with ctx.workprec(bits + 16):
        eps = ctx.ldexp(ctx.mpf(1), -bits - 8)
        for guess in x0:
            x = ctx.mpf(float(guess))
            for _ in range(100):
                p0, p1 = ctx.mpf(1), x
                for k in range(2, n + 1):
                    p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
                dp = n * (x * p1 - p0) / (x * x - 1)
                dx = p1 / dp
                x -= dx
                if abs(dx) < eps:
                    break
            p0, p1 = ctx.mpf(1), x
            for k in range(2, n + 1):
                p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
            dp = n * (x * p1 - p0) / (x * x - 1)
            nodes.append(x)
            weights.append(2 / ((1 - x * x) * dp * dp))
    return tuple(nodes), tuple(weights)


def gauss_legendre(f: Callable, lo, hi, n: int = DEGREE):
    """Degree-``n`` rule for ``int f`` and ``int |f|`` over ``[lo, hi]``."""
    ctx = context()
    nodes, weights = _legendre_rule(n, ctx.prec)
    half = (hi - lo) / 2
    mid = (hi + lo) / 2
    total = ctx.mpc(0)
    size = ctx.mpf(0)
    for x, w in zip(nodes, weights):
        v = w * f(mid + half * x)
        total += v
        size += abs(v)
    return total * half, size * abs(half)


@dataclass
class QuadResult:
    value: object
    err: object
    abs_integral: object
    panels: int


def integrate(
    f: Callable,
    breakpoints,
    rel_tol: float,
    abs_floor=0,
    max_panels: int = 4000,
) -> QuadResult:
    """Integrate ``f`` over consecutive intervals of ``breakpoints``.

    ``abs_integral`` estimates the integral of ``|f|``, used by callers to judge
    cancellation.
    """
    ctx = context()
    heap = []
    counter = 0

    def refine(lo, hi, coarse):
        mid = (lo + hi) / 2
        left = gauss_legendre(f, lo, mid)
        right = gauss_legendre(f, mid, hi)
        return left, right, abs(left[0] + right[0] - coarse[0])

    total = ctx.mpc(0)
    err_sum = ctx.mpf(0)
    abs_sum = ctx.mpf(0)

    def push(lo, hi, coarse):
        nonlocal counter, total, err_sum, abs_sum
        left, right, err = refine(lo, hi, coarse)
        heapq.heappush(heap, (-err, counter, lo, hi, left, right, err))
        counter += 1
        total += left[0] + right[0]
        err_sum += err
        abs_sum += left[1] + right[1]

    for lo, hi in zip(breakpoints[:-1], breakpoints[1:]):
        push(lo, hi, gauss_legendre(f, lo, hi))

    while err_sum > max(rel_tol * abs(total), abs_floor):
        if len(heap) >= max_panels:
            raise ConvergenceError(
                f"quadrature did not reach tolerance in {max_panels} panels"
            )
        _, _, lo, hi, left, right, err = heapq.heappop(heap)
        total -= left[0] + right[0]
        err_sum -= err
        abs_sum -= left[1] + right[1]
        mid = (lo + hi) / 2
        push(lo, mid, left)
        push(mid, hi, right)
    return QuadResult(total, err_sum, abs_sum, len(heap))
