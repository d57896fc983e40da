"""Adaptive panel quadrature.

Both engines use tensor Gauss-Legendre rules on panels with a two-level
error estimate (panel value vs. the sum over its children) and subdivide
the worst panel first.  Heap ties are broken by insertion order, so results
are bit-for-bit deterministic.  If the panel budget runs out before the
tolerance is met, ToleranceNotMet carries the best estimate and its bound.
"""

from __future__ import annotations

import heapq

import numpy as np

from .errors import ToleranceNotMet

_X7, _W7 = np.polynomial.legendre.leggauss(7)
_X10, _W10 = np.polynomial.legendre.leggauss(10)


def _gauss_1d(f, a, b):
    h = 0.5 * (b - a)
    m = 0.5 * (a + b)
    return h * sum(w * f(m + h * x) for x, w in zip(_X10, _W10))


def _gauss_2d(f, x0, x1, y0, y1):
    hx = 0.5 * (x1 - x0)
    mx = 0.5 * (x0 + x1)
    hy = 0.5 * (y1 - y0)
    my = 0.5 * (y0 + y1)
    total = 0.0
    for xi, wi in zip(_X7, _W7):
        x = mx + hx * xi
        row = 0.0
        for yj, wj in zip(_X7, _W7):
            row += wj * f(x, my + hy * yj)
        total += wi * row
    return hx * hy * total


def integrate_1d(f, a: float, b: float, tol: float = 1e-10,
                 max_panels: int = 4000) -> float:
    """Integral of f over [a, b] to absolute tolerance tol."""
    if a == b:
        return 0.0
    sign = 1.0
    if b < a:
        a, b = b, a
        sign = -1.0

    counter = 0

    def make(lo, hi, coarse):
        nonlocal counter
        mid = 0.5 * (lo + hi)
        cl = _gauss_1d(f, lo, mid)
        cr = _gauss_1d(f, mid, hi)
        fine = cl + cr
        err = abs(fine - coarse)
        counter += 1
        return (-err, counter, lo, hi, fine, cl, cr)

    heap = [make(a, b, _gauss_1d(f, a, b))]
    made = 1
    while True:
        total = sum(p[4] for p in heap)
        err_total = sum(-p[0] for p in heap)
        if err_total <= tol:
            return sign * total
        if made >= max_panels:
            raise ToleranceNotMet(sign * total, err_total)
        _, _, lo, hi, _, cl, cr = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        heapq.heappush(heap, make(lo, mid, cl))
        heapq.heappush(heap, make(mid, hi, cr))
        made += 2


def integrate_2d(f, x0: float, x1: float, y0: float, y1: float,
                 tol: float = 1e-8, max_panels: int = 3000) -> float:
    """Integral of f over the rectangle [x0,x1] x [y0,y1], absolute tol."""
    if x0 == x1 or y0 == y1:
        return 0.0

    counter = 0

    def make(bounds, coarse):
        nonlocal counter
        a, b, c, d = bounds
        mx = 0.5 * (a + b)
        my = 0.5 * (c + d)
        quads = ((a, mx, c, my), (mx, b, c, my), (a, mx, my, d), (mx, b, my, d))
        vals = tuple(_gauss_2d(f, *q) for q in quads)
        fine = sum(vals)
        err = abs(fine - coarse)
        counter += 1
        return (-err, counter, bounds, fine, quads, vals)

    heap = [make((x0, x1, y0, y1), _gauss_2d(f, x0, x1, y0, y1))]
    made = 1
    while True:
        total = sum(p[3] for p in heap)
        err_total = sum(-p[0] for p in heap)
        if err_total <= tol:
            return total
        if made >= max_panels:
            raise ToleranceNotMet(total, err_total)
        _, _, _, _, quads, vals = heapq.heappop(heap)
        for q, v in zip(quads, vals):
            heapq.heappush(heap, make(q, v))
        made += 4
