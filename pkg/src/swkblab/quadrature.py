"""Two independent quadrature rules for smooth integrands on a finite interval.

Both take a vectorised integrand ``f(x: ndarray) -> ndarray``.

* :func:`romberg` -- composite trapezoid with Richardson extrapolation, refined
  by interval halving.
* :func:`tanh_sinh` -- double-exponential (Takahashi-Mori) rule with step
  halving.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import QuadratureDivergence

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class QuadResult:
    value: float
    error: float
    levels: int
    evaluations: int
    history: tuple[float, ...] = field(default=(), repr=False)


def _noise_floor(value: float, scale: float) -> float:
    return 64.0 * _EPS * max(abs(value), scale)


def romberg(f, a: float, b: float, rel_tol: float = 1e-11, min_level: int = 4,
            max_level: int = 20, abs_floor: float = 0.0) -> QuadResult:
    """Romberg integration of ``f`` over ``[a, b]``.

    Acceptance requires the diagonal estimates to differ by at most
    ``rel_tol * |I|`` (or ``abs_floor``) and the last three differences to
    be non-increasing once roundoff is discounted.

    Raises
    ------
    QuadratureDivergence
        If ``max_level`` halvings do not meet the acceptance test.
    """
    a = float(a)
    b = float(b)
    if a == b:
        return QuadResult(0.0, 0.0, 0, 0)
    width = b - a
    fa, fb = np.asarray(f(np.array([a, b])), dtype=float)
    trap = 0.5 * width * (fa + fb)
    evaluations = 2
    prev_row = [trap]
    diag = [trap]
    diffs: list[float] = []
    scale = abs(width) * max(abs(fa), abs(fb))
    for level in range(1, max_level + 1):
        n_new = 2 ** (level - 1)
        h = width / 2 ** level
        mids = a + h * (2.0 * np.arange(n_new) + 1.0)
        vals = np.asarray(f(mids), dtype=float)
        evaluations += n_new
        scale = max(scale, abs(width) * float(np.max(np.abs(vals))))
        row = [0.5 * prev_row[0] + h * float(np.sum(vals))]
        for j in range(1, level + 1):
            factor = 4.0 ** j
            row.append(row[j - 1] + (row[j - 1] - prev_row[j - 1]) / (factor - 1.0))
        prev_row = row
        est = row[-1]
        floor = _noise_floor(est, _EPS * scale)
        diffs.append(max(abs(est - diag[-1]), floor))
        diag.append(est)
        if level < min_level or len(diffs) < 3:
            continue
        target = max(rel_tol * abs(est), abs_floor, floor)
        settled = diffs[-3] >= diffs[-2] >= diffs[-1]
        if diffs[-1] <= target and settled:
            return QuadResult(est, diffs[-1], level, evaluations, tuple(diag))
    raise QuadratureDivergence(
        f"Romberg did not reach rel_tol={rel_tol:g} in {max_level} levels "
        f"(last estimates {diag[-3:]!r})"
    )


_HALF_PI = 0.5 * math.pi
_T_MAX = 4.0


def _ts_nodes(ts: np.ndarray, a: float, b: float):
    """Abscissae near each end and weights for t >= 0 on [a, b].

    Distances to the endpoints are formed directly so nodes close to an end
    do not lose precision to 1 - tanh cancellation.
    """
    r = 0.5 * (b - a)
    u = _HALF_PI * np.sinh(ts)
    dist = 2.0 * r / (1.0 + np.exp(2.0 * u))
    w = r * _HALF_PI * np.cosh(ts) / np.cosh(u) ** 2
    return a + dist, b - dist, w


def tanh_sinh(f, a: float, b: float, rel_tol: float = 1e-11, min_level: int = 3,
              max_level: int = 12, abs_floor: float = 0.0) -> QuadResult:
    """Tanh-sinh integration of ``f`` over ``[a, b]``.

    The step starts at 1/2 and halves per level, reusing earlier nodes.
    The error estimate is the difference of the last two levels.
    """
    a = float(a)
    b = float(b)
    if a == b:
        return QuadResult(0.0, 0.0, 0, 0)
    h = 0.5
    ts = np.arange(1, int(_T_MAX / h) + 1) * h
    left, right, w = _ts_nodes(ts, a, b)
    mid = 0.5 * (a + b)
    total = 0.5 * (b - a) * _HALF_PI * float(np.asarray(f(np.array([mid])))[0])
    total += float(np.sum(w * (np.asarray(f(left)) + np.asarray(f(right)))))
    evaluations = 1 + 2 * ts.size
    est = h * total
    history = [est]
    scale = abs(est)
    for level in range(1, max_level + 1):
        h *= 0.5
        ts = (2.0 * np.arange(int(_T_MAX / (2.0 * h))) + 1.0) * h
        left, right, w = _ts_nodes(ts, a, b)
        total += float(np.sum(w * (np.asarray(f(left)) + np.asarray(f(right)))))
        evaluations += 2 * ts.size
        new = h * total
        diff = abs(new - est)
        est = new
        history.append(est)
        scale = max(scale, abs(est))
        floor = _noise_floor(est, _EPS * scale)
        if level >= min_level and diff <= max(rel_tol * abs(est), abs_floor, floor):
            return QuadResult(est, max(diff, floor), level, evaluations, tuple(history))
    raise QuadratureDivergence(
        f"tanh-sinh did not reach rel_tol={rel_tol:g} in {max_level} levels "
        f"(last estimates {history[-3:]!r})"
    )
