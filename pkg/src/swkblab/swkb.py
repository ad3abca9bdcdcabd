"""Turning points and the SWKB integral  I = int_{x_L}^{x_R} sqrt(E_n - W^2) dx.

The integral is evaluated after the substitution x = c - r cos(theta), with
c and r the midpoint and half-width of [x_L, x_R].  For simple turning points
E_n - W^2 = (x - x_L)(x_R - x) g(x) with g > 0, so the transformed integrand
r^2 sin^2(theta) sqrt(g) is smooth on [0, pi].  Scheme A (Romberg) gives the
canonical value, scheme B (tanh-sinh) the cross-check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect, brentq

from .errors import MultipleRegionError, NegativityError, NoRootError, ParamError
from .model import (
    DOMAIN_FLOOR,
    EnergyLevel,
    Kind,
    ScaledPoint,
    SuperpotentialModel,
    _check_level,
    eval_scaled_bracket,
)
from .quadrature import romberg, tanh_sinh

_EPS = np.finfo(float).eps
_MAX_EXPANSIONS = 200


@dataclass(frozen=True)
class SwkbConfig:
    root_tol: float = 1e-13
    quad_tol: float = 1e-11
    scan_points: int = 4096
    clamp: float = 1e-14
    max_level_romberg: int = 20
    max_level_tanh_sinh: int = 12

    def __post_init__(self):
        for name in ("root_tol", "quad_tol", "clamp"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise ParamError(f"{name} must be finite and > 0, got {v!r}")
        if self.scan_points < 16:
            raise ParamError(f"scan_points must be >= 16, got {self.scan_points!r}")


DEFAULT_CONFIG = SwkbConfig()


@dataclass(frozen=True)
class TurningPoints:
    """Limits of the classically allowed region; residuals are |E - W^2| there."""

    x_left: float
    x_right: float
    bracket_residuals: tuple[float, float]

    @property
    def center(self) -> float:
        return 0.5 * (self.x_left + self.x_right)

    @property
    def half_width(self) -> float:
        return 0.5 * (self.x_right - self.x_left)


@dataclass(frozen=True)
class SwkbResult:
    """One level of the SWKB test.

    integral is in action units (dimensionless for the scaled variant);
    deviation = integral / (pi hbar) - n.
    """

    n: int
    energy: float
    turning: TurningPoints
    integral: float
    deviation: float
    quad_error: float
    scheme_agreement: float
    integral_b: float
    hbar: float = 1.0
    romberg_history: tuple[float, ...] = ()

    @property
    def defect(self) -> float:
        """I - n pi hbar."""
        return self.integral - self.n * math.pi * self.hbar


# --- turning points -------------------------------------------------------


def _zero_of_w(w, floor: float, radial: bool, scale: float) -> float:
    if radial:
        lo = floor
        hi = scale
        for _ in range(_MAX_EXPANSIONS):
            if w(hi) > 0.0:
                break
            hi *= 2.0
        else:
            raise NoRootError("W never turns positive on the radial domain")
        if w(lo) >= 0.0:
            raise NoRootError("W is not negative at the domain floor")
    else:
        lo, hi = -scale, scale
        for _ in range(_MAX_EXPANSIONS):
            if w(lo) < 0.0 < w(hi):
                break
            lo *= 2.0
            hi *= 2.0
        else:
            raise NoRootError("could not bracket the zero of W")
    return bisect(w, lo, hi, xtol=1e-300, rtol=4 * _EPS, maxiter=2000)


def _expand(f, x0: float, step, floor: float):
    """Walk outward from x0 with ``step(k)`` until f < 0; return (inside, outside)."""
    inside = x0
    for k in range(_MAX_EXPANSIONS):
        x = step(k)
        if x < floor:
            raise NoRootError("bracket expansion crossed the domain floor without a sign change")
        if not math.isfinite(x):
            break
        if f(x) < 0.0:
            return inside, x
        inside = x
    raise NoRootError("bracket expansion exceeded its bounds")


def _refine(f, inside: float, outside: float) -> float:
    lo, hi = sorted((inside, outside))
    root = brentq(f, lo, hi, xtol=1e-300, rtol=4 * _EPS, maxiter=500)
    # land on the allowed side so the integrand never sees a negative endpoint
    for _ in range(64):
        if f(root) >= 0.0:
            break
        root = float(np.nextafter(root, inside))
    return root


def _sign_changes(values: np.ndarray) -> int:
    pos = values > 0.0
    return int(np.count_nonzero(pos[1:] != pos[:-1]))


def _turning_points(w, energy: float, floor: float, radial: bool, scale: float,
                    cfg: SwkbConfig) -> TurningPoints:
    def f(x):
        wx = w(x)
        return energy - wx * wx

    if not energy > 0.0:
        raise NoRootError("turning points need E > 0")
    x0 = _zero_of_w(w, floor, radial, scale)
    if not f(x0) > 0.0:
        raise NoRootError("E - W^2 is not positive at the zero of W")
    s = max(scale, abs(x0))
    r_in, r_out = _expand(f, x0, lambda k: x0 + s * 2.0 ** (k - 4), floor)
    if radial:
        l_in, l_out = _expand(f, x0, lambda k: x0 / 2.0 ** ((k + 1) / 4.0), floor)
    else:
        l_in, l_out = _expand(f, x0, lambda k: x0 - s * 2.0 ** (k - 4), floor)
    x_left = _refine(f, l_in, l_out)
    x_right = _refine(f, r_in, r_out)
    if not x_left < x_right:
        raise NoRootError("turning points collapsed")

    lo = x_left - 0.1 * abs(x_left)
    hi = x_right + 0.1 * abs(x_right)
    if radial:
        lo = max(lo, floor)
    grid = np.linspace(lo, hi, cfg.scan_points)
    if radial:
        # W is not guaranteed monotone for the extended model: scan the whole
        # half-line on a log grid as well
        grid = np.union1d(grid, np.geomspace(floor, 10.0 * x_right, cfg.scan_points))
    changes = _sign_changes(f(grid))
    if changes != 2:
        raise MultipleRegionError(
            f"found {changes} sign changes of E - W^2; expected exactly one allowed interval"
        )

    res = (abs(f(x_left)), abs(f(x_right)))
    if max(res) > cfg.root_tol * energy:
        raise NoRootError(f"turning-point residuals {res!r} exceed root_tol * E")
    return TurningPoints(float(x_left), float(x_right), (float(res[0]), float(res[1])))


def find_turning_points(model: SuperpotentialModel, level: EnergyLevel,
                        config: SwkbConfig = DEFAULT_CONFIG) -> TurningPoints:
    """The two roots of E_n - W^2(x) bounding the classically allowed region.

    Raises
    ------
    ParamError
        For n = 0, whose allowed region has zero width.
    MultipleRegionError
        If more than one allowed interval is detected.
    NoRootError
        If a bracket cannot be formed.
    """
    if level.n < 1:
        raise ParamError("turning points are only defined for n >= 1 (n = 0 is degenerate)")
    return _turning_points(model.W, level.energy, model.x_floor, model.is_radial,
                           model.params.length_scale, config)


# --- integral -------------------------------------------------------------


_HALF_PI = 0.5 * math.pi


def _theta_integrand(f, energy: float, tp: TurningPoints, clamp: float):
    xl, xr, r = tp.x_left, tp.x_right, tp.half_width
    cutoff = -clamp * energy

    def g(theta):
        # x = c - r cos(theta), measured from the nearer turning point so that
        # x does not lose eps*c near x_left (where E - W^2 is steep)
        theta = np.asarray(theta, dtype=float)
        x = np.where(theta <= _HALF_PI,
                     xl + 2.0 * r * np.sin(0.5 * theta) ** 2,
                     xr - 2.0 * r * np.sin(0.5 * (math.pi - theta)) ** 2)
        vals = np.asarray(f(x), dtype=float)
        neg = vals < 0.0
        if np.any(neg):
            worst = float(np.min(vals))
            if worst < cutoff:
                i = int(np.argmin(vals))
                raise NegativityError(
                    f"E - W^2 = {worst!r} at x = {float(np.ravel(x)[i])!r} inside the interval"
                )
            vals = np.where(neg, 0.0, vals)
        return np.sqrt(vals) * r * np.sin(theta)

    return g


def _two_scheme(w, energy: float, tp: TurningPoints, cfg: SwkbConfig):
    def f(x):
        wx = np.asarray(w(x))
        return energy - wx * wx

    g = _theta_integrand(f, energy, tp, cfg.clamp)
    a = romberg(g, 0.0, math.pi, rel_tol=cfg.quad_tol, max_level=cfg.max_level_romberg)
    b = tanh_sinh(g, 0.0, math.pi, rel_tol=cfg.quad_tol, max_level=cfg.max_level_tanh_sinh)
    return a, b


def _degenerate(w, floor: float, radial: bool, scale: float) -> TurningPoints:
    x0 = _zero_of_w(w, floor, radial, scale)
    r = float(w(x0)) ** 2
    return TurningPoints(float(x0), float(x0), (r, r))


def swkb_integral(model: SuperpotentialModel, n: int,
                  config: SwkbConfig = DEFAULT_CONFIG) -> SwkbResult:
    """Evaluate the SWKB integral for level ``n`` of ``model``.

    n = 0 short-circuits to I = 0 (zero-width allowed region).
    """
    n = _check_level(n)
    level = model.energy(n)
    hbar = model.params.hbar
    scale = model.params.length_scale
    if n == 0:
        tp = _degenerate(model.W, model.x_floor, model.is_radial, scale)
        return SwkbResult(0, 0.0, tp, 0.0, 0.0, 0.0, 0.0, 0.0, hbar)
    tp = find_turning_points(model, level, config)
    a, b = _two_scheme(model.W, level.energy, tp, config)
    return SwkbResult(
        n=n,
        energy=level.energy,
        turning=tp,
        integral=a.value,
        deviation=a.value / (math.pi * hbar) - n,
        quad_error=a.error,
        scheme_agreement=abs(a.value - b.value),
        integral_b=b.value,
        hbar=hbar,
        romberg_history=a.history,
    )


def swkb_integral_scaled(ell_tilde: float, n: int, kind: Kind = Kind.EXTENDED,
                         config: SwkbConfig = DEFAULT_CONFIG) -> SwkbResult:
    """Dimensionless integral J = int sqrt(eta) dy~ between the roots of eta.

    Depends on (ell_tilde, n) only; the physical integral is I = hbar * J.
    The returned record uses hbar = 1, so ``deviation = J/pi - n``.
    """
    kind = Kind(kind)
    n = _check_level(n)
    # validates ell_tilde against the model's bound
    eval_scaled_bracket(ScaledPoint(1.0, float(ell_tilde)), kind)

    def w(y):
        return eval_scaled_bracket(ScaledPoint(y, float(ell_tilde)), kind)

    floor = DOMAIN_FLOOR if kind.is_radial else -math.inf
    e = float(kind.level_spacing * n)
    if n == 0:
        tp = _degenerate(w, floor, kind.is_radial, 1.0)
        return SwkbResult(0, 0.0, tp, 0.0, 0.0, 0.0, 0.0, 0.0)
    tp = _turning_points(w, e, floor, kind.is_radial, 1.0, config)
    a, b = _two_scheme(w, e, tp, config)
    return SwkbResult(
        n=n,
        energy=e,
        turning=tp,
        integral=a.value,
        deviation=a.value / math.pi - n,
        quad_error=a.error,
        scheme_agreement=abs(a.value - b.value),
        integral_b=b.value,
        romberg_history=a.history,
    )
