"""Additive shape invariance as a numerical residual, and the hbar-scaling of
the SWKB integral.

Shape invariance with a_i = ell, a_{i+1} = ell + hbar and g(a) = 2 omega a:

    W^2(x, a_i) + hbar W'(x, a_i) + g(a_i)
        = W^2(x, a_{i+1}) - hbar W'(x, a_{i+1}) + g(a_{i+1})
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import ParamError, ShiftMismatch
from .model import Kind, PhysParams, SuperpotentialModel, _check_level
from .swkb import DEFAULT_CONFIG, SwkbConfig, swkb_integral, swkb_integral_scaled


@dataclass(frozen=True)
class GridSpec:
    """Sampling grid; ``spacing`` is "log" or "linear"."""

    x_min: float
    x_max: float
    count: int
    spacing: str = "log"

    def __post_init__(self):
        if self.count < 2:
            raise ParamError(f"grid count must be >= 2, got {self.count!r}")
        if not (math.isfinite(self.x_min) and math.isfinite(self.x_max)) or not self.x_min < self.x_max:
            raise ParamError(f"grid needs finite x_min < x_max, got [{self.x_min!r}, {self.x_max!r}]")
        if self.spacing not in ("log", "linear"):
            raise ParamError(f"spacing must be 'log' or 'linear', got {self.spacing!r}")
        if self.spacing == "log" and self.x_min <= 0.0:
            raise ParamError("log spacing needs x_min > 0")

    def points(self) -> np.ndarray:
        if self.spacing == "log":
            return np.geomspace(self.x_min, self.x_max, self.count)
        return np.linspace(self.x_min, self.x_max, self.count)


def default_residual_grid(params: PhysParams) -> GridSpec:
    """400 log-spaced points on [1e-2, 1e2] natural lengths."""
    s = params.length_scale
    return GridSpec(1e-2 * s, 1e2 * s, 400, "log")


@dataclass(frozen=True)
class ShiftRule:
    """Parameter shift a_i -> a_i + hbar with g(a) = 2 omega a."""

    a_i: float
    a_next: float
    omega: float
    g_of_a: str = "2*omega*a"

    def g(self, a: float) -> float:
        return 2.0 * self.omega * a


def shift_rule(model: SuperpotentialModel) -> ShiftRule:
    p = model.params
    return ShiftRule(p.ell, p.ell + p.hbar, p.omega)


@dataclass(frozen=True)
class ResidualReport:
    """Pointwise LHS - RHS of the shape-invariance identity (energy units)."""

    grid: np.ndarray
    residuals: np.ndarray
    max_abs_residual: float
    mean_abs_residual: float
    worst_point: float
    energy_scale: float

    @property
    def max_abs_residual_hw(self) -> float:
        """max |residual| in units of hbar*omega."""
        return self.max_abs_residual / self.energy_scale

    @property
    def mean_abs_residual_hw(self) -> float:
        return self.mean_abs_residual / self.energy_scale


def shape_invariance_residual(model: SuperpotentialModel,
                              grid_spec: GridSpec | None = None) -> ResidualReport:
    if not model.is_radial:
        raise ParamError("shape invariance with a -> a + hbar is defined for the radial models")
    p = model.params
    grid = (grid_spec or default_residual_grid(p)).points()
    # Both sides carry terms ~ ell^2/x^2 that cancel, and ell + hbar is not
    # exact in float64; evaluate in extended precision.
    ld = np.longdouble
    rule = ShiftRule(ld(p.ell), ld(p.ell) + ld(p.hbar), ld(p.omega))
    shifted = model.with_ell(rule.a_next)
    x = grid.astype(ld)
    hbar = ld(p.hbar)
    g_i = rule.g(rule.a_i)
    g_next = rule.g(rule.a_next)
    lhs = model.W(x) ** 2 + hbar * model.W_prime(x) + g_i
    rhs = shifted.W(x) ** 2 - hbar * shifted.W_prime(x) + g_next
    res = np.asarray(lhs - rhs, dtype=float)
    absres = np.abs(res)
    i = int(np.argmax(absres))
    return ResidualReport(
        grid=grid,
        residuals=res,
        max_abs_residual=float(absres[i]),
        mean_abs_residual=float(np.mean(absres)),
        worst_point=float(grid[i]),
        energy_scale=p.energy_scale,
    )


def verify_spectrum_shift(params: PhysParams, k: int) -> float:
    """g(ell + k hbar) - g(ell), checked against E_k = 2 k hbar omega."""
    k = _check_level(k)
    rule = ShiftRule(params.ell, params.ell + params.hbar, params.omega)
    ladder = rule.g(params.ell + k * params.hbar) - rule.g(params.ell)
    expected = 2.0 * k * params.hbar * params.omega
    if not math.isclose(ladder, expected, rel_tol=1e-12, abs_tol=1e-12 * params.energy_scale):
        raise ShiftMismatch(f"g-ladder gives {ladder!r}, spectrum gives {expected!r}")
    return ladder


@dataclass(frozen=True)
class ScalingRow:
    hbar: float
    ell: float
    integral: float
    ratio: float


@dataclass(frozen=True)
class ScalingReport:
    ell_tilde: float
    n: int
    kind: Kind
    omega: float
    rows: tuple[ScalingRow, ...]
    scaled_integral: float

    @property
    def spread(self) -> float:
        """Relative spread (max - min) / max|.| of I/hbar across the sweep."""
        ratios = [r.ratio for r in self.rows]
        top = max(abs(v) for v in ratios)
        return 0.0 if top == 0.0 else (max(ratios) - min(ratios)) / top

    @property
    def max_rel_diff_scaled(self) -> float:
        """Largest relative difference between I/hbar and the scaled integral J."""
        j = self.scaled_integral
        if j == 0.0:
            return max(abs(r.ratio) for r in self.rows)
        return max(abs(r.ratio - j) / abs(j) for r in self.rows)


def hbar_scaling_check(ell_tilde: float, n: int, hbar_values, kind: Kind = Kind.EXTENDED,
                       omega: float = 1.0, config: SwkbConfig = DEFAULT_CONFIG) -> ScalingReport:
    """Run the physical SWKB integral at ell = hbar * ell_tilde for each hbar.

    I/hbar should not depend on hbar and should equal J(ell_tilde, n).
    """
    kind = Kind(kind)
    if not kind.is_radial:
        raise ParamError("the hbar-scaling check applies to the radial models")
    hbar_values = [float(h) for h in hbar_values]
    if not hbar_values:
        raise ParamError("hbar_values must not be empty")
    rows = []
    for hbar in hbar_values:
        params = PhysParams(omega=omega, ell=hbar * ell_tilde, hbar=hbar)
        res = swkb_integral(SuperpotentialModel(kind, params), n, config)
        rows.append(ScalingRow(hbar, params.ell, res.integral, res.integral / hbar))
    scaled = swkb_integral_scaled(ell_tilde, n, kind, config)
    return ScalingReport(float(ell_tilde), int(n), kind, float(omega), tuple(rows), scaled.integral)


def mutated(model: SuperpotentialModel, term: int, factor: float) -> SuperpotentialModel:
    """Copy of ``model`` with term ``term`` (0..3) multiplied by ``factor``."""
    if term not in range(4):
        raise ParamError(f"term index must be 0..3, got {term!r}")
    weights = list(model.term_weights)
    weights[term] *= factor
    return replace(model, term_weights=tuple(weights))
