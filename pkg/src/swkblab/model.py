"""Superpotential models: the 1D oscillator baseline, the conventional radial
oscillator and its rational two-fraction extension.

All quantities keep explicit units.  Positions are lengths, W is in
sqrt(energy), W' in sqrt(energy)/length, and hbar is an ordinary runtime
parameter.  The mass convention is 2m = 1, so that the partner potentials are
V_(-/+) = W^2 -/+ hbar W'.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .errors import DomainError, ParamError

#: Radial evaluations are refused below this many natural lengths sqrt(hbar/omega).
DOMAIN_FLOOR = 1e-12


class Kind(str, Enum):
    HARMONIC = "harmonic-oscillator"
    CONVENTIONAL = "conventional-radial"
    EXTENDED = "extended-radial"

    @property
    def is_radial(self) -> bool:
        return self is not Kind.HARMONIC

    @property
    def level_spacing(self) -> int:
        """Energy spacing in units of hbar*omega (1 for the 1D oscillator, 2 otherwise)."""
        return 1 if self is Kind.HARMONIC else 2


def _check_positive(name: str, value: float) -> float:
    try:
        # extended-precision scalars pass through (used by the residual check)
        value = value if isinstance(value, np.floating) else float(value)
    except (TypeError, ValueError) as exc:
        raise ParamError(f"{name} must be a number, got {value!r}") from exc
    if not math.isfinite(value) or value <= 0.0:
        raise ParamError(f"{name} must be finite and > 0, got {value!r}")
    return value


@dataclass(frozen=True)
class PhysParams:
    """Physical parameters.

    omega : angular frequency (1/time)
    ell   : shape-invariance parameter (action)
    hbar  : quantum of action
    """

    omega: float = 1.0
    ell: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        for name in ("omega", "ell", "hbar"):
            object.__setattr__(self, name, _check_positive(name, getattr(self, name)))

    @property
    def length_scale(self) -> float:
        """Natural oscillator length sqrt(hbar/omega)."""
        return math.sqrt(self.hbar / self.omega)

    @property
    def energy_scale(self) -> float:
        """hbar*omega."""
        return self.hbar * self.omega

    @property
    def ell_tilde(self) -> float:
        return self.ell / self.hbar


@dataclass(frozen=True)
class EnergyLevel:
    n: int
    energy: float


@dataclass(frozen=True)
class SuperpotentialModel:
    """One of the three closed-world superpotentials.

    ``term_weights`` scales the four terms of the extended superpotential
    (omega x/2, ell/x and the two rational corrections).  It exists for
    mutation tests of the shape-invariance checker and defaults to all ones.
    """

    kind: Kind
    params: PhysParams = field(default_factory=PhysParams)
    term_weights: tuple[float, float, float, float] = (1.0, 1.0, 1.0, 1.0)

    def __post_init__(self):
        try:
            object.__setattr__(self, "kind", Kind(self.kind))
        except ValueError as exc:
            raise ParamError(f"unknown model kind {self.kind!r}") from exc
        if not isinstance(self.params, PhysParams):
            raise ParamError("params must be a PhysParams instance")
        if len(self.term_weights) != 4:
            raise ParamError("term_weights needs exactly four entries")
        object.__setattr__(self, "term_weights", tuple(float(w) for w in self.term_weights))
        if self.kind is Kind.EXTENDED and not 2.0 * self.params.ell / self.params.hbar > 1.0:
            raise ParamError(
                f"ell must satisfy 2*ell/hbar > 1 for the extended model "
                f"(ell={self.params.ell!r}, hbar={self.params.hbar!r})"
            )

    @property
    def is_radial(self) -> bool:
        return self.kind.is_radial

    @property
    def x_floor(self) -> float:
        """Smallest admissible position (-inf for the full-line oscillator)."""
        if not self.is_radial:
            return -math.inf
        return DOMAIN_FLOOR * self.params.length_scale

    def with_ell(self, ell: float) -> "SuperpotentialModel":
        return replace(self, params=replace(self.params, ell=ell))

    def check_domain(self, x):
        arr = np.asarray(x)
        if not np.issubdtype(arr.dtype, np.floating):
            arr = arr.astype(float)
        if not np.all(np.isfinite(arr)):
            raise DomainError("position must be finite")
        if self.is_radial and np.any(arr < self.x_floor):
            bad = float(np.min(arr))
            raise DomainError(
                f"x={bad!r} is below the radial domain floor {self.x_floor!r}"
            )
        return arr

    def W(self, x):
        """Superpotential W(x) in sqrt(energy) units."""
        x = self.check_domain(x)
        p = self.params
        w0, w1, w2, w3 = self.term_weights
        out = w0 * p.omega * x / 2.0
        if self.is_radial:
            out = out - w1 * p.ell / x
        if self.kind is Kind.EXTENDED:
            wx2 = p.omega * x * x
            num = 2.0 * p.omega * p.hbar * x
            out = out + w2 * num / (wx2 + 2.0 * p.ell - p.hbar) - w3 * num / (wx2 + 2.0 * p.ell + p.hbar)
        return _unwrap(out)

    def W_prime(self, x):
        """Closed-form dW/dx."""
        x = self.check_domain(x)
        p = self.params
        w0, w1, w2, w3 = self.term_weights
        out = w0 * p.omega / 2.0 + np.zeros_like(x)
        if self.is_radial:
            out = out + w1 * p.ell / (x * x)
        if self.kind is Kind.EXTENDED:
            wx2 = p.omega * x * x
            pref = 2.0 * p.omega * p.hbar
            cm = 2.0 * p.ell - p.hbar
            cp = 2.0 * p.ell + p.hbar
            # d/dx [x / (omega x^2 + c)] = (c - omega x^2) / (omega x^2 + c)^2
            out = out + w2 * pref * (cm - wx2) / (wx2 + cm) ** 2 - w3 * pref * (cp - wx2) / (wx2 + cp) ** 2
        return _unwrap(out)

    def W_correction(self, x):
        """The two-fraction correction W - W_0 (zero for non-extended models)."""
        x = self.check_domain(x)
        if self.kind is not Kind.EXTENDED:
            return _unwrap(np.zeros_like(x))
        p = self.params
        _, _, w2, w3 = self.term_weights
        wx2 = p.omega * x * x
        num = 2.0 * p.omega * p.hbar * x
        return _unwrap(w2 * num / (wx2 + 2.0 * p.ell - p.hbar) - w3 * num / (wx2 + 2.0 * p.ell + p.hbar))

    def potential_minus(self, x):
        """V_-(x) = W^2 - hbar W' (energy units)."""
        return _unwrap(np.asarray(self.W(x)) ** 2 - self.params.hbar * np.asarray(self.W_prime(x)))

    def potential_plus(self, x):
        """V_+(x) = W^2 + hbar W' (energy units)."""
        return _unwrap(np.asarray(self.W(x)) ** 2 + self.params.hbar * np.asarray(self.W_prime(x)))

    def energy(self, n: int) -> EnergyLevel:
        n = _check_level(n)
        p = self.params
        return EnergyLevel(n, self.kind.level_spacing * n * p.hbar * p.omega)


def _unwrap(arr):
    arr = np.asarray(arr)
    if arr.ndim == 0 and arr.dtype == np.float64:
        return float(arr)
    return arr


def _check_level(n) -> int:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise ParamError(f"quantum number n must be an integer, got {n!r}")
    if n < 0:
        raise ParamError(f"quantum number n must be >= 0, got {n}")
    return int(n)


def eval_W(model: SuperpotentialModel, x):
    return model.W(x)


def eval_W_prime(model: SuperpotentialModel, x):
    return model.W_prime(x)


def energy(model: SuperpotentialModel, n: int) -> EnergyLevel:
    """E_n = 2 n hbar omega for the radial models, n hbar omega for the 1D oscillator."""
    return model.energy(n)


# --- dimensionless form ---------------------------------------------------


@dataclass(frozen=True)
class ScaledPoint:
    """Dimensionless position y~ = sqrt(omega/hbar) x and parameter l~ = ell/hbar."""

    y_tilde: float
    ell_tilde: float


def to_scaled(params: PhysParams, x) -> ScaledPoint:
    if not isinstance(params, PhysParams):
        raise ParamError("params must be a PhysParams instance")
    # y = sqrt(omega) x, then y~ = y / sqrt(hbar)
    y = math.sqrt(params.omega) * np.asarray(x, dtype=float)
    return ScaledPoint(_unwrap(y / math.sqrt(params.hbar)), params.ell / params.hbar)


def _check_scaled(p: ScaledPoint, kind: Kind):
    kind = Kind(kind)
    y = np.asarray(p.y_tilde, dtype=float)
    lt = p.ell_tilde
    if not math.isfinite(lt) or lt <= 0.0:
        raise ParamError(f"ell_tilde must be finite and > 0, got {lt!r}")
    if kind is Kind.EXTENDED and not lt > 0.5:
        raise ParamError(f"ell_tilde must exceed 1/2 for the extended model, got {lt!r}")
    if not np.all(np.isfinite(y)):
        raise DomainError("y_tilde must be finite")
    if kind.is_radial and np.any(y < DOMAIN_FLOOR):
        raise DomainError(f"y_tilde must be >= {DOMAIN_FLOOR} for radial models")
    return kind, y, lt


def eval_scaled_bracket(p: ScaledPoint, kind: Kind = Kind.EXTENDED):
    """Dimensionless bracket B with W = sqrt(hbar omega) * B.

    ``kind`` selects which terms are present; the default is the full
    extended bracket, ``Kind.CONVENTIONAL`` drops the rational corrections.
    """
    kind, y, lt = _check_scaled(p, kind)
    out = y / 2.0
    if kind.is_radial:
        out = out - lt / y
    if kind is Kind.EXTENDED:
        y2 = y * y
        out = out + 2.0 * y / (y2 + 2.0 * lt - 1.0) - 2.0 * y / (y2 + 2.0 * lt + 1.0)
    return _unwrap(out)


def eval_eta(p: ScaledPoint, n: int, kind: Kind = Kind.EXTENDED):
    """eta = E_n/(hbar omega) - B^2, i.e. 2n - B^2 for the radial models.

    Negative values mark the classically forbidden region.
    """
    n = _check_level(n)
    b = np.asarray(eval_scaled_bracket(p, kind))
    return _unwrap(Kind(kind).level_spacing * n - b * b)


def quantum_number_map(ell: float, hbar: float) -> float:
    """Dimensionless l' with ell = hbar (l' + 1)."""
    hbar = _check_positive("hbar", hbar)
    ell = float(ell)
    if not math.isfinite(ell):
        raise ParamError(f"ell must be finite, got {ell!r}")
    return ell / hbar - 1.0


def ell_from_quantum_number(ell_prime: float, hbar: float) -> float:
    """Inverse of :func:`quantum_number_map`."""
    hbar = _check_positive("hbar", hbar)
    return hbar * (float(ell_prime) + 1.0)
