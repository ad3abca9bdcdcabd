"""Direct numerical spectrum of H_- = -hbar^2 d^2/dx^2 + W^2 - hbar W'.

The mass convention is 2m = 1, which is the normalisation in which
H_- = A^dagger A with A = hbar d/dx + W.  Eigenvalues are found by Numerov
shooting from both walls of a Dirichlet box, with the energy bisected on the
number of eigenvalues below it:

    count(E) = nodes(left branch) + nodes(right branch) + [D(E) < 0]

where D is the difference of the forward log-ratios of the two branches at
the matching point.  count jumps by one exactly at each eigenvalue of the
discretised problem.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BoxTooSmall, DomainError, NoConvergence, ParamError
from .model import SuperpotentialModel, _check_level

#: Default box in natural lengths sqrt(hbar/omega).
RADIAL_BOX = (1e-10, 20.0)
HARMONIC_BOX = (-20.0, 20.0)
DEFAULT_COUNT = 4001
MIN_COUNT = 1000
TAIL_TOLERANCE = 1e-8

_RESCALE = 1e150


@dataclass(frozen=True)
class PotentialGrid:
    """Uniform grid with V_-(x) sampled at every node (energy units)."""

    x: np.ndarray
    v: np.ndarray
    step: float
    model: SuperpotentialModel

    @property
    def count(self) -> int:
        return int(self.x.size)


@dataclass(frozen=True)
class EigenResult:
    n: int
    energy_numeric: float
    bisection_width: float
    matches: float
    nodes: int
    energy_exact: float
    tail_amplitude: float
    energy_scale: float = 1.0

    @property
    def relative_error(self) -> float:
        """|E - E_exact| / |E_exact|; in units of hbar*omega when E_exact = 0."""
        if self.energy_exact == 0.0:
            return self.matches / self.energy_scale
        return self.matches / abs(self.energy_exact)


def default_box(model: SuperpotentialModel) -> tuple[float, float]:
    lo, hi = RADIAL_BOX if model.is_radial else HARMONIC_BOX
    s = model.params.length_scale
    return lo * s, hi * s


def build_potential(model: SuperpotentialModel, x_min: float | None = None,
                    x_max: float | None = None, count: int = DEFAULT_COUNT) -> PotentialGrid:
    """Sample V_- = W^2 - hbar W' on ``count`` uniformly spaced nodes."""
    d_lo, d_hi = default_box(model)
    x_min = d_lo if x_min is None else float(x_min)
    x_max = d_hi if x_max is None else float(x_max)
    if count < MIN_COUNT:
        raise ParamError(f"grid needs at least {MIN_COUNT} nodes, got {count}")
    if not x_min < x_max:
        raise ParamError(f"box needs x_min < x_max, got [{x_min!r}, {x_max!r}]")
    if model.is_radial and x_min <= 0.0:
        raise DomainError(f"radial box must start at x_min > 0, got {x_min!r}")
    x = np.linspace(x_min, x_max, count)
    v = np.asarray(model.potential_minus(x), dtype=float)
    if not np.all(np.isfinite(v)):
        raise DomainError("V_- is not finite on the grid")
    return PotentialGrid(x, v, float(x[1] - x[0]), model)


class _Shooter:
    """Numerov recurrences for one potential grid.

    With k = (E - V)/hbar^2 and f = 1 + h^2 k / 12 the scheme reads
    f_{i+1} psi_{i+1} = (12 - 10 f_i) psi_i - f_{i-1} psi_{i-1}.
    """

    def __init__(self, pot: PotentialGrid, hbar: float):
        self.pot = pot
        self.v = pot.v
        self.c = pot.step ** 2 / (12.0 * hbar ** 2)
        self.last = pot.count - 1
        model = pot.model
        # Near x = 0, W ~ -ell/x, so V_- ~ ell (ell - hbar)/x^2 and the two
        # local solutions go like x^lt and x^(1 - lt), lt = ell/hbar.  For
        # lt < 1 both vanish at the origin and a Dirichlet wall does not pick
        # the regular one; start on the power law x^lt instead.
        lt = model.params.ell / hbar
        self.power = lt if model.is_radial and lt < 1.0 else None

    def factors(self, energy: float) -> np.ndarray:
        return 1.0 + self.c * (energy - self.v)

    def start_index(self, f: np.ndarray, matching: int) -> int:
        # A strong centrifugal wall makes f <= 0 next to x_min, where the
        # recurrence is unstable; the solution is negligible there, so the
        # wall is moved to the last such node.
        bad = np.nonzero(f[1:matching] <= 0.25)[0]
        first = 2 if self.power is not None else 1
        return first if bad.size == 0 else max(first, int(bad[-1]) + 2)

    def matching_index(self, energy: float) -> int:
        allowed = np.nonzero(self.v <= energy)[0]
        m = int(allowed[-1]) if allowed.size else int(np.argmin(self.v))
        return min(max(m, self.last // 8), self.last - 3)

    def outward(self, f: list, start: int, stop: int):
        """psi on [start-1, stop]; returns (values, sign changes).

        psi[start-1] = 0 (wall) unless a power-law start applies.
        """
        if self.power is not None and start >= 2:
            x = self.pot.x
            prev, cur = x[start - 1] ** self.power, x[start] ** self.power
            prev, cur = 1e-30 * prev / cur, 1e-30
        else:
            prev, cur = 0.0, 1e-30
        psi = [prev, cur]
        nodes = 0
        for i in range(start, stop):
            nxt = ((12.0 - 10.0 * f[i]) * cur - f[i - 1] * prev) / f[i + 1]
            if nxt * cur < 0.0:
                nodes += 1
            prev, cur = cur, nxt
            if abs(cur) > _RESCALE:
                prev /= _RESCALE
                cur /= _RESCALE
                psi = [p / _RESCALE for p in psi]
            psi.append(cur)
        return psi, nodes

    def inward(self, f: list, stop: int):
        """psi on [stop, last] (reversed order) with psi[last] = 0."""
        last = self.last
        psi = [0.0, 1e-30]
        nodes = 0
        prev, cur = 0.0, 1e-30
        for i in range(last - 1, stop, -1):
            nxt = ((12.0 - 10.0 * f[i]) * cur - f[i + 1] * prev) / f[i - 1]
            if nxt * cur < 0.0:
                nodes += 1
            prev, cur = cur, nxt
            if abs(cur) > _RESCALE:
                prev /= _RESCALE
                cur /= _RESCALE
                psi = [p / _RESCALE for p in psi]
            psi.append(cur)
        return psi, nodes

    def branches(self, energy: float):
        f_arr = self.factors(energy)
        m = self.matching_index(energy)
        start = self.start_index(f_arr, m)
        f = f_arr.tolist()
        left, n_left = self.outward(f, start, m + 1)   # indices start-1 .. m+1
        right, n_right = self.inward(f, m)             # indices last .. m (reversed)
        # sign changes of the left branch past index m belong to the right side
        if left[-1] * left[-2] < 0.0:
            n_left -= 1
        return m, start, left, right, n_left, n_right

    def count(self, energy: float) -> int:
        m, _, left, right, n_left, n_right = self.branches(energy)
        l_m, l_next = left[-2], left[-1]
        r_m, r_next = right[-1], right[-2]
        # sign of D = l_next/l_m - r_next/r_m without forming the product
        cross = l_next * r_m - l_m * r_next
        negative = (cross < 0.0) != ((l_m < 0.0) != (r_m < 0.0))
        return n_left + n_right + (1 if negative and cross != 0.0 else 0)

    def eigenfunction(self, energy: float) -> np.ndarray:
        m, start, left, right, _, _ = self.branches(energy)
        psi = np.zeros(self.pot.count)
        psi[start - 1:m + 2] = left
        right = np.asarray(right[::-1])           # indices m .. last
        scale = left[-2] / right[0] if right[0] != 0.0 else 1.0
        psi[m:] = right * scale
        return psi


def _sign_changes(psi: np.ndarray) -> int:
    s = np.sign(psi[psi != 0.0])
    return int(np.count_nonzero(s[1:] != s[:-1]))


def solve_eigenvalue(pot: PotentialGrid, n: int, hbar: float | None = None,
                     tol: float = 1e-12, max_iter: int = 400) -> EigenResult:
    """Eigenvalue of the n-th level of V_- in the Dirichlet box.

    Raises
    ------
    NoConvergence
        If the energy bracket cannot be formed or refined.
    BoxTooSmall
        If |psi| near a far wall exceeds 1e-8 of its maximum.
    """
    n = _check_level(n)
    model = pot.model
    hbar = model.params.hbar if hbar is None else float(hbar)
    if not hbar > 0.0:
        raise ParamError(f"hbar must be > 0, got {hbar!r}")
    shooter = _Shooter(pot, hbar)
    scale = model.params.energy_scale

    # wall nodes carry psi = 0 and may hold a huge (noisy) V_-
    lo = float(np.min(pot.v[1:-1]))
    if shooter.count(lo) > n:
        raise NoConvergence("eigenvalue count is already above n at min(V)")
    step = scale
    hi = lo + step
    for _ in range(200):
        if shooter.count(hi) > n:
            break
        lo = hi
        step *= 2.0
        hi = lo + step
    else:
        raise NoConvergence("could not bracket the requested level")

    for _ in range(max_iter):
        if hi - lo <= tol * max(abs(lo), abs(hi), scale):
            break
        mid = 0.5 * (lo + hi)
        if shooter.count(mid) > n:
            hi = mid
        else:
            lo = mid
    else:
        raise NoConvergence(f"bisection did not reach width {tol:g} in {max_iter} steps")

    energy = 0.5 * (lo + hi)
    psi = shooter.eigenfunction(energy)
    peak = float(np.max(np.abs(psi)))
    tail = max(2, pot.count // 100)
    tails = [np.abs(psi[-tail - 1:-1])]
    if not model.is_radial:
        tails.append(np.abs(psi[1:tail + 1]))
    tail_amp = max(float(np.max(t)) for t in tails) / peak
    if tail_amp > TAIL_TOLERANCE:
        raise BoxTooSmall(
            f"eigenfunction tail is {tail_amp:.3g} of its peak at the box wall; enlarge the box"
        )
    nodes = _sign_changes(psi[1:-1])
    if nodes != n:
        raise NoConvergence(f"converged eigenfunction has {nodes} nodes, expected {n}")
    exact = model.energy(n).energy
    return EigenResult(n, energy, hi - lo, abs(energy - exact), nodes, exact, tail_amp, scale)


def solve_level(model: SuperpotentialModel, n: int, x_min: float | None = None,
                x_max: float | None = None, count: int = DEFAULT_COUNT,
                tol: float = 1e-12) -> EigenResult:
    return solve_eigenvalue(build_potential(model, x_min, x_max, count), n, tol=tol)


@dataclass(frozen=True)
class ConvergenceStep:
    count: int
    step: float
    energy: float
    error: float


def grid_convergence(model: SuperpotentialModel, n: int, counts=(1001, 2001, 4001),
                     x_min: float | None = None, x_max: float | None = None) -> list[ConvergenceStep]:
    """Solve level n on successively halved steps (counts of the form 2^k m + 1)."""
    out = []
    for count in counts:
        pot = build_potential(model, x_min, x_max, count)
        res = solve_eigenvalue(pot, n)
        out.append(ConvergenceStep(count, pot.step, res.energy_numeric, res.matches))
    return out


def observed_order(steps: list[ConvergenceStep]) -> float:
    """log2 of the ratio of successive energy differences (4 for Numerov)."""
    if len(steps) < 3:
        raise ParamError("need at least three grids to estimate the order")
    d1 = steps[-3].energy - steps[-2].energy
    d2 = steps[-2].energy - steps[-1].energy
    if d2 == 0.0:
        return math.inf
    return math.log2(abs(d1 / d2))
