"""Regenerate tests/data/swkb_oracle.csv.

Independent of the swkblab package: superpotentials are re-typed here, turning
points come from an mpmath scan + root polish, and the integral is mpmath's
tanh-sinh quadrature at 30 significant digits directly in x (no change of
variables).

    python scripts/generate_oracle_fixture.py
"""
from __future__ import annotations

import csv
from pathlib import Path

import mpmath as mp

mp.mp.dps = 30

OUT = Path(__file__).resolve().parents[1] / "tests" / "data" / "swkb_oracle.csv"
COLUMNS = ["model", "omega", "ell", "hbar", "n", "I", "deviation"]


def superpotential(model, omega, ell, hbar):
    omega, ell, hbar = mp.mpf(omega), mp.mpf(ell), mp.mpf(hbar)

    def w(x):
        out = omega * x / 2
        if model != "harmonic-oscillator":
            out -= ell / x
        if model == "extended-radial":
            out += 2 * omega * hbar * x / (omega * x**2 + 2 * ell - hbar)
            out -= 2 * omega * hbar * x / (omega * x**2 + 2 * ell + hbar)
        return out

    return w


def level(model, omega, hbar, n):
    spacing = 1 if model == "harmonic-oscillator" else 2
    return spacing * n * mp.mpf(hbar) * mp.mpf(omega)


def turning_points(f, model, length):
    if model == "harmonic-oscillator":
        grid = [length * mp.mpf(k) / 64 for k in range(-64 * 40, 64 * 40 + 1)]
    else:
        grid = [length * mp.mpf(10) ** (mp.mpf(k) / 256) for k in range(-6 * 256, 3 * 256)]
    roots = []
    prev_x, prev_f = grid[0], f(grid[0])
    for x in grid[1:]:
        fx = f(x)
        if (prev_f > 0) != (fx > 0):
            roots.append(mp.findroot(f, (prev_x, x), solver="anderson"))
        prev_x, prev_f = x, fx
    if len(roots) != 2:
        raise RuntimeError(f"expected two turning points, found {len(roots)}")
    return roots


def oracle(model, omega, ell, hbar, n):
    w = superpotential(model, omega, ell, hbar)
    e = level(model, omega, hbar, n)

    def f(x):
        return e - w(x) ** 2

    length = mp.sqrt(mp.mpf(hbar) / mp.mpf(omega))
    xl, xr = turning_points(f, model, length)
    integral, err = mp.quad(lambda x: mp.sqrt(max(f(x), 0)), [xl, (xl + xr) / 2, xr], error=True)
    if err > mp.mpf(10) ** -20 * abs(integral):
        raise RuntimeError(f"oracle quadrature error {err} too large")
    return integral, integral / (mp.pi * mp.mpf(hbar)) - n


CASES = (
    [("extended-radial", 1, 1, 1, n) for n in range(1, 11)]
    + [("extended-radial", 1, 2 * h, h, 3) for h in (0.25, 0.5, 1, 2, 4)]
    + [("extended-radial", 1, ell, 1, 1) for ell in (0.6, 2, 5, 10)]
    + [("extended-radial", 2, 1, 0.5, 2)]
    + [("conventional-radial", 1, 1, 1, n) for n in (1, 5)]
    + [("harmonic-oscillator", 1, 1, 1, 3)]
)


def main():
    OUT.parent.mkdir(parents=True, exist_ok=True)
    with OUT.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(COLUMNS)
        for model, omega, ell, hbar, n in CASES:
            integral, dev = oracle(model, omega, ell, hbar, n)
            writer.writerow([model, repr(float(omega)), repr(float(ell)), repr(float(hbar)), n,
                             mp.nstr(integral, 25), mp.nstr(dev, 25)])
            print(model, omega, ell, hbar, n, mp.nstr(dev, 18))
    print("wrote", OUT)


if __name__ == "__main__":
    main()
