"""Simultaneous root finding with certified displacement and residuals.

Near the clustering curve the polynomial magnitude is about ``rho^n`` while
its coefficient mass is about ``C(n, n/2)``, so from roughly n = 20 onward
every point of an annulus evaluates to rounding noise in double precision:
plain residuals certify nothing there.  The solver therefore works at a
precision chosen from the measured dynamic range ``mass / rho_min^n``, seeds
an Aberth-Ehrlich iteration from a jittered circle (or from the cheap double
solve when that is available), and certifies the result by Newton polishing
at higher precision: the polish displacement bounds the solver error in the
root metric, which is the quantity residuals cannot see.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

import numpy as np
import mpmath as mp

from .errors import AccuracyError, DomainError
from .hyperpoly import Polynomial, coefficients_mp
from .kernel import Alpha, DOUBLE, Precision
from .saddle import level_constant

_JITTER_SEED = 0x5EED


@dataclass(frozen=True)
class ZeroSet:
    """All n zeros of one polynomial plus solve diagnostics."""

    n: int
    alpha: Alpha
    zeros: tuple[complex, ...]
    residuals: tuple[float, ...]
    iterations: dict

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "alpha": [self.alpha.eta, self.alpha.zeta],
            "zeros": [[z.real, z.imag] for z in self.zeros],
            "residuals": list(self.residuals),
            "iterations": self.iterations,
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["re", "im", "residual"])
        for z, r in zip(self.zeros, self.residuals):
            w.writerow([repr(z.real), repr(z.imag), repr(r)])
        return buf.getvalue()


def _initial_circle(coeffs: np.ndarray, seed: int) -> np.ndarray:
    n = len(coeffs) - 1
    radius = 1.1 * (np.max(np.abs(coeffs)) / abs(coeffs[-1])) ** (1.0 / n)
    rng = np.random.default_rng(seed)
    jitter = (rng.random(n) - 0.5) * (0.6 * math.pi / n)
    angles = 2.0 * math.pi * np.arange(n) / n + math.pi / (2.0 * n) + jitter
    return radius * np.exp(1j * angles)


def _aberth_double(coeffs: np.ndarray, init: np.ndarray,
                   max_sweeps: int = 400) -> tuple[np.ndarray, int]:
    """Jacobi-style Aberth-Ehrlich sweeps in double precision.

    Stops on the relative-update tolerance or when the updates stagnate at
    the conditioning floor (they cannot shrink below roundoff-in-the-mass).
    """
    n = len(coeffs) - 1
    dcoeffs = coeffs[1:] * np.arange(1, n + 1)
    desc = coeffs[::-1]
    ddesc = dcoeffs[::-1]
    z = init.copy()
    sweeps = 0
    best = math.inf
    stale = 0
    for sweeps in range(1, max_sweeps + 1):
        pv = np.polyval(desc, z)
        dv = np.polyval(ddesc, z)
        dv = np.where(dv == 0, 1e-300, dv)
        newton = pv / dv
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, np.inf)
        repulse = np.sum(1.0 / diff, axis=1)
        denom = 1.0 - newton * repulse
        denom = np.where(denom == 0, 1e-300, denom)
        w = newton / denom
        z = z - w
        wmax = float(np.max(np.abs(w) / (1.0 + np.abs(z))))
        if wmax < 5e-15:
            break
        if wmax < 0.7 * best:
            best = wmax
            stale = 0
        else:
            stale += 1
            if stale >= 25:
                break
    return z, sweeps


def _aberth_mp(coeffs_mp, init, max_sweeps: int = 120) -> tuple[list, int]:
    """Aberth-Ehrlich sweeps in mpmath at the ambient working precision.

    The Newton term is evaluated at full precision; the pairwise repulsion
    sum runs in double precision, which is harmless because the iteration's
    fixed points are exactly the zeros of p regardless of that term's
    accuracy (it only shapes the basins).  Stops at the update tolerance or
    once updates stagnate near the conditioning floor; the caller's Newton
    polish finishes the remaining digits.
    """
    n = len(coeffs_mp) - 1
    dcoeffs = [coeffs_mp[k] * k for k in range(1, n + 1)]
    z = [mp.mpc(v) for v in init]
    tol = mp.mpf(2) ** (-mp.mp.prec + 8)
    sweeps = 0
    best = mp.inf
    stale = 0
    for sweeps in range(1, max_sweeps + 1):
        zd = np.array([complex(zi) for zi in z])
        diff = zd[:, None] - zd[None, :]
        np.fill_diagonal(diff, np.inf)
        small = np.abs(diff) < 1e-250
        if small.any():
            diff = np.where(small, 1e-250, diff)
        repulse = np.sum(1.0 / diff, axis=1)
        wmax = mp.mpf(0)
        znew = []
        for i in range(n):
            zi = z[i]
            pv = _horner(coeffs_mp, zi)
            dv = _horner(dcoeffs, zi)
            d = dv if dv != 0 else mp.mpf(1e-300)
            newton = pv / d
            den = 1 - newton * mp.mpc(repulse[i])
            if den == 0:
                den = mp.mpf(1e-300)
            w = newton / den
            znew.append(zi - w)
            wmax = max(wmax, abs(w) / (1 + abs(zi)))
        z = znew
        if wmax < tol:
            break
        if wmax < 0.5 * best:
            best = wmax
            stale = 0
        else:
            stale += 1
            if stale >= 4 and wmax < 1e-8:
                break
    return z, sweeps


def _horner(coeffs, z):
    acc = mp.mpc(0)
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def _certify_bits(p: Polynomial) -> int:
    """Working precision that resolves the zero annulus of ``p``.

    The polynomial dips to about ``rho^n`` near its zeros while the
    coefficient mass at the root radius is exponentially larger; the bit
    count covers that gap with margin.
    """
    n = p.degree
    radius = 1.3 * (max(abs(c) for c in p.coeffs) / abs(p.coeffs[-1])) ** (1.0 / n)
    log_mass = p.scale + max(
        math.log(abs(c) + 1e-300) + k * math.log(radius) for k, c in enumerate(p.coeffs))
    rho_min = 0.25 * level_constant(p.alpha)
    bits = int((log_mass - n * math.log(rho_min)) / math.log(2.0)) + 80
    return min(max(bits, 120), 6000)


def _polish_and_measure(p: Polynomial, approx, bits: int):
    """Newton-polish each approximation at ``bits``; report displacements
    and condition-scaled residuals measured at that precision."""
    with mp.workprec(bits):
        raw = coefficients_mp(p.degree, p.alpha.value, p.b_offset)
        draw = [raw[k] * k for k in range(1, p.degree + 1)]
        polished = []
        displacement = []
        residuals = []
        for z0 in approx:
            z = mp.mpc(z0)
            for _ in range(8):
                pv = _horner(raw, z)
                dv = _horner(draw, z)
                if dv == 0:
                    break
                step = pv / dv
                z = z - step
                if abs(step) < mp.mpf(2) ** (-bits + 16) * (1 + abs(z)):
                    break
            pv = _horner(raw, z)
            mass = mp.mpf(0)
            az = abs(z)
            for k, c in enumerate(raw):
                mass += abs(c) * az ** k
            polished.append(z)
            displacement.append(float(abs(z - mp.mpc(z0))))
            residuals.append(float(abs(pv) / mass))
    return polished, displacement, residuals


def find_roots(p: Polynomial, precision: Precision = DOUBLE,
               residual_tol: float = 1e-10, seed: int = _JITTER_SEED) -> ZeroSet:
    """All ``n`` zeros of ``p`` with certified residuals.

    The requested precision is a floor; the solve escalates automatically
    when the certification precision shows the cheap solve misplaced roots
    (large polish displacement, merged roots) or left residuals above
    ``residual_tol``.  Fixed seed and sweep order make the result
    deterministic for a given input.
    """
    n = p.degree
    if n == 0:
        raise DomainError("find_roots: degree-0 polynomial has no roots")
    coeffs = np.array(p.coeffs, dtype=complex)
    init = _initial_circle(coeffs, seed)
    approx, sweeps_double = _aberth_double(coeffs, init)

    bits_needed = max(_certify_bits(p), precision.bits)
    min_spacing_goal = 1e-3 / n
    diag: dict = {"sweeps_double": sweeps_double, "escalations": 0}

    current = [complex(z) for z in approx]
    if precision.is_double and bits_needed <= 140:
        solve_bits = 53
    else:
        # double resolution cannot certify this size; solve in mpmath from
        # the double placement
        solve_bits = bits_needed
        with mp.workprec(solve_bits):
            raw = coefficients_mp(n, p.alpha.value, p.b_offset)
            current, sweeps_mp = _aberth_mp(raw, current)
        diag["sweeps_mp"] = sweeps_mp
    diag["bits_solve"] = solve_bits
    bits_cert = max(2 * solve_bits, bits_needed)
    if solve_bits > 53:
        bits_cert = solve_bits + 64

    attempt = 0
    while True:
        diag["bits_certify"] = bits_cert
        polished, disp, resid = _polish_and_measure(p, current, bits_cert)
        pairwise_ok = _distinct(polished, min_spacing_goal)
        disp_ok = max(disp) <= 0.2 / n
        resid_ok = max(resid) <= residual_tol
        if pairwise_ok and disp_ok and resid_ok:
            zeros = tuple(complex(z) for z in polished)
            diag["max_displacement"] = max(disp)
            diag["max_residual"] = max(resid)
            return ZeroSet(n=n, alpha=p.alpha, zeros=_sorted_zeros(zeros),
                           residuals=tuple(float(r) for r in resid),
                           iterations=diag)
        attempt += 1
        diag["escalations"] = attempt
        if attempt > 3:
            raise AccuracyError(
                "find_roots: certification failed after escalation",
                achieved={"max_residual": max(resid),
                          "max_displacement": max(disp),
                          "distinct": pairwise_ok})
        solve_bits = max(bits_cert, 2 * solve_bits)
        with mp.workprec(solve_bits):
            raw = coefficients_mp(n, p.alpha.value, p.b_offset)
            current, sweeps_mp = _aberth_mp(raw, current)
        diag[f"sweeps_mp_{attempt}"] = sweeps_mp
        bits_cert = solve_bits + 64


def _distinct(points, min_gap: float) -> bool:
    pts = [complex(z) for z in points]
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if abs(pts[i] - pts[j]) < min_gap:
                return False
    return True


def _sorted_zeros(zeros):
    return tuple(sorted(zeros, key=lambda z: (round(z.real, 12), round(z.imag, 12))))


def zeros_to_json(zs: ZeroSet) -> str:
    return json.dumps(zs.to_json_dict(), sort_keys=True)
