"""Closed-loop stability and the numeric margin oracle.

``measure_margins`` knows nothing about how a controller was designed; it
only samples ``L(jw)`` and locates crossings, which is what makes it usable
as an independent check on every closed-form design.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import DelayUnsupported, DesignError, EvalOnPole
from .polyfreq import Polynomial, TransferFunction, log_grid, tf_eval
from .targets import wrap_angle

DEFAULT_RANGE = (1e-3, 1e3)
DEFAULT_SAMPLES = 10_000


@dataclass(frozen=True)
class RouthResult:
    first_column: tuple[float, ...]
    sign_changes: int
    degenerate: bool


@dataclass(frozen=True)
class MarginReport:
    omega_g_list: tuple[float, ...]
    omega_p_list: tuple[float, ...]
    pm: float | None
    gm: float | None
    well_defined: bool
    pm_list: tuple[float, ...] = ()
    gm_list: tuple[float, ...] = ()
    notes: tuple[str, ...] = field(default_factory=tuple)


def closed_loop_charpoly(controller: TransferFunction, plant: TransferFunction) -> Polynomial:
    """``Nc Ng + Dc Dg`` for unity negative feedback."""
    if controller.delay or plant.delay:
        raise DelayUnsupported("characteristic polynomial needs rational transfer functions")
    return controller.num * plant.num + controller.den * plant.den


# -- Routh ------------------------------------------------------------------------------


def _routh_table(desc: list[float], eps_sign: float) -> tuple[list[float], bool]:
    n = len(desc) - 1
    width = n // 2 + 1
    rows = [desc[0::2], desc[1::2]]
    rows = [r + [0.0] * (width - len(r)) for r in rows]
    degenerate = False
    scale = max(abs(x) for x in desc)

    def fix(i):
        nonlocal degenerate
        row = rows[i]
        tol = 1e-12 * scale
        if all(abs(x) <= tol for x in row):
            # zero row: differentiate the auxiliary polynomial from the row above
            power = n - (i - 1)
            above = rows[i - 1]
            rows[i] = [above[j] * (power - 2 * j) for j in range(width)]
            degenerate = True
            row = rows[i]
        if abs(row[0]) <= tol:
            eps = 1e-9 * math.sqrt(sum(x * x for x in row)) or 1e-9 * scale
            row[0] = eps_sign * eps
            degenerate = True

    fix(1)
    for i in range(2, n + 1):
        pp, p = rows[i - 2], rows[i - 1]
        new = [(p[0] * pp[j + 1] - pp[0] * p[j + 1]) / p[0] if j + 1 < width else 0.0
               for j in range(width)]
        rows.append(new)
        fix(i)
    return [r[0] for r in rows], degenerate


def routh(p: Polynomial) -> RouthResult:
    """Routh first column and its sign changes (= open RHP roots when not degenerate)."""
    if p.degree < 1:
        raise ValueError("Routh table needs a polynomial of degree >= 1")
    desc = list(reversed(p.coeffs))
    col, degenerate = _routh_table(desc, +1.0)
    changes = _sign_changes(col)
    if degenerate:
        # report the larger count so the epsilon sign cannot hide a RHP root
        alt, _ = _routh_table(desc, -1.0)
        changes = max(changes, _sign_changes(alt))
    return RouthResult(tuple(col), changes, degenerate)


def _sign_changes(col) -> int:
    signs = [math.copysign(1.0, x) for x in col if x != 0.0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def is_hurwitz(p: Polynomial) -> bool:
    """Strictly left-half-plane roots; imaginary-axis roots count as unstable."""
    if p.degree < 1:
        return not p.is_zero
    r = routh(p)
    return not r.degenerate and r.sign_changes == 0


def closed_loop_stable(controller: TransferFunction, plant: TransferFunction) -> bool:
    return is_hurwitz(closed_loop_charpoly(controller, plant))


def stable_gm_intervals(plant: TransferFunction,
                        design_fn: Callable[[float], TransferFunction],
                        gm_range: tuple[float, float],
                        samples: int = 400,
                        rtol: float = 1e-6) -> list[tuple[float, float]]:
    """Gain margins in ``gm_range`` whose designed loop is asymptotically stable.

    ``design_fn(gm)`` returns the controller; any design error counts as an
    unstable point. Boundaries are bisected to ``rtol``.
    """
    lo, hi = gm_range
    if not 1.0 <= lo < hi:
        raise ValueError(f"gm_range must satisfy 1 <= lo < hi, got {gm_range}")

    def stable(gm):
        try:
            return closed_loop_stable(design_fn(gm), plant)
        except (DesignError, ValueError, ZeroDivisionError):
            return False

    grid = log_grid(lo, hi, samples)
    mask = [stable(g) for g in grid]

    def edge(a, b, a_stable):
        while b / a - 1.0 > rtol:
            m = math.sqrt(a * b)
            if stable(m) == a_stable:
                a = m
            else:
                b = m
        return float(a if a_stable else b)

    out = []
    start = float(grid[0]) if mask[0] else None
    for i in range(1, len(grid)):
        if mask[i] and not mask[i - 1]:
            start = edge(grid[i - 1], grid[i], False)
        elif mask[i - 1] and not mask[i]:
            out.append((start, edge(grid[i - 1], grid[i], True)))
            start = None
    if start is not None:
        out.append((start, float(grid[-1])))
    return out


# -- margins ---------------------------------------------------------------------------


def default_frequency_range(loop: TransferFunction) -> tuple[float, float]:
    """``[1e-3, 1e3]`` widened to two decades beyond the extreme finite poles/zeros."""
    lo, hi = DEFAULT_RANGE
    try:
        mags = [abs(r) for r in loop.poles() + loop.zeros()]
    except DesignError:
        return lo, hi
    mags = [m for m in mags if m > 1e-12 and math.isfinite(m)]
    if mags:
        lo = min(lo, min(mags) / 100)
        hi = max(hi, max(mags) * 100)
    return lo, hi


def _safe_eval(loop, w):
    try:
        return tf_eval(loop, w)
    except EvalOnPole:
        out = np.empty(len(w), dtype=complex)
        for i, x in enumerate(w):
            try:
                out[i] = tf_eval(loop, float(x))
            except EvalOnPole:
                out[i] = complex(math.inf, 0.0)
        return out


def measure_margins(loop: TransferFunction,
                    omega_range: tuple[float, float] | None = None,
                    samples: int = DEFAULT_SAMPLES) -> MarginReport:
    """Locate every gain and phase crossover of ``loop`` on a log grid."""
    if omega_range is None:
        omega_range = default_frequency_range(loop)
        decades = math.log10(omega_range[1] / omega_range[0])
        samples = max(samples, int(round(samples * decades / 6)))
    lo, hi = omega_range
    if not 0 < lo < hi:
        raise ValueError(f"frequency range must satisfy 0 < lo < hi, got {omega_range}")
    w = log_grid(lo, hi, samples)
    L = _safe_eval(loop, w)
    finite = np.isfinite(L)

    def logmag(x):
        return math.log(abs(complex(tf_eval(loop, x))))

    def imag(x):
        return complex(tf_eval(loop, x)).imag

    with np.errstate(divide="ignore"):
        lm = np.log(np.abs(L))
    wg = _crossings(w, lm, finite, logmag)

    ok = finite & (L.real < 0)
    wp = _crossings(w, L.imag, ok, imag)

    pm_list = tuple(wrap_angle(math.pi + float(np.angle(tf_eval(loop, x)))) for x in wg)
    gm_list = tuple(1.0 / abs(complex(tf_eval(loop, x))) for x in wp)
    notes = []
    if not wg:
        side = "below" if np.all(lm[finite] < 0) else "above" if np.all(lm[finite] > 0) else "around"
        notes.append(f"no gain crossover in [{lo:g}, {hi:g}]; |L| stays {side} 1")
    if not wp:
        notes.append(f"no phase crossover in [{lo:g}, {hi:g}]")
    return MarginReport(
        omega_g_list=tuple(wg),
        omega_p_list=tuple(wp),
        pm=pm_list[0] if pm_list else None,
        gm=gm_list[0] if gm_list else None,
        well_defined=len(wg) == 1 and len(wp) <= 1,
        pm_list=pm_list,
        gm_list=gm_list,
        notes=tuple(notes),
    )


def _crossings(w, v, ok, f) -> list[float]:
    """Zeros of ``f`` bracketed by sign changes of the sampled ``v`` where ``ok`` holds.

    Sampled local minima of ``|v|`` are refined as well, so a pair of zeros
    closer together than the grid spacing (or a tangency) is not missed.
    """
    def root(a, b):
        return brentq(f, a, b, xtol=1e-300, rtol=1e-13, maxiter=200)

    out = [float(w[i]) for i in np.nonzero(ok & (v == 0.0))[0]]
    for i in np.nonzero((v[:-1] * v[1:] < 0) & ok[:-1] & ok[1:])[0]:
        out.append(root(w[i], w[i + 1]))
    a = np.abs(v)
    dip = (a[1:-1] < a[:-2]) & (a[1:-1] < a[2:]) & (v[:-2] * v[1:-1] > 0) & (v[1:-1] * v[2:] > 0)
    dip &= ok[:-2] & ok[1:-1] & ok[2:]
    for i in np.nonzero(dip)[0] + 1:
        sign = math.copysign(1.0, v[i])
        r = minimize_scalar(lambda x: sign * f(x), bounds=(w[i - 1], w[i + 1]), method="bounded",
                            options={"xatol": 1e-14 * w[i]})
        fx = sign * f(r.x)
        if fx == 0.0:
            out.append(float(r.x))
        elif fx < 0.0:
            out += [root(w[i - 1], r.x), root(r.x, w[i + 1])]
    return sorted(out)


def spec_met(report: MarginReport, *, omega_g: float | None = None, pm: float | None = None,
             omega_p: float | None = None, gm: float | None = None,
             rtol: float = 1e-6, atol_angle: float = 1e-6) -> bool:
    """Whether the measured crossings include the requested ones."""
    def match(target, freqs, vals, want, angle):
        for f, v in zip(freqs, vals):
            if abs(f - target) <= rtol * target:
                if want is None:
                    return True
                err = abs(wrap_angle(v - want)) if angle else abs(v - want) / want
                return err <= (atol_angle if angle else rtol)
        return False

    ok = True
    if omega_g is not None:
        ok &= match(omega_g, report.omega_g_list, report.pm_list, pm, True)
    if omega_p is not None:
        ok &= match(omega_p, report.omega_p_list, report.gm_list, gm, False)
    return bool(ok)
