"""Closed-form PID, PI and PD synthesis.

Ideal (non-filtered) controllers only::

    PID: Kp (1 + 1/(Ti s) + Td s)
    PI:  Kp (1 + 1/(Ti s))
    PD:  Kp (1 + Td s)
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import singledispatch

from .errors import DegeneratePhase, Infeasible, NoFeasibleCrossover, NumericFailure
from .networks import (
    LagParams,
    LeadLagComplexParams,
    LeadLagRealParams,
    LeadParams,
    ROOT_TOL,
    lag_tf,
    lead_tf,
    leadlag_complex_tf,
    leadlag_real_tf,
    sampled_roots,
)
from .polyfreq import (
    Polynomial,
    TransferFunction,
    even_components,
    poly_real_roots_positive,
    tf_eval,
)
from .targets import (
    DesignTargets,
    pd_region,
    pi_region,
    pid_ki_region,
    pid_region,
    targets_at_gain_crossover,
    targets_at_phase_crossover,
)


@dataclass(frozen=True)
class PidParams:
    kp: float
    ti: float
    td: float

    def __post_init__(self):
        if not (self.kp > 0 and self.ti > 0 and self.td > 0):
            raise ValueError(f"PID parameters must be positive, got {self}")

    @property
    def ki(self) -> float:
        return self.kp / self.ti

    @property
    def sigma(self) -> float:
        return self.td / self.ti

    @property
    def real_zeros(self) -> bool:
        return self.ti >= 4 * self.td


@dataclass(frozen=True)
class PiParams:
    kp: float
    ti: float


@dataclass(frozen=True)
class PdParams:
    kp: float
    td: float


def _tan(phi: float) -> float:
    c = math.cos(phi)
    if abs(c) < 1e-12:
        raise DegeneratePhase(f"cos(phi) vanishes at phi = {phi:g}")
    return math.sin(phi) / c


def _deg(phi: float) -> str:
    return f"{math.degrees(phi):.6g} deg"


BOUNDARY_RTOL = 1e-12


def _finite(params):
    if not all(math.isfinite(v) for v in vars(params).values()):
        raise NumericFailure(f"parameters overflow: {params}; the phase is vanishingly close to a boundary")
    return params


def design_pid_sigma(targets: DesignTargets, sigma: float) -> PidParams:
    """PID with the ratio ``Td/Ti = sigma`` fixed in advance."""
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    M, phi, w = targets.M, targets.phi, targets.omega
    if not pid_region(M, phi):
        raise Infeasible(f"no solutions with a PID controller: phase {_deg(phi)} is outside (-90, 90)",
                         reason="phase", phi=phi)
    t = _tan(phi)
    ti = (t + math.sqrt(t * t + 4 * sigma)) / (2 * w * sigma)
    return _finite(PidParams(M * math.cos(phi), ti, ti * sigma))


def design_pid_fix_ti(targets: DesignTargets, ti: float) -> PidParams:
    """PID with ``Ti`` chosen freely; ``Td`` follows from the phase condition."""
    if not ti > 0:
        raise ValueError(f"Ti must be positive, got {ti}")
    M, phi, w = targets.M, targets.phi, targets.omega
    if not pid_region(M, phi):
        raise Infeasible(f"no solutions with a PID controller: phase {_deg(phi)} is outside (-90, 90)",
                         reason="phase", phi=phi)
    t = _tan(phi)
    num = 1.0 + w * ti * t
    # a tolerance so that the bound itself is rejected despite rounding of tan
    if not num > BOUNDARY_RTOL * max(1.0, abs(w * ti * t)):
        bound = -1.0 / (w * t)
        raise Infeasible(f"with phase {_deg(phi)} Ti must be below {bound:.6g} (got {ti:.6g})",
                         reason="bound", bound=bound)
    return _finite(PidParams(M * math.cos(phi), ti, num / (ti * w * w)))


def design_pid_fix_td(targets: DesignTargets, td: float) -> PidParams:
    """PID with ``Td`` chosen freely; ``Ti`` follows from the phase condition."""
    if not td > 0:
        raise ValueError(f"Td must be positive, got {td}")
    M, phi, w = targets.M, targets.phi, targets.omega
    if not pid_region(M, phi):
        raise Infeasible(f"no solutions with a PID controller: phase {_deg(phi)} is outside (-90, 90)",
                         reason="phase", phi=phi)
    t = _tan(phi)
    den = w * w * td - w * t
    if not den > BOUNDARY_RTOL * max(w * w * td, abs(w * t)):
        bound = t / w
        raise Infeasible(f"with phase {_deg(phi)} Td must exceed {bound:.6g} (got {td:.6g})",
                         reason="bound", bound=bound)
    return _finite(PidParams(M * math.cos(phi), 1.0 / den, td))


def design_pd(targets: DesignTargets) -> PdParams:
    M, phi, w = targets.M, targets.phi, targets.omega
    if not pd_region(M, phi):
        raise Infeasible(f"no solutions with a PD controller: phase {_deg(phi)} is outside (0, 90)",
                         reason="phase", phi=phi)
    return _finite(PdParams(M * math.cos(phi), _tan(phi) / w))


def design_pi(targets: DesignTargets) -> PiParams:
    M, phi, w = targets.M, targets.phi, targets.omega
    if not pi_region(M, phi):
        raise Infeasible(f"no solutions with a PI controller: phase {_deg(phi)} is outside (-90, 0)",
                         reason="phase", phi=phi)
    return _finite(PiParams(M * math.cos(phi), -1.0 / (w * _tan(phi))))


def design_pid_ki(targets: DesignTargets, ki: float) -> PidParams:
    """PID when steady state fixes ``Ki = Kp/Ti``.

    ``targets`` must come from :func:`~invform.targets.pid_targets_constrained_ki`,
    i.e. they describe ``1 + Ti s + Ti Td s^2`` alone.
    """
    M, phi, w = targets.M, targets.phi, targets.omega
    if not 0.0 < phi < math.pi:
        raise Infeasible(f"no solutions with a PID controller for this K_i: phase {_deg(phi)} "
                         "is outside (0, 180)", reason="phase", phi=phi)
    if not pid_ki_region(M, phi):
        raise Infeasible(f"no solutions with a PID controller for this K_i: M cos(phi) = "
                         f"{M * math.cos(phi):.6g} must be below 1", reason="magnitude")
    s = math.sin(phi)
    ti = M * s / w
    td = (1.0 - M * math.cos(phi)) / (w * M * s)
    return _finite(PidParams(ki * ti, ti, td))


def pid_gm_conditions(omega_g: float, phi_g: float, omega_p: float, phi_p: float) -> bool:
    """Sign conditions under which both time constants come out positive."""
    tg, tp = _tan(phi_g), _tan(phi_p)
    if omega_p < omega_g:
        return omega_g * tg > omega_p * tp and omega_p * tg > omega_g * tp
    if omega_p > omega_g:
        return omega_g * tg < omega_p * tp and omega_p * tg < omega_g * tp
    return False


def pid_gm_time_constants(omega_g, phi_g, omega_p, phi_p) -> tuple[float, float]:
    tg, tp = _tan(phi_g), _tan(phi_p)
    d = omega_g**2 - omega_p**2
    q = omega_g * omega_p * (omega_p * tg - omega_g * tp)
    if d == 0.0 or q == 0.0:
        raise Infeasible("crossover pair leaves a time constant undetermined",
                         reason="degenerate", omega_g=omega_g, omega_p=omega_p)
    ti = d / q
    td = (omega_g * tg - omega_p * tp) / d
    return ti, td


def pid_gm_equation(gbar: TransferFunction, gm: float, c: float) -> Polynomial:
    """``c GM B + A``: its positive roots make ``M_p cos phi_p`` equal ``c``."""
    ec = even_components(gbar)
    return c * gm * ec.B + ec.A


def design_pid_gm(gbar: TransferFunction, omega_g: float, pm: float, gm: float,
                  method: str = "auto",
                  grid: tuple[float, float, int] | None = None) -> list[tuple[PidParams, float]]:
    """PID placing PM at ``omega_g`` and GM at a phase crossover it picks itself.

    Returns ``(params, omega_p)`` pairs, nearest phase crossover first.
    """
    if not gm > 1:
        raise ValueError(f"gain margin must exceed 1, got {gm}")
    tg = targets_at_gain_crossover(gbar, omega_g, pm)
    if not pid_region(tg.M, tg.phi):
        raise Infeasible(f"no solutions with a PID controller: phase {_deg(tg.phi)} is outside (-90, 90)",
                         reason="phase", phi=tg.phi)
    c = tg.M * math.cos(tg.phi)

    if method == "auto":
        method = "sampled" if gbar.delay > 0 else "polynomial"
    if method == "polynomial":
        poly = pid_gm_equation(gbar, gm, c)
        roots = poly_real_roots_positive(poly, tol=ROOT_TOL) if poly.degree >= 1 else []
    elif method == "sampled":
        def h(w):
            g = tf_eval(gbar, w)
            return c * gm * abs(g) ** 2 + g.real
        lo, hi, n = grid or (omega_g / 1e3, omega_g * 1e3, 10_000)
        roots = sampled_roots(h, lo, hi, n)
    else:
        raise ValueError(f"unknown crossover method {method!r}")

    out = []
    for wp in roots:
        if abs(wp - omega_g) < 1e-9 * omega_g:
            continue
        tp = targets_at_phase_crossover(gbar, wp, gm)
        try:
            if not pid_gm_conditions(omega_g, tg.phi, wp, tp.phi):
                continue
            ti, td = pid_gm_time_constants(omega_g, tg.phi, wp, tp.phi)
        except DegeneratePhase:
            continue
        if not (ti > 0 and td > 0):
            continue
        p = PidParams(c, ti, td)
        if _pid_reproduces(p, tg) and _pid_reproduces(p, tp):
            out.append((p, wp))
    if not out:
        raise NoFeasibleCrossover(
            "no solutions with a PID controller: no phase crossover satisfies the sign conditions "
            f"(candidates: {', '.join(f'{w:.6g}' for w in roots) or 'none'})",
            reason="crossover", candidates=tuple(roots))
    out.sort(key=lambda pw: abs(pw[1] - omega_g))
    return out


def _pid_reproduces(p: PidParams, t: DesignTargets, rtol: float = 1e-6) -> bool:
    got = complex(tf_eval(controller_tf(p), t.omega))
    return abs(got - t.point) <= rtol * t.M


def pid_zeros(p: PidParams) -> tuple[complex, complex]:
    """Roots of ``1 + Ti s + Ti Td s^2``."""
    a, b = p.ti * p.td, p.ti
    disc = cmath.sqrt(b * b - 4 * a)
    r1, r2 = (-b - disc) / (2 * a), (-b + disc) / (2 * a)
    if b * b - 4 * a >= 0:
        r1, r2 = complex(r1.real, 0.0), complex(r2.real, 0.0)
    return r1, r2


@singledispatch
def controller_tf(params) -> TransferFunction:
    """Materialise any parameter record as a transfer function."""
    raise TypeError(f"no transfer function for {type(params).__name__}")


@controller_tf.register
def _(p: PidParams) -> TransferFunction:
    return TransferFunction([p.kp, p.kp * p.ti, p.kp * p.ti * p.td], [0.0, p.ti])


@controller_tf.register
def _(p: PiParams) -> TransferFunction:
    return TransferFunction([p.kp, p.kp * p.ti], [0.0, p.ti])


@controller_tf.register
def _(p: PdParams) -> TransferFunction:
    return TransferFunction([p.kp, p.kp * p.td], [1.0])


controller_tf.register(LeadParams, lead_tf)
controller_tf.register(LagParams, lag_tf)
controller_tf.register(LeadLagRealParams, leadlag_real_tf)
controller_tf.register(LeadLagComplexParams, lambda p: leadlag_complex_tf(p))
