"""From specifications to the ``(M, phi, omega)`` a compensator must realise.

Angles are radians and principal values in ``(-pi, pi]`` throughout.  The
region predicates at the bottom are the single source of truth for
feasibility: the design routines in :mod:`invform.networks` and
:mod:`invform.pid` call the same functions, so classification and design
can never disagree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InfeasibleAtFrequency, NonpositiveGain, TypeMismatch
from .polyfreq import TransferFunction, system_type, tf_eval

HALF_PI = math.pi / 2


def wrap_angle(theta: float) -> float:
    """Reduce ``theta`` to the principal value in ``(-pi, pi]``."""
    if not math.isfinite(theta):
        raise ValueError(f"cannot wrap non-finite angle {theta}")
    r = math.remainder(theta, 2 * math.pi)
    return math.pi if r <= -math.pi else r


class SteadyStateKind(str, Enum):
    ERROR_CONSTANT = "error-constant"
    ERROR_VALUE = "error-value"


@dataclass(frozen=True)
class SteadyStateSpec:
    """Steady-state requirement of a given order.

    ``order`` 0/1/2 means position/velocity/acceleration. ``kind`` says whether
    ``value`` is the error constant (``K_v``...) or the error itself
    (``e_v = 1/K_v``...).
    """

    kind: SteadyStateKind
    order: int
    value: float

    def __post_init__(self):
        object.__setattr__(self, "kind", SteadyStateKind(self.kind))
        if self.order not in (0, 1, 2):
            raise ValueError(f"steady-state order must be 0, 1 or 2, got {self.order}")
        if not self.value > 0:
            raise ValueError(f"steady-state value must be positive, got {self.value}")

    @property
    def error_constant(self) -> float:
        if self.kind is SteadyStateKind.ERROR_CONSTANT:
            return self.value
        return 1.0 / self.value


@dataclass(frozen=True)
class DesignTargets:
    """Required compensator response ``M * exp(j*phi)`` at ``omega``."""

    M: float
    phi: float
    omega: float

    def __post_init__(self):
        if not (self.M > 0 and math.isfinite(self.M)):
            raise ValueError(f"target magnitude must be positive, got {self.M}")
        if not self.omega > 0:
            raise ValueError(f"target frequency must be positive, got {self.omega}")
        object.__setattr__(self, "phi", wrap_angle(self.phi))

    @property
    def point(self) -> complex:
        return self.M * complex(math.cos(self.phi), math.sin(self.phi))


@dataclass(frozen=True)
class FeasibilityReport:
    lead: bool
    lag: bool
    leadlag_real_z1_gt_z2: bool
    leadlag_z2_gt_z1: bool
    pid: bool
    pd: bool
    pi: bool
    notes: str = ""

    @property
    def leadlag(self) -> bool:
        return self.leadlag_real_z1_gt_z2 or self.leadlag_z2_gt_z1


# -- steady state ---------------------------------------------------------------


def low_frequency_gain(plant: TransferFunction, order: int) -> float:
    """``lim_{s->0} s**order * G(s)`` for a plant of exactly that type."""
    return plant.num.coeffs[0] / plant.den.coeffs[order]


def dc_gain_from_spec(plant: TransferFunction, spec: SteadyStateSpec) -> float:
    """Compensator DC gain ``K`` that meets ``spec`` with unity-DC-gain correction."""
    n = system_type(plant)
    if n != spec.order:
        raise TypeMismatch(
            f"plant is type {n} but the steady-state spec has order {spec.order}; "
            "the DC gain is only fixed when they agree")
    K = spec.error_constant / low_frequency_gain(plant, n)
    if not K > 0:
        raise NonpositiveGain(f"steady-state spec forces K = {K:g} <= 0")
    return K


def ki_from_spec(plant: TransferFunction, spec: SteadyStateSpec) -> float:
    """Integration constant ``K_i = K_p/T_i`` fixed by a spec one order above the plant type.

    The PID integrator raises the loop type by one, so e.g. an acceleration
    error on a type-1 plant pins ``K_i``. The boundary value is returned.
    """
    n = system_type(plant)
    if spec.order != n + 1:
        raise TypeMismatch(
            f"K_i is fixed by a spec of order {n + 1} for a type-{n} plant, got order {spec.order}")
    ki = spec.error_constant / low_frequency_gain(plant, n)
    if not ki > 0:
        raise NonpositiveGain(f"steady-state spec forces K_i = {ki:g} <= 0")
    return ki


# -- target triples -------------------------------------------------------------


def targets_at_gain_crossover(gbar: TransferFunction, omega_g: float, pm: float) -> DesignTargets:
    g = complex(tf_eval(gbar, omega_g))
    return DesignTargets(1.0 / abs(g), wrap_angle(pm - math.pi - np.angle(g)), omega_g)


def targets_at_phase_crossover(gbar: TransferFunction, omega_p: float, gm: float) -> DesignTargets:
    g = complex(tf_eval(gbar, omega_p))
    return DesignTargets(1.0 / (gm * abs(g)), wrap_angle(-math.pi - np.angle(g)), omega_p)


def pid_targets_constrained_ki(plant: TransferFunction, omega_g: float, pm: float,
                               ki: float) -> DesignTargets:
    """Targets for ``1 + T_i s + T_i T_d s^2`` once ``K_i/s`` joins the plant."""
    if not ki > 0:
        raise ValueError(f"K_i must be positive, got {ki}")
    g = complex(tf_eval(plant, omega_g))
    return DesignTargets(omega_g / (ki * abs(g)), wrap_angle(pm - HALF_PI - np.angle(g)), omega_g)


# -- achievable phase margins ---------------------------------------------------


def pm_range_lead(gbar: TransferFunction, omega_g: float) -> tuple[float, float]:
    """Open interval of phase margins a Lead network can give at ``omega_g``."""
    g = complex(tf_eval(gbar, omega_g))
    if abs(g) > 1.0:
        raise InfeasibleAtFrequency(
            f"|G(j{omega_g:g})| = {abs(g):.6g} > 1: a Lead network cannot place the "
            "gain crossover here", reason="magnitude")
    lo = wrap_angle(math.pi + np.angle(g))
    return lo, lo + math.acos(abs(g))


def pm_range_lag(gbar: TransferFunction, omega_g: float) -> tuple[float, float]:
    """Open interval of phase margins a Lag network can give at ``omega_g``."""
    g = complex(tf_eval(gbar, omega_g))
    if abs(g) < 1.0:
        raise InfeasibleAtFrequency(
            f"|G(j{omega_g:g})| = {abs(g):.6g} < 1: a Lag network cannot place the "
            "gain crossover here", reason="magnitude")
    hi = wrap_angle(math.pi + np.angle(g))
    return hi - math.acos(1.0 / abs(g)), hi


# -- regions of the (M, phi) plane -------------------------------------------------


def lead_region(M: float, phi: float) -> bool:
    return 0.0 < phi < HALF_PI and M * math.cos(phi) > 1.0


def lag_region(M: float, phi: float) -> bool:
    return -HALF_PI < phi < 0.0 and math.cos(phi) > M


def leadlag_z1_gt_z2_region(M: float, phi: float) -> bool:
    return -HALF_PI < phi < HALF_PI and M * math.cos(phi) > 1.0


def leadlag_z2_gt_z1_region(M: float, phi: float) -> bool:
    return -HALF_PI < phi < HALF_PI and math.cos(phi) > M


def pid_region(M: float, phi: float) -> bool:
    return -HALF_PI < phi < HALF_PI


def pd_region(M: float, phi: float) -> bool:
    return 0.0 < phi < HALF_PI


def pi_region(M: float, phi: float) -> bool:
    return -HALF_PI < phi < 0.0


def pid_ki_region(M: float, phi: float) -> bool:
    """Region for the ``K_i``-constrained PID (targets from :func:`pid_targets_constrained_ki`)."""
    return 0.0 < phi < math.pi and M * math.cos(phi) < 1.0


def classify(targets: DesignTargets) -> FeasibilityReport:
    M, phi = targets.M, targets.phi
    notes = [
        "pid flag refers to the fixed-ratio (T_d/T_i) design",
        "the gain-margin PID design additionally needs a feasible phase crossover",
        "the K_i-constrained PID design uses its own targets (phi = PM - pi/2 - arg G) "
        "and is classified with pid_ki_region",
    ]
    return FeasibilityReport(
        lead=lead_region(M, phi),
        lag=lag_region(M, phi),
        leadlag_real_z1_gt_z2=leadlag_z1_gt_z2_region(M, phi),
        leadlag_z2_gt_z1=leadlag_z2_gt_z1_region(M, phi),
        pid=pid_region(M, phi),
        pd=pd_region(M, phi),
        pi=pi_region(M, phi),
        notes="; ".join(notes),
    )
