"""Closed-form Lead, Lag and Lead-Lag design.

Every network here is written with unity DC gain; the steady-state gain
``K`` is carried along in the parameter records but is assumed to be folded
into the plant (``gbar = K * G``) when computing targets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import (
    DegeneratePhase,
    DelayUnsupported,
    Infeasible,
    NoFeasibleCrossover,
    NumericFailure,
    RealFormUnavailable,
    ResonanceFrequency,
)
from .polyfreq import (
    Polynomial,
    TransferFunction,
    even_components,
    log_grid,
    poly_real_roots_positive,
    tf_eval,
)
from .targets import (
    DesignTargets,
    lag_region,
    lead_region,
    targets_at_gain_crossover,
    targets_at_phase_crossover,
)

HALF_PI = math.pi / 2
ROOT_TOL = 1e-7


@dataclass(frozen=True)
class PQPair:
    P: float
    Q: float

    def response(self) -> complex:
        return (1 + 1j * self.P) / (1 + 1j * self.Q)


@dataclass(frozen=True)
class LeadParams:
    """``K (1 + tau s) / (1 + alpha tau s)``."""

    alpha: float
    tau: float
    K: float = 1.0


@dataclass(frozen=True)
class LagParams:
    """``K (1 + alpha tau s) / (1 + tau s)``."""

    alpha: float
    tau: float
    K: float = 1.0


@dataclass(frozen=True)
class LeadLagRealParams:
    """``K (1+tau1 s)(1+tau2 s) / ((1+alpha tau1 s)(1+tau2 s/alpha))``."""

    K: float
    alpha: float
    tau1: float
    tau2: float

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not (self.tau1 > 0 and self.tau2 > 0):
            raise ValueError("tau1 and tau2 must be positive")


@dataclass(frozen=True)
class LeadLagComplexParams:
    """``K (s^2 + 2 zeta1 wn s + wn^2) / (s^2 + 2 zeta2 wn s + wn^2)``."""

    K: float
    zeta1: float
    zeta2: float
    omega_n: float

    def __post_init__(self):
        if not (self.zeta1 > 0 and self.zeta2 > 0 and self.omega_n > 0):
            raise ValueError("zeta1, zeta2 and omega_n must be positive")


@dataclass(frozen=True)
class LeadLagCandidate:
    """One root of the phase-crossover equation and its sign test."""

    omega_p: float
    phi1: float
    phi2: float
    psi1: float
    psi2: float
    accepted: bool
    reason: str = ""


@dataclass(frozen=True)
class LeadLagSearch:
    gamma: float
    H: float
    omega_p_candidates: tuple[float, ...]
    candidates: tuple[LeadLagCandidate, ...]


@dataclass(frozen=True)
class LeadLagSolution:
    params: LeadLagComplexParams
    real_forms: tuple[LeadLagRealParams, ...]
    omega_p: float
    candidate: LeadLagCandidate | None = None


# -- inversion formulae ------------------------------------------------------------


def solve_pq(M: float, phi: float) -> PQPair:
    """Solve ``(1 + jP)/(1 + jQ) = M exp(j phi)`` for real ``P`` and ``Q``."""
    s, c = math.sin(phi), math.cos(phi)
    if abs(s) < 1e-12:
        raise DegeneratePhase(f"phi = {phi:g} has no phase to correct; the network reduces to a gain")
    return PQPair((M - c) / s, (M * c - 1.0) / (M * s))


def design_lead(targets: DesignTargets, K: float = 1.0) -> LeadParams:
    M, phi, w = targets.M, targets.phi, targets.omega
    if not 0.0 < phi < HALF_PI:
        raise Infeasible(
            f"no solutions with a Lead network: phase {math.degrees(phi):.6g} deg is outside (0, 90)",
            reason="phase", phi=phi)
    if not lead_region(M, phi):
        raise Infeasible(
            f"no solutions with a Lead network: M = {M:.6g} must exceed 1/cos(phi) = "
            f"{1 / math.cos(phi):.6g}", reason="magnitude", M=M, bound=1 / math.cos(phi))
    c = math.cos(phi)
    return LeadParams((M * c - 1.0) / (M * (M - c)), _time_constant(M - c, w * math.sin(phi)), K)


def design_lag(targets: DesignTargets, K: float = 1.0) -> LagParams:
    M, phi, w = targets.M, targets.phi, targets.omega
    if not -HALF_PI < phi < 0.0:
        raise Infeasible(
            f"no solutions with a Lag network: phase {math.degrees(phi):.6g} deg is outside (-90, 0)",
            reason="phase", phi=phi)
    if not lag_region(M, phi):
        raise Infeasible(
            f"no solutions with a Lag network: M = {M:.6g} must be below cos(phi) = "
            f"{math.cos(phi):.6g}", reason="magnitude", M=M, bound=math.cos(phi))
    c = math.cos(phi)
    return LagParams(M * (c - M) / (1.0 - M * c), _time_constant(M * c - 1.0, w * M * math.sin(phi)), K)


def _time_constant(num: float, den: float) -> float:
    tau = num / den if den != 0.0 else math.inf
    if not math.isfinite(tau):
        raise NumericFailure("time constant overflows: the phase to correct is vanishingly small")
    return tau


# -- lead-lag --------------------------------------------------------------------


def leadlag_response_pq(params: LeadLagComplexParams, omega: float) -> PQPair:
    wn = params.omega_n
    if abs(omega - wn) < 1e-12 * wn:
        raise ResonanceFrequency(f"omega = {omega:g} coincides with omega_n")
    d = wn * wn - omega * omega
    return PQPair(2 * params.zeta1 * omega * wn / d, 2 * params.zeta2 * omega * wn / d)


def crossover_gamma(targets: DesignTargets) -> float:
    """Shared ratio ``(M - cos phi)/(cos phi - 1/M)`` (equal to ``P/Q`` scaled)."""
    c = math.cos(targets.phi)
    return (targets.M - c) / (c - 1.0 / targets.M)


def build_omega_p_equation(gbar: TransferFunction, gm: float, gamma: float) -> Polynomial:
    """Polynomial in ``w`` whose positive roots are the admissible phase crossovers."""
    if gbar.delay > 0:
        raise DelayUnsupported("delayed plants need the sampled crossover search")
    ec = even_components(gbar)
    return gamma * gm * (ec.A + gm * ec.B) + ec.E + gm * ec.A


def _leadlag_residual(gbar, gm, gamma):
    def h(w):
        g = tf_eval(gbar, w)
        return gamma * gm * (g.real + gm * abs(g) ** 2) + 1.0 + gm * g.real
    return h


def sampled_roots(h, lo: float, hi: float, n: int = 10_000) -> list[float]:
    """Sign changes of ``h`` on a log grid, refined by Brent's bracketing method."""
    w = log_grid(lo, hi, n)
    v = np.asarray(h(w), dtype=float)
    roots = [float(x) for x in w[v == 0.0]]
    for i in np.nonzero(v[:-1] * v[1:] < 0)[0]:
        roots.append(brentq(h, w[i], w[i + 1], xtol=1e-300, rtol=1e-14, maxiter=200))
    return sorted(roots)


def proposition1(omega_g: float, omega_p: float, phi1: float, phi2: float,
                 psi1: float, psi2: float) -> bool:
    """All four quantities positive below ``omega_g``, all negative above it."""
    vals = (phi1, phi2, psi1, psi2)
    if omega_p < omega_g:
        return all(v > 0 for v in vals)
    if omega_p > omega_g:
        return all(v < 0 for v in vals)
    return False


def real_form_condition(omega_g: float, omega_p: float, phi1: float, phi2: float,
                        psi1: float, psi2: float) -> bool:
    """Both damping ratios exceed one (real poles and zeros)."""
    bound = (omega_g**2 - omega_p**2) ** 2 / (4 * omega_g * omega_p)
    return max(phi1 * phi2, psi1 * psi2) < bound


def _complex_params(omega_g, omega_p, f1, f2, s1, s2, K):
    d = omega_g**2 - omega_p**2
    z1 = d / (2 * f2) * math.sqrt(f2 / (omega_g * omega_p * f1))
    z2 = d / (2 * s2) * math.sqrt(s2 / (omega_g * omega_p * s1))
    wn = math.sqrt(omega_g * omega_p * f1 / f2)
    return LeadLagComplexParams(K, z1, z2, wn)


def leadlag_search(gbar: TransferFunction, omega_g: float, pm: float, gm: float,
                   K: float = 1.0, method: str = "auto",
                   grid: tuple[float, float, int] | None = None) -> LeadLagSearch:
    """Find every root of the phase-crossover equation and apply the sign test.

    ``method`` is ``"polynomial"`` (rational plants), ``"sampled"`` (grid
    plus bracketing, required with dead time) or ``"auto"``.
    """
    tg = targets_at_gain_crossover(gbar, omega_g, pm)
    if not -HALF_PI < tg.phi < HALF_PI:
        raise Infeasible(
            f"no solutions with a Lead-Lag network: phase {math.degrees(tg.phi):.6g} deg "
            "is outside (-90, 90)", reason="phase", phi=tg.phi)
    pq_g = solve_pq(tg.M, tg.phi)
    gamma = crossover_gamma(tg)

    if method == "auto":
        method = "sampled" if gbar.delay > 0 else "polynomial"
    if method == "polynomial":
        poly = build_omega_p_equation(gbar, gm, gamma)
        if poly.is_zero:
            raise NoFeasibleCrossover("phase-crossover equation vanishes identically",
                                      reason="degenerate")
        roots = poly_real_roots_positive(poly, tol=ROOT_TOL) if poly.degree >= 1 else []
    elif method == "sampled":
        lo, hi, n = grid or (omega_g / 1e3, omega_g * 1e3, 10_000)
        roots = sampled_roots(_leadlag_residual(gbar, gm, gamma), lo, hi, n)
    else:
        raise ValueError(f"unknown crossover method {method!r}")

    cands = []
    for wp in roots:
        cands.append(_examine_candidate(gbar, gm, omega_g, wp, pq_g))
    return LeadLagSearch(gamma, gm * K, tuple(roots), tuple(cands))


def _examine_candidate(gbar, gm, omega_g, wp, pq_g) -> LeadLagCandidate:
    nan = math.nan
    if abs(wp - omega_g) < 1e-9 * omega_g:
        return LeadLagCandidate(wp, nan, nan, nan, nan, False, "coincides with omega_g")
    tp = targets_at_phase_crossover(gbar, wp, gm)
    try:
        pq_p = solve_pq(tp.M, tp.phi)
    except DegeneratePhase:
        return LeadLagCandidate(wp, nan, nan, nan, nan, False, "degenerate phase at omega_p")
    if 0.0 in (pq_g.P, pq_g.Q, pq_p.P, pq_p.Q):
        return LeadLagCandidate(wp, nan, nan, nan, nan, False, "zero P or Q")
    f1 = omega_g / pq_p.P - wp / pq_g.P
    f2 = wp / pq_p.P - omega_g / pq_g.P
    s1 = omega_g / pq_p.Q - wp / pq_g.Q
    s2 = wp / pq_p.Q - omega_g / pq_g.Q
    ok = proposition1(omega_g, wp, f1, f2, s1, s2)
    return LeadLagCandidate(wp, f1, f2, s1, s2, ok, "" if ok else "sign condition violated")


def design_leadlag(gbar: TransferFunction, omega_g: float, pm: float, gm: float,
                   K: float = 1.0, method: str = "auto",
                   grid: tuple[float, float, int] | None = None) -> list[LeadLagSolution]:
    """Lead-Lag meeting PM at ``omega_g`` and GM at some phase crossover.

    Returns every admissible solution, nearest phase crossover first.
    """
    if not gm > 1:
        raise ValueError(f"gain margin must exceed 1, got {gm}")
    tg = targets_at_gain_crossover(gbar, omega_g, pm)
    if abs(tg.M - 1.0) <= 1e-9 and abs(tg.phi) <= 1e-9:
        return _identity_leadlag(gbar, omega_g, gm, K)

    search = leadlag_search(gbar, omega_g, pm, gm, K, method, grid)
    out = []
    for cand in search.candidates:
        if not cand.accepted:
            continue
        params = _complex_params(omega_g, cand.omega_p, cand.phi1, cand.phi2,
                                 cand.psi1, cand.psi2, K)
        if not _reproduces(params, tg) or not _reproduces(
                params, targets_at_phase_crossover(gbar, cand.omega_p, gm)):
            continue
        reals = ()
        if params.zeta1 > 1 and params.zeta2 > 1:
            reals = tuple(leadlag_complex_to_real(params))
        out.append(LeadLagSolution(params, reals, cand.omega_p, cand))
    if not out:
        raise NoFeasibleCrossover(
            "no solutions with a Lead-Lag network: no phase crossover passes the sign test "
            f"(candidates: {', '.join(f'{w:.6g}' for w in search.omega_p_candidates) or 'none'})",
            reason="crossover", candidates=search.omega_p_candidates)
    out.sort(key=lambda s: abs(s.omega_p - omega_g))
    return out


def _reproduces(params: LeadLagComplexParams, t: DesignTargets, rtol: float = 1e-6) -> bool:
    got = complex(tf_eval(leadlag_complex_tf(params, unity=True), t.omega))
    return abs(got - t.point) <= rtol * t.M


def _identity_leadlag(gbar, omega_g, gm, K) -> list[LeadLagSolution]:
    from .stability import measure_margins

    rep = measure_margins(gbar)
    hits = [w for w, g in zip(rep.omega_p_list, rep.gm_list) if abs(g - gm) <= 1e-9 * gm]
    if not hits:
        raise NoFeasibleCrossover(
            "the plant already meets the gain-crossover targets but not the requested gain margin",
            reason="crossover")
    return [LeadLagSolution(LeadLagComplexParams(K, 1.0, 1.0, omega_g), (), w) for w in hits]


# -- conversions between the two lead-lag forms ----------------------------------------


def leadlag_real_to_complex(p: LeadLagRealParams) -> LeadLagComplexParams:
    r = math.sqrt(p.tau1 * p.tau2)
    return LeadLagComplexParams(
        p.K,
        (p.tau1 + p.tau2) / (2 * r),
        (p.alpha * p.tau1 + p.tau2 / p.alpha) / (2 * r),
        1.0 / r,
    )


def _split(z: float) -> tuple[float, float]:
    hi = z + math.sqrt(z * z - 1.0)
    return hi, 1.0 / hi


def leadlag_complex_to_real(p: LeadLagComplexParams) -> list[LeadLagRealParams]:
    """Real-pole/zero realisations of a complex-form Lead-Lag.

    With equal damping ratios the only admissible realisation cancels each
    pole against a zero, i.e. the identity network.
    """
    if not (p.zeta1 > 1 and p.zeta2 > 1):
        raise RealFormUnavailable(
            f"real form needs zeta1 > 1 and zeta2 > 1 (got {p.zeta1:.6g}, {p.zeta2:.6g})")
    z1p, z1m = _split(p.zeta1)
    z2p, z2m = _split(p.zeta2)
    wn = p.omega_n
    if p.zeta1 < p.zeta2:
        options = [(z2m / z1m, z1m / wn, z1p / wn)]
    else:
        options = [(z2m / z1p, z1p / wn, z1m / wn), (z2p / z1p, z1p / wn, z1m / wn)]
    return [LeadLagRealParams(p.K, a, t1, t2) for a, t1, t2 in options if 0.0 < a < 1.0]


# -- transfer functions ------------------------------------------------------------------


def lead_tf(p: LeadParams) -> TransferFunction:
    return TransferFunction([p.K, p.K * p.tau], [1.0, p.alpha * p.tau])


def lag_tf(p: LagParams) -> TransferFunction:
    return TransferFunction([p.K, p.K * p.alpha * p.tau], [1.0, p.tau])


def leadlag_real_tf(p: LeadLagRealParams) -> TransferFunction:
    num = Polynomial([1.0, p.tau1]) * Polynomial([1.0, p.tau2]) * p.K
    den = Polynomial([1.0, p.alpha * p.tau1]) * Polynomial([1.0, p.tau2 / p.alpha])
    return TransferFunction(num, den)


def leadlag_complex_tf(p: LeadLagComplexParams, unity: bool = False) -> TransferFunction:
    wn = p.omega_n
    k = 1.0 if unity else p.K
    return TransferFunction([k * wn * wn, k * 2 * p.zeta1 * wn, k],
                            [wn * wn, 2 * p.zeta2 * wn, 1.0])
