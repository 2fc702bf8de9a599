"""Real polynomials, rational transfer functions and frequency responses.

Coefficients are always stored in *ascending* order: ``coeffs[k]``
multiplies ``s**k`` (or ``omega**k``).  Nothing here ever cancels common
poles and zeros; a transfer function is kept exactly as supplied.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import (
    AmbiguousType,
    ConvergenceFailure,
    DelayUnsupported,
    EvalOnPole,
)

POLE_FLOOR = 1e-300
ROOT_RESIDUAL = 1e-8


def _canonical(coeffs: Iterable[float]) -> tuple[float, ...]:
    c = [float(x) for x in coeffs]
    while c and c[-1] == 0.0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class Polynomial:
    """Immutable real polynomial with ascending coefficients.

    The zero polynomial has an empty coefficient tuple and degree ``-inf``.
    """

    coeffs: tuple[float, ...] = ()

    def __post_init__(self):
        c = _canonical(self.coeffs)
        if not all(math.isfinite(x) for x in c):
            raise ValueError("polynomial coefficients must be finite")
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_roots(cls, roots: Sequence[complex], lead: float = 1.0) -> "Polynomial":
        c = npoly.polyfromroots(list(roots)) * lead
        return cls(np.real_if_close(c, tol=1e6).real)

    @property
    def degree(self) -> float:
        return len(self.coeffs) - 1 if self.coeffs else -math.inf

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> float:
        return self.coeffs[-1] if self.coeffs else 0.0

    def norm(self) -> float:
        return math.sqrt(sum(x * x for x in self.coeffs))

    def __call__(self, s):
        return poly_eval_complex(self, s)

    def __add__(self, other: "Polynomial | float") -> "Polynomial":
        other = _as_poly(other)
        return Polynomial(npoly.polyadd(self._arr(), other._arr()))

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(-self._arr())

    def __sub__(self, other: "Polynomial | float") -> "Polynomial":
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other: "Polynomial | float") -> "Polynomial":
        other = _as_poly(other)
        if self.is_zero or other.is_zero:
            return Polynomial()
        return Polynomial(npoly.polymul(self._arr(), other._arr()))

    __rmul__ = __mul__

    def derivative(self) -> "Polynomial":
        return Polynomial(k * c for k, c in enumerate(self.coeffs) if k > 0)

    def _arr(self) -> np.ndarray:
        return np.array(self.coeffs if self.coeffs else (0.0,), dtype=float)


def _as_poly(p) -> Polynomial:
    if isinstance(p, Polynomial):
        return p
    if isinstance(p, (int, float)):
        return Polynomial((float(p),))
    return Polynomial(p)


@dataclass(frozen=True)
class TransferFunction:
    """``num(s)/den(s) * exp(-delay*s)``; sequences are coerced to Polynomial."""

    num: Polynomial
    den: Polynomial
    delay: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "num", _as_poly(self.num))
        object.__setattr__(self, "den", _as_poly(self.den))
        if self.den.is_zero:
            raise ValueError("transfer-function denominator is the zero polynomial")
        if not (self.delay >= 0.0 and math.isfinite(self.delay)):
            raise ValueError(f"delay must be a finite nonnegative number, got {self.delay}")
        object.__setattr__(self, "delay", float(self.delay))

    def __mul__(self, other: "TransferFunction | float") -> "TransferFunction":
        if isinstance(other, TransferFunction):
            return TransferFunction(self.num * other.num, self.den * other.den,
                                    self.delay + other.delay)
        return TransferFunction(self.num * float(other), self.den, self.delay)

    __rmul__ = __mul__

    def poles(self) -> list[complex]:
        return poly_all_roots(self.den) if self.den.degree >= 1 else []

    def zeros(self) -> list[complex]:
        return poly_all_roots(self.num) if self.num.degree >= 1 else []

    def __call__(self, omega):
        return tf_eval(self, omega)


@dataclass(frozen=True)
class EvenComponents:
    """Denominator-free pieces of ``G(jw)`` as polynomials in ``w``.

    ``A/E == Re G(jw)`` and ``B/E == |G(jw)|**2``.
    """

    A: Polynomial
    B: Polynomial
    E: Polynomial


def poly_eval_complex(p: Polynomial, s):
    """Horner evaluation; ``s`` may be a scalar or a numpy array."""
    acc = np.zeros_like(s, dtype=complex) if isinstance(s, np.ndarray) else 0j
    for c in reversed(p.coeffs):
        acc = acc * s + c
    return acc


def tf_eval(tf: TransferFunction, omega):
    """Frequency response ``G(j*omega)``, including the dead time."""
    s = 1j * (np.asarray(omega, dtype=float) if isinstance(omega, np.ndarray) else float(omega))
    d = poly_eval_complex(tf.den, s)
    if np.min(np.abs(d)) < POLE_FLOOR:
        raise EvalOnPole(f"denominator vanishes at omega={omega}")
    g = poly_eval_complex(tf.num, s) / d
    if tf.delay:
        g = g * np.exp(-s * tf.delay)
    return g


def _backward_scale(p: Polynomial, r: complex) -> float:
    ar = abs(r)
    return max(p.norm(), sum(abs(c) * ar**k for k, c in enumerate(p.coeffs)))


def _polish(p: Polynomial, dp: Polynomial, r: complex, steps: int = 3) -> complex:
    best, best_res = r, abs(p(r))
    for _ in range(steps):
        d = dp(r)
        if d == 0:
            break
        r = r - p(r) / d
        res = abs(p(r))
        if res < best_res:
            best, best_res = r, res
        else:
            break
    return best


def poly_all_roots(p: Polynomial) -> list[complex]:
    """All ``degree`` roots (with multiplicity) from companion eigenvalues.

    Each root is Newton-polished and must satisfy
    ``|p(r)| <= 1e-8 * max(||coeffs||, sum |c_k| |r|^k)``.
    """
    if p.degree < 1:
        raise ValueError("poly_all_roots needs a polynomial of degree >= 1")
    try:
        raw = npoly.polyroots(np.array(p.coeffs))
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"eigenvalue iteration failed: {exc}") from exc
    dp = p.derivative()
    out = []
    for r in raw:
        r = _polish(p, dp, complex(r))
        if not (abs(p(r)) <= ROOT_RESIDUAL * _backward_scale(p, r)):
            raise ConvergenceFailure(f"root {r} has residual {abs(p(r)):.3g}")
        out.append(r)
    return out


def poly_real_roots_positive(p: Polynomial, tol: float = 1e-9) -> list[float]:
    """Positive real roots, ascending, deduplicated within ``tol``."""
    if p.degree < 1:
        raise ValueError("poly_real_roots_positive needs degree >= 1")
    dp = p.derivative()
    found: list[float] = []
    for r in poly_all_roots(p):
        if abs(r.imag) <= tol * max(1.0, abs(r)) and r.real > tol:
            x = _polish(p, dp, complex(r.real, 0.0)).real
            if not any(abs(x - y) <= tol * max(1.0, abs(y)) for y in found):
                found.append(x)
    return sorted(found)


def system_type(tf: TransferFunction) -> int:
    """Number of open-loop poles at the origin."""
    c0 = tf.num.coeffs[0] if tf.num.coeffs else 0.0
    if abs(c0) <= 1e-12 * tf.num.norm():
        raise AmbiguousType("numerator vanishes at s=0; system type is ambiguous")
    floor = 1e-12 * tf.den.norm()
    n = 0
    for c in tf.den.coeffs:
        if abs(c) > floor:
            break
        n += 1
    return n


def _jw_parts(p: Polynomial) -> tuple[Polynomial, Polynomial]:
    """Real and imaginary coefficient polynomials of ``p(j*w)`` in ``w``."""
    sign = (1.0, 1.0, -1.0, -1.0)
    re = [sign[k % 4] * c if k % 2 == 0 else 0.0 for k, c in enumerate(p.coeffs)]
    im = [sign[k % 4] * c if k % 2 == 1 else 0.0 for k, c in enumerate(p.coeffs)]
    return Polynomial(re), Polynomial(im)


def even_components(tf: TransferFunction) -> EvenComponents:
    if tf.delay > 0:
        raise DelayUnsupported("even-part decomposition requires a rational plant (delay = 0)")
    nr, ni = _jw_parts(tf.num)
    dr, di = _jw_parts(tf.den)
    return EvenComponents(
        A=nr * dr + ni * di,
        B=nr * nr + ni * ni,
        E=dr * dr + di * di,
    )


def log_grid(lo: float, hi: float, n: int) -> np.ndarray:
    """Log-spaced grid with exact endpoints."""
    if n == 1:
        return np.array([float(lo)])
    w = np.logspace(math.log10(lo), math.log10(hi), n)
    w[0], w[-1] = lo, hi
    return w
