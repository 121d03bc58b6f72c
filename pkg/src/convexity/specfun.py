"""Complex special functions and sech-weighted quadrature on the real line.

Everything here is vectorised over numpy arrays; scalars in give scalars out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, NamedTuple

import numpy as np
from scipy import special as _sp


class DomainError(ValueError):
    """Argument outside the domain of a special function."""


class PoleError(DomainError):
    """Argument sits on a pole."""


class GrowthContractError(ValueError):
    """Integrand exceeded its declared growth envelope."""


LOG_2PI = math.log(2.0 * math.pi)
LOG_PI = math.log(math.pi)


@lru_cache(maxsize=None)
def bernoulli_numbers(n_max: int = 30) -> tuple[Fraction, ...]:
    """Exact B_0..B_n_max (B_1 = -1/2 convention)."""
    # Akiyama-Tanigawa
    a = [Fraction(0)] * (n_max + 1)
    out = []
    for m in range(n_max + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        out.append(a[0])
    out[1] = -out[1]
    return tuple(out)


@dataclass(frozen=True)
class EulerMaclaurinConfig:
    head: int = 16
    order: int = 30
    tol: float = 1e-15

    def __post_init__(self):
        if self.order % 2 or self.order < 2:
            raise ValueError("Bernoulli order must be a positive even integer")
        if self.order > len(bernoulli_numbers()) - 1:
            raise ValueError("Bernoulli order exceeds the precomputed table")
        if self.head < 1:
            raise ValueError("head length must be positive")


_B = bernoulli_numbers(30)
# Stirling coefficients B_2k / (2k (2k-1)), k = 1..15
_STIRLING = np.array([float(_B[2 * k] / (2 * k * (2 * k - 1))) for k in range(1, 16)])
# Euler-Maclaurin coefficients B_2k / (2k)!
_EM = np.array([float(_B[2 * k] / math.factorial(2 * k)) for k in range(1, 16)])

_STIRLING_MIN_RE = 12.0


def _as_complex(z):
    arr = np.asarray(z, dtype=complex)
    return arr, arr.ndim == 0


def _finite_or_raise(out, what):
    if not np.all(np.isfinite(out)):
        raise DomainError(f"{what} produced a non-finite value")
    return out


def _stirling(w):
    # valid for Re w >= 12, principal branch
    inv = 1.0 / w
    inv2 = inv * inv
    series = np.zeros_like(w)
    for c in _STIRLING[::-1]:
        series = series * inv2 + c
    return (w - 0.5) * np.log(w) - w + 0.5 * LOG_2PI + series * inv


def _log_gamma_right(z):
    # Re z >= 0.5: shift upward then Stirling
    shift = np.clip(np.ceil(_STIRLING_MIN_RE - z.real), 0, None).astype(int)
    acc = np.zeros_like(z)
    for k in range(int(shift.max(initial=0))):
        m = k < shift
        acc[m] += np.log(z[m] + k)
    return _stirling(z + shift) - acc


def log_gamma(z):
    """Principal branch of log Gamma(z).

    Upward recurrence to Re z >= 12 followed by the Stirling series through
    B_30. For Re z < 1/2 the reflection formula is used with log sin(pi z)
    continued analytically from the upper half plane, which keeps the branch
    equal to the continuation from the positive reals.
    """
    z, scalar = _as_complex(z)
    z = np.atleast_1d(z)
    poles = (z.imag == 0) & (z.real <= 0) & (z.real == np.round(z.real))
    if poles.any():
        raise PoleError(f"log_gamma has a pole at z = {z[poles][0].real:g}")
    out = np.empty_like(z)
    right = z.real >= 0.5
    if right.any():
        out[right] = _log_gamma_right(z[right])
    if (~right).any():
        w = z[~right]
        lower = w.imag < 0
        u = np.where(lower, w.conj(), w)
        # 1 - e^{2 pi i u} via expm1 of the fractional part: no cancellation near the poles
        r = u - np.round(u.real)
        log_sin = -1j * np.pi * u + 0.5j * np.pi - math.log(2.0) + np.log(-np.expm1(2j * np.pi * r))
        val = LOG_PI - log_sin - _log_gamma_right(1.0 - u)
        out[~right] = np.where(lower, val.conj(), val)
    _finite_or_raise(out, "log_gamma")
    return out[0] if scalar else out


def log_abs_gamma_ratio(alpha, beta, nu):
    """log|Gamma(alpha + i nu) / Gamma(beta + i nu)| for alpha, beta > 0."""
    if np.any(np.asarray(alpha) <= 0) or np.any(np.asarray(beta) <= 0):
        raise DomainError("log_abs_gamma_ratio needs alpha > 0 and beta > 0")
    nu = np.asarray(nu, dtype=float)
    out = (log_gamma(alpha + 1j * nu) - log_gamma(beta + 1j * nu)).real
    return float(out) if np.ndim(out) == 0 else out


def hurwitz_zeta(s, a, config: EulerMaclaurinConfig | None = None):
    """Hurwitz zeta(s, a) for a in (0, 1] by Euler-Maclaurin summation.

    The head length grows with |Im s| so that the Bernoulli corrections
    decay geometrically; the last correction is checked against ``config.tol``
    and the head is doubled until it passes.
    """
    config = config or EulerMaclaurinConfig()
    s, s_scalar = _as_complex(s)
    a = np.asarray(a, dtype=float)
    if np.any(s == 1):
        raise PoleError("hurwitz_zeta has a pole at s = 1")
    if np.any((a <= 0) | (a > 1)):
        raise DomainError("hurwitz_zeta needs 0 < a <= 1")
    s, a = np.broadcast_arrays(s, a)
    k_max = config.order // 2
    n_head = config.head + int(np.ceil(np.abs(s).max(initial=0.0)))
    for _ in range(8):
        value, last = _hurwitz_em(s, a, n_head, k_max)
        scale = np.maximum(1.0, np.abs(value))
        if np.all(np.abs(last) <= config.tol * scale):
            break
        n_head *= 2
    else:
        raise DomainError("Euler-Maclaurin tail did not reach tolerance")
    _finite_or_raise(value, "hurwitz_zeta")
    return value[()] if s_scalar and value.ndim == 0 else value


def _hurwitz_em(s, a, n_head, k_max):
    n = np.arange(n_head, dtype=float).reshape((n_head,) + (1,) * s.ndim)
    head = np.exp(-s * np.log(n + a)).sum(axis=0)
    x = n_head + a
    log_x = np.log(x)
    x_s = np.exp(-s * log_x)
    value = head + x * x_s / (s - 1.0) + 0.5 * x_s
    poch = s.copy()
    power = x_s / x
    term = np.zeros_like(value)
    for k in range(1, k_max + 1):
        term = _EM[k - 1] * poch * power
        value = value + term
        poch = poch * (s + 2 * k - 1) * (s + 2 * k)
        power = power / (x * x)
    return value, term


def zeta(s):
    return hurwitz_zeta(s, 1.0)


# ----------------------------------------------------------------------------
# sech-weighted quadrature


@dataclass(frozen=True)
class QuadratureConfig:
    T: float = 30.0
    h: float = 1.0 / 64
    refine: int = 3

    def __post_init__(self):
        if self.T <= 0 or self.h <= 0:
            raise ValueError("QuadratureConfig needs T > 0 and h > 0")
        if self.refine < 0:
            raise ValueError("refine must be nonnegative")


class Envelope(NamedTuple):
    """Declared growth |g(t)| <= c (1 + |t|)^p."""

    c: float
    p: float = 0.0

    def __call__(self, t):
        return self.c * (1.0 + np.abs(t)) ** self.p

    def sech_tail(self, T: float) -> float:
        # int_{|t|>T} c(1+|t|)^p / cosh t  <=  4c int_T^inf (1+t)^p e^{-t} dt
        #                                   =  4c e Gamma(p+1, 1+T)
        if self.c == 0:
            return 0.0
        upper = _sp.gammaincc(self.p + 1.0, 1.0 + T) * _sp.gamma(self.p + 1.0)
        return float(4.0 * self.c * math.e * upper)


class QuadResult(NamedTuple):
    value: float
    error: float
    h: float
    tail: float


_ENVELOPE_SLACK = 1.0 + 1e-9
_T_MAX = 120.0


def _trapezoid(g, h, T, envelope):
    k = int(math.ceil(T / h))
    t = h * np.arange(-k, k + 1)
    vals = np.asarray(g(t), dtype=float)
    if vals.shape != t.shape:
        vals = np.broadcast_to(vals, t.shape)
    if not np.all(np.isfinite(vals)):
        raise DomainError("integrand is not finite at a quadrature node")
    bad = np.abs(vals) > envelope(t) * _ENVELOPE_SLACK + 1e-300
    if bad.any():
        i = int(np.argmax(bad))
        raise GrowthContractError(
            f"|g({t[i]:.6g})| = {abs(vals[i]):.6g} exceeds envelope {envelope(t[i]):.6g}"
        )
    return h * float(np.sum(vals / np.cosh(t)))


def sech_integral(
    g: Callable[[np.ndarray], np.ndarray],
    envelope: Envelope,
    config: QuadratureConfig | None = None,
    target: float | None = None,
) -> QuadResult:
    """Integrate g(t)/cosh(t) over the real line.

    Composite trapezoid on a uniform grid over [-T, T]. The error estimate is
    the certified truncation tail from ``envelope`` plus the change of the
    value when h is halved. If ``target`` is given, T is extended until the
    tail is below half of it and h keeps halving (at most ``config.refine``
    extra times) until the whole estimate drops below it.
    """
    config = config or QuadratureConfig()
    # a target also lets T grow until the certified tail fits inside it
    T = config.T
    tail = envelope.sech_tail(T)
    while target is not None and tail > 0.5 * target and T < _T_MAX:
        T += 5.0
        tail = envelope.sech_tail(T)
    h = config.h
    coarse = _trapezoid(g, h, T, envelope)
    fine = _trapezoid(g, h / 2, T, envelope)
    err = abs(fine - coarse) + tail
    for _ in range(config.refine):
        if target is None or err <= target:
            break
        h /= 2
        coarse, fine = fine, _trapezoid(g, h / 2, T, envelope)
        err = abs(fine - coarse) + tail
    return QuadResult(fine, err, h / 2, tail)
