"""The convexity bound chain for L-functions with an Euler product.

The sech-weighted Jensen inequality on the strip -delta <= Re s <= 1 + delta,
mapped by s = 1/2 + kappa z with kappa = (1 + 2 delta)/pi, gives

    log|F(1/2)| <= (1/pi) int log|F(1 + delta + i kappa t)| dt/cosh t
                   + (1/2 + delta) log C + O(1),

and expanding log F in its Euler log-coefficients turns the integral into
2 sum Re(b_n) / (n^{3/2 + 2 delta} + n^{1/2}). Letting delta -> 0 yields
|F(1/2)| << C^{1/2} exp(4 sum |b_n| n^{-3/2}).

Implied constants are taken to be 1 throughout; measured ratios against
that normalised bound are reported rather than asserted as theorems.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .dirichlet import EulerLogCoefficients
from .selberg_frame import BoundParams, Frame, LFunction, conductor
from .specfun import Envelope, QuadratureConfig, log_abs_gamma_ratio, sech_integral, zeta
from .strip_jensen import J_closed

DEFAULT_CUTOFF = 10**6
DELTAS = (0.05, 0.1, 0.25, 0.5)


class EulerSum(NamedTuple):
    head: float
    tail: float

    @property
    def upper(self) -> float:
        return self.head + self.tail


def euler_abs_sum(b: EulerLogCoefficients) -> EulerSum:
    """S = sum |b_n| n^{-3/2}: explicit head plus certified tail."""
    return EulerSum(b.abs_sum(1.5), b.tail_bound)


def theorem_bound(frame: Frame, b: EulerLogCoefficients) -> float:
    """C^{1/2} exp(4 S), S evaluated as an upper bound (head + tail)."""
    return math.sqrt(conductor(frame)) * math.exp(4.0 * euler_abs_sum(b).upper)


def euler_smoothed_parts(b: EulerLogCoefficients, delta: float) -> EulerSum:
    """2 sum Re(b_n) / (n^{3/2+2 delta} + n^{1/2}), split into head and tail bound."""
    BoundParams(delta)
    n = b.n.astype(float)
    head = 2.0 * float(np.sum(b.values.real / (n ** (1.5 + 2 * delta) + np.sqrt(n))))
    # termwise 2|b_n| / (n^{3/2+2d} + n^{1/2}) <= 2 |b_n| n^{-3/2-2d}
    tail = 2.0 * b.tail_sum_bound(1.5 + 2 * delta)
    return EulerSum(head, tail)


def euler_smoothed_sum(b: EulerLogCoefficients, delta: float) -> float:
    return euler_smoothed_parts(b, delta).upper


class Integral(NamedTuple):
    value: float
    error: float


def log_abs_envelope(delta: float) -> Envelope:
    """|log|F(1+delta+it)|| <= sum_p sum_k p^{-k(1+delta)}/k = log zeta(1+delta).

    Valid whenever |b_{p^k}| <= 1/k, in particular for zeta and Dirichlet L.
    """
    return Envelope(float(np.log(zeta(1.0 + delta).real)) * (1 + 1e-12), 0.0)


def smoothed_log_integral(
    F: Callable, delta: float, envelope: Envelope | None = None, q: QuadratureConfig | None = None
) -> Integral:
    """(1/pi) int log|F(1 + delta + i kappa t)| dt / cosh t by direct quadrature."""
    kappa = BoundParams(delta).kappa
    envelope = envelope or log_abs_envelope(delta)

    def g(t):
        return np.log(np.abs(F(1.0 + delta + 1j * kappa * t)))

    res = sech_integral(g, envelope, q, target=1e-10)
    return Integral(res.value / math.pi, res.error / math.pi)


def intermediate_rhs(
    frame: Frame, F: Callable, delta: float, envelope: Envelope | None = None, q: QuadratureConfig | None = None
) -> Integral:
    """(1/pi) int log|F(1+delta+i kappa t)| dt/cosh t + (1/2 + delta) log C."""
    integral = smoothed_log_integral(F, delta, envelope, q)
    return Integral(integral.value + (0.5 + delta) * math.log(conductor(frame)), integral.error)


@dataclass
class IntermediateCheck:
    name: str
    delta: float
    rhs: float
    rhs_error: float
    shortcut_head: float
    shortcut_tail: float
    log_abs_half: float
    slack: float
    agree: bool


def intermediate_check(L: LFunction, delta: float, cutoff: int = DEFAULT_CUTOFF) -> IntermediateCheck:
    """Direct quadrature vs Euler-product shortcut, and slack against log|F(1/2)|."""
    C = conductor(L.frame)
    direct = smoothed_log_integral(L.evaluate, delta)
    parts = euler_smoothed_parts(L.log_coeffs(cutoff), delta)
    log_half = math.log(abs(complex(L.evaluate(0.5))))
    rhs = direct.value + (0.5 + delta) * math.log(C)
    return IntermediateCheck(
        name=L.name,
        delta=delta,
        rhs=rhs,
        rhs_error=direct.error,
        shortcut_head=parts.head,
        shortcut_tail=parts.tail,
        log_abs_half=log_half,
        slack=rhs - log_half,
        agree=abs(direct.value - parts.head) <= direct.error + parts.tail,
    )


class ClassicBound(NamedTuple):
    eps: float
    exponent: float
    value: float


def classic_bound_record(C: float, eps: float, A: float) -> ClassicBound:
    """eps^{-1} A C^{1/2 + eps}: the bound with the C^eps loss."""
    if eps <= 0 or A <= 0:
        raise ValueError("need eps > 0 and A > 0")
    return ClassicBound(eps, 0.5 + eps, A / eps * C ** (0.5 + eps))


def classic_crossover(eps: float, A: float, S: float) -> float:
    """Conductor beyond which eps^{-1} A C^{1/2+eps} exceeds C^{1/2} exp(4S)."""
    return (eps * math.exp(4.0 * S) / A) ** (1.0 / eps)


def zero_J_mass(zeros: Sequence[complex], delta: float) -> float:
    """sum_rho J((rho - 1/2)/kappa): the slack discarded from zeros inside the strip."""
    kappa = BoundParams(delta).kappa
    return float(sum(J_closed((complex(r) - 0.5) / kappa) for r in zeros))


def gamma_ratio_remainder(alpha: float, beta: float, nus) -> float:
    """max over nus of |log|Gamma(a+i nu)/Gamma(b+i nu)| - (a-b) log(1+|nu|)|."""
    nus = np.asarray(nus, dtype=float)
    r = log_abs_gamma_ratio(alpha, beta, nus) - (alpha - beta) * np.log1p(np.abs(nus))
    return float(np.max(np.abs(r)))


def gamma_ratio_grid(n: int = 1000, nu_max: float = 1e6, jitter: float = 0.0) -> np.ndarray:
    """Symmetric log-spaced grid on [-nu_max, nu_max] including small |nu|."""
    half = np.logspace(-3, math.log10(nu_max), n // 2) * (1.0 + jitter)
    half = np.minimum(half, nu_max)
    return np.concatenate([-half[::-1], half])


GAMMA_RATIO_PAIRS = ((1.5, 0.5), (1.0, 0.5), (2.0, 1.0), (0.75, 0.25), (1.25, 0.25), (3.0, 0.1))


@dataclass
class BoundReport:
    name: str
    conductor: float
    theorem_bound: float
    euler_sum: float
    euler_tail: float
    L_abs: float
    ratio: float
    delta: float
    slack: float
    classic_eps: float
    classic_value: float

    def as_row(self) -> dict:
        return asdict(self)


def bound_report(
    L: LFunction, delta: float = 0.1, eps: float = 0.1, A: float = 1.0, cutoff: int = DEFAULT_CUTOFF
) -> BoundReport:
    b = L.log_coeffs(cutoff) if L.log_coeffs is not None else EulerLogCoefficients.zero(cutoff)
    S = euler_abs_sum(b)
    C = conductor(L.frame)
    bound = math.sqrt(C) * math.exp(4.0 * S.upper)
    L_abs = abs(complex(L.evaluate(0.5)))
    rhs = intermediate_rhs(L.frame, L.evaluate, delta)
    slack = rhs.value - math.log(L_abs) if L_abs > 0 else math.inf
    classic = classic_bound_record(C, eps, A)
    return BoundReport(
        name=L.name,
        conductor=C,
        theorem_bound=bound,
        euler_sum=S.head,
        euler_tail=S.tail,
        L_abs=L_abs,
        ratio=L_abs / bound,
        delta=delta,
        slack=slack,
        classic_eps=eps,
        classic_value=classic.value,
    )


def delta_table(b: EulerLogCoefficients, deltas: Sequence[float] = (0.2, 0.1, 0.05, 0.025)) -> list[tuple[float, float]]:
    """Smoothed Euler sums along delta -> 0 with a Richardson extrapolate appended (delta = 0).

    The smoothed sum is smooth in delta, so halving delta and combining
    2 f(d/2) - f(d) removes the linear term.
    """
    vals = [(d, euler_smoothed_parts(b, d).head) for d in deltas]
    if len(vals) >= 2:
        (d1, f1), (d2, f2) = vals[-2], vals[-1]
        r = d1 / d2
        vals.append((0.0, (r * f2 - f1) / (r - 1.0)))
    return vals


def smoothed_limit(b: EulerLogCoefficients) -> float:
    """2 sum Re(b_n) / (n^{3/2} + n^{1/2}), the delta = 0 value of the smoothed sum."""
    n = b.n.astype(float)
    return 2.0 * float(np.sum(b.values.real / (n**1.5 + np.sqrt(n))))


@dataclass
class ScanRow:
    q: int
    index: int
    parity: int
    conductor_chi: int
    C: float
    L_abs: float
    theorem_bound: float
    ratio: float


def scan_modulus(q: int, cutoff: int = DEFAULT_CUTOFF) -> list[ScanRow]:
    """Theorem check for every primitive nonprincipal character mod q.

    |b_{p^k}| = 1/k for every p not dividing q whatever the character, so S
    and C are shared by all characters of the modulus and computed once.
    """
    from .dirichlet import L_values_at, euler_log_coeffs, frame_for, primitive_characters

    chars = primitive_characters(q)
    if not chars:
        return []
    C = conductor(frame_for(chars[0]))
    bound = math.sqrt(C) * math.exp(4.0 * euler_abs_sum(euler_log_coeffs(chars[0], cutoff)).upper)
    vals = np.abs(L_values_at(chars, 0.5))
    return [
        ScanRow(q, c.index, c.parity, c.conductor, C, float(v), bound, float(v) / bound)
        for c, v in zip(chars, vals)
    ]
