"""Jensen's formula for the strip |Re z| < pi/2, checked numerically.

For an entire f of finite order with f(0) != 0,

    (1/2 pi i) int_P log|f(z)| dz / sin z = log|f(0)| + sum_rho J(rho),

where P runs up the line Re z = pi/2 and down the line Re z = -pi/2, and
J(rho) = log|cot(rho/2)| inside the strip, 0 outside. ``tan(z/2)`` maps the
strip onto the unit disc, so J is the Green's function of the strip with
pole at the origin and the kernel dt/(2 pi cosh t) is harmonic measure.

Test functions are built constructively as exp(g(z)) times products of
elementary factors E_M(z/rho), so both sides of the identity are computable.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np
from scipy import integrate

from .specfun import DomainError, Envelope, QuadratureConfig, QuadResult, sech_integral

HALF_PI = 0.5 * math.pi
EDGE_TOL = 1e-12
NEAR_EDGE = 0.05


class SingularityError(DomainError):
    pass


class InsufficientSignalError(RuntimeError):
    pass


class ConditioningWarning(UserWarning):
    pass


def log_abs_elementary(w, order: int):
    """log|E_M(w)| with E_M(w) = (1 - w) exp(w + w^2/2 + ... + w^M/M).

    Near w = 0 the closed form cancels to O(|w|^{M+1}) (for every M >= 0); there the tail
    -sum_{j>M} w^j / j of the logarithm series is summed instead.
    """
    w = np.asarray(w, dtype=complex)
    out = np.empty(w.shape, dtype=float)
    small = np.abs(w) < 0.5
    if small.any():
        ws = w[small]
        # 0.5^56 / 56 is below double rounding relative to |w|^{M+1}
        acc = np.zeros_like(ws)
        for j in range(order + 56, order, -1):
            acc = acc * ws + 1.0 / j
        out[small] = -(acc * ws ** (order + 1)).real
    big = ~small
    if big.any():
        wb = w[big]
        poly = np.zeros_like(wb)
        for j in range(order, 0, -1):
            poly = poly * wb + 1.0 / j
        out[big] = np.log(np.abs(1.0 - wb)) + (poly * wb).real
    return out


@dataclass(frozen=True)
class TestFunction:
    """f(z) = exp(g(z)) * prod_rho E_M(z/rho)^mult.

    ``zeros`` holds (rho, multiplicity) pairs, ``coeffs`` the coefficients
    c0, c1, ... of the exponent polynomial g, and ``order`` the Weierstrass
    order M (0 means plain factors 1 - z/rho).
    """

    __test__ = False  # not a pytest class

    zeros: tuple[tuple[complex, int], ...] = ()
    coeffs: tuple[complex, ...] = ()
    order: int = 0

    def __post_init__(self):
        zs = tuple((complex(r), int(k)) for r, k in self.zeros)
        object.__setattr__(self, "zeros", zs)
        object.__setattr__(self, "coeffs", tuple(complex(c) for c in self.coeffs))
        if self.order < 0:
            raise ValueError("Weierstrass order must be nonnegative")
        for rho, mult in zs:
            if rho == 0:
                raise SingularityError("f must not vanish at z = 0")
            if mult < 1:
                raise ValueError("multiplicities must be positive")
            if abs(abs(rho.real) - HALF_PI) < EDGE_TOL:
                raise DomainError(f"zero {rho} lies on the edge of the strip")

    def __mul__(self, other: "TestFunction") -> "TestFunction":
        if self.order != other.order:
            raise ValueError("can only multiply test functions of equal order")
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0j,) * (n - len(self.coeffs))
        b = other.coeffs + (0j,) * (n - len(other.coeffs))
        return TestFunction(
            self.zeros + other.zeros, tuple(x + y for x, y in zip(a, b)), self.order
        )

    @property
    def degree(self) -> int:
        nz = [i for i, c in enumerate(self.coeffs) if c != 0]
        return nz[-1] if nz else 0

    def log_abs(self, z):
        z = np.asarray(z, dtype=complex)
        g = np.zeros_like(z)
        for c in reversed(self.coeffs):
            g = g * z + c
        out = g.real.copy()
        for rho, mult in self.zeros:
            out += mult * log_abs_elementary(z / rho, self.order)
        return out

    def log_abs_at_zero(self) -> float:
        # every E_M(0) = 1
        return self.coeffs[0].real if self.coeffs else 0.0

    def edge_envelope(self) -> Envelope:
        """Bound c(1+|t|)^p on |log|f(+-pi/2 + it)||, each edge separately.

        With |z| <= 2(1+|t|) on the edges: |Re g| <= sum |c_k| 2^k (1+|t|)^k;
        |log|1 - z/rho|| <= |z|/|rho| + |log(|rho|/d)| with d the distance
        from rho to the nearer edge; the exponential part of E_M adds
        sum_j (2/|rho|)^j / j (1+|t|)^j.
        """
        c = sum(abs(ck) * 2.0**k for k, ck in enumerate(self.coeffs))
        p = max(self.degree, self.order, 1)
        for rho, mult in self.zeros:
            r = abs(rho)
            d = min(abs(rho.real - HALF_PI), abs(rho.real + HALF_PI))
            term = 2.0 / r + abs(math.log(r / d))
            term += sum((2.0 / r) ** j / j for j in range(1, self.order + 1))
            c += mult * term
        return Envelope(c, float(p))


@dataclass
class LemmaReport:
    lhs: float
    rhs: float
    residual: float
    lhs_error: float
    contributions: list[float]
    passed: bool = False
    warnings: list[str] = field(default_factory=list)


def J_closed(rho) -> float:
    """Green's function of the strip: log|cot(rho/2)| for |Re rho| < pi/2, else 0."""
    rho = complex(rho)
    if rho == 0:
        raise SingularityError("J is singular at rho = 0")
    if abs(rho.real) >= HALF_PI:
        return 0.0
    # |cot(w)| = |cos w / sin w| with |sin(x+iy)|^2 = sin^2 x + sinh^2 y,
    # |cos(x+iy)|^2 = cos^2 x + sinh^2 y; written this way for large |y|
    x, y = 0.5 * rho.real, 0.5 * rho.imag
    sh2 = math.sinh(y) ** 2 if abs(y) < 350 else math.inf
    if math.isinf(sh2):
        return 0.0
    num = math.cos(x) ** 2 + sh2
    den = math.sin(x) ** 2 + sh2
    # num - den = cos(2x) >= 0 inside the strip
    return 0.5 * math.log1p(math.cos(2 * x) / den) if den > 0 else math.inf


def J_integral(a: float, b: float) -> float:
    """2 cosh(b) int_a^{pi/2} sin x / (cosh 2b - cos 2x) dx, by adaptive quadrature.

    The integrand is odd in x, so for a < 0 the piece over [a, -a] cancels
    (as a principal value when b = 0) and the integral from |a| is used.
    """
    if not -HALF_PI < a <= HALF_PI:
        raise DomainError("J_integral needs -pi/2 < a <= pi/2")
    lo = abs(a)
    if lo == HALF_PI:
        return 0.0
    if lo == 0 and b == 0:
        raise SingularityError("J is singular at rho = 0")
    # cosh 2b - cos 2x = 2 (sinh^2 b + sin^2 x), avoids cancellation near x=b=0
    sh2 = math.sinh(b) ** 2

    def f(x):
        return math.sin(x) / (2.0 * (sh2 + math.sin(x) ** 2))

    points = [p for p in (abs(b),) if lo < p < HALF_PI]
    val, _ = integrate.quad(f, lo, HALF_PI, epsabs=1e-15, epsrel=1e-13, limit=500, points=points or None)
    return 2.0 * math.cosh(b) * val


def _edge_integrand(f: TestFunction):
    def g(t):
        return f.log_abs(-HALF_PI + 1j * t) + f.log_abs(HALF_PI + 1j * t)

    return g


def edge_distance(f: TestFunction) -> float:
    """Distance from the nearest zero to the lines Re z = +-pi/2."""
    return min((abs(abs(rho.real) - HALF_PI) for rho, _ in f.zeros), default=math.inf)


def lemma_lhs(f: TestFunction, q: QuadratureConfig | None = None, target: float = 1e-10) -> QuadResult:
    """Left side (1/2 pi i) int_P log|f| dz/sin z as a sech integral.

    On the right edge z = pi/2 + it, dz = i dt and sin z = cosh t. On the
    left edge z = -pi/2 + it is traversed downward (dz = -i dt after
    reorienting) and sin z = -cosh t, so both edges enter with weight
    dt / (2 pi cosh t):

        lhs = (1/2pi) int (log|f(pi/2+it)| + log|f(-pi/2+it)|) dt / cosh t.

    The edge integrand is analytic in t within the distance d from the
    nearest zero to an edge, and the trapezoid error decays like
    exp(-2 pi d / h). Zeros closer than ``NEAR_EDGE`` raise a
    ConditioningWarning and h is shrunk to keep 2 pi d / h >= 40.
    """
    q = q or QuadratureConfig()
    d = edge_distance(f)
    if d < NEAR_EDGE:
        warnings.warn(f"zero within {d:.3g} of a strip edge; refining mesh", ConditioningWarning, stacklevel=2)
        h = q.h
        while 2 * math.pi * d / h < 40 and h > 1e-4:
            h /= 2
        q = replace(q, h=h)
    env = f.edge_envelope()
    res = sech_integral(_edge_integrand(f), Envelope(2 * env.c, env.p), q, target=2 * math.pi * target)
    scale = 1.0 / (2.0 * math.pi)
    return QuadResult(res.value * scale, res.error * scale, res.h, res.tail * scale)


def lemma_rhs(f: TestFunction) -> float:
    return f.log_abs_at_zero() + sum(k * J_closed(rho) for rho, k in f.zeros)


def verify_lemma(f: TestFunction, q: QuadratureConfig | None = None, tol: float = 1e-8) -> LemmaReport:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", ConditioningWarning)
        lhs = lemma_lhs(f, q, target=tol / 10)
    contrib = [k * J_closed(rho) for rho, k in f.zeros]
    rhs = f.log_abs_at_zero() + sum(contrib)
    residual = abs(lhs.value - rhs)
    return LemmaReport(
        lhs=lhs.value,
        rhs=rhs,
        residual=residual,
        lhs_error=lhs.error,
        contributions=contrib,
        passed=residual <= max(tol, 3 * lhs.error),
        warnings=[str(w.message) for w in caught],
    )


def weierstrass_tail_integral(order: int, radius: complex, q: QuadratureConfig | None = None) -> QuadResult:
    """(1/2pi) int_P |log|E_M(z/rho)|| |dz / sin z|.

    The signed integral vanishes identically for rho outside the strip (it is
    J(rho) = 0 by the identity itself), so decay is measured on the absolute
    integrand, which is what the crude tail estimate actually bounds.
    """
    rho = complex(radius)
    r = abs(rho)
    p = float(max(order, 1))
    c = 2.0 / r + abs(math.log(r / max(abs(rho.real) - HALF_PI, 1e-300)))
    c += sum((2.0 / r) ** j / j for j in range(1, order + 1))

    def g(t):
        a = log_abs_elementary((HALF_PI + 1j * t) / rho, order)
        b = log_abs_elementary((-HALF_PI + 1j * t) / rho, order)
        return np.abs(a) + np.abs(b)

    res = sech_integral(g, Envelope(2 * c, p), q)
    s = 1.0 / (2.0 * math.pi)
    return QuadResult(res.value * s, res.error * s, res.h, res.tail * s)


def weierstrass_tail_decay(order: int, radii: Sequence[float], q: QuadratureConfig | None = None) -> float:
    """Log-log slope of the tail integral of E_M(z/r) against r."""
    radii = [float(r) for r in radii]
    if order < 1:
        raise ValueError("order must be positive")
    if len(radii) < 4 or min(radii) < 4 or max(radii) / min(radii) < 8:
        raise ValueError("need >= 4 radii, all >= 4, spanning a factor >= 8")
    vals = []
    for r in radii:
        res = weierstrass_tail_integral(order, r, q)
        if res.value <= 10 * res.error:
            raise InsufficientSignalError(
                f"tail integral at r={r:g} is below the quadrature noise floor; use smaller radii"
            )
        vals.append(res.value)
    slope, _ = np.polyfit(np.log(radii), np.log(vals), 1)
    return float(slope)


# ----------------------------------------------------------------------------
# corpus: one record per line, "re,im,mult;re,im,mult|c0,c1,...|M"


def format_record(f: TestFunction) -> str:
    zeros = ";".join(f"{rho.real!r},{rho.imag!r},{k}" for rho, k in f.zeros)
    coeffs = ",".join(repr(c.real) if c.imag == 0 else repr(c) for c in f.coeffs)
    return f"{zeros}|{coeffs}|{f.order}"


def parse_record(line: str) -> TestFunction:
    parts = line.strip().split("|")
    if len(parts) != 3:
        raise ValueError(f"malformed corpus record: {line!r}")
    zs, cs, m = parts
    zeros = []
    for item in filter(None, zs.split(";")):
        re_, im_, k = item.split(",")
        zeros.append((complex(float(re_), float(im_)), int(k)))
    coeffs = tuple(complex(c) for c in filter(None, cs.split(",")))
    return TestFunction(tuple(zeros), coeffs, int(m))


def dump_corpus(functions: Iterable[TestFunction]) -> str:
    return "".join(format_record(f) + "\n" for f in functions)


def load_corpus(text: str) -> list[TestFunction]:
    out = []
    for line in text.splitlines():
        if line.strip() and not line.lstrip().startswith("#"):
            out.append(parse_record(line))
    return out


def deterministic_corpus() -> list[TestFunction]:
    """Fixed families: plain zeros, multiplicities, exp(poly), E_M for M = 1, 2, 3."""
    T = TestFunction
    fs = [
        T((), (math.log(2.0),)),
        T((), (0.0, 1.0)),
        T((), (0.0, -1.0, 3.0)),
        T((), (0.5, 0.25j, -0.3, 0.05)),
        T(((math.pi, 1),)),
        T(((0.3, 1),)),
        T(((0.3, 1), (math.pi, 1))),
        T(((0.3 + 0.4j, 1), (0.3 - 0.4j, 1))),
        T(((-1.0 + 2.0j, 2),)),
        T(((0.7j, 3),)),
        T(((1.2 - 0.5j, 1), (-1.3 + 1.0j, 2), (2.5, 1))),
        T(((-0.2, 1), (0.2, 1), (0.05 + 1.5j, 1))),
        T(((1.45, 1),)),
        T(((1.70, 1),)),
        T(((0.4 + 6.0j, 1),)),
        T(((-3.0 + 1.0j, 2), (0.9, 1)), (1.0, 0.5)),
        T(((0.6 - 0.6j, 3), (-2.0, 1)), (0.0, 0.0, -0.5)),
        T(((4.0, 1),), (), 1),
        T(((0.5 + 0.5j, 1), (-4.0, 2)), (0.2,), 1),
        T(((1.0, 1), (-1.0, 1)), (), 1),
        T(((4.0, 1), (4.0j, 1), (-5.0 + 2.0j, 1)), (), 2),
        T(((0.8 + 1.0j, 2),), (0.0, 0.3), 2),
        T(((2.0 + 2.0j, 1), (-0.4 - 0.9j, 1)), (), 2),
        T(((3.0, 1), (-3.0j, 1)), (), 3),
        T(((1.0 + 0.2j, 1), (6.0, 1)), (0.1,), 3),
        T(((0.25, 1), (-0.25, 1), (0.25j, 1), (-0.25j, 1)), (0.0, 0.0, 0.0, 0.0, 0.1)),
        T(((1.1 + 0.1j, 2), (-1.1 + 0.1j, 2)), (complex(0.0, 2.0),)),
    ]
    return fs


def random_function(rng: np.random.Generator, n_zeros: int = 12) -> TestFunction:
    """Half the zeros inside the strip, half outside, at least 0.15 from the edges."""
    inside = n_zeros // 2
    zeros = []
    for i in range(n_zeros):
        sign = rng.choice([-1.0, 1.0])
        if i < inside:
            re_ = rng.uniform(-HALF_PI + 0.15, HALF_PI - 0.15)
        else:
            re_ = sign * rng.uniform(HALF_PI + 0.15, 4.0)
        im_ = rng.uniform(-3.0, 3.0)
        if abs(complex(re_, im_)) < 0.05:
            im_ += 0.5
        zeros.append((complex(re_, im_), int(rng.integers(1, 4))))
    order = int(rng.integers(0, 3))
    deg = int(rng.integers(0, 3))
    coeffs = tuple(complex(*rng.normal(scale=0.3, size=2)) for _ in range(deg + 1))
    return TestFunction(tuple(zeros), coeffs, order)


def random_corpus(seed: int, count: int = 100) -> list[TestFunction]:
    rng = np.random.default_rng(seed)
    return [random_function(rng) for _ in range(count)]
