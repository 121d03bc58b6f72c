"""Gamma factors, the functional-equation frame and the analytic conductor.

A frame bundles gamma(s) = eta Q^s prod_j Gamma(lambda_j s + mu_j + i nu_j)
with the pole order m of F at s = 1. The completed function is
Phi(s) = gamma(s) F(s), expected to satisfy Phi(s) = conj(Phi(1 - conj s)).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .specfun import PoleError, log_gamma

ETA_TOL = 1e-12


@dataclass(frozen=True)
class GammaFactor:
    lam: float
    mu: float = 0.0
    nu: float = 0.0

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError("gamma factor needs lambda > 0")
        # mu >= 0 rather than mu > 0 so Gamma(s/2) for even characters fits
        if not self.mu >= 0:
            raise ValueError("gamma factor needs mu >= 0")


@dataclass(frozen=True)
class Frame:
    eta: complex
    Q: float
    factors: tuple[GammaFactor, ...]
    m: int = 0
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "eta", complex(self.eta))
        object.__setattr__(self, "factors", tuple(self.factors))
        if abs(abs(self.eta) - 1.0) > ETA_TOL:
            raise ValueError(f"|eta| must be 1, got {abs(self.eta)!r}")
        if not self.Q > 0:
            raise ValueError("Q must be positive")
        if not self.factors:
            raise ValueError("a frame needs at least one gamma factor")
        if self.m < 0:
            raise ValueError("pole order must be nonnegative")

    @property
    def degree(self) -> int:
        return len(self.factors)


@dataclass(frozen=True)
class BoundParams:
    delta: float
    kappa: float = field(init=False)

    def __post_init__(self):
        if not 0 < self.delta < 1:
            raise ValueError("delta must lie in (0, 1)")
        object.__setattr__(self, "kappa", (1.0 + 2.0 * self.delta) / math.pi)


def conductor(frame: Frame) -> float:
    """C = Q prod_j (1 + |nu_j|)^lambda_j."""
    c = frame.Q
    for f in frame.factors:
        c *= (1.0 + abs(f.nu)) ** f.lam
    return c


def log_gamma_factor(frame: Frame, s):
    """log gamma(s), accumulated in log space. Not branch-normalised."""
    s = np.asarray(s, dtype=complex)
    out = cmath.log(frame.eta) + s * math.log(frame.Q)
    for j, f in enumerate(frame.factors):
        try:
            out = out + log_gamma(f.lam * s + f.mu + 1j * f.nu)
        except PoleError as exc:
            raise PoleError(f"gamma factor {j} (lambda={f.lam}, mu={f.mu}, nu={f.nu}): {exc}") from None
    return out


def gamma_eval(frame: Frame, s):
    out = np.exp(log_gamma_factor(frame, s))
    return complex(out) if np.ndim(out) == 0 else out


def _log_pole_factor(frame: Frame, s):
    # (s(s-1))^m is invariant under s -> 1 - conj(s) followed by conjugation,
    # and removes the pole of F at 1 together with the matching Gamma pole at 0
    if frame.m == 0:
        return 0.0
    return frame.m * np.log(s * (s - 1.0))


def log_completed(frame: Frame, F: Callable, s):
    s = np.asarray(s, dtype=complex)
    return log_gamma_factor(frame, s) + _log_pole_factor(frame, s) + np.log(F(s))


def completed(frame: Frame, F: Callable, s):
    """Phi(s) = gamma(s) (s(s-1))^m F(s)."""
    out = np.exp(log_completed(frame, F, s))
    return complex(out) if np.ndim(out) == 0 else out


def completed_residual(frame: Frame, F: Callable, s):
    """|Phi(s) - conj Phi(1 - conj s)| / (|Phi(s)| + |Phi(1 - conj s)|)."""
    s = np.asarray(s, dtype=complex)
    a = log_completed(frame, F, s)
    b = np.conj(log_completed(frame, F, 1.0 - np.conj(s)))
    top = np.maximum(a.real, b.real)
    ea, eb = np.exp(a - top), np.exp(b - top)
    out = np.abs(ea - eb) / (np.abs(ea) + np.abs(eb))
    return float(out) if np.ndim(out) == 0 else out


def shift(frame: Frame, t: float) -> Frame:
    """Frame of F_t(s) = F(s + it).

    gamma(s + it) = (eta Q^{it}) Q^s prod Gamma(lambda s + mu + i(nu + lambda t)),
    so each nu_j moves by lambda_j t and the phase Q^{it} folds into eta.
    """
    if t == 0:
        return frame
    factors = tuple(replace(f, nu=f.nu + f.lam * t) for f in frame.factors)
    eta = frame.eta * cmath.exp(1j * t * math.log(frame.Q))
    eta /= abs(eta)
    name = f"{frame.name}@t={t:g}" if frame.name else ""
    return replace(frame, eta=eta, factors=factors, name=name)


@dataclass(frozen=True)
class LFunction:
    """A frame together with an evaluator for F and its Euler log-coefficients.

    ``evaluate`` maps an array of s to F(s). ``log_coeffs(N)`` returns the
    coefficients b_n of log F for n <= N (see dirichlet.EulerLogCoefficients).
    """

    frame: Frame
    evaluate: Callable
    log_coeffs: Optional[Callable] = None
    name: str = ""

    def __call__(self, s):
        return self.evaluate(s)

    def shifted(self, t: float) -> "LFunction":
        base = self

        def evaluate(s):
            return base.evaluate(np.asarray(s, dtype=complex) + 1j * t)

        log_coeffs = None
        if self.log_coeffs is not None:

            def log_coeffs(N, _t=t):
                return base.log_coeffs(N).twisted(_t)

        return LFunction(shift(self.frame, t), evaluate, log_coeffs, f"{self.name}@t={t:g}")


# ----------------------------------------------------------------------------
# serialisation: key=value lines and bare "lambda mu nu" factor lines


def format_frame(frame: Frame) -> str:
    lines = []
    if frame.name:
        lines.append(f"name={frame.name}")
    lines += [
        f"eta_re={frame.eta.real!r}",
        f"eta_im={frame.eta.imag!r}",
        f"Q={frame.Q!r}",
        f"m={frame.m}",
    ]
    lines += [f"{f.lam!r} {f.mu!r} {f.nu!r}" for f in frame.factors]
    return "\n".join(lines) + "\n"


def parse_frame(text: str) -> Frame:
    keys: dict[str, str] = {}
    factors = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" in line:
            k, v = (x.strip() for x in line.split("=", 1))
            keys[k] = v
        else:
            parts = line.split()
            if len(parts) != 3:
                raise ValueError(f"factor line needs 'lambda mu nu': {raw!r}")
            factors.append(GammaFactor(*(float(x) for x in parts)))
    missing = {"eta_re", "eta_im", "Q"} - keys.keys()
    if missing:
        raise ValueError(f"frame is missing keys: {sorted(missing)}")
    return Frame(
        eta=complex(float(keys["eta_re"]), float(keys["eta_im"])),
        Q=float(keys["Q"]),
        factors=tuple(factors),
        m=int(keys.get("m", "0")),
        name=keys.get("name", ""),
    )


def parse_frames(text: str) -> list[Frame]:
    """Several frames separated by blank lines."""
    blocks, cur = [], []
    for line in text.splitlines():
        if line.strip():
            cur.append(line)
        elif cur:
            blocks.append("\n".join(cur))
            cur = []
    if cur:
        blocks.append("\n".join(cur))
    return [parse_frame(b) for b in blocks]
