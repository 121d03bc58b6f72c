"""Dirichlet characters, their L-functions and Euler log-coefficients.

Character values are stored as integer exponents k_a with
chi(a) = exp(2 pi i k_a / R), R the exponent of (Z/q)^x, and -1 marking
residues not coprime to q. Everything arithmetic (multiplicativity,
orthogonality, conductors) is therefore exact; floats appear only when a
value is evaluated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .selberg_frame import Frame, GammaFactor, LFunction, completed
from .specfun import DomainError, PoleError, hurwitz_zeta

MAX_IM = 100.0
# Rosser-Schoenfeld: pi(x) < 1.25506 x / log x for x > 1
_PI_X_CONST = 1.25506


class ZeroNotFoundError(RuntimeError):
    pass


# ----------------------------------------------------------------------------
# elementary number theory


@lru_cache(maxsize=8)
def primes_up_to(n: int) -> np.ndarray:
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(n**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve).astype(np.int64)


def factorize(n: int) -> list[tuple[int, int]]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def _primitive_root(p: int) -> int:
    phi = p - 1
    qs = [r for r, _ in factorize(phi)]
    for g in range(2, p):
        if all(pow(g, phi // r, p) != 1 for r in qs):
            return g
    return 1  # p = 2


@dataclass(frozen=True, eq=False)
class _LocalGroup:
    """(Z/p^e)^x as a product of cyclic groups with discrete-log tables."""

    p: int
    e: int
    orders: tuple[int, ...]
    logs: tuple[np.ndarray, ...]  # each of length p^e, -1 off the units
    conductors: np.ndarray  # local conductor p^f per local character index


@lru_cache(maxsize=None)
def _local_group(p: int, e: int) -> _LocalGroup:
    P = p**e
    if p == 2:
        if e == 1:
            orders, logs = (), ()
        elif e == 2:
            lg = np.full(P, -1, dtype=np.int64)
            lg[1], lg[3] = 0, 1
            orders, logs = (2,), (lg,)
        else:
            n5 = 2 ** (e - 2)
            lu = np.full(P, -1, dtype=np.int64)
            lv = np.full(P, -1, dtype=np.int64)
            x = 1
            for v in range(n5):
                lu[x], lv[x] = 0, v
                lu[P - x], lv[P - x] = 1, v
                x = x * 5 % P
            orders, logs = (2, n5), (lu, lv)
    else:
        g = _primitive_root(p)
        if e > 1 and pow(g, p - 1, p * p) == 1:
            g += p
        phi = P - P // p
        lg = np.full(P, -1, dtype=np.int64)
        x = 1
        for k in range(phi):
            lg[x] = k
            x = x * g % P
        orders, logs = (phi,), (lg,)

    # local conductors: smallest p^f such that chi is trivial on units = 1 mod p^f
    if not orders:
        conductors = np.ones(1, dtype=np.int64)
    else:
        table, R = _exponent_table(orders, logs)
        residues = np.arange(P)
        units = logs[0] >= 0
        conductors = np.full(table.shape[0], P, dtype=np.int64)
        done = np.zeros(table.shape[0], dtype=bool)
        for f in range(e + 1):
            mask = units & (residues % p**f == 1 % p**f)
            trivial = np.all(table[:, mask] == 0, axis=1) & ~done
            conductors[trivial] = p**f
            done |= trivial
    return _LocalGroup(p, e, orders, logs, conductors)


def _exponent_table(orders, logs):
    """Exponents mod R of every character (rows) at every residue (columns)."""
    R = math.lcm(*orders) if orders else 1
    K = np.indices(orders).reshape(len(orders), -1).T  # mixed radix, C order
    scaled = K * (R // np.array(orders))[None, :]
    L = np.stack(logs)  # components x residues
    table = (scaled @ np.where(L < 0, 0, L)) % R
    table[:, np.any(L < 0, axis=0)] = -1
    return table, R


# ----------------------------------------------------------------------------
# characters


@dataclass(frozen=True, eq=False)
class DirichletCharacter:
    modulus: int
    index: int
    exponent: int  # R: chi(a) = exp(2 pi i table[a] / R)
    table: np.ndarray
    conductor: int
    parity: int

    @property
    def primitive(self) -> bool:
        return self.conductor == self.modulus

    @property
    def principal(self) -> bool:
        return bool(np.all(self.table[self.table >= 0] == 0))

    def exponent_at(self, n):
        return self.table[np.asarray(n) % self.modulus]

    def __call__(self, n):
        e = self.exponent_at(n)
        out = np.where(e < 0, 0.0, np.exp(2j * np.pi * np.maximum(e, 0) / self.exponent))
        return complex(out) if np.ndim(out) == 0 else out

    def conj(self) -> "DirichletCharacter":
        t = np.where(self.table < 0, -1, (-self.table) % self.exponent)
        return DirichletCharacter(self.modulus, -1, self.exponent, t, self.conductor, self.parity)

    def __repr__(self):
        return (
            f"DirichletCharacter(q={self.modulus}, index={self.index}, "
            f"conductor={self.conductor}, parity={self.parity})"
        )


def characters_mod(q: int) -> list[DirichletCharacter]:
    """All phi(q) characters mod q via the CRT decomposition of (Z/q)^x."""
    if q < 1:
        raise ValueError("modulus must be positive")
    locals_ = [_local_group(p, e) for p, e in factorize(q)]
    residues = np.arange(q)
    orders, logs, owner = [], [], []
    for i, lg in enumerate(locals_):
        for n, log in zip(lg.orders, lg.logs):
            orders.append(n)
            logs.append(log[residues % lg.p**lg.e])
            owner.append(i)
    unit_mask = np.gcd(residues, q) == 1
    if not orders:
        table = np.where(unit_mask, 0, -1)[None, :].astype(np.int64)
        R = 1
        K = np.zeros((1, 0), dtype=np.int64)
    else:
        table, R = _exponent_table(tuple(orders), tuple(logs))
        K = np.indices(orders).reshape(len(orders), -1).T
        # a trivial local factor (p^e = 2) has no log table to mark the non-units
        table[:, ~unit_mask] = -1
    cond = np.ones(table.shape[0], dtype=np.int64)
    owner = np.array(owner, dtype=np.int64)
    for i, lg in enumerate(locals_):
        cols = np.flatnonzero(owner == i)
        if cols.size == 0:
            continue
        local_idx = np.ravel_multi_index(tuple(K[:, cols].T), lg.orders)
        cond *= lg.conductors[local_idx]
    minus_one = table[:, (q - 1) % q]
    parity = np.where(minus_one == 0, 0, 1)
    return [
        DirichletCharacter(q, i, R, table[i].copy(), int(cond[i]), int(parity[i]))
        for i in range(table.shape[0])
    ]


def primitive_characters(q: int, include_principal: bool = False) -> list[DirichletCharacter]:
    return [c for c in characters_mod(q) if c.primitive and (include_principal or not c.principal)]


def principal_character(q: int = 1) -> DirichletCharacter:
    return characters_mod(q)[0]


def gauss_sum(chi: DirichletCharacter) -> complex:
    """tau(chi) = sum_a chi(a) e^{2 pi i a/q}, phases combined exactly before exp."""
    if not chi.primitive:
        raise DomainError("gauss_sum is only defined here for primitive characters")
    q, R = chi.modulus, chi.exponent
    a = np.flatnonzero(chi.table >= 0)
    num = (chi.table[a] * q + a * R) % (R * q)
    return complex(np.exp(2j * np.pi * num / (R * q)).sum())


def root_number(chi: DirichletCharacter) -> complex:
    """epsilon(chi) = tau(chi) / (i^a sqrt q)."""
    return gauss_sum(chi) / (1j**chi.parity * math.sqrt(chi.modulus))


# ----------------------------------------------------------------------------
# L-functions


def zeta_frame() -> Frame:
    return Frame(eta=1.0, Q=math.pi**-0.5, factors=(GammaFactor(0.5, 0.0, 0.0),), m=1, name="zeta")


def frame_for(chi: DirichletCharacter) -> Frame:
    """Frame of L(s, chi) for primitive chi: Q = sqrt(q/pi), Gamma((s+a)/2), eta = eps^{-1/2}."""
    if chi.modulus == 1:
        return zeta_frame()
    if not chi.primitive:
        raise DomainError("only primitive characters have the clean functional equation")
    eps = root_number(chi)
    eta = np.conj(np.sqrt(eps))  # principal root; |eps| = 1 so 1/sqrt = conj(sqrt)
    eta = eta / abs(eta)
    return Frame(
        eta=complex(eta),
        Q=math.sqrt(chi.modulus / math.pi),
        factors=(GammaFactor(0.5, 0.5 * chi.parity, 0.0),),
        m=0,
        name=f"chi_{chi.modulus}_{chi.index}",
    )


def _check_region(s):
    if np.any(np.abs(np.imag(s)) > MAX_IM):
        raise DomainError(f"|Im s| <= {MAX_IM:g} is the evaluator's certified region")


def L_value(chi: DirichletCharacter, s):
    """L(s, chi) = q^{-s} sum_a chi(a) zeta_H(s, a/q)."""
    s = np.asarray(s, dtype=complex)
    _check_region(s)
    q = chi.modulus
    if q == 1:
        out = hurwitz_zeta(s, 1.0)
    else:
        if np.any(s == 1):
            if chi.principal:
                raise PoleError("L(s, chi) has a pole at s = 1 for principal chi")
            raise DomainError("the Hurwitz decomposition is singular at s = 1")
        a = np.flatnonzero(chi.table >= 0)
        vals = chi(a)
        z = hurwitz_zeta(s[..., None], a / q)
        out = np.exp(-s * math.log(q)) * (z @ vals)
    return complex(out) if np.ndim(out) == 0 else out


def L_values_at(chars: Sequence[DirichletCharacter], s: complex) -> np.ndarray:
    """L(s, chi) for many characters of one modulus, sharing the Hurwitz values."""
    if not chars:
        return np.zeros(0, dtype=complex)
    q = chars[0].modulus
    if q == 1:
        return np.array([L_value(c, s) for c in chars])
    _check_region(s)
    a = np.flatnonzero(chars[0].table >= 0)
    z = hurwitz_zeta(complex(s), a / q)
    R = chars[0].exponent
    E = np.stack([c.table[a] for c in chars])
    V = np.exp(2j * np.pi * E / R)
    return q ** (-complex(s)) * (V @ z)


def zeta_function() -> LFunction:
    chi = principal_character(1)
    return LFunction(
        zeta_frame(),
        lambda s: L_value(chi, s),
        lambda N: euler_log_coeffs(chi, N),
        "zeta",
    )


def dirichlet_l_function(chi: DirichletCharacter) -> LFunction:
    if chi.modulus == 1:
        return zeta_function()
    return LFunction(
        frame_for(chi),
        lambda s: L_value(chi, s),
        lambda N: euler_log_coeffs(chi, N),
        f"L(s,chi_{chi.modulus}_{chi.index})",
    )


# ----------------------------------------------------------------------------
# Euler log-coefficients


@dataclass(frozen=True, eq=False)
class EulerLogCoefficients:
    """b_n of log F(s) = sum b_n n^{-s} for prime powers n <= cutoff.

    Beyond the cutoff the coefficients are assumed to satisfy
    |b_{p^k}| <= tail_weight / k, which holds with weight 1 for zeta and
    every Dirichlet L-function.
    """

    cutoff: int
    n: np.ndarray
    values: np.ndarray
    tail_weight: float = 1.0

    @classmethod
    def zero(cls, cutoff: int = 2) -> "EulerLogCoefficients":
        return cls(cutoff, np.zeros(0, dtype=np.int64), np.zeros(0, dtype=complex), 0.0)

    def __getitem__(self, n: int) -> complex:
        if n > self.cutoff:
            raise KeyError(f"b_{n} is beyond the cutoff {self.cutoff}")
        i = np.searchsorted(self.n, n)
        if i < self.n.size and self.n[i] == n:
            return complex(self.values[i])
        return 0j

    def abs_sum(self, sigma: float = 1.5) -> float:
        return float(np.sum(np.abs(self.values) * self.n.astype(float) ** -sigma))

    def tail_sum_bound(self, sigma: float = 1.5) -> float:
        """Upper bound for sum_{n > cutoff} |b_n| n^{-sigma}, sigma > 1.

        Prime powers p^k > N with p <= N: with k0 the least k such that
        p^k > N and x = p^{-sigma}, sum_{k >= k0} x^k/k <= x^k0 / (k0 (1 - x)).
        Primes p > N: sum_k x^k/k <= x / (1 - N^{-sigma}) and, by partial
        summation against pi(x) < 1.25506 x / log x,
        sum_{p > N} p^{-sigma} <= 1.25506 sigma N^{1-sigma} / ((sigma - 1) log N).
        """
        if self.tail_weight == 0:
            return 0.0
        N = self.cutoff
        p = primes_up_to(N)
        k0 = np.ones(p.size, dtype=np.int64)
        power = p.copy()
        while True:
            m = power <= N
            if not m.any():
                break
            k0[m] += 1
            power[m] *= p[m]
        x = p.astype(float) ** -sigma
        small = float(np.sum(x**k0 / (k0 * (1.0 - x))))
        big = _PI_X_CONST * sigma * N ** (1.0 - sigma) / ((sigma - 1.0) * math.log(N))
        big /= 1.0 - N**-sigma
        return self.tail_weight * (small + big)

    @property
    def tail_bound(self) -> float:
        return self.tail_sum_bound(1.5)

    def twisted(self, t: float) -> "EulerLogCoefficients":
        """Coefficients of log F(s + it): b_n n^{-it}."""
        return EulerLogCoefficients(
            self.cutoff, self.n, self.values * np.exp(-1j * t * np.log(self.n.astype(float))), self.tail_weight
        )


def euler_log_coeffs(chi: DirichletCharacter, N: int) -> EulerLogCoefficients:
    """b_{p^k} = chi(p)^k / k for p not dividing q, 0 for p | q."""
    if N < 2:
        raise ValueError("cutoff must be at least 2")
    primes = primes_up_to(N)
    ns, ks, ps = [], [], []
    power = primes.copy()
    k = 1
    alive = np.ones(primes.size, dtype=bool)
    while alive.any():
        alive &= power <= N
        ns.append(power[alive])
        ps.append(primes[alive])
        ks.append(np.full(int(alive.sum()), k))
        with np.errstate(over="ignore"):
            power = np.where(alive, power * primes, N + 1)
        k += 1
    n = np.concatenate(ns)
    p = np.concatenate(ps)
    kk = np.concatenate(ks)
    e = chi.exponent_at(p)
    R = chi.exponent
    vals = np.where(e < 0, 0.0, np.exp(2j * np.pi * ((kk * np.maximum(e, 0)) % R) / R) / kk)
    order = np.argsort(n)
    return EulerLogCoefficients(N, n[order], vals[order], 1.0)


def dirichlet_exp(b: EulerLogCoefficients, N: int) -> np.ndarray:
    """a_1..a_N of exp(sum b_n n^{-s}), returned as a[0..N] with a[0] = 0.

    Differentiating F = exp(B) gives a_n log n = sum_{d | n, d > 1} b_d log d a_{n/d};
    each finished a_m is pushed forward onto its multiples.
    """
    if b.cutoff < N:
        raise ValueError("log-coefficients must be complete up to N")
    keep = b.n <= N
    d = b.n[keep]
    bl = b.values[keep] * np.log(d.astype(float))
    a = np.zeros(N + 1, dtype=complex)
    acc = np.zeros(N + 1, dtype=complex)
    for m in range(1, N + 1):
        if m > 1:
            a[m] = acc[m] / math.log(m)
        else:
            a[1] = 1.0
        if a[m] == 0:
            continue
        lim = N // m
        sel = d <= lim
        np.add.at(acc, d[sel] * m, bl[sel] * a[m])
    return a


# ----------------------------------------------------------------------------
# zeros of zeta on the critical line


def _hardy_sign(t):
    # Phi(1/2 + it) for zeta is real; its sign is that of Z(t) up to a constant
    return completed(zeta_frame(), zeta_function().evaluate, 0.5 + 1j * np.asarray(t, dtype=float)).real


def _bisect(lo: float, hi: float, flo: float, tol: float) -> float:
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = float(_hardy_sign(mid))
        if fm == 0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _brackets(a: float, b: float, step: float):
    t = np.arange(a, b + step / 2, step)
    v = _hardy_sign(t)
    idx = np.flatnonzero(np.sign(v[:-1]) * np.sign(v[1:]) < 0)
    return [(t[i], t[i + 1], v[i]) for i in idx]


def zeta_zero_near(t0: float, window: float = 2.0, tol: float = 1e-9) -> float:
    """Ordinate of the critical-line zero of zeta nearest t0 within +-window."""
    brackets = _brackets(t0 - window, t0 + window, 0.02)
    if not brackets:
        raise ZeroNotFoundError(f"no sign change of Phi(1/2+it) in [{t0 - window:g}, {t0 + window:g}]")
    lo, hi, flo = min(brackets, key=lambda b: abs(0.5 * (b[0] + b[1]) - t0))
    return _bisect(float(lo), float(hi), float(flo), tol)


def zeta_zeros(t_max: float, tol: float = 1e-9) -> list[float]:
    """Critical-line zeros of zeta with 0 < gamma <= t_max, from sign changes."""
    return [_bisect(float(lo), float(hi), float(f), tol) for lo, hi, f in _brackets(1.0, t_max, 0.02)]
