"""Tube volumes of p-adic lattice strings and their Minkowski contents.

Two independent routes to ``V(eps)``:

* :func:`volume_direct` sums the string directly,
  ``V(eps) = (1/p) * sum_{l_j <= eps} mu_j l_j``, exactly in rationals;
* :func:`volume_series` sums the explicit formula over the pole lattice,
  ``sum_w res/p * eps**(1-w) / (1-w)``, in floating point.

Writing ``eps = q**-u`` the direct sum is ``eps**(1-D)`` times a function of
``u`` with period 1 and one jump per period; its Fourier coefficients are
exactly the residue terms, so the series reproduces the step function away
from jumps and its midpoint at a jump.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import ArgumentError, JumpPointError, UnsupportedFamilyError
from .exactnum import as_rational
from .strings import Family, FractalStringDesc, World
from .zeta import ZetaClosedForm, dimension, period, residue_at, zeta_of

#: Distance in ``log eps`` below which a scale counts as a jump point.
JUMP_TOL = 1e-9

TUBE_FAMILIES = (Family.RATIONAL_DIM, Family.CANTOR_P, Family.CANTOR_2, Family.EULER)


def _require_tube(desc: FractalStringDesc) -> ZetaClosedForm:
    if desc.world is not World.NONARCHIMEDEAN or desc.family not in TUBE_FAMILIES:
        raise UnsupportedFamilyError(f"no tube formula for {desc.label} ({desc.world.value} world)")
    if desc.is_empty:
        raise UnsupportedFamilyError(f"{desc.label} is empty (D = 1); tube formulas need D < 1")
    return zeta_of(desc)


def _as_scale(eps) -> Fraction:
    if isinstance(eps, float):
        if not math.isfinite(eps):
            raise ArgumentError("eps must be finite")
        return Fraction(eps)
    return as_rational(eps)


def _check_range(eps: Fraction) -> None:
    if not 0 < eps <= 1:
        raise ArgumentError(f"eps must lie in (0, 1], got {eps}")


def first_index_within(desc: FractalStringDesc, eps: Fraction) -> int:
    """Smallest index ``n`` with ``l_n <= eps``."""
    q = desc.scale_base
    n = max(desc.first_index, math.floor(-math.log(eps) / math.log(q)) - 1)
    while desc.length(n) > eps:
        n += 1
    while n > desc.first_index and desc.length(n - 1) <= eps:
        n -= 1
    return n


def tail_length(desc: FractalStringDesc, start: int) -> Fraction:
    """Exact ``sum_{n >= start} mu_n l_n`` (a geometric series)."""
    t0 = desc.multiplicity(start) * desc.length(start)
    ratio = desc.multiplicity(start + 1) * desc.length(start + 1) / t0
    return t0 / (1 - ratio)


def volume_direct(desc: FractalStringDesc, eps) -> Fraction:
    """Exact tube volume ``(1/p) * sum_{l_j <= eps} mu_j l_j`` for ``0 < eps <= 1``.

    Jump points belong to the upper piece (``l_j <= eps`` is inclusive).
    """
    _require_tube(desc)
    eps = _as_scale(eps)
    _check_range(eps)
    return tail_length(desc, first_index_within(desc, eps)) / desc.p


def is_jump(desc: FractalStringDesc, eps) -> bool:
    """Whether ``log eps`` is within :data:`JUMP_TOL` of some ``log l_j``."""
    log_q = math.log(desc.scale_base)
    u = -math.log(eps) / log_q
    return abs(u - round(u)) * log_q <= JUMP_TOL


def volume_series(desc: FractalStringDesc, eps, N: int = 10_000, smoothing: str = "cesaro") -> float:
    """Explicit tube formula summed over ``|n| <= N`` complex dimensions.

    ``smoothing="cesaro"`` applies Fejér weights ``1 - |n|/(N+1)``.
    """
    value = _series_complex(desc, eps, N, smoothing)
    scale = max(1.0, abs(value.real))
    if abs(value.imag) > 1e-12 * scale:
        raise ArithmeticError(f"series lost conjugate symmetry: imaginary part {value.imag}")
    return value.real


def _series_complex(desc: FractalStringDesc, eps, N: int, smoothing: str) -> complex:
    z = _require_tube(desc)
    if smoothing not in ("none", "cesaro"):
        raise ArgumentError("smoothing must be 'none' or 'cesaro'")
    if N < 0:
        raise ArgumentError("N must be >= 0")
    eps = float(eps)
    if not 0 < eps <= 1:
        raise ArgumentError(f"eps must lie in (0, 1], got {eps}")
    if is_jump(desc, eps):
        raise JumpPointError(f"eps={eps} is a jump of V; the series converges to the midpoint there")
    D = dimension(z).value
    per = period(z)
    res = residue_at(z).value
    n = np.arange(-N, N + 1)
    weights = 1 - np.abs(n) / (N + 1) if smoothing == "cesaro" else np.ones_like(n, dtype=float)
    log_eps = math.log(eps)
    omega_shift = (1 - D) - 1j * n * per
    terms = weights * np.exp(-1j * n * per * log_eps) / omega_shift
    # pair n with -n so the imaginary parts cancel term by term
    paired = terms[N]
    if N:
        paired += (terms[N + 1 :] + terms[N - 1 :: -1]).sum()
    return res / desc.p * eps ** (1 - D) * complex(paired)


def scaling_identity_check(desc: FractalStringDesc, samples: int = 50, seed: int = 0) -> bool:
    """Check ``V(eps/q) == (r/q) V(eps)`` exactly at random rational ``eps``.

    Half of the samples fall in ``(l_1, 1)``, the rest anywhere in ``(0, 1)``.
    ``eps = 1`` itself is excluded: it behaves like a virtual length ``l_0``
    for strings indexed from 1, so ``V(1/q) = V(1)`` there.
    """
    z = _require_tube(desc)
    q = desc.scale_base
    factor = z.r / z.q
    rng = random.Random(seed)
    l1 = desc.length(1)
    for i in range(samples):
        if i % 2 == 0:
            eps = l1 + (1 - l1) * Fraction(rng.randint(1, 10**6 - 1), 10**6)
        else:
            eps = Fraction(rng.randint(1, 10**9), 10**9) / Fraction(q) ** rng.randint(0, 6)
        if volume_direct(desc, eps / q) != factor * volume_direct(desc, eps):
            return False
    return True


# -- Minkowski content ------------------------------------------------------


@dataclass(frozen=True)
class ContentClosed:
    """Average Minkowski content ``coefficient / log(log_arg)``."""

    coefficient: Fraction
    log_arg: Fraction
    value: float
    flags: tuple[str, ...] = ()


def average_content_closed(desc: FractalStringDesc) -> ContentClosed:
    """``res(D) / (p (1 - D))``.

    With ``res = C/(r log q)`` and ``(1 - D) log q = log(q/r)`` this is the
    exact pair ``(C/(r p), q/r)``.
    """
    z = _require_tube(desc)
    coeff = z.C / (z.r * desc.p)
    arg = z.q / z.r
    flags = ("D=0",) if z.r == 1 else ()
    return ContentClosed(coeff, arg, float(coeff) / math.log(arg), flags)


def average_content_numeric(desc: FractalStringDesc, m0: int = 2, K: int = 5) -> float:
    """Logarithmic Cesàro average of ``V(eps) eps**(D-1)`` over ``K`` full periods.

    Integrates over ``[q**-(m0+K), q**-m0]`` piece by piece: on
    ``[l_{n+1}, l_n)`` the volume is constant, so
    ``int V eps**(D-2) deps = V (l_n**(D-1) - l_{n+1}**(D-1)) / (D-1)``.
    """
    z = _require_tube(desc)
    if not isinstance(K, int) or K < 1:
        raise ArgumentError("K must be a positive number of periods")
    if not isinstance(m0, int) or m0 < 0:
        raise ArgumentError("m0 must be a nonnegative integer")
    D = dimension(z).value
    log_q = math.log(desc.scale_base)
    total = 0.0
    for n in range(m0, m0 + K):
        V = float(tail_length(desc, n + 1) / desc.p)
        # l_n**(D-1) = q**(n(1-D))
        hi = math.exp(n * (1 - D) * log_q)
        lo = math.exp((n + 1) * (1 - D) * log_q)
        total += V * (hi - lo) / (D - 1)
    return total / (K * log_q)


@dataclass(frozen=True)
class ContentReport:
    m_av_closed: float
    m_av_numeric: float
    sup: float
    inf: float
    ratio: Fraction
    verdict: str
    flags: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "m_av_closed": self.m_av_closed,
            "m_av_numeric": self.m_av_numeric,
            "sup": self.sup,
            "inf": self.inf,
            "ratio": f"{self.ratio.numerator}/{self.ratio.denominator}",
            "ratio_float": float(self.ratio),
            "verdict": self.verdict,
            "flags": list(self.flags),
        }


def measurability_verdict(ratio) -> str:
    return "not measurable" if ratio > 1 + 1e-9 else "measurable"


def period_extrema(desc: FractalStringDesc, n: int = 1) -> tuple[float, float]:
    """Sup and inf of ``g = V(eps) eps**(D-1)`` over ``[l_{n+1}, l_n)``.

    ``V`` is constant there and ``eps**(D-1)`` decreases, so the sup is
    attained at ``l_{n+1}`` and the inf is the limit at ``l_n``.
    """
    z = _require_tube(desc)
    D = dimension(z).value
    V = float(tail_length(desc, n + 1) / desc.p)
    log_q = math.log(desc.scale_base)
    return V * math.exp((n + 1) * (1 - D) * log_q), V * math.exp(n * (1 - D) * log_q)


def nonmeasurability_witness(desc: FractalStringDesc, m0: int = 2, K: int = 5) -> ContentReport:
    """Oscillation of ``V(eps)/eps**(1-D)``; the exact ratio sup/inf is ``q/r = q**(1-D)``."""
    z = _require_tube(desc)
    closed = average_content_closed(desc)
    sup, inf = period_extrema(desc)
    ratio = z.q / z.r
    return ContentReport(
        closed.value,
        average_content_numeric(desc, m0, K),
        sup,
        inf,
        ratio,
        measurability_verdict(ratio),
        closed.flags,
    )


# -- wave tables ------------------------------------------------------------


@dataclass(frozen=True)
class TubeSample:
    eps: float
    V: Fraction
    g: float
    jump: bool

    @property
    def log_eps(self) -> float:
        return math.log(self.eps)


def log_grid(lo: float, hi: float, n: int) -> list[float]:
    """``n`` log-uniform points from ``lo`` to ``hi`` inclusive."""
    if n < 1:
        raise ArgumentError("grid needs at least one point")
    if not 0 < lo <= hi:
        raise ArgumentError("grid needs 0 < lo <= hi")
    if n == 1:
        return [lo]
    a, b = math.log(lo), math.log(hi)
    return [math.exp(a + (b - a) * i / (n - 1)) for i in range(n)]


def wave_table(desc: FractalStringDesc, lo: float, hi: float, n: int) -> list[TubeSample]:
    """Direct-route samples ``(eps, V, g)`` on a log-uniform grid.

    Points on a jump are flagged ``jump`` so callers can skip the series
    route there; their ``V`` is taken at the exact length ``q**-j`` so that
    float rounding of the grid cannot pick the wrong side of the step.
    """
    z = _require_tube(desc)
    D = dimension(z).value
    q = desc.scale_base
    out = []
    for eps in log_grid(lo, hi, n):
        eps = min(eps, 1.0)
        jump = is_jump(desc, eps)
        V = volume_direct(desc, Fraction(1, q ** round(-math.log(eps) / math.log(q))) if jump else eps)
        out.append(TubeSample(eps, V, float(V) * eps ** (D - 1), jump))
    return out


def relative_error(approx: float, exact) -> Optional[float]:
    exact = float(exact)
    return abs(approx - exact) / abs(exact) if exact else None
