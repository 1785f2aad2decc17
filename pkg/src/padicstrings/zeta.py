"""Geometric zeta functions of lattice strings and the product identities.

Every lattice family has a zeta function of the form ``C / (q**s - r)``
(plus a constant for Euler strings).  Poles sit on the vertical line
``Re(s) = log r / log q`` with spacing ``2*pi / log q`` and share the residue
``C / (r log q)``.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Optional, Union

from .errors import ArgumentError, DomainError, PoleError, UnsupportedFamilyError
from .exactnum import ord_p, primes_up_to, require_prime
from .strings import Family, FractalStringDesc, make_cantor_2, make_cantor_p, make_rational_dim, make_smith

Number = Union[int, float, complex]

#: Relative pole guard: evaluation fails when ``|q**s - r| <= POLE_GUARD * (1 + r)``.
POLE_GUARD = 1e-9

#: Largest |s| for which integer arguments take the exact rational path.
EXACT_S_LIMIT = 256


@dataclass(frozen=True)
class ZetaClosedForm:
    """``C / (q**s - r) + const`` with exact parameters."""

    C: Fraction
    q: Fraction
    r: Fraction
    const: Fraction = Fraction(0)
    label: str = field(default="", compare=False)

    def __post_init__(self):
        if self.C == 0:
            raise ArgumentError("closed form needs C != 0; use ZeroZeta")
        if self.q <= 1 or self.r <= 0:
            raise ArgumentError("need q > 1 and r > 0")

    @property
    def log_q(self) -> float:
        return math.log(self.q)

    def formula(self) -> str:
        core = f"{self.C}/({self.q}^s - {self.r})"
        return f"{self.const} + {core}" if self.const else core


@dataclass(frozen=True)
class ZeroZeta:
    """Zeta function of the empty string (``k == m``): identically zero, no poles."""

    label: str = ""


@dataclass(frozen=True)
class HarmonicZeta:
    """Riemann zeta function, known here only through truncated Dirichlet sums."""

    label: str = "h"


AnyZeta = Union[ZetaClosedForm, ZeroZeta, HarmonicZeta]


def zeta_of(desc: FractalStringDesc) -> AnyZeta:
    """Closed-form geometric zeta function of a string family."""
    f, p = desc.family, desc.p
    if desc.is_empty:
        warnings.warn(f"{desc.label} is empty; its zeta function is identically 0", stacklevel=2)
        return ZeroZeta(desc.label)
    if f is Family.RATIONAL_DIM:
        # (p^m - p^k) / (p^{ms} - p^k)
        return ZetaClosedForm(Fraction(p**desc.m - p**desc.k), Fraction(p**desc.m), Fraction(p**desc.k), label=desc.label)
    if f in (Family.CANTOR_P, Family.BASE_P_REAL):
        # (p-1)/(2p^s - p - 1), both halves divided by 2
        return ZetaClosedForm(Fraction(p - 1, 2), Fraction(p), Fraction(p + 1, 2), label=desc.label)
    if f is Family.CANTOR_2:
        return ZetaClosedForm(Fraction(1), Fraction(2), Fraction(1), label=desc.label)
    if f is Family.SMITH:
        return ZetaClosedForm(Fraction(1), Fraction(desc.m), Fraction(desc.m - 1), label=desc.label)
    if f is Family.EULER:
        # 1/(1 - p^-s) = 1 + 1/(p^s - 1)
        return ZetaClosedForm(Fraction(1), Fraction(p), Fraction(1), const=Fraction(1), label=desc.label)
    return HarmonicZeta()


# -- evaluation -------------------------------------------------------------


def _is_int(s) -> bool:
    return isinstance(s, int) and not isinstance(s, bool)


def evaluate(z: AnyZeta, s: Number):
    """Meromorphic value at ``s``.

    Integer ``s`` (``|s| <= EXACT_S_LIMIT``) returns an exact Fraction; anything
    else goes through ``exp``/``log`` and returns a complex number.
    Raises :class:`PoleError` near a pole.
    """
    if isinstance(z, HarmonicZeta):
        raise UnsupportedFamilyError("the Riemann zeta function is only available through dirichlet_partial")
    if isinstance(z, ZeroZeta):
        return Fraction(0) if _is_int(s) else 0j
    if _is_int(s) and abs(s) <= EXACT_S_LIMIT:
        den = z.q**s - z.r
        if den == 0:
            raise PoleError(f"s={s} is a pole of {z.label or z.formula()}", nearest_pole(z, s))
        return z.C / den + z.const
    s = complex(s)
    den = cmath.exp(s * z.log_q) - float(z.r)
    if abs(den) <= POLE_GUARD * (1 + float(z.r)):
        raise PoleError(f"s={s} lies within the pole guard of {z.label or z.formula()}", nearest_pole(z, s))
    return float(z.C) / den + float(z.const)


def _evaluate_unguarded(z: ZetaClosedForm, s: complex) -> complex:
    return float(z.C) / (cmath.exp(s * z.log_q) - float(z.r)) + float(z.const)


# -- dimensions -------------------------------------------------------------


@dataclass(frozen=True)
class Dimension:
    """``D = log(r) / log(q)``; ``exact`` is set when D is rational."""

    r: Fraction
    q: Fraction
    exact: Optional[Fraction]
    value: float


def _rational_log_ratio(r: Fraction, q: Fraction) -> Optional[Fraction]:
    if r == 1:
        return Fraction(0)
    guess = Fraction(math.log(r) / math.log(q)).limit_denominator(1000)
    if guess <= 0:
        return None
    # log r / log q = a/b  <=>  r**b == q**a
    if r**guess.denominator == q**guess.numerator:
        return guess
    return None


def dimension(z: AnyZeta) -> Dimension:
    if not isinstance(z, ZetaClosedForm):
        raise DomainError("only lattice closed forms have a pole lattice")
    exact = _rational_log_ratio(z.r, z.q)
    value = float(exact) if exact is not None else math.log(z.r) / z.log_q
    return Dimension(z.r, z.q, exact, value)


def period(z: AnyZeta) -> float:
    """Oscillatory period ``2*pi / log q``."""
    if not isinstance(z, ZetaClosedForm):
        raise DomainError("only lattice closed forms have a pole lattice")
    return 2 * math.pi / z.log_q


@dataclass(frozen=True)
class ComplexDimension:
    n: int
    D: float
    period: float
    q: Fraction
    r: Fraction

    @property
    def value(self) -> complex:
        return complex(self.D, self.n * self.period)


def lattice_point(z: ZetaClosedForm, n: int) -> ComplexDimension:
    return ComplexDimension(n, dimension(z).value, period(z), z.q, z.r)


def nearest_pole(z: ZetaClosedForm, s: Number) -> ComplexDimension:
    return lattice_point(z, round(complex(s).imag / period(z)))


def complex_dimensions(z: AnyZeta, t_min: float, t_max: float) -> list[ComplexDimension]:
    """Poles with imaginary part in ``[t_min, t_max]``, ordered by ``n``."""
    if isinstance(z, ZeroZeta):
        return []
    if t_min > t_max:
        raise ArgumentError("t_min must not exceed t_max")
    per = period(z)
    lo, hi = math.ceil(t_min / per), math.floor(t_max / per)
    return [lattice_point(z, n) for n in range(lo, hi + 1)]


@dataclass(frozen=True)
class Residue:
    """Residue ``coefficient / log(log_base)``; the same at every pole."""

    coefficient: Fraction
    log_base: Fraction
    value: float


def residue_at(z: AnyZeta, omega: Optional[Number] = None) -> Residue:
    """Exact residue ``C / (r log q)``.  ``omega``, when given, must be a pole."""
    if not isinstance(z, ZetaClosedForm):
        raise DomainError("no poles to take a residue at")
    if omega is not None:
        near = nearest_pole(z, omega).value
        if abs(complex(omega) - near) > 1e-9 * (1 + abs(near)):
            raise DomainError(f"{omega} is not a complex dimension (nearest is {near})")
    coeff = z.C / z.r
    return Residue(coeff, z.q, float(coeff) / z.log_q)


def residue_numeric(z: ZetaClosedForm, omega: Number, h: float = 1e-6) -> complex:
    """Four-point average of ``(s - omega) * zeta(s)`` at ``omega +- h``, ``omega +- ih``.

    Odd and quadratic terms of the Laurent tail cancel, so the error is O(h**4)
    plus rounding of order ``eps / h``.
    """
    omega = complex(omega)
    offsets = (h, -h, 1j * h, -1j * h)
    return sum(d * _evaluate_unguarded(z, omega + d) for d in offsets) / 4


# -- truncated Dirichlet series ---------------------------------------------


@dataclass(frozen=True)
class DirichletPartial:
    """``sum mu_n l_n**s`` over ``n <= N``.

    ``bound`` bounds the absolute tail; ``None`` when the series diverges at
    ``s``.  For integer ``s`` the partial sum and (when convergent) the exact
    geometric tail are also given as Fractions.
    """

    value: complex
    bound: Optional[float]
    exact: Optional[Fraction] = None
    exact_tail: Optional[Fraction] = None

    @property
    def converges(self) -> bool:
        return self.bound is not None


def _term(desc: FractalStringDesc, n: int, s) -> complex:
    mu, length = desc.multiplicity(n), desc.length(n)
    return cmath.exp(math.log(mu) + s * (math.log(length.numerator) - math.log(length.denominator)))


def dirichlet_partial(desc: FractalStringDesc, s: Number, N: int) -> DirichletPartial:
    """Truncated geometric zeta series with a rigorous tail bound.

    The tail ratio is read off the term stream itself (consecutive
    multiplicity and length ratios), not from the closed form.
    """
    first = desc.first_index
    if N < first:
        raise ArgumentError(f"N must be >= {first}")
    if desc.is_empty:
        return DirichletPartial(0j, 0.0, Fraction(0) if _is_int(s) else None, Fraction(0) if _is_int(s) else None)
    sigma = complex(s).real
    exact = exact_tail = None
    if _is_int(s):
        exact = sum((Fraction(desc.multiplicity(n)) * desc.length(n) ** s for n in range(first, N + 1)), Fraction(0))
        value = complex(exact)
    else:
        value = sum(_term(desc, n, complex(s)) for n in range(first, N + 1))

    if desc.is_lattice:
        mu_ratio = Fraction(desc.multiplicity(N + 2), desc.multiplicity(N + 1))
        l_ratio = desc.length(N + 2) / desc.length(N + 1)
        if Fraction(desc.multiplicity(N + 3), desc.multiplicity(N + 2)) != mu_ratio:
            raise DomainError("term stream is not geometric past N")
        rho = float(mu_ratio) * float(l_ratio) ** sigma
        if rho < 1:
            first_tail = abs(_term(desc, N + 1, sigma))
            bound = first_tail / (1 - rho)
            if exact is not None:
                ratio = mu_ratio * l_ratio**s
                exact_tail = desc.multiplicity(N + 1) * desc.length(N + 1) ** s / (1 - ratio)
        else:
            bound = None
    else:
        # harmonic: sum_{n>N} n^-sigma <= N^(1-sigma)/(sigma-1)
        bound = N ** (1 - sigma) / (sigma - 1) if sigma > 1 else None
    if bound is None:
        warnings.warn(f"Dirichlet series of {desc.label} diverges at Re(s)={sigma}; no tail bound", stacklevel=2)
    return DirichletPartial(value, bound, exact, exact_tail)


def harmonic_partial(s: Number, N: int):
    """``sum_{n<=N} n**-s``; exact for integer ``s``."""
    if _is_int(s):
        return sum((Fraction(1, n**s) if s >= 0 else Fraction(n ** (-s)) for n in range(1, N + 1)), Fraction(0))
    return sum(cmath.exp(-complex(s) * math.log(n)) for n in range(1, N + 1))


# -- Euler products ---------------------------------------------------------


def _prime_power_sum(p: int, s, J: int):
    if _is_int(s):
        x = Fraction(1, p**s) if s >= 0 else Fraction(p ** (-s))
        return sum((x**j for j in range(J + 1)), Fraction(0))
    x = cmath.exp(-complex(s) * math.log(p))
    return sum(x**j for j in range(J + 1))


def euler_partial_product(s: Number, P: int, J: int):
    """``prod_{p<=P} sum_{j<=J} p**(-j s)``; exact for integer ``s``."""
    if J < 0:
        raise ArgumentError("J must be >= 0")
    out = Fraction(1) if _is_int(s) else complex(1)
    for p in primes_up_to(P):
        out *= _prime_power_sum(p, s, J)
    return out


def smooth_number_sum(s: Number, P: int, J: int):
    """``sum n**-s`` over ``n = prod p**e_p`` with ``p <= P`` and ``e_p <= J``.

    Enumerates the integers themselves; independent of the product form.
    """
    primes = primes_up_to(P)
    numbers = set()
    for exps in product(range(J + 1), repeat=len(primes)):
        n = 1
        for p, e in zip(primes, exps):
            n *= p**e
        numbers.add(n)
    if len(numbers) != (J + 1) ** len(primes):
        raise AssertionError("distinct exponent vectors gave equal integers")
    if _is_int(s):
        return sum((Fraction(1, n**s) if s >= 0 else Fraction(n ** (-s)) for n in numbers), Fraction(0))
    return sum(cmath.exp(-complex(s) * math.log(n)) for n in sorted(numbers))


def euler_riemann_partial(s: Number, P: int, J: int):
    """Square of the Euler partial product (harmonic string times adelic Euler string)."""
    v = euler_partial_product(s, P, J)
    return v * v


# -- adelic products --------------------------------------------------------

ADELIC_FAMILIES = ("l-half", "cantor-smith")


def adelic_factors(family: str, pmax: int, m: int = 3) -> list[tuple[str, ZetaClosedForm]]:
    """Closed-form factors of the formal adelic product over ``p <= pmax``."""
    if family == "l-half":
        return [(f"p={p}", zeta_of(make_rational_dim(p, 2, 1))) for p in primes_up_to(pmax)]
    if family == "cantor-smith":
        out = [(f"smith m={m}", zeta_of(make_smith(m)))]
        for p in primes_up_to(pmax):
            out.append((f"p={p}", zeta_of(make_cantor_2() if p == 2 else make_cantor_p(p))))
        return out
    raise ArgumentError(f"unknown adelic family {family!r}; choose from {ADELIC_FAMILIES}")


@dataclass(frozen=True)
class AdelicValue:
    factors: tuple[tuple[str, Fraction], ...]
    product: Fraction


def adelic_eval_at_one(family: str, pmax: int = 100, m: int = 3) -> AdelicValue:
    """Evaluate every factor exactly at ``s = 1``; each one equals 1."""
    factors = tuple((name, evaluate(z, 1)) for name, z in adelic_factors(family, pmax, m))
    total = Fraction(1)
    for _, v in factors:
        total *= v
    return AdelicValue(factors, total)


@dataclass(frozen=True)
class AdelicPartial:
    value: Union[Fraction, float]
    trend: str
    tail_log: float


def adelic_partial_product(family: str, s: Union[int, float], P: int, m: int = 3) -> AdelicPartial:
    """Partial product over ``p <= P`` and a divergence diagnosis.

    The trend looks at the summed ``log|factor|`` over the upper half of the
    primes: near zero means ``stable``, negative ``→0``, positive ``→∞``.
    """
    if isinstance(s, complex):
        raise ArgumentError("adelic diagnostics take real s")
    factors = adelic_factors(family, P, m)
    exact = _is_int(s)
    value = Fraction(1) if exact else 1.0
    tail_log = 0.0
    for name, z in factors:
        v = evaluate(z, s)
        value *= v if exact else v.real
        p = int(name.split("=")[1]) if name.startswith("p=") else None
        if p is not None and 2 * p > P:
            tail_log += math.log(abs(float(v) if exact else abs(v.real)))
    if abs(tail_log) <= 1e-12:
        trend = "stable"
    else:
        trend = "→0" if tail_log < 0 else "→∞"
    return AdelicPartial(value, trend, tail_log)


# -- Freund-Witten local amplitude ------------------------------------------


def _check_veneziano(p: int, a: float, b: float) -> None:
    require_prime(p)
    if not (a > -1 and b > -1 and a + b < -1):
        raise DomainError(f"integral diverges unless a > -1, b > -1, a + b < -1 (got a={a}, b={b})")


def veneziano_amplitude(p: int, a: float, b: float) -> float:
    """``int_{Q_p} |x|^a |1-x|^b dx`` in closed form.

    Split ``Q_p`` into ``|x| > 1``, ``|x| < 1``, ``|1-x| < 1`` and the rest;
    on each piece both absolute values are powers of one norm.
    """
    _check_veneziano(p, a, b)
    t1 = p ** (a + b + 1)
    t2 = p ** (-(a + 1))
    t3 = p ** (-(b + 1))
    return (1 - 1 / p) * (t1 / (1 - t1) + t2 / (1 - t2) + t3 / (1 - t3)) + (p - 2) / p


def veneziano_ball_sum(p: int, a: float, b: float, depth: int = 400) -> float:
    """Brute-force integration over a ball partition of ``p**-depth Z_p``.

    Balls avoiding 0 and 1 carry constant ``|x|`` and ``|1-x|``, read off the
    center with :func:`ord_p`; the two balls containing 0 or 1 are split again
    down to radius ``p**-(depth+1)``.  The dropped region contributes
    ``O(t**depth)`` with ``t`` the largest geometric ratio.
    """
    _check_veneziano(p, a, b)
    logp = math.log(p)
    total = 0.0
    frontier = [(Fraction(0), -depth)]
    while frontier:
        center, scale = frontier.pop()
        step = Fraction(p) ** scale
        for j in range(p):
            c = center + j * step
            sub = scale + 1
            near0 = c == 0 or ord_p(c, p) >= sub
            near1 = c == 1 or ord_p(1 - c, p) >= sub
            if near0 or near1:
                if sub <= depth:
                    frontier.append((c, sub))
                continue
            total += math.exp(logp * (-a * ord_p(c, p) - b * ord_p(1 - c, p) - sub))
    return total
