"""Exact rational and p-adic primitives.

Rationals are plain :class:`fractions.Fraction` values; they are already
canonical (coprime, positive denominator) and immutable.  Everything here is
a pure function of its arguments.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Union

from .errors import ArgumentError, DomainError

Rational = Union[int, Fraction]

#: Marker for the archimedean place.
INFINITY = math.inf


def as_rational(x) -> Fraction:
    """Coerce ``int``, ``Fraction`` or a ``"num/den"`` string to a Fraction.

    Floats are rejected: they would silently smuggle rounding into exact code.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise ArgumentError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ArgumentError(f"not a rational number: {x!r}") from exc
    raise ArgumentError(f"expected an exact rational, got {type(x).__name__}")


def format_rational(x: Rational) -> str:
    """Render as ``num/den`` (denominator always printed)."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


# -- primes -----------------------------------------------------------------


@lru_cache(maxsize=32)
def _sieve(n: int) -> tuple[int, ...]:
    flags = bytearray([1]) * (n + 1)
    flags[:2] = b"\x00\x00"
    for i in range(2, math.isqrt(n) + 1):
        if flags[i]:
            flags[i * i :: i] = bytes(len(range(i * i, n + 1, i)))
    return tuple(i for i, f in enumerate(flags) if f)


def primes_up_to(n: int) -> list[int]:
    """All primes ``<= n`` by the sieve of Eratosthenes."""
    if n < 2:
        return []
    return list(_sieve(int(n)))


def is_prime(n: int) -> bool:
    if not isinstance(n, int) or isinstance(n, bool) or n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13):
        if n % q == 0:
            return n == q
    # deterministic Miller-Rabin for n < 3.3e24
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        if a % n == 0:
            continue
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def require_prime(p) -> int:
    if not isinstance(p, int) or isinstance(p, bool) or not is_prime(p):
        raise ArgumentError(f"{p!r} is not a prime")
    return p


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of ``|n|`` by trial division over sieved primes."""
    n = abs(int(n))
    if n == 0:
        raise DomainError("cannot factor 0")
    out: dict[int, int] = {}
    bound = math.isqrt(n)
    for q in _sieve(max(bound, 2)):
        if q * q > n:
            break
        if n % q == 0:
            e = 0
            while n % q == 0:
                n //= q
                e += 1
            out[q] = e
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


# -- valuations -------------------------------------------------------------


def _int_ord(n: int, p: int) -> int:
    # Divide out p^(2^i) while possible, then walk back down; O(log v) big divisions.
    if n % p:
        return 0
    v = 0
    powers = [p]
    while n % powers[-1] == 0:
        n //= powers[-1]
        v += 1 << (len(powers) - 1)
        powers.append(powers[-1] * powers[-1])
    for i in range(len(powers) - 2, -1, -1):
        if n % powers[i] == 0:
            n //= powers[i]
            v += 1 << i
    return v


def ord_p(x, p: int) -> int:
    """Exponent of ``p`` in the prime factorization of the nonzero rational ``x``."""
    x = as_rational(x)
    require_prime(p)
    if x == 0:
        raise DomainError("ord_p(0) is undefined")
    return _int_ord(x.numerator, p) - _int_ord(x.denominator, p)


def abs_v(x, place) -> Fraction:
    """Normalized absolute value at a finite prime or at ``INFINITY``.

    ``|x|_p = p**(-ord_p(x))`` so that the product formula holds.
    """
    x = as_rational(x)
    if place == INFINITY or place == "inf":
        return abs(x)
    require_prime(place)
    if x == 0:
        return Fraction(0)
    return Fraction(place) ** (-ord_p(x, place))


def support(x) -> list[int]:
    """Primes dividing the numerator or denominator of ``x``."""
    x = as_rational(x)
    if x == 0:
        raise DomainError("0 has no prime support")
    return sorted(set(factorize(x.numerator)) | set(factorize(x.denominator)))


def artin_whaples_product(x) -> Fraction:
    """``|x|_inf * prod_p |x|_p`` over the primes in the support of ``x``.

    Every other prime contributes a factor 1, so the result is exactly 1.
    """
    x = as_rational(x)
    if x == 0:
        raise DomainError("the product formula needs x != 0")
    result = abs_v(x, INFINITY)
    for p in support(x):
        result *= abs_v(x, p)
    return result


def artin_whaples_sum(x) -> float:
    """Sum of the valuations ``log|x|_v`` over all places (zero up to rounding)."""
    x = as_rational(x)
    if x == 0:
        raise DomainError("the sum formula needs x != 0")
    total = math.log(abs(x.numerator)) - math.log(x.denominator)
    for p in support(x):
        total += -ord_p(x, p) * math.log(p)
    return total


# -- digit expansions -------------------------------------------------------


@dataclass(frozen=True)
class PAdicDigits:
    """Truncated expansion ``sum(digits[j] * p**(start + j))``."""

    p: int
    start: int
    digits: tuple[int, ...]

    def __post_init__(self):
        if any(not 0 <= d < self.p for d in self.digits):
            raise ArgumentError(f"digits out of range for p={self.p}")

    @property
    def precision(self) -> int:
        return self.start + len(self.digits)

    def value(self) -> Fraction:
        return Fraction(from_digits(self.digits, self.p)) * Fraction(self.p) ** self.start


def from_digits(digits: Iterable[int], p: int) -> int:
    """``sum(a_j * p**j)`` for a little-endian digit sequence."""
    total = 0
    for d in reversed(tuple(digits)):
        total = total * p + d
    return total


def residue_mod(x, p: int, n: int) -> int:
    """The integer in ``[0, p**n)`` congruent to the p-adic integer ``x``."""
    x = as_rational(x)
    modulus = p**n
    if x.denominator % p == 0:
        raise DomainError(f"{x} is not a {p}-adic integer")
    return x.numerator * pow(x.denominator, -1, modulus) % modulus


def digits_of(x, p: int, n: int) -> PAdicDigits:
    """First ``n`` p-adic digits ``a_0 .. a_{n-1}`` of a p-adic integer."""
    require_prime(p)
    if n < 1:
        raise ArgumentError("precision must be >= 1")
    x = as_rational(x)
    if x != 0 and x.denominator % p == 0:
        raise DomainError(f"denominator of {x} is divisible by {p}")
    r = residue_mod(x, p, n) if x != 0 else 0
    out = []
    for _ in range(n):
        r, d = divmod(r, p)
        out.append(d)
    return PAdicDigits(p, 0, tuple(out))


def expansion(x, p: int, n: int) -> PAdicDigits:
    """Normalized expansion of a nonzero rational in Q_p with ``n`` digits.

    The leading digit is nonzero and ``start == ord_p(x)``; the unit part is
    expanded with :func:`digits_of`.
    """
    x = as_rational(x)
    if x == 0:
        raise DomainError("0 has no normalized expansion")
    k = ord_p(x, p)
    unit = x / Fraction(p) ** k
    return PAdicDigits(p, k, digits_of(unit, p, n).digits)


# -- balls ------------------------------------------------------------------


class Relation(enum.Enum):
    DISJOINT = "disjoint"
    A_IN_B = "A⊆B"
    B_IN_A = "B⊆A"
    EQUAL = "equal"


@dataclass(frozen=True, slots=True)
class PAdicBall:
    """The coset ``center + p**k Z_p`` inside ``Z_p``; center kept reduced."""

    p: int
    k: int
    center: int

    def __post_init__(self):
        if self.k < 0:
            raise ArgumentError("ball scale must be nonnegative")
        reduced = self.center % self.p**self.k
        if reduced != self.center:
            object.__setattr__(self, "center", reduced)

    @property
    def measure(self) -> Fraction:
        return Fraction(1, self.p**self.k)

    def contains(self, x) -> bool:
        x = as_rational(x)
        if x.denominator % self.p == 0:
            return False
        return residue_mod(x, self.p, self.k) == self.center if self.k else True

    def children(self, levels: int = 1) -> list["PAdicBall"]:
        """The ``p**levels`` disjoint sub-balls one or more levels down."""
        step = self.p**self.k
        return [PAdicBall(self.p, self.k + levels, self.center + a * step) for a in range(self.p**levels)]

    def affine_image(self, shift: int, levels: int) -> "PAdicBall":
        """Image under ``x -> shift + p**levels * x``."""
        return PAdicBall(self.p, self.k + levels, shift + self.p**levels * self.center)

    def leading_digit(self) -> int:
        """The last digit fixed by the ball, i.e. digit ``k - 1`` of the center."""
        if self.k == 0:
            raise DomainError("Z_p fixes no digits")
        return self.center // self.p ** (self.k - 1) % self.p

    def __str__(self) -> str:
        return f"{self.center}+{self.p}^{self.k}Z_{self.p}"


def ball_relation(a: PAdicBall, b: PAdicBall) -> Relation:
    """Ultrametric dichotomy: two balls are nested or disjoint."""
    if a.p != b.p:
        raise ArgumentError("balls live over different primes")
    k = min(a.k, b.k)
    if a.center % a.p**k != b.center % b.p**k:
        return Relation.DISJOINT
    if a.k == b.k:
        return Relation.EQUAL
    return Relation.A_IN_B if a.k > b.k else Relation.B_IN_A
