"""Fractal string families as exact length sequences and ball unfoldings.

A descriptor carries only the parameters of a family; lengths and
multiplicities are produced lazily from per-family formulas.  For the three
families that live in ``Z_p`` (rational-dimension strings and both Cantor
strings) :func:`unfold` also builds the actual balls generation by
generation, which is what the counting and self-similarity checks run on.
"""

from __future__ import annotations

import enum
import json
import warnings
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import count, islice
from typing import Iterator, Optional, Sequence

from .errors import ArgumentError, DomainError, ResourceLimitError, UnsupportedFamilyError
from .exactnum import PAdicBall, as_rational, digits_of, from_digits, require_prime

#: Default cap on the number of balls :func:`unfold` may materialize.
MAX_BALLS = 2_000_000


class Family(str, enum.Enum):
    RATIONAL_DIM = "RationalDim"
    CANTOR_P = "CantorP"
    CANTOR_2 = "Cantor2"
    SMITH = "SmithReal"
    BASE_P_REAL = "BasePReal"
    EULER = "EulerP"
    HARMONIC = "Harmonic"


class World(str, enum.Enum):
    NONARCHIMEDEAN = "nonarchimedean"
    ARCHIMEDEAN = "archimedean"
    MEASURE = "measure"


FAMILY_ALIASES = {
    "rational": Family.RATIONAL_DIM,
    "rational-dim": Family.RATIONAL_DIM,
    "cantor-p": Family.CANTOR_P,
    "cantor-2": Family.CANTOR_2,
    "smith": Family.SMITH,
    "base-p-real": Family.BASE_P_REAL,
    "euler": Family.EULER,
    "harmonic": Family.HARMONIC,
}


def parse_family(name: str) -> Family:
    key = name.strip()
    for fam in Family:
        if key == fam.value or key.lower() == fam.value.lower():
            return fam
    try:
        return FAMILY_ALIASES[key.lower()]
    except KeyError:
        raise ArgumentError(f"unknown family {name!r}") from None


@dataclass(frozen=True)
class LengthTerm:
    index: int
    length: Fraction
    multiplicity: int


@dataclass(frozen=True)
class FractalStringDesc:
    """Parameters of one string family.

    ``p`` is the prime (``None`` for Smith and harmonic strings), ``m`` the
    block size, or the base for Smith strings.  ``kept`` is the set ``S`` of
    blocks along which rational-dimension strings recurse.
    """

    family: Family
    p: Optional[int]
    m: int
    k: Optional[int] = None
    kept: tuple[int, ...] = ()
    world: World = World.NONARCHIMEDEAN
    flags: tuple[str, ...] = ()

    # -- lengths and multiplicities --------------------------------------

    @property
    def first_index(self) -> int:
        return 0 if self.family is Family.EULER else 1

    @property
    def is_empty(self) -> bool:
        return "degenerate-empty" in self.flags

    @property
    def is_lattice(self) -> bool:
        return self.family is not Family.HARMONIC

    @property
    def scale_base(self) -> int:
        """``q`` with ``l_{n+1} = l_n / q``."""
        f = self.family
        if f is Family.RATIONAL_DIM:
            return self.p**self.m
        if f in (Family.CANTOR_P, Family.BASE_P_REAL, Family.EULER):
            return self.p
        if f is Family.CANTOR_2:
            return 2
        if f is Family.SMITH:
            return self.m
        raise UnsupportedFamilyError("the harmonic string is not a lattice string")

    def length(self, n: int) -> Fraction:
        if n < self.first_index:
            raise ArgumentError(f"index {n} below first index {self.first_index}")
        if self.family is Family.HARMONIC:
            return Fraction(1, n)
        return Fraction(1, self.scale_base**n)

    def multiplicity(self, n: int) -> int:
        if n < self.first_index:
            raise ArgumentError(f"index {n} below first index {self.first_index}")
        f, p = self.family, self.p
        if f is Family.RATIONAL_DIM:
            return (p**self.m - p**self.k) * p ** (self.k * (n - 1))
        if f in (Family.CANTOR_P, Family.BASE_P_REAL):
            return (p - 1) // 2 * ((p + 1) // 2) ** (n - 1)
        if f is Family.SMITH:
            return (self.m - 1) ** (n - 1)
        return 1

    def terms(self, limit: Optional[int] = None) -> Iterator[LengthTerm]:
        """Lazy ``(n, l_n, mu_n)`` stream; ``limit`` caps the number of terms."""
        if self.is_empty:
            return iter(())
        gen = (LengthTerm(n, self.length(n), self.multiplicity(n)) for n in count(self.first_index))
        return islice(gen, limit) if limit is not None else gen

    def partial_length(self, upto: int) -> Fraction:
        """``sum(mu_n * l_n)`` over ``first_index <= n <= upto``."""
        return sum((t.multiplicity * t.length for t in self.terms(max(0, upto - self.first_index + 1))), Fraction(0))

    @property
    def total_length(self) -> Optional[Fraction]:
        """Exact total length, ``None`` when the series diverges."""
        if self.is_empty:
            return Fraction(0)
        if self.family is Family.HARMONIC:
            return None
        if self.family is Family.EULER:
            return Fraction(self.p, self.p - 1)
        return Fraction(1)

    @property
    def fills_unit(self) -> bool:
        """True when the lengths tile ``Z_p`` (or ``[0, 1]``) up to a null set."""
        return not self.is_empty and self.family not in (Family.EULER, Family.HARMONIC)

    def residual_measure(self, generations: int) -> Fraction:
        """Closed-form measure left after removing the first ``generations`` levels."""
        if generations < 0:
            raise ArgumentError("generations must be >= 0")
        f, p, G = self.family, self.p, generations
        if self.is_empty:
            return Fraction(1)
        if f is Family.RATIONAL_DIM:
            return Fraction(p**self.k, p**self.m) ** G
        if f in (Family.CANTOR_P, Family.BASE_P_REAL):
            return Fraction(p + 1, 2 * p) ** G
        if f is Family.CANTOR_2:
            return Fraction(1, 2) ** G
        if f is Family.SMITH:
            return Fraction(self.m - 1, self.m) ** G
        raise UnsupportedFamilyError(f"{f.value} does not fill the unit ball")

    # -- ball structure --------------------------------------------------

    @property
    def block_levels(self) -> int:
        """Number of p-adic digits consumed per generation."""
        return self.m if self.family is Family.RATIONAL_DIM else 1

    def component_blocks(self) -> tuple[int, ...]:
        """Block values whose balls are removed (become string components) each generation."""
        f = self.family
        if f is Family.RATIONAL_DIM:
            keep = set(self.kept)
            return tuple(a for a in range(self.p**self.m) if a not in keep)
        if f is Family.CANTOR_P:
            return tuple(range(1, self.p, 2))
        if f is Family.CANTOR_2:
            return (1,)
        raise UnsupportedFamilyError(f"{f.value} has no ball unfolding")

    def recursion_blocks(self) -> tuple[int, ...]:
        """Block values ``a`` of the recursion maps ``x -> a + p**levels * x``."""
        f = self.family
        if f is Family.RATIONAL_DIM:
            return self.kept
        if f is Family.CANTOR_P:
            return tuple(range(0, self.p, 2))
        if f is Family.CANTOR_2:
            return (0,)
        raise UnsupportedFamilyError(f"{f.value} has no ball unfolding")

    # -- serialization ---------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "family": self.family.value,
            "p": self.p,
            "m": self.m,
            "k": self.k,
            "S": list(self.kept) if self.family is Family.RATIONAL_DIM else None,
            "world": self.world.value,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @property
    def label(self) -> str:
        f = self.family
        if f is Family.RATIONAL_DIM:
            return f"L_{self.p}(m={self.m},k={self.k})"
        if f is Family.CANTOR_P:
            return f"CS_{self.p}"
        if f is Family.CANTOR_2:
            return "CS_2"
        if f is Family.SMITH:
            return f"CS_m(m={self.m})"
        if f is Family.BASE_P_REAL:
            return f"CS*_{self.p}"
        if f is Family.EULER:
            return f"E_{self.p}"
        return "h"


# -- constructors -----------------------------------------------------------


def make_rational_dim(p: int, m: int, k: int, S: Optional[Sequence[int]] = None, diagonal: bool = False) -> FractalStringDesc:
    """String in ``Z_p`` with lengths ``p**(-n*m)`` and dimension ``k/m``.

    ``S`` (default ``{0, ..., p**k - 1}``) is the set of ``m``-digit blocks
    kept for further subdivision; it must have exactly ``p**k`` elements.
    ``diagonal=True`` with ``(m, k) == (2, 1)`` selects ``{j + j*p}``.
    """
    require_prime(p)
    if not isinstance(m, int) or m < 1:
        raise ArgumentError("block size m must be a positive integer")
    if not isinstance(k, int) or not 0 <= k <= m:
        raise ArgumentError("k must be an integer in [0, m]")
    if diagonal:
        if (m, k) != (2, 1):
            raise ArgumentError("the diagonal kept set exists only for m=2, k=1")
        if S is not None:
            raise ArgumentError("give either S or diagonal, not both")
        S = [j + j * p for j in range(p)]
    if S is None:
        S = range(p**k)
    blocks = sorted(int(a) for a in S)
    if len(set(blocks)) != len(blocks):
        raise ArgumentError("kept set has repeated blocks")
    if len(blocks) != p**k:
        raise ArgumentError(f"kept set must have exactly p**k = {p**k} blocks, got {len(blocks)}")
    if blocks and not (0 <= blocks[0] and blocks[-1] < p**m):
        raise ArgumentError(f"block values must lie in [0, {p**m - 1}]")
    flags = ()
    if k == m:
        warnings.warn("k == m: every block is kept and the string is empty", stacklevel=2)
        flags = ("degenerate-empty",)
    return FractalStringDesc(Family.RATIONAL_DIM, p, m, k, tuple(blocks), World.NONARCHIMEDEAN, flags)


def make_cantor_p(p: int) -> FractalStringDesc:
    """p-adic Cantor string: odd leading digits are removed at every level."""
    require_prime(p)
    if p == 2:
        raise ArgumentError("p = 2 has no odd digits but 1; use make_cantor_2")
    return FractalStringDesc(Family.CANTOR_P, p, 1)


def make_cantor_2() -> FractalStringDesc:
    return FractalStringDesc(Family.CANTOR_2, 2, 1)


def make_smith(m: int) -> FractalStringDesc:
    """Smith's general Cantor string in ``[0, 1]`` (``m = 3`` is the Cantor string)."""
    if not isinstance(m, int) or m < 2:
        raise ArgumentError("Smith strings need an integer base m >= 2")
    flags = ("dyadic-degenerate",) if m == 2 else ()
    return FractalStringDesc(Family.SMITH, None, m, world=World.ARCHIMEDEAN, flags=flags)


def make_euler(p: int) -> FractalStringDesc:
    require_prime(p)
    return FractalStringDesc(Family.EULER, p, 1)


def make_base_p_real(p: int) -> FractalStringDesc:
    """Base-p Cantor string in ``[0, 1]``; same lengths as :func:`make_cantor_p`."""
    require_prime(p)
    if p == 2:
        raise ArgumentError("the base-p Cantor string needs an odd prime")
    return FractalStringDesc(Family.BASE_P_REAL, p, 1, world=World.ARCHIMEDEAN)


def make_harmonic() -> FractalStringDesc:
    return FractalStringDesc(Family.HARMONIC, None, 1, world=World.MEASURE)


def from_dict(data: dict) -> FractalStringDesc:
    """Build (and validate) a descriptor from its JSON form."""
    if not isinstance(data, dict) or "family" not in data:
        raise ArgumentError("descriptor must be an object with a 'family' field")
    fam = parse_family(str(data["family"]))

    def need(key):
        value = data.get(key)
        if value is None:
            raise ArgumentError(f"family {fam.value} needs field {key!r}")
        if not isinstance(value, int) or isinstance(value, bool):
            raise ArgumentError(f"field {key!r} must be an integer")
        return value

    if fam is Family.RATIONAL_DIM:
        desc = make_rational_dim(need("p"), need("m"), need("k"), data.get("S"), bool(data.get("diagonal", False)))
    elif fam is Family.CANTOR_P:
        desc = make_cantor_p(need("p"))
    elif fam is Family.CANTOR_2:
        desc = make_cantor_2()
    elif fam is Family.SMITH:
        desc = make_smith(need("m"))
    elif fam is Family.BASE_P_REAL:
        desc = make_base_p_real(need("p"))
    elif fam is Family.EULER:
        desc = make_euler(need("p"))
    else:
        desc = make_harmonic()
    world = data.get("world")
    if world is not None and world != desc.world.value:
        raise ArgumentError(f"family {fam.value} lives in the {desc.world.value} world, not {world!r}")
    return desc


def from_json(text: str) -> FractalStringDesc:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ArgumentError(f"malformed descriptor JSON: {exc}") from exc
    return from_dict(data)


# -- unfolding --------------------------------------------------------------


@dataclass(frozen=True)
class GenerationUnfold:
    """Balls after ``generations`` rounds of subdivision.

    ``kept_by_generation[g]`` holds the string components created at
    generation ``g + 1``; ``residual`` is what is left to subdivide.
    """

    desc: FractalStringDesc
    generations: int
    kept_by_generation: tuple[tuple[PAdicBall, ...], ...]
    residual: tuple[PAdicBall, ...]

    @property
    def kept(self) -> tuple[PAdicBall, ...]:
        return tuple(b for gen in self.kept_by_generation for b in gen)

    @property
    def kept_counts(self) -> list[int]:
        return [len(gen) for gen in self.kept_by_generation]

    @property
    def kept_measure(self) -> Fraction:
        return sum((b.measure for b in self.kept), Fraction(0))

    @property
    def residual_measure(self) -> Fraction:
        return sum((b.measure for b in self.residual), Fraction(0))


def _require_unfoldable(desc: FractalStringDesc) -> None:
    if desc.family not in (Family.RATIONAL_DIM, Family.CANTOR_P, Family.CANTOR_2):
        raise UnsupportedFamilyError(f"{desc.family.value} strings have no p-adic ball unfolding")


def max_generations(desc: FractalStringDesc, max_balls: int = MAX_BALLS, cap: int = 10**6) -> int:
    """Largest ``G <= cap`` whose unfolding stays within ``max_balls`` balls."""
    _require_unfoldable(desc)
    if desc.is_empty:
        return cap
    kept, rec = len(desc.component_blocks()), len(desc.recursion_blocks())
    G, total = 0, 1
    while G < cap:
        nxt = total - rec**G + kept * rec**G + rec ** (G + 1)
        if nxt > max_balls:
            break
        G, total = G + 1, nxt
    return G


def unfold(desc: FractalStringDesc, generations: int, max_balls: int = MAX_BALLS) -> GenerationUnfold:
    """Subdivide ``Z_p`` ``generations`` times, separating kept and residual balls."""
    _require_unfoldable(desc)
    if not isinstance(generations, int) or generations < 1:
        raise ArgumentError("generations must be a positive integer")
    p = desc.p
    root = PAdicBall(p, 0, 0)
    if desc.is_empty:
        # nothing is ever removed; Z_p stays whole
        return GenerationUnfold(desc, generations, tuple(() for _ in range(generations)), (root,))
    if max_generations(desc, max_balls, cap=generations) < generations:
        bound = max_generations(desc, max_balls)
        raise ResourceLimitError(
            f"unfolding {desc.label} to {generations} generations exceeds {max_balls} balls; "
            f"use at most {bound} generations"
        )
    levels = desc.block_levels
    component_set = set(desc.component_blocks())
    residual = [root]
    history = []
    for _ in range(generations):
        new_kept, new_res = [], []
        for ball in residual:
            step = p**ball.k
            for a in range(p**levels):
                child = PAdicBall(p, ball.k + levels, ball.center + a * step)
                (new_kept if a in component_set else new_res).append(child)
        history.append(tuple(new_kept))
        residual = new_res
    return GenerationUnfold(desc, generations, tuple(history), tuple(residual))


def selfsimilar_check(desc: FractalStringDesc, generations: int, max_balls: int = MAX_BALLS) -> bool:
    """Check ``balls(G+1) == gen-1 balls + union of a + p**levels * balls(G)``.

    ``a`` runs over the recursion blocks (``S`` for rational-dimension
    strings, even digits for Cantor strings).  Compared as multisets.
    """
    _require_unfoldable(desc)
    if desc.is_empty:
        return True
    deeper = unfold(desc, generations + 1, max_balls)
    base = unfold(desc, generations, max_balls)
    levels = desc.block_levels
    lhs = Counter(deeper.kept)
    rhs = Counter(deeper.kept_by_generation[0])
    for a in desc.recursion_blocks():
        rhs.update(b.affine_image(a, levels) for b in base.kept)
    return lhs == rhs


# -- Cantor digit structure -------------------------------------------------


@dataclass(frozen=True)
class Membership:
    inside: bool
    first_odd_digit: Optional[int] = None

    def __str__(self) -> str:
        return "in" if self.inside else f"out at digit {self.first_odd_digit}"


def _require_odd_prime(p: int) -> None:
    require_prime(p)
    if p == 2:
        raise ArgumentError("Cantor digit tests need an odd prime")


def cantor_set_membership(x, p: int, depth: int) -> Membership:
    """Depth-``depth`` test of membership in the p-adic Cantor set (all digits even)."""
    _require_odd_prime(p)
    digits = digits_of(x, p, depth).digits
    for j, d in enumerate(digits):
        if d % 2:
            return Membership(False, j)
    return Membership(True)


def homeomorphism_map(digits: Sequence[int], p: int) -> int:
    """Send the real point ``sum a_i p**-i`` to the p-adic integer ``sum a_i p**i``."""
    require_prime(p)
    if any(not 0 <= d < p for d in digits):
        raise ArgumentError(f"digits must lie in [0, {p - 1}]")
    return from_digits(digits, p)


def real_point(digits: Sequence[int], p: int) -> Fraction:
    """The real number ``sum a_i p**-i`` (``a_0`` is the units digit)."""
    return sum((Fraction(d, p**i) for i, d in enumerate(digits)), Fraction(0))


def real_digits(x, p: int, n: int) -> tuple[int, ...]:
    """First ``n`` base-p digits ``a_0, a_1, ...`` of a real ``x`` in ``[0, p)``."""
    x = as_rational(x)
    if not 0 <= x < p:
        raise DomainError(f"{x} is outside [0, {p})")
    out = []
    for _ in range(n):
        d = x.numerator // x.denominator
        out.append(d)
        x = (x - d) * p
    return tuple(out)


def real_cantor_membership(x, p: int, depth: int) -> Membership:
    """Digit test for the base-p real Cantor set."""
    _require_odd_prime(p)
    for j, d in enumerate(real_digits(x, p, depth)):
        if d % 2:
            return Membership(False, j)
    return Membership(True)


# -- adelic approximation ---------------------------------------------------


@dataclass(frozen=True)
class AdelicApprox:
    primes: tuple[int, ...]
    generations: int
    components: dict = field(hash=False)
    selfsimilar: dict = field(hash=False)

    @property
    def residual_product(self) -> Fraction:
        out = Fraction(1)
        for p in self.primes:
            out *= self.components[p].residual_measure
        return out

    @property
    def kept_counts(self) -> dict[int, list[int]]:
        return {p: self.components[p].kept_counts for p in self.primes}


def adelic_approx(primes: Sequence[int], generations: int, max_balls: int = MAX_BALLS) -> AdelicApprox:
    """Finite-prime, finite-depth slice of the product of all p-adic Cantor strings."""
    ps = tuple(sorted(set(primes)))
    if not ps:
        raise ArgumentError("need at least one prime")
    comps, checks = {}, {}
    for p in ps:
        desc = make_cantor_2() if p == 2 else make_cantor_p(p)
        comps[p] = unfold(desc, generations, max_balls)
        checks[p] = selfsimilar_check(desc, generations, max_balls)
    return AdelicApprox(ps, generations, comps, checks)
