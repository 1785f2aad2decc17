import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from padicstrings import exactnum as xn
from padicstrings.errors import ArgumentError, DomainError

primes = st.sampled_from([2, 3, 5, 7, 11, 13, 101])
nonzero_ints = st.integers(min_value=-(10**9), max_value=10**9).filter(bool)
nonzero_rats = st.builds(Fraction, nonzero_ints, st.integers(min_value=1, max_value=10**9))


@pytest.mark.parametrize(
    "x, p, expected",
    [(12, 2, 2), (Fraction(-6, 5), 5, -1), (1, 7, 0), (Fraction(3, 8), 2, -3), (2**200 * 3, 2, 200)],
)
def test_ord_examples(x, p, expected):
    assert xn.ord_p(x, p) == expected


def test_ord_errors():
    with pytest.raises(DomainError):
        xn.ord_p(0, 3)
    with pytest.raises(ArgumentError):
        xn.ord_p(5, 4)


@pytest.mark.parametrize(
    "x, place, expected",
    [(12, 2, Fraction(1, 4)), (Fraction(-6, 5), xn.INFINITY, Fraction(6, 5)), (0, 7, 0), (Fraction(-6, 5), "inf", Fraction(6, 5))],
)
def test_abs_examples(x, place, expected):
    assert xn.abs_v(x, place) == expected


def test_artin_examples():
    assert xn.artin_whaples_product(Fraction(-6, 5)) == 1
    assert xn.artin_whaples_product(1) == 1
    for p in (2, 3, 13):
        for k in (-5, 1, 9):
            assert xn.artin_whaples_product(Fraction(p) ** k) == 1
    with pytest.raises(DomainError):
        xn.artin_whaples_product(0)


def test_floats_rejected():
    with pytest.raises(ArgumentError):
        xn.as_rational(0.5)
    assert xn.as_rational("-6/5") == Fraction(-6, 5)
    with pytest.raises(ArgumentError):
        xn.as_rational("six")


def test_primes_match_brute_force():
    brute = [n for n in range(2, 2000) if all(n % d for d in range(2, math.isqrt(n) + 1))]
    assert xn.primes_up_to(1999) == brute
    assert [n for n in range(2000) if xn.is_prime(n)] == brute
    assert xn.is_prime(2**61 - 1) and not xn.is_prime(2**61 + 1)


@given(st.integers(min_value=1, max_value=10**12))
def test_factorize_roundtrip(n):
    f = xn.factorize(n)
    assert math.prod(p**e for p, e in f.items()) == n
    assert all(xn.is_prime(p) for p in f)


@pytest.mark.parametrize(
    "x, p, n, expected",
    [(7, 3, 4, (1, 2, 0, 0)), (0, 5, 3, (0, 0, 0)), (-1, 3, 3, (2, 2, 2)), (Fraction(1, 2), 3, 3, (2, 1, 1))],
)
def test_digits_examples(x, p, n, expected):
    assert xn.digits_of(x, p, n).digits == expected


def test_digits_need_padic_integer():
    with pytest.raises(DomainError):
        xn.digits_of(Fraction(1, 3), 3, 4)


def test_expansion_normalized():
    x = Fraction(5, 18)
    e = xn.expansion(x, 3, 4)
    assert e.start == -2 and e.digits[0] != 0
    assert xn.ord_p(e.value() - x, 3) >= e.precision


@pytest.mark.parametrize(
    "a, b, expected",
    [
        (xn.PAdicBall(3, 1, 1), xn.PAdicBall(3, 2, 4), xn.Relation.B_IN_A),
        (xn.PAdicBall(3, 1, 1), xn.PAdicBall(3, 1, 2), xn.Relation.DISJOINT),
        (xn.PAdicBall(3, 2, 4), xn.PAdicBall(3, 2, 4), xn.Relation.EQUAL),
        (xn.PAdicBall(3, 2, 4), xn.PAdicBall(3, 1, 1), xn.Relation.A_IN_B),
    ],
)
def test_ball_relation_examples(a, b, expected):
    assert xn.ball_relation(a, b) is expected


def test_ball_relation_mismatched_primes():
    with pytest.raises(ArgumentError):
        xn.ball_relation(xn.PAdicBall(2, 1, 0), xn.PAdicBall(3, 1, 0))


def test_ball_center_reduced():
    assert xn.PAdicBall(3, 2, 13) == xn.PAdicBall(3, 2, 4)
    assert str(xn.PAdicBall(2, 3, 4)) == "4+2^3Z_2"


# -- properties ---------------------------------------------------------------


@given(nonzero_rats)
def test_product_formula_exact(x):
    assert xn.artin_whaples_product(x) == 1


@given(nonzero_rats)
def test_sum_formula_vanishes(x):
    assert abs(xn.artin_whaples_sum(x)) < 1e-9


@given(nonzero_rats, nonzero_rats, primes)
def test_ord_additive(x, y, p):
    assert xn.ord_p(x * y, p) == xn.ord_p(x, p) + xn.ord_p(y, p)


@given(nonzero_rats, nonzero_rats, primes)
def test_ultrametric(x, y, p):
    if x + y == 0:
        return
    a, b = xn.ord_p(x, p), xn.ord_p(y, p)
    c = xn.ord_p(x + y, p)
    assert c >= min(a, b)
    if a != b:
        assert c == min(a, b)


@given(nonzero_ints, st.integers(min_value=1, max_value=10**6), primes, st.integers(min_value=1, max_value=40))
def test_digits_reconstruct(num, den, p, n):
    x = Fraction(num, den)
    if x.denominator % p == 0:
        return
    d = xn.digits_of(x, p, n)
    assert all(0 <= a < p for a in d.digits)
    diff = x - d.value()
    assert diff == 0 or xn.ord_p(diff, p) >= n


@given(primes, st.integers(min_value=0, max_value=5), st.integers(min_value=0, max_value=10**6))
def test_children_partition_parent(p, k, c):
    parent = xn.PAdicBall(p, k, c)
    kids = parent.children()
    assert sum(b.measure for b in kids) == parent.measure == Fraction(1, p**k)
    assert all(xn.ball_relation(b, parent) is xn.Relation.A_IN_B for b in kids)
    assert all(xn.ball_relation(a, b) is xn.Relation.DISJOINT for i, a in enumerate(kids) for b in kids[i + 1 :])


@given(primes, st.integers(0, 4), st.integers(0, 10**4), st.integers(0, 4), st.integers(0, 10**4))
def test_balls_nested_or_disjoint(p, k1, c1, k2, c2):
    a, b = xn.PAdicBall(p, k1, c1), xn.PAdicBall(p, k2, c2)
    rel = xn.ball_relation(a, b)
    # a point of the smaller ball decides the relation
    small, big = (a, b) if a.k >= b.k else (b, a)
    inside = big.contains(small.center)
    assert (rel is xn.Relation.DISJOINT) == (not inside)
