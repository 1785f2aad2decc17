import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from padicstrings import strings as fs
from padicstrings import zeta as zf
from padicstrings.errors import DomainError, PoleError, UnsupportedFamilyError

CS3 = fs.make_cantor_p(3)
L221 = fs.make_rational_dim(2, 2, 1)
L321 = fs.make_rational_dim(3, 2, 1)
CS2 = fs.make_cantor_2()
E2 = fs.make_euler(2)

# Reference values from 40-digit mpmath sums of the raw Dirichlet series at s = 1.5 + 2i.
DIRICHLET_REF = {
    "CS_3": complex(-0.11685216279506043, -0.09747675441342797),
    "L_3(m=2,k=1)": complex(-0.08703923148266872, 0.1951210152924922),
    "E_2": complex(0.9395764143152902, -0.3492023074464752),
    "CS_m(m=4)": complex(-0.08883066357874597, -0.024501296802898625),
}


def closed_families():
    out = [CS2, fs.make_smith(4)]
    for p in (2, 3, 5, 7):
        out += [fs.make_rational_dim(p, m, k) for m in (1, 2, 3) for k in range(m)]
        out.append(fs.make_euler(p))
        if p > 2:
            out += [fs.make_cantor_p(p), fs.make_base_p_real(p)]
    return out


FAMILIES = closed_families()


def test_closed_forms():
    z = zf.zeta_of(CS3)
    assert (z.C, z.q, z.r) == (1, 3, 2)
    z = zf.zeta_of(L221)
    assert (z.C, z.q, z.r) == (2, 4, 2)
    e = zf.zeta_of(E2)
    assert zf.evaluate(e, 1) == 2 and zf.evaluate(e, 3) == Fraction(8, 7)
    assert zf.evaluate(zf.zeta_of(fs.make_euler(3)), 1) == Fraction(3, 2)
    assert zf.zeta_of(fs.make_base_p_real(7)) == zf.zeta_of(fs.make_cantor_p(7))


def test_zero_zeta_for_empty():
    with pytest.warns(UserWarning):
        d = fs.make_rational_dim(2, 2, 2)
    with pytest.warns(UserWarning):
        z = zf.zeta_of(d)
    assert isinstance(z, zf.ZeroZeta)
    assert zf.evaluate(z, 3) == 0


def test_evaluate_examples():
    assert zf.evaluate(zf.zeta_of(CS3), 2) == Fraction(1, 7)
    assert zf.evaluate(zf.zeta_of(L221), 1) == 1
    with pytest.raises(PoleError) as info:
        zf.evaluate(zf.zeta_of(CS2), 0)
    assert info.value.nearest.n == 0
    with pytest.raises(PoleError):
        zf.evaluate(zf.zeta_of(E2), 0)


def test_pole_guard_off_axis():
    z = zf.zeta_of(CS3)
    w = zf.lattice_point(z, 3).value
    with pytest.raises(PoleError):
        zf.evaluate(z, w + 1e-12)
    assert abs(zf.evaluate(z, w + 1e-3)) > 1


@pytest.mark.parametrize("desc", [CS3, L321, E2, fs.make_smith(4)], ids=lambda d: d.label)
def test_evaluate_matches_reference_series(desc):
    s = complex(1.5, 2)
    got = zf.evaluate(zf.zeta_of(desc), s)
    assert abs(got - DIRICHLET_REF[desc.label]) < 1e-14


def test_dirichlet_examples():
    r = zf.dirichlet_partial(CS3, 2, 30)
    assert abs(r.value - 1 / 7) < 1e-12
    assert r.exact + r.exact_tail == Fraction(1, 7)
    r = zf.dirichlet_partial(L321, 2, 30)
    assert abs(r.value - 1 / 13) <= r.bound
    r = zf.dirichlet_partial(E2, 2, 40)
    assert abs(r.value - 4 / 3) <= r.bound


def test_dirichlet_divergent_warns():
    with pytest.warns(UserWarning):
        r = zf.dirichlet_partial(CS3, 0.5, 10)
    assert not r.converges


def test_harmonic_truncation_only():
    z = zf.zeta_of(fs.make_harmonic())
    with pytest.raises(UnsupportedFamilyError):
        zf.evaluate(z, 2)
    assert zf.harmonic_partial(2, 3) == Fraction(49, 36)
    r = zf.dirichlet_partial(fs.make_harmonic(), 2, 1000)
    assert abs(r.value - math.pi**2 / 6) <= r.bound


def test_dimension_examples():
    d = zf.dimension(zf.zeta_of(CS3))
    assert d.exact is None and d.value == pytest.approx(0.6309297535714574, abs=1e-15)
    assert zf.dimension(zf.zeta_of(fs.make_rational_dim(5, 3, 2))).exact == Fraction(2, 3)
    assert zf.dimension(zf.zeta_of(CS2)).exact == 0


def test_complex_dimension_examples():
    z = zf.zeta_of(CS3)
    pts = zf.complex_dimensions(z, -10, 10)
    assert [w.n for w in pts] == [-1, 0, 1]
    assert zf.period(z) == pytest.approx(5.719201734760255, abs=1e-14)
    pts = zf.complex_dimensions(zf.zeta_of(L221), 0, 0)
    assert len(pts) == 1 and pts[0].value == 0.5
    assert zf.period(zf.zeta_of(L221)) == pytest.approx(4.532360141827194, abs=1e-14)


@given(st.floats(-50, 50), st.floats(0, 60))
def test_lattice_count_formula(tmin, width):
    z = zf.zeta_of(L321)
    tmax = tmin + width
    per = zf.period(z)
    expected = math.floor(tmax / per) - math.ceil(tmin / per) + 1
    assert len(zf.complex_dimensions(z, tmin, tmax)) == expected


def test_residue_examples():
    r = zf.residue_at(zf.zeta_of(CS3))
    assert r.coefficient == Fraction(1, 2) and r.log_base == 3
    assert r.value == pytest.approx(0.4551196133134187, abs=1e-15)
    assert zf.residue_at(zf.zeta_of(CS2)).value == pytest.approx(1 / math.log(2), rel=1e-15)
    assert zf.residue_at(zf.zeta_of(L221)).value == pytest.approx(0.7213475204444817, abs=1e-15)
    with pytest.raises(DomainError):
        zf.residue_at(zf.zeta_of(CS3), 0.3)


def test_residue_numeric_examples():
    z = zf.zeta_of(CS2)
    w = zf.lattice_point(z, 1).value
    assert abs(zf.residue_numeric(z, w, 1e-6) - 1 / math.log(2)) < 1e-5
    z = zf.zeta_of(CS3)
    assert abs(zf.residue_numeric(z, zf.dimension(z).value, 1e-6) - 0.4551196133134187) < 1e-5


@pytest.mark.parametrize("desc", FAMILIES, ids=lambda d: d.label)
def test_residue_consistency(desc):
    z = zf.zeta_of(desc)
    res = zf.residue_at(z).value
    for n in range(-2, 3):
        assert abs(zf.residue_numeric(z, zf.lattice_point(z, n).value, 1e-6) - res) < 1e-5


@pytest.mark.parametrize("desc", FAMILIES, ids=lambda d: d.label)
def test_periodicity(desc):
    z = zf.zeta_of(desc)
    per = zf.period(z)
    rng = random.Random(desc.label)
    done = 0
    while done < 100:
        s = complex(rng.uniform(-3, 3), rng.uniform(-20, 20))
        try:
            a = zf.evaluate(z, s)
            b = zf.evaluate(z, s + 1j * per)
        except PoleError:
            continue
        assert abs(a - b) <= 1e-12 * max(1.0, abs(a)) * 10
        done += 1


def test_dimension_monotone_in_p():
    ds = [zf.dimension(zf.zeta_of(fs.make_cantor_p(p))).value for p in (3, 5, 7, 11)]
    pers = [zf.period(zf.zeta_of(fs.make_cantor_p(p))) for p in (3, 5, 7, 11)]
    assert ds == sorted(ds) and pers == sorted(pers, reverse=True)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(FAMILIES), st.floats(0.1, 4), st.floats(-30, 30), st.integers(5, 40))
def test_oracle_within_tail_bound(desc, shift, t, N):
    z = zf.zeta_of(desc)
    s = complex(zf.dimension(z).value + shift, t)
    r = zf.dirichlet_partial(desc, s, N)
    closed = zf.evaluate(z, s)
    assert abs(r.value - closed) <= r.bound + 1e-12 * max(1.0, abs(closed))


def test_euler_examples():
    assert zf.euler_partial_product(2, 3, 2) == Fraction(1911, 1296)
    assert zf.euler_partial_product(2, 2, 1) == Fraction(5, 4)
    assert zf.euler_riemann_partial(2, 3, 2) == Fraction(1911, 1296) ** 2
    assert zf.euler_riemann_partial(2, 2, 1) == Fraction(25, 16)
    assert abs(float(zf.euler_partial_product(2, 200, 30)) - math.pi**2 / 6) < 1e-2


@given(st.integers(2, 4), st.sampled_from([2, 3, 5, 7, 11, 13]), st.integers(0, 4))
def test_euler_equals_smooth_sum(s, P, J):
    assert zf.euler_partial_product(s, P, J) == zf.smooth_number_sum(s, P, J)


def test_euler_complex_s():
    s = complex(2, 1)
    assert abs(zf.euler_partial_product(s, 7, 3) - zf.smooth_number_sum(s, 7, 3)) < 1e-13


@pytest.mark.parametrize("family", zf.ADELIC_FAMILIES)
def test_adelic_at_one(family):
    v = zf.adelic_eval_at_one(family, 100)
    assert v.product == 1 and all(f == 1 for _, f in v.factors)


def test_adelic_smith_factor():
    for m in (3, 4, 7):
        v = zf.adelic_eval_at_one("cantor-smith", 30, m)
        assert dict(v.factors)[f"smith m={m}"] == 1


def test_adelic_trends():
    r = zf.adelic_partial_product("l-half", 1, 100)
    assert r.value == 1 and r.trend == "stable"
    assert zf.adelic_partial_product("l-half", 2, 100).trend == "→0"
    assert zf.adelic_partial_product("l-half", 0.6, 100).trend == "→∞"


VENEZIANO_REF = {
    # 40-digit mpmath sums over the spheres |x| = p^n
    (2, -0.6, -0.7): 5.891206153626238,
    (3, -0.9, -0.9): 12.28880333973038,
    (5, -0.3, -0.95): 12.145408713873161,
    (3, -0.5, -0.7): 5.664708995142017,
}


@pytest.mark.parametrize("args, expected", VENEZIANO_REF.items())
def test_veneziano_reference(args, expected):
    assert zf.veneziano_amplitude(*args) == pytest.approx(expected, rel=1e-13)


def test_veneziano_oracle_and_symmetry():
    assert abs(zf.veneziano_ball_sum(2, -0.6, -0.7) - zf.veneziano_amplitude(2, -0.6, -0.7)) < 1e-9
    assert zf.veneziano_amplitude(5, -0.3, -0.95) == pytest.approx(zf.veneziano_amplitude(5, -0.95, -0.3), rel=1e-15)
    with pytest.raises(DomainError):
        zf.veneziano_amplitude(3, -0.2, -0.3)
    with pytest.raises(DomainError):
        zf.veneziano_amplitude(3, -1.2, 0.5)
