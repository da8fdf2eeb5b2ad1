"""Truncated power series: oracles and algebraic properties."""

from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from cartier.errors import (
    DivergenceError,
    DomainError,
    InvertError,
    ReductionError,
    ReversionError,
)
from cartier.padic import PadicContext
from cartier.series import (
    PadicSeries,
    RationalSeries,
    dieudonne_dwork_check,
    divided_power_reverse,
    is_p_integral,
    reduce_mod,
)

small_ints = st.lists(st.integers(-9, 9), min_size=1, max_size=8)


def test_geometric_series_inverse():
    a = RationalSeries([1, -1], 10)  # 1 - t
    inv = a.invert()
    assert inv.coeffs == [Fraction(1)] * 11
    assert (a * inv) == RationalSeries.one(10)


def test_invert_requires_unit_constant():
    with pytest.raises(InvertError):
        RationalSeries([0, 1], 5).invert()
    ctx = PadicContext(3, 3)
    with pytest.raises(InvertError):
        PadicSeries(ctx, [3, 1], 5).invert()


def test_exp_oracle():
    e = RationalSeries.t(8).exp()
    assert e.coeffs == [Fraction(1, factorial(m)) for m in range(9)]


def test_log_exp_roundtrip_rational():
    g = RationalSeries([0, 1, -2, 3, 0, 5], 12)
    assert g.exp().log() == g


def test_log_oracle_padic_vs_rational():
    # log(1 + p t) has p-integral rational coefficients (-1)^{m+1} p^m / m
    p, N, D = 3, 5, 12
    ctx = PadicContext(p, N)
    rat = RationalSeries([1, p], D).log()
    assert is_p_integral(rat, p)
    assert PadicSeries(ctx, [1, p], D).log() == reduce_mod(rat, ctx)


def test_compose_oracle():
    # (1/(1-t)) o t^2 = 1/(1-t^2)
    outer = RationalSeries([1, -1], 10).invert()
    inner = RationalSeries([0, 0, 1], 10)
    got = outer.compose(inner)
    want = RationalSeries([1, 0, -1], 10).invert()
    assert got == want


def test_compose_nonzero_constant_guarded():
    outer = RationalSeries([1, 1], 5)
    inner = RationalSeries([1, 1], 5)
    with pytest.raises(DivergenceError):
        outer.compose(inner)
    # polynomial outer series are allowed to compose with units
    assert outer.compose(inner, outer_polynomial=True) == RationalSeries([2, 1], 5)


def test_reverse_oracle():
    # reverse of t/(1-t) is t/(1+t)
    a = RationalSeries([0] + [1] * 10, 10)
    r = a.reverse()
    want = RationalSeries([0] + [(-1) ** (m - 1) for m in range(1, 11)], 10)
    assert r == want


def test_reverse_requires_normalized_linear_term():
    with pytest.raises(ReversionError):
        RationalSeries([0, 2, 1], 5).reverse()
    with pytest.raises(ReversionError):
        RationalSeries([1, 1], 5).reverse()


@given(cs=small_ints)
@settings(max_examples=60)
def test_reverse_roundtrip_rational(cs):
    a = RationalSeries([0, 1] + cs, 9)
    r = a.reverse()
    t = RationalSeries.t(9)
    assert a.compose(r) == t
    assert r.compose(a) == t


@given(cs=small_ints)
@settings(max_examples=40)
def test_reverse_roundtrip_padic(cs):
    ctx = PadicContext(5, 3)
    a = PadicSeries(ctx, [0, 1] + cs, 9)
    assert a.compose(a.reverse()) == PadicSeries.t(ctx, 9)


@given(a=small_ints, b=small_ints)
@settings(max_examples=60)
def test_reduce_mod_is_a_ring_map(a, b):
    ctx = PadicContext(3, 4)
    D = 7
    x = RationalSeries(a, D)
    y = RationalSeries(b, D)
    assert reduce_mod(x * y, ctx) == reduce_mod(x, ctx) * reduce_mod(y, ctx)
    assert reduce_mod(x + y, ctx) == reduce_mod(x, ctx) + reduce_mod(y, ctx)


def test_reduce_mod_detects_bad_denominator():
    with pytest.raises(ReductionError):
        reduce_mod(RationalSeries([1, Fraction(1, 3)], 4), PadicContext(3, 2))


@given(a=small_ints, b=small_ints)
@settings(max_examples=60)
def test_theta_is_a_derivation(a, b):
    D = 7
    x = RationalSeries(a, D)
    y = RationalSeries(b, D)
    assert (x * y).theta() == x.theta() * y + x * y.theta()


def test_shift_roundtrip_and_guard():
    ctx = PadicContext(3, 3)
    a = PadicSeries(ctx, [5, 7, 1], 8)
    assert a.shift(2).shift_div(2) == a.truncate(6)
    with pytest.raises(DomainError):
        a.shift_div(1)


def test_shift_div_pads_the_top():
    # the top k coefficients after shift_div are unknown and padded with 0
    ctx = PadicContext(3, 3)
    a = PadicSeries(ctx, [0, 0, 1, 2, 2, 2, 2, 2, 2], 8)
    assert a.shift_div(2).coeffs[-2:] == [0, 0]


def test_min_excess_ord():
    ctx = PadicContext(3, 5)
    a = PadicSeries(ctx, [9, 27, 0], 4)
    assert a.min_excess_ord(1) == 1
    assert a.min_excess_ord(2) == 0
    assert a.min_excess_ord(3) == -1
    assert PadicSeries.zero(ctx, 4).min_excess_ord(2) == 3  # N - target


def test_divide_exact_p():
    ctx = PadicContext(3, 4)
    a = PadicSeries(ctx, [9, 18, 27], 4)
    b = a.divide_exact_p(2)
    assert b.ctx.N == 2 and b.coeffs[:3] == [1, 2, 3]
    with pytest.raises(ReductionError):
        PadicSeries(ctx, [3], 2).divide_exact_p(2)


def test_divided_power_reverse_oracle():
    # P(z) = e^z - 1 has r_m = 1; its reverse log(1+z) has s_m = (-1)^{m-1} (m-1)!
    got = divided_power_reverse([1] * 6)
    want = [(-1) ** (m - 1) * factorial(m - 1) for m in range(1, 7)]
    assert got == want


@given(cs=st.lists(st.integers(-6, 6), min_size=0, max_size=6))
@settings(max_examples=60)
def test_divided_power_reverse_integrality_and_involution(cs):
    r = [1] + cs
    s = divided_power_reverse(r)
    assert all(isinstance(x, int) for x in s)
    assert divided_power_reverse(s) == r


def test_dieudonne_dwork_check_positive():
    # g = log(1/(1-t)): exp(g) = 1/(1-t) is integral and so is g - g(t^p)/p
    D = 30
    g = RationalSeries([1, -1], D).invert().log()
    for p in (3, 5):
        ctx = PadicContext(p, 4)
        tp = RationalSeries([0] * p + [1], D)
        assert dieudonne_dwork_check(g, tp, ctx, D) == (True, True)


def test_dieudonne_dwork_check_negative():
    # g = t: exp(t) is not p-integral and t - t^p/p is not p-integral
    D = 20
    g = RationalSeries.t(D)
    ctx = PadicContext(3, 4)
    tp = RationalSeries([0, 0, 0, 1], D)
    assert dieudonne_dwork_check(g, tp, ctx, D) == (False, False)
