"""Truncated p-adic integer arithmetic against independent oracles."""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from cartier.errors import ConfigError, InvertError, ReductionError
from cartier.padic import (
    PadicContext,
    PadicInt,
    padic_log_unit,
    reduce_fraction,
)


def test_context_rejects_bad_primes():
    for p in (2, 4, 9, 1, -3):
        with pytest.raises(ConfigError):
            PadicContext(p, 2)
    with pytest.raises(ConfigError):
        PadicContext(5, 0)


def test_inverse_oracle_mod_25():
    # 2 * 13 = 26 = 1 mod 25
    ctx = PadicContext(5, 2)
    assert PadicInt(ctx, 2).invert().residue == 13


def test_reduce_fraction_oracle():
    ctx = PadicContext(5, 2)
    # 1/2 mod 25 is 13
    assert reduce_fraction(Fraction(1, 2), ctx) == 13
    # 7/3 mod 25: 3^{-1} = 17, 7*17 = 119 = 19 mod 25
    assert reduce_fraction(Fraction(7, 3), ctx) == 19
    with pytest.raises(ReductionError):
        reduce_fraction(Fraction(1, 10), ctx)


def test_ord_and_divide():
    ctx = PadicContext(3, 5)
    x = PadicInt(ctx, 54)  # 2 * 27
    assert x.ord() == 3
    assert PadicInt(ctx, 0).ord() == 5
    y = x.divide_exact_p(3)
    assert y.residue == 2 and y.ctx.N == 2
    with pytest.raises(ReductionError):
        PadicInt(ctx, 5).divide_exact_p(1)


def test_non_unit_invert_raises():
    ctx = PadicContext(3, 4)
    with pytest.raises(InvertError):
        PadicInt(ctx, 6).invert()


def _log_oracle(u, p, N):
    """Sum the alternating series for log(1+e) over exact rationals."""
    e = Fraction(u - 1)
    acc = Fraction(0)
    for m in range(1, 4 * N + 8):
        acc += (-1) ** (m + 1) * e ** m / m
    return reduce_fraction(acc, PadicContext(p, N))


@pytest.mark.parametrize("p,N", [(3, 5), (5, 6), (7, 4)])
def test_log_unit_oracle(p, N):
    ctx = PadicContext(p, N)
    for k in (1, 2, p - 1, p + 3):
        u = PadicInt(ctx, 1 + k * p)
        assert padic_log_unit(u).residue == _log_oracle(1 + k * p, p, N)


def test_log_unit_requires_one_mod_p():
    ctx = PadicContext(5, 3)
    with pytest.raises(InvertError):
        padic_log_unit(PadicInt(ctx, 2))


@given(a=st.integers(0, 3 ** 4 - 1), b=st.integers(0, 3 ** 4 - 1), c=st.integers(0, 3 ** 4 - 1))
def test_ring_axioms(a, b, c):
    ctx = PadicContext(3, 4)
    x, y, z = PadicInt(ctx, a), PadicInt(ctx, b), PadicInt(ctx, c)
    assert (x + y) + z == x + (y + z)
    assert x + y == y + x
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + (-x) == PadicInt(ctx, 0)


@given(a=st.integers(0, 5 ** 3 - 1))
def test_unit_invert_roundtrip(a):
    ctx = PadicContext(5, 3)
    x = PadicInt(ctx, a)
    if x.is_unit():
        assert x * x.invert() == 1
    else:
        with pytest.raises(InvertError):
            x.invert()


@given(j=st.integers(0, 5 ** 2 - 1), k=st.integers(0, 5 ** 2 - 1))
def test_log_is_a_homomorphism(j, k):
    ctx = PadicContext(5, 3)
    u = PadicInt(ctx, 1 + 5 * j)
    v = PadicInt(ctx, 1 + 5 * k)
    assert padic_log_unit(u * v) == padic_log_unit(u) + padic_log_unit(v)
