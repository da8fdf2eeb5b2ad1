"""Level-k Hasse-Witt matrices, extended-basis division, CY crystals."""

from math import comb

import pytest

from cartier.errors import ConfigError, DomainError
from cartier.families import FamilySpec
from cartier.hasse_witt import (
    F_k_polynomial,
    cy_hasse_witt,
    extended_basis_division,
    hasse_witt_matrix,
)
from cartier.laurent import LaurentPoly, cartier_poly, poly_pow
from cartier.padic import PadicContext, PadicInt
from cartier.polytope import RegionSpec, lattice_points, newton_polytope
from cartier.series import PadicSeries
from cartier.sigma import FrobLift


def test_F1_is_f_to_p_minus_1():
    ctx = PadicContext(5, 3)
    one = PadicInt(ctx, 1)
    f = LaurentPoly(2, {(0, 0): one, (1, 0): -one, (0, 1): 2 * one})
    lift = FrobLift.identity()
    assert F_k_polynomial(f, lift, 1, ctx) == poly_pow(f, ctx.p - 1)


def test_Fk_requires_k_below_p():
    ctx = PadicContext(3, 2)
    f = LaurentPoly(1, {(0,): PadicInt(ctx, 1), (1,): PadicInt(ctx, 1)})
    with pytest.raises(DomainError):
        F_k_polynomial(f, FrobLift.identity(), 3, ctx)


def test_level1_interval_matrix_is_identity():
    # f = 1 - x on [0,1]: the coefficients of x^{pv-u} in (1-x)^{p-1}
    # are 1 on the diagonal and 0 off it
    for p in (3, 5):
        ctx = PadicContext(p, 3)
        one = PadicInt(ctx, 1)
        f = LaurentPoly(1, {(0,): one, (1,): -one})
        hw = hasse_witt_matrix(
            f, FrobLift.identity(), 1, RegionSpec.full(), "monomial", ctx
        )
        assert hw.basis == [(0,), (1,)]
        assert hw.L_k == 0
        for i in range(2):
            for j in range(2):
                assert hw.entries[i][j] == PadicInt(ctx, 1 if i == j else 0)
        assert hw.hw == PadicInt(ctx, 1)


def _square_f(ctx, Dt):
    one = PadicSeries.one(ctx, Dt)
    t = PadicSeries.t(ctx, Dt)
    return LaurentPoly(2, {(0, 0): one, (1, 0): -one, (0, 1): -one, (1, 1): one - t})


def _half_open_region(P, k):
    strict = [
        i for i, (a, c) in enumerate(P.facets)
        if c == 1 and tuple(a) in ((1, 0), (0, 1))
    ]
    return RegionSpec.from_strict_facets(P, strict, list(range(1, k + 1)))


def test_square_family_level2_structure():
    p, Dt = 3, 12
    ctx = PadicContext(p, 5)
    f = _square_f(ctx, Dt)
    P = newton_polytope(f)
    region = _half_open_region(P, 2)
    lift = FrobLift.tp(ctx, Dt)
    hw = hasse_witt_matrix(f, lift, 2, region, "monomial", ctx)
    assert hw.L_k == 3
    # upper triangular in level-major order
    for i in range(4):
        for j in range(4):
            if j < i:
                assert not hw.entries[i][j]
    assert hw.entries[0][0] == PadicSeries.one(ctx, Dt)


def test_extended_basis_division_identity():
    # divide by the square-family f at the vertex (1,1), whose coefficient
    # 1 - t is a unit
    ctx = PadicContext(3, 4)
    Dt = 9
    one = PadicSeries.one(ctx, Dt)
    t = PadicSeries.t(ctx, Dt)
    f = _square_f(ctx, Dt)
    P_delta = newton_polytope(f)
    region = RegionSpec.full()
    b = (1, 1)
    A = LaurentPoly(
        2, {(2, 2): one, (1, 0): 5 * t, (0, 0): one + t, (2, 1): 3 * one}
    )
    Pq, Q = extended_basis_division(A, f, b, 2, region)
    assert Pq * f + Q == A
    # P is supported in (k-1) Delta, Q avoids b + (k-1) Delta
    lower = set(lattice_points(P_delta, 1, region))
    shifted = {(u[0] + b[0], u[1] + b[1]) for u in lower}
    assert set(Pq.terms) <= lower
    assert not (set(Q.terms) & shifted)


def test_extended_basis_division_needs_unit_pivot():
    ctx = PadicContext(3, 4)
    Dt = 6
    t = PadicSeries.t(ctx, Dt)
    one = PadicSeries.one(ctx, Dt)
    f = LaurentPoly(2, {(0, 0): one, (1, 1): t})  # coefficient at b is not a unit
    with pytest.raises(DomainError):
        extended_basis_division(LaurentPoly.one(2, one), f, (1, 1), 2, RegionSpec.full())


def test_cy_level1_matches_direct_decimation():
    fam = FamilySpec.hyperoctahedral(2)
    p, Dt = 5, 15
    ctx = PadicContext(p, 4)
    lift = FrobLift.tp(ctx, Dt)
    hw = cy_hasse_witt(fam.g, fam.alpha, fam.gamma, lift, 1, ctx, Dt)
    one = PadicSeries.one(ctx, Dt)
    t = PadicSeries.t(ctx, Dt)
    f = LaurentPoly.one(2, one) - fam.g.map_coefficients(lambda c: t * c)
    direct = cartier_poly(F_k_polynomial(f, lift, 1, ctx), p).constant_term(0)
    assert hw.entries[0][0] == direct


def test_cy_level2_dets_agree_across_bases():
    # (f, tg) and (1, tg) span the same space; both determinants realize hw^(2)
    fam = FamilySpec.hypercubic(2)
    p, Dt = 3, 18
    ctx = PadicContext(p, 5)
    lift = FrobLift.tp(ctx, Dt)
    hw_omega = cy_hasse_witt(fam.g, fam.alpha, fam.gamma, lift, 2, ctx, Dt, basis="omega")
    hw_unit = cy_hasse_witt(fam.g, fam.alpha, fam.gamma, lift, 2, ctx, Dt, basis="unit")
    cut = Dt - p  # column 1 entries are only determined below the top p degrees
    assert hw_omega.hw.truncate(cut) == hw_unit.hw.truncate(cut)


def test_cy_guards():
    fam = FamilySpec.hypercubic(2)
    ctx = PadicContext(3, 3)
    lift = FrobLift.tp(ctx, 9)
    with pytest.raises(ConfigError):
        cy_hasse_witt(fam.g, fam.alpha, fam.gamma, lift, 3, ctx, 9)
    ctx5 = PadicContext(5, 3)
    with pytest.raises(ConfigError):
        cy_hasse_witt(fam.g, fam.alpha, fam.gamma, FrobLift.tp(ctx5, 9), 0, ctx5, 9)


def test_hw_json_roundtrip():
    import json

    fam = FamilySpec.hyperoctahedral(2)
    ctx = PadicContext(3, 3)
    lift = FrobLift.tp(ctx, 9)
    hw = cy_hasse_witt(fam.g, fam.alpha, fam.gamma, lift, 2, ctx, 9)
    obj = json.loads(hw.to_json())
    assert obj["level"] == 2 and obj["prime"] == 3 and obj["L_k"] == 1
    assert len(obj["entries"]) == 2
