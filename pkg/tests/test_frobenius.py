"""Excellent Frobenius lifts and the 2x2 Cartier matrix."""

import pytest

from cartier.errors import DomainError
from cartier.families import FamilySpec, PeriodData, canonical_q
from cartier.frobenius import (
    check_lift_hypothesis,
    excellent_lift,
    frobenius_matrix,
    lambda_det_excess,
    lambda_pair,
    structure_residual,
)
from cartier.padic import PadicContext
from cartier.series import reduce_mod
from cartier.sigma import FrobLift


def test_lift_hypothesis_guard():
    with pytest.raises(DomainError):
        check_lift_hypothesis(FamilySpec.simplicial(2), 3)
    with pytest.raises(DomainError):
        check_lift_hypothesis(FamilySpec.hypercubic(3), 3)
    check_lift_hypothesis(FamilySpec.hypercubic(2), 3)
    check_lift_hypothesis(FamilySpec.simplicial(2), 5)


def test_excellent_lift_closed_form_n1():
    # for g = x + 1/x the mirror map is t(q) = q/(1+q^2), so the excellent
    # lift is t^sigma = (q^p/(1+q^{2p})) o q(t)
    p, N, D = 3, 6, 30
    fam = FamilySpec.hypercubic(1)
    periods = PeriodData(fam, D)
    ctx = PadicContext(p, N)
    lift = excellent_lift(fam, periods, ctx)
    q = reduce_mod(canonical_q(periods), ctx)
    qp = q
    for _ in range(p - 1):
        qp = qp * q
    one = qp * 0 + 1
    oracle = qp * (one + qp * qp).invert()
    assert lift.tsigma == oracle


def test_excellent_lift_reduces_to_tp_mod_p():
    fam = FamilySpec.hyperoctahedral(2)
    p, D = 5, 20
    periods = PeriodData(fam, D)
    lift = excellent_lift(fam, periods, PadicContext(p, 4))
    for i, c in enumerate(lift.tsigma.coeffs):
        assert (c - (1 if i == p else 0)) % p == 0


@pytest.mark.parametrize("kind", ["simplicial", "hypercubic", "hyperoctahedral", "an"])
@pytest.mark.parametrize("p", [3, 5, 7])
def test_lambda1_vanishes_for_excellent_lift(kind, p):
    for n in (1, 2):
        fam = FamilySpec.by_name(kind, n)
        try:
            check_lift_hypothesis(fam, p)
        except DomainError:
            continue
        D = 2 * p + 4
        periods = PeriodData(fam, D)
        ctx = PadicContext(p, 4)
        lift = excellent_lift(fam, periods, ctx)
        lam0, lam1 = lambda_pair(fam, periods, lift, ctx)
        assert lam1.is_zero()
        assert lam0.coeffs[0] == 1


def test_lambda1_nonzero_for_tp_lift():
    fam = FamilySpec.hypercubic(2)
    p, D = 3, 18
    periods = PeriodData(fam, D)
    ctx = PadicContext(p, 5)
    lam0, lam1 = lambda_pair(fam, periods, FrobLift.tp(ctx, D), ctx)
    assert not lam1.is_zero()
    # lambda1 is divisible by p (asserted internally, re-checked here)
    assert lam1.min_excess_ord(1) >= 0


@pytest.mark.parametrize("lift_kind", ["tp", "excellent"])
def test_det_Lambda_equals_p_wronskian_ratio(lift_kind):
    fam = FamilySpec.hypercubic(2)
    p, D = 3, 27
    periods = PeriodData(fam, D)
    ctx = PadicContext(p, 6)
    if lift_kind == "tp":
        lift = FrobLift.tp(ctx, D)
    else:
        lift = excellent_lift(fam, periods, ctx)
    data = frobenius_matrix(fam, periods, lift, ctx)
    diff = lambda_det_excess(data)
    assert diff.min_excess_ord(ctx.N) >= 0


def test_structure_residual_vanishes():
    fam = FamilySpec.hyperoctahedral(2)
    p, D = 5, 20
    periods = PeriodData(fam, D)
    ctx = PadicContext(p, 5)
    lift = FrobLift.tp(ctx, D)
    data = frobenius_matrix(fam, periods, lift, ctx)
    R = structure_residual(data)
    for row in R:
        for entry in row:
            assert entry.truncate(D - p).min_excess_ord(ctx.N) >= 0


def test_frobenius_data_lambda0_constant():
    fam = FamilySpec.simplicial(2)
    p, D = 5, 20
    periods = PeriodData(fam, D)
    ctx = PadicContext(p, 4)
    lift = excellent_lift(fam, periods, ctx)
    data = frobenius_matrix(fam, periods, lift, ctx)
    assert data.lambda0.coeffs[0] == 1
    assert data.lambda1.is_zero()
    assert data.Lambda0 == [[1, 0], [0, p]] or data.Lambda0[1][1] == p
