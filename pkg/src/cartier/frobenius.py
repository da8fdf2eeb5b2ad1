"""Frobenius data for a completely symmetric family: the canonical
coordinate mod p^N, the excellent Frobenius lift, the coefficients
lambda0/lambda1 of the Cartier action on 1/f, and the full 2x2 matrix."""

from .errors import ConfigError, DomainError, TheoremViolation
from .families import ab_coefficients, canonical_q, mirror_map
from .padic import PadicInt, padic_log_unit
from .series import PadicSeries, reduce_mod
from .sigma import FrobLift


class FrobeniusData:
    __slots__ = (
        "ctx",
        "family",
        "periods",
        "lift",
        "q",
        "mirror",
        "lambda0",
        "lambda1",
        "Lambda",
        "Lambda0",
        "A",
        "B",
    )

    def __init__(self, ctx, family, periods, lift):
        self.ctx = ctx
        self.family = family
        self.periods = periods
        self.lift = lift
        self.q = None
        self.mirror = None
        self.lambda0 = None
        self.lambda1 = None
        self.Lambda = None
        self.Lambda0 = None
        self.A = None
        self.B = None

    def n_theta(self):
        """N_theta = [[0,1],[A,B]] over exact rationals."""
        return [[None, None], [self.A, self.B]]


def check_lift_hypothesis(family, p):
    """The excellent lift exists when p does not divide
    gamma * #G * [Z^n : support lattice]."""
    prod = family.gamma * family.group_order * family.support_index
    if prod % p == 0:
        raise DomainError(
            "p=%d divides gamma*#G*index = %d for %s n=%d"
            % (p, prod, family.kind, family.n)
        )


def reduced_q(periods, ctx):
    """q(t) and the mirror map t(q) reduced mod p^N.  Raises ReductionError
    if either fails to be p-integral."""
    q = canonical_q(periods)
    tq = q.reverse()
    return reduce_mod(q, ctx), reduce_mod(tq, ctx)


def excellent_lift(family, periods, ctx):
    """t^sigma = t(gamma^{p-1} q(t)^p), the unique lift with lambda1 = 0."""
    check_lift_hypothesis(family, ctx.p)
    qp, tqp = reduced_q(periods, ctx)
    p = ctx.p
    inner = qp
    for _ in range(p - 1):
        inner = inner * qp
    scale = PadicInt(ctx, family.gamma) ** (p - 1)
    inner = inner * scale.residue
    tsigma = tqp.compose(inner)
    lift = FrobLift.from_tsigma(ctx, tsigma, kind="excellent")
    # a Frobenius lift satisfies t^sigma = t^p mod p
    for i, c in enumerate(tsigma.coeffs):
        expected = 1 if i == p else 0
        if (c - expected) % p:
            raise TheoremViolation("t^sigma != t^p mod p at degree %d" % i)
    return lift


def lambda_pair(family, periods, lift, ctx):
    """(lambda0, lambda1) with Phi(1/f) = lambda0/f^sigma + lambda1 theta(1/f)^sigma
    modulo p^2 F_2^sigma.

    lambda1 = F(t) F(t^sigma) W(t^sigma)^{-1} log(w) with
    w = gamma^{p-1} q(t)^p / q(t^sigma), computed from the unit part
    u = q/t so that no logarithm of t appears."""
    p = ctx.p
    F = reduce_mod(periods.F, ctx)
    W = reduce_mod(periods.W, ctx)
    u = reduce_mod(canonical_q(periods).shift_div(1), ctx)
    Fs = lift.on_series(F)
    Ws = lift.on_series(W)
    us = lift.on_series(u)
    up = u
    for _ in range(p - 1):
        up = up * u
    scale = PadicInt(ctx, family.gamma) ** (p - 1)
    w = up * scale.residue * lift.vsigma.invert() * us.invert()
    # v = t^sigma/t^p and u = q/t are zero-padded at the top, so the
    # product is only determined to degree D - p
    w = w.truncate(max(w.D - p, 0))
    for i, c in enumerate(w.coeffs):
        expected = 1 if i == 0 else 0
        if (c - expected) % p:
            raise TheoremViolation("gamma^(p-1) q^p / q^sigma != 1 mod p at degree %d" % i)
    lam1 = F * Fs * Ws.invert() * w.log()
    lam0 = (F - lam1 * lift.on_series(F.theta())) * Fs.invert()
    if lam0.coeffs[0] != 1 % ctx.modulus:
        raise TheoremViolation("lambda0(0) != 1")
    for c in lam1.coeffs:
        if c % p:
            raise TheoremViolation("lambda1 not divisible by p")
    return lam0, lam1


def frobenius_matrix(family, periods, lift, ctx):
    """The 2x2 matrix Lambda of the Cartier operator on (1/f, theta(1/f)).

    The second row is theta of the first plus the connection correction:
    (mu0, mu1) = (theta lambda0, theta lambda1) + c (lambda0, lambda1) N_theta(t^sigma),
    c = theta(t^sigma)/t^sigma."""
    data = FrobeniusData(ctx, family, periods, lift)
    data.q = reduce_mod(canonical_q(periods), ctx)
    A, B = ab_coefficients(periods)
    data.A, data.B = A, B
    lam0, lam1 = lambda_pair(family, periods, lift, ctx)
    data.lambda0, data.lambda1 = lam0, lam1
    c = lift.theta_ratio()
    As = lift.on_series(reduce_mod(A, ctx))
    Bs = lift.on_series(reduce_mod(B, ctx))
    mu0 = lam0.theta() + lam1 * c * As
    mu1 = lam1.theta() + lam0 * c + lam1 * c * Bs
    p = ctx.p
    for co in mu1.coeffs:
        if co % p:
            raise TheoremViolation("mu1 not divisible by p")
    data.Lambda = [[lam0, lam1], [mu0, mu1]]
    alpha1 = padic_log_unit(PadicInt(ctx, family.gamma) ** (p - 1))
    data.Lambda0 = [[1, alpha1.residue], [0, p]]
    return data


def n_theta_sigma(data):
    """N_theta^sigma = (theta(t^sigma)/t^sigma) [[0,1],[A(t^sigma),B(t^sigma)]]."""
    ctx, lift = data.ctx, data.lift
    c = lift.theta_ratio()
    As = lift.on_series(reduce_mod(data.A, ctx))
    Bs = lift.on_series(reduce_mod(data.B, ctx))
    zero = PadicSeries.zero(ctx, c.D)
    return [[zero, c], [c * As, c * Bs]]


def structure_residual(data):
    """N_theta Lambda - Lambda N_theta^sigma - theta(Lambda); zero when the
    Cartier matrix is compatible with the connection."""
    ctx = data.ctx
    L = data.Lambda
    A = reduce_mod(data.A, ctx)
    B = reduce_mod(data.B, ctx)
    D = L[0][0].D
    zero = PadicSeries.zero(ctx, D)
    one = PadicSeries.one(ctx, D)
    N = [[zero, one], [A, B]]
    Ns = n_theta_sigma(data)

    def mul(X, Y):
        return [
            [X[i][0] * Y[0][j] + X[i][1] * Y[1][j] for j in range(2)]
            for i in range(2)
        ]

    NL = mul(N, L)
    LNs = mul(L, Ns)
    return [
        [NL[i][j] - LNs[i][j] - L[i][j].theta() for j in range(2)]
        for i in range(2)
    ]


def lambda_det_excess(data):
    """min excess valuation of det(Lambda) - p W(t)/W(t^sigma)."""
    ctx = data.ctx
    L = data.Lambda
    det = L[0][0] * L[1][1] - L[0][1] * L[1][0]
    W = reduce_mod(data.periods.W, ctx)
    Ws = data.lift.on_series(W)
    target = W * Ws.invert() * ctx.p
    return det - target
